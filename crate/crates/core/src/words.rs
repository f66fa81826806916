//! Free-group words and the integral group ring.
//!
//! A [`FreeWord`] is always freely reduced. Words do not record the rank of
//! the free group they live in; that is the job of [`FreeGroup`], which
//! validates generator indices on construction and when mixing words.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// A single letter `x_k^{±1}`, stored as `+k` or `-k` with `k >= 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(i32);

impl Letter {
    pub fn new(generator: u32, sign: i8) -> Self {
        assert!(generator >= 1, "generator indices start at 1");
        assert!(sign == 1 || sign == -1, "letter sign must be ±1");
        Letter(generator as i32 * sign as i32)
    }

    pub fn gen(self) -> u32 {
        self.0.unsigned_abs()
    }

    pub fn sign(self) -> i8 {
        if self.0 > 0 {
            1
        } else {
            -1
        }
    }

    pub fn inverse(self) -> Self {
        Letter(-self.0)
    }
}

/// A freely reduced word in the free group.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FreeWord {
    letters: Vec<Letter>,
}

impl FreeWord {
    pub fn empty() -> Self {
        FreeWord::default()
    }

    pub fn generator(k: u32) -> Self {
        FreeWord {
            letters: vec![Letter::new(k, 1)],
        }
    }

    /// Free reduction of an arbitrary letter sequence. Does not check ranks.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(raw: I) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in raw {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        FreeWord { letters: out }
    }

    /// `x_k^e`, expanded into `|e|` letters.
    pub fn power(k: u32, e: i64) -> Self {
        let sign = if e >= 0 { 1 } else { -1 };
        FreeWord {
            letters: vec![Letter::new(k, sign); e.unsigned_abs() as usize],
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Largest generator index occurring in the word (0 for the empty word).
    pub fn max_generator(&self) -> u32 {
        self.letters.iter().map(|l| l.gen()).max().unwrap_or(0)
    }

    pub fn mul(&self, other: &FreeWord) -> FreeWord {
        // Cancel across the seam only; both halves are already reduced.
        let mut k = 0;
        let (a, b) = (&self.letters, &other.letters);
        while k < a.len() && k < b.len() && a[a.len() - 1 - k] == b[k].inverse() {
            k += 1;
        }
        let mut letters = Vec::with_capacity(a.len() + b.len() - 2 * k);
        letters.extend_from_slice(&a[..a.len() - k]);
        letters.extend_from_slice(&b[k..]);
        FreeWord { letters }
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    /// `u v u^{-1} v^{-1}`.
    pub fn commutator(u: &FreeWord, v: &FreeWord) -> FreeWord {
        u.mul(v).mul(&u.inverse()).mul(&v.inverse())
    }

    /// `u w u^{-1}`.
    pub fn conjugate_by(&self, u: &FreeWord) -> FreeWord {
        u.mul(self).mul(&u.inverse())
    }

    /// Exponent sum of generator `k`.
    pub fn exponent_sum(&self, k: u32) -> i64 {
        self.letters
            .iter()
            .filter(|l| l.gen() == k)
            .map(|l| l.sign() as i64)
            .sum()
    }

    /// Run-length form: `(generator, exponent)` pairs with nonzero exponents.
    pub fn runs(&self) -> Vec<(u32, i64)> {
        let mut out: Vec<(u32, i64)> = Vec::new();
        for l in &self.letters {
            match out.last_mut() {
                Some((g, e)) if *g == l.gen() => *e += l.sign() as i64,
                _ => out.push((l.gen(), l.sign() as i64)),
            }
        }
        out
    }

    /// Replace every letter `x_k^{±1}` by `image(k)^{±1}`.
    pub fn substitute<F: Fn(u32) -> FreeWord>(&self, image: F) -> FreeWord {
        let mut acc = FreeWord::empty();
        for (g, e) in self.runs() {
            let w = image(g);
            let w = if e < 0 { w.inverse() } else { w };
            for _ in 0..e.unsigned_abs() {
                acc = acc.mul(&w);
            }
        }
        acc
    }
}

impl serde::Serialize for FreeWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl fmt::Display for FreeWord {
    /// Prints in the parse syntax, e.g. `x1 x2^-1 x3^2`; the empty word prints as `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .runs()
            .into_iter()
            .map(|(g, e)| {
                if e == 1 {
                    format!("x{g}")
                } else {
                    format!("x{g}^{e}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// The free group of a fixed rank; validates indices of words built through it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FreeGroup {
    rank: u32,
}

impl FreeGroup {
    pub fn new(rank: u32) -> Self {
        FreeGroup { rank }
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn generators(&self) -> Vec<FreeWord> {
        (1..=self.rank).map(FreeWord::generator).collect()
    }

    pub fn reduce(&self, raw: &[(u32, i8)]) -> Result<FreeWord> {
        let mut letters = Vec::with_capacity(raw.len());
        for &(g, s) in raw {
            if g == 0 || g > self.rank {
                return Err(Error::GeneratorOutOfRange {
                    index: g,
                    rank: self.rank,
                });
            }
            if s != 1 && s != -1 {
                return Err(Error::Parse(format!("letter sign must be ±1, got {s}")));
            }
            letters.push(Letter::new(g, s));
        }
        Ok(FreeWord::from_letters(letters))
    }

    pub fn check(&self, w: &FreeWord) -> Result<()> {
        let m = w.max_generator();
        if m > self.rank {
            return Err(Error::GeneratorOutOfRange {
                index: m,
                rank: self.rank,
            });
        }
        Ok(())
    }

    pub fn multiply(&self, u: &FreeWord, v: &FreeWord) -> Result<FreeWord> {
        self.check(u)?;
        self.check(v)?;
        Ok(u.mul(v))
    }

    pub fn commutator(&self, u: &FreeWord, v: &FreeWord) -> Result<FreeWord> {
        self.check(u)?;
        self.check(v)?;
        Ok(FreeWord::commutator(u, v))
    }

    /// Parses whitespace separated tokens `x<k>`, `x<k>^-1`, `x<k>^<m>`.
    /// The literal `1` denotes the empty word.
    pub fn parse_word(&self, text: &str) -> Result<FreeWord> {
        let mut letters = Vec::new();
        for tok in text.split_whitespace() {
            if tok == "1" {
                continue;
            }
            let body = tok
                .strip_prefix('x')
                .ok_or_else(|| Error::Parse(format!("malformed token `{tok}`")))?;
            let (gen_s, exp) = match body.split_once('^') {
                Some((g, e)) => {
                    let e: i64 = e
                        .parse()
                        .map_err(|_| Error::Parse(format!("malformed exponent in `{tok}`")))?;
                    (g, e)
                }
                None => (body, 1),
            };
            let g: u32 = gen_s
                .parse()
                .map_err(|_| Error::Parse(format!("malformed generator in `{tok}`")))?;
            if g == 0 || g > self.rank {
                return Err(Error::GeneratorOutOfRange {
                    index: g,
                    rank: self.rank,
                });
            }
            let sign = if exp >= 0 { 1 } else { -1 };
            for _ in 0..exp.unsigned_abs() {
                letters.push(Letter::new(g, sign));
            }
        }
        Ok(FreeWord::from_letters(letters))
    }
}

/// An element of the integral group ring `Z[F]`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GroupRingElt {
    terms: BTreeMap<FreeWord, i64>,
}

impl GroupRingElt {
    pub fn zero() -> Self {
        GroupRingElt::default()
    }

    pub fn one() -> Self {
        GroupRingElt::from_word(FreeWord::empty())
    }

    pub fn from_word(w: FreeWord) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(w, 1);
        GroupRingElt { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (FreeWord, i64)>>(it: I) -> Self {
        let mut e = GroupRingElt::zero();
        for (w, c) in it {
            e.add_term(w, c);
        }
        e
    }

    pub fn add_term(&mut self, w: FreeWord, c: i64) {
        if c == 0 {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(w) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if *o.get() == 0 {
                    o.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FreeWord, i64)> {
        self.terms.iter().map(|(w, c)| (w, *c))
    }

    pub fn coefficient(&self, w: &FreeWord) -> i64 {
        self.terms.get(w).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Augmentation: the sum of the coefficients.
    pub fn augmentation(&self) -> i64 {
        self.terms.values().sum()
    }

    pub fn add(&self, other: &GroupRingElt) -> GroupRingElt {
        let mut out = self.clone();
        for (w, c) in other.terms() {
            out.add_term(w.clone(), c);
        }
        out
    }

    pub fn scale(&self, k: i64) -> GroupRingElt {
        GroupRingElt::from_terms(self.terms().map(|(w, c)| (w.clone(), c * k)))
    }

    pub fn mul(&self, other: &GroupRingElt) -> GroupRingElt {
        let mut out = GroupRingElt::zero();
        for (u, a) in self.terms() {
            for (v, b) in other.terms() {
                out.add_term(u.mul(v), a * b);
            }
        }
        out
    }

    /// Image under a homomorphism `F -> Z[t^{±1}]` sending `x_k` to `t^{deg(k)}`,
    /// returned as a map exponent -> coefficient.
    pub fn abelianize<F: Fn(u32) -> i64>(&self, degree: F) -> BTreeMap<i64, i64> {
        let mut out: BTreeMap<i64, i64> = BTreeMap::new();
        for (w, c) in self.terms() {
            let e: i64 = w
                .letters()
                .iter()
                .map(|l| l.sign() as i64 * degree(l.gen()))
                .sum();
            *out.entry(e).or_insert(0) += c;
        }
        out.retain(|_, c| *c != 0);
        out
    }
}

impl fmt::Display for GroupRingElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms().map(|(w, c)| format!("{c}·({w})")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: u32) -> FreeGroup {
        FreeGroup::new(n)
    }

    #[test]
    fn reduce_examples() {
        let f = g(3);
        assert!(f.reduce(&[(1, 1), (1, -1)]).unwrap().is_empty());
        assert_eq!(
            f.reduce(&[(1, 1), (2, 1), (2, -1), (1, 1)]).unwrap(),
            FreeWord::power(1, 2)
        );
        let w = f.reduce(&[(2, -1), (1, 1)]).unwrap();
        assert_eq!(w.letters(), &[Letter::new(2, -1), Letter::new(1, 1)]);
        assert!(matches!(
            f.reduce(&[(4, 1)]),
            Err(Error::GeneratorOutOfRange { index: 4, rank: 3 })
        ));
    }

    #[test]
    fn multiply_examples() {
        let f = g(3);
        let x1 = f.parse_word("x1").unwrap();
        assert!(f.multiply(&x1, &x1.inverse()).unwrap().is_empty());
        let u = f.parse_word("x1 x2").unwrap();
        let v = f.parse_word("x2^-1 x3").unwrap();
        assert_eq!(f.multiply(&u, &v).unwrap(), f.parse_word("x1 x3").unwrap());
        assert_eq!(f.multiply(&FreeWord::empty(), &u).unwrap(), u);
        assert!(g(2).multiply(&u, &v).is_err());
    }

    #[test]
    fn invert_examples() {
        let f = g(2);
        assert_eq!(
            f.parse_word("x1 x2").unwrap().inverse(),
            f.parse_word("x2^-1 x1^-1").unwrap()
        );
        assert!(FreeWord::empty().inverse().is_empty());
        assert_eq!(
            f.parse_word("x1^-1").unwrap().inverse(),
            f.parse_word("x1").unwrap()
        );
    }

    #[test]
    fn commutator_examples() {
        let f = g(2);
        let x1 = FreeWord::generator(1);
        let x2 = FreeWord::generator(2);
        assert!(f.commutator(&x1, &x1).unwrap().is_empty());
        assert_eq!(
            f.commutator(&x1, &x2).unwrap(),
            f.parse_word("x1 x2 x1^-1 x2^-1").unwrap()
        );
        assert!(f
            .commutator(&x1.mul(&x2), &FreeWord::empty())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn parse_examples() {
        let f = g(2);
        assert_eq!(
            f.parse_word("x1 x2^-1").unwrap().letters(),
            &[Letter::new(1, 1), Letter::new(2, -1)]
        );
        assert!(f.parse_word("x1^0").unwrap().is_empty());
        assert!(f.parse_word("x2^2 x2^-2").unwrap().is_empty());
        assert_eq!(f.parse_word("x1^3").unwrap().len(), 3);
        assert!(matches!(f.parse_word("y1"), Err(Error::Parse(_))));
        assert!(matches!(f.parse_word("x1^a"), Err(Error::Parse(_))));
        assert!(matches!(
            f.parse_word("x3"),
            Err(Error::GeneratorOutOfRange { .. })
        ));
    }

    #[test]
    fn display_round_trips() {
        let f = g(3);
        let w = f.parse_word("x1 x1 x2^-1 x3^2").unwrap();
        assert_eq!(w.to_string(), "x1^2 x2^-1 x3^2");
        assert_eq!(f.parse_word(&w.to_string()).unwrap(), w);
        assert_eq!(FreeWord::empty().to_string(), "1");
        assert!(f.parse_word("1").unwrap().is_empty());
    }

    #[test]
    fn group_ring_cancellation() {
        let mut e = GroupRingElt::from_word(FreeWord::generator(1));
        e.add_term(FreeWord::generator(2), 3);
        e.add_term(FreeWord::generator(1), -1);
        assert_eq!(e.len(), 1);
        assert_eq!(e.coefficient(&FreeWord::generator(2)), 3);
        assert_eq!(e.augmentation(), 3);
    }
}
