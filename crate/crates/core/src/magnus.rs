//! Magnus expansion, Fox free differential calculus and Milnor numbers.
//!
//! The Magnus map sends `x_i` to `1 + X_i` in the ring of noncommutative
//! power series; everything here is truncated at a fixed total degree.
//! Milnor numbers `μ(i_1 … i_r j)` are the coefficients of
//! `X_{i_1} ⋯ X_{i_r}` in the expansion of the `j`-th longitude, and the
//! indeterminacy `Δ(I)` is the gcd of the numbers attached to cyclic
//! permutations of proper subsequences of `I`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::arith::{binomial, gcd_i128, mod_reduce};
use crate::error::{Error, Result};
use crate::words::{FreeWord, GroupRingElt};

/// A nonempty multi-index `(i_1, …, i_r)` of generator indices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(indices: Vec<u32>) -> Self {
        assert!(!indices.is_empty(), "multi-index must be nonempty");
        assert!(indices.iter().all(|&i| i >= 1), "indices start at 1");
        MultiIndex(indices)
    }

    pub fn indices(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The last index (the longitude the number is read from).
    pub fn last(&self) -> u32 {
        *self.0.last().unwrap()
    }

    /// All but the last index (the monomial read off the longitude).
    pub fn head(&self) -> &[u32] {
        &self.0[..self.0.len() - 1]
    }

    pub fn rotate(&self) -> MultiIndex {
        let mut v = self.0[1..].to_vec();
        v.push(self.0[0]);
        MultiIndex(v)
    }

    pub fn cyclic_permutations(&self) -> Vec<MultiIndex> {
        let mut out = Vec::with_capacity(self.len());
        let mut cur = self.clone();
        for _ in 0..self.len() {
            out.push(cur.clone());
            cur = cur.rotate();
        }
        out
    }

    /// Subsequences obtained by deleting a nonempty set of positions and
    /// keeping at least two indices, in order.
    pub fn proper_subsequences(&self) -> Vec<MultiIndex> {
        let r = self.len();
        let mut out = Vec::new();
        for mask in 0u32..(1 << r) {
            let kept = mask.count_ones() as usize;
            if kept < 2 || kept == r {
                continue;
            }
            let v: Vec<u32> = (0..r)
                .filter(|k| mask & (1 << k) != 0)
                .map(|k| self.0[k])
                .collect();
            out.push(MultiIndex(v));
        }
        out.sort();
        out.dedup();
        out
    }

    /// Parses `"1 2 1"` or `"121"` (the latter only for single-digit indices).
    pub fn parse(text: &str) -> Result<MultiIndex> {
        let t = text.trim();
        let parts: Vec<&str> = if t.contains(char::is_whitespace) || t.contains(',') {
            t.split(|c: char| c.is_whitespace() || c == ',')
                .filter(|s| !s.is_empty())
                .collect()
        } else {
            t.split("").filter(|s| !s.is_empty()).collect()
        };
        if parts.is_empty() {
            return Err(Error::Parse("empty multi-index".into()));
        }
        let mut v = Vec::with_capacity(parts.len());
        for p in parts {
            let i: u32 = p
                .parse()
                .map_err(|_| Error::Parse(format!("bad index `{p}` in `{text}`")))?;
            if i == 0 {
                return Err(Error::Parse(format!("index 0 in `{text}`")));
            }
            v.push(i);
        }
        Ok(MultiIndex(v))
    }

    /// Every multi-index of length `len` over `1..=n`, lexicographically.
    pub fn all_of_length(n: u32, len: usize) -> Vec<MultiIndex> {
        let mut out = vec![Vec::new()];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|v: Vec<u32>| {
                    (1..=n).map(move |i| {
                        let mut w = v.clone();
                        w.push(i);
                        w
                    })
                })
                .collect();
        }
        out.into_iter().map(MultiIndex).collect()
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&i| i < 10) {
            for i in &self.0 {
                write!(f, "{i}")?;
            }
            Ok(())
        } else {
            let s: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
            write!(f, "{}", s.join(" "))
        }
    }
}

impl Serialize for MultiIndex {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Truncated noncommutative power series in `X_1, …, X_n` over `Z` or `Z/m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NCSeries {
    rank: u32,
    degree: usize,
    modulus: u64,
    coeffs: BTreeMap<Vec<u32>, i128>,
}

impl NCSeries {
    /// The series `1`. `modulus == 0` means integer coefficients.
    pub fn one(rank: u32, degree: usize, modulus: u64) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(Vec::new(), 1);
        let mut s = NCSeries {
            rank,
            degree,
            modulus,
            coeffs,
        };
        s.normalize();
        s
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn coefficient(&self, monomial: &[u32]) -> i128 {
        self.coeffs.get(monomial).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], i128)> {
        self.coeffs.iter().map(|(k, v)| (k.as_slice(), *v))
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coefficient(&[]) == 1
    }

    fn reduce_coeff(&self, c: i128) -> i128 {
        if self.modulus == 0 {
            c
        } else {
            mod_reduce(c, self.modulus) as i128
        }
    }

    fn normalize(&mut self) {
        let m = self.modulus;
        let d = self.degree;
        self.coeffs.retain(|k, v| {
            if m != 0 {
                *v = mod_reduce(*v, m) as i128;
            }
            *v != 0 && k.len() <= d
        });
    }

    fn add_to(coeffs: &mut BTreeMap<Vec<u32>, i128>, key: Vec<u32>, c: i128) {
        if c != 0 {
            *coeffs.entry(key).or_insert(0) += c;
        }
    }

    /// Truncated product.
    pub fn mul(&self, other: &NCSeries) -> NCSeries {
        assert_eq!(self.rank, other.rank, "rank mismatch");
        assert_eq!(self.modulus, other.modulus, "modulus mismatch");
        let degree = self.degree.min(other.degree);
        let mut coeffs = BTreeMap::new();
        for (a, ca) in &self.coeffs {
            for (b, cb) in &other.coeffs {
                if a.len() + b.len() > degree {
                    continue;
                }
                let mut k = a.clone();
                k.extend_from_slice(b);
                let c = if self.modulus == 0 {
                    ca * cb
                } else {
                    self.reduce_coeff(ca * cb)
                };
                Self::add_to(&mut coeffs, k, c);
            }
        }
        let mut s = NCSeries {
            rank: self.rank,
            degree,
            modulus: self.modulus,
            coeffs,
        };
        s.normalize();
        s
    }

    /// Right multiplication by the Magnus image of `x_g^{sign}`.
    fn mul_letter(&mut self, g: u32, sign: i8) {
        let mut add = BTreeMap::new();
        for (k, &c) in &self.coeffs {
            let room = self.degree - k.len();
            let mut key = k.clone();
            for p in 1..=room {
                key.push(g);
                let coef = if sign > 0 {
                    if p == 1 {
                        c
                    } else {
                        break;
                    }
                } else if p % 2 == 1 {
                    -c
                } else {
                    c
                };
                Self::add_to(&mut add, key.clone(), coef);
            }
        }
        for (k, c) in add {
            *self.coeffs.entry(k).or_insert(0) += c;
        }
        self.normalize();
    }
}

impl fmt::Display for NCSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in &self.coeffs {
            let mono: String = if k.is_empty() {
                String::new()
            } else {
                k.iter()
                    .map(|i| format!("X{i}"))
                    .collect::<Vec<_>>()
                    .join("")
            };
            let sign = if *c < 0 {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            let mag = c.abs();
            let body = match (mag, mono.is_empty()) {
                (_, true) => mag.to_string(),
                (1, false) => mono,
                (_, false) => format!("{mag}{mono}"),
            };
            if first {
                write!(f, "{sign}{body}")?;
            } else {
                write!(f, " {sign} {body}")?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Magnus expansion of `w` truncated past total degree `degree`.
pub fn magnus_expand(w: &FreeWord, rank: u32, degree: usize) -> NCSeries {
    magnus_expand_mod(w, rank, degree, 0)
}

/// As [`magnus_expand`] with coefficients reduced modulo `modulus` (0 = none).
pub fn magnus_expand_mod(w: &FreeWord, rank: u32, degree: usize, modulus: u64) -> NCSeries {
    let mut s = NCSeries::one(rank, degree, modulus);
    for l in w.letters() {
        s.mul_letter(l.gen(), l.sign());
    }
    s
}

/// Fox derivative `∂e/∂x_i`.
pub fn fox_derive(e: &GroupRingElt, i: u32) -> GroupRingElt {
    let mut out = GroupRingElt::zero();
    for (w, c) in e.terms() {
        let letters = w.letters();
        for (k, l) in letters.iter().enumerate() {
            if l.gen() != i {
                continue;
            }
            if l.sign() > 0 {
                out.add_term(FreeWord::from_letters(letters[..k].iter().copied()), c);
            } else {
                out.add_term(FreeWord::from_letters(letters[..=k].iter().copied()), -c);
            }
        }
    }
    out
}

/// `ε(∂^r w / ∂x_{i_1} ⋯ ∂x_{i_r})`; the innermost derivative is taken in `x_{i_r}`.
pub fn higher_fox_eps(w: &FreeWord, indices: &[u32]) -> i64 {
    let mut e = GroupRingElt::from_word(w.clone());
    for &i in indices.iter().rev() {
        e = fox_derive(&e, i);
        if e.is_zero() {
            return 0;
        }
    }
    e.augmentation()
}

/// Coefficient ring of a Milnor table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Modulus {
    /// Integer Milnor numbers; `Δ = 0` encodes the zero ideal.
    Integer,
    /// Values in `Z/l^e`; `Δ(I)` also contains `C(l^{e_S}, t)` for `1 <= t <= |I|`.
    PrimePower { l: u64, e: u32, e_s: u32 },
}

impl Modulus {
    pub fn value(&self) -> u64 {
        match *self {
            Modulus::Integer => 0,
            Modulus::PrimePower { l, e, .. } => l.pow(e),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MilnorEntry {
    pub mu: i128,
    /// Nonnegative generator of `Δ(I)`. Over `Z`, 0 is the zero ideal; over
    /// `Z/m` the generator divides `m` and `m` is the zero ideal.
    pub delta: u128,
    pub mubar: i128,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MilnorTable {
    n: u32,
    degree: usize,
    modulus: Modulus,
    entries: BTreeMap<MultiIndex, MilnorEntry>,
}

impl MilnorTable {
    /// Builds `Δ` and `μ̄` from raw `μ` values. Every multi-index of length
    /// `2..=degree` must be present.
    pub fn from_mu(
        n: u32,
        degree: usize,
        modulus: Modulus,
        mu: &BTreeMap<MultiIndex, i128>,
    ) -> Result<MilnorTable> {
        if degree < 2 {
            return Err(Error::InvalidDegree(format!(
                "Milnor tables need degree >= 2, got {degree}"
            )));
        }
        let m = modulus.value();
        let mut entries = BTreeMap::new();
        for len in 2..=degree {
            for idx in MultiIndex::all_of_length(n, len) {
                let raw = *mu
                    .get(&idx)
                    .ok_or_else(|| Error::MissingMilnor(idx.to_string()))?;
                let mut g: i128 = m as i128;
                if let Modulus::PrimePower { l, e_s, .. } = modulus {
                    let top = l.pow(e_s);
                    for t in 1..=len as u64 {
                        g = gcd_i128(g, (binomial(top, t) % m as u128) as i128);
                    }
                }
                for sub in idx.proper_subsequences() {
                    for cyc in sub.cyclic_permutations() {
                        let v = *mu
                            .get(&cyc)
                            .ok_or_else(|| Error::MissingMilnor(cyc.to_string()))?;
                        g = gcd_i128(g, v);
                    }
                }
                let value = if m == 0 {
                    raw
                } else {
                    mod_reduce(raw, m) as i128
                };
                let delta = g.unsigned_abs();
                let mubar = if delta == 0 {
                    value
                } else {
                    value.rem_euclid(delta as i128)
                };
                entries.insert(
                    idx,
                    MilnorEntry {
                        mu: value,
                        delta,
                        mubar,
                    },
                );
            }
        }
        Ok(MilnorTable {
            n,
            degree,
            modulus,
            entries,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn get(&self, idx: &MultiIndex) -> Option<&MilnorEntry> {
        self.entries.get(idx)
    }

    pub fn mu(&self, indices: &[u32]) -> Option<i128> {
        self.entries
            .get(&MultiIndex::new(indices.to_vec()))
            .map(|e| e.mu)
    }

    pub fn mubar(&self, indices: &[u32]) -> Option<i128> {
        self.entries
            .get(&MultiIndex::new(indices.to_vec()))
            .map(|e| e.mubar)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&MultiIndex, &MilnorEntry)> {
        self.entries.iter()
    }

    /// Raw `μ` values keyed by multi-index.
    pub fn mu_map(&self) -> BTreeMap<MultiIndex, i128> {
        self.entries
            .iter()
            .map(|(k, e)| (k.clone(), e.mu))
            .collect()
    }
}

impl Serialize for MilnorTable {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("MilnorTable", 4)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("degree", &self.degree)?;
        st.serialize_field("modulus", &self.modulus)?;
        let map: BTreeMap<String, MilnorEntry> = self
            .entries
            .iter()
            .map(|(k, v)| (k.to_string(), *v))
            .collect();
        st.serialize_field("entries", &map)?;
        st.end()
    }
}

/// Milnor numbers of the longitudes `y_1, …, y_n` for every multi-index of
/// length `2..=degree`.
pub fn milnor_table(
    longitudes: &[FreeWord],
    degree: usize,
    modulus: Modulus,
) -> Result<MilnorTable> {
    if degree < 2 {
        return Err(Error::InvalidDegree(format!(
            "Milnor tables need degree >= 2, got {degree}"
        )));
    }
    let n = longitudes.len() as u32;
    for y in longitudes {
        let g = y.max_generator();
        if g > n {
            return Err(Error::GeneratorOutOfRange { index: g, rank: n });
        }
    }
    let m = modulus.value();
    let series: Vec<NCSeries> = longitudes
        .iter()
        .map(|y| magnus_expand_mod(y, n, degree - 1, m))
        .collect();
    let mut mu = BTreeMap::new();
    for len in 2..=degree {
        for idx in MultiIndex::all_of_length(n, len) {
            let j = idx.last() as usize;
            mu.insert(idx.clone(), series[j - 1].coefficient(idx.head()));
        }
    }
    MilnorTable::from_mu(n, degree, modulus, &mu)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "relation", rename_all = "snake_case")]
pub enum SymmetryViolation {
    Cyclic {
        index: MultiIndex,
        rotated: MultiIndex,
        mubar: i128,
        rotated_mubar: i128,
        delta: u128,
    },
    Shuffle {
        left: MultiIndex,
        right: MultiIndex,
        k: u32,
        sum: i128,
        modulus: u128,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SymmetryReport {
    pub cyclic_checked: usize,
    pub shuffle_checked: usize,
    pub violations: Vec<SymmetryViolation>,
}

impl SymmetryReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// All interleavings of `a` and `b` (with multiplicity).
pub fn shuffles(a: &[u32], b: &[u32]) -> Vec<Vec<u32>> {
    let total = a.len() + b.len();
    let mut out = Vec::new();
    for mask in 0u32..(1 << total) {
        if mask.count_ones() as usize != a.len() {
            continue;
        }
        let (mut ia, mut ib) = (0, 0);
        let mut h = Vec::with_capacity(total);
        for p in 0..total {
            if mask & (1 << p) != 0 {
                h.push(a[ia]);
                ia += 1;
            } else {
                h.push(b[ib]);
                ib += 1;
            }
        }
        out.push(h);
    }
    out
}

fn congruent(a: i128, b: i128, modulus: u128) -> bool {
    if modulus == 0 {
        a == b
    } else {
        (a - b).rem_euclid(modulus as i128) == 0
    }
}

/// Checks cyclic symmetry and the shuffle relations on every index the table covers.
pub fn check_symmetries(table: &MilnorTable) -> SymmetryReport {
    let mut report = SymmetryReport::default();
    for (idx, e) in table.entries() {
        let rot = idx.rotate();
        let re = table.get(&rot).expect("table is closed under rotation");
        let delta = gcd_i128(e.delta as i128, re.delta as i128).unsigned_abs();
        report.cyclic_checked += 1;
        if !congruent(e.mubar, re.mubar, delta) {
            report.violations.push(SymmetryViolation::Cyclic {
                index: idx.clone(),
                rotated: rot,
                mubar: e.mubar,
                rotated_mubar: re.mubar,
                delta,
            });
        }
    }
    let n = table.n();
    let m = table.modulus().value() as i128;
    for s in 1..table.degree() {
        for t in 1..table.degree() {
            if s + t + 1 > table.degree() {
                continue;
            }
            for left in MultiIndex::all_of_length(n, s) {
                for right in MultiIndex::all_of_length(n, t) {
                    for k in 1..=n {
                        let mut sum: i128 = 0;
                        let mut g: i128 = m;
                        for mut h in shuffles(left.indices(), right.indices()) {
                            h.push(k);
                            let e = table.get(&MultiIndex::new(h)).expect("table complete");
                            sum += e.mu;
                            g = gcd_i128(g, e.delta as i128);
                        }
                        report.shuffle_checked += 1;
                        let modulus = g.unsigned_abs();
                        if !congruent(sum, 0, modulus) {
                            report.violations.push(SymmetryViolation::Shuffle {
                                left: left.clone(),
                                right: right.clone(),
                                k,
                                sum,
                                modulus,
                            });
                        }
                    }
                }
            }
        }
    }
    report
}
