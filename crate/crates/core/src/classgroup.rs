//! Narrow class groups of quadratic fields via binary quadratic forms.
//!
//! Classes of primitive forms of discriminant `D` under proper equivalence.
//! For `D < 0` only positive definite forms are counted; for `D > 0` a class
//! is a cycle of reduced forms under the reduction step `ρ`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;

use crate::arith::{ext_gcd, factorize, gcd_i128, is_prime, isqrt};
use crate::error::{Error, Result};
use crate::primeinv::PrimeSet;

/// Largest `|D|` accepted by the oracle.
pub const MAX_DISCRIMINANT: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct QuadForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl QuadForm {
    pub fn new(a: i64, b: i64, c: i64) -> QuadForm {
        QuadForm { a, b, c }
    }

    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_primitive(&self) -> bool {
        gcd_i128(gcd_i128(self.a as i128, self.b as i128), self.c as i128) == 1
    }

    /// The form representing the inverse class.
    pub fn opposite(&self) -> QuadForm {
        QuadForm::new(self.a, -self.b, self.c)
    }

    /// `x² + bxy + cy²` with `b ∈ {0, 1}`.
    pub fn principal(d: i64) -> QuadForm {
        let b = d.rem_euclid(2);
        QuadForm::new(1, b, (b * b - d) / 4)
    }
}

impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

pub fn is_fundamental_discriminant(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    let squarefree = |m: i64| factorize(m.unsigned_abs()).iter().all(|&(_, e)| e == 1);
    match d.rem_euclid(4) {
        1 => squarefree(d),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && squarefree(m)
        }
        _ => false,
    }
}

/// `x < √D` for `D > 0`.
fn lt_sqrt(x: i64, d: i64) -> bool {
    x < 0 || (x as i128) * (x as i128) < d as i128
}

/// `x > √D` for `D > 0` not a square.
fn gt_sqrt(x: i64, d: i64) -> bool {
    x > 0 && (x as i128) * (x as i128) > d as i128
}

fn is_reduced(f: &QuadForm, d: i64) -> bool {
    if d > 0 {
        let a2 = 2 * f.a.abs();
        f.b > 0 && lt_sqrt(f.b, d) && gt_sqrt(a2 + f.b, d) && lt_sqrt(a2 - f.b, d)
    } else {
        f.a > 0 && f.b.abs() <= f.a && f.a <= f.c && !(f.b < 0 && (f.b == -f.a || f.a == f.c))
    }
}

/// The step `(a, b, c) ↦ (c, r, (r² − D)/4c)`, `r ≡ −b mod 2c` normalized.
fn rho(f: &QuadForm, d: i64) -> QuadForm {
    let c = f.c;
    let m = 2 * c.abs();
    let mut r = (-f.b).rem_euclid(m);
    if gt_sqrt(c.abs(), d) {
        // −|c| < r <= |c|
        if r > c.abs() {
            r -= m;
        }
    } else {
        // √D − 2|c| < r < √D
        while !lt_sqrt(r, d) {
            r -= m;
        }
        while lt_sqrt(r + m, d) {
            r += m;
        }
    }
    QuadForm::new(c, r, (r * r - d) / (4 * c))
}

/// Reduction of a definite form.
fn reduce_definite(f: &QuadForm) -> QuadForm {
    let (mut a, mut b, mut c) = (f.a, f.b, f.c);
    loop {
        if b > a || b <= -a {
            // b ↦ b mod 2a into (−a, a]
            let m = 2 * a;
            let mut nb = b.rem_euclid(m);
            if nb > a {
                nb -= m;
            }
            c = (nb * nb - (b * b - 4 * a * c)) / (4 * a);
            b = nb;
        }
        if a > c {
            (a, b, c) = (c, -b, a);
            continue;
        }
        if a == c && b < 0 {
            b = -b;
        }
        return QuadForm::new(a, b, c);
    }
}

/// A reduced form properly equivalent to `f`.
pub fn reduce(f: &QuadForm) -> QuadForm {
    let d = f.discriminant();
    if d < 0 {
        return reduce_definite(f);
    }
    let mut g = *f;
    while !is_reduced(&g, d) {
        g = rho(&g, d);
    }
    g
}

/// Dirichlet composition of two forms of the same discriminant (not reduced).
pub fn compose(f: &QuadForm, g: &QuadForm) -> QuadForm {
    let d = f.discriminant() as i128;
    let (a1, b1, _c1) = (f.a as i128, f.b as i128, f.c as i128);
    let (a2, b2, c2) = (g.a as i128, g.b as i128, g.c as i128);
    let s = (b1 + b2) / 2;
    let (d1, _, v1) = ext_gcd(a1, a2);
    let (e, x, w) = ext_gcd(d1, s);
    let v = x * v1;
    let a = a1 * a2 / (e * e);
    let k = v * (b1 - b2) / 2 - w * c2;
    let m = 2 * a;
    let b = (b2 + 2 * (a2 / e) * k).rem_euclid(m.abs());
    debug_assert_eq!((b * b - d) % (4 * a), 0, "composition of {f} and {g}");
    let c = (b * b - d) / (4 * a);
    QuadForm::new(a as i64, b as i64, c as i64)
}

/// Finite abelian group given by invariant factors `d_1 | d_2 | …` (all `> 1`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbelianGroupStructure {
    pub invariant_factors: Vec<u64>,
}

impl AbelianGroupStructure {
    pub fn trivial() -> Self {
        AbelianGroupStructure {
            invariant_factors: Vec::new(),
        }
    }

    /// From arbitrary cyclic factors, e.g. `[12, 2]`.
    pub fn from_cyclic_factors(factors: &[u64]) -> Self {
        let mut by_prime: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
        for &f in factors {
            for (p, e) in factorize(f) {
                by_prime.entry(p).or_default().push(e);
            }
        }
        Self::from_prime_parts(by_prime)
    }

    fn from_prime_parts(mut parts: BTreeMap<u64, Vec<u32>>) -> Self {
        let width = parts.values().map(|v| v.len()).max().unwrap_or(0);
        let mut inv = vec![1u64; width];
        for (p, exps) in parts.iter_mut() {
            exps.sort_unstable();
            let off = width - exps.len();
            for (k, &e) in exps.iter().enumerate() {
                inv[off + k] *= p.pow(e);
            }
        }
        AbelianGroupStructure {
            invariant_factors: inv.into_iter().filter(|&x| x > 1).collect(),
        }
    }

    /// Structure of a finite abelian group from the orders of all of its elements:
    /// `#{x : x^{q^k} = 1} = q^{Σ min(a_i, k)}` for each prime `q`.
    pub fn from_element_orders(orders: &[u64]) -> Result<Self> {
        let h = orders.len() as u64;
        let mut parts = BTreeMap::new();
        for (q, _) in factorize(h) {
            let mut prev_log = 0u32;
            let mut exps = Vec::new();
            let mut k = 1u32;
            // s_k = #{a_i >= k}
            let mut s = Vec::new();
            loop {
                let qk = q.pow(k);
                let count = orders.iter().filter(|&&o| qk % o == 0).count() as u64;
                let log = count.ilog(q);
                if q.pow(log) != count {
                    return Err(Error::Inconsistent(format!(
                        "{count} elements of {q}-power order dividing {qk}"
                    )));
                }
                if log == prev_log {
                    break;
                }
                s.push(log - prev_log);
                prev_log = log;
                k += 1;
            }
            for (k, &sk) in s.iter().enumerate() {
                let next = s.get(k + 1).copied().unwrap_or(0);
                for _ in 0..(sk - next) {
                    exps.push(k as u32 + 1);
                }
            }
            parts.insert(q, exps);
        }
        let g = Self::from_prime_parts(parts);
        if g.order() != h {
            return Err(Error::Inconsistent(format!(
                "structure {g} has order {} but {h} elements",
                g.order()
            )));
        }
        Ok(g)
    }

    pub fn order(&self) -> u64 {
        self.invariant_factors.iter().product()
    }

    /// Number of invariant factors divisible by `p^k`.
    pub fn rank_at(&self, p: u64, k: u32) -> usize {
        self.invariant_factors
            .iter()
            .filter(|&&d| d % p.pow(k) == 0)
            .count()
    }
}

impl fmt::Display for AbelianGroupStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.invariant_factors.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .invariant_factors
            .iter()
            .map(|d| format!("Z/{d}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `l`-parts of the invariant factors.
pub fn two_sylow(g: &AbelianGroupStructure, l: u64) -> AbelianGroupStructure {
    let inv = g
        .invariant_factors
        .iter()
        .map(|&d| {
            let mut part = 1;
            let mut d = d;
            while d % l == 0 {
                d /= l;
                part *= l;
            }
            part
        })
        .filter(|&x| x > 1)
        .collect();
    AbelianGroupStructure {
        invariant_factors: inv,
    }
}

/// The form class group with its multiplication realized on class representatives.
#[derive(Clone, Debug)]
pub struct FormClassGroup {
    pub discriminant: i64,
    /// One reduced representative per class; index 0 is the principal class.
    pub representatives: Vec<QuadForm>,
    class_of: HashMap<QuadForm, usize>,
}

impl FormClassGroup {
    pub fn order(&self) -> usize {
        self.representatives.len()
    }

    /// Class index of any form of this discriminant.
    pub fn class_of(&self, f: &QuadForm) -> Result<usize> {
        if f.discriminant() != self.discriminant {
            return Err(Error::Precondition(format!(
                "{f} has discriminant {}",
                f.discriminant()
            )));
        }
        let r = reduce(f);
        self.class_of
            .get(&r)
            .copied()
            .ok_or_else(|| Error::Inconsistent(format!("reduced form {r} not enumerated")))
    }

    pub fn mul(&self, x: usize, y: usize) -> Result<usize> {
        self.class_of(&compose(&self.representatives[x], &self.representatives[y]))
    }

    pub fn inverse(&self, x: usize) -> Result<usize> {
        self.class_of(&self.representatives[x].opposite())
    }

    pub fn element_order(&self, x: usize) -> Result<u64> {
        let mut acc = x;
        let mut k = 1u64;
        while acc != 0 {
            acc = self.mul(acc, x)?;
            k += 1;
            if k > self.order() as u64 {
                return Err(Error::Inconsistent(format!(
                    "class {x} has no finite order"
                )));
            }
        }
        Ok(k)
    }

    pub fn structure(&self) -> Result<AbelianGroupStructure> {
        let orders = (0..self.order())
            .map(|x| self.element_order(x))
            .collect::<Result<Vec<_>>>()?;
        AbelianGroupStructure::from_element_orders(&orders)
    }
}

fn check_discriminant(d: i64) -> Result<()> {
    if d.unsigned_abs() > MAX_DISCRIMINANT {
        return Err(Error::BoundExceeded(format!(
            "|D| = {} exceeds {MAX_DISCRIMINANT}",
            d.unsigned_abs()
        )));
    }
    if !is_fundamental_discriminant(d) {
        return Err(Error::Precondition(format!(
            "{d} is not a fundamental discriminant"
        )));
    }
    Ok(())
}

/// Enumerates the classes of primitive forms of fundamental discriminant `D`.
pub fn form_class_group(d: i64) -> Result<FormClassGroup> {
    check_discriminant(d)?;
    let mut reduced = Vec::new();
    if d > 0 {
        let s = isqrt(d as u64) as i64;
        for b in 1..=s {
            if (b * b - d) % 4 != 0 {
                continue;
            }
            let n = (d - b * b) / 4;
            for a in crate::arith::divisors(n as u64) {
                let a = a as i64;
                if gt_sqrt(2 * a + b, d) && lt_sqrt(2 * a - b, d) {
                    for sa in [a, -a] {
                        reduced.push(QuadForm::new(sa, b, -n / sa));
                    }
                }
            }
        }
    } else {
        let amax = isqrt((-d / 3) as u64) as i64;
        for a in 1..=amax {
            for b in -a + 1..=a {
                if (b * b - d) % (4 * a) != 0 {
                    continue;
                }
                let f = QuadForm::new(a, b, (b * b - d) / (4 * a));
                if is_reduced(&f, d) {
                    reduced.push(f);
                }
            }
        }
    }
    reduced.retain(|f| f.is_primitive());
    let principal = reduce(&QuadForm::principal(d));
    let mut class_of = HashMap::new();
    let mut representatives = vec![principal];
    let assign = |start: QuadForm, id: usize, class_of: &mut HashMap<QuadForm, usize>| {
        if d < 0 {
            class_of.insert(start, id);
            return;
        }
        let mut f = start;
        loop {
            class_of.insert(f, id);
            f = rho(&f, d);
            if f == start {
                break;
            }
        }
    };
    assign(principal, 0, &mut class_of);
    for f in reduced.iter().copied() {
        if !class_of.contains_key(&f) {
            let id = representatives.len();
            representatives.push(f);
            assign(f, id, &mut class_of);
        }
    }
    if class_of.len() != reduced.len() {
        return Err(Error::Inconsistent(format!(
            "{} reduced forms enumerated but {} reached by cycles",
            reduced.len(),
            class_of.len()
        )));
    }
    Ok(FormClassGroup {
        discriminant: d,
        representatives,
        class_of,
    })
}

/// Narrow class group of `Q(√D)`.
pub fn narrow_class_group(d: i64) -> Result<AbelianGroupStructure> {
    form_class_group(d)?.structure()
}

#[derive(Clone, Debug, Serialize)]
pub struct GenusReport {
    pub discriminant: i64,
    pub prime_factors: usize,
    pub two_rank: usize,
    pub expected: usize,
    pub pass: bool,
}

/// The 2-rank of the narrow class group equals the number of prime
/// discriminant factors minus one.
pub fn genus_rank_check(d: i64) -> Result<GenusReport> {
    check_discriminant(d)?;
    let t = factorize(d.unsigned_abs()).len();
    let g = narrow_class_group(d)?;
    let two_rank = g.rank_at(2, 1);
    let expected = t - 1;
    Ok(GenusReport {
        discriminant: d,
        prime_factors: t,
        two_rank,
        expected,
        pass: two_rank == expected,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleComparison {
    pub primes: Vec<u64>,
    pub discriminant: i64,
    pub predicted_e: Vec<i64>,
    pub oracle_e: Vec<i64>,
    pub predicted: String,
    pub oracle_sylow: String,
    pub class_group: String,
    pub pass: bool,
}

/// Compares `e_1..e_{d_max}` predicted from linking data with the ranks read
/// off the 2-Sylow subgroup of the narrow class group of `Q(√(p_1⋯p_n))`.
pub fn predict_vs_oracle(
    s: &PrimeSet,
    d_max: u32,
    user: Option<&crate::primeinv::UserMuTable>,
) -> Result<OracleComparison> {
    if s.l() != 2 {
        return Err(Error::Precondition(
            "the form-class oracle covers l = 2 only".into(),
        ));
    }
    let disc: u64 = s.primes().iter().product();
    let disc =
        i64::try_from(disc).map_err(|_| Error::BoundExceeded("discriminant too large".into()))?;
    let pred = crate::primeinv::class_group_prediction(s, d_max, user)?;
    let g = narrow_class_group(disc)?;
    let sylow = two_sylow(&g, 2);
    let oracle_e: Vec<i64> = (1..=d_max).map(|k| sylow.rank_at(2, k) as i64).collect();
    Ok(OracleComparison {
        primes: s.primes().to_vec(),
        discriminant: disc,
        pass: pred.e == oracle_e,
        predicted_e: pred.e,
        oracle_e,
        predicted: pred.structure.to_string(),
        oracle_sylow: sylow.to_string(),
        class_group: g.to_string(),
    })
}

/// Primes `p ≡ 1 mod 4` in `[lo, hi)`.
pub fn primes_one_mod_four(lo: u64, hi: u64) -> Vec<u64> {
    (lo..hi).filter(|&p| p % 4 == 1 && is_prime(p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fundamental_discriminants() {
        for d in [5, 8, 12, 13, 65, -3, -4, -7, -8, -20, 743041] {
            assert!(is_fundamental_discriminant(d), "{d}");
        }
        for d in [0, 1, 4, 9, 16, 45, -12, 20, 7, -1] {
            assert!(!is_fundamental_discriminant(d), "{d}");
        }
    }

    #[test]
    fn small_groups() {
        assert_eq!(
            narrow_class_group(5).unwrap(),
            AbelianGroupStructure::trivial()
        );
        assert_eq!(narrow_class_group(65).unwrap().invariant_factors, vec![2]);
        // h(Q(√3)) = 1 but the narrow group has order 2
        assert_eq!(narrow_class_group(12).unwrap().invariant_factors, vec![2]);
        assert_eq!(
            narrow_class_group(-4).unwrap(),
            AbelianGroupStructure::trivial()
        );
        assert_eq!(narrow_class_group(-23).unwrap().invariant_factors, vec![3]);
        assert_eq!(
            narrow_class_group(-84).unwrap().invariant_factors,
            vec![2, 2]
        );
        assert_eq!(narrow_class_group(-56).unwrap().invariant_factors, vec![4]);
    }

    #[test]
    fn group_laws() {
        for d in [65, 221, 1365, -84, -1155] {
            let g = form_class_group(d).unwrap();
            for x in 0..g.order() {
                assert_eq!(g.mul(x, 0).unwrap(), x);
                assert_eq!(g.mul(x, g.inverse(x).unwrap()).unwrap(), 0);
                for y in 0..g.order() {
                    assert_eq!(g.mul(x, y).unwrap(), g.mul(y, x).unwrap());
                }
            }
        }
    }

    #[test]
    fn errors() {
        assert!(matches!(
            narrow_class_group(45),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            narrow_class_group(10_000_013 * 4),
            Err(Error::BoundExceeded(_))
        ));
    }

    #[test]
    fn sylow_parts() {
        let g = AbelianGroupStructure::from_cyclic_factors(&[12]);
        assert_eq!(two_sylow(&g, 2).invariant_factors, vec![4]);
        assert_eq!(
            two_sylow(&AbelianGroupStructure::trivial(), 2),
            AbelianGroupStructure::trivial()
        );
        let g = AbelianGroupStructure::from_cyclic_factors(&[4, 4]);
        assert_eq!(two_sylow(&g, 3), AbelianGroupStructure::trivial());
        let g = AbelianGroupStructure::from_cyclic_factors(&[6, 4, 3]);
        assert_eq!(g.invariant_factors, vec![6, 12]);
    }

    #[test]
    fn order_counting() {
        // Z/2 + Z/4
        let orders = [1, 2, 2, 2, 4, 4, 4, 4];
        let g = AbelianGroupStructure::from_element_orders(&orders).unwrap();
        assert_eq!(g.invariant_factors, vec![2, 4]);
        assert!(AbelianGroupStructure::from_element_orders(&[1, 2, 2]).is_err());
    }

    #[test]
    fn genus_ranks() {
        assert!(genus_rank_check(65).unwrap().pass);
        assert_eq!(genus_rank_check(5).unwrap().two_rank, 0);
    }
}
