//! The finite chain ring `Ô/𝔭^d` with `Ô = Z_l[ζ_l]` and uniformizer `π = ζ − 1`.
//!
//! Elements are stored as `d` digits in `0..l`, read as `Σ c_i π^i`. Ring
//! operations go through `Z[x]/(Φ_l(1+x))` with coefficients modulo `l^M`,
//! `M = ⌈d/(l−1)⌉ + 1`, which is enough precision to recover `d` digits.
//! For `l = 2` we have `π = −2`, so digits are the base `−2` expansion of a
//! residue modulo `2^d`.

use std::fmt;

use serde::Serialize;

use crate::arith::{binomial, binomial_signed, is_prime};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ChainRing {
    pub l: u64,
    pub d: u32,
}

impl ChainRing {
    pub fn new(l: u64, d: u32) -> Result<ChainRing> {
        if !is_prime(l) {
            return Err(Error::Precondition(format!("l = {l} is not prime")));
        }
        if d == 0 {
            return Err(Error::InvalidDegree(
                "chain ring level d must be positive".into(),
            ));
        }
        Ok(ChainRing { l, d })
    }

    fn n(&self) -> usize {
        (self.l - 1) as usize
    }

    fn precision(&self) -> u32 {
        (self.d as u64).div_ceil(self.l - 1) as u32 + 1
    }

    fn modulus(&self) -> i128 {
        (self.l as i128).pow(self.precision())
    }

    pub fn zero(&self) -> ChainRingElt {
        ChainRingElt {
            ring: *self,
            digits: vec![0; self.d as usize],
        }
    }

    pub fn one(&self) -> ChainRingElt {
        self.from_int(1)
    }

    pub fn pi(&self) -> ChainRingElt {
        let mut digits = vec![0; self.d as usize];
        if self.d > 1 {
            digits[1] = 1;
        }
        ChainRingElt {
            ring: *self,
            digits,
        }
    }

    pub fn from_int(&self, k: i128) -> ChainRingElt {
        let mut poly = vec![0i128; self.n()];
        poly[0] = k.rem_euclid(self.modulus());
        self.from_poly(poly)
    }

    /// Element with the given π-digits (missing high digits are zero).
    pub fn from_digits(&self, digits: &[u64]) -> Result<ChainRingElt> {
        if digits.len() > self.d as usize {
            return Err(Error::Precondition(format!(
                "{} digits exceed level d = {}",
                digits.len(),
                self.d
            )));
        }
        if let Some(&c) = digits.iter().find(|&&c| c >= self.l) {
            return Err(Error::Precondition(format!(
                "digit {c} out of range for l = {}",
                self.l
            )));
        }
        let mut v = digits.to_vec();
        v.resize(self.d as usize, 0);
        Ok(ChainRingElt {
            ring: *self,
            digits: v,
        })
    }

    /// `Σ c π^r` for a list of integer coefficients `c` at π-powers `r`.
    pub fn from_pi_series(&self, terms: &[(i128, u32)]) -> ChainRingElt {
        let mut acc = self.zero();
        for &(c, r) in terms {
            acc = acc
                .add(&self.from_int(c).mul(&self.pi().pow(r as u64)).unwrap())
                .unwrap();
        }
        acc
    }

    fn reduce_poly(&self, mut p: Vec<i128>) -> Vec<i128> {
        let n = self.n();
        let m = self.modulus();
        // x^n = −Σ_{k=1}^{l−1} C(l,k) x^{k−1}
        while p.len() > n {
            let top = p.pop().unwrap();
            if top == 0 {
                continue;
            }
            let shift = p.len() - n;
            for k in 1..self.l {
                let c = binomial(self.l, k) as i128 % m;
                let idx = shift + (k - 1) as usize;
                p[idx] = (p[idx] - top * c).rem_euclid(m);
            }
        }
        p.resize(n, 0);
        for c in p.iter_mut() {
            *c = c.rem_euclid(m);
        }
        p
    }

    fn poly_mul(&self, a: &[i128], b: &[i128]) -> Vec<i128> {
        let m = self.modulus();
        let mut out = vec![0i128; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y).rem_euclid(m);
            }
        }
        self.reduce_poly(out)
    }

    fn to_poly(&self, digits: &[u64]) -> Vec<i128> {
        // Horner in x
        let mut acc = vec![0i128; self.n()];
        for &c in digits.iter().rev() {
            let mut shifted = vec![0i128];
            shifted.extend_from_slice(&acc);
            shifted[0] += c as i128;
            acc = self.reduce_poly(shifted);
        }
        acc
    }

    fn from_poly(&self, mut p: Vec<i128>) -> ChainRingElt {
        let m = self.modulus();
        let l = self.l as i128;
        // l/x = −(x^{l−2} + Σ_{k=2}^{l−1} C(l,k) x^{k−2})
        let mut l_over_x = vec![0i128; self.n()];
        l_over_x[self.n() - 1] = -1;
        for k in 2..self.l {
            let idx = (k - 2) as usize;
            l_over_x[idx] -= binomial(self.l, k) as i128;
        }
        let mut digits = Vec::with_capacity(self.d as usize);
        for _ in 0..self.d {
            let c = p[0].rem_euclid(l);
            digits.push(c as u64);
            let q = (p[0] - c) / l;
            let mut rest: Vec<i128> = p[1..].to_vec();
            rest.push(0);
            let extra = self.poly_mul(&[q], &l_over_x);
            for (r, e) in rest.iter_mut().zip(extra) {
                *r = (*r + e).rem_euclid(m);
            }
            p = rest;
        }
        ChainRingElt {
            ring: *self,
            digits,
        }
    }
}

impl fmt::Display for ChainRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "l={}, d={}", self.l, self.d)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChainRingElt {
    ring: ChainRing,
    digits: Vec<u64>,
}

impl ChainRingElt {
    pub fn ring(&self) -> ChainRing {
        self.ring
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    pub fn is_zero(&self) -> bool {
        self.digits.iter().all(|&c| c == 0)
    }

    pub fn is_unit(&self) -> bool {
        self.digits[0] != 0
    }

    /// π-adic valuation; the zero element has valuation `d`.
    pub fn valuation(&self) -> u32 {
        self.digits
            .iter()
            .position(|&c| c != 0)
            .unwrap_or(self.digits.len()) as u32
    }

    fn check(&self, other: &ChainRingElt) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(
                self.ring.to_string(),
                other.ring.to_string(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &ChainRingElt) -> Result<ChainRingElt> {
        self.check(other)?;
        let r = self.ring;
        let a = r.to_poly(&self.digits);
        let b = r.to_poly(&other.digits);
        Ok(r.from_poly(a.iter().zip(&b).map(|(x, y)| x + y).collect()))
    }

    pub fn neg(&self) -> ChainRingElt {
        let r = self.ring;
        r.from_poly(r.to_poly(&self.digits).iter().map(|x| -x).collect())
    }

    pub fn sub(&self, other: &ChainRingElt) -> Result<ChainRingElt> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &ChainRingElt) -> Result<ChainRingElt> {
        self.check(other)?;
        let r = self.ring;
        let p = r.poly_mul(&r.to_poly(&self.digits), &r.to_poly(&other.digits));
        Ok(r.from_poly(p))
    }

    pub fn pow(&self, mut e: u64) -> ChainRingElt {
        let mut acc = self.ring.one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).unwrap();
            }
            base = base.mul(&base).unwrap();
            e >>= 1;
        }
        acc
    }

    /// Inverse of a unit (order of the unit group is `(l−1) l^{d−1}`).
    pub fn inverse(&self) -> Result<ChainRingElt> {
        if !self.is_unit() {
            return Err(Error::Precondition("element is not a unit".into()));
        }
        let order = (self.ring.l - 1) * self.ring.l.pow(self.ring.d - 1);
        Ok(self.pow(order - 1))
    }

    /// `x / π^v` for `v <= valuation`; the top `v` digits of the result are set to zero.
    pub fn shift_down(&self, v: u32) -> ChainRingElt {
        assert!(v <= self.valuation());
        let mut digits: Vec<u64> = self.digits[v as usize..].to_vec();
        digits.resize(self.digits.len(), 0);
        ChainRingElt {
            ring: self.ring,
            digits,
        }
    }

    /// For `l = 2`: the residue modulo `2^d` this element represents.
    pub fn to_residue(&self) -> Option<u64> {
        if self.ring.l != 2 {
            return None;
        }
        let m = 1i128 << self.ring.d;
        let mut acc: i128 = 0;
        let mut pw: i128 = 1;
        for &c in &self.digits {
            acc += c as i128 * pw;
            pw *= -2;
        }
        Some(acc.rem_euclid(m) as u64)
    }
}

impl fmt::Display for ChainRingElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.to_residue() {
            return write!(f, "{r}");
        }
        let terms: Vec<String> = self
            .digits
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, _) => c.to_string(),
                (1, 1) => "π".to_string(),
                (1, _) => format!("{c}π"),
                (_, 1) => format!("π^{i}"),
                _ => format!("{c}π^{i}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl Serialize for ChainRingElt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMatrix {
    ring: ChainRing,
    rows: usize,
    cols: usize,
    entries: Vec<ChainRingElt>,
}

impl ChainMatrix {
    pub fn zeros(ring: ChainRing, rows: usize, cols: usize) -> ChainMatrix {
        ChainMatrix {
            ring,
            rows,
            cols,
            entries: vec![ring.zero(); rows * cols],
        }
    }

    pub fn identity(ring: ChainRing, n: usize) -> ChainMatrix {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, ring.one());
        }
        m
    }

    pub fn from_ints(ring: ChainRing, rows: &[Vec<i128>]) -> ChainMatrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Self::zeros(ring, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged matrix");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, ring.from_int(v));
            }
        }
        m
    }

    pub fn ring(&self) -> ChainRing {
        self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &ChainRingElt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: ChainRingElt) {
        assert_eq!(v.ring, self.ring, "entry from a different chain ring");
        self.entries[i * self.cols + j] = v;
    }

    pub fn mul(&self, other: &ChainMatrix) -> Result<ChainMatrix> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(
                self.ring.to_string(),
                other.ring.to_string(),
            ));
        }
        if self.cols != other.rows {
            return Err(Error::Precondition(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.ring, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = self.ring.zero();
                for k in 0..self.cols {
                    acc = acc.add(&self.get(i, k).mul(other.get(k, j))?)?;
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    /// Rows of residues modulo `2^d` (only for `l = 2`).
    pub fn to_residues(&self) -> Option<Vec<Vec<u64>>> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self.get(i, j).to_residue())
                    .collect()
            })
            .collect()
    }
}

impl Serialize for ChainMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_string()).collect())
            .collect();
        rows.serialize(s)
    }
}

/// Elementary divisors `π^{v_1} | π^{v_2} | …`; a valuation equal to `d` is the zero divisor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ElementaryDivisors {
    pub l: u64,
    pub d: u32,
    pub valuations: Vec<u32>,
}

impl ElementaryDivisors {
    /// For `l = 2` the divisors as residues `2^v mod 2^d`.
    pub fn as_residues(&self) -> Option<Vec<u64>> {
        if self.l != 2 {
            return None;
        }
        Some(
            self.valuations
                .iter()
                .map(|&v| if v >= self.d { 0 } else { 1u64 << v })
                .collect(),
        )
    }
}

/// Smith normal form over the chain ring, returning the valuations of the diagonal.
pub fn snf(m: &ChainMatrix) -> ElementaryDivisors {
    let ring = m.ring;
    let mut a = m.clone();
    let k = a.rows.min(a.cols);
    let mut vals = Vec::with_capacity(k);
    for t in 0..k {
        let mut best: Option<(usize, usize, u32)> = None;
        for i in t..a.rows {
            for j in t..a.cols {
                let v = a.get(i, j).valuation();
                if v < ring.d && best.is_none_or(|(_, _, bv)| v < bv) {
                    best = Some((i, j, v));
                }
            }
        }
        let Some((pi, pj, v)) = best else {
            vals.extend(std::iter::repeat(ring.d).take(k - t));
            break;
        };
        if pi != t {
            for j in 0..a.cols {
                let (x, y) = (a.get(t, j).clone(), a.get(pi, j).clone());
                a.set(t, j, y);
                a.set(pi, j, x);
            }
        }
        if pj != t {
            for i in 0..a.rows {
                let (x, y) = (a.get(i, t).clone(), a.get(i, pj).clone());
                a.set(i, t, y);
                a.set(i, pj, x);
            }
        }
        let unit_inv = a
            .get(t, t)
            .shift_down(v)
            .inverse()
            .expect("pivot unit part");
        for i in t + 1..a.rows {
            let e = a.get(i, t);
            if e.is_zero() {
                continue;
            }
            let f = e.shift_down(v).mul(&unit_inv).unwrap();
            for j in t..a.cols {
                let val = a.get(i, j).sub(&f.mul(a.get(t, j)).unwrap()).unwrap();
                a.set(i, j, val);
            }
        }
        for j in t + 1..a.cols {
            let e = a.get(t, j);
            if e.is_zero() {
                continue;
            }
            let f = e.shift_down(v).mul(&unit_inv).unwrap();
            for i in t..a.rows {
                let val = a.get(i, j).sub(&f.mul(a.get(i, t)).unwrap()).unwrap();
                a.set(i, j, val);
            }
        }
        vals.push(v);
    }
    ElementaryDivisors {
        l: ring.l,
        d: ring.d,
        valuations: vals,
    }
}

/// `#{ i : π^d | ε_i } − 1`.
pub fn e_d_from_divisors(divisors: &ElementaryDivisors, d: u32) -> Result<i64> {
    let count = divisors.valuations.iter().filter(|&&v| v >= d).count() as i64;
    if count == 0 {
        return Err(Error::Inconsistent(format!(
            "no elementary divisor vanishes modulo π^{d}; the last divisor must be 0"
        )));
    }
    Ok(count - 1)
}

/// Exponents `a_k` with `∏_{k≤D} (1 − t^k)^{a_k} ≡ f(t) mod t^{D+1}`.
/// `f` is given by its coefficients, constant term first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankSequence(pub Vec<i128>);

/// Truncated expansion of `∏ (1 − t^k)^{a_k}` to degree `deg`.
pub fn expand_rank_product(a: &[i128], deg: usize) -> Vec<i128> {
    let mut p = vec![0i128; deg + 1];
    p[0] = 1;
    for (idx, &ak) in a.iter().enumerate() {
        let k = idx + 1;
        if ak == 0 || k > deg {
            continue;
        }
        let mut factor = vec![0i128; deg + 1];
        for j in 0..=deg / k {
            let c = binomial_signed(ak, j as u32);
            factor[j * k] = if j % 2 == 0 { c } else { -c };
        }
        let mut next = vec![0i128; deg + 1];
        for (i, &x) in p.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in factor.iter().enumerate().take(deg + 1 - i) {
                next[i + j] += x * y;
            }
        }
        p = next;
    }
    p
}

pub fn zeta_rank_inversion(f: &[i128], deg: usize) -> Result<RankSequence> {
    if f.first().copied() != Some(1) {
        return Err(Error::Precondition(
            "series must have constant term 1".into(),
        ));
    }
    let coeff = |k: usize| f.get(k).copied().unwrap_or(0);
    let mut a: Vec<i128> = Vec::with_capacity(deg);
    for k in 1..=deg {
        let p = expand_rank_product(&a, k);
        a.push(p[k] - coeff(k));
    }
    Ok(RankSequence(a))
}

/// `(1 − t)(1 − (n−1)t)`, the rank series of a link group with `n` components.
pub fn link_rank_polynomial(n: i128) -> Vec<i128> {
    vec![1, -n, n - 1]
}

/// `(1 − t)(1 − nt + nt²)`, the rank series attached to `n` primes.
pub fn prime_rank_polynomial(n: i128) -> Vec<i128> {
    vec![1, -(n + 1), 2 * n, -n]
}
