//! Laurent polynomials over `Z` in one variable `t`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::arith::gcd_i128;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, i128>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    pub fn monomial(c: i128, e: i64) -> Self {
        let mut p = LaurentPoly::zero();
        p.add_term(e, c);
        p
    }

    /// `Σ coeffs[k] t^{low + k}`.
    pub fn from_coeffs(low: i64, coeffs: &[i128]) -> Self {
        let mut p = LaurentPoly::zero();
        for (k, &c) in coeffs.iter().enumerate() {
            p.add_term(low + k as i64, c);
        }
        p
    }

    pub fn add_term(&mut self, e: i64, c: i128) {
        if c == 0 {
            return;
        }
        let v = self.coeffs.entry(e).or_insert(0);
        *v += c;
        if *v == 0 {
            self.coeffs.remove(&e);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, i128)> + '_ {
        self.coeffs.iter().map(|(e, c)| (*e, *c))
    }

    pub fn coefficient(&self, e: i64) -> i128 {
        self.coeffs.get(&e).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// Width of the exponent range (the degree after normalization).
    pub fn span(&self) -> i64 {
        match (self.min_exp(), self.max_exp()) {
            (Some(a), Some(b)) => b - a,
            _ => 0,
        }
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e, c);
        }
        out
    }

    pub fn neg(&self) -> LaurentPoly {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }

    pub fn sub(&self, other: &LaurentPoly) -> LaurentPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in other.terms() {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, k: i128) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e, c) in self.terms() {
            out.add_term(e, c * k);
        }
        out
    }

    pub fn shift(&self, k: i64) -> LaurentPoly {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(e, c)| (e + k, *c)).collect(),
        }
    }

    pub fn eval_at_one(&self) -> i128 {
        self.coeffs.values().sum()
    }

    pub fn content(&self) -> i128 {
        self.coeffs.values().fold(0, |g, &c| gcd_i128(g, c))
    }

    /// Ordinary coefficient vector after shifting the lowest exponent to 0.
    pub fn to_poly(&self) -> Vec<i128> {
        match self.min_exp() {
            None => Vec::new(),
            Some(lo) => {
                let mut v = vec![0i128; (self.span() + 1) as usize];
                for (e, c) in self.terms() {
                    v[(e - lo) as usize] = c;
                }
                v
            }
        }
    }

    /// Representative of `p` up to units `±t^k`: lowest exponent 0, positive leading coefficient.
    pub fn normalized(&self) -> LaurentPoly {
        let p = LaurentPoly::from_coeffs(0, &self.to_poly());
        match p.max_exp() {
            Some(top) if p.coefficient(top) < 0 => p.neg(),
            _ => p,
        }
    }

    /// Exact quotient `self / other` in `Z[t^{±1}]`, if it exists.
    pub fn div_exact(&self, other: &LaurentPoly) -> Option<LaurentPoly> {
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(LaurentPoly::zero());
        }
        let (lo_a, lo_b) = (self.min_exp().unwrap(), other.min_exp().unwrap());
        let (q, r) = poly_divmod_exact(&self.to_poly(), &other.to_poly())?;
        if r.iter().any(|&c| c != 0) {
            return None;
        }
        Some(LaurentPoly::from_coeffs(lo_a - lo_b, &q))
    }

    pub fn divides(&self, other: &LaurentPoly) -> bool {
        other.div_exact(self).is_some()
    }

    /// Greatest common divisor, normalized.
    pub fn gcd(&self, other: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() {
            return other.normalized();
        }
        if other.is_zero() {
            return self.normalized();
        }
        let c = gcd_i128(self.content(), other.content());
        let mut a = primitive(trim(self.to_poly()));
        let mut b = primitive(trim(other.to_poly()));
        if a.len() < b.len() {
            std::mem::swap(&mut a, &mut b);
        }
        while !(b.len() == 1 && b[0] == 0) && !b.is_empty() {
            let r = trim(pseudo_rem(&a, &b));
            a = b;
            b = if r.is_empty() { vec![0] } else { primitive(r) };
        }
        LaurentPoly::from_coeffs(0, &a).scale(c).normalized()
    }

    pub fn eval(&self, x: i128) -> i128 {
        let mut acc = 0i128;
        for (e, c) in self.terms() {
            assert!(e >= 0, "negative exponent in integer evaluation");
            acc += c * x.pow(e as u32);
        }
        acc
    }
}

fn trim(mut v: Vec<i128>) -> Vec<i128> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn primitive(v: Vec<i128>) -> Vec<i128> {
    let g = v.iter().fold(0, |g, &c| gcd_i128(g, c));
    if g <= 1 {
        v
    } else {
        v.into_iter().map(|c| c / g).collect()
    }
}

fn pseudo_rem(a: &[i128], b: &[i128]) -> Vec<i128> {
    let mut r = a.to_vec();
    let lb = *b.last().unwrap();
    while r.len() >= b.len() && !r.is_empty() {
        let lr = *r.last().unwrap();
        let shift = r.len() - b.len();
        for c in r.iter_mut() {
            *c *= lb;
        }
        for (k, &bc) in b.iter().enumerate() {
            r[k + shift] -= lr * bc;
        }
        r = primitive(trim(r));
    }
    r
}

fn poly_divmod_exact(a: &[i128], b: &[i128]) -> Option<(Vec<i128>, Vec<i128>)> {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    if r.len() < b.len() {
        return Some((vec![0], r));
    }
    let lb = *b.last()?;
    let mut q = vec![0i128; r.len() - b.len() + 1];
    while r.len() >= b.len() {
        let lr = *r.last().unwrap();
        if lr % lb != 0 {
            return None;
        }
        let f = lr / lb;
        let shift = r.len() - b.len();
        q[shift] = f;
        for (k, &bc) in b.iter().enumerate() {
            r[k + shift] -= f * bc;
        }
        r = trim(r);
    }
    Some((q, r))
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.coeffs.iter().rev() {
            let (e, c) = (*e, *c);
            let mag = c.abs();
            let var = match e {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{e}"),
            };
            let body = if var.is_empty() {
                mag.to_string()
            } else if mag == 1 {
                var
            } else {
                format!("{mag}{var}")
            };
            if first {
                write!(f, "{}{body}", if c < 0 { "-" } else { "" })?;
            } else {
                write!(f, " {} {body}", if c < 0 { "-" } else { "+" })?;
            }
            first = false;
        }
        Ok(())
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
