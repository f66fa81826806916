//! Alexander matrices, elementary ideals and orders of cyclic branched covers.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::laurent::LaurentPoly;
use super::pd::WirtingerPresentation;
use crate::error::{Error, Result};
use crate::magnus::fox_derive;
use crate::words::GroupRingElt;

/// `(relators × generators)` matrix of abelianized Fox derivatives, every
/// generator sent to `t`.
pub fn alexander_matrix(w: &WirtingerPresentation) -> Vec<Vec<LaurentPoly>> {
    let g = w.generator_count();
    w.relators
        .iter()
        .map(|r| {
            let e = GroupRingElt::from_word(r.clone());
            (1..=g as u32)
                .map(|i| {
                    let mut p = LaurentPoly::zero();
                    for (exp, c) in fox_derive(&e, i).abelianize(|_| 1) {
                        p.add_term(exp, c as i128);
                    }
                    p
                })
                .collect()
        })
        .collect()
}

/// Fraction-free determinant over `Z[t^{±1}]`.
pub fn determinant(m: &[Vec<LaurentPoly>]) -> LaurentPoly {
    let n = m.len();
    if n == 0 {
        return LaurentPoly::one();
    }
    let mut a: Vec<Vec<LaurentPoly>> = m.to_vec();
    let mut sign = 1i128;
    let mut prev = LaurentPoly::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return LaurentPoly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[i][j].mul(&a[k][k]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
        }
        prev = a[k][k].clone();
    }
    a[n - 1][n - 1].scale(sign)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Normalized gcd of all `k × k` minors (`k = 0` gives 1; no minors gives 0).
pub fn elementary_ideal(m: &[Vec<LaurentPoly>], k: usize) -> LaurentPoly {
    if k == 0 {
        return LaurentPoly::one();
    }
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut g = LaurentPoly::zero();
    for rs in subsets(rows, k) {
        for cs in subsets(cols, k) {
            let sub: Vec<Vec<LaurentPoly>> = rs
                .iter()
                .map(|&i| cs.iter().map(|&j| m[i][j].clone()).collect())
                .collect();
            g = g.gcd(&determinant(&sub));
        }
    }
    g
}

/// Alexander polynomial of a knot with column `col` of the Alexander matrix deleted.
pub fn alexander_polynomial_deleting(w: &WirtingerPresentation, col: usize) -> Result<LaurentPoly> {
    if w.n_components != 1 {
        return Err(Error::Precondition(format!(
            "Alexander polynomial pipeline needs a knot, got {} components",
            w.n_components
        )));
    }
    let g = w.generator_count();
    if col >= g {
        return Err(Error::Precondition(format!("column {col} out of range")));
    }
    let m: Vec<Vec<LaurentPoly>> = alexander_matrix(w)
        .into_iter()
        .map(|row| {
            row.into_iter()
                .enumerate()
                .filter(|(j, _)| *j != col)
                .map(|(_, p)| p)
                .collect()
        })
        .collect();
    let delta = elementary_ideal(&m, g - 1);
    if delta.is_zero() {
        return Err(Error::Inconsistent("Alexander polynomial vanishes".into()));
    }
    Ok(delta)
}

pub fn alexander_polynomial(w: &WirtingerPresentation) -> Result<LaurentPoly> {
    alexander_polynomial_deleting(w, w.generator_count().saturating_sub(1))
}

fn rat_poly(p: &LaurentPoly) -> Vec<BigRational> {
    p.to_poly()
        .into_iter()
        .map(|c| BigRational::from_integer(BigInt::from(c)))
        .collect()
}

fn trim(v: &mut Vec<BigRational>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

fn rem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r = a.to_vec();
    trim(&mut r);
    let lb = b.last().unwrap().clone();
    while r.len() >= b.len() {
        let f = r.last().unwrap() / &lb;
        let shift = r.len() - b.len();
        for (k, bc) in b.iter().enumerate() {
            r[k + shift] = &r[k + shift] - &f * bc;
        }
        r.pop();
        trim(&mut r);
    }
    r
}

/// Resultant of two integer polynomials (coefficient vectors, constant first).
fn resultant(a: &[BigRational], b: &[BigRational]) -> BigRational {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    if a.is_empty() || b.is_empty() {
        return BigRational::zero();
    }
    let mut acc = BigRational::one();
    loop {
        let m = a.len() - 1;
        let k = b.len() - 1;
        if k == 0 {
            return acc * num_traits::pow(b[0].clone(), m);
        }
        let r = rem(&a, &b);
        if r.is_empty() {
            return BigRational::zero();
        }
        if (m * k) % 2 == 1 {
            acc = -acc;
        }
        acc *= num_traits::pow(b.last().unwrap().clone(), m - (r.len() - 1));
        a = b;
        b = r;
    }
}

/// `|∏_{ζ^n = 1} Δ(ζ)| = |Res(Δ, t^n − 1)|`; 0 when `Δ` vanishes at an `n`-th root of unity.
pub fn branched_cover_order(delta: &LaurentPoly, n: u64) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::InvalidDegree(
            "branched cover degree must be positive".into(),
        ));
    }
    let mut g = vec![BigRational::zero(); n as usize + 1];
    g[0] = -BigRational::one();
    g[n as usize] = BigRational::one();
    let r = resultant(&rat_poly(delta), &g);
    debug_assert!(r.is_integer());
    Ok(r.to_integer().abs().to_biguint().expect("absolute value"))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IwasawaFit {
    pub p: u64,
    /// `v_p` of the cover order for `p^n`, `n = 1..=n_max`.
    pub valuations: Vec<u64>,
    pub lambda: f64,
    pub mu: f64,
    pub nu: f64,
    /// Whether the parameters fitted on the last three points are integers.
    pub integral: bool,
    /// `v_n − (λn + μp^n + ν)` for every `n` (empty unless integral).
    pub residuals: Vec<i64>,
    /// Integral fit that also matches every point in the tail of length `min(4, n_max)`.
    pub stable: bool,
}

fn p_valuation(x: &BigUint, p: u64) -> u64 {
    let p = BigUint::from(p);
    let mut v = 0;
    let mut x = x.clone();
    while (&x % &p).is_zero() {
        x /= &p;
        v += 1;
    }
    v
}

/// Fits `v_n = λn + μp^n + ν` to the `p`-parts of the `p^n`-fold cover orders.
pub fn iwasawa_growth_check(delta: &LaurentPoly, p: u64, n_max: u32) -> Result<IwasawaFit> {
    if n_max < 3 {
        return Err(Error::Precondition(
            "need n_max >= 3 to fit three parameters".into(),
        ));
    }
    let mut vals = Vec::new();
    for n in 1..=n_max {
        let order = branched_cover_order(delta, p.pow(n))?;
        if order.is_zero() {
            return Err(Error::InfiniteOrder(format!(
                "{}-fold cover of Δ = {delta}",
                p.pow(n)
            )));
        }
        vals.push(p_valuation(&order, p));
    }
    let k = n_max as usize;
    let v = |n: usize| vals[n - 1] as i128;
    let pn = |n: usize| (p as i128).pow(n as u32);
    let n0 = k - 2;
    let d1 = v(n0 + 1) - v(n0);
    let d2 = v(n0 + 2) - v(n0 + 1);
    let mu_den = pn(n0) * (p as i128 - 1).pow(2);
    let mu_num = d2 - d1;
    let mu = mu_num as f64 / mu_den as f64;
    // λ = d1 − μ(p^{n0+1} − p^{n0}),  ν = v(n0) − λ n0 − μ p^{n0}
    let lam_num = d1 * mu_den - mu_num * (pn(n0 + 1) - pn(n0));
    let lambda = lam_num as f64 / mu_den as f64;
    let nu_num = v(n0) * mu_den - lam_num * n0 as i128 - mu_num * pn(n0);
    let nu = nu_num as f64 / mu_den as f64;
    let integral = mu_num % mu_den == 0 && lam_num % mu_den == 0 && nu_num % mu_den == 0;
    let mut residuals = Vec::new();
    let mut stable = false;
    if integral {
        let (l, m, c) = (lam_num / mu_den, mu_num / mu_den, nu_num / mu_den);
        residuals = (1..=k)
            .map(|n| (v(n) - (l * n as i128 + m * pn(n) + c)) as i64)
            .collect();
        let tail = k.min(4);
        stable = residuals[k - tail..].iter().all(|&r| r == 0);
    }
    Ok(IwasawaFit {
        p,
        valuations: vals,
        lambda,
        mu,
        nu,
        integral,
        residuals,
        stable,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i128]) -> LaurentPoly {
        LaurentPoly::from_coeffs(0, c)
    }

    #[test]
    fn cover_orders() {
        let tre = p(&[1, -1, 1]);
        assert_eq!(branched_cover_order(&tre, 1).unwrap(), BigUint::from(1u32));
        assert_eq!(branched_cover_order(&tre, 2).unwrap(), BigUint::from(3u32));
        assert_eq!(branched_cover_order(&tre, 3).unwrap(), BigUint::from(4u32));
        assert!(branched_cover_order(&tre, 6).unwrap().is_zero());
        assert_eq!(
            branched_cover_order(&LaurentPoly::one(), 7).unwrap(),
            BigUint::from(1u32)
        );
        let fig8 = p(&[1, -3, 1]);
        assert_eq!(branched_cover_order(&fig8, 2).unwrap(), BigUint::from(5u32));
        assert!(branched_cover_order(&tre, 0).is_err());
    }

    #[test]
    fn cover_order_matches_circulant_oracle() {
        // |∏ Δ(ζ)| by a direct product over complex roots of unity
        for (c, n) in [
            (vec![2i128, -3, 2], 5u64),
            (vec![1, -3, 1], 4),
            (vec![3, -1], 6),
            (vec![1, 0, -1, 1], 7),
        ] {
            let mut re = 1.0f64;
            let mut im = 0.0f64;
            for k in 0..n {
                let th = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
                let (mut vr, mut vi) = (0.0, 0.0);
                for (e, &a) in c.iter().enumerate() {
                    vr += a as f64 * (th * e as f64).cos();
                    vi += a as f64 * (th * e as f64).sin();
                }
                (re, im) = (re * vr - im * vi, re * vi + im * vr);
            }
            let expect = (re * re + im * im).sqrt().round() as u64;
            assert_eq!(
                branched_cover_order(&p(&c), n).unwrap(),
                BigUint::from(expect)
            );
        }
    }

    #[test]
    fn iwasawa_examples() {
        let fit = iwasawa_growth_check(&p(&[1, -1, 1]), 2, 4).unwrap();
        assert_eq!(fit.valuations, vec![0, 0, 0, 0]);
        assert!(fit.stable && fit.lambda == 0.0 && fit.mu == 0.0 && fit.nu == 0.0);
        // constant 2: order 2^{p^n}, so μ = 1
        let fit = iwasawa_growth_check(&p(&[2]), 2, 4).unwrap();
        assert_eq!(fit.valuations, vec![2, 4, 8, 16]);
        assert!(fit.stable && fit.mu == 1.0 && fit.lambda == 0.0);
        // t − 3 at p = 2: v_2(3^{2^n} − 1) = n + 2
        let fit = iwasawa_growth_check(&p(&[-3, 1]), 2, 5).unwrap();
        assert_eq!(fit.valuations, vec![3, 4, 5, 6, 7]);
        assert!(fit.stable && fit.lambda == 1.0 && fit.nu == 2.0);
        assert!(matches!(
            iwasawa_growth_check(&p(&[1, 1]), 2, 3),
            Err(Error::InfiniteOrder(_))
        ));
    }
}
