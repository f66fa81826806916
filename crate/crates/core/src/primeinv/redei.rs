//! Rédei's triple symbol `[p1, p2, p3] ∈ {±1}`.

use serde::Serialize;

use crate::arith::{is_square, isqrt, mod_reduce, sqrt_mod};
use crate::error::{Error, Result};

use super::legendre;

/// Default bound on `|b|, |c|` for the conic search.
pub const DEFAULT_SEARCH_CAP: u64 = 1 << 14;

/// A primitive solution of `a² = p·b² + q·c²` with `b` even and `a − b ≡ 1 mod 4`,
/// used to build `α = a + b√p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RedeiWitness {
    pub symbol: i8,
    pub a: i64,
    pub b: i64,
    pub c: i64,
    /// The prime `p` under the square root in `α`.
    pub base: u64,
    /// Root count of `X⁴ − 2aX² + q c²` mod `p3`; 4 exactly when the symbol is `+1`.
    pub quartic_roots: u32,
}

/// The search cap: `ARITHTOP_SEARCH_CAP` if set to a number, else [`DEFAULT_SEARCH_CAP`].
pub fn search_cap() -> u64 {
    std::env::var("ARITHTOP_SEARCH_CAP")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_SEARCH_CAP)
}

/// `[p1, p2, p3]` with the cap from [`search_cap`].
pub fn redei_triple(p1: u64, p2: u64, p3: u64) -> Result<RedeiWitness> {
    redei_triple_with_cap(p1, p2, p3, search_cap())
}

/// `[p1, p2, p3]`: splitting of `p3` in the dihedral degree-8 extension
/// ramified only at `p1, p2` (and infinity).
///
/// Requires distinct primes `≡ 1 mod 4` with all pairwise Legendre symbols `+1`.
pub fn redei_triple_with_cap(p1: u64, p2: u64, p3: u64, cap: u64) -> Result<RedeiWitness> {
    let ps = [p1, p2, p3];
    for &p in &ps {
        if p % 4 != 1 || !crate::arith::is_prime(p) {
            return Err(Error::Precondition(format!(
                "{p} is not a prime congruent to 1 mod 4"
            )));
        }
    }
    if p1 == p2 || p1 == p3 || p2 == p3 {
        return Err(Error::Precondition(
            "Rédei symbol needs three distinct primes".into(),
        ));
    }
    for (x, y) in [(p1, p2), (p1, p3), (p2, p3)] {
        if legendre(x as i128, y)? != 1 {
            return Err(Error::Precondition(format!(
                "({x}/{y}) = -1; the symbol is undefined"
            )));
        }
    }
    let mut bound_b = isqrt(p2) + 1;
    let mut bound_c = isqrt(p1) + 1;
    let mut lo_b = 0u64;
    let mut lo_c = 1u64;
    loop {
        let cb = bound_b.min(cap);
        let cc = bound_c.min(cap);
        for c in 1..=cc {
            for b in 0..=cb {
                if b < lo_b && c < lo_c {
                    continue;
                }
                if let Some(w) = try_solution(p1, p2, p3, b, c)? {
                    return Ok(w);
                }
            }
        }
        if cb >= cap && cc >= cap {
            return Err(Error::SearchExhausted(format!(
                "no usable solution of a² = {p1}b² + {p2}c² with |b|, |c| <= {cap}"
            )));
        }
        lo_b = cb + 1;
        lo_c = cc + 1;
        bound_b *= 2;
        bound_c *= 2;
    }
}

fn try_solution(p1: u64, p2: u64, p3: u64, b: u64, c: u64) -> Result<Option<RedeiWitness>> {
    let rhs = p1 as u128 * (b as u128).pow(2) + p2 as u128 * (c as u128).pow(2);
    let Ok(rhs) = u64::try_from(rhs) else {
        return Ok(None);
    };
    if !is_square(rhs) {
        return Ok(None);
    }
    let a = isqrt(rhs);
    if crate::arith::gcd_u64(crate::arith::gcd_u64(a, b), c) != 1 {
        return Ok(None);
    }
    // exactly one of b, c is even; put the even one next to the square root
    let (base, other, mut a, b, c) = if b % 2 == 0 {
        (p1, p2, a as i64, b as i64, c as i64)
    } else {
        (p2, p1, a as i64, c as i64, b as i64)
    };
    if c as u64 % p3 == 0 || b as u64 % p3 == 0 {
        return Ok(None);
    }
    if (a - b).rem_euclid(4) != 1 {
        a = -a;
    }
    let s = sqrt_mod(base, p3)
        .ok_or_else(|| Error::Inconsistent(format!("{base} is not a square mod {p3}")))?;
    let alpha = a as i128 + b as i128 * s as i128;
    let symbol = legendre(alpha, p3)?;
    if symbol == 0 {
        return Ok(None);
    }
    let roots = quartic_roots(a, other, c, p3);
    if (roots == 4) != (symbol == 1) {
        return Err(Error::Inconsistent(format!(
            "Legendre evaluation {symbol} disagrees with quartic root count {roots} for [{p1},{p2},{p3}]"
        )));
    }
    Ok(Some(RedeiWitness {
        symbol,
        a,
        b,
        c,
        base,
        quartic_roots: roots,
    }))
}

/// Number of roots of `X⁴ − 2aX² + q c²` in `F_p`, by exhaustion.
fn quartic_roots(a: i64, q: u64, c: i64, p: u64) -> u32 {
    let two_a = mod_reduce(2 * a as i128, p) as u128;
    let k = mod_reduce(q as i128 * (c as i128).pow(2), p) as u128;
    let p128 = p as u128;
    (0..p128)
        .filter(|&x| {
            let x2 = x * x % p128;
            (x2 * x2 + p128 * p128 - two_a * x2 % p128 + k) % p128 == 0
        })
        .count() as u32
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn borromean_primes() {
        let w = redei_triple(13, 61, 937).unwrap();
        assert_eq!(w.symbol, -1);
        let other = if w.base == 13 { 61 } else { 13 };
        assert_eq!(w.a * w.a, w.base as i64 * w.b * w.b + other * w.c * w.c);
        assert_eq!(w.b % 2, 0);
        assert_eq!((w.a - w.b).rem_euclid(4), 1);
        assert_eq!(w.quartic_roots, 0);
    }

    #[test]
    fn preconditions() {
        assert!(matches!(
            redei_triple(5, 13, 17),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            redei_triple(13, 13, 61),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            redei_triple(7, 13, 61),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn cap_exhaustion() {
        assert!(matches!(
            redei_triple_with_cap(13, 61, 937, 0),
            Err(Error::SearchExhausted(_))
        ));
    }
}
