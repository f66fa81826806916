//! Arithmetic side: power residue symbols, mod-`l` linking numbers, Rédei
//! triple symbols, arithmetic Milnor tables and higher linking matrices.

mod redei;
mod table;

pub use redei::{
    redei_triple, redei_triple_with_cap, search_cap, RedeiWitness, DEFAULT_SEARCH_CAP,
};
pub use table::{
    arith_milnor_table, class_group_prediction, t_s_matrix, ArithEntry, ArithMilnorTable,
    ClassGroupPrediction, Provenance, UserMuTable,
};

use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, mod_pow, mod_reduce, primitive_root};
use crate::error::{Error, Result};

/// A finite set of primes `p_i ≡ 1 mod l` (for `l = 2`: `p_i ≡ 1 mod 4`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeSet {
    l: u64,
    primes: Vec<u64>,
    e_s: u32,
}

#[derive(Deserialize)]
struct PrimeSetJson {
    l: u64,
    primes: Vec<u64>,
}

impl PrimeSet {
    pub fn new(l: u64, primes: Vec<u64>) -> Result<PrimeSet> {
        if !is_prime(l) {
            return Err(Error::Precondition(format!("l = {l} is not prime")));
        }
        if primes.is_empty() {
            return Err(Error::Precondition("empty prime set".into()));
        }
        for (k, &p) in primes.iter().enumerate() {
            if p == 2 || !is_prime(p) {
                return Err(Error::Precondition(format!("{p} is not an odd prime")));
            }
            if primes[..k].contains(&p) {
                return Err(Error::Precondition(format!("{p} repeated")));
            }
            let need = if l == 2 { 4 } else { l };
            if p % need != 1 {
                return Err(Error::Precondition(format!(
                    "{p} is not congruent to 1 mod {need}"
                )));
            }
        }
        let mut e_s = 1;
        while primes.iter().all(|&p| (p - 1) % l.pow(e_s + 1) == 0) {
            e_s += 1;
        }
        Ok(PrimeSet { l, primes, e_s })
    }

    pub fn from_json(text: &str) -> Result<PrimeSet> {
        let raw: PrimeSetJson =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("prime set JSON: {e}")))?;
        PrimeSet::new(raw.l, raw.primes)
    }

    pub fn l(&self) -> u64 {
        self.l
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn n(&self) -> u32 {
        self.primes.len() as u32
    }

    /// Largest `e` with every `p_i ≡ 1 mod l^e`.
    pub fn e_s(&self) -> u32 {
        self.e_s
    }
}

fn check_odd_prime(p: u64) -> Result<()> {
    if p == 2 || !is_prime(p) {
        return Err(Error::Precondition(format!("{p} is not an odd prime")));
    }
    Ok(())
}

/// Legendre symbol by Euler's criterion.
pub fn legendre(a: i128, p: u64) -> Result<i8> {
    check_odd_prime(p)?;
    let r = mod_pow(mod_reduce(a, p), (p - 1) / 2, p);
    Ok(match r {
        0 => 0,
        1 => 1,
        _ => -1,
    })
}

/// `k ∈ Z/m` with `a^{(p−1)/m} = ζ^k`, `ζ = g^{(p−1)/m}` for the smallest primitive root `g`.
pub fn power_residue_index(a: i128, p: u64, m: u64) -> Result<u64> {
    check_odd_prime(p)?;
    if m == 0 || (p - 1) % m != 0 {
        return Err(Error::Precondition(format!(
            "{p} is not congruent to 1 mod {m}"
        )));
    }
    let a = mod_reduce(a, p);
    if a == 0 {
        return Err(Error::Precondition(format!("{p} divides the argument")));
    }
    let g = primitive_root(p);
    let zeta = mod_pow(g, (p - 1) / m, p);
    let target = mod_pow(a, (p - 1) / m, p);
    let mut cur = 1u64;
    for k in 0..m {
        if cur == target {
            return Ok(k);
        }
        cur = ((cur as u128 * zeta as u128) % p as u128) as u64;
    }
    unreachable!("an m-th root of unity is a power of ζ")
}

/// `lk_l(p_i, p_j)`: index of `(p_j / p_i)_l`.
pub fn lk_l(p_i: u64, p_j: u64, l: u64) -> Result<u64> {
    power_residue_index(p_j as i128, p_i, l)
}

/// The mod-`l` linking matrix over `F_l`: off-diagonal `lk_l(p_i, p_j)`,
/// diagonal `−Σ_{j≠i} lk_l(p_i, p_j)`.
pub fn redei_matrix(s: &PrimeSet) -> Result<Vec<Vec<u64>>> {
    let l = s.l;
    let n = s.primes.len();
    let mut t = vec![vec![0u64; n]; n];
    for i in 0..n {
        let mut sum = 0u64;
        for j in 0..n {
            if i != j {
                let v = lk_l(s.primes[i], s.primes[j], l)?;
                t[i][j] = v;
                sum = (sum + v) % l;
            }
        }
        t[i][i] = (l - sum) % l;
    }
    Ok(t)
}

/// Rank of a matrix over `F_l`.
pub fn rank_mod(m: &[Vec<u64>], l: u64) -> usize {
    let mut a: Vec<Vec<u64>> = m
        .iter()
        .map(|r| r.iter().map(|x| x % l).collect())
        .collect();
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| a[r][c] != 0) else {
            continue;
        };
        a.swap(rank, p);
        let inv = mod_pow(a[rank][c], l - 2, l);
        for r in 0..rows {
            if r != rank && a[r][c] != 0 {
                let f = a[r][c] * inv % l;
                for k in 0..cols {
                    a[r][k] = (a[r][k] + l * l - f * a[rank][k] % l) % l;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// `e_2 = n − 1 − rank_{F_l}(T_S mod l)`.
pub fn four_rank_prediction(s: &PrimeSet) -> Result<i64> {
    let t = redei_matrix(s)?;
    Ok(s.n() as i64 - 1 - rank_mod(&t, s.l) as i64)
}

/// `(Σ_{x ∈ F_p} ζ^{x²})^{q−1}` with `ζ` a primitive `p`-th root of unity over `F_q`.
///
/// The result always equals `(q/p)`; the printed identity with `(p/q)`
/// agrees with it whenever `p` or `q` is `1 mod 4`.
pub fn gauss_sum_symbol(p: u64, q: u64) -> Result<i8> {
    check_odd_prime(p)?;
    check_odd_prime(q)?;
    if p == q {
        return Err(Error::Precondition("p and q must be distinct".into()));
    }
    let n = p as usize;
    // work in F_q[y]/(y^p − 1), then reduce modulo Φ_p
    let mul = |a: &[u64], b: &[u64]| -> Vec<u64> {
        let mut out = vec![0u64; n];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y != 0 {
                    let k = (i + j) % n;
                    out[k] = ((out[k] as u128 + x as u128 * y as u128) % q as u128) as u64;
                }
            }
        }
        out
    };
    let mut g = vec![0u64; n];
    for x in 0..p {
        g[(x * x % p) as usize] += 1;
    }
    for c in g.iter_mut() {
        *c %= q;
    }
    let mut acc = vec![0u64; n];
    acc[0] = 1;
    let mut e = q - 1;
    let mut base = g;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(&acc, &base);
        }
        base = mul(&base, &base);
        e >>= 1;
    }
    let top = acc[n - 1];
    let reduced: Vec<u64> = acc.iter().map(|&c| (c + q - top) % q).collect();
    if reduced[1..n - 1].iter().any(|&c| c != 0) {
        return Err(Error::Inconsistent(format!(
            "Gauss sum power for ({p},{q}) is not a constant"
        )));
    }
    match reduced[0] {
        1 => Ok(1),
        c if c == q - 1 => Ok(-1),
        c => Err(Error::Inconsistent(format!(
            "Gauss sum power for ({p},{q}) is {c}, not ±1"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre(13, 61).unwrap(), 1);
        assert_eq!(legendre(1, 7).unwrap(), 1);
        assert_eq!(legendre(5, 13).unwrap(), -1);
        assert_eq!(legendre(26, 13).unwrap(), 0);
        assert!(legendre(3, 2).is_err());
        assert!(legendre(3, 9).is_err());
    }

    #[test]
    fn power_residue_examples() {
        assert_eq!(power_residue_index(61, 13, 4).unwrap(), 0);
        assert_eq!(power_residue_index(2, 13, 4).unwrap(), 1);
        assert_eq!(power_residue_index(81, 13, 4).unwrap(), 0);
        assert!(power_residue_index(2, 7, 4).is_err());
        assert!(power_residue_index(13, 13, 4).is_err());
    }

    #[test]
    fn lk_examples() {
        for (a, b) in [(13, 61), (13, 937), (61, 937)] {
            assert_eq!(lk_l(a, b, 2).unwrap(), 0);
        }
        assert_eq!(lk_l(5, 13, 2).unwrap(), 1);
        assert_eq!(lk_l(13, 5, 2).unwrap(), 1);
    }

    #[test]
    fn prime_sets() {
        let s = PrimeSet::new(2, vec![13, 61, 937]).unwrap();
        assert_eq!(s.e_s(), 2);
        assert!(PrimeSet::new(2, vec![7, 11]).is_err());
        assert!(PrimeSet::new(3, vec![7, 7]).is_err());
        assert!(PrimeSet::new(3, vec![5]).is_err());
        assert_eq!(PrimeSet::new(3, vec![7, 19, 37]).unwrap().e_s(), 1);
        let j = PrimeSet::from_json(r#"{ "l": 2, "primes": [13, 61, 937] }"#).unwrap();
        assert_eq!(j, s);
    }

    #[test]
    fn redei_matrix_examples() {
        let s = PrimeSet::new(2, vec![13, 61, 937]).unwrap();
        assert!(redei_matrix(&s).unwrap().iter().flatten().all(|&v| v == 0));
        assert_eq!(four_rank_prediction(&s).unwrap(), 2);
        let s = PrimeSet::new(2, vec![5, 13]).unwrap();
        assert_eq!(redei_matrix(&s).unwrap(), vec![vec![1, 1], vec![1, 1]]);
        assert_eq!(four_rank_prediction(&s).unwrap(), 0);
        assert_eq!(
            four_rank_prediction(&PrimeSet::new(2, vec![5]).unwrap()).unwrap(),
            0
        );
    }

    #[test]
    fn gauss_sum_examples() {
        assert_eq!(gauss_sum_symbol(5, 3).unwrap(), -1);
        assert_eq!(gauss_sum_symbol(7, 3).unwrap(), legendre(3, 7).unwrap());
        assert_eq!(gauss_sum_symbol(3, 7).unwrap(), legendre(7, 3).unwrap());
        assert!(gauss_sum_symbol(5, 5).is_err());
    }
}
