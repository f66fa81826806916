//! Higher linking matrices `T^{(d)}` and the `𝔭^d`-ranks they determine.

use std::fmt;

use serde::Serialize;

use crate::arith::valuation;
use crate::chainring::{e_d_from_divisors, snf, ChainMatrix, ChainRing, ElementaryDivisors};
use crate::error::{Error, Result};
use crate::magnus::{MilnorTable, MultiIndex};

/// Builds the `d`-th linking matrix over `Ô/𝔭^d` from a Milnor-number lookup.
///
/// `mu(I)` returns the value and the modulus it is known to (0 = exactly);
/// a value known mod `l^e` multiplied by `π^r` is only usable when
/// `(l − 1)e + r >= d`.
pub fn higher_linking_matrix<F>(n: u32, l: u64, d: u32, mu: F) -> Result<ChainMatrix>
where
    F: Fn(&[u32]) -> Result<(i128, u64)>,
{
    let ring = ChainRing::new(l, d)?;
    let mut m = ChainMatrix::zeros(ring, n as usize, n as usize);
    let pi_pow: Vec<_> = (0..=d).map(|r| ring.pi().pow(r as u64)).collect();
    let term = |idx: &[u32], r: u32| -> Result<Option<crate::chainring::ChainRingElt>> {
        if r >= d {
            return Ok(None);
        }
        let (v, modulus) = mu(idx)?;
        if modulus != 0 {
            let e = if modulus == 1 {
                0
            } else {
                valuation(modulus as u128, l)
            };
            if l.pow(e) != modulus {
                return Err(Error::Precondition(format!(
                    "modulus {modulus} is not a power of l = {l}"
                )));
            }
            if (l - 1) * e as u64 + (r as u64) < d as u64 {
                let need_e = (d - r) as u64;
                let need_e = need_e.div_ceil(l - 1) as u32;
                return Err(Error::Precision {
                    index: MultiIndex::new(idx.to_vec()).to_string(),
                    have: modulus,
                    need: l.pow(need_e),
                });
            }
        }
        Ok(Some(ring.from_int(v).mul(&pi_pow[r as usize])?))
    };
    for i in 1..=n {
        // diagonal: −Σ_{r=1}^{d−1} Σ_{i_r ≠ i} μ(i_1 ⋯ i_r i) π^r
        let mut diag = ring.zero();
        for r in 1..d {
            for head in MultiIndex::all_of_length(n, r as usize) {
                if *head.indices().last().unwrap() == i {
                    continue;
                }
                let mut idx = head.indices().to_vec();
                idx.push(i);
                if let Some(t) = term(&idx, r)? {
                    diag = diag.sub(&t)?;
                }
            }
        }
        m.set(i as usize - 1, i as usize - 1, diag);
        for j in 1..=n {
            if j == i {
                continue;
            }
            // μ(ji)π + Σ_{r=1}^{d−2} Σ μ(i_1 ⋯ i_r j i) π^{r+1}
            let mut off = ring.zero();
            if let Some(t) = term(&[j, i], 1)? {
                off = off.add(&t)?;
            }
            for r in 1..d.saturating_sub(1) {
                for head in MultiIndex::all_of_length(n, r as usize) {
                    let mut idx = head.indices().to_vec();
                    idx.push(j);
                    idx.push(i);
                    if let Some(t) = term(&idx, r + 1)? {
                        off = off.add(&t)?;
                    }
                }
            }
            m.set(i as usize - 1, j as usize - 1, off);
        }
    }
    Ok(m)
}

/// `T_L^{(d)}` from a link's Milnor table.
pub fn t_l_matrix(table: &MilnorTable, l: u64, d: u32) -> Result<ChainMatrix> {
    let modulus = table.modulus().value();
    higher_linking_matrix(table.n(), l, d, |idx| {
        table
            .mu(idx)
            .map(|v| (v, modulus))
            .ok_or_else(|| Error::MissingMilnor(MultiIndex::new(idx.to_vec()).to_string()))
    })
}

/// `H ≅ ⨁ Ô/𝔭^{a_i}` as far as the computed ranks determine it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModuleStructure {
    pub l: u64,
    /// Exponents `a_i` that are pinned down, ascending.
    pub exponents: Vec<u32>,
    /// Number of summands only known to satisfy `a_i >= d_max`.
    pub unresolved: usize,
    pub d_max: u32,
}

impl ModuleStructure {
    pub fn is_complete(&self) -> bool {
        self.unresolved == 0
    }
}

impl fmt::Display for ModuleStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let summand = |a: String| {
            if self.l == 2 {
                format!("Z/2^{a}")
            } else {
                format!("O/p^{a}")
            }
        };
        let mut parts: Vec<String> = self
            .exponents
            .iter()
            .map(|&a| {
                if self.l == 2 {
                    format!("Z/{}", 1u128 << a)
                } else {
                    summand(a.to_string())
                }
            })
            .collect();
        for _ in 0..self.unresolved {
            parts.push(summand(format!("(>={})", self.d_max)));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverRanks {
    pub l: u64,
    pub n: u32,
    /// `e_1, …, e_{d_max}`.
    pub e: Vec<i64>,
    pub divisors: Vec<ElementaryDivisors>,
    pub structure: ModuleStructure,
}

/// Ranks `e_1..e_{d_max}` from the matrices `T^{(1)}, …, T^{(d_max)}`.
pub fn ranks_from_matrices(n: u32, l: u64, matrices: &[ChainMatrix]) -> Result<CoverRanks> {
    let mut e = Vec::new();
    let mut divisors = Vec::new();
    for (k, m) in matrices.iter().enumerate() {
        let d = k as u32 + 1;
        let div = snf(m);
        e.push(e_d_from_divisors(&div, d)?);
        divisors.push(div);
    }
    if e.first().is_some_and(|&e1| e1 != n as i64 - 1) {
        return Err(Error::Inconsistent(format!(
            "e_1 = {} but n − 1 = {}",
            e[0],
            n as i64 - 1
        )));
    }
    if e.windows(2).any(|w| w[1] > w[0]) {
        return Err(Error::Inconsistent(format!(
            "ranks {e:?} are not nonincreasing"
        )));
    }
    let d_max = matrices.len() as u32;
    let mut exponents = Vec::new();
    for k in 1..d_max as usize {
        for _ in 0..(e[k - 1] - e[k]) {
            exponents.push(k as u32);
        }
    }
    let unresolved = e.last().copied().unwrap_or(0) as usize;
    Ok(CoverRanks {
        l,
        n,
        e,
        divisors,
        structure: ModuleStructure {
            l,
            exponents,
            unresolved,
            d_max,
        },
    })
}

/// `e_d` for `d = 1..=d_max` from the link's Milnor table (degree >= `d_max`).
pub fn cover_homology_ranks(table: &MilnorTable, l: u64, d_max: u32) -> Result<CoverRanks> {
    if d_max == 0 {
        return Err(Error::InvalidDegree("d_max must be positive".into()));
    }
    let mats = (1..=d_max)
        .map(|d| t_l_matrix(table, l, d))
        .collect::<Result<Vec<_>>>()?;
    ranks_from_matrices(table.n(), l, &mats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::magnus::{milnor_table, Modulus};
    use crate::words::{FreeGroup, FreeWord};

    fn hopf() -> MilnorTable {
        let g = FreeGroup::new(2);
        milnor_table(
            &[g.parse_word("x2").unwrap(), g.parse_word("x1").unwrap()],
            3,
            Modulus::Integer,
        )
        .unwrap()
    }

    #[test]
    fn hopf_matrix_and_ranks() {
        let m = t_l_matrix(&hopf(), 2, 2).unwrap();
        // diag −π = 2, off-diagonal π = −2 ≡ 2 mod 4
        assert_eq!(m.to_residues().unwrap(), vec![vec![2, 2], vec![2, 2]]);
        let r = cover_homology_ranks(&hopf(), 2, 2).unwrap();
        assert_eq!(r.e, vec![1, 0]);
        assert_eq!(r.structure.to_string(), "Z/2");
    }

    #[test]
    fn trivial_link_ranks() {
        let t = milnor_table(
            &[FreeWord::empty(), FreeWord::empty(), FreeWord::empty()],
            4,
            Modulus::Integer,
        )
        .unwrap();
        let r = cover_homology_ranks(&t, 3, 4).unwrap();
        assert_eq!(r.e, vec![2, 2, 2, 2]);
        assert_eq!(r.structure.unresolved, 2);
        assert!(t_l_matrix(&t, 3, 3).unwrap().to_residues().is_none());
    }

    #[test]
    fn missing_entries_and_precision() {
        assert!(matches!(
            t_l_matrix(&hopf(), 2, 4),
            Err(Error::MissingMilnor(_))
        ));
        let res = higher_linking_matrix(2, 2, 3, |_| Ok((0, 2)));
        assert!(matches!(res, Err(Error::Precision { .. })));
    }
}
