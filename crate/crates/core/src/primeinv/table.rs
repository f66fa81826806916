//! Arithmetic Milnor tables `μ̂_m(I)` and the matrices `T_S^{(d)}` built from them.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::arith::{binomial_signed, mod_reduce};
use crate::chainring::{ChainMatrix, ElementaryDivisors};
use crate::error::{Error, Result};
use crate::linkinv::{higher_linking_matrix, ranks_from_matrices, ModuleStructure};
use crate::magnus::{
    check_symmetries, MilnorTable, Modulus, MultiIndex, SymmetryReport, SymmetryViolation,
};

use super::{legendre, power_residue_index, redei_triple, PrimeSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// Power residue symbol.
    PowerResidue,
    /// Rédei triple symbol.
    Redei,
    /// `μ̂(c c a) = C(μ̂(c a), 2)` and its cyclic rotations.
    Binomial,
    UserSupplied,
    /// Not determined: the indeterminacy ideal is the whole ring.
    Unavailable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ArithEntry {
    pub value: Option<i128>,
    /// The entry is known modulo this number.
    pub modulus: u64,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, Serialize)]
pub struct ArithMilnorTable {
    pub l: u64,
    pub primes: Vec<u64>,
    pub m: u64,
    pub e_s: u32,
    pub entries: BTreeMap<MultiIndex, ArithEntry>,
}

/// Externally supplied values, e.g. `{ "m": 8, "entries": { "1 2 1": 3 } }`.
#[derive(Clone, Debug, Deserialize)]
pub struct UserMuTable {
    pub m: u64,
    pub entries: BTreeMap<String, i128>,
}

impl UserMuTable {
    pub fn from_json(text: &str) -> Result<UserMuTable> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("Milnor table JSON: {e}")))
    }
}

fn power_of(l: u64, m: u64) -> Option<u32> {
    let mut e = 0;
    let mut x = 1u64;
    while x < m {
        x = x.checked_mul(l)?;
        e += 1;
    }
    (x == m).then_some(e)
}

/// `μ̂_m(ij)` for all pairs, plus (for `l = 2`) `μ̂_2(ijk)` for all triples.
///
/// `m` must be `l^e` with `1 <= e <= e_S`.
pub fn arith_milnor_table(s: &PrimeSet, m: u64) -> Result<ArithMilnorTable> {
    let l = s.l();
    match power_of(l, m) {
        Some(e) if e >= 1 && e <= s.e_s() => {}
        _ => {
            return Err(Error::Precondition(format!(
                "modulus {m} is not l^e with 1 <= e <= {} (l = {l})",
                s.e_s()
            )))
        }
    }
    let p = s.primes();
    let n = s.n();
    let mut entries = BTreeMap::new();
    for idx in MultiIndex::all_of_length(n, 2) {
        let (i, j) = (idx.indices()[0], idx.indices()[1]);
        let v = if i == j {
            0
        } else {
            power_residue_index(p[j as usize - 1] as i128, p[i as usize - 1], m)?
        };
        entries.insert(
            idx,
            ArithEntry {
                value: Some(v as i128),
                modulus: m,
                provenance: Provenance::PowerResidue,
            },
        );
    }
    if l == 2 && s.e_s() >= 2 {
        for idx in MultiIndex::all_of_length(n, 3) {
            entries.insert(idx.clone(), triple_entry(p, idx.indices())?);
        }
    }
    Ok(ArithMilnorTable {
        l,
        primes: p.to_vec(),
        m,
        e_s: s.e_s(),
        entries,
    })
}

fn triple_entry(p: &[u64], idx: &[u32]) -> Result<ArithEntry> {
    let q = |k: u32| p[k as usize - 1];
    let (i, j, k) = (idx[0], idx[1], idx[2]);
    if i != j && j != k && i != k {
        let (a, b, c) = (q(i), q(j), q(k));
        let mut split = true;
        for (x, y) in [(a, b), (a, c), (b, c)] {
            split &= legendre(x as i128, y)? == 1;
        }
        if !split {
            return Ok(ArithEntry {
                value: None,
                modulus: 2,
                provenance: Provenance::Unavailable,
            });
        }
        let sym = redei_triple(a, b, c)?.symbol;
        return Ok(ArithEntry {
            value: Some(((1 - sym) / 2) as i128),
            modulus: 2,
            provenance: Provenance::Redei,
        });
    }
    let value = if i == j && j == k {
        0
    } else {
        // two copies of `c`, one of `a`: rotate to (c, c, a)
        let (c, a) = if i == j {
            (i, k)
        } else if j == k {
            (j, i)
        } else {
            (i, j)
        };
        let mu4 = power_residue_index(q(a) as i128, q(c), 4)? as i128;
        binomial_signed(mu4, 2).rem_euclid(2)
    };
    Ok(ArithEntry {
        value: Some(value),
        modulus: 2,
        provenance: Provenance::Binomial,
    })
}

impl ArithMilnorTable {
    pub fn n(&self) -> u32 {
        self.primes.len() as u32
    }

    pub fn get(&self, idx: &[u32]) -> Option<&ArithEntry> {
        self.entries.get(&MultiIndex::new(idx.to_vec()))
    }

    /// Overlays user-supplied values; each must be known mod a power of `l`.
    pub fn merge_user(&mut self, user: &UserMuTable) -> Result<()> {
        if power_of(self.l, user.m).is_none_or(|e| e == 0) {
            return Err(Error::Precondition(format!(
                "user modulus {} is not a power of l = {}",
                user.m, self.l
            )));
        }
        for (key, &v) in &user.entries {
            let idx = MultiIndex::parse(key)?;
            if idx.len() < 2 {
                return Err(Error::Parse(format!("multi-index '{key}' is too short")));
            }
            if let Some(&bad) = idx.indices().iter().find(|&&k| k == 0 || k > self.n()) {
                return Err(Error::GeneratorOutOfRange {
                    index: bad,
                    rank: self.n(),
                });
            }
            self.entries.insert(
                idx,
                ArithEntry {
                    value: Some(mod_reduce(v, user.m) as i128),
                    modulus: user.m,
                    provenance: Provenance::UserSupplied,
                },
            );
        }
        Ok(())
    }

    /// Lookup in the form `higher_linking_matrix` expects.
    pub fn lookup(&self, idx: &[u32]) -> Result<(i128, u64)> {
        let key = MultiIndex::new(idx.to_vec());
        match self.entries.get(&key) {
            Some(ArithEntry {
                value: Some(v),
                modulus,
                ..
            }) => Ok((*v, *modulus)),
            Some(_) => Err(Error::MissingMilnor(format!("{key} (undetermined)"))),
            None => Err(Error::MissingMilnor(key.to_string())),
        }
    }

    /// The shuffle relations that hold for arithmetic Milnor numbers: those
    /// with `|Hk| <= l^{e_S}`. Cyclic symmetry is not part of the statement
    /// (for `l > 2` already `μ(12) ≠ μ(21)` in general), so it is not checked.
    pub fn shuffle_check(&self) -> Result<SymmetryReport> {
        let full = check_symmetries(&self.to_milnor_table()?);
        let bound = (self.l as u128).saturating_pow(self.e_s);
        let mut out = SymmetryReport::default();
        let in_range =
            |left: &MultiIndex, right: &MultiIndex| (left.len() + right.len() + 1) as u128 <= bound;
        out.shuffle_checked = full.shuffle_checked;
        out.violations = full
            .violations
            .into_iter()
            .filter(|v| matches!(v, SymmetryViolation::Shuffle { left, right, .. } if in_range(left, right)))
            .collect();
        Ok(out)
    }

    /// All determined entries reduced to the smallest modulus present, as a
    /// `MilnorTable` of the largest degree for which every entry is known.
    pub fn to_milnor_table(&self) -> Result<MilnorTable> {
        let m = self
            .entries
            .values()
            .map(|e| e.modulus)
            .min()
            .unwrap_or(self.m);
        let e = power_of(self.l, m).unwrap_or(1);
        let mut mu = BTreeMap::new();
        let mut degree = 1;
        for len in 2.. {
            let all = MultiIndex::all_of_length(self.n(), len);
            let vals: Option<Vec<i128>> = all
                .iter()
                .map(|idx| self.entries.get(idx).and_then(|x| x.value))
                .collect();
            let Some(vals) = vals else { break };
            for (idx, v) in all.into_iter().zip(vals) {
                mu.insert(idx, v.rem_euclid(m as i128));
            }
            degree = len;
        }
        MilnorTable::from_mu(
            self.n(),
            degree,
            Modulus::PrimePower {
                l: self.l,
                e,
                e_s: self.e_s,
            },
            &mu,
        )
    }
}

/// `T_S^{(d)}` over `Ô/𝔭^d`.
pub fn t_s_matrix(table: &ArithMilnorTable, d: u32) -> Result<ChainMatrix> {
    higher_linking_matrix(table.n(), table.l, d, |idx| table.lookup(idx))
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassGroupPrediction {
    pub l: u64,
    pub primes: Vec<u64>,
    pub e: Vec<i64>,
    pub divisors: Vec<ElementaryDivisors>,
    pub structure: ModuleStructure,
}

/// Predicted `l`-part of the class group of the degree-`l` subfield of
/// `Q(ζ_{p_1 ⋯ p_n})` ramified at every `p_i`, via `e_1..e_{d_max}`.
pub fn class_group_prediction(
    s: &PrimeSet,
    d_max: u32,
    user: Option<&UserMuTable>,
) -> Result<ClassGroupPrediction> {
    if d_max == 0 {
        return Err(Error::InvalidDegree("d_max must be positive".into()));
    }
    let l = s.l();
    // length-2 entries enter at π^1 and must be known mod l^⌈(d−1)/(l−1)⌉
    let need = ((d_max.saturating_sub(1)) as u64).div_ceil(l - 1).max(1) as u32;
    let e = need.min(s.e_s());
    let mut table = arith_milnor_table(s, l.pow(e))?;
    if let Some(u) = user {
        table.merge_user(u)?;
    }
    let mats = (1..=d_max)
        .map(|d| t_s_matrix(&table, d))
        .collect::<Result<Vec<_>>>()?;
    let r = ranks_from_matrices(s.n(), l, &mats)?;
    Ok(ClassGroupPrediction {
        l,
        primes: s.primes().to_vec(),
        e: r.e,
        divisors: r.divisors,
        structure: r.structure,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn borromean_primes() -> PrimeSet {
        PrimeSet::new(2, vec![13, 61, 937]).unwrap()
    }

    #[test]
    fn borromean_table() {
        let t = arith_milnor_table(&borromean_primes(), 4).unwrap();
        for idx in MultiIndex::all_of_length(3, 3) {
            let v = t.get(idx.indices()).unwrap().value.unwrap();
            let mut sorted = idx.indices().to_vec();
            sorted.sort();
            assert_eq!(v, (sorted == [1, 2, 3]) as i128, "{idx}");
        }
        assert_eq!(t.get(&[1, 2]).unwrap().value, Some(0));
        let report = crate::magnus::check_symmetries(&t.to_milnor_table().unwrap());
        assert!(report.is_clean());
    }

    #[test]
    fn borromean_matrix_and_structure() {
        let t = arith_milnor_table(&borromean_primes(), 4).unwrap();
        let m = t_s_matrix(&t, 3).unwrap();
        assert_eq!(
            m.to_residues().unwrap(),
            vec![vec![0, 4, 4], vec![4, 0, 4], vec![4, 4, 0]]
        );
        let p = class_group_prediction(&borromean_primes(), 3, None).unwrap();
        assert_eq!(p.e, vec![2, 2, 0]);
        assert_eq!(p.structure.to_string(), "Z/4 + Z/4");
    }

    #[test]
    fn bad_modulus_and_precision() {
        let s = borromean_primes();
        assert!(arith_milnor_table(&s, 8).is_err());
        assert!(arith_milnor_table(&s, 6).is_err());
        assert!(matches!(
            class_group_prediction(&s, 4, None),
            Err(Error::Precision { .. })
        ));
    }

    #[test]
    fn undetermined_triples() {
        // (5/13) = −1, so [5, 13, 17]-type entries are undetermined
        let s = PrimeSet::new(2, vec![5, 13, 17]).unwrap();
        let t = arith_milnor_table(&s, 4).unwrap();
        assert_eq!(
            t.get(&[1, 2, 3]).unwrap().provenance,
            Provenance::Unavailable
        );
        assert!(matches!(t.lookup(&[1, 2, 3]), Err(Error::MissingMilnor(_))));
    }

    #[test]
    fn user_entries_override() {
        let mut t = arith_milnor_table(&borromean_primes(), 4).unwrap();
        let u = UserMuTable::from_json(r#"{ "m": 8, "entries": { "1 2 1": 11 } }"#).unwrap();
        t.merge_user(&u).unwrap();
        let e = t.get(&[1, 2, 1]).unwrap();
        assert_eq!(
            (e.value, e.modulus, e.provenance),
            (Some(3), 8, Provenance::UserSupplied)
        );
        let bad = UserMuTable::from_json(r#"{ "m": 8, "entries": { "1 4": 1 } }"#).unwrap();
        assert!(t.merge_user(&bad).is_err());
        assert!(UserMuTable::from_json("{").is_err());
    }
}
