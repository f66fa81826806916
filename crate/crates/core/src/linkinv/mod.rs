//! Links: presentations, longitudes, linking and Milnor data, nilpotent
//! representations, Alexander invariants and higher linking matrices.

mod alexander;
mod cover;
mod laurent;
mod pd;

pub use alexander::{
    alexander_matrix, alexander_polynomial, alexander_polynomial_deleting, branched_cover_order,
    determinant, elementary_ideal, iwasawa_growth_check, IwasawaFit,
};
pub use cover::{
    cover_homology_ranks, higher_linking_matrix, ranks_from_matrices, t_l_matrix, CoverRanks,
    ModuleStructure,
};
pub use laurent::LaurentPoly;
pub use pd::{pd_to_wirtinger, PDCode, Underpass, WirtingerPresentation};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::magnus::{MilnorTable, MultiIndex};
use crate::words::{FreeGroup, FreeWord};

/// Meridian–longitude data of an `n`-component link: `y_j` is a word in the
/// meridians `x_1, …, x_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinkPresentation {
    n: u32,
    longitudes: Vec<FreeWord>,
    relators: Vec<FreeWord>,
}

impl LinkPresentation {
    /// Checks ranks and zero framing; the relators are `[x_j, y_j]`.
    pub fn new(longitudes: Vec<FreeWord>) -> Result<LinkPresentation> {
        let n = longitudes.len() as u32;
        let group = FreeGroup::new(n);
        for (j, y) in longitudes.iter().enumerate() {
            group.check(y)?;
            let sum = y.exponent_sum(j as u32 + 1);
            if sum != 0 {
                return Err(Error::Framing {
                    component: j + 1,
                    sum,
                });
            }
        }
        let relators = longitudes
            .iter()
            .enumerate()
            .map(|(j, y)| FreeWord::commutator(&FreeWord::generator(j as u32 + 1), y))
            .collect();
        Ok(LinkPresentation {
            n,
            longitudes,
            relators,
        })
    }

    pub fn parse_longitudes(words: &[String]) -> Result<LinkPresentation> {
        let group = FreeGroup::new(words.len() as u32);
        let ys = words
            .iter()
            .map(|w| group.parse_word(w))
            .collect::<Result<Vec<_>>>()?;
        LinkPresentation::new(ys)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn longitudes(&self) -> &[FreeWord] {
        &self.longitudes
    }

    pub fn relators(&self) -> &[FreeWord] {
        &self.relators
    }
}

/// Link input as accepted in JSON files.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum LinkInput {
    Longitudes { n: u32, longitudes: Vec<String> },
    Pd { pd: Vec<[u32; 4]>, signs: Vec<i8> },
}

/// A link together with whatever diagram it came from.
#[derive(Clone, Debug)]
pub struct LoadedLink {
    pub wirtinger: Option<WirtingerPresentation>,
    pub presentation: LinkPresentation,
}

impl LinkInput {
    pub fn from_json(text: &str) -> Result<LinkInput> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("link JSON: {e}")))
    }

    /// `depth` is the number of rewriting rounds used to express arcs in
    /// the base meridians; Milnor numbers of length `<= depth + 1` are exact.
    pub fn load(&self, depth: usize) -> Result<LoadedLink> {
        match self {
            LinkInput::Longitudes { n, longitudes } => {
                if longitudes.len() != *n as usize {
                    return Err(Error::Parse(format!(
                        "n = {n} but {} longitudes given",
                        longitudes.len()
                    )));
                }
                Ok(LoadedLink {
                    wirtinger: None,
                    presentation: LinkPresentation::parse_longitudes(longitudes)?,
                })
            }
            LinkInput::Pd { pd, signs } => {
                let code = PDCode::new(pd.clone(), signs.clone())?;
                let w = pd_to_wirtinger(&code)?;
                let lp = wirtinger_longitudes(&w, depth)?;
                Ok(LoadedLink {
                    wirtinger: Some(w),
                    presentation: lp,
                })
            }
        }
    }
}

/// Zero-framed longitudes in the base meridians, obtained by walking each
/// component and rewriting every arc as a conjugate of its base meridian.
pub fn wirtinger_longitudes(w: &WirtingerPresentation, depth: usize) -> Result<LinkPresentation> {
    let n = w.n_components;
    let mut arc_word: Vec<FreeWord> = w
        .component_of
        .iter()
        .map(|&c| FreeWord::generator(c as u32 + 1))
        .collect();
    let mut longitudes = vec![FreeWord::empty(); n];
    for round in 0..=depth {
        let mut next = arc_word.clone();
        for c in 0..n {
            let x = FreeWord::generator(c as u32 + 1);
            let mut u = FreeWord::empty();
            let mut arc = w.base_meridian[c];
            for up in &w.underpasses[c] {
                if up.incoming_arc != arc {
                    return Err(Error::InvalidPdCode(format!(
                        "arc bookkeeping broke at crossing {}",
                        up.crossing
                    )));
                }
                let z = if up.sign > 0 {
                    arc_word[up.over_arc].clone()
                } else {
                    arc_word[up.over_arc].inverse()
                };
                u = z.mul(&u);
                arc = up.outgoing_arc;
                if arc != w.base_meridian[c] {
                    next[arc] = x.conjugate_by(&u);
                }
            }
            if arc != w.base_meridian[c] {
                return Err(Error::InvalidPdCode(format!(
                    "component {} does not close up",
                    c + 1
                )));
            }
            if round == depth {
                let e = u.exponent_sum(c as u32 + 1);
                longitudes[c] = u.mul(&FreeWord::power(c as u32 + 1, -e));
            }
        }
        arc_word = next;
    }
    LinkPresentation::new(longitudes)
}

/// `lk(i, j)`: exponent sum of `x_i` in `y_j`.
pub fn linking_numbers(lp: &LinkPresentation) -> Result<Vec<Vec<i64>>> {
    let n = lp.n as usize;
    let mut out = vec![vec![0i64; n]; n];
    for (j, y) in lp.longitudes.iter().enumerate() {
        for (i, row) in out.iter_mut().enumerate() {
            let s = y.exponent_sum(i as u32 + 1);
            if i == j {
                if s != 0 {
                    return Err(Error::Framing {
                        component: j + 1,
                        sum: s,
                    });
                }
            } else {
                row[j] = s;
            }
        }
    }
    Ok(out)
}

/// The unitriangular representation `ρ_I` of the free group over `Z/Δ`.
#[derive(Clone, Debug)]
pub struct NilpotentRep {
    indices: Vec<u32>,
    modulus: u128,
}

pub type IntMatrix = Vec<Vec<i128>>;

impl NilpotentRep {
    /// `modulus == 0` means integer entries.
    pub fn new(idx: &MultiIndex, modulus: u128) -> NilpotentRep {
        NilpotentRep {
            indices: idx.indices().to_vec(),
            modulus,
        }
    }

    pub fn size(&self) -> usize {
        self.indices.len()
    }

    fn reduce(&self, v: i128) -> i128 {
        if self.modulus == 0 {
            v
        } else {
            v.rem_euclid(self.modulus as i128)
        }
    }

    fn identity(&self) -> IntMatrix {
        let r = self.size();
        (0..r)
            .map(|i| (0..r).map(|j| i128::from(i == j)).collect())
            .collect()
    }

    fn letter(&self, g: u32, sign: i8) -> IntMatrix {
        // x_g ↦ 1 + E with E_{s,s+1} = [i_s = g]; the inverse is Σ (−E)^k
        let r = self.size();
        let mut e = vec![vec![0i128; r]; r];
        for s in 0..r.saturating_sub(1) {
            if self.indices[s] == g {
                e[s][s + 1] = 1;
            }
        }
        if sign > 0 {
            let mut m = self.identity();
            for s in 0..r {
                for t in 0..r {
                    m[s][t] += e[s][t];
                }
            }
            return m;
        }
        let mut acc = self.identity();
        let mut pw = self.identity();
        for k in 1..r {
            pw = self.mul(&pw, &e);
            let sgn = if k % 2 == 1 { -1 } else { 1 };
            for s in 0..r {
                for t in 0..r {
                    acc[s][t] = self.reduce(acc[s][t] + sgn * pw[s][t]);
                }
            }
        }
        acc
    }

    fn mul(&self, a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
        let r = self.size();
        let mut out = vec![vec![0i128; r]; r];
        for s in 0..r {
            for k in s..r {
                if a[s][k] == 0 {
                    continue;
                }
                for t in k..r {
                    out[s][t] += a[s][k] * b[k][t];
                }
            }
            for t in 0..r {
                out[s][t] = self.reduce(out[s][t]);
            }
        }
        out
    }

    /// `ρ_I(w)`; entry `(s, t)` is `ε(∂^{t−s} w / ∂x_{i_s} ⋯ ∂x_{i_{t−1}})` mod `Δ`.
    pub fn image(&self, w: &FreeWord) -> IntMatrix {
        let mut m = self.identity();
        for l in w.letters() {
            m = self.mul(&m, &self.letter(l.gen(), l.sign()));
        }
        m
    }

    pub fn is_identity(&self, m: &IntMatrix) -> bool {
        let id = self.identity();
        m.iter()
            .zip(&id)
            .all(|(a, b)| a.iter().zip(b).all(|(x, y)| self.reduce(x - y) == 0))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NilpotentReport {
    pub multi_index: MultiIndex,
    pub modulus: u128,
    pub relators_checked: usize,
    pub longitude_image: IntMatrix,
    pub corner: i128,
    pub corner_matches_mubar: bool,
    pub off_corner_zero: bool,
}

/// Builds `ρ_I` modulo `Δ(I)` from the table and verifies the relators die
/// and the image of `y_{i_r}` is concentrated in the corner.
pub fn nilpotent_rep(
    lp: &LinkPresentation,
    idx: &MultiIndex,
    table: &MilnorTable,
) -> Result<NilpotentReport> {
    let entry = table
        .get(idx)
        .ok_or_else(|| Error::MissingMilnor(idx.to_string()))?;
    let rep = NilpotentRep::new(idx, entry.delta);
    for (k, rel) in lp.relators().iter().enumerate() {
        if !rep.is_identity(&rep.image(rel)) {
            return Err(Error::RelatorNotKilled {
                index: k + 1,
                multi_index: idx.to_string(),
            });
        }
    }
    let j = idx.last() as usize;
    let img = rep.image(&lp.longitudes()[j - 1]);
    let r = rep.size();
    let corner = img[0][r - 1];
    let mut off_corner_zero = true;
    for (s, row) in img.iter().enumerate() {
        for (t, &v) in row.iter().enumerate() {
            if t > s && !(s == 0 && t == r - 1) && v != 0 {
                off_corner_zero = false;
            }
        }
    }
    let target = rep.reduce(entry.mubar);
    Ok(NilpotentReport {
        multi_index: idx.clone(),
        modulus: entry.delta,
        relators_checked: lp.relators().len(),
        longitude_image: img,
        corner,
        corner_matches_mubar: corner == target,
        off_corner_zero,
    })
}
