//! Finite coverings: decomposition of a knot/prime in a covering given by a
//! monodromy action, and transfer kernels of finite groups.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::classgroup::AbelianGroupStructure;
use crate::error::{Error, Result};

/// Largest group order enumerated.
pub const MAX_GROUP_ORDER: usize = 100_000;

/// A permutation of `{0, …, n−1}`; composition `p * q` applies `p` first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<u32>);

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm((0..n as u32).collect())
    }

    /// From images `[p(1), …, p(n)]` of `{1, …, n}`.
    pub fn from_one_based(images: &[u32]) -> Result<Perm> {
        let n = images.len();
        let mut seen = vec![false; n];
        let mut v = Vec::with_capacity(n);
        for &x in images {
            if x == 0 || x as usize > n || seen[x as usize - 1] {
                return Err(Error::Parse(format!(
                    "{images:?} is not a permutation of 1..{n}"
                )));
            }
            seen[x as usize - 1] = true;
            v.push(x - 1);
        }
        Ok(Perm(v))
    }

    /// From disjoint cycles on `{0, …, n−1}`.
    pub fn from_cycles(n: usize, cycles: &[&[u32]]) -> Perm {
        let mut v: Vec<u32> = (0..n as u32).collect();
        for c in cycles {
            for k in 0..c.len() {
                v[c[k] as usize] = c[(k + 1) % c.len()];
            }
        }
        Perm(v)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, x: u32) -> u32 {
        self.0[x as usize]
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(k, &x)| k as u32 == x)
    }

    pub fn mul(&self, q: &Perm) -> Perm {
        Perm(self.0.iter().map(|&x| q.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut v = vec![0u32; self.0.len()];
        for (k, &x) in self.0.iter().enumerate() {
            v[x as usize] = k as u32;
        }
        Perm(v)
    }

    pub fn pow(&self, mut e: u64) -> Perm {
        let mut acc = Perm::identity(self.degree());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Direct sum acting on the disjoint union of the two domains.
    pub fn disjoint_sum(&self, other: &Perm) -> Perm {
        let off = self.degree() as u32;
        Perm(
            self.0
                .iter()
                .copied()
                .chain(other.0.iter().map(|x| x + off))
                .collect(),
        )
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let one: Vec<String> = self.0.iter().map(|x| (x + 1).to_string()).collect();
        write!(f, "[{}]", one.join(","))
    }
}

/// Orbits of the group generated by `gens`, each sorted, ordered by smallest point.
pub fn orbits(n: usize, gens: &[&Perm]) -> Vec<Vec<u32>> {
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut orbit = vec![start as u32];
        seen[start] = true;
        let mut queue = VecDeque::from([start as u32]);
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y = g.apply(x);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    orbit.push(y);
                    queue.push_back(y);
                }
            }
        }
        orbit.sort_unstable();
        out.push(orbit);
    }
    out
}

/// A finite group given by permutation generators, with its elements enumerated.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    degree: usize,
    gens: Vec<Perm>,
    elements: Vec<Perm>,
    index: HashMap<Perm, usize>,
}

impl FiniteGroup {
    pub fn generated_by(degree: usize, gens: Vec<Perm>) -> Result<FiniteGroup> {
        if let Some(g) = gens.iter().find(|g| g.degree() != degree) {
            return Err(Error::Precondition(format!(
                "generator {g} does not act on {degree} points"
            )));
        }
        let id = Perm::identity(degree);
        let mut elements = vec![id.clone()];
        let mut index = HashMap::from([(id, 0usize)]);
        let mut k = 0;
        while k < elements.len() {
            for g in &gens {
                let h = elements[k].mul(g);
                if !index.contains_key(&h) {
                    if elements.len() >= MAX_GROUP_ORDER {
                        return Err(Error::BoundExceeded(format!(
                            "group order exceeds {MAX_GROUP_ORDER}"
                        )));
                    }
                    index.insert(h.clone(), elements.len());
                    elements.push(h);
                }
            }
            k += 1;
        }
        Ok(FiniteGroup {
            degree,
            gens,
            elements,
            index,
        })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn gens(&self) -> &[Perm] {
        &self.gens
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn contains(&self, p: &Perm) -> bool {
        self.index.contains_key(p)
    }

    pub fn index_of(&self, p: &Perm) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn is_subgroup_of(&self, other: &FiniteGroup) -> bool {
        self.gens.iter().all(|g| other.contains(g))
    }

    pub fn is_normal_in(&self, other: &FiniteGroup) -> bool {
        other.gens.iter().all(|x| {
            let xi = x.inverse();
            self.gens.iter().all(|h| self.contains(&xi.mul(h).mul(x)))
        })
    }

    pub fn is_abelian(&self) -> bool {
        self.gens
            .iter()
            .all(|a| self.gens.iter().all(|b| a.mul(b) == b.mul(a)))
    }

    /// The subgroup generated by all commutators.
    pub fn derived_subgroup(&self) -> Result<FiniteGroup> {
        let mut comms: Vec<Perm> = Vec::new();
        let mut seen = HashSet::new();
        for a in &self.gens {
            for b in &self.gens {
                let c = a.inverse().mul(&b.inverse()).mul(a).mul(b);
                if !c.is_identity() && seen.insert(c.clone()) {
                    comms.push(c);
                }
            }
        }
        // normal closure of the generator commutators
        let mut group = FiniteGroup::generated_by(self.degree, comms.clone())?;
        loop {
            let mut added = false;
            for g in &self.gens {
                let gi = g.inverse();
                for c in group.gens.clone() {
                    let conj = gi.mul(&c).mul(g);
                    if !group.contains(&conj) {
                        comms.push(conj);
                        added = true;
                    }
                }
            }
            if !added {
                return Ok(group);
            }
            group = FiniteGroup::generated_by(self.degree, comms.clone())?;
        }
    }

    pub fn element_order(&self, g: &Perm) -> u64 {
        let mut k = 1;
        let mut acc = g.clone();
        while !acc.is_identity() {
            acc = acc.mul(g);
            k += 1;
        }
        k
    }
}

/// Monodromy action with peripheral data `τ` (inertia) and `σ` (Frobenius).
#[derive(Clone, Debug)]
pub struct FiniteAction {
    pub degree: usize,
    pub gens: BTreeMap<String, Perm>,
    pub tau: Perm,
    pub sigma: Perm,
}

#[derive(Deserialize)]
struct ActionJson {
    degree: usize,
    gens: BTreeMap<String, Vec<u32>>,
}

impl FiniteAction {
    pub fn new(degree: usize, gens: BTreeMap<String, Perm>) -> Result<FiniteAction> {
        if degree == 0 {
            return Err(Error::Precondition("degree must be positive".into()));
        }
        for (name, g) in &gens {
            if g.degree() != degree {
                return Err(Error::Precondition(format!(
                    "generator {name} acts on {} points, not {degree}",
                    g.degree()
                )));
            }
        }
        let tau = gens
            .get("tau")
            .cloned()
            .ok_or_else(|| Error::Parse("missing generator 'tau'".into()))?;
        let sigma = gens
            .get("sigma")
            .cloned()
            .ok_or_else(|| Error::Parse("missing generator 'sigma'".into()))?;
        let all: Vec<&Perm> = gens.values().collect();
        if orbits(degree, &all).len() != 1 {
            return Err(Error::Precondition("action is not transitive".into()));
        }
        let t = FiniteGroup::generated_by(degree, vec![tau.clone()])?;
        if !t.contains(&sigma.inverse().mul(&tau).mul(&sigma)) {
            return Err(Error::Precondition(
                "<tau> is not normalized by sigma".into(),
            ));
        }
        Ok(FiniteAction {
            degree,
            gens,
            tau,
            sigma,
        })
    }

    pub fn from_json(text: &str) -> Result<FiniteAction> {
        let raw: ActionJson =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("action JSON: {e}")))?;
        let mut gens = BTreeMap::new();
        for (name, images) in raw.gens {
            if images.len() != raw.degree {
                return Err(Error::Parse(format!(
                    "generator {name} has {} images, degree is {}",
                    images.len(),
                    raw.degree
                )));
            }
            gens.insert(name, Perm::from_one_based(&images)?);
        }
        FiniteAction::new(raw.degree, gens)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitData {
    /// Points of the orbit, 1-based.
    pub points: Vec<u32>,
    pub e: usize,
    pub f: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub n: usize,
    pub r: usize,
    pub orbits: Vec<OrbitData>,
    /// `Σ e_j f_j`.
    pub sum_ef: usize,
}

/// Orbits of `⟨τ, σ⟩`; `f_j` is the number of `⟨τ⟩`-orbits in `O_j` (permuted
/// transitively by `σ`) and `e_j = #O_j / f_j` their common size.
pub fn decompose(act: &FiniteAction) -> Result<Decomposition> {
    let n = act.degree;
    let d_orbits = orbits(n, &[&act.tau, &act.sigma]);
    let t_orbits = orbits(n, &[&act.tau]);
    let mut block_of = vec![0usize; n];
    for (k, o) in t_orbits.iter().enumerate() {
        for &x in o {
            block_of[x as usize] = k;
        }
    }
    let mut out = Vec::new();
    for o in &d_orbits {
        let blocks: Vec<usize> = {
            let mut b: Vec<usize> = o.iter().map(|&x| block_of[x as usize]).collect();
            b.sort_unstable();
            b.dedup();
            b
        };
        // σ-orbit of the first block on the set of blocks
        let start = blocks[0];
        let mut cur = start;
        let mut f = 0;
        loop {
            f += 1;
            let x = t_orbits[cur][0];
            cur = block_of[act.sigma.apply(x) as usize];
            if cur == start {
                break;
            }
        }
        if f != blocks.len()
            || o.len() % f != 0
            || blocks.iter().any(|&b| t_orbits[b].len() * f != o.len())
        {
            return Err(Error::Inconsistent(format!(
                "orbit of size {} does not split into {f} equal blocks",
                o.len()
            )));
        }
        out.push(OrbitData {
            points: o.iter().map(|x| x + 1).collect(),
            e: o.len() / f,
            f,
        });
    }
    let sum_ef = out.iter().map(|o| o.e * o.f).sum();
    if sum_ef != n {
        return Err(Error::Inconsistent(format!("Σ e f = {sum_ef} but n = {n}")));
    }
    Ok(Decomposition {
        n,
        r: out.len(),
        orbits: out,
        sum_ef,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GaloisReport {
    pub n: usize,
    pub e: usize,
    pub f: usize,
    pub r: usize,
    pub inertia_order: usize,
    pub decomposition_order: usize,
    pub constant_ef: bool,
    pub inertia_matches_e: bool,
    pub decomposition_matches_ef: bool,
    pub n_equals_efr: bool,
    pub quotient_cyclic_by_sigma: bool,
}

impl GaloisReport {
    pub fn pass(&self) -> bool {
        self.constant_ef
            && self.inertia_matches_e
            && self.decomposition_matches_ef
            && self.n_equals_efr
            && self.quotient_cyclic_by_sigma
    }
}

/// For a regular action: `#I = e`, `#D = ef`, `n = efr`, and `D/I` cyclic generated by `σ`.
pub fn galois_check(act: &FiniteAction) -> Result<GaloisReport> {
    let n = act.degree;
    let g = FiniteGroup::generated_by(n, act.gens.values().cloned().collect())?;
    if g.order() != n {
        return Err(Error::Precondition(format!(
            "action is not regular: group of order {} on {n} points",
            g.order()
        )));
    }
    let dec = decompose(act)?;
    let inertia = FiniteGroup::generated_by(n, vec![act.tau.clone()])?;
    let decomp = FiniteGroup::generated_by(n, vec![act.tau.clone(), act.sigma.clone()])?;
    let (e, f) = (dec.orbits[0].e, dec.orbits[0].f);
    // smallest k with σ^k ∈ I
    let mut k = 1;
    let mut s = act.sigma.clone();
    while !inertia.contains(&s) {
        s = s.mul(&act.sigma);
        k += 1;
    }
    Ok(GaloisReport {
        n,
        e,
        f,
        r: dec.r,
        inertia_order: inertia.order(),
        decomposition_order: decomp.order(),
        constant_ef: dec.orbits.iter().all(|o| o.e == e && o.f == f),
        inertia_matches_e: inertia.order() == e,
        decomposition_matches_ef: decomp.order() == e * f,
        n_equals_efr: n == e * f * dec.r,
        quotient_cyclic_by_sigma: k * inertia.order() == decomp.order(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct TransferReport {
    pub group_order: usize,
    pub subgroup_order: usize,
    /// `[Γ : H]`.
    pub index: usize,
    pub abelianization: AbelianGroupStructure,
    pub kernel_order: usize,
    pub kernel: AbelianGroupStructure,
    pub divisible_by_index: bool,
}

/// The transfer `V: Γ → H/H'` for `H ⊴ Γ` with `Γ/H` abelian.
pub struct Transfer<'a> {
    gamma: &'a FiniteGroup,
    dh: FiniteGroup,
    transversal: Vec<Perm>,
    coset_of: HashMap<Perm, usize>,
}

impl<'a> Transfer<'a> {
    pub fn new(gamma: &'a FiniteGroup, h: &FiniteGroup) -> Result<Transfer<'a>> {
        if !h.is_subgroup_of(gamma) {
            return Err(Error::Precondition("H is not a subgroup of Γ".into()));
        }
        let dg = gamma.derived_subgroup()?;
        if !h.is_normal_in(gamma) || !dg.is_subgroup_of(h) {
            return Err(Error::Precondition("Γ/H is not abelian".into()));
        }
        // right cosets H t
        let mut coset_of: HashMap<Perm, usize> = HashMap::new();
        let mut transversal: Vec<Perm> = Vec::new();
        for g in gamma.elements() {
            if coset_of.contains_key(g) {
                continue;
            }
            let id = transversal.len();
            for x in h.elements() {
                coset_of.insert(x.mul(g), id);
            }
            transversal.push(g.clone());
        }
        Ok(Transfer {
            gamma,
            dh: h.derived_subgroup()?,
            transversal,
            coset_of,
        })
    }

    pub fn index(&self) -> usize {
        self.transversal.len()
    }

    /// Canonical representative of `x H'`.
    pub fn reduce(&self, x: &Perm) -> Perm {
        self.dh.elements().iter().map(|y| x.mul(y)).min().unwrap()
    }

    /// `V(g) = ∏_t t g \overline{tg}^{-1}` over the right transversal, reduced modulo `H'`.
    pub fn apply(&self, g: &Perm) -> Perm {
        let mut acc = Perm::identity(self.gamma.degree());
        for t in &self.transversal {
            let tg = t.mul(g);
            let rep = &self.transversal[self.coset_of[&tg]];
            acc = acc.mul(&tg.mul(&rep.inverse()));
        }
        self.reduce(&acc)
    }
}

/// Kernel of the transfer `Γ/Γ' → H/H'`.
pub fn transfer_kernel(gamma: &FiniteGroup, h: &FiniteGroup) -> Result<TransferReport> {
    let v = Transfer::new(gamma, h)?;
    let dg = gamma.derived_subgroup()?;
    let one = v.reduce(&Perm::identity(gamma.degree()));
    let mut kernel_reps: HashSet<Perm> = HashSet::new();
    let mut kernel_elements = Vec::new();
    let g_prime_key = |x: &Perm| -> Perm { dg.elements().iter().map(|y| x.mul(y)).min().unwrap() };
    let mut ab_reps: HashSet<Perm> = HashSet::new();
    let mut ab_elements = Vec::new();
    for g in gamma.elements() {
        let key = g_prime_key(g);
        if !ab_reps.insert(key.clone()) {
            continue;
        }
        ab_elements.push(key.clone());
        if v.apply(g) == one {
            kernel_reps.insert(key.clone());
            kernel_elements.push(key);
        }
    }
    let quotient_order = |x: &Perm| -> u64 {
        let mut k = 1;
        let mut acc = x.clone();
        while !dg.contains(&acc) {
            acc = acc.mul(x);
            k += 1;
        }
        k
    };
    let ab_orders: Vec<u64> = ab_elements.iter().map(quotient_order).collect();
    let kernel_orders: Vec<u64> = kernel_elements.iter().map(quotient_order).collect();
    let index = v.index();
    Ok(TransferReport {
        group_order: gamma.order(),
        subgroup_order: h.order(),
        index,
        abelianization: AbelianGroupStructure::from_element_orders(&ab_orders)?,
        kernel_order: kernel_elements.len(),
        kernel: AbelianGroupStructure::from_element_orders(&kernel_orders)?,
        divisible_by_index: kernel_elements.len() % index == 0,
    })
}

#[derive(Deserialize)]
struct TransferJson {
    degree: usize,
    gens: Vec<Vec<u32>>,
    subgroup: Vec<Vec<u32>>,
}

/// `{ "degree": m, "gens": [[…], …], "subgroup": [[…], …] }` with 1-based images.
pub fn transfer_input_from_json(text: &str) -> Result<(FiniteGroup, FiniteGroup)> {
    let raw: TransferJson =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("group JSON: {e}")))?;
    let parse = |v: &[Vec<u32>]| -> Result<Vec<Perm>> {
        v.iter()
            .map(|p| {
                if p.len() != raw.degree {
                    return Err(Error::Parse(format!(
                        "permutation {p:?} is not of degree {}",
                        raw.degree
                    )));
                }
                Perm::from_one_based(p)
            })
            .collect()
    };
    let gamma = FiniteGroup::generated_by(raw.degree, parse(&raw.gens)?)?;
    let h = FiniteGroup::generated_by(raw.degree, parse(&raw.subgroup)?)?;
    Ok((gamma, h))
}

fn cyclic(n: usize) -> Perm {
    let c: Vec<u32> = (0..n as u32).collect();
    Perm::from_cycles(n, &[&c])
}

fn dihedral(n: usize) -> Vec<Perm> {
    let refl: Vec<u32> = (0..n as u32).map(|k| (n as u32 - k) % n as u32).collect();
    vec![cyclic(n), Perm(refl)]
}

fn quaternion(order: usize) -> Vec<Perm> {
    // generalized quaternion Q_{4m} via its regular representation on ⟨a, b | a^{2m}, b² = a^m, bab⁻¹ = a⁻¹⟩
    let m = order / 4;
    let two_m = 2 * m;
    // element a^i b^j ↦ index i + 2m j
    let idx = |i: usize, j: usize| (i % two_m + two_m * j) as u32;
    let mut a = vec![0u32; order];
    let mut b = vec![0u32; order];
    for j in 0..2 {
        for i in 0..two_m {
            // right multiplication
            // (a^i b^j) a = a^{i ± 1} b^j
            a[idx(i, j) as usize] = if j == 0 {
                idx(i + 1, 0)
            } else {
                idx(i + two_m - 1, 1)
            };
            // (a^i) b = a^i b ; (a^i b) b = a^{i+m}
            b[idx(i, j) as usize] = if j == 0 { idx(i, 1) } else { idx(i + m, 0) };
        }
    }
    vec![Perm(a), Perm(b)]
}

fn symmetric(n: usize) -> Vec<Perm> {
    if n < 2 {
        return vec![Perm::identity(n.max(1))];
    }
    vec![cyclic(n), Perm::from_cycles(n, &[&[0, 1]])]
}

fn alternating(n: usize) -> Vec<Perm> {
    (2..n as u32)
        .map(|k| Perm::from_cycles(n, &[&[0, 1, k]]))
        .collect()
}

fn product(a: &[Perm], b: &[Perm]) -> Vec<Perm> {
    let ia = Perm::identity(a[0].degree());
    let ib = Perm::identity(b[0].degree());
    a.iter()
        .map(|x| x.disjoint_sum(&ib))
        .chain(b.iter().map(|y| ia.disjoint_sum(y)))
        .collect()
}

/// Semidirect product `Z/p ⋊ Z/q` for `q | p − 1`, acting affinely on `Z/p`.
fn affine(p: u32, q: u32) -> Vec<Perm> {
    let g = crate::arith::primitive_root(p as u64) as u32;
    let u = crate::arith::mod_pow(g as u64, ((p - 1) / q) as u64, p as u64) as u32;
    let shift = Perm((0..p).map(|x| (x + 1) % p).collect());
    let scale = Perm((0..p).map(|x| x * u % p).collect());
    vec![shift, scale]
}

/// Heisenberg group mod `p` acting on `F_p²` by affine shears.
fn heisenberg(p: u32) -> Vec<Perm> {
    let n = (p * p) as usize;
    let at = |x: u32, y: u32| (x % p + p * (y % p)) as usize;
    let mut a = vec![0u32; n];
    let mut b = vec![0u32; n];
    for x in 0..p {
        for y in 0..p {
            a[at(x, y)] = at(x + y, y) as u32;
            b[at(x, y)] = at(x, y + 1) as u32;
        }
    }
    // the shear and translation generate a group of order p³ together with x-translation
    let c: Vec<u32> = (0..n)
        .map(|k| at(k as u32 % p + 1, k as u32 / p) as u32)
        .collect();
    vec![Perm(a), Perm(b), Perm(c)]
}

/// A library of small permutation groups, each with a name.
pub fn group_library() -> Vec<(String, FiniteGroup)> {
    let mut specs: Vec<(String, Vec<Perm>)> = Vec::new();
    for n in 1..=12 {
        specs.push((format!("Z/{n}"), vec![cyclic(n)]));
    }
    for n in 3..=10 {
        specs.push((format!("D_{n}"), dihedral(n)));
    }
    for order in [8, 12, 16, 20, 24] {
        specs.push((format!("Q_{order}"), quaternion(order)));
    }
    for n in 3..=5 {
        specs.push((format!("S_{n}"), symmetric(n)));
    }
    for n in 4..=5 {
        specs.push((format!("A_{n}"), alternating(n)));
    }
    for (a, b) in [(2, 2), (2, 4), (2, 6), (3, 3), (4, 4), (2, 8), (3, 6)] {
        specs.push((
            format!("Z/{a} x Z/{b}"),
            product(&[cyclic(a)], &[cyclic(b)]),
        ));
    }
    specs.push((
        "Z/2 x Z/2 x Z/2".into(),
        product(&product(&[cyclic(2)], &[cyclic(2)]), &[cyclic(2)]),
    ));
    specs.push(("D_4 x Z/2".into(), product(&dihedral(4), &[cyclic(2)])));
    specs.push(("Q_8 x Z/2".into(), product(&quaternion(8), &[cyclic(2)])));
    specs.push(("S_3 x Z/3".into(), product(&symmetric(3), &[cyclic(3)])));
    specs.push(("D_3 x D_3".into(), product(&dihedral(3), &dihedral(3))));
    specs.push(("A_4 x Z/2".into(), product(&alternating(4), &[cyclic(2)])));
    for (p, q) in [(5, 4), (7, 3), (7, 6), (11, 5), (13, 3), (13, 4)] {
        specs.push((format!("Z/{p} : Z/{q}"), affine(p, q)));
    }
    for p in [2, 3] {
        specs.push((format!("Heis({p})"), heisenberg(p)));
    }
    specs
        .into_iter()
        .map(|(name, gens)| {
            let deg = gens[0].degree();
            (
                name,
                FiniteGroup::generated_by(deg, gens).expect("library groups are small"),
            )
        })
        .collect()
}

/// Subgroups `H` with `Γ' ⊆ H`: `Γ'` itself and `⟨Γ', g⟩` for each generator and each element
/// of small order, deduplicated by order and element set.
pub fn subgroups_over_derived(gamma: &FiniteGroup) -> Result<Vec<FiniteGroup>> {
    let dg = gamma.derived_subgroup()?;
    let mut out: Vec<FiniteGroup> = Vec::new();
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut push = |h: FiniteGroup, out: &mut Vec<FiniteGroup>| {
        let mut key: Vec<usize> = h
            .elements()
            .iter()
            .map(|e| gamma.index_of(e).unwrap())
            .collect();
        key.sort_unstable();
        if seen.insert(key) {
            out.push(h);
        }
    };
    push(dg.clone(), &mut out);
    for g in gamma.elements() {
        let mut gens = dg.gens().to_vec();
        gens.push(g.clone());
        push(FiniteGroup::generated_by(gamma.degree(), gens)?, &mut out);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn action(n: usize, tau: Perm, sigma: Perm, extra: Option<Perm>) -> Result<FiniteAction> {
        let mut gens = BTreeMap::from([("tau".to_string(), tau), ("sigma".to_string(), sigma)]);
        if let Some(x) = extra {
            gens.insert("x".into(), x);
        }
        FiniteAction::new(n, gens)
    }

    #[test]
    fn trivial_and_small_covers() {
        let d = decompose(&action(1, Perm::identity(1), Perm::identity(1), None).unwrap()).unwrap();
        assert_eq!((d.r, d.orbits[0].e, d.orbits[0].f), (1, 1, 1));
        let t = Perm::from_cycles(2, &[&[0, 1]]);
        let d = decompose(&action(2, t, Perm::identity(2), None).unwrap()).unwrap();
        assert_eq!((d.r, d.orbits[0].e, d.orbits[0].f), (1, 2, 1));
        let c = cyclic(3);
        let d = decompose(&action(3, Perm::identity(3), c.clone(), None).unwrap()).unwrap();
        assert_eq!((d.r, d.orbits[0].e, d.orbits[0].f), (1, 1, 3));
        let d =
            decompose(&action(3, Perm::identity(3), Perm::identity(3), Some(c)).unwrap()).unwrap();
        assert_eq!(d.r, 3);
        assert!(d.orbits.iter().all(|o| o.e == 1 && o.f == 1));
    }

    #[test]
    fn invalid_actions() {
        assert!(action(2, Perm::identity(2), Perm::identity(2), None).is_err());
        // S_3 on 3 points: σ does not normalize ⟨(0 1)⟩
        let r = action(3, Perm::from_cycles(3, &[&[0, 1]]), cyclic(3), None);
        assert!(matches!(r, Err(Error::Precondition(_))));
        assert!(FiniteAction::from_json(r#"{ "degree": 2, "gens": { "tau": [2, 1] } }"#).is_err());
        assert!(FiniteAction::from_json(
            r#"{ "degree": 2, "gens": { "tau": [2, 2], "sigma": [1, 2] } }"#
        )
        .is_err());
        let ok = FiniteAction::from_json(
            r#"{ "degree": 2, "gens": { "tau": [2, 1], "sigma": [1, 2] } }"#,
        );
        assert!(ok.is_ok());
    }

    #[test]
    fn galois_z4() {
        let x = cyclic(4);
        let sq = x.pow(2);
        let r = galois_check(&action(4, sq.clone(), x.clone(), None).unwrap()).unwrap();
        assert!(r.pass());
        assert_eq!((r.e, r.f, r.r), (2, 2, 1));
        let r = galois_check(&action(4, sq, Perm::identity(4), Some(x.clone())).unwrap()).unwrap();
        assert_eq!((r.e, r.f, r.r), (2, 1, 2));
        let r = galois_check(&action(4, Perm::identity(4), Perm::identity(4), Some(x)).unwrap())
            .unwrap();
        assert_eq!((r.e, r.f, r.r), (1, 1, 4));
        // S_3 on 3 points is not regular
        let s3 = symmetric(3);
        let a = action(3, Perm::identity(3), Perm::identity(3), Some(s3[0].clone())).unwrap();
        let mut a2 = a.clone();
        a2.gens.insert("y".into(), s3[1].clone());
        assert!(matches!(galois_check(&a2), Err(Error::Precondition(_))));
    }

    #[test]
    fn transfer_examples() {
        let z4 = FiniteGroup::generated_by(4, vec![cyclic(4)]).unwrap();
        let h = FiniteGroup::generated_by(4, vec![cyclic(4).pow(2)]).unwrap();
        let t = transfer_kernel(&z4, &h).unwrap();
        assert_eq!((t.index, t.kernel_order), (2, 2));
        let t = transfer_kernel(&z4, &z4).unwrap();
        assert_eq!((t.index, t.kernel_order), (1, 1));
        let q8 = FiniteGroup::generated_by(8, quaternion(8)).unwrap();
        assert_eq!(q8.order(), 8);
        let center = q8.derived_subgroup().unwrap();
        assert_eq!(center.order(), 2);
        let t = transfer_kernel(&q8, &center).unwrap();
        assert_eq!((t.index, t.kernel_order), (4, 4));
        let s3 = FiniteGroup::generated_by(3, symmetric(3)).unwrap();
        let c2 = FiniteGroup::generated_by(3, vec![Perm::from_cycles(3, &[&[0, 1]])]).unwrap();
        assert!(matches!(
            transfer_kernel(&s3, &c2),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn library_orders() {
        let lib = group_library();
        assert!(lib.len() >= 50);
        let order = |name: &str| lib.iter().find(|(n, _)| n == name).unwrap().1.order();
        assert_eq!(order("Q_16"), 16);
        assert_eq!(order("Q_12"), 12);
        assert_eq!(order("A_5"), 60);
        assert_eq!(order("Heis(3)"), 27);
        assert_eq!(order("Heis(2)"), 8);
        assert_eq!(order("Z/7 : Z/3"), 21);
        assert_eq!(order("D_6"), 12);
    }
}
