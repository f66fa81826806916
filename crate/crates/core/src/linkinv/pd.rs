//! Planar diagram codes and Wirtinger presentations.
//!
//! A crossing `X[a,b,c,d]` lists its four edge labels counterclockwise,
//! starting from the incoming under-edge `a`; `c` is the outgoing under-edge.
//! The sign is the usual right-hand-rule crossing sign, and fixes the
//! direction of the over-strand: for `+1` it runs `d -> b`, for `-1` it
//! runs `b -> d`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::words::{FreeWord, Letter};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PDCode {
    pub crossings: Vec<[u32; 4]>,
    pub signs: Vec<i8>,
}

impl PDCode {
    pub fn new(crossings: Vec<[u32; 4]>, signs: Vec<i8>) -> Result<PDCode> {
        let pd = PDCode { crossings, signs };
        pd.validate()?;
        Ok(pd)
    }

    /// The crossingless diagram of the unknot.
    pub fn unknot() -> PDCode {
        PDCode {
            crossings: Vec::new(),
            signs: Vec::new(),
        }
    }

    /// Parses lines of the form `X[a,b,c,d] +` (`#` starts a comment).
    pub fn parse(text: &str) -> Result<PDCode> {
        let mut crossings = Vec::new();
        let mut signs = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let bad = || {
                Error::Parse(format!(
                    "line {}: expected `X[a,b,c,d] ±`, got `{raw}`",
                    lineno + 1
                ))
            };
            let rest = line.strip_prefix("X[").ok_or_else(bad)?;
            let (inside, tail) = rest.split_once(']').ok_or_else(bad)?;
            let labels: Vec<u32> = inside
                .split(',')
                .map(|s| s.trim().parse::<u32>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| bad())?;
            let labels: [u32; 4] = labels.try_into().map_err(|_| bad())?;
            let sign = match tail.trim() {
                "+" | "+1" | "1" => 1,
                "-" | "-1" => -1,
                _ => return Err(bad()),
            };
            crossings.push(labels);
            signs.push(sign);
        }
        PDCode::new(crossings, signs)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (c, s) in self.crossings.iter().zip(&self.signs) {
            let sign = if *s > 0 { '+' } else { '-' };
            out.push_str(&format!("X[{},{},{},{}] {sign}\n", c[0], c[1], c[2], c[3]));
        }
        out
    }

    /// Mirror image: reverses the cyclic order at every crossing and flips signs.
    pub fn mirror(&self) -> PDCode {
        PDCode {
            crossings: self
                .crossings
                .iter()
                .map(|&[a, b, c, d]| [a, d, c, b])
                .collect(),
            signs: self.signs.iter().map(|s| -s).collect(),
        }
    }

    /// `(incoming, outgoing)` edges of the under- and over-strand of crossing `k`.
    fn strands(&self, k: usize) -> [(u32, u32); 2] {
        let [a, b, c, d] = self.crossings[k];
        let over = if self.signs[k] > 0 { (d, b) } else { (b, d) };
        [(a, c), over]
    }

    pub fn validate(&self) -> Result<()> {
        if self.crossings.len() != self.signs.len() {
            return Err(Error::InvalidPdCode(format!(
                "{} crossings but {} signs",
                self.crossings.len(),
                self.signs.len()
            )));
        }
        if let Some(s) = self.signs.iter().find(|&&s| s != 1 && s != -1) {
            return Err(Error::InvalidPdCode(format!("crossing sign {s} is not ±1")));
        }
        let mut incoming: BTreeMap<u32, usize> = BTreeMap::new();
        let mut outgoing: BTreeMap<u32, usize> = BTreeMap::new();
        for k in 0..self.crossings.len() {
            for (i, o) in self.strands(k) {
                *incoming.entry(i).or_default() += 1;
                *outgoing.entry(o).or_default() += 1;
            }
        }
        for (label, count) in incoming.iter().chain(outgoing.iter()) {
            if *count != 1 {
                return Err(Error::InvalidPdCode(format!(
                    "edge {label} enters or leaves crossings {count} times"
                )));
            }
        }
        if incoming.keys().ne(outgoing.keys()) {
            return Err(Error::InvalidPdCode(
                "some edge has only one endpoint".into(),
            ));
        }
        Ok(())
    }
}

/// Passing under an over-arc while travelling along a component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Underpass {
    pub crossing: usize,
    pub over_arc: usize,
    pub incoming_arc: usize,
    pub outgoing_arc: usize,
    pub sign: i8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WirtingerPresentation {
    pub n_components: usize,
    /// Edge labels of each arc; arc `k` is the generator `x_{k+1}`.
    pub arcs: Vec<Vec<u32>>,
    pub component_of: Vec<usize>,
    /// Arc index of the base meridian of each component.
    pub base_meridian: Vec<usize>,
    /// Underpasses of each component in travel order, starting on the base arc.
    pub underpasses: Vec<Vec<Underpass>>,
    /// One relator per crossing: `x_out (z^ε x_in z^-ε)^-1`.
    pub relators: Vec<FreeWord>,
}

impl WirtingerPresentation {
    pub fn generator_count(&self) -> usize {
        self.arcs.len()
    }
}

fn find(parent: &mut BTreeMap<u32, u32>, x: u32) -> u32 {
    let p = parent[&x];
    if p == x {
        return x;
    }
    let r = find(parent, p);
    parent.insert(x, r);
    r
}

pub fn pd_to_wirtinger(pd: &PDCode) -> Result<WirtingerPresentation> {
    pd.validate()?;
    if pd.crossings.is_empty() {
        return Ok(WirtingerPresentation {
            n_components: 1,
            arcs: vec![Vec::new()],
            component_of: vec![0],
            base_meridian: vec![0],
            underpasses: vec![Vec::new()],
            relators: Vec::new(),
        });
    }
    // successor along the link, and where each edge enters a crossing
    let mut next: BTreeMap<u32, u32> = BTreeMap::new();
    let mut enters_under: BTreeMap<u32, usize> = BTreeMap::new();
    let mut parent: BTreeMap<u32, u32> = BTreeMap::new();
    for k in 0..pd.crossings.len() {
        let [under, over] = pd.strands(k);
        next.insert(under.0, under.1);
        next.insert(over.0, over.1);
        enters_under.insert(under.0, k);
        for e in [under.0, under.1, over.0, over.1] {
            parent.entry(e).or_insert(e);
        }
    }
    for k in 0..pd.crossings.len() {
        let [_, over] = pd.strands(k);
        let (ra, rb) = (find(&mut parent, over.0), find(&mut parent, over.1));
        if ra != rb {
            parent.insert(ra.max(rb), ra.min(rb));
        }
    }

    // components ordered by their smallest edge label
    let mut edge_component: BTreeMap<u32, usize> = BTreeMap::new();
    let mut comp_edges: Vec<Vec<u32>> = Vec::new();
    for &start in next.keys() {
        if edge_component.contains_key(&start) {
            continue;
        }
        let c = comp_edges.len();
        let mut path = Vec::new();
        let mut e = start;
        loop {
            edge_component.insert(e, c);
            path.push(e);
            e = next[&e];
            if e == start {
                break;
            }
        }
        comp_edges.push(path);
    }
    let n = comp_edges.len();

    // arcs: base arcs first (one per component), then the rest in travel order
    let mut root_to_arc: BTreeMap<u32, usize> = BTreeMap::new();
    let mut arcs: Vec<Vec<u32>> = Vec::new();
    let mut component_of = Vec::new();
    let mut order: Vec<(usize, u32)> = Vec::new();
    for (c, path) in comp_edges.iter().enumerate() {
        order.push((c, path[0]));
    }
    for (c, path) in comp_edges.iter().enumerate() {
        for &e in path {
            order.push((c, e));
        }
    }
    for (c, e) in order {
        let r = find(&mut parent, e);
        if !root_to_arc.contains_key(&r) {
            root_to_arc.insert(r, arcs.len());
            arcs.push(Vec::new());
            component_of.push(c);
        }
    }
    let mut labels: Vec<u32> = parent.keys().copied().collect();
    labels.sort_unstable();
    for e in labels {
        let r = find(&mut parent, e);
        arcs[root_to_arc[&r]].push(e);
    }
    let arc_of = |parent: &mut BTreeMap<u32, u32>, e: u32| root_to_arc[&find(parent, e)];

    let mut underpasses = Vec::with_capacity(n);
    let mut relators = vec![FreeWord::empty(); pd.crossings.len()];
    for path in &comp_edges {
        let mut list = Vec::new();
        for &e in path {
            if let Some(&k) = enters_under.get(&e) {
                let [under, over] = pd.strands(k);
                let u = Underpass {
                    crossing: k,
                    over_arc: arc_of(&mut parent, over.0),
                    incoming_arc: arc_of(&mut parent, under.0),
                    outgoing_arc: arc_of(&mut parent, under.1),
                    sign: pd.signs[k],
                };
                let z = Letter::new(u.over_arc as u32 + 1, u.sign);
                let x_in = Letter::new(u.incoming_arc as u32 + 1, 1);
                let x_out = Letter::new(u.outgoing_arc as u32 + 1, 1);
                relators[k] = FreeWord::from_letters([x_out, z, x_in.inverse(), z.inverse()]);
                list.push(u);
            }
        }
        underpasses.push(list);
    }
    Ok(WirtingerPresentation {
        n_components: n,
        arcs,
        component_of,
        base_meridian: (0..n).collect(),
        underpasses,
        relators,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const TREFOIL: &str = "X[1,4,2,5] -\nX[3,6,4,1] -\nX[5,2,6,3] -\n";

    #[test]
    fn parse_and_round_trip() {
        let pd = PDCode::parse(TREFOIL).unwrap();
        assert_eq!(pd.crossings.len(), 3);
        assert_eq!(PDCode::parse(&pd.to_text()).unwrap(), pd);
        assert!(PDCode::parse("X[1,2,3] +").is_err());
        assert!(PDCode::parse("X[1,2,3,4] ?").is_err());
    }

    #[test]
    fn trefoil_presentation() {
        let w = pd_to_wirtinger(&PDCode::parse(TREFOIL).unwrap()).unwrap();
        assert_eq!(w.n_components, 1);
        assert_eq!(w.generator_count(), 3);
        assert_eq!(w.relators.len(), 3);
        for r in &w.relators {
            assert_eq!(r.letters().iter().map(|l| l.sign() as i64).sum::<i64>(), 0);
        }
    }

    #[test]
    fn unknot_presentation() {
        let w = pd_to_wirtinger(&PDCode::unknot()).unwrap();
        assert_eq!((w.generator_count(), w.relators.len()), (1, 0));
    }

    #[test]
    fn hopf_presentation() {
        let w = pd_to_wirtinger(&PDCode::parse("X[1,3,2,4] +\nX[3,1,4,2] +").unwrap()).unwrap();
        assert_eq!(w.n_components, 2);
        assert_eq!(w.generator_count(), 2);
        assert_eq!(w.relators.len(), 2);
    }

    #[test]
    fn inconsistent_codes_rejected() {
        // both over-strands point the same way into edge 2
        assert!(matches!(
            PDCode::parse("X[1,3,2,4] +\nX[3,1,4,2] -"),
            Err(Error::InvalidPdCode(_))
        ));
        assert!(PDCode::new(vec![[1, 2, 3, 4]], vec![1, 1]).is_err());
    }

    #[test]
    fn mirror_is_valid() {
        let pd = PDCode::parse(TREFOIL).unwrap();
        assert!(pd.mirror().validate().is_ok());
        assert_eq!(pd.mirror().mirror(), pd);
    }
}
