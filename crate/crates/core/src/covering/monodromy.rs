use std::collections::{BTreeMap, BTreeSet};

use super::map::{CoveringMap, SimplicialMap};
use crate::complex::{Simplex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::grouppi::{compose, is_permutation, low_index_subgroups, CosetTable, EdgePathPresentation};

/// Sym(S)-valued 1-cocycle on the edges: `perms[(a, b)]`, `a < b`, sends the
/// sheet `s` over `a` to the sheet `perms[(a, b)][s]` over `b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeCocycle {
    pub degree: usize,
    pub perms: BTreeMap<(usize, usize), Vec<usize>>,
}

impl EdgeCocycle {
    pub fn perm(&self, a: usize, b: usize) -> &[usize] {
        &self.perms[&(a, b)]
    }

    /// First triangle `[a, b, c]` with `perm(a, c) != perm(a, b) * perm(b, c)`.
    pub fn violation(&self, x: &SimplicialComplex) -> Option<Simplex> {
        x.faces(2)
            .iter()
            .find(|t| {
                let v = t.vertices();
                compose(self.perm(v[0], v[1]), self.perm(v[1], v[2])) != self.perm(v[0], v[2])
            })
            .cloned()
    }

    pub fn from_coset_table(pres: &EdgePathPresentation, x: &SimplicialComplex, table: &CosetTable) -> Result<Self> {
        if table.action.len() != pres.presentation.generator_count {
            return Err(Error::Shape(format!(
                "table acts by {} generators, presentation has {}",
                table.action.len(),
                pres.presentation.generator_count
            )));
        }
        if let Some(relator) = table.violated_relator(&pres.presentation) {
            return Err(Error::RelatorViolation { relator });
        }
        let perms = x
            .faces(1)
            .iter()
            .map(|e| {
                let (a, b) = (e.vertices()[0], e.vertices()[1]);
                ((a, b), table.word_permutation(&pres.edge_word(a, b)))
            })
            .collect();
        Ok(EdgeCocycle {
            degree: table.degree,
            perms,
        })
    }
}

/// Vertex `(v, s)` of the total space gets id `rank(v) * degree + s`, where
/// `rank` is the position of `v` among the target vertices.
pub fn covering_from_cocycle(x: &SimplicialComplex, cocycle: &EdgeCocycle) -> Result<CoveringMap> {
    let k = cocycle.degree;
    if k == 0 {
        return Err(Error::Range {
            what: "covering degree",
            value: 0,
            min: 1,
            max: i64::MAX,
        });
    }
    for e in x.faces(1) {
        let key = (e.vertices()[0], e.vertices()[1]);
        match cocycle.perms.get(&key) {
            Some(p) if p.len() == k && is_permutation(p) => {}
            _ => return Err(Error::Malformed(format!("edge {e} needs a permutation of 0..{k}"))),
        }
    }
    if let Some(t) = cocycle.violation(x) {
        return Err(Error::CocycleViolation(t));
    }
    let rank: BTreeMap<usize, usize> = x.vertices().into_iter().enumerate().map(|(i, v)| (v, i)).collect();
    let id = |v: usize, s: usize| rank[&v] * k + s;
    let mut facets = Vec::new();
    for f in x.facets() {
        let v0 = f.vertices()[0];
        for s in 0..k {
            let ids = f
                .vertices()
                .iter()
                .map(|v| if *v == v0 { id(v0, s) } else { id(*v, cocycle.perm(v0, *v)[s]) })
                .collect();
            facets.push(Simplex::new(ids)?);
        }
    }
    let source = SimplicialComplex::from_facets(facets)?;
    let vertex_map = rank.iter().flat_map(|(v, r)| (0..k).map(move |s| (r * k + s, *v))).collect();
    let map = SimplicialMap::new(source, x.clone(), vertex_map)?;
    Ok(CoveringMap { map, degree: k })
}

pub fn covering_from_coset_table(
    x: &SimplicialComplex,
    pres: &EdgePathPresentation,
    table: &CosetTable,
) -> Result<CoveringMap> {
    covering_from_cocycle(x, &EdgeCocycle::from_coset_table(pres, x, table)?)
}

fn adjacency(x: &SimplicialComplex) -> BTreeMap<usize, Vec<usize>> {
    let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for e in x.faces(1) {
        let (a, b) = (e.vertices()[0], e.vertices()[1]);
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    }
    adj
}

/// Monodromy of a covering on the generators of an edge-path presentation of its
/// base: sheets are the fiber over the basepoint in increasing vertex order.
pub fn monodromy_table(f: &CoveringMap, pres: &EdgePathPresentation) -> Result<CosetTable> {
    let adj = adjacency(f.source());
    let lift = |y: usize, x: usize| -> Result<usize> {
        adj.get(&y)
            .into_iter()
            .flatten()
            .copied()
            .find(|w| f.map.apply(*w) == x)
            .ok_or_else(|| Error::Invalid(format!("edge at {y} does not lift over {x}")))
    };
    // Tree paths from the basepoint, as vertex sequences.
    let target_adj = adjacency(f.target());
    let mut parent: BTreeMap<usize, usize> = BTreeMap::new();
    let mut reached = BTreeSet::from([pres.basepoint]);
    let tree: BTreeSet<(usize, usize)> = pres.tree.iter().copied().collect();
    let mut frontier = vec![pres.basepoint];
    while let Some(v) = frontier.pop() {
        for &w in target_adj.get(&v).into_iter().flatten() {
            if tree.contains(&(v.min(w), v.max(w))) && reached.insert(w) {
                parent.insert(w, v);
                frontier.push(w);
            }
        }
    }
    let path_to = |v: usize| -> Vec<usize> {
        let mut p = vec![v];
        let mut cur = v;
        while let Some(u) = parent.get(&cur) {
            p.push(*u);
            cur = *u;
        }
        p.reverse();
        p
    };
    let fiber = f.map.fiber(pres.basepoint);
    let sheet: BTreeMap<usize, usize> = fiber.iter().enumerate().map(|(i, y)| (*y, i)).collect();
    let mut action = Vec::new();
    for &(a, b) in &pres.presentation.origin {
        let mut walk = path_to(a);
        let mut back = path_to(b);
        back.reverse();
        walk.extend(back);
        let mut row = Vec::with_capacity(fiber.len());
        for &y0 in &fiber {
            let mut y = y0;
            for x in &walk[1..] {
                y = lift(y, *x)?;
            }
            row.push(sheet[&y]);
        }
        action.push(row);
    }
    CosetTable::new(fiber.len(), action)
}

/// Transitive pieces of a table: one canonical table per orbit, sorted.
pub fn orbit_canonical_forms(t: &CosetTable) -> Vec<CosetTable> {
    let mut seen = vec![false; t.degree];
    let mut out = Vec::new();
    for start in 0..t.degree {
        if seen[start] {
            continue;
        }
        let mut orbit = vec![start];
        seen[start] = true;
        let mut i = 0;
        while i < orbit.len() {
            let c = orbit[i];
            for p in &t.action {
                let inv = crate::grouppi::invert(p);
                for d in [p[c], inv[c]] {
                    if !seen[d] {
                        seen[d] = true;
                        orbit.push(d);
                    }
                }
            }
            i += 1;
        }
        orbit.sort_unstable();
        let pos: BTreeMap<usize, usize> = orbit.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        let action = t.action.iter().map(|p| orbit.iter().map(|c| pos[&p[*c]]).collect()).collect();
        out.push(
            CosetTable {
                degree: orbit.len(),
                action,
            }
            .conjugacy_canonical(),
        );
    }
    out.sort();
    out
}

/// Coverings of a connected base are isomorphic iff their monodromy actions are.
pub fn coverings_isomorphic(f: &CoveringMap, g: &CoveringMap, pres: &EdgePathPresentation) -> Result<bool> {
    if f.target() != g.target() {
        return Ok(false);
    }
    Ok(orbit_canonical_forms(&monodromy_table(f, pres)?) == orbit_canonical_forms(&monodromy_table(g, pres)?))
}

/// One connected covering per conjugacy class of index-`k` subgroups.
pub fn connected_covers(
    x: &SimplicialComplex,
    pres: &EdgePathPresentation,
    k: usize,
    budget: u64,
) -> Result<Vec<CoveringMap>> {
    low_index_subgroups(&pres.presentation, k, budget)?
        .into_iter()
        .filter(|t| t.degree == k)
        .map(|t| covering_from_coset_table(x, pres, &t))
        .collect()
}
