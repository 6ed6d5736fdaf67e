use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::complex::{Simplex, SimplicialComplex};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialMap {
    pub source: SimplicialComplex,
    pub target: SimplicialComplex,
    pub vertex_map: BTreeMap<usize, usize>,
}

impl SimplicialMap {
    /// Checks that every source vertex is mapped and every simplex lands on a simplex.
    pub fn new(source: SimplicialComplex, target: SimplicialComplex, vertex_map: BTreeMap<usize, usize>) -> Result<Self> {
        let m = SimplicialMap {
            source,
            target,
            vertex_map,
        };
        for v in m.source.vertices() {
            if !m.vertex_map.contains_key(&v) {
                return Err(Error::Invalid(format!("source vertex {v} has no image")));
            }
        }
        if let Some(s) = m.source.facets().iter().find(|s| !m.target.contains(&m.image(s))) {
            return Err(Error::Invalid(format!("image of {s} is not a simplex of the target")));
        }
        Ok(m)
    }

    pub fn identity(x: &SimplicialComplex) -> Self {
        SimplicialMap {
            source: x.clone(),
            target: x.clone(),
            vertex_map: x.vertices().into_iter().map(|v| (v, v)).collect(),
        }
    }

    pub fn apply(&self, v: usize) -> usize {
        self.vertex_map[&v]
    }

    pub fn image(&self, s: &Simplex) -> Simplex {
        let vs: BTreeSet<usize> = s.vertices().iter().map(|v| self.apply(*v)).collect();
        Simplex::new(vs.into_iter().collect()).expect("nonempty")
    }

    /// Image of a subcomplex of the source.
    pub fn image_complex(&self, sub: &SimplicialComplex) -> SimplicialComplex {
        if sub.is_empty() {
            return SimplicialComplex::empty();
        }
        SimplicialComplex::closure(sub.facets().iter().map(|s| self.image(s)))
    }

    /// Full preimage of a subcomplex of the target.
    pub fn preimage(&self, sub: &SimplicialComplex) -> SimplicialComplex {
        self.source.filter(|s| sub.contains(&self.image(s)))
    }

    pub fn fiber(&self, x: usize) -> Vec<usize> {
        self.vertex_map.iter().filter(|(_, t)| **t == x).map(|(s, _)| *s).collect()
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &SimplicialMap) -> Result<SimplicialMap> {
        let vertex_map = self
            .vertex_map
            .iter()
            .map(|(s, t)| {
                other
                    .vertex_map
                    .get(t)
                    .map(|u| (*s, *u))
                    .ok_or_else(|| Error::Invalid(format!("vertex {t} is outside the second map's source")))
            })
            .collect::<Result<_>>()?;
        SimplicialMap::new(self.source.clone(), other.target.clone(), vertex_map)
    }

    /// Restriction to a subcomplex of the source, landing in `target`.
    pub fn restrict(&self, source: &SimplicialComplex, target: &SimplicialComplex) -> Result<SimplicialMap> {
        let vertex_map = source.vertices().into_iter().map(|v| (v, self.apply(v))).collect();
        SimplicialMap::new(source.clone(), target.clone(), vertex_map)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoveringMap {
    pub map: SimplicialMap,
    pub degree: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CoveringViolation {
    /// The star of this source vertex does not map bijectively onto the star of its image.
    Star { vertex: usize },
    /// This target vertex has the wrong number of preimages.
    Fiber { vertex: usize, size: usize },
}

#[derive(Clone, Debug, Serialize)]
pub struct CoveringReport {
    pub valid: bool,
    pub degree: usize,
    pub violations: Vec<CoveringViolation>,
}

fn stars(x: &SimplicialComplex) -> BTreeMap<usize, Vec<&Simplex>> {
    let mut out: BTreeMap<usize, Vec<&Simplex>> = BTreeMap::new();
    for s in x.simplices() {
        for v in s.vertices() {
            out.entry(*v).or_default().push(s);
        }
    }
    out
}

/// Star-bijectivity at every source vertex and fibers of size `k` over every target vertex.
pub fn verify_covering(f: &SimplicialMap, k: usize) -> CoveringReport {
    let mut violations = Vec::new();
    let source_stars = stars(&f.source);
    let target_stars = stars(&f.target);
    for (v, star) in &source_stars {
        let image: BTreeSet<Simplex> = star.iter().map(|s| f.image(s)).collect();
        let ok = star.iter().all(|s| f.image(s).len() == s.len())
            && image.len() == star.len()
            && target_stars
                .get(&f.apply(*v))
                .map_or(false, |t| t.len() == image.len() && t.iter().all(|s| image.contains(*s)));
        if !ok {
            violations.push(CoveringViolation::Star { vertex: *v });
        }
    }
    let mut fibers: BTreeMap<usize, usize> = f.target.vertices().into_iter().map(|v| (v, 0)).collect();
    for t in f.vertex_map.values() {
        if let Some(c) = fibers.get_mut(t) {
            *c += 1;
        }
    }
    for (vertex, size) in fibers {
        if size != k {
            violations.push(CoveringViolation::Fiber { vertex, size });
        }
    }
    CoveringReport {
        valid: violations.is_empty(),
        degree: k,
        violations,
    }
}

impl CoveringMap {
    pub fn new(map: SimplicialMap, degree: usize) -> Result<Self> {
        let report = verify_covering(&map, degree);
        if !report.valid {
            return Err(Error::Invalid(format!("not a {degree}-fold covering: {:?}", report.violations)));
        }
        Ok(CoveringMap { map, degree })
    }

    pub fn identity(x: &SimplicialComplex) -> Self {
        CoveringMap {
            map: SimplicialMap::identity(x),
            degree: 1,
        }
    }

    pub fn source(&self) -> &SimplicialComplex {
        &self.map.source
    }

    pub fn target(&self) -> &SimplicialComplex {
        &self.map.target
    }

    /// The unique neighbour of `y` lying over `x`, for `x` adjacent to the image of `y`.
    pub fn lift_edge(&self, y: usize, x: usize) -> Option<usize> {
        self.map
            .source
            .star_of(&Simplex::vertex(y))
            .into_iter()
            .filter(|s| s.len() == 2)
            .flat_map(|s| s.vertices().iter().copied())
            .find(|w| *w != y && self.map.apply(*w) == x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn nine_over_three() -> SimplicialMap {
        let source = corpus::circle(9);
        let target = corpus::circle(3);
        let vertex_map = (0..9).map(|v| (v, v % 3)).collect();
        SimplicialMap::new(source, target, vertex_map).unwrap()
    }

    #[test]
    fn nine_cycle_covers_three_cycle() {
        let r = verify_covering(&nine_over_three(), 3);
        assert!(r.valid, "{:?}", r.violations);
        assert!(!verify_covering(&nine_over_three(), 2).valid);
    }

    #[test]
    fn mutated_vertex_is_named() {
        let mut f = nine_over_three();
        // 4 -> 0 instead of 1: edges [3,4] and [4,5] now map to [0] and [0,2].
        f.vertex_map.insert(4, 0);
        let r = verify_covering(&f, 3);
        assert!(!r.valid);
        assert!(r.violations.contains(&CoveringViolation::Star { vertex: 4 }));
    }

    #[test]
    fn constant_map_is_not_a_covering() {
        let s2 = corpus::boundary_simplex(3);
        let pt = corpus::vertex_set(&[0]);
        let f = SimplicialMap::new(s2.clone(), pt, s2.vertices().into_iter().map(|v| (v, 0)).collect()).unwrap();
        let r = verify_covering(&f, 4);
        assert!(!r.valid);
        assert!(r.violations.iter().any(|v| matches!(v, CoveringViolation::Star { .. })));
    }

    #[test]
    fn non_simplicial_map_is_rejected() {
        let src = corpus::circle(4);
        let tgt = corpus::circle(4);
        let vm = [(0, 0), (1, 2), (2, 1), (3, 3)].into_iter().collect();
        assert!(SimplicialMap::new(src, tgt, vm).is_err());
    }

    #[test]
    fn lifting_edges() {
        let f = CoveringMap::new(nine_over_three(), 3).unwrap();
        assert_eq!(f.lift_edge(4, 2), Some(5));
        assert_eq!(f.lift_edge(4, 0), Some(3));
        assert_eq!(f.lift_edge(0, 2), Some(8));
    }
}
