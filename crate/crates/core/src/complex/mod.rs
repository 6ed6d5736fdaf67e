//! Finite abstract simplicial complexes.
//!
//! A [`SimplicialComplex`] stores its full face closure, one sorted list per
//! dimension, together with the maximal simplices. Vertex ids are plain
//! integers. Complexes read from files are reindexed to `0..V`, while
//! subcomplexes keep the ids of their ambient complex so that set operations
//! between them are meaningful.

mod derived;
mod realize;
mod simplex;

use std::collections::{BTreeSet, HashSet};

pub use derived::{DerivedComplex, FlagSimplex};
pub use realize::{RationalRealization, PERTURBATION_WEIGHT_BOUND};
pub(crate) use realize::rational_rank;
pub use simplex::Simplex;

use crate::error::{Error, Result};
use crate::util::UnionFind;

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SimplicialComplex {
    /// `faces[d]` holds the d-simplices in lexicographic order.
    faces: Vec<Vec<Simplex>>,
    facets: Vec<Simplex>,
}

impl SimplicialComplex {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Smallest face-closed complex containing `facets`. Non-maximal inputs are
    /// dropped from the facet list.
    pub fn from_facets<I: IntoIterator<Item = Simplex>>(facets: I) -> Result<Self> {
        let facets: Vec<Simplex> = facets.into_iter().collect();
        if facets.is_empty() {
            return Err(Error::Empty("facet list"));
        }
        Ok(Self::closure(facets))
    }

    /// Like [`from_facets`](Self::from_facets) but from raw vertex lists.
    pub fn from_vertex_lists(lists: &[Vec<usize>]) -> Result<Self> {
        let facets = lists
            .iter()
            .map(|l| Simplex::new(l.clone()))
            .collect::<Result<Vec<_>>>()?;
        Self::from_facets(facets)
    }

    pub(crate) fn closure<I: IntoIterator<Item = Simplex>>(facets: I) -> Self {
        let mut by_dim: Vec<HashSet<Simplex>> = Vec::new();
        for f in facets {
            if by_dim.len() <= f.dim() {
                by_dim.resize_with(f.dim() + 1, HashSet::new);
            }
            if by_dim[f.dim()].contains(&f) {
                continue;
            }
            for face in f.faces() {
                let d = face.dim();
                by_dim[d].insert(face);
            }
        }
        Self::from_face_sets(by_dim)
    }

    fn from_face_sets(by_dim: Vec<HashSet<Simplex>>) -> Self {
        let faces: Vec<Vec<Simplex>> = by_dim
            .into_iter()
            .map(|s| {
                let mut v: Vec<Simplex> = s.into_iter().collect();
                v.sort_unstable();
                v
            })
            .collect();
        Self::from_sorted_faces(faces)
    }

    /// `faces` must be face-closed and sorted per dimension.
    fn from_sorted_faces(mut faces: Vec<Vec<Simplex>>) -> Self {
        while faces.last().is_some_and(|l| l.is_empty()) {
            faces.pop();
        }
        let mut facets = Vec::new();
        for d in 0..faces.len() {
            let covered: HashSet<Simplex> = faces
                .get(d + 1)
                .map(|up| up.iter().flat_map(|s| s.boundary()).collect())
                .unwrap_or_default();
            facets.extend(faces[d].iter().filter(|s| !covered.contains(*s)).cloned());
        }
        facets.sort_unstable();
        SimplicialComplex { faces, facets }
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    /// Dimension, or `None` for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        self.faces.len().checked_sub(1)
    }

    /// Dimension with the convention that the empty complex has dimension -1.
    pub fn dimension(&self) -> i64 {
        self.faces.len() as i64 - 1
    }

    pub fn facets(&self) -> &[Simplex] {
        &self.facets
    }

    pub fn faces(&self, d: usize) -> &[Simplex] {
        self.faces.get(d).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn simplices(&self) -> impl Iterator<Item = &Simplex> + '_ {
        self.faces.iter().flatten()
    }

    pub fn num_simplices(&self) -> usize {
        self.faces.iter().map(Vec::len).sum()
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.faces.iter().map(Vec::len).collect()
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.index_of(s).is_some()
    }

    /// Position of `s` within `faces(s.dim())`.
    pub fn index_of(&self, s: &Simplex) -> Option<usize> {
        self.faces.get(s.dim())?.binary_search(s).ok()
    }

    pub fn vertices(&self) -> Vec<usize> {
        self.faces(0).iter().map(|s| s.vertices()[0]).collect()
    }

    pub fn num_vertices(&self) -> usize {
        self.faces(0).len()
    }

    /// Vertex ids are exactly `0..V`.
    pub fn is_dense(&self) -> bool {
        self.faces(0)
            .iter()
            .enumerate()
            .all(|(i, s)| s.vertices()[0] == i)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.faces
            .iter()
            .enumerate()
            .map(|(d, l)| if d % 2 == 0 { l.len() as i64 } else { -(l.len() as i64) })
            .sum()
    }

    /// All simplices of dimension at most `i`.
    pub fn skeleton(&self, i: usize) -> Result<Self> {
        let n = self.dimension();
        if i as i64 > n {
            return Err(Error::Range {
                what: "skeleton dimension",
                value: i as i64,
                min: 0,
                max: n,
            });
        }
        Ok(Self::from_sorted_faces(self.faces[..=i].to_vec()))
    }

    /// Keeps the simplices satisfying `keep`. The predicate must be inherited by
    /// faces, otherwise the result is not a complex.
    pub fn filter(&self, keep: impl Fn(&Simplex) -> bool) -> Self {
        let faces = self
            .faces
            .iter()
            .map(|l| l.iter().filter(|s| keep(s)).cloned().collect())
            .collect();
        Self::from_sorted_faces(faces)
    }

    /// Vertex sets of connected components, ordered by smallest vertex.
    pub fn components(&self) -> Result<Vec<Vec<usize>>> {
        if self.is_empty() {
            return Err(Error::Empty("complex"));
        }
        let verts = self.vertices();
        let pos = |v: usize| verts.binary_search(&v).expect("edge endpoint is a vertex");
        let mut uf = UnionFind::new(verts.len());
        for e in self.faces(1) {
            uf.union(pos(e.vertices()[0]), pos(e.vertices()[1]));
        }
        Ok(uf
            .classes()
            .into_iter()
            .map(|c| c.into_iter().map(|i| verts[i]).collect())
            .collect())
    }

    pub fn is_connected(&self) -> Result<bool> {
        Ok(self.components()?.len() == 1)
    }

    pub fn is_subcomplex_of(&self, other: &Self) -> bool {
        self.facets.iter().all(|f| other.contains(f))
    }

    pub fn union(&self, other: &Self) -> Self {
        Self::closure(self.facets.iter().chain(other.facets.iter()).cloned())
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.filter(|s| other.contains(s))
    }

    /// Simplices of `self` containing `s`.
    pub fn star_of(&self, s: &Simplex) -> Vec<&Simplex> {
        self.faces
            .iter()
            .skip(s.dim())
            .flatten()
            .filter(|t| s.is_face_of(t))
            .collect()
    }

    /// Combinatorial link: simplices disjoint from `s` whose union with `s` is in the complex.
    pub fn combinatorial_link(&self, s: &Simplex) -> Self {
        let facets: Vec<Simplex> = self
            .star_of(s)
            .into_iter()
            .filter_map(|t| t.difference(s))
            .collect();
        if facets.is_empty() {
            return Self::empty();
        }
        Self::closure(facets)
    }

    /// Join with a complex on disjoint vertex ids. Joining with the empty complex is the identity.
    pub fn join(&self, other: &Self) -> Result<Self> {
        let mine: BTreeSet<usize> = self.vertices().into_iter().collect();
        if let Some(v) = other.vertices().into_iter().find(|v| mine.contains(v)) {
            return Err(Error::IdCollision(v));
        }
        if self.is_empty() {
            return Ok(other.clone());
        }
        if other.is_empty() {
            return Ok(self.clone());
        }
        let mut facets = Vec::with_capacity(self.facets.len() * other.facets.len());
        for a in &self.facets {
            for b in &other.facets {
                facets.push(a.union(b));
            }
        }
        Ok(Self::closure(facets))
    }

    /// Cone with apex `apex`.
    pub fn cone(&self, apex: usize) -> Result<Self> {
        self.join(&Self::closure([Simplex::vertex(apex)]))
    }

    /// Cone on the first unused id, `max vertex + 1`.
    pub fn cone_fresh(&self) -> (Self, usize) {
        let apex = self.vertices().last().map_or(0, |v| v + 1);
        (self.cone(apex).expect("fresh apex"), apex)
    }

    /// Relabels vertices to `0..V` preserving order; returns the old id of each new id.
    pub fn reindexed(&self) -> (Self, Vec<usize>) {
        let old = self.vertices();
        let new_of = |v: usize| old.binary_search(&v).expect("vertex of complex");
        let faces = self
            .faces
            .iter()
            .map(|l| {
                l.iter()
                    .map(|s| Simplex::from_sorted(s.vertices().iter().map(|v| new_of(*v)).collect()))
                    .collect()
            })
            .collect();
        (Self::from_sorted_faces(faces), old)
    }

    /// `self` is full in `ambient`: any ambient simplex with all vertices in `self` is in `self`.
    /// Returns the first offending simplex otherwise.
    pub fn check_full_in(&self, ambient: &Self) -> std::result::Result<(), Simplex> {
        let verts: BTreeSet<usize> = self.vertices().into_iter().collect();
        for s in ambient.simplices() {
            if s.vertices().iter().all(|v| verts.contains(v)) && !self.contains(s) {
                return Err(s.clone());
            }
        }
        Ok(())
    }

    pub fn barycentric_subdivision(&self) -> DerivedComplex {
        DerivedComplex::new(self.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::simplex;

    #[test]
    fn boundary_of_tetrahedron_counts() {
        let x = corpus::boundary_simplex(3);
        assert_eq!(x.f_vector(), vec![4, 6, 4]);
        assert_eq!(x.euler_characteristic(), 2);
    }

    #[test]
    fn single_edge() {
        let x = SimplicialComplex::from_vertex_lists(&[vec![0, 1]]).unwrap();
        assert_eq!(x.f_vector(), vec![2, 1]);
    }

    #[test]
    fn rp2_face_counts() {
        let x = corpus::rp2_6();
        assert_eq!(x.f_vector(), vec![6, 15, 10]);
        assert_eq!(x.euler_characteristic(), 1);
    }

    #[test]
    fn duplicate_vertex_is_malformed() {
        assert!(matches!(
            SimplicialComplex::from_vertex_lists(&[vec![0, 1, 1]]),
            Err(Error::Malformed(_))
        ));
        assert!(matches!(SimplicialComplex::from_facets(vec![]), Err(Error::Empty(_))));
    }

    #[test]
    fn non_maximal_inputs_are_pruned() {
        let x = SimplicialComplex::from_vertex_lists(&[vec![0, 1, 2], vec![0, 1], vec![2, 3]]).unwrap();
        assert_eq!(x.facets(), &[simplex![2, 3], simplex![0, 1, 2]]);
    }

    #[test]
    fn skeleta() {
        let x = corpus::boundary_simplex(3);
        let k4 = x.skeleton(1).unwrap();
        assert_eq!(k4.f_vector(), vec![4, 6]);
        assert_eq!(k4.euler_characteristic(), -2);
        assert_eq!(x.skeleton(2).unwrap(), x);
        assert_eq!(corpus::rp2_6().skeleton(0).unwrap().f_vector(), vec![6]);
        assert!(matches!(x.skeleton(3), Err(Error::Range { .. })));
    }

    #[test]
    fn connectivity() {
        assert!(corpus::boundary_simplex(3).is_connected().unwrap());
        let two = SimplicialComplex::from_vertex_lists(&[vec![0, 1], vec![2, 3]]).unwrap();
        assert_eq!(two.components().unwrap(), vec![vec![0, 1], vec![2, 3]]);
        assert!(matches!(SimplicialComplex::empty().is_connected(), Err(Error::Empty(_))));
    }

    #[test]
    fn cones_and_joins() {
        let c3 = corpus::circle(3);
        let (disc, apex) = c3.cone_fresh();
        assert_eq!(apex, 3);
        assert_eq!(disc.faces(2).len(), 3);
        assert_eq!(disc.euler_characteristic(), 1);

        let e1 = SimplicialComplex::from_vertex_lists(&[vec![0, 1]]).unwrap();
        let e2 = SimplicialComplex::from_vertex_lists(&[vec![2, 3]]).unwrap();
        let tet = e1.join(&e2).unwrap();
        assert_eq!(tet.facets(), &[simplex![0, 1, 2, 3]]);
        assert!(matches!(e1.join(&e1), Err(Error::IdCollision(0))));

        let two_cycles =
            SimplicialComplex::from_vertex_lists(&[vec![0, 1], vec![1, 2], vec![0, 2], vec![3, 4], vec![4, 5], vec![3, 5]])
                .unwrap();
        let (cone, apex) = two_cycles.cone_fresh();
        assert_eq!(cone.faces(2).len(), 6);
        assert_eq!(cone.combinatorial_link(&Simplex::vertex(apex)).components().unwrap().len(), 2);
        assert_eq!(cone.euler_characteristic(), 1);
    }

    #[test]
    fn reindex_preserves_shape() {
        let x = SimplicialComplex::from_vertex_lists(&[vec![3, 7, 9], vec![7, 9, 12]]).unwrap();
        assert!(!x.is_dense());
        let (y, old) = x.reindexed();
        assert!(y.is_dense());
        assert_eq!(old, vec![3, 7, 9, 12]);
        assert_eq!(y.facets(), &[simplex![0, 1, 2], simplex![1, 2, 3]]);
    }

    #[test]
    fn fullness() {
        let x = corpus::boundary_simplex(3);
        let two_verts = SimplicialComplex::from_vertex_lists(&[vec![0], vec![1]]).unwrap();
        assert_eq!(two_verts.check_full_in(&x), Err(simplex![0, 1]));
        let edge = SimplicialComplex::from_vertex_lists(&[vec![0, 1]]).unwrap();
        assert!(edge.check_full_in(&x).is_ok());
    }
}
