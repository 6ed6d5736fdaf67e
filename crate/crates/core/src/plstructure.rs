//! Pseudomanifold axioms and the dual-cell calculus on the barycentric subdivision.
//!
//! Everything here that lives in T' is returned as a subcomplex of
//! [`DerivedComplex::complex`], i.e. on barycenter ids. The membership tests are
//! predicates on chains:
//!
//! | object            | chains `(s_0 > ... > s_k)` with            |
//! |-------------------|--------------------------------------------|
//! | dual cone of `s`  | every entry contains `s`                   |
//! | link of `s`       | every entry strictly contains `s`          |
//! | i-coskeleton      | every entry has dimension `>= n - i`       |
//! | `C(B, X)`         | no entry in `B`                            |
//! | `N(B, X)`         | smallest entry meets the vertices of `B`   |

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::complex::{DerivedComplex, Simplex, SimplicialComplex};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Closed,
    WithBoundary,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    Empty,
    NotPure { facet: Simplex },
    RidgeDegree { ridge: Simplex, degree: usize },
    /// A 0-dimensional pseudomanifold must be two points (one or two with boundary).
    PointCount { count: usize },
    BoundaryNotPseudomanifold,
}

#[derive(Clone, Debug, Serialize)]
pub struct PseudomanifoldReport {
    pub mode: Mode,
    pub dimension: i64,
    pub is_pure: bool,
    pub ridge_degrees: Vec<(Simplex, usize)>,
    pub boundary: SimplicialComplex,
    pub boundary_report: Option<Box<PseudomanifoldReport>>,
    pub violations: Vec<Violation>,
}

impl PseudomanifoldReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn verify_pseudomanifold(x: &SimplicialComplex, mode: Mode) -> PseudomanifoldReport {
    let mut report = PseudomanifoldReport {
        mode,
        dimension: x.dimension(),
        is_pure: true,
        ridge_degrees: Vec::new(),
        boundary: SimplicialComplex::empty(),
        boundary_report: None,
        violations: Vec::new(),
    };
    let Some(n) = x.dim() else {
        report.violations.push(Violation::Empty);
        return report;
    };
    for f in x.facets().iter().filter(|f| f.dim() != n) {
        report.is_pure = false;
        report.violations.push(Violation::NotPure { facet: f.clone() });
    }
    if n == 0 {
        let count = x.num_vertices();
        let ok = match mode {
            Mode::Closed => count == 2,
            Mode::WithBoundary => count == 1 || count == 2,
        };
        if !ok {
            report.violations.push(Violation::PointCount { count });
        }
        return report;
    }

    let mut degree: HashMap<&Simplex, usize> = x.faces(n - 1).iter().map(|r| (r, 0)).collect();
    for top in x.faces(n) {
        for r in top.boundary() {
            *degree.get_mut(&r).expect("ridge of complex") += 1;
        }
    }
    report.ridge_degrees = x.faces(n - 1).iter().map(|r| (r.clone(), degree[r])).collect();
    let min_degree = match mode {
        Mode::Closed => 2,
        Mode::WithBoundary => 1,
    };
    for (r, d) in &report.ridge_degrees {
        if *d < min_degree || *d > 2 {
            report.violations.push(Violation::RidgeDegree {
                ridge: r.clone(),
                degree: *d,
            });
        }
    }
    if mode == Mode::WithBoundary {
        let free: Vec<Simplex> = report
            .ridge_degrees
            .iter()
            .filter(|(_, d)| *d == 1)
            .map(|(r, _)| r.clone())
            .collect();
        if !free.is_empty() {
            let boundary = SimplicialComplex::closure(free);
            let sub = verify_pseudomanifold(&boundary, Mode::Closed);
            if !sub.is_valid() {
                report.violations.push(Violation::BoundaryNotPseudomanifold);
            }
            report.boundary = boundary;
            report.boundary_report = Some(Box::new(sub));
        }
    }
    report
}

/// Closed-mode verdict if closed-valid, else the with-boundary verdict.
pub fn verify_any(x: &SimplicialComplex) -> PseudomanifoldReport {
    let closed = verify_pseudomanifold(x, Mode::Closed);
    if closed.is_valid() {
        closed
    } else {
        verify_pseudomanifold(x, Mode::WithBoundary)
    }
}

fn require_simplex(d: &DerivedComplex, s: &Simplex) -> Result<()> {
    if d.base().contains(s) {
        Ok(())
    } else {
        Err(Error::MissingSimplex(s.clone()))
    }
}

fn base_dim(d: &DerivedComplex) -> Result<usize> {
    d.base().dim().ok_or(Error::Empty("complex"))
}

/// Link of `s` as the part of its dual cone that avoids the barycenter of `s`.
pub fn link_of(d: &DerivedComplex, s: &Simplex) -> Result<SimplicialComplex> {
    require_simplex(d, s)?;
    Ok(d.full_subcomplex(|t| s.is_proper_face_of(t)))
}

#[derive(Clone, Debug, Serialize)]
pub struct DualCone {
    pub center: Simplex,
    pub cells: SimplicialComplex,
    pub dimension: usize,
}

pub fn dual_cone(d: &DerivedComplex, s: &Simplex) -> Result<DualCone> {
    require_simplex(d, s)?;
    let n = base_dim(d)?;
    Ok(DualCone {
        center: s.clone(),
        cells: d.full_subcomplex(|t| s.is_face_of(t)),
        dimension: n - s.dim(),
    })
}

/// Union of the dual cones of dimension at most `i`.
pub fn coskeleton(d: &DerivedComplex, i: usize) -> Result<SimplicialComplex> {
    let n = base_dim(d)?;
    if i > n {
        return Err(Error::Range {
            what: "coskeleton dimension",
            value: i as i64,
            min: 0,
            max: n as i64,
        });
    }
    Ok(d.full_subcomplex(|t| t.dim() + i >= n))
}

fn require_subcomplex(d: &DerivedComplex, b: &SimplicialComplex) -> Result<()> {
    match b.facets().iter().find(|f| !d.base().contains(f)) {
        Some(f) => Err(Error::Invalid(format!("{f} is not a simplex of the triangulation"))),
        None => Ok(()),
    }
}

/// `C(B, X)`: derived simplices disjoint from `B`.
pub fn complement_c(d: &DerivedComplex, b: &SimplicialComplex) -> Result<SimplicialComplex> {
    require_subcomplex(d, b)?;
    Ok(d.full_subcomplex(|t| !b.contains(t)))
}

/// `S(D, X)`: base simplices that do not meet `D`, where `D` is a union of
/// closed dual cones in T'.
pub fn complement_s(d: &DerivedComplex, dual: &SimplicialComplex) -> Result<SimplicialComplex> {
    if !dual.is_subcomplex_of(d.complex()) {
        return Err(Error::Invalid("D is not a subcomplex of the derived complex".into()));
    }
    // A chain lies in some closed dual cone inside D iff the whole dual cone of
    // its smallest entry lies in D.
    let generators: BTreeSet<&Simplex> = d
        .base()
        .simplices()
        .filter(|s| {
            let cone = d.full_subcomplex(|t| s.is_face_of(t));
            cone.is_subcomplex_of(dual)
        })
        .collect();
    if let Some(c) = dual.simplices().find(|c| !generators.contains(d.bottom(c))) {
        return Err(Error::Invalid(format!(
            "D is not a union of dual cones: chain {} is not covered",
            c
        )));
    }
    let hit: BTreeSet<usize> = dual.vertices().into_iter().collect();
    Ok(d.base().filter(|t| {
        t.faces()
            .iter()
            .all(|f| !hit.contains(&d.barycenter_of(f).expect("face of base")))
    }))
}

#[derive(Clone, Debug, Serialize)]
pub struct RegularNeighborhood {
    pub neighborhood: SimplicialComplex,
    pub complement: SimplicialComplex,
    pub boundary: SimplicialComplex,
}

fn require_full(d: &DerivedComplex, b: &SimplicialComplex) -> Result<()> {
    require_subcomplex(d, b)?;
    b.check_full_in(d.base()).map_err(Error::NotFull)
}

/// `N(B, X)`, `C(B, X)` and their common boundary. `B` must be full.
pub fn regular_neighborhood(d: &DerivedComplex, b: &SimplicialComplex) -> Result<RegularNeighborhood> {
    require_full(d, b)?;
    let bverts: BTreeSet<usize> = b.vertices().into_iter().collect();
    let neighborhood = d
        .complex()
        .filter(|c| d.bottom(c).vertices().iter().any(|v| bverts.contains(v)));
    let complement = complement_c(d, b)?;
    let boundary = neighborhood.intersection(&complement);
    Ok(RegularNeighborhood {
        neighborhood,
        complement,
        boundary,
    })
}

/// Subdivides once so that `b` becomes full: returns T' and the subdivided `b`.
pub fn make_full(x: &SimplicialComplex, b: &SimplicialComplex) -> Result<(DerivedComplex, SimplicialComplex)> {
    let d = x.barycentric_subdivision();
    let sub = d.subdivide(b)?;
    Ok((d, sub))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JoinDecomposition {
    pub simplex: Simplex,
    /// Largest face inside `B`.
    pub inside: Simplex,
    /// Largest face disjoint from `B`.
    pub outside: Simplex,
}

/// Join decompositions of every simplex that meets both `B` and its complement.
pub fn collar_certificate(x: &SimplicialComplex, b: &SimplicialComplex) -> Result<Vec<JoinDecomposition>> {
    if let Some(f) = b.facets().iter().find(|f| !x.contains(f)) {
        return Err(Error::Invalid(format!("{f} is not a simplex of the triangulation")));
    }
    b.check_full_in(x).map_err(Error::NotFull)?;
    if b.num_simplices() == x.num_simplices() {
        return Err(Error::Invalid("B equals X; there is no collar".into()));
    }
    let bverts: BTreeSet<usize> = b.vertices().into_iter().collect();
    let mut out = Vec::new();
    for s in x.simplices() {
        let inside: Vec<usize> = s.vertices().iter().copied().filter(|v| bverts.contains(v)).collect();
        if inside.is_empty() || inside.len() == s.len() {
            continue;
        }
        let inside = Simplex::new(inside)?;
        let outside = s.difference(&inside).expect("some vertex outside B");
        debug_assert!(b.contains(&inside));
        debug_assert_eq!(&inside.union(&outside), s);
        out.push(JoinDecomposition {
            simplex: s.clone(),
            inside,
            outside,
        });
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct NormalityReport {
    pub normal: bool,
    pub witnesses: Vec<Simplex>,
}

/// Links of simplices of dimension `< n - 1` are connected.
pub fn is_normal(d: &DerivedComplex) -> Result<NormalityReport> {
    if !verify_any(d.base()).is_valid() {
        return Err(Error::Invalid("not a pseudomanifold".into()));
    }
    let n = base_dim(d)?;
    let mut witnesses = Vec::new();
    for s in d.base().simplices().filter(|s| s.dim() + 1 < n) {
        if !link_of(d, s)?.is_connected()? {
            witnesses.push(s.clone());
        }
    }
    Ok(NormalityReport {
        normal: witnesses.is_empty(),
        witnesses,
    })
}

/// Every vertex has degree two in a 1-dimensional complex.
pub fn is_disjoint_union_of_cycles(x: &SimplicialComplex) -> bool {
    if x.dim() != Some(1) || x.facets().iter().any(|f| f.dim() != 1) {
        return false;
    }
    let mut deg: HashMap<usize, usize> = HashMap::new();
    for e in x.faces(1) {
        for v in e.vertices() {
            *deg.entry(*v).or_default() += 1;
        }
    }
    deg.values().all(|d| *d == 2)
}

#[derive(Clone, Debug, Serialize)]
pub struct LinkSummary {
    pub simplex: Simplex,
    pub codimension: usize,
    pub f_vector: Vec<usize>,
    pub euler_characteristic: i64,
    pub components: usize,
    pub pseudomanifold: bool,
}

/// Link summaries for every simplex of the base, in simplex order.
pub fn link_summaries(d: &DerivedComplex) -> Result<Vec<LinkSummary>> {
    let n = base_dim(d)?;
    d.base()
        .simplices()
        .map(|s| {
            let link = link_of(d, s)?;
            let components = if link.is_empty() { 0 } else { link.components()?.len() };
            Ok(LinkSummary {
                simplex: s.clone(),
                codimension: n - s.dim(),
                f_vector: link.f_vector(),
                euler_characteristic: link.euler_characteristic(),
                components,
                pseudomanifold: !link.is_empty() && verify_any(&link).is_valid(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::simplex;

    #[test]
    fn closed_and_boundary_modes() {
        let s2 = corpus::boundary_simplex(3);
        let r = verify_pseudomanifold(&s2, Mode::Closed);
        assert!(r.is_valid());
        assert!(r.ridge_degrees.iter().all(|(_, d)| *d == 2));

        let ball = corpus::solid_simplex(3);
        assert!(!verify_pseudomanifold(&ball, Mode::Closed).is_valid());
        let r = verify_pseudomanifold(&ball, Mode::WithBoundary);
        assert!(r.is_valid());
        assert_eq!(r.boundary, s2);
        assert!(r.boundary_report.unwrap().is_valid());
    }

    #[test]
    fn triangles_sharing_a_vertex() {
        let x = SimplicialComplex::from_vertex_lists(&[vec![0, 1, 2], vec![0, 3, 4]]).unwrap();
        let r = verify_pseudomanifold(&x, Mode::Closed);
        assert!(!r.is_valid());
        assert!(r.ridge_degrees.iter().all(|(_, d)| *d == 1));
    }

    #[test]
    fn impure_complex_is_reported() {
        let x = SimplicialComplex::from_vertex_lists(&[vec![0, 1, 2], vec![2, 3]]).unwrap();
        let r = verify_pseudomanifold(&x, Mode::WithBoundary);
        assert!(!r.is_pure);
        assert!(r.violations.contains(&Violation::NotPure { facet: simplex![2, 3] }));
    }

    #[test]
    fn links_in_the_tetrahedron_boundary() {
        let d = corpus::boundary_simplex(3).barycentric_subdivision();
        let lv = link_of(&d, &simplex![0]).unwrap();
        assert_eq!(lv.f_vector(), vec![6, 6]);
        assert!(is_disjoint_union_of_cycles(&lv));
        assert!(lv.is_connected().unwrap());
        let le = link_of(&d, &simplex![0, 1]).unwrap();
        assert_eq!(le.f_vector(), vec![2]);
        assert!(verify_pseudomanifold(&le, Mode::Closed).is_valid());
        assert!(matches!(link_of(&d, &simplex![0, 9]), Err(Error::MissingSimplex(_))));
    }

    #[test]
    fn wedge_vertex_link_has_two_cycles() {
        let d = corpus::wedge_of_spheres().barycentric_subdivision();
        let l = link_of(&d, &simplex![corpus::WEDGE_VERTEX]).unwrap();
        assert_eq!(l.components().unwrap().len(), 2);
        assert_eq!(l.f_vector(), vec![12, 12]);
        let normal = is_normal(&d).unwrap();
        assert!(!normal.normal);
        assert_eq!(normal.witnesses, vec![simplex![corpus::WEDGE_VERTEX]]);
    }

    #[test]
    fn normality() {
        assert!(is_normal(&corpus::boundary_simplex(3).barycentric_subdivision()).unwrap().normal);
        assert!(is_normal(&corpus::rp2_6().barycentric_subdivision()).unwrap().normal);
        let bad = SimplicialComplex::from_vertex_lists(&[vec![0, 1, 2], vec![0, 3, 4]]).unwrap();
        assert!(matches!(is_normal(&bad.barycentric_subdivision()), Err(Error::Invalid(_))));
    }

    #[test]
    fn dual_cones_and_coskeleta() {
        let d = corpus::boundary_simplex(3).barycentric_subdivision();
        let c = dual_cone(&d, &simplex![0, 1, 2]).unwrap();
        assert_eq!(c.dimension, 0);
        assert_eq!(c.cells.f_vector(), vec![1]);
        let c = dual_cone(&d, &simplex![0, 1]).unwrap();
        assert_eq!(c.dimension, 1);
        assert_eq!(c.cells.f_vector(), vec![3, 2]);
        let cosk = coskeleton(&d, 1).unwrap();
        assert_eq!(cosk.f_vector(), vec![10, 12]);
        assert_eq!(cosk.euler_characteristic(), -2);
        assert_eq!(coskeleton(&d, 2).unwrap(), *d.complex());
        assert!(coskeleton(&d, 3).is_err());
    }

    #[test]
    fn complement_c_cases() {
        let x = corpus::boundary_simplex(3);
        let d = x.barycentric_subdivision();
        let b = x.skeleton(0).unwrap();
        assert_eq!(complement_c(&d, &b).unwrap(), coskeleton(&d, 1).unwrap());
        assert!(complement_c(&d, &x).unwrap().is_empty());
        assert_eq!(&complement_c(&d, &SimplicialComplex::empty()).unwrap(), d.complex());
        let foreign = SimplicialComplex::from_vertex_lists(&[vec![0, 7]]).unwrap();
        assert!(matches!(complement_c(&d, &foreign), Err(Error::Invalid(_))));
    }

    #[test]
    fn complement_s_cases() {
        let x = corpus::boundary_simplex(3);
        let d = x.barycentric_subdivision();
        let s = complement_s(&d, &coskeleton(&d, 1).unwrap()).unwrap();
        assert_eq!(s, x.skeleton(0).unwrap());
        assert_eq!(complement_s(&d, &SimplicialComplex::empty()).unwrap(), x);
        assert!(complement_s(&d, &coskeleton(&d, 2).unwrap()).unwrap().is_empty());
        // A single derived edge is not a union of dual cones.
        let stray = SimplicialComplex::from_facets([d.complex().faces(1)[0].clone()]).unwrap();
        assert!(matches!(complement_s(&d, &stray), Err(Error::Invalid(_))));
    }

    #[test]
    fn neighborhood_of_a_vertex() {
        let x = corpus::boundary_simplex(3);
        let d = x.barycentric_subdivision();
        let b = corpus::vertex_set(&[0]);
        let rn = regular_neighborhood(&d, &b).unwrap();
        assert_eq!(rn.neighborhood.euler_characteristic(), 1);
        assert_eq!(rn.boundary, link_of(&d, &simplex![0]).unwrap());
        let rep = verify_pseudomanifold(&rn.neighborhood, Mode::WithBoundary);
        assert!(rep.is_valid());
        assert_eq!(rep.boundary, rn.boundary);
        let rep = verify_pseudomanifold(&rn.complement, Mode::WithBoundary);
        assert!(rep.is_valid());
        assert_eq!(rep.boundary, rn.boundary);
    }

    #[test]
    fn neighborhood_of_everything_has_no_boundary() {
        let x = corpus::boundary_simplex(3);
        let d = x.barycentric_subdivision();
        let rn = regular_neighborhood(&d, &x).unwrap();
        assert!(rn.boundary.is_empty());
        assert_eq!(&rn.neighborhood, d.complex());
    }

    #[test]
    fn neighborhood_in_rp2() {
        let x = corpus::rp2_6();
        let d = x.barycentric_subdivision();
        let rn = regular_neighborhood(&d, &corpus::vertex_set(&[0])).unwrap();
        assert_eq!(rn.neighborhood.euler_characteristic(), 1);
        assert_eq!(rn.complement.euler_characteristic(), 0);
        assert_eq!(
            rn.neighborhood.euler_characteristic() + rn.complement.euler_characteristic()
                - rn.boundary.euler_characteristic(),
            1
        );
    }

    #[test]
    fn fullness_is_checked() {
        let x = corpus::boundary_simplex(3);
        let d = x.barycentric_subdivision();
        let b = corpus::vertex_set(&[0, 1]);
        assert!(matches!(regular_neighborhood(&d, &b), Err(Error::NotFull(s)) if s == simplex![0, 1]));
        let (d2, b2) = make_full(&x, &b).unwrap();
        assert!(b2.check_full_in(d2.complex()).is_ok());
    }

    #[test]
    fn collar_decompositions() {
        let x = corpus::boundary_simplex(3);
        let b = corpus::vertex_set(&[0]);
        let cert = collar_certificate(&x, &b).unwrap();
        let edge = cert.iter().find(|j| j.simplex == simplex![0, 1]).unwrap();
        assert_eq!((edge.inside.clone(), edge.outside.clone()), (simplex![0], simplex![1]));
        let tri = cert.iter().find(|j| j.simplex == simplex![0, 1, 2]).unwrap();
        assert_eq!((tri.inside.clone(), tri.outside.clone()), (simplex![0], simplex![1, 2]));
        assert!(cert.iter().all(|j| j.simplex != simplex![0]));
        assert!(cert.iter().all(|j| j.simplex != simplex![1, 2]));
        assert!(collar_certificate(&x, &x).is_err());
    }
}
