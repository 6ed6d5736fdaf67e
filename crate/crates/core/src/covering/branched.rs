use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::map::{verify_covering, CoveringMap, CoveringViolation, SimplicialMap};
use crate::complex::{DerivedComplex, Simplex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::plstructure::complement_c;
use crate::util::UnionFind;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchedCovering {
    pub map: SimplicialMap,
    /// Subcomplex of the source.
    pub branch: SimplicialComplex,
    pub degree: usize,
}

impl BranchedCovering {
    /// The identity with an arbitrary branch subcomplex.
    pub fn identity(x: &SimplicialComplex, branch: SimplicialComplex) -> Self {
        BranchedCovering {
            map: SimplicialMap::identity(x),
            branch,
            degree: 1,
        }
    }

    pub fn source(&self) -> &SimplicialComplex {
        &self.map.source
    }

    pub fn target(&self) -> &SimplicialComplex {
        &self.map.target
    }

    fn branch_vertices(&self) -> BTreeSet<usize> {
        self.branch.vertices().into_iter().collect()
    }

    fn branch_image_vertices(&self) -> BTreeSet<usize> {
        self.branch.vertices().into_iter().map(|v| self.map.apply(v)).collect()
    }

    /// Restriction to the simplices away from the branch locus and its image.
    pub fn unbranched_part(&self) -> Result<CoveringMap> {
        let b = self.branch_vertices();
        let fb = self.branch_image_vertices();
        let source = self.source().filter(|s| s.vertices().iter().all(|v| !b.contains(v)));
        let target = self.target().filter(|s| s.vertices().iter().all(|v| !fb.contains(v)));
        Ok(CoveringMap {
            map: self.map.restrict(&source, &target)?,
            degree: self.degree,
        })
    }

    pub fn fiber_sizes(&self) -> Vec<(usize, usize)> {
        self.branch_image_vertices()
            .into_iter()
            .map(|x| (x, self.map.fiber(x).len()))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BranchedViolation {
    Degenerate { simplex: Simplex },
    BranchCodimension { codimension: i64 },
    /// A vertex over the image of the branch locus that is not itself branched.
    BranchPreimage { vertex: usize },
    Unbranched { violation: CoveringViolation },
}

#[derive(Clone, Debug, Serialize)]
pub struct BranchedReport {
    pub valid: bool,
    pub degree: usize,
    pub fiber_sizes: Vec<(usize, usize)>,
    pub violations: Vec<BranchedViolation>,
}

pub fn verify_branched(bc: &BranchedCovering) -> BranchedReport {
    let mut violations = Vec::new();
    for s in bc.source().facets() {
        if bc.map.image(s).len() != s.len() {
            violations.push(BranchedViolation::Degenerate { simplex: s.clone() });
        }
    }
    if !bc.branch.is_empty() {
        let codimension = bc.source().dimension() - bc.branch.dimension();
        if codimension < 2 {
            violations.push(BranchedViolation::BranchCodimension { codimension });
        }
    }
    let b = bc.branch_vertices();
    let fb = bc.branch_image_vertices();
    for (v, x) in &bc.map.vertex_map {
        if fb.contains(x) && !b.contains(v) {
            violations.push(BranchedViolation::BranchPreimage { vertex: *v });
        }
    }
    match bc.unbranched_part() {
        Ok(u) => violations.extend(
            verify_covering(&u.map, bc.degree)
                .violations
                .into_iter()
                .map(|violation| BranchedViolation::Unbranched { violation }),
        ),
        Err(_) => violations.push(BranchedViolation::Unbranched {
            violation: CoveringViolation::Star {
                vertex: bc.source().vertices().first().copied().unwrap_or(0),
            },
        }),
    }
    BranchedReport {
        valid: violations.is_empty(),
        degree: bc.degree,
        fiber_sizes: bc.fiber_sizes(),
        violations,
    }
}

/// `chi(Y) - [k chi(X) - sum_x (k - |f^-1(x)|)]` over the target vertices; zero
/// for a branched covering of surfaces.
pub fn riemann_hurwitz_residual(bc: &BranchedCovering) -> Result<i64> {
    if bc.source().dim() != Some(2) || bc.target().dim() != Some(2) {
        return Err(Error::Scope("surfaces (source and target of dimension 2)"));
    }
    let k = bc.degree as i64;
    let mut fibers: BTreeMap<usize, i64> = bc.target().vertices().into_iter().map(|v| (v, 0)).collect();
    for x in bc.map.vertex_map.values() {
        *fibers.get_mut(x).expect("target vertex") += 1;
    }
    let deficiency: i64 = fibers.values().map(|n| k - n).sum();
    Ok(bc.source().euler_characteristic() - (k * bc.target().euler_characteristic() - deficiency))
}

/// Completes a covering of `C(V, X)` to a branched covering of T'.
///
/// Every simplex of T' is a join `a * b` of a chain `a` in V and a simplex `b`
/// of `C(V, X)`. For a vertex `w` of V' let `S_w` be the part of its link lying in
/// `C(V, X)`; each component `K` of the preimage of `S_w` contributes one branch
/// vertex over `w`. A lift `b~` of `b` then spans, together with the branch
/// vertices over `a` whose components contain `b~`, one simplex of the completion.
pub fn branched_completion(d: &DerivedComplex, v: &SimplicialComplex, cover: &CoveringMap) -> Result<BranchedCovering> {
    let x = d.base();
    if let Some(f) = v.facets().iter().find(|f| !x.contains(f)) {
        return Err(Error::Invalid(format!("{f} is not a simplex of the base")));
    }
    v.check_full_in(x).map_err(Error::NotFull)?;
    if !v.is_empty() {
        let codim = x.dimension() - v.dimension();
        if codim < 2 {
            return Err(Error::Codimension { codim });
        }
    }
    let c = complement_c(d, v)?;
    if cover.target() != &c {
        return Err(Error::Invalid("the covering must be over C(V, X) in the derived complex".into()));
    }
    let in_v: Vec<bool> = d.barycenters().iter().map(|s| v.contains(s)).collect();
    let cover_vertices = cover.source().vertices();
    let first_branch_id = cover_vertices.last().map_or(0, |m| m + 1);

    // Component of each preimage vertex of S_w, labeled by its smallest member.
    let mut component: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut branch_keys: Vec<(usize, usize)> = Vec::new();
    for w in (0..in_v.len()).filter(|w| in_v[*w]) {
        let sw = d.simplex_of(w);
        let in_sw = |u: usize| !in_v[u] && sw.is_proper_face_of(d.simplex_of(u));
        let ys: Vec<usize> = cover_vertices.iter().copied().filter(|y| in_sw(cover.map.apply(*y))).collect();
        if ys.is_empty() {
            continue;
        }
        let pos: BTreeMap<usize, usize> = ys.iter().enumerate().map(|(i, y)| (*y, i)).collect();
        let mut uf = UnionFind::new(ys.len());
        for e in cover.source().faces(1) {
            if let (Some(i), Some(j)) = (pos.get(&e.vertices()[0]), pos.get(&e.vertices()[1])) {
                uf.union(*i, *j);
            }
        }
        for class in uf.classes() {
            let label = ys[class[0]];
            branch_keys.push((w, label));
            for i in class {
                component.insert((w, ys[i]), label);
            }
        }
    }
    branch_keys.sort_unstable();
    let branch_id: BTreeMap<(usize, usize), usize> = branch_keys
        .iter()
        .enumerate()
        .map(|(i, key)| (*key, first_branch_id + i))
        .collect();

    let mut lifts: BTreeMap<&Simplex, Vec<&Simplex>> = BTreeMap::new();
    let images: Vec<(Simplex, &Simplex)> = cover.source().simplices().map(|s| (cover.map.image(s), s)).collect();
    for (img, s) in &images {
        lifts.entry(img).or_default().push(*s);
    }
    let mut facets = Vec::new();
    for tau in d.complex().facets() {
        let (alpha, beta): (Vec<usize>, Vec<usize>) = tau.vertices().iter().partition(|u| in_v[**u]);
        if beta.is_empty() {
            return Err(Error::Codimension { codim: 0 });
        }
        let beta = Simplex::new(beta)?;
        for lift in lifts.get(&beta).into_iter().flatten() {
            let y = lift.vertices()[0];
            let mut ids = lift.vertices().to_vec();
            for w in &alpha {
                ids.push(branch_id[&(*w, component[&(*w, y)])]);
            }
            facets.push(Simplex::new(ids)?);
        }
    }
    let source = SimplicialComplex::from_facets(facets)?;
    let mut vertex_map = cover.map.vertex_map.clone();
    for ((w, _), id) in &branch_id {
        vertex_map.insert(*id, *w);
    }
    let branch = source.filter(|s| s.vertices().iter().all(|u| *u >= first_branch_id));
    let map = SimplicialMap::new(source, d.complex().clone(), vertex_map)?;
    Ok(BranchedCovering {
        map,
        branch,
        degree: cover.degree,
    })
}

/// For two completions of the same covering, the degree-one map `g` with
/// `f2 = f1 . g`, if there is one.
pub fn completion_factorization(f1: &BranchedCovering, f2: &BranchedCovering) -> Option<SimplicialMap> {
    let b1 = f1.branch_vertices();
    let b2 = f2.branch_vertices();
    let mut vertex_map = BTreeMap::new();
    for v in f2.source().vertices() {
        if !b2.contains(&v) {
            if b1.contains(&v) || f1.map.vertex_map.get(&v) != Some(&f2.map.apply(v)) {
                return None;
            }
            vertex_map.insert(v, v);
        }
    }
    let star1 = |u: usize| f1.source().star_of(&Simplex::vertex(u));
    for b in &b2 {
        let neighbour = f2
            .source()
            .star_of(&Simplex::vertex(*b))
            .into_iter()
            .filter(|s| s.len() == 2)
            .flat_map(|s| s.vertices().iter().copied())
            .find(|u| !b2.contains(u))?;
        let over = f2.map.apply(*b);
        let image = star1(neighbour)
            .into_iter()
            .filter(|s| s.len() == 2)
            .flat_map(|s| s.vertices().iter().copied())
            .find(|u| b1.contains(u) && f1.map.apply(*u) == over)?;
        vertex_map.insert(*b, image);
    }
    let g = SimplicialMap::new(f2.source().clone(), f1.source().clone(), vertex_map).ok()?;
    let injective = g.vertex_map.values().collect::<BTreeSet<_>>().len() == g.vertex_map.len();
    let composite = g.then(&f1.map).ok()?;
    (injective && composite.vertex_map == f2.map.vertex_map).then_some(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::covering::monodromy::connected_covers;
    use crate::grouppi::{edge_path_presentation, DEFAULT_NODE_BUDGET};
    use crate::plstructure::{link_of, verify_pseudomanifold, Mode};

    fn pole_cover(k: usize) -> (DerivedComplex, SimplicialComplex, CoveringMap) {
        let x = corpus::octahedron();
        let d = x.barycentric_subdivision();
        let v = corpus::vertex_set(&corpus::OCTAHEDRON_POLES);
        let c = complement_c(&d, &v).unwrap();
        let pres = edge_path_presentation(&c, c.vertices()[0]).unwrap();
        let mut covers = connected_covers(&c, &pres, k, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(covers.len(), 1, "annulus has one connected cover per degree");
        (d, v, covers.remove(0))
    }

    #[test]
    fn octahedron_pole_branched_covers() {
        for k in 2..=5 {
            let (d, v, cover) = pole_cover(k);
            let bc = branched_completion(&d, &v, &cover).unwrap();
            let report = verify_branched(&bc);
            assert!(report.valid, "k={k}: {:?}", report.violations);
            assert!(verify_pseudomanifold(bc.source(), Mode::Closed).is_valid());
            assert_eq!(bc.source().euler_characteristic(), 2);
            assert_eq!(riemann_hurwitz_residual(&bc).unwrap(), 0);
            assert!(bc.fiber_sizes().iter().all(|(_, n)| *n == 1));
            // the link of each branch point is the k-fold cover of the 8-cycle link
            for b in bc.branch.vertices() {
                let l = bc.source().combinatorial_link(&Simplex::vertex(b));
                assert_eq!(l.f_vector(), vec![8 * k, 8 * k]);
            }
            assert_eq!(bc.unbranched_part().unwrap(), cover);
        }
    }

    #[test]
    fn identity_cover_completes_to_identity() {
        let x = corpus::octahedron();
        let d = x.barycentric_subdivision();
        let v = corpus::vertex_set(&corpus::OCTAHEDRON_POLES);
        let c = complement_c(&d, &v).unwrap();
        let bc = branched_completion(&d, &v, &CoveringMap::identity(&c)).unwrap();
        assert!(verify_branched(&bc).valid);
        assert_eq!(bc.source().f_vector(), d.complex().f_vector());
        let image = bc.map.image_complex(bc.source());
        assert_eq!(&image, d.complex());
        assert_eq!(bc.map.vertex_map.values().collect::<BTreeSet<_>>().len(), bc.source().num_vertices());
    }

    #[test]
    fn wedge_vertex_gets_two_points() {
        let x = corpus::wedge_of_spheres();
        let d = x.barycentric_subdivision();
        let v = corpus::vertex_set(&[corpus::WEDGE_VERTEX]);
        let c = complement_c(&d, &v).unwrap();
        assert_eq!(c.components().unwrap().len(), 2);
        let bc = branched_completion(&d, &v, &CoveringMap::identity(&c)).unwrap();
        let w = d.barycenter_of(&Simplex::vertex(corpus::WEDGE_VERTEX)).unwrap();
        assert_eq!(bc.fiber_sizes(), vec![(w, 2)]);
        assert!(verify_branched(&bc).valid);
        assert_eq!(bc.source().components().unwrap().len(), 2);
        assert_eq!(riemann_hurwitz_residual(&bc).unwrap(), 0);
    }

    #[test]
    fn fiber_counts_match_link_preimage_components() {
        let (d, v, cover) = pole_cover(3);
        let bc = branched_completion(&d, &v, &cover).unwrap();
        for (w, n) in bc.fiber_sizes() {
            let link = link_of(&d, d.simplex_of(w)).unwrap();
            let pre = cover.map.preimage(&link);
            assert_eq!(pre.components().unwrap().len(), n);
        }
    }

    #[test]
    fn input_errors() {
        let x = corpus::boundary_simplex(3);
        let d = x.barycentric_subdivision();
        let edge = SimplicialComplex::from_vertex_lists(&[vec![0, 1]]).unwrap();
        let c = complement_c(&d, &edge).unwrap();
        assert!(matches!(
            branched_completion(&d, &edge, &CoveringMap::identity(&c)),
            Err(Error::Codimension { codim: 1 })
        ));
        let two = corpus::vertex_set(&[0, 1]);
        let c = complement_c(&d, &two).unwrap();
        assert!(matches!(
            branched_completion(&d, &two, &CoveringMap::identity(&c)),
            Err(Error::NotFull(_))
        ));
    }

    #[test]
    fn riemann_hurwitz_scope() {
        let x = corpus::boundary_simplex(4);
        let bc = BranchedCovering::identity(&x, SimplicialComplex::empty());
        assert!(matches!(riemann_hurwitz_residual(&bc), Err(Error::Scope(_))));
        let s2 = corpus::boundary_simplex(3);
        assert_eq!(riemann_hurwitz_residual(&BranchedCovering::identity(&s2, SimplicialComplex::empty())).unwrap(), 0);
    }

    #[test]
    fn completions_of_the_same_cover_factor() {
        let (d, v, cover) = pole_cover(2);
        let a = branched_completion(&d, &v, &cover).unwrap();
        let b = branched_completion(&d, &v, &cover).unwrap();
        let g = completion_factorization(&a, &b).unwrap();
        assert!(g.vertex_map.iter().all(|(p, q)| p == q));
    }
}
