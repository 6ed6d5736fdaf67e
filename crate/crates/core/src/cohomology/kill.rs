use std::collections::{BTreeMap, VecDeque};

use serde::Serialize;

use super::cochain::{coboundary, pullback, solve_coboundary, subdivision_pullback, verify_witness, Cochain};
use super::local::{LocalSystem, Stalk};
use crate::complex::{Simplex, SimplicialComplex};
use crate::covering::{
    branched_completion, covering_from_coset_table, is_etale_covering_family, BranchedCovering, CoveringMap,
    MorphismCondition,
};
use crate::error::{Error, Result};
use crate::etale::{as_etale_family, CoverFamily, Provenance};
use crate::grouppi::{edge_path_presentation, kernel_coset_table, FiniteHom};
use crate::plstructure::complement_c;

fn check_closed(x: &SimplicialComplex, sys: &LocalSystem, t: &Cochain) -> Result<()> {
    t.check(x, &sys.stalk)?;
    match coboundary(x, sys, t).values.into_keys().next() {
        Some(s) => Err(Error::NotClosed(s)),
        None => Ok(()),
    }
}

#[derive(Clone, Debug)]
pub struct KillH1 {
    /// `C(B, Y)`, where the class lives.
    pub model: SimplicialComplex,
    /// Image of each generator of the model's edge-path presentation.
    pub images: Vec<Vec<u64>>,
    /// Kernel cover of the model.
    pub cover: CoveringMap,
    pub completion: BranchedCovering,
    pub pulled_back: Cochain,
    pub witness: Cochain,
    pub verified: bool,
}

/// Kills a 1-class with constant coefficients: the covering of `Y - B` given
/// by the kernel of the homomorphism `t` defines, completed to a branched
/// covering of `Y`, on which `t` becomes an explicit coboundary.
pub fn kill_h1(y: &SimplicialComplex, b: &SimplicialComplex, stalk: &Stalk, t: &Cochain) -> Result<KillH1> {
    if t.degree != 1 {
        return Err(Error::Shape(format!("expected a 1-cochain, got degree {}", t.degree)));
    }
    let d = y.barycentric_subdivision();
    let model = complement_c(&d, b)?;
    let sys = LocalSystem::constant(stalk.clone());
    check_closed(&model, &sys, t)?;
    let base = *model.vertices().first().ok_or(Error::Empty("complement"))?;
    let pres = edge_path_presentation(&model, base)?;

    // potentials along the spanning tree: t(a, b) = p(b) - p(a) on tree edges
    let mut tree: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    for (a, c) in &pres.tree {
        tree.entry(*a).or_default().push((*a, *c));
        tree.entry(*c).or_default().push((*a, *c));
    }
    let value = |a: usize, c: usize| {
        let e = Simplex::new(vec![a, c]).expect("edge");
        t.get(&e).map_or_else(|| stalk.zero(), <[u64]>::to_vec)
    };
    let mut potential: BTreeMap<usize, Vec<u64>> = BTreeMap::from([(base, stalk.zero())]);
    let mut queue = VecDeque::from([base]);
    while let Some(v) = queue.pop_front() {
        for (a, c) in tree.get(&v).into_iter().flatten() {
            let (w, p) = if *a == v {
                (*c, stalk.add(&potential[&v], &value(*a, *c)))
            } else {
                (*a, stalk.add(&potential[&v], &stalk.scale(&value(*a, *c), -1)))
            };
            if !potential.contains_key(&w) {
                potential.insert(w, p);
                queue.push_back(w);
            }
        }
    }
    let mut images = vec![stalk.zero(); pres.presentation.generator_count];
    for ((a, c), g) in &pres.edge_generator {
        let around = stalk.add(&stalk.add(&potential[a], &value(*a, *c)), &stalk.scale(&potential[c], -1));
        images[*g] = around;
    }
    let group = stalk.group()?;
    let phi = FiniteHom {
        images: images.iter().map(|x| stalk.index_of(x)).collect(),
    };
    let table = kernel_coset_table(&pres.presentation, &group, &phi)?;
    let cover = covering_from_coset_table(&model, &pres, &table)?;
    let completion = branched_completion(&d, b, &cover)?;
    let pulled_back = pullback(&cover.map, &sys, t)?;
    let witness = solve_coboundary(cover.source(), &sys, &pulled_back)?
        .ok_or_else(|| Error::Consistency("pulled-back class is not a coboundary on the kernel cover".into()))?;
    let verified = verify_witness(cover.source(), &sys, &witness, &pulled_back);
    Ok(KillH1 {
        model,
        images,
        cover,
        completion,
        pulled_back,
        witness,
        verified,
    })
}

#[derive(Clone, Debug)]
pub struct MemberWitness {
    pub member: usize,
    pub provenance: Provenance,
    /// `C(B_i, K'')`, the complement of the member in the second subdivision.
    pub complement: SimplicialComplex,
    pub restricted: Cochain,
    pub witness: Cochain,
    pub verified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct MemberWitnessSummary {
    pub member: usize,
    pub provenance: Provenance,
    pub complement_f_vector: Vec<usize>,
    pub restricted_support: usize,
    pub witness_support: usize,
    pub verified: bool,
}

impl MemberWitness {
    pub fn summary(&self) -> MemberWitnessSummary {
        MemberWitnessSummary {
            member: self.member,
            provenance: self.provenance,
            complement_f_vector: self.complement.f_vector(),
            restricted_support: self.restricted.values.len(),
            witness_support: self.witness.values.len(),
            verified: self.verified,
        }
    }
}

/// Kills a class of degree at least 2 on `K` (the family's ambient base) by
/// restricting it to the complement of each member, computed in `K''`.
pub fn kill_higher(fam: &CoverFamily, sys: &LocalSystem, t: &Cochain) -> Result<Vec<MemberWitness>> {
    if t.degree < 2 {
        return Err(Error::Scope("classes of degree at least 2"));
    }
    let k = fam.ambient.base();
    check_closed(k, sys, t)?;
    let (target, members) = as_etale_family(fam);
    if !is_etale_covering_family(&target, &members, MorphismCondition::AsPrinted)?.is_covering_family {
        return Err(Error::NotCovering);
    }
    let t1 = subdivision_pullback(&fam.ambient, sys, t)?;
    let sys1 = sys.subdivide(&fam.ambient);
    let dd = fam.ambient.complex().barycentric_subdivision();
    let t2 = subdivision_pullback(&dd, &sys1, &t1)?;
    let sys2 = sys1.subdivide(&dd);
    fam.members
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let complement = complement_c(&dd, &m.subcomplex)?;
            let restricted = t2.restrict(&complement);
            let witness = solve_coboundary(&complement, &sys2, &restricted)?
                .ok_or_else(|| Error::Consistency(format!("class survives on the complement of member {i}")))?;
            let verified = verify_witness(&complement, &sys2, &witness, &restricted);
            Ok(MemberWitness {
                member: i,
                provenance: m.provenance,
                complement,
                restricted,
                witness,
                verified,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::cohomology;
    use crate::corpus;
    use crate::covering::{connected_covers, verify_branched};
    use crate::etale::{relative_cover_family, skeleton_coskeleton_pair};

    #[test]
    fn torus_h1_dies_on_a_triple_cover() {
        let y = corpus::torus_7();
        let stalk = Stalk::cyclic(3).unwrap();
        let d = y.barycentric_subdivision();
        let sys = LocalSystem::constant(stalk.clone());
        let h = cohomology(&y, &sys, 1).unwrap();
        let t = subdivision_pullback(&d, &sys, &h.representatives[0]).unwrap();
        let r = kill_h1(&y, &SimplicialComplex::empty(), &stalk, &t).unwrap();
        assert_eq!(r.cover.degree, 3);
        assert!(r.verified);
        assert_eq!(coboundary(r.cover.source(), &sys, &r.witness), r.pulled_back);
        assert!(!r.pulled_back.is_zero());
        assert!(verify_branched(&r.completion).valid);
    }

    #[test]
    fn zero_class_gives_identity() {
        let y = corpus::boundary_simplex(3);
        let stalk = Stalk::cyclic(2).unwrap();
        let r = kill_h1(&y, &SimplicialComplex::empty(), &stalk, &Cochain::zero(1)).unwrap();
        assert_eq!(r.cover.degree, 1);
        assert!(r.witness.is_zero());
        assert_eq!(r.completion.source(), y.barycentric_subdivision().complex());
    }

    #[test]
    fn annulus_class_on_the_octahedron() {
        let y = corpus::octahedron();
        let b = corpus::vertex_set(&corpus::OCTAHEDRON_POLES);
        let stalk = Stalk::cyclic(2).unwrap();
        let model = complement_c(&y.barycentric_subdivision(), &b).unwrap();
        let h = cohomology(&model, &LocalSystem::constant(stalk.clone()), 1).unwrap();
        assert_eq!(h.orders, vec![2]);
        let r = kill_h1(&y, &b, &stalk, &h.representatives[0]).unwrap();
        assert_eq!(r.cover.degree, 2);
        assert!(r.verified);
        let report = verify_branched(&r.completion);
        assert!(report.valid);
    }

    #[test]
    fn open_cochains_are_rejected() {
        let y = corpus::boundary_simplex(3);
        let d = y.barycentric_subdivision();
        let stalk = Stalk::cyclic(2).unwrap();
        let mut t = Cochain::zero(1);
        t.set(d.complex().faces(1)[0].clone(), vec![1]);
        assert!(matches!(
            kill_h1(&y, &SimplicialComplex::empty(), &stalk, &t),
            Err(Error::NotClosed(_))
        ));
    }

    #[test]
    fn top_classes_die_off_each_member() {
        for (y, m) in [(corpus::torus_7(), 3), (corpus::boundary_simplex(3), 2)] {
            let sys = LocalSystem::constant(Stalk::cyclic(m).unwrap());
            let h = cohomology(&y, &sys, 2).unwrap();
            assert_eq!(h.orders, vec![m]);
            let fam = skeleton_coskeleton_pair(&y).unwrap();
            // a cohomologous representative supported everywhere
            let mut u = Cochain::zero(1);
            for e in y.faces(1) {
                u.set(e.clone(), vec![1]);
            }
            let t = h.representatives[0].sub(&sys.stalk, &coboundary(&y, &sys, &u));
            let ws = kill_higher(&fam, &sys, &t).unwrap();
            assert_eq!(ws.len(), 2);
            for w in &ws {
                assert!(w.verified);
                // min-vertex pullbacks sit next to top barycenters, which the
                // coskeleton removes
                assert_eq!(w.restricted.is_zero(), w.member == 1);
                assert_eq!(coboundary(&w.complement, &sys.subdivide(&fam.ambient).subdivide(&fam.ambient.complex().barycentric_subdivision()), &w.witness), w.restricted);
            }
        }
    }

    #[test]
    fn relative_family_kills_on_the_complement() {
        let y = corpus::octahedron();
        let b = corpus::vertex_set(&corpus::OCTAHEDRON_POLES);
        let fam = relative_cover_family(&y, &b, 2, 3).unwrap();
        let sys = LocalSystem::constant(Stalk::cyclic(2).unwrap());
        // the annulus has no H^2; a coboundary still gets a witness
        let k = fam.ambient.base();
        let mut w = Cochain::zero(1);
        w.set(k.faces(1)[0].clone(), vec![1]);
        let t = coboundary(k, &sys, &w);
        for mw in kill_higher(&fam, &sys, &t).unwrap() {
            assert!(mw.verified);
        }
    }

    #[test]
    fn transfer_consistency_on_double_covers() {
        // degree 2 is prime to 3, so no nonzero class dies
        let x = corpus::torus_7();
        let sys = LocalSystem::constant(Stalk::cyclic(3).unwrap());
        let pres = edge_path_presentation(&x, 0).unwrap();
        let h = cohomology(&x, &sys, 1).unwrap();
        for cover in connected_covers(&x, &pres, 2, 100_000).unwrap() {
            for r in &h.representatives {
                let p = pullback(&cover.map, &sys, r).unwrap();
                assert!(solve_coboundary(cover.source(), &sys, &p).unwrap().is_none());
            }
        }
    }
}
