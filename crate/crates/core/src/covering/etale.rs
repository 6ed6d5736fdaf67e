use std::collections::BTreeSet;

use serde::Serialize;

use super::branched::BranchedCovering;
use super::map::SimplicialMap;
use crate::complex::Simplex;
use crate::error::{Error, Result};

/// Which containment a morphism `phi: (Y_i, B_i) -> (Y, B)` of branched
/// coverings must satisfy.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MorphismCondition {
    /// `B ⊆ phi(B_i)`.
    #[default]
    AsPrinted,
    /// `phi^-1(B) ⊆ B_i`.
    Pullback,
}

#[derive(Clone, Debug)]
pub struct FamilyMember {
    pub covering: BranchedCovering,
    /// Morphism from the member's total space to the target's total space.
    pub phi: SimplicialMap,
}

#[derive(Clone, Debug, Serialize)]
pub struct EtaleFamilyReport {
    pub condition: MorphismCondition,
    pub covers_unbranched_part: bool,
    /// Simplices off the target's branch locus hit by no member.
    pub uncovered: Vec<Simplex>,
    pub morphism_conditions: Vec<bool>,
    pub is_covering_family: bool,
}

fn check_member(target: &BranchedCovering, i: usize, m: &FamilyMember) -> Result<()> {
    if m.phi.source != *m.covering.source() || m.phi.target != *target.source() {
        return Err(Error::Shape(format!("member {i}: morphism does not go between the total spaces")));
    }
    if m.covering.target() != target.target() {
        return Err(Error::Shape(format!("member {i} lies over a different base")));
    }
    for (v, w) in &m.phi.vertex_map {
        if target.map.apply(*w) != m.covering.map.apply(*v) {
            return Err(Error::Composition(*v));
        }
    }
    Ok(())
}

/// Whether the unbranched parts of the members jointly cover the unbranched part
/// of the target: every open simplex of `Y` off `B` is the image of an open
/// simplex of some `Y_i` off `B_i`.
pub fn is_etale_covering_family(
    target: &BranchedCovering,
    family: &[FamilyMember],
    condition: MorphismCondition,
) -> Result<EtaleFamilyReport> {
    for (i, m) in family.iter().enumerate() {
        check_member(target, i, m)?;
    }
    let mut hit: BTreeSet<Simplex> = BTreeSet::new();
    for m in family {
        for s in m.covering.source().simplices() {
            if m.covering.branch.contains(s) {
                continue;
            }
            let img = m.phi.image(s);
            if img.len() == s.len() {
                hit.insert(img);
            }
        }
    }
    let uncovered: Vec<Simplex> = target
        .source()
        .simplices()
        .filter(|s| !target.branch.contains(s) && !hit.contains(*s))
        .cloned()
        .collect();
    let morphism_conditions: Vec<bool> = family
        .iter()
        .map(|m| match condition {
            MorphismCondition::AsPrinted => target.branch.is_subcomplex_of(&m.phi.image_complex(&m.covering.branch)),
            MorphismCondition::Pullback => m.phi.preimage(&target.branch).is_subcomplex_of(&m.covering.branch),
        })
        .collect();
    let covers = uncovered.is_empty();
    Ok(EtaleFamilyReport {
        condition,
        covers_unbranched_part: covers,
        uncovered,
        is_covering_family: covers && morphism_conditions.iter().all(|b| *b),
        morphism_conditions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::SimplicialComplex;

    fn identity_member(x: &SimplicialComplex, branch: SimplicialComplex) -> FamilyMember {
        FamilyMember {
            covering: BranchedCovering::identity(x, branch),
            phi: SimplicialMap::identity(x),
        }
    }

    #[test]
    fn identity_and_empty_families() {
        let x = corpus::boundary_simplex(3);
        let target = BranchedCovering::identity(&x, SimplicialComplex::empty());
        let r = is_etale_covering_family(&target, &[identity_member(&x, SimplicialComplex::empty())], MorphismCondition::AsPrinted)
            .unwrap();
        assert!(r.is_covering_family);
        let r = is_etale_covering_family(&target, &[], MorphismCondition::AsPrinted).unwrap();
        assert!(!r.is_covering_family);
        assert_eq!(r.uncovered.len(), x.num_simplices());
    }

    #[test]
    fn complementary_branch_loci_cover() {
        let x = corpus::boundary_simplex(3);
        let target = BranchedCovering::identity(&x, SimplicialComplex::empty());
        let a = identity_member(&x, corpus::vertex_set(&[0]));
        let b = identity_member(&x, corpus::vertex_set(&[1]));
        let c = identity_member(&x, corpus::vertex_set(&[0]));
        for cond in [MorphismCondition::AsPrinted, MorphismCondition::Pullback] {
            assert!(is_etale_covering_family(&target, &[a.clone(), b.clone()], cond).unwrap().is_covering_family);
            let r = is_etale_covering_family(&target, &[a.clone(), c.clone()], cond).unwrap();
            assert_eq!(r.uncovered, vec![Simplex::vertex(0)]);
        }
    }

    #[test]
    fn the_two_conditions_differ() {
        // hexagon double covering a triangle, branched at one of the two points over 0
        let x = corpus::circle(3);
        let y = corpus::circle(6);
        let f = SimplicialMap::new(y.clone(), x.clone(), (0..6).map(|v| (v, v % 3)).collect()).unwrap();
        let member = FamilyMember {
            covering: BranchedCovering {
                map: f.clone(),
                branch: corpus::vertex_set(&[0]),
                degree: 2,
            },
            phi: f,
        };
        let target = BranchedCovering::identity(&x, corpus::vertex_set(&[0]));
        let printed = is_etale_covering_family(&target, &[member.clone()], MorphismCondition::AsPrinted).unwrap();
        let pullback = is_etale_covering_family(&target, &[member], MorphismCondition::Pullback).unwrap();
        assert_eq!(printed.morphism_conditions, vec![true]);
        assert_eq!(pullback.morphism_conditions, vec![false]);
        assert!(printed.covers_unbranched_part);
    }

    #[test]
    fn non_commuting_triangle_names_vertex() {
        let x = corpus::boundary_simplex(3);
        let target = BranchedCovering::identity(&x, SimplicialComplex::empty());
        let mut m = identity_member(&x, SimplicialComplex::empty());
        // swap two vertices in phi only
        m.phi.vertex_map.insert(0, 1);
        m.phi.vertex_map.insert(1, 0);
        assert!(matches!(
            is_etale_covering_family(&target, &[m], MorphismCondition::AsPrinted),
            Err(Error::Composition(0))
        ));
    }
}
