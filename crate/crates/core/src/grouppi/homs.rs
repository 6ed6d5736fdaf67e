use std::collections::BTreeMap;

use serde::Serialize;

use super::group::FiniteGroup;
use super::presentation::{generator_of, simplify, GroupPresentation};
use super::subgroups::CosetTable;
use crate::error::{Error, Result};

/// Images of the generators; the target group is carried alongside.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct FiniteHom {
    pub images: Vec<usize>,
}

pub fn evaluate(g: &FiniteGroup, images: &[usize], word: &[i32]) -> usize {
    word.iter().fold(g.identity(), |acc, l| {
        let x = images[generator_of(*l)];
        g.mul(acc, if *l > 0 { x } else { g.inv(x) })
    })
}

impl FiniteHom {
    pub fn violated_relator(&self, p: &GroupPresentation, g: &FiniteGroup) -> Option<usize> {
        p.relators.iter().position(|r| evaluate(g, &self.images, r) != g.identity())
    }

    pub fn is_trivial(&self) -> bool {
        self.images.iter().all(|x| *x == 0)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HomEnumeration {
    pub group: String,
    pub group_order: usize,
    pub count: usize,
    pub nodes: u64,
    pub homs: Vec<FiniteHom>,
}

/// All homomorphisms `P -> G`, by depth-first assignment of generator images on a
/// Tietze-simplified presentation. A relator is tested as soon as its last
/// generator is assigned. `budget` bounds the number of assignments tried.
pub fn enumerate_homs(p: &GroupPresentation, g: &FiniteGroup, budget: u64) -> Result<HomEnumeration> {
    let s = simplify(p);
    let q = &s.presentation;
    let mut closing: Vec<Vec<usize>> = vec![Vec::new(); q.generator_count];
    for (i, r) in q.relators.iter().enumerate() {
        if let Some(last) = r.iter().map(|l| generator_of(*l)).max() {
            closing[last].push(i);
        }
    }
    let mut images = vec![0usize; q.generator_count];
    let mut found = Vec::new();
    let mut nodes = 0u64;
    fn dfs(
        depth: usize,
        images: &mut Vec<usize>,
        q: &GroupPresentation,
        g: &FiniteGroup,
        closing: &[Vec<usize>],
        nodes: &mut u64,
        budget: u64,
        found: &mut Vec<Vec<usize>>,
    ) -> Result<()> {
        if depth == images.len() {
            found.push(images.clone());
            return Ok(());
        }
        for x in 0..g.order() {
            *nodes += 1;
            if *nodes > budget {
                return Err(Error::Budget {
                    what: "homomorphism search nodes",
                    bound: budget,
                });
            }
            images[depth] = x;
            if closing[depth]
                .iter()
                .all(|r| evaluate(g, images, &q.relators[*r]) == g.identity())
            {
                dfs(depth + 1, images, q, g, closing, nodes, budget, found)?;
            }
        }
        Ok(())
    }
    dfs(0, &mut images, q, g, &closing, &mut nodes, budget, &mut found)?;
    let mut homs: Vec<FiniteHom> = found
        .iter()
        .map(|im| FiniteHom {
            images: s.expansion.iter().map(|w| evaluate(g, im, w)).collect(),
        })
        .collect();
    homs.sort();
    debug_assert!(homs.iter().all(|h| h.violated_relator(p, g).is_none()));
    Ok(HomEnumeration {
        group: g.name().to_string(),
        group_order: g.order(),
        count: homs.len(),
        nodes,
        homs,
    })
}

/// Coset table of `ker(phi)`: cosets are the elements of the image, listed in
/// breadth-first order from the identity, acted on by right multiplication.
pub fn kernel_coset_table(p: &GroupPresentation, g: &FiniteGroup, phi: &FiniteHom) -> Result<CosetTable> {
    if phi.images.len() != p.generator_count || phi.images.iter().any(|x| *x >= g.order()) {
        return Err(Error::Shape(format!(
            "homomorphism has {} images for {} generators",
            phi.images.len(),
            p.generator_count
        )));
    }
    if let Some(relator) = phi.violated_relator(p, g) {
        return Err(Error::RelatorViolation { relator });
    }
    let mut index = BTreeMap::from([(g.identity(), 0usize)]);
    let mut elements = vec![g.identity()];
    let mut i = 0;
    while i < elements.len() {
        for x in &phi.images {
            for y in [*x, g.inv(*x)] {
                let h = g.mul(elements[i], y);
                if !index.contains_key(&h) {
                    index.insert(h, elements.len());
                    elements.push(h);
                }
            }
        }
        i += 1;
    }
    let action = phi
        .images
        .iter()
        .map(|x| elements.iter().map(|h| index[&g.mul(*h, *x)]).collect())
        .collect();
    CosetTable::new(elements.len(), action)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::grouppi::presentation::edge_path_presentation;
    use crate::grouppi::subgroups::DEFAULT_NODE_BUDGET;
    use crate::SimplicialComplex;

    fn count(x: &SimplicialComplex, g: &FiniteGroup, base: usize) -> usize {
        let p = edge_path_presentation(x, base).unwrap().presentation;
        enumerate_homs(&p, g, DEFAULT_NODE_BUDGET).unwrap().count
    }

    #[test]
    fn hom_counts() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let z3 = FiniteGroup::cyclic(3).unwrap();
        let s3 = FiniteGroup::symmetric(3).unwrap();
        assert_eq!(count(&corpus::circle(3), &z2, 0), 2);
        assert_eq!(count(&corpus::rp2_6(), &z3, 0), 1);
        assert_eq!(count(&corpus::rp2_6(), &z2, 0), 2);
        assert_eq!(count(&corpus::torus_7(), &s3, 0), 18);
        assert_eq!(count(&corpus::boundary_simplex(3), &s3, 0), 1);
    }

    #[test]
    fn count_does_not_depend_on_the_spanning_tree() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        for base in 0..7 {
            assert_eq!(count(&corpus::torus_7(), &s3, base), 18);
        }
    }

    #[test]
    fn budget_error() {
        let p = GroupPresentation::new(3, vec![]).unwrap();
        let s3 = FiniteGroup::symmetric(3).unwrap();
        assert!(matches!(enumerate_homs(&p, &s3, 100), Err(Error::Budget { bound: 100, .. })));
    }

    #[test]
    fn kernel_tables() {
        let z3 = FiniteGroup::cyclic(3).unwrap();
        let circle = edge_path_presentation(&corpus::circle(3), 0).unwrap().presentation;
        let t = kernel_coset_table(&circle, &z3, &FiniteHom { images: vec![1] }).unwrap();
        assert_eq!(t.degree, 3);
        assert_eq!(t.action[0], vec![1, 2, 0]);
        let trivial = kernel_coset_table(&circle, &z3, &FiniteHom { images: vec![0] }).unwrap();
        assert_eq!(trivial, CosetTable::trivial(1));

        let torus = GroupPresentation::new(2, vec![vec![1, 2, -1, -2]]).unwrap();
        let t = kernel_coset_table(&torus, &z3, &FiniteHom { images: vec![1, 0] }).unwrap();
        assert_eq!(t.degree, 3);
        assert_eq!(t.action[1], vec![0, 1, 2]);
    }

    #[test]
    fn kernel_degree_is_image_order() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let p = edge_path_presentation(&corpus::torus_7(), 0).unwrap().presentation;
        for h in enumerate_homs(&p, &s3, DEFAULT_NODE_BUDGET).unwrap().homs {
            let t = kernel_coset_table(&p, &s3, &h).unwrap();
            assert_eq!(t.violated_relator(&p), None);
            let mut image = std::collections::BTreeSet::from([0]);
            let g = &s3;
            loop {
                let next: std::collections::BTreeSet<usize> = image
                    .iter()
                    .flat_map(|a| h.images.iter().map(move |x| g.mul(*a, *x)))
                    .chain(image.iter().copied())
                    .collect();
                if next == image {
                    break;
                }
                image = next;
            }
            assert_eq!(t.degree, image.len());
        }
    }

    #[test]
    fn violated_hom_is_rejected() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let p = GroupPresentation::new(1, vec![vec![1]]).unwrap();
        assert!(matches!(
            kernel_coset_table(&p, &z2, &FiniteHom { images: vec![1] }),
            Err(Error::RelatorViolation { relator: 0 })
        ));
    }
}
