//! Codimension-two cover families: skeleton/coskeleton pairs, their relative
//! version around a branch locus, perturbed coskeleta, and exact certificates
//! for the dimension of intersections of realized members.
//!
//! All members of a family are subcomplexes of one derived complex `K'`, each
//! with its own rational realization of `K'`. The realizations only differ in
//! where the barycenters of `K` sit, so every member is a subpolyhedron of the
//! same space `|K|`.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::complex::{DerivedComplex, RationalRealization, Simplex, SimplicialComplex, PERTURBATION_WEIGHT_BOUND};
use crate::covering::{BranchedCovering, FamilyMember, SimplicialMap};
use crate::error::{Error, Result};
use crate::io::FacetList;
use crate::lp::polyhedron_dimension;
use crate::plstructure::{complement_c, coskeleton, regular_neighborhood, verify_any};
use crate::util::derive_seed;

pub const DEFAULT_RETRIES: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Provenance {
    Skeleton,
    Coskeleton,
    Perturbed { seed: u64 },
}

#[derive(Clone, Debug)]
pub struct CoverMember {
    pub provenance: Provenance,
    /// Subcomplex of the family's derived complex.
    pub subcomplex: SimplicialComplex,
    pub realization: RationalRealization,
    /// Graph the complement of the member retracts to.
    pub model: SimplicialComplex,
}

impl CoverMember {
    /// `components - chi` of the graph model.
    pub fn model_free_rank(&self) -> i64 {
        graph_free_rank(&self.model)
    }
}

pub fn graph_free_rank(g: &SimplicialComplex) -> i64 {
    if g.is_empty() {
        return 0;
    }
    g.components().map_or(0, |c| c.len() as i64) - g.euler_characteristic()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntersectionCertificate {
    pub members: Vec<usize>,
    /// -1 for empty.
    pub dimension: i64,
    /// One cell per member attaining the dimension.
    pub witness_cells: Vec<Simplex>,
    pub tuples_tested: usize,
}

#[derive(Clone, Debug)]
pub struct CoverFamily {
    pub dimension: usize,
    /// `Y` itself, or `C(B, Y)` inside the subdivision of `Y` in the relative case.
    pub ambient: DerivedComplex,
    /// Subdivided `∂N(B, Y)`, ignored when measuring intersections.
    pub excluded: SimplicialComplex,
    base_realization: RationalRealization,
    pub members: Vec<CoverMember>,
}

/// Largest dimension a transverse intersection of `s` codimension-2 members may have.
pub fn transverse_bound(n: usize, s: usize) -> i64 {
    (n as i64 - 2 * s as i64).max(-1)
}

fn skeleton_member(fam: &CoverFamily, boundary: &SimplicialComplex) -> Result<CoverMember> {
    let k = fam.ambient.base();
    let skel = k.skeleton(fam.dimension - 2)?;
    let subcomplex = fam.ambient.subdivide(&skel)?.union(&fam.excluded);
    let model = complement_c(&fam.ambient, &skel.union(boundary))?;
    Ok(CoverMember {
        provenance: Provenance::Skeleton,
        subcomplex,
        realization: fam.ambient.realize(&fam.base_realization, None)?,
        model,
    })
}

fn coskeleton_member(fam: &CoverFamily, seed: Option<u64>) -> Result<CoverMember> {
    let subcomplex = coskeleton(&fam.ambient, fam.dimension - 2)?.union(&fam.excluded);
    Ok(CoverMember {
        provenance: seed.map_or(Provenance::Coskeleton, |seed| Provenance::Perturbed { seed }),
        subcomplex,
        realization: fam.ambient.realize(&fam.base_realization, seed)?,
        model: fam.ambient.base().skeleton(1)?,
    })
}

fn new_family(k: SimplicialComplex, base_realization: RationalRealization, boundary: &SimplicialComplex) -> Result<CoverFamily> {
    let n = k.dim().ok_or(Error::Empty("complex"))?;
    if n < 2 {
        return Err(Error::Scope("complexes of dimension at least 2"));
    }
    let ambient = k.barycentric_subdivision();
    let excluded = ambient.subdivide(boundary)?;
    let mut fam = CoverFamily {
        dimension: n,
        ambient,
        excluded,
        base_realization,
        members: Vec::new(),
    };
    let m0 = skeleton_member(&fam, boundary)?;
    let m1 = coskeleton_member(&fam, None)?;
    fam.members = vec![m0, m1];
    Ok(fam)
}

/// `B0` = subdivided `(n-2)`-skeleton, `B1` = `(n-2)`-coskeleton.
pub fn skeleton_coskeleton_pair(y: &SimplicialComplex) -> Result<CoverFamily> {
    if !verify_any(y).is_valid() {
        return Err(Error::Invalid("not a pseudomanifold".into()));
    }
    new_family(y.clone(), RationalRealization::standard(y), &SimplicialComplex::empty())
}

/// Family over `C(B, Y)` with `∂N(B, Y)` added to every member, extended with
/// perturbed coskeleta until it has `members` members.
pub fn relative_cover_family(y: &SimplicialComplex, b: &SimplicialComplex, members: usize, seed: u64) -> Result<CoverFamily> {
    let mut fam = if b.is_empty() {
        skeleton_coskeleton_pair(y)?
    } else {
        if !verify_any(y).is_valid() {
            return Err(Error::Invalid("not a pseudomanifold".into()));
        }
        let codim = y.dimension() - b.dimension();
        if codim < 2 {
            return Err(Error::Codimension { codim });
        }
        let d = y.barycentric_subdivision();
        let rn = regular_neighborhood(&d, b)?;
        let realization = d.realize(&RationalRealization::standard(y), None)?;
        new_family(rn.complement, realization, &rn.boundary)?
    };
    for i in fam.members.len()..members {
        perturbed_coskeleton(&mut fam, derive_seed(seed, i as u64), DEFAULT_RETRIES)?;
    }
    Ok(fam)
}

/// Adds a coskeleton with perturbed barycenters, resampling the seed until all
/// intersections involving it are transverse.
pub fn perturbed_coskeleton(fam: &mut CoverFamily, seed: u64, retries: usize) -> Result<usize> {
    let mut last = None;
    for attempt in 0..retries.max(1) {
        let s = if attempt == 0 { seed } else { derive_seed(seed, attempt as u64) };
        let member = coskeleton_member(fam, Some(s))?;
        fam.members.push(member);
        let new = fam.members.len() - 1;
        let mut bad = None;
        for mask in 0u64..(1 << new) {
            let mut subset: Vec<usize> = (0..new).filter(|i| mask & (1 << i) != 0).collect();
            subset.push(new);
            let cert = intersection_dimension(fam, &subset)?;
            if cert.dimension > transverse_bound(fam.dimension, subset.len()) {
                bad = Some(cert);
                break;
            }
        }
        match bad {
            None => return Ok(new),
            Some(cert) => {
                fam.members.pop();
                last = Some(cert);
            }
        }
    }
    let cert = last.expect("at least one attempt");
    Err(Error::Degeneracy {
        attempts: retries.max(1),
        cells: cert.witness_cells,
        dimension: cert.dimension,
    })
}

struct Supports {
    /// Per member, per derived vertex: bitmask of nonzero coordinates.
    masks: Vec<BTreeMap<usize, u128>>,
}

impl Supports {
    fn new(fam: &CoverFamily, subset: &[usize]) -> Result<Self> {
        let masks = subset
            .iter()
            .map(|i| {
                let r = &fam.members[*i].realization;
                if r.ambient_dim() > 128 {
                    return Err(Error::Realization("support masks need ambient dimension <= 128".into()));
                }
                Ok(r.points()
                    .map(|(v, p)| {
                        let m = p.iter().enumerate().filter(|(_, c)| !c.is_zero()).fold(0u128, |m, (t, _)| m | 1 << t);
                        (v, m)
                    })
                    .collect())
            })
            .collect::<Result<_>>()?;
        Ok(Supports { masks })
    }

    /// Restricts every cell to the face whose points lie in the common support,
    /// repeating until stable. `None` if some cell becomes empty.
    fn reduce(&self, cells: &[Vec<usize>]) -> Option<(Vec<Vec<usize>>, u128)> {
        let mut cells = cells.to_vec();
        let mut rho = u128::MAX;
        loop {
            let next = cells
                .iter()
                .enumerate()
                .map(|(i, c)| c.iter().fold(0u128, |m, v| m | self.masks[i][v]))
                .fold(u128::MAX, |a, b| a & b);
            if next == rho {
                return Some((cells, rho));
            }
            rho = next;
            for (i, c) in cells.iter_mut().enumerate() {
                c.retain(|v| self.masks[i][v] & !rho == 0);
                if c.is_empty() {
                    return None;
                }
            }
        }
    }
}

/// Exact dimension of the intersection of the given cells (one per member) and
/// the carrier face in the first cell, or `None` if they do not meet.
fn cell_intersection(fam: &CoverFamily, subset: &[usize], cells: &[Vec<usize>], rho: u128) -> Option<(usize, Simplex)> {
    let coords: Vec<usize> = (0..128).filter(|t| rho & (1 << t) != 0).collect();
    let offsets: Vec<usize> = cells
        .iter()
        .scan(0, |acc, c| {
            let o = *acc;
            *acc += c.len();
            Some(o)
        })
        .collect();
    let nvars: usize = cells.iter().map(Vec::len).sum();
    let mut a: Vec<Vec<BigRational>> = Vec::new();
    let mut b: Vec<BigRational> = Vec::new();
    for (i, c) in cells.iter().enumerate() {
        let mut row = vec![BigRational::zero(); nvars];
        for j in 0..c.len() {
            row[offsets[i] + j] = BigRational::one();
        }
        a.push(row);
        b.push(BigRational::one());
    }
    for i in 1..cells.len() {
        for t in &coords {
            let mut row = vec![BigRational::zero(); nvars];
            for (j, v) in cells[0].iter().enumerate() {
                row[j] = fam.members[subset[0]].realization.point(*v).expect("realized")[*t].clone();
            }
            for (j, v) in cells[i].iter().enumerate() {
                row[offsets[i] + j] = -fam.members[subset[i]].realization.point(*v).expect("realized")[*t].clone();
            }
            a.push(row);
            b.push(BigRational::zero());
        }
    }
    let (dim, free) = polyhedron_dimension(&a, &b)?;
    let carrier: Vec<usize> = free.iter().filter(|j| **j < cells[0].len()).map(|j| cells[0][*j]).collect();
    Some((dim, Simplex::new(carrier).expect("a point of the intersection has support in the first cell")))
}

/// Dimension of the intersection of the given members, away from the excluded
/// boundary; -1 when empty.
pub fn intersection_dimension(fam: &CoverFamily, subset: &[usize]) -> Result<IntersectionCertificate> {
    if subset.is_empty() || subset.iter().any(|i| *i >= fam.members.len()) {
        return Err(Error::Invalid("member subset must be nonempty and in range".into()));
    }
    let ambient = fam.members[subset[0]].realization.ambient_dim();
    if subset.iter().any(|i| fam.members[*i].realization.ambient_dim() != ambient) {
        return Err(Error::Realization("members live in different ambient spaces".into()));
    }
    let supports = Supports::new(fam, subset)?;
    let facets: Vec<Vec<Vec<usize>>> = subset
        .iter()
        .map(|i| fam.members[*i].subcomplex.facets().iter().map(|s| s.vertices().to_vec()).collect())
        .collect();
    let mut best = IntersectionCertificate {
        members: subset.to_vec(),
        dimension: -1,
        witness_cells: Vec::new(),
        tuples_tested: 0,
    };
    let mut memo: BTreeMap<Vec<Vec<usize>>, Option<(usize, Simplex)>> = BTreeMap::new();
    let mut chosen: Vec<usize> = Vec::with_capacity(subset.len());
    fn walk(
        level: usize,
        chosen: &mut Vec<usize>,
        facets: &[Vec<Vec<usize>>],
        supports: &Supports,
        fam: &CoverFamily,
        subset: &[usize],
        memo: &mut BTreeMap<Vec<Vec<usize>>, Option<(usize, Simplex)>>,
        best: &mut IntersectionCertificate,
    ) {
        let cells: Vec<Vec<usize>> = chosen.iter().enumerate().map(|(i, c)| facets[i][*c].clone()).collect();
        if supports.reduce(&cells).is_none() && !cells.is_empty() {
            return;
        }
        if level == facets.len() {
            best.tuples_tested += 1;
            let (reduced, rho) = supports.reduce(&cells).expect("checked above");
            let result = memo
                .entry(reduced.clone())
                .or_insert_with(|| cell_intersection(fam, subset, &reduced, rho))
                .clone();
            if let Some((dim, carrier)) = result {
                if !fam.excluded.contains(&carrier) && dim as i64 > best.dimension {
                    best.dimension = dim as i64;
                    best.witness_cells = cells.iter().map(|c| Simplex::new(c.clone()).expect("cell")).collect();
                }
            }
            return;
        }
        for c in 0..facets[level].len() {
            chosen.push(c);
            walk(level + 1, chosen, facets, supports, fam, subset, memo, best);
            chosen.pop();
        }
    }
    walk(0, &mut chosen, &facets, &supports, fam, subset, &mut memo, &mut best);
    Ok(best)
}

/// Certificates for every nonempty subset of members, by subset bitmask order.
pub fn certificate_table(fam: &CoverFamily) -> Result<Vec<IntersectionCertificate>> {
    let m = fam.members.len();
    (1u64..(1 << m))
        .map(|mask| {
            let subset: Vec<usize> = (0..m).filter(|i| mask & (1 << i) != 0).collect();
            intersection_dimension(fam, &subset)
        })
        .collect()
}

/// Members as identity branched coverings of `K'` with branch loci `B_i`, over
/// the unbranched target.
pub fn as_etale_family(fam: &CoverFamily) -> (BranchedCovering, Vec<FamilyMember>) {
    let k = fam.ambient.complex();
    let target = BranchedCovering::identity(k, fam.excluded.clone());
    let members = fam
        .members
        .iter()
        .map(|m| FamilyMember {
            covering: BranchedCovering::identity(k, m.subcomplex.clone()),
            phi: SimplicialMap::identity(k),
        })
        .collect();
    (target, members)
}

#[derive(Clone, Debug, Serialize)]
pub struct MemberDump {
    pub provenance: Provenance,
    /// Cells as chains of simplices of the ambient complex, largest first.
    pub cells: Vec<Vec<Vec<usize>>>,
    /// Largest denominator of a barycentric weight in the realization.
    pub denominator_bound: u64,
    pub model: FacetList,
    pub model_free_rank: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyDump {
    pub dimension: usize,
    pub ambient: FacetList,
    pub excluded: FacetList,
    pub members: Vec<MemberDump>,
    pub certificates: Vec<IntersectionCertificate>,
}

impl FamilyDump {
    pub fn new(fam: &CoverFamily, certificates: Vec<IntersectionCertificate>) -> Self {
        let n = fam.dimension as u64;
        let members = fam
            .members
            .iter()
            .map(|m| MemberDump {
                provenance: m.provenance,
                cells: m
                    .subcomplex
                    .facets()
                    .iter()
                    .map(|s| fam.ambient.chain(s).entries().iter().map(|e| e.vertices().to_vec()).collect())
                    .collect(),
                denominator_bound: match m.provenance {
                    Provenance::Perturbed { .. } => (n + 1) * PERTURBATION_WEIGHT_BOUND,
                    _ => n + 1,
                },
                model: FacetList::from_complex(&m.model),
                model_free_rank: m.model_free_rank(),
            })
            .collect();
        FamilyDump {
            dimension: fam.dimension,
            ambient: FacetList::from_complex(fam.ambient.base()),
            excluded: FacetList::from_complex(&fam.excluded),
            members,
            certificates,
        }
    }
}
