use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{DerivedComplex, Simplex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::util::derive_seed;

/// Upper bound for the integer weights of a perturbed barycenter. A perturbed
/// barycenter of a d-simplex therefore has coordinates with denominator at most
/// `(d + 1) * PERTURBATION_WEIGHT_BOUND` relative to its vertices.
pub const PERTURBATION_WEIGHT_BOUND: u64 = 1024;

/// Exact rational coordinates for the vertices of a complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalRealization {
    ambient: usize,
    coords: BTreeMap<usize, Vec<BigRational>>,
}

impl RationalRealization {
    /// Vertex `v` goes to the `v`-th unit vector of `R^(max id + 1)`.
    pub fn standard(x: &SimplicialComplex) -> Self {
        let ambient = x.vertices().last().map_or(0, |v| v + 1);
        let coords = x
            .vertices()
            .into_iter()
            .map(|v| {
                let mut p = vec![BigRational::zero(); ambient];
                p[v] = BigRational::one();
                (v, p)
            })
            .collect();
        RationalRealization { ambient, coords }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn point(&self, v: usize) -> Option<&[BigRational]> {
        self.coords.get(&v).map(Vec::as_slice)
    }

    pub fn points(&self) -> impl Iterator<Item = (usize, &[BigRational])> + '_ {
        self.coords.iter().map(|(v, p)| (*v, p.as_slice()))
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Coordinates that are nonzero at vertex `v`.
    pub fn support(&self, v: usize) -> Vec<usize> {
        self.coords[&v]
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| i)
            .collect()
    }

    /// Vertices of `s` realize to affinely independent points.
    pub fn affinely_independent(&self, s: &Simplex) -> Result<bool> {
        let pts = s
            .vertices()
            .iter()
            .map(|v| self.point(*v).ok_or_else(|| Error::Realization(format!("vertex {v} has no coordinates"))))
            .collect::<Result<Vec<_>>>()?;
        let rows: Vec<Vec<BigRational>> = pts[1..]
            .iter()
            .map(|p| p.iter().zip(pts[0]).map(|(a, b)| a - b).collect())
            .collect();
        Ok(rational_rank(rows) == s.dim())
    }
}

impl DerivedComplex {
    /// Places each derived vertex at a point of its base simplex given the base
    /// realization. Without a seed the points are the true barycenters. With a
    /// seed, barycenters of positive-dimensional simplices use integer weights in
    /// `1..=PERTURBATION_WEIGHT_BOUND` drawn from a stream keyed by the seed and
    /// the vertex id, so they are interior but (almost surely) off-center.
    pub fn realize(&self, base: &RationalRealization, seed: Option<u64>) -> Result<RationalRealization> {
        let mut coords = BTreeMap::new();
        for (id, s) in self.barycenters().iter().enumerate() {
            let pts = s
                .vertices()
                .iter()
                .map(|v| base.point(*v).ok_or_else(|| Error::Realization(format!("base vertex {v} has no coordinates"))))
                .collect::<Result<Vec<_>>>()?;
            let weights = match seed {
                Some(seed) if s.dim() > 0 => perturbed_weights(derive_seed(seed, id as u64), s.len()),
                _ => vec![1u64; s.len()],
            };
            let total: u64 = weights.iter().sum();
            let total = BigRational::from_integer(BigInt::from(total));
            let mut p = vec![BigRational::zero(); base.ambient];
            for (w, q) in weights.iter().zip(&pts) {
                let w = BigRational::from_integer(BigInt::from(*w));
                for (c, x) in p.iter_mut().zip(q.iter()) {
                    *c += &w * x;
                }
            }
            for c in &mut p {
                *c /= &total;
            }
            coords.insert(id, p);
        }
        Ok(RationalRealization {
            ambient: base.ambient,
            coords,
        })
    }
}

fn perturbed_weights(seed: u64, n: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let w: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=PERTURBATION_WEIGHT_BOUND)).collect();
        if w.iter().any(|x| *x != w[0]) {
            return w;
        }
    }
}

/// Rank of a rational matrix given by rows.
pub(crate) fn rational_rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|r| !rows[*r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank][col].clone();
        for r in rank + 1..rows.len() {
            if rows[r][col].is_zero() {
                continue;
            }
            let f = &rows[r][col] / &pivot;
            for c in col..ncols {
                let delta = &f * &rows[rank][c];
                rows[r][c] -= delta;
            }
        }
        rank += 1;
    }
    rank
}
