use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::complex::{DerivedComplex, SimplicialComplex};
use crate::covering::SimplicialMap;
use crate::error::{Error, Result};
use crate::grouppi::{generator_of, smith_diagonal, EdgePathPresentation, FiniteGroup};

/// Largest stalk turned into an explicit group table.
pub const STALK_TABLE_LIMIT: u64 = 5040;

/// Finite abelian group `Z/d_1 + ... + Z/d_k`, each `d_i >= 2`. Elements are
/// coordinate vectors with `x_i` in `0..d_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stalk {
    orders: Vec<u64>,
}

/// Endomorphism of a stalk as an integer matrix acting on coordinates;
/// entry `(i, j)` is reduced mod `d_i`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StalkMap(pub Vec<Vec<u64>>);

impl Stalk {
    pub fn from_orders(orders: Vec<u64>) -> Result<Self> {
        if orders.iter().any(|d| *d == 0) {
            return Err(Error::Invalid("stalk must be finite".into()));
        }
        let orders: Vec<u64> = orders.into_iter().filter(|d| *d > 1).collect();
        let s = Stalk { orders };
        if s.exponent() >= 1 << 31 {
            return Err(Error::Range {
                what: "stalk exponent",
                value: s.exponent() as i64,
                min: 1,
                max: (1 << 31) - 1,
            });
        }
        Ok(s)
    }

    pub fn cyclic(m: u64) -> Result<Self> {
        Self::from_orders(vec![m])
    }

    /// The group `Z^g / <relations>`, rewritten in its invariant factors. The
    /// coordinates of the result refer to the cyclic decomposition, not to
    /// the original generators.
    pub fn from_relations(generators: usize, relations: &[Vec<i64>]) -> Result<Self> {
        if relations.iter().any(|r| r.len() != generators) {
            return Err(Error::Shape("relation length differs from the generator count".into()));
        }
        let mut m: Vec<Vec<BigInt>> = relations.iter().map(|r| r.iter().map(|x| BigInt::from(*x)).collect()).collect();
        let diag = smith_diagonal(&mut m, generators);
        let nonzero: Vec<&BigInt> = diag.iter().filter(|d| !d.is_zero()).collect();
        if nonzero.len() < generators {
            return Err(Error::Invalid("relations do not define a finite group".into()));
        }
        let orders = nonzero
            .into_iter()
            .map(|d| d.abs().to_u64().ok_or_else(|| Error::Invalid("stalk too large".into())))
            .collect::<Result<Vec<_>>>()?;
        Self::from_orders(orders)
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn exponent(&self) -> u64 {
        self.orders.iter().fold(1, |a, b| a.lcm(b))
    }

    pub fn order(&self) -> u64 {
        self.orders.iter().product()
    }

    pub fn zero(&self) -> Vec<u64> {
        vec![0; self.rank()]
    }

    pub fn reduce(&self, x: &[i64]) -> Vec<u64> {
        x.iter().zip(&self.orders).map(|(a, d)| a.rem_euclid(*d as i64) as u64).collect()
    }

    pub fn add(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        x.iter().zip(y).zip(&self.orders).map(|((a, b), d)| (a + b) % d).collect()
    }

    pub fn scale(&self, x: &[u64], c: i64) -> Vec<u64> {
        x.iter()
            .zip(&self.orders)
            .map(|(a, d)| ((*a as i128 * c as i128).rem_euclid(*d as i128)) as u64)
            .collect()
    }

    pub fn contains(&self, x: &[u64]) -> bool {
        x.len() == self.rank() && x.iter().zip(&self.orders).all(|(a, d)| a < d)
    }

    pub fn identity_map(&self) -> StalkMap {
        StalkMap((0..self.rank()).map(|i| (0..self.rank()).map(|j| u64::from(i == j)).collect()).collect())
    }

    pub fn apply(&self, m: &StalkMap, x: &[u64]) -> Vec<u64> {
        m.0.iter()
            .zip(&self.orders)
            .map(|(row, d)| row.iter().zip(x).fold(0u64, |acc, (a, b)| (acc + a * b) % d))
            .collect()
    }

    /// `a . b`: apply `b`, then `a`.
    pub fn compose(&self, a: &StalkMap, b: &StalkMap) -> StalkMap {
        let k = self.rank();
        StalkMap(
            (0..k)
                .map(|i| (0..k).map(|j| (0..k).fold(0u64, |acc, t| (acc + a.0[i][t] * b.0[t][j]) % self.orders[i])).collect())
                .collect(),
        )
    }

    fn normalize(&self, m: &StalkMap) -> StalkMap {
        StalkMap(m.0.iter().zip(&self.orders).map(|(r, d)| r.iter().map(|x| x % d).collect()).collect())
    }

    /// Checks that `m` is a well-defined bijective endomorphism.
    pub fn check_automorphism(&self, m: &StalkMap) -> Result<StalkMap> {
        let k = self.rank();
        if m.0.len() != k || m.0.iter().any(|r| r.len() != k) {
            return Err(Error::LocalSystem(format!("automorphism must be a {k}x{k} matrix")));
        }
        let m = self.normalize(m);
        for i in 0..k {
            for j in 0..k {
                if (self.orders[j] as u128 * m.0[i][j] as u128) % self.orders[i] as u128 != 0 {
                    return Err(Error::LocalSystem(format!("matrix entry ({i}, {j}) is not compatible with the orders")));
                }
            }
        }
        // bijective iff injective: no nonzero basis combination is killed
        let mut seen = std::collections::BTreeSet::new();
        if self.order() > 1 << 20 {
            return Err(Error::Budget {
                what: "stalk size for automorphism check",
                bound: 1 << 20,
            });
        }
        for x in self.elements() {
            if !seen.insert(self.apply(&m, &x)) {
                return Err(Error::LocalSystem("matrix is not invertible on the stalk".into()));
            }
        }
        Ok(m)
    }

    pub fn inverse(&self, m: &StalkMap) -> StalkMap {
        let id = self.identity_map();
        let mut prev = id.clone();
        let mut p = m.clone();
        while p != id {
            prev = p.clone();
            p = self.compose(&p, m);
        }
        prev
    }

    /// All elements in mixed-radix order, first coordinate slowest.
    pub fn elements(&self) -> Vec<Vec<u64>> {
        let mut out = vec![Vec::new()];
        for d in &self.orders {
            out = out.into_iter().flat_map(|p| (0..*d).map(move |a| [p.clone(), vec![a]].concat())).collect();
        }
        out
    }

    pub fn index_of(&self, x: &[u64]) -> usize {
        x.iter().zip(&self.orders).fold(0, |acc, (a, d)| acc * *d as usize + *a as usize)
    }

    /// The stalk as an abstract group, elements numbered as in `elements`.
    pub fn group(&self) -> Result<FiniteGroup> {
        if self.order() > STALK_TABLE_LIMIT {
            return Err(Error::Budget {
                what: "stalk order",
                bound: STALK_TABLE_LIMIT,
            });
        }
        let els = self.elements();
        let mul = els.iter().map(|x| els.iter().map(|y| self.index_of(&self.add(x, y))).collect()).collect();
        FiniteGroup::from_table(mul)
    }
}

/// Locally constant coefficients: a stalk over every vertex and a transport
/// `T(a, b)` from the stalk at `b` to the stalk at `a` along each edge.
/// Edges without an entry transport by the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalSystem {
    pub stalk: Stalk,
    transports: BTreeMap<(usize, usize), StalkMap>,
    identity: StalkMap,
}

impl LocalSystem {
    pub fn constant(stalk: Stalk) -> Self {
        LocalSystem {
            identity: stalk.identity_map(),
            stalk,
            transports: BTreeMap::new(),
        }
    }

    /// Monodromy `images[g]` on the generators of an edge-path presentation.
    pub fn from_monodromy(stalk: Stalk, pres: &EdgePathPresentation, images: &[StalkMap]) -> Result<Self> {
        let p = &pres.presentation;
        if images.len() != p.generator_count {
            return Err(Error::LocalSystem(format!(
                "{} monodromy matrices for {} generators",
                images.len(),
                p.generator_count
            )));
        }
        let images: Vec<StalkMap> = images.iter().map(|m| stalk.check_automorphism(m)).collect::<Result<_>>()?;
        let inverses: Vec<StalkMap> = images.iter().map(|m| stalk.inverse(m)).collect();
        let image_of = |l: i32| if l > 0 { &images[generator_of(l)] } else { &inverses[generator_of(l)] };
        let id = stalk.identity_map();
        for (r, word) in p.relators.iter().enumerate() {
            let value = word.iter().fold(id.clone(), |acc, l| stalk.compose(&acc, image_of(*l)));
            if value != id {
                return Err(Error::LocalSystem(format!("relator {r} acts nontrivially")));
            }
        }
        let mut transports = BTreeMap::new();
        for ((a, b), g) in &pres.edge_generator {
            if images[*g] != id {
                transports.insert((*a, *b), images[*g].clone());
                transports.insert((*b, *a), inverses[*g].clone());
            }
        }
        Ok(LocalSystem {
            stalk,
            transports,
            identity: id,
        })
    }

    pub fn is_constant(&self) -> bool {
        self.transports.is_empty()
    }

    pub fn transport(&self, a: usize, b: usize) -> &StalkMap {
        self.transports.get(&(a, b)).unwrap_or(&self.identity)
    }

    /// First triangle of `x` around which transport is not trivial.
    pub fn check_flat(&self, x: &SimplicialComplex) -> Result<()> {
        for t in x.faces(2) {
            let [a, b, c] = [t.vertices()[0], t.vertices()[1], t.vertices()[2]];
            let around = self.stalk.compose(self.transport(a, b), self.transport(b, c));
            if around != *self.transport(a, c) {
                return Err(Error::LocalSystem(format!("transport around {t} is not trivial")));
            }
        }
        Ok(())
    }

    /// Pulled back along a simplicial map.
    pub fn pullback(&self, f: &SimplicialMap) -> Self {
        let mut transports = BTreeMap::new();
        for e in f.source.faces(1) {
            let (a, b) = (e.vertices()[0], e.vertices()[1]);
            let (fa, fb) = (f.apply(a), f.apply(b));
            if let Some(m) = self.transports.get(&(fa, fb)) {
                transports.insert((a, b), m.clone());
                transports.insert((b, a), self.transport(fb, fa).clone());
            }
        }
        LocalSystem {
            stalk: self.stalk.clone(),
            transports,
            identity: self.identity.clone(),
        }
    }

    /// On the subdivision: the stalk at the barycenter of `s` is the stalk at
    /// the smallest vertex of `s`.
    pub fn subdivide(&self, d: &DerivedComplex) -> Self {
        let mut transports = BTreeMap::new();
        for e in d.complex().faces(1) {
            let (a, b) = (e.vertices()[0], e.vertices()[1]);
            let (ma, mb) = (d.simplex_of(a).vertices()[0], d.simplex_of(b).vertices()[0]);
            if let Some(m) = self.transports.get(&(ma, mb)) {
                transports.insert((a, b), m.clone());
                transports.insert((b, a), self.transport(mb, ma).clone());
            }
        }
        LocalSystem {
            stalk: self.stalk.clone(),
            transports,
            identity: self.identity.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::grouppi::{edge_path_presentation, enumerate_homs};

    #[test]
    fn stalks() {
        let s = Stalk::from_relations(2, &[vec![2, 0], vec![0, 3]]).unwrap();
        assert_eq!(s.orders(), &[6]);
        assert_eq!(s.order(), 6);
        assert!(Stalk::from_relations(2, &[vec![2, 0]]).is_err());
        let s = Stalk::from_orders(vec![2, 4]).unwrap();
        assert_eq!(s.exponent(), 4);
        assert_eq!(s.elements().len(), 8);
        assert_eq!(s.group().unwrap().order(), 8);
        // Z/2 -> Z/4 by 1 -> 2 is compatible; 1 -> 1 is not
        assert!(s.check_automorphism(&StalkMap(vec![vec![1, 0], vec![2, 1]])).is_ok());
        assert!(s.check_automorphism(&StalkMap(vec![vec![1, 0], vec![1, 1]])).is_err());
        let m = StalkMap(vec![vec![1, 1], vec![0, 3]]);
        let m = s.check_automorphism(&m).unwrap();
        assert_eq!(s.compose(&m, &s.inverse(&m)), s.identity_map());
    }

    #[test]
    fn sign_system_on_rp2() {
        let x = corpus::rp2_6();
        let pres = edge_path_presentation(&x, 0).unwrap();
        let stalk = Stalk::cyclic(3).unwrap();
        let homs = enumerate_homs(&pres.presentation, &FiniteGroup::cyclic(2).unwrap(), 1000).unwrap();
        let phi = homs.homs.iter().find(|h| !h.is_trivial()).unwrap();
        let images: Vec<StalkMap> = phi.images.iter().map(|a| StalkMap(vec![vec![if *a == 0 { 1 } else { 2 }]])).collect();
        let sys = LocalSystem::from_monodromy(stalk.clone(), &pres, &images).unwrap();
        assert!(!sys.is_constant());
        sys.check_flat(&x).unwrap();
        let ones = vec![StalkMap(vec![vec![1]]); pres.presentation.generator_count];
        assert!(LocalSystem::from_monodromy(stalk, &pres, &ones).unwrap().is_constant());
    }

    #[test]
    fn bad_monodromy() {
        let x = corpus::torus_7();
        let pres = edge_path_presentation(&x, 0).unwrap();
        let stalk = Stalk::cyclic(3).unwrap();
        let mut images = vec![StalkMap(vec![vec![1]]); pres.presentation.generator_count];
        images[0] = StalkMap(vec![vec![2]]);
        assert!(matches!(
            LocalSystem::from_monodromy(stalk, &pres, &images),
            Err(Error::LocalSystem(_))
        ));
    }
}
