use serde::Serialize;

use super::{Simplex, SimplicialComplex};
use crate::error::{Error, Result};

/// A simplex of the barycentric subdivision written as a strictly decreasing
/// chain of base simplices, largest first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FlagSimplex {
    chain: Vec<Simplex>,
}

impl FlagSimplex {
    pub fn new(chain: Vec<Simplex>) -> Result<Self> {
        if chain.is_empty() {
            return Err(Error::Malformed("empty chain".into()));
        }
        for w in chain.windows(2) {
            if !w[1].is_proper_face_of(&w[0]) {
                return Err(Error::Malformed(format!("{} is not a proper face of {}", w[1], w[0])));
            }
        }
        Ok(FlagSimplex { chain })
    }

    pub fn entries(&self) -> &[Simplex] {
        &self.chain
    }

    /// Largest entry; the derived simplex lies inside it.
    pub fn top(&self) -> &Simplex {
        &self.chain[0]
    }

    /// Smallest entry; the derived simplex lies in the dual cone of it.
    pub fn bottom(&self) -> &Simplex {
        self.chain.last().expect("nonempty chain")
    }

    pub fn dim(&self) -> usize {
        self.chain.len() - 1
    }
}

/// The barycentric subdivision T' of a complex T.
///
/// Vertex `i` of T' is the barycenter of the `i`-th simplex of T in
/// (dimension, lexicographic) order, so the vertices of any derived simplex,
/// read in increasing id, list its chain from smallest to largest entry.
#[derive(Clone, Debug)]
pub struct DerivedComplex {
    base: SimplicialComplex,
    barycenters: Vec<Simplex>,
    complex: SimplicialComplex,
}

impl DerivedComplex {
    pub(super) fn new(base: SimplicialComplex) -> Self {
        let barycenters: Vec<Simplex> = base.simplices().cloned().collect();
        debug_assert!(barycenters.windows(2).all(|w| w[0] < w[1]));
        let id = |s: &Simplex| barycenters.binary_search(s).expect("face of base");
        let mut facets = Vec::new();
        for f in base.facets() {
            let mut perm: Vec<usize> = f.vertices().to_vec();
            for_each_permutation(&mut perm, &mut |order| {
                // Remove vertices in `order` to walk down from f to a vertex.
                let mut cur: Vec<usize> = f.vertices().to_vec();
                let mut ids = Vec::with_capacity(order.len());
                ids.push(id(f));
                for v in &order[..order.len() - 1] {
                    cur.retain(|x| x != v);
                    ids.push(id(&Simplex::from_sorted(cur.clone())));
                }
                ids.sort_unstable();
                facets.push(Simplex::from_sorted(ids));
            });
        }
        let complex = if facets.is_empty() {
            SimplicialComplex::empty()
        } else {
            SimplicialComplex::closure(facets)
        };
        DerivedComplex {
            base,
            barycenters,
            complex,
        }
    }

    pub fn base(&self) -> &SimplicialComplex {
        &self.base
    }

    /// T' as a complex on dense ids.
    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    /// Base simplex whose barycenter is vertex `v` of T'.
    pub fn simplex_of(&self, v: usize) -> &Simplex {
        &self.barycenters[v]
    }

    pub fn barycenter_of(&self, s: &Simplex) -> Option<usize> {
        self.barycenters.binary_search(s).ok()
    }

    pub fn barycenters(&self) -> &[Simplex] {
        &self.barycenters
    }

    /// Chain encoding of a simplex of T'.
    pub fn chain(&self, s: &Simplex) -> FlagSimplex {
        let chain = s.vertices().iter().rev().map(|v| self.barycenters[*v].clone()).collect();
        FlagSimplex { chain }
    }

    pub fn simplex_of_chain(&self, f: &FlagSimplex) -> Result<Simplex> {
        let ids = f
            .entries()
            .iter()
            .map(|s| self.barycenter_of(s).ok_or_else(|| Error::MissingSimplex(s.clone())))
            .collect::<Result<Vec<_>>>()?;
        Simplex::new(ids)
    }

    /// Entries of the chain of `s`, smallest first.
    pub fn entries<'a>(&'a self, s: &'a Simplex) -> impl Iterator<Item = &'a Simplex> + 'a {
        s.vertices().iter().map(|v| &self.barycenters[*v])
    }

    /// Smallest entry of the chain of `s`.
    pub fn bottom(&self, s: &Simplex) -> &Simplex {
        &self.barycenters[s.vertices()[0]]
    }

    /// Largest entry of the chain of `s`.
    pub fn top(&self, s: &Simplex) -> &Simplex {
        &self.barycenters[*s.vertices().last().expect("nonempty")]
    }

    /// Full subcomplex of T' on the barycenters of base simplices satisfying `keep`.
    pub fn full_subcomplex(&self, keep: impl Fn(&Simplex) -> bool) -> SimplicialComplex {
        let mask: Vec<bool> = self.barycenters.iter().map(&keep).collect();
        self.complex.filter(|s| s.vertices().iter().all(|v| mask[*v]))
    }

    /// Subdivision of a subcomplex of the base, as a subcomplex of T'.
    pub fn subdivide(&self, sub: &SimplicialComplex) -> Result<SimplicialComplex> {
        if let Some(f) = sub.facets().iter().find(|f| !self.base.contains(f)) {
            return Err(Error::MissingSimplex(f.clone()));
        }
        Ok(self.full_subcomplex(|s| sub.contains(s)))
    }
}

/// Heap's algorithm; `f` sees every ordering of `items` exactly once.
fn for_each_permutation(items: &mut [usize], f: &mut impl FnMut(&[usize])) {
    let n = items.len();
    let mut c = vec![0usize; n];
    f(items);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                items.swap(0, i);
            } else {
                items.swap(c[i], i);
            }
            f(items);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}
