use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A nonempty set of vertex ids, stored strictly increasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Simplex(Vec<usize>);

impl Simplex {
    /// Builds a simplex from vertices in any order. Repeated vertices are rejected.
    pub fn new(mut vertices: Vec<usize>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::Malformed("simplex with no vertices".into()));
        }
        vertices.sort_unstable();
        if let Some(w) = vertices.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Malformed(format!("vertex {} repeated inside a simplex", w[0])));
        }
        Ok(Simplex(vertices))
    }

    /// Caller guarantees `vertices` is nonempty and strictly increasing.
    pub(crate) fn from_sorted(vertices: Vec<usize>) -> Self {
        debug_assert!(!vertices.is_empty());
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        Simplex(vertices)
    }

    pub fn vertex(v: usize) -> Self {
        Simplex(vec![v])
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        self.0.len() <= other.0.len() && self.0.iter().all(|v| other.contains(*v))
    }

    pub fn is_proper_face_of(&self, other: &Simplex) -> bool {
        self.0.len() < other.0.len() && self.is_face_of(other)
    }

    /// The codimension-one face that omits the `i`-th vertex; `None` for a vertex.
    pub fn facet(&self, i: usize) -> Option<Simplex> {
        if self.0.len() < 2 {
            return None;
        }
        let mut v = self.0.clone();
        v.remove(i);
        Some(Simplex(v))
    }

    /// Codimension-one faces in the order d_0, d_1, ... (d_i drops vertex i).
    pub fn boundary(&self) -> Vec<Simplex> {
        (0..self.0.len()).filter_map(|i| self.facet(i)).collect()
    }

    /// Every nonempty face, including the simplex itself.
    pub fn faces(&self) -> Vec<Simplex> {
        let n = self.0.len();
        assert!(n < 31, "simplex too large to enumerate faces");
        (1u32..(1 << n))
            .map(|mask| {
                Simplex(
                    (0..n)
                        .filter(|i| mask & (1 << i) != 0)
                        .map(|i| self.0[i])
                        .collect(),
                )
            })
            .collect()
    }

    pub fn intersection(&self, other: &Simplex) -> Option<Simplex> {
        let v: Vec<usize> = self.0.iter().copied().filter(|v| other.contains(*v)).collect();
        (!v.is_empty()).then(|| Simplex(v))
    }

    /// Vertex-set union; the caller decides whether the result is a simplex of anything.
    pub fn union(&self, other: &Simplex) -> Simplex {
        let mut v: Vec<usize> = self.0.iter().chain(other.0.iter()).copied().collect();
        v.sort_unstable();
        v.dedup();
        Simplex(v)
    }

    /// Vertices of `self` not in `other`.
    pub fn difference(&self, other: &Simplex) -> Option<Simplex> {
        let v: Vec<usize> = self.0.iter().copied().filter(|v| !other.contains(*v)).collect();
        (!v.is_empty()).then(|| Simplex(v))
    }

    pub fn map(&self, f: impl Fn(usize) -> usize) -> Result<Simplex> {
        Simplex::new(self.0.iter().map(|v| f(*v)).collect())
    }
}

// Order by dimension first, then lexicographically. Barycenter ids rely on this.
impl Ord for Simplex {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Simplex {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl TryFrom<Vec<usize>> for Simplex {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        if v.is_empty() || v.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Malformed(format!("simplex {v:?} is not strictly increasing")));
        }
        Ok(Simplex(v))
    }
}

impl From<Simplex> for Vec<usize> {
    fn from(s: Simplex) -> Self {
        s.0
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

#[macro_export]
macro_rules! simplex {
    ($($v:expr),+ $(,)?) => {
        $crate::complex::Simplex::new(vec![$($v),+]).expect("valid simplex literal")
    };
}
