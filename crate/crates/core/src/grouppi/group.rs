use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Composition convention shared with coset tables: `(p * q)[x] = q[p[x]]`,
/// i.e. apply `p` first. Points are acted on from the right.
pub fn compose(p: &[usize], q: &[usize]) -> Vec<usize> {
    p.iter().map(|x| q[*x]).collect()
}

pub fn invert(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, x) in p.iter().enumerate() {
        inv[*x] = i;
    }
    inv
}

pub fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    for x in p {
        if *x >= p.len() || seen[*x] {
            return false;
        }
        seen[*x] = true;
    }
    true
}

/// A finite group by its multiplication table. Element 0 is the identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiniteGroup {
    name: String,
    mul: Vec<Vec<usize>>,
    inv: Vec<usize>,
    /// Permutation of each element when the group was given as a permutation group.
    #[serde(skip_serializing_if = "Option::is_none")]
    perms: Option<Vec<Vec<usize>>>,
}

/// On-disk group descriptions accepted by `--group`.
#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupSpec {
    Cyclic(usize),
    Symmetric(usize),
    Table(Vec<Vec<usize>>),
    Permutations(Vec<Vec<usize>>),
}

impl FiniteGroup {
    pub fn from_table(mul: Vec<Vec<usize>>) -> Result<Self> {
        let n = mul.len();
        if n == 0 {
            return Err(Error::Empty("multiplication table"));
        }
        if mul.iter().any(|row| row.len() != n || row.iter().any(|x| *x >= n)) {
            return Err(Error::Malformed("multiplication table is not square over 0..n".into()));
        }
        if (0..n).any(|a| mul[0][a] != a || mul[a][0] != a) {
            return Err(Error::Invalid("element 0 is not the identity".into()));
        }
        let mut inv = vec![usize::MAX; n];
        for a in 0..n {
            match (0..n).find(|b| mul[a][*b] == 0) {
                Some(b) if mul[b][a] == 0 => inv[a] = b,
                _ => return Err(Error::Invalid(format!("element {a} has no two-sided inverse"))),
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mul[mul[a][b]][c] != mul[a][mul[b][c]] {
                        return Err(Error::Invalid(format!("not associative at ({a}, {b}, {c})")));
                    }
                }
            }
        }
        Ok(FiniteGroup {
            name: format!("table({n})"),
            mul,
            inv,
            perms: None,
        })
    }

    /// Group generated by permutations of `0..d`. Elements are listed in
    /// lexicographic order of their image arrays.
    pub fn from_permutations(generators: &[Vec<usize>]) -> Result<Self> {
        let d = generators.first().map_or(0, Vec::len);
        if generators.iter().any(|g| g.len() != d || !is_permutation(g)) {
            return Err(Error::Malformed("generators must be permutations of a common degree".into()));
        }
        let identity: Vec<usize> = (0..d).collect();
        let mut seen: BTreeMap<Vec<usize>, ()> = BTreeMap::new();
        seen.insert(identity.clone(), ());
        let mut queue = VecDeque::from([identity]);
        while let Some(p) = queue.pop_front() {
            for g in generators {
                let q = compose(&p, g);
                if seen.insert(q.clone(), ()).is_none() {
                    queue.push_back(q);
                }
            }
        }
        let elements: Vec<Vec<usize>> = seen.into_keys().collect();
        let mut g = Self::from_sorted_perms(elements);
        g.name = format!("perm({d})");
        Ok(g)
    }

    fn from_sorted_perms(elements: Vec<Vec<usize>>) -> Self {
        let index: BTreeMap<&Vec<usize>, usize> = elements.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let mul: Vec<Vec<usize>> = elements
            .iter()
            .map(|p| elements.iter().map(|q| index[&compose(p, q)]).collect())
            .collect();
        let inv = elements.iter().map(|p| index[&invert(p)]).collect();
        FiniteGroup {
            name: String::new(),
            mul,
            inv,
            perms: Some(elements.clone()),
        }
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Range {
                what: "cyclic group order",
                value: 0,
                min: 1,
                max: i64::MAX,
            });
        }
        let mul = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let inv = (0..n).map(|a| (n - a) % n).collect();
        Ok(FiniteGroup {
            name: format!("Z/{n}"),
            mul,
            inv,
            perms: None,
        })
    }

    pub fn symmetric(d: usize) -> Result<Self> {
        if d == 0 || d > 6 {
            return Err(Error::Range {
                what: "symmetric group degree",
                value: d as i64,
                min: 1,
                max: 6,
            });
        }
        let mut gens = vec![(0..d).collect::<Vec<_>>()];
        if d > 1 {
            let mut t: Vec<usize> = (0..d).collect();
            t.swap(0, 1);
            let cycle: Vec<usize> = (0..d).map(|i| (i + 1) % d).collect();
            gens = vec![t, cycle];
        }
        let mut g = Self::from_permutations(&gens)?;
        g.name = format!("S{d}");
        Ok(g)
    }

    pub fn from_spec(spec: &GroupSpec) -> Result<Self> {
        match spec {
            GroupSpec::Cyclic(n) => Self::cyclic(*n),
            GroupSpec::Symmetric(d) => Self::symmetric(*d),
            GroupSpec::Table(t) => Self::from_table(t.clone()),
            GroupSpec::Permutations(p) => Self::from_permutations(p),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.mul.len()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.mul
    }

    pub fn permutation(&self, a: usize) -> Option<&[usize]> {
        self.perms.as_ref().map(|p| p[a].as_slice())
    }

    /// Right regular representation: element `a` acts by `x -> x * a`.
    pub fn regular_permutation(&self, a: usize) -> Vec<usize> {
        (0..self.order()).map(|x| self.mul[x][a]).collect()
    }

    /// Action on the underlying points when given as permutations, else the
    /// right regular action.
    pub fn action(&self, a: usize) -> Vec<usize> {
        match &self.perms {
            Some(p) => p[a].clone(),
            None => self.regular_permutation(a),
        }
    }

    pub fn conjugate(&self, a: usize, by: usize) -> usize {
        self.mul(self.mul(self.inv(by), a), by)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_groups() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        assert_eq!(s3.order(), 6);
        assert_eq!(s3.permutation(0).unwrap(), &[0, 1, 2]);
        // commuting pairs in S3: sum of centralizer orders = |G| * #classes
        let pairs = (0..6)
            .flat_map(|a| (0..6).map(move |b| (a, b)))
            .filter(|(a, b)| s3.mul(*a, *b) == s3.mul(*b, *a))
            .count();
        assert_eq!(pairs, 18);
        assert_eq!(FiniteGroup::symmetric(4).unwrap().order(), 24);
    }

    #[test]
    fn table_validation() {
        let z3 = FiniteGroup::cyclic(3).unwrap();
        assert_eq!(FiniteGroup::from_table(z3.table().to_vec()).unwrap().order(), 3);
        assert!(FiniteGroup::from_table(vec![vec![0, 1], vec![1, 1]]).is_err());
        assert!(FiniteGroup::from_table(vec![vec![0, 1], vec![1]]).is_err());
    }

    #[test]
    fn composition_acts_left_to_right() {
        let p = vec![1, 2, 0];
        let q = vec![1, 0, 2];
        assert_eq!(compose(&p, &q), vec![0, 2, 1]);
        assert_eq!(compose(&p, &invert(&p)), vec![0, 1, 2]);
        let s3 = FiniteGroup::symmetric(3).unwrap();
        for a in 0..6 {
            for b in 0..6 {
                let ab = s3.mul(a, b);
                assert_eq!(s3.permutation(ab).unwrap(), compose(s3.permutation(a).unwrap(), s3.permutation(b).unwrap()));
            }
        }
    }

    #[test]
    fn spec_parsing() {
        let spec: GroupSpec = serde_json::from_str(r#"{"cyclic": 4}"#).unwrap();
        assert_eq!(FiniteGroup::from_spec(&spec).unwrap().order(), 4);
        let spec: GroupSpec = serde_json::from_str(r#"{"permutations": [[1,0,2],[0,2,1]]}"#).unwrap();
        assert_eq!(FiniteGroup::from_spec(&spec).unwrap().order(), 6);
    }
}
