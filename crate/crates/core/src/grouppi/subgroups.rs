use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::group::{compose, invert, is_permutation};
use super::presentation::{generator_of, simplify, GroupPresentation, Word};
use crate::error::{Error, Result};

pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000;

/// Right action of the generators on cosets `0..degree`; coset 0 is the subgroup.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CosetTable {
    pub degree: usize,
    pub action: Vec<Vec<usize>>,
}

impl CosetTable {
    pub fn new(degree: usize, action: Vec<Vec<usize>>) -> Result<Self> {
        if degree == 0 || action.iter().any(|p| p.len() != degree || !is_permutation(p)) {
            return Err(Error::Malformed("coset table rows must be permutations of 0..degree".into()));
        }
        Ok(CosetTable { degree, action })
    }

    pub fn trivial(generators: usize) -> Self {
        CosetTable {
            degree: 1,
            action: vec![vec![0]; generators],
        }
    }

    /// Permutation traced by a word, read left to right.
    pub fn word_permutation(&self, w: &[i32]) -> Vec<usize> {
        word_permutation(&self.action, self.degree, w)
    }

    /// Index of the first relator that does not act trivially.
    pub fn violated_relator(&self, p: &GroupPresentation) -> Option<usize> {
        let id: Vec<usize> = (0..self.degree).collect();
        p.relators.iter().position(|r| self.word_permutation(r) != id)
    }

    pub fn is_transitive(&self) -> bool {
        let mut seen = vec![false; self.degree];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(c) = queue.pop_front() {
            for p in &self.action {
                for d in [p[c], invert(p)[c]] {
                    if !seen[d] {
                        seen[d] = true;
                        queue.push_back(d);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Relabels cosets in order of first appearance in a breadth-first walk from
    /// `base`, generators (then inverses) in increasing order.
    pub fn standardized_at(&self, base: usize) -> CosetTable {
        let inverses: Vec<Vec<usize>> = self.action.iter().map(|p| invert(p)).collect();
        let mut label = vec![usize::MAX; self.degree];
        let mut order = vec![base];
        label[base] = 0;
        let mut i = 0;
        while i < order.len() {
            let c = order[i];
            for g in 0..self.action.len() {
                for d in [self.action[g][c], inverses[g][c]] {
                    if label[d] == usize::MAX {
                        label[d] = order.len();
                        order.push(d);
                    }
                }
            }
            i += 1;
        }
        debug_assert_eq!(order.len(), self.degree, "transitive table");
        let action = self
            .action
            .iter()
            .map(|p| order.iter().map(|c| label[p[*c]]).collect())
            .collect();
        CosetTable {
            degree: self.degree,
            action,
        }
    }

    /// Least standardized table over all basepoints: equal for conjugate subgroups.
    pub fn conjugacy_canonical(&self) -> CosetTable {
        (0..self.degree)
            .map(|b| self.standardized_at(b))
            .min()
            .expect("degree >= 1")
    }
}

pub(crate) fn word_permutation(action: &[Vec<usize>], degree: usize, w: &[i32]) -> Vec<usize> {
    let mut p: Vec<usize> = (0..degree).collect();
    for l in w {
        let g = &action[generator_of(*l)];
        p = if *l > 0 { compose(&p, g) } else { compose(&p, &invert(g)) };
    }
    p
}

/// Rewrites permutations of simplified generators as permutations of the original ones.
pub(crate) fn expand_action(action: &[Vec<usize>], degree: usize, expansion: &[Word]) -> Vec<Vec<usize>> {
    expansion.iter().map(|w| word_permutation(action, degree, w)).collect()
}

struct Search<'a> {
    relators: &'a [Vec<usize>],
    columns: usize,
    max_degree: usize,
    nodes: u64,
    budget: u64,
    found: BTreeSet<Vec<Vec<usize>>>,
}

#[derive(Clone)]
struct Partial {
    rows: Vec<Vec<Option<usize>>>,
}

impl Partial {
    fn set(&mut self, c: usize, x: usize, d: usize) {
        self.rows[c][x] = Some(d);
        self.rows[d][x ^ 1] = Some(c);
    }

    /// Scans every relator at every coset, filling forced entries. False on a contradiction.
    fn propagate(&mut self, relators: &[Vec<usize>]) -> bool {
        loop {
            let mut changed = false;
            for c in 0..self.rows.len() {
                for r in relators {
                    let mut f = c;
                    let mut i = 0;
                    while i < r.len() {
                        match self.rows[f][r[i]] {
                            Some(d) => f = d,
                            None => break,
                        }
                        i += 1;
                    }
                    if i == r.len() {
                        if f != c {
                            return false;
                        }
                        continue;
                    }
                    let mut b = c;
                    let mut j = r.len();
                    while j > i {
                        match self.rows[b][r[j - 1] ^ 1] {
                            Some(d) => b = d,
                            None => break,
                        }
                        j -= 1;
                    }
                    if j == i {
                        if f != b {
                            return false;
                        }
                    } else if j == i + 1 {
                        if self.rows[b][r[i] ^ 1].is_some() {
                            return false;
                        }
                        self.set(f, r[i], b);
                        changed = true;
                    }
                }
            }
            if !changed {
                return true;
            }
        }
    }
}

impl Search<'_> {
    fn run(&mut self, mut t: Partial) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::Budget {
                what: "low-index search nodes",
                bound: self.budget,
            });
        }
        if !t.propagate(self.relators) {
            return Ok(());
        }
        let n = t.rows.len();
        let next = (0..n).flat_map(|c| (0..self.columns).map(move |x| (c, x))).find(|(c, x)| t.rows[*c][*x].is_none());
        let Some((c, x)) = next else {
            let action = (0..self.columns / 2)
                .map(|g| t.rows.iter().map(|row| row[2 * g].expect("complete")).collect())
                .collect();
            self.found.insert(action);
            return Ok(());
        };
        for d in 0..n {
            if t.rows[d][x ^ 1].is_none() {
                let mut u = t.clone();
                u.set(c, x, d);
                self.run(u)?;
            }
        }
        if n < self.max_degree {
            let mut u = t;
            u.rows.push(vec![None; self.columns]);
            u.set(c, x, n);
            self.run(u)?;
        }
        Ok(())
    }
}

/// All transitive coset tables of degree `<= max_degree`, one per conjugacy
/// class, in conjugacy-canonical form sorted by (degree, action).
pub fn low_index_subgroups(p: &GroupPresentation, max_degree: usize, budget: u64) -> Result<Vec<CosetTable>> {
    if max_degree == 0 {
        return Err(Error::Range {
            what: "maximum index",
            value: 0,
            min: 1,
            max: i64::MAX,
        });
    }
    let s = simplify(p);
    let q = &s.presentation;
    // Columns: 2g for generator g, 2g + 1 for its inverse.
    let col = |l: i32| 2 * generator_of(l) + usize::from(l < 0);
    let relators: Vec<Vec<usize>> = q.relators.iter().map(|r| r.iter().map(|l| col(*l)).collect()).collect();
    let mut search = Search {
        relators: &relators,
        columns: 2 * q.generator_count,
        max_degree,
        nodes: 0,
        budget,
        found: BTreeSet::new(),
    };
    search.run(Partial {
        rows: vec![vec![None; 2 * q.generator_count]],
    })?;
    let mut classes = BTreeSet::new();
    for action in search.found {
        let degree = action.first().map_or(1, Vec::len);
        let table = CosetTable {
            degree,
            action: expand_action(&action, degree, &s.expansion),
        };
        debug_assert_eq!(table.violated_relator(p), None);
        classes.insert(table.conjugacy_canonical());
    }
    Ok(classes.into_iter().collect())
}

/// Number of conjugacy classes at each index `1..=max_degree`.
pub fn index_profile(tables: &[CosetTable], max_degree: usize) -> Vec<usize> {
    (1..=max_degree).map(|k| tables.iter().filter(|t| t.degree == k).count()).collect()
}
