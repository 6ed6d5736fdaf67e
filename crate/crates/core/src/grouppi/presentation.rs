use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};

/// Letters are `g + 1` for generator `g` and `-(g + 1)` for its inverse.
pub type Word = Vec<i32>;

pub fn letter(generator: usize, inverse: bool) -> i32 {
    let l = generator as i32 + 1;
    if inverse {
        -l
    } else {
        l
    }
}

pub fn generator_of(letter: i32) -> usize {
    letter.unsigned_abs() as usize - 1
}

pub fn free_reduce(word: &[i32]) -> Word {
    let mut out: Word = Vec::with_capacity(word.len());
    for &l in word {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

pub fn cyclic_reduce(word: &[i32]) -> Word {
    let mut w = free_reduce(word);
    while w.len() >= 2 && w[0] == -w[w.len() - 1] {
        w.pop();
        w.remove(0);
    }
    w
}

pub fn inverse_word(word: &[i32]) -> Word {
    word.iter().rev().map(|l| -l).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupPresentation {
    pub generator_count: usize,
    pub relators: Vec<Word>,
    /// Oriented edge `(a, b)`, `a < b`, carried by each generator of an edge-path presentation.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub origin: Vec<(usize, usize)>,
}

impl GroupPresentation {
    pub fn new(generator_count: usize, relators: Vec<Word>) -> Result<Self> {
        let p = GroupPresentation {
            generator_count,
            relators: relators.iter().map(|r| free_reduce(r)).collect(),
            origin: Vec::new(),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for r in &self.relators {
            if r.iter().any(|l| *l == 0 || generator_of(*l) >= self.generator_count) {
                return Err(Error::Malformed(format!("relator {r:?} uses a generator out of range")));
            }
        }
        if !self.origin.is_empty() && self.origin.len() != self.generator_count {
            return Err(Error::Malformed("origin must list one edge per generator".into()));
        }
        Ok(())
    }
}

/// Edge-path presentation relative to a spanning tree.
#[derive(Clone, Debug)]
pub struct EdgePathPresentation {
    pub presentation: GroupPresentation,
    pub basepoint: usize,
    /// Each edge `(a, b)`, `a < b`, mapped to its generator; tree edges are absent.
    pub edge_generator: BTreeMap<(usize, usize), usize>,
    pub tree: Vec<(usize, usize)>,
}

impl EdgePathPresentation {
    /// Word traced by the oriented edge `a -> b` (empty for tree edges).
    pub fn edge_word(&self, a: usize, b: usize) -> Word {
        let (lo, hi, inv) = if a < b { (a, b, false) } else { (b, a, true) };
        match self.edge_generator.get(&(lo, hi)) {
            Some(g) => vec![letter(*g, inv)],
            None => Vec::new(),
        }
    }
}

/// Breadth-first spanning tree from `basepoint`, neighbours visited in increasing
/// order. One generator per non-tree edge in lexicographic edge order, one
/// relator `e(a,b) e(b,c) e(a,c)^-1` per triangle.
pub fn edge_path_presentation(x: &SimplicialComplex, basepoint: usize) -> Result<EdgePathPresentation> {
    let components = x.components()?;
    if components.len() > 1 {
        return Err(Error::Disconnected {
            components: components.len(),
        });
    }
    if !x.vertices().contains(&basepoint) {
        return Err(Error::Invalid(format!("basepoint {basepoint} is not a vertex")));
    }
    let mut adj: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for e in x.faces(1) {
        let (a, b) = (e.vertices()[0], e.vertices()[1]);
        adj.entry(a).or_default().insert(b);
        adj.entry(b).or_default().insert(a);
    }
    let mut seen = BTreeSet::from([basepoint]);
    let mut tree = BTreeSet::new();
    let mut queue = VecDeque::from([basepoint]);
    while let Some(v) = queue.pop_front() {
        for &w in adj.get(&v).into_iter().flatten() {
            if seen.insert(w) {
                tree.insert((v.min(w), v.max(w)));
                queue.push_back(w);
            }
        }
    }
    let mut edge_generator = BTreeMap::new();
    let mut origin = Vec::new();
    for e in x.faces(1) {
        let key = (e.vertices()[0], e.vertices()[1]);
        if !tree.contains(&key) {
            edge_generator.insert(key, origin.len());
            origin.push(key);
        }
    }
    let mut out = EdgePathPresentation {
        presentation: GroupPresentation {
            generator_count: origin.len(),
            relators: Vec::new(),
            origin,
        },
        basepoint,
        edge_generator,
        tree: tree.into_iter().collect(),
    };
    let relators = x
        .faces(2)
        .iter()
        .map(|t| {
            let v = t.vertices();
            let mut w = out.edge_word(v[0], v[1]);
            w.extend(out.edge_word(v[1], v[2]));
            w.extend(out.edge_word(v[2], v[0]));
            free_reduce(&w)
        })
        .collect();
    out.presentation.relators = relators;
    Ok(out)
}

/// A Tietze-simplified presentation and the substitution that recovers the
/// original generators as words in the new ones.
#[derive(Clone, Debug)]
pub struct Simplified {
    pub presentation: GroupPresentation,
    pub expansion: Vec<Word>,
}

fn substitute(word: &[i32], g: usize, value: &[i32]) -> Word {
    let inv = inverse_word(value);
    let mut out = Vec::with_capacity(word.len());
    for &l in word {
        if generator_of(l) == g {
            out.extend_from_slice(if l > 0 { value } else { &inv });
        } else {
            out.push(l);
        }
    }
    free_reduce(&out)
}

/// Repeatedly eliminates a generator occurring exactly once in some relator,
/// always using the shortest such relator. Empty and duplicate relators are dropped.
pub fn simplify(p: &GroupPresentation) -> Simplified {
    let mut relators: Vec<Word> = p.relators.iter().map(|r| cyclic_reduce(r)).collect();
    let mut expansion: Vec<Word> = (0..p.generator_count).map(|g| vec![letter(g, false)]).collect();
    let mut alive: BTreeSet<usize> = (0..p.generator_count).collect();
    loop {
        relators.retain(|r| !r.is_empty());
        relators.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        relators.dedup();
        let pick = relators.iter().enumerate().find_map(|(i, r)| {
            let mut count: BTreeMap<usize, usize> = BTreeMap::new();
            for l in r {
                *count.entry(generator_of(*l)).or_default() += 1;
            }
            count.into_iter().find(|(_, c)| *c == 1).map(|(g, _)| (i, g))
        });
        let Some((i, g)) = pick else { break };
        let r = relators.remove(i);
        let pos = r.iter().position(|l| generator_of(*l) == g).expect("generator occurs");
        // r = u g^e v  =>  g^e = u^-1 v^-1, rotated: g^e (v u) = 1.
        let mut rest: Word = r[pos + 1..].to_vec();
        rest.extend_from_slice(&r[..pos]);
        let value = if r[pos] > 0 { inverse_word(&rest) } else { rest };
        let value = free_reduce(&value);
        for rel in &mut relators {
            *rel = cyclic_reduce(&substitute(rel, g, &value));
        }
        for e in &mut expansion {
            *e = substitute(e, g, &value);
        }
        alive.remove(&g);
    }
    let renumber: BTreeMap<usize, usize> = alive.iter().enumerate().map(|(i, g)| (*g, i)).collect();
    let rename = |w: &Word| -> Word {
        w.iter()
            .map(|l| letter(renumber[&generator_of(*l)], *l < 0))
            .collect()
    };
    Simplified {
        presentation: GroupPresentation {
            generator_count: alive.len(),
            relators: relators.iter().map(rename).collect(),
            origin: Vec::new(),
        },
        expansion: expansion.iter().map(rename).collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Abelianization {
    pub free_rank: usize,
    /// Invariant factors greater than one, each dividing the next.
    pub torsion: Vec<u64>,
}

impl Abelianization {
    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

pub fn abelianization(p: &GroupPresentation) -> Result<Abelianization> {
    let mut m: Vec<Vec<BigInt>> = p
        .relators
        .iter()
        .map(|r| {
            let mut row = vec![BigInt::zero(); p.generator_count];
            for l in r {
                row[generator_of(*l)] += if *l > 0 { 1 } else { -1 };
            }
            row
        })
        .collect();
    let diag = smith_diagonal(&mut m, p.generator_count);
    let rank = diag.len();
    let torsion = diag
        .into_iter()
        .filter(|d| *d != BigInt::from(1))
        .map(|d| d.to_u64().ok_or_else(|| Error::Shape(format!("invariant factor {d} exceeds u64"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(Abelianization {
        free_rank: p.generator_count - rank,
        torsion,
    })
}

/// Nonzero invariant factors of an integer matrix, in divisibility order.
pub(crate) fn smith_diagonal(m: &mut [Vec<BigInt>], ncols: usize) -> Vec<BigInt> {
    let nrows = m.len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < nrows.min(ncols) {
        // smallest nonzero entry in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..nrows {
            for j in t..ncols {
                if !m[i][j].is_zero() && best.map_or(true, |(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        let mut clean = true;
        for i in t + 1..nrows {
            if m[i][t].is_zero() {
                continue;
            }
            let q = m[i][t].div_floor(&m[t][t]);
            for j in t..ncols {
                let d = &q * &m[t][j];
                m[i][j] -= d;
            }
            clean &= m[i][t].is_zero();
        }
        for j in t + 1..ncols {
            if m[t][j].is_zero() {
                continue;
            }
            let q = m[t][j].div_floor(&m[t][t]);
            for i in t..nrows {
                let d = &q * &m[i][t];
                m[i][j] -= d;
            }
            clean &= m[t][j].is_zero();
        }
        if !clean {
            continue;
        }
        diag.push(m[t][t].abs());
        t += 1;
    }
    // normalize into a divisibility chain
    for i in 0..diag.len() {
        for j in i + 1..diag.len() {
            let g = diag[i].gcd(&diag[j]);
            let l = diag[i].lcm(&diag[j]);
            diag[i] = g;
            diag[j] = l;
        }
    }
    diag
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn pres(x: &SimplicialComplex) -> GroupPresentation {
        edge_path_presentation(x, 0).unwrap().presentation
    }

    #[test]
    fn circle_presentation() {
        let p = pres(&corpus::circle(3));
        assert_eq!(p.generator_count, 1);
        assert!(p.relators.is_empty());
        assert_eq!(abelianization(&p).unwrap(), Abelianization { free_rank: 1, torsion: vec![] });
    }

    #[test]
    fn sphere_rp2_torus() {
        let s2 = pres(&corpus::boundary_simplex(3));
        assert_eq!(s2.generator_count, 3);
        assert_eq!(s2.relators.len(), 4);
        assert!(abelianization(&s2).unwrap().is_trivial());
        let rp2 = pres(&corpus::rp2_6());
        assert_eq!(abelianization(&rp2).unwrap().torsion, vec![2]);
        assert_eq!(abelianization(&rp2).unwrap().free_rank, 0);
        let t = pres(&corpus::torus_7());
        assert_eq!(abelianization(&t).unwrap(), Abelianization { free_rank: 2, torsion: vec![] });
    }

    #[test]
    fn disconnected_is_rejected() {
        let x = SimplicialComplex::from_vertex_lists(&[vec![0, 1], vec![2, 3]]).unwrap();
        assert!(matches!(edge_path_presentation(&x, 0), Err(Error::Disconnected { components: 2 })));
    }

    #[test]
    fn simplification_preserves_abelianization() {
        for (_, x) in corpus::closed_corpus() {
            let p = pres(&x);
            let s = simplify(&p);
            assert_eq!(abelianization(&p).unwrap(), abelianization(&s.presentation).unwrap());
            assert_eq!(s.expansion.len(), p.generator_count);
        }
        let t = simplify(&pres(&corpus::torus_7())).presentation;
        assert_eq!(t.generator_count, 2);
        assert_eq!(t.relators.len(), 1);
        assert_eq!(t.relators[0].len(), 4);
        assert_eq!(simplify(&pres(&corpus::boundary_simplex(3))).presentation.generator_count, 0);
    }

    #[test]
    fn smith_form_examples() {
        let mut m = vec![
            vec![BigInt::from(2), BigInt::from(4), BigInt::from(4)],
            vec![BigInt::from(-6), BigInt::from(6), BigInt::from(12)],
            vec![BigInt::from(10), BigInt::from(-4), BigInt::from(-16)],
        ];
        assert_eq!(smith_diagonal(&mut m, 3), vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
        let mut m = vec![vec![BigInt::from(2), BigInt::zero()], vec![BigInt::zero(), BigInt::from(3)]];
        assert_eq!(smith_diagonal(&mut m, 2), vec![BigInt::from(1), BigInt::from(6)]);
    }
}
