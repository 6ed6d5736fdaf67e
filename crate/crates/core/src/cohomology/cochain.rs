use std::collections::BTreeMap;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::local::{LocalSystem, Stalk};
use super::zmod::{kernel, quotient, solve, Matrix, Ring};
use crate::complex::{DerivedComplex, Simplex, SimplicialComplex};
use crate::covering::SimplicialMap;
use crate::error::{Error, Result};
use crate::util::sort_sign;

/// Values on the `degree`-simplices, oriented by increasing vertex order. The
/// value on `s` lies in the stalk at the first vertex of `s`. Zero values are
/// not stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    pub degree: usize,
    pub values: BTreeMap<Simplex, Vec<u64>>,
}

/// Plain form for JSON: `[vertices, coordinates]` pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CochainDump {
    pub degree: usize,
    pub stalk: Vec<u64>,
    pub values: Vec<(Vec<usize>, Vec<u64>)>,
}

impl Cochain {
    pub fn zero(degree: usize) -> Self {
        Cochain {
            degree,
            values: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, s: &Simplex) -> Option<&[u64]> {
        self.values.get(s).map(Vec::as_slice)
    }

    pub fn set(&mut self, s: Simplex, value: Vec<u64>) {
        if value.iter().all(|x| *x == 0) {
            self.values.remove(&s);
        } else {
            self.values.insert(s, value);
        }
    }

    fn accumulate(&mut self, stalk: &Stalk, s: &Simplex, value: &[u64]) {
        let sum = match self.values.get(s) {
            Some(v) => stalk.add(v, value),
            None => value.to_vec(),
        };
        self.set(s.clone(), sum);
    }

    pub fn sub(&self, stalk: &Stalk, other: &Cochain) -> Cochain {
        let mut out = self.clone();
        for (s, v) in &other.values {
            out.accumulate(stalk, s, &stalk.scale(v, -1));
        }
        out
    }

    /// Keeps the values on simplices of `sub`.
    pub fn restrict(&self, sub: &SimplicialComplex) -> Cochain {
        Cochain {
            degree: self.degree,
            values: self.values.iter().filter(|(s, _)| sub.contains(s)).map(|(s, v)| (s.clone(), v.clone())).collect(),
        }
    }

    pub fn check(&self, x: &SimplicialComplex, stalk: &Stalk) -> Result<()> {
        for (s, v) in &self.values {
            if s.dim() != self.degree {
                return Err(Error::Shape(format!("{s} has the wrong dimension for a {}-cochain", self.degree)));
            }
            if !x.contains(s) {
                return Err(Error::MissingSimplex(s.clone()));
            }
            if !stalk.contains(v) {
                return Err(Error::Shape(format!("value on {s} is not a stalk element")));
            }
        }
        Ok(())
    }

    pub fn dump(&self, stalk: &Stalk) -> CochainDump {
        CochainDump {
            degree: self.degree,
            stalk: stalk.orders().to_vec(),
            values: self.values.iter().map(|(s, v)| (s.vertices().to_vec(), v.clone())).collect(),
        }
    }

    pub fn from_dump(d: &CochainDump, stalk: &Stalk) -> Result<Self> {
        if d.stalk != stalk.orders() {
            return Err(Error::Shape("cochain stalk differs".into()));
        }
        let mut c = Cochain::zero(d.degree);
        for (vs, v) in &d.values {
            let s = Simplex::new(vs.clone())?;
            if !stalk.contains(v) {
                return Err(Error::Shape(format!("value on {s} is not a stalk element")));
            }
            c.set(s, v.clone());
        }
        Ok(c)
    }
}

/// `(dc)(v0..v_{q+1}) = T(v0, v1) c(d_0) + sum_{i >= 1} (-1)^i c(d_i)`.
pub fn coboundary(x: &SimplicialComplex, sys: &LocalSystem, c: &Cochain) -> Cochain {
    let stalk = &sys.stalk;
    let mut out = Cochain::zero(c.degree + 1);
    for s in x.faces(c.degree + 1) {
        let mut total = stalk.zero();
        for i in 0..s.len() {
            let face = s.facet(i).expect("face");
            let Some(v) = c.get(&face) else { continue };
            let term = if i == 0 {
                stalk.apply(sys.transport(s.vertices()[0], s.vertices()[1]), v)
            } else if i % 2 == 0 {
                v.to_vec()
            } else {
                stalk.scale(v, -1)
            };
            total = stalk.add(&total, &term);
        }
        out.set(s.clone(), total);
    }
    out
}

/// Coordinates of the cochain groups over `Z/e`: simplex `j`, stalk coordinate
/// `a` sits at `j * k + a`.
struct Coordinates<'a> {
    sys: &'a LocalSystem,
    ring: Ring,
    k: usize,
}

impl<'a> Coordinates<'a> {
    fn new(sys: &'a LocalSystem) -> Self {
        Coordinates {
            ring: Ring::new(sys.stalk.exponent()),
            k: sys.stalk.rank(),
            sys,
        }
    }

    fn vector(&self, x: &SimplicialComplex, c: &Cochain) -> Vec<u64> {
        let faces = x.faces(c.degree);
        let mut v = vec![0u64; faces.len() * self.k];
        for (j, s) in faces.iter().enumerate() {
            if let Some(val) = c.get(s) {
                v[j * self.k..(j + 1) * self.k].copy_from_slice(val);
            }
        }
        v
    }

    fn cochain(&self, x: &SimplicialComplex, q: usize, v: &[u64]) -> Cochain {
        let mut c = Cochain::zero(q);
        for (j, s) in x.faces(q).iter().enumerate() {
            let lifted: Vec<i64> = v[j * self.k..(j + 1) * self.k].iter().map(|a| *a as i64).collect();
            c.set(s.clone(), self.sys.stalk.reduce(&lifted));
        }
        c
    }

    /// Matrix of `d: C^q -> C^{q+1}`.
    fn coboundary(&self, x: &SimplicialComplex, q: usize) -> Matrix {
        let rows = x.faces(q + 1);
        let cols = x.faces(q);
        let position: BTreeMap<&Simplex, usize> = cols.iter().enumerate().map(|(j, s)| (s, j)).collect();
        let mut m = vec![vec![0u64; cols.len() * self.k]; rows.len() * self.k];
        for (r, s) in rows.iter().enumerate() {
            for i in 0..s.len() {
                let face = s.facet(i).expect("face");
                let c = position[&face];
                for a in 0..self.k {
                    for b in 0..self.k {
                        let entry = if i == 0 {
                            self.sys.transport(s.vertices()[0], s.vertices()[1]).0[a][b] as i64
                        } else if a == b {
                            if i % 2 == 0 {
                                1
                            } else {
                                -1
                            }
                        } else {
                            0
                        };
                        let cell = &mut m[r * self.k + a][c * self.k + b];
                        *cell = self.ring.reduce(*cell as i64 + entry);
                    }
                }
            }
        }
        m
    }

    /// Generators of the order relations of `C^q`.
    fn relations(&self, n: usize) -> Vec<Vec<u64>> {
        let mut out = Vec::new();
        for j in 0..n {
            for (a, d) in self.sys.stalk.orders().iter().enumerate() {
                if *d % self.ring.e != 0 {
                    let mut v = vec![0u64; n * self.k];
                    v[j * self.k + a] = *d;
                    out.push(v);
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct CohomologyGroup {
    pub degree: usize,
    /// Cyclic summands, one per representative.
    pub orders: Vec<u64>,
    pub invariant_factors: Vec<u64>,
    pub representatives: Vec<Cochain>,
}

impl CohomologyGroup {
    pub fn order(&self) -> u64 {
        self.orders.iter().product()
    }
}

/// Invariant factors `d_1 | d_2 | ...` of a sum of cyclic groups.
pub fn invariant_factors(orders: &[u64]) -> Vec<u64> {
    let mut d: Vec<u64> = orders.iter().copied().filter(|x| *x > 1).collect();
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            let (g, l) = (d[i].gcd(&d[j]), d[i].lcm(&d[j]));
            d[i] = g;
            d[j] = l;
        }
    }
    d.retain(|x| *x > 1);
    d
}

/// `H^q(x; sys)`, with a representative cocycle for each cyclic summand.
pub fn cohomology(x: &SimplicialComplex, sys: &LocalSystem, q: usize) -> Result<CohomologyGroup> {
    sys.check_flat(x)?;
    let co = Coordinates::new(sys);
    let n = x.faces(q).len();
    let nq = n * co.k;
    // cocycles: x with d x in the relations of C^{q+1}
    let d_q = co.coboundary(x, q);
    let rel_next = co.relations(x.faces(q + 1).len());
    let mut block: Matrix = d_q.clone();
    for (r, row) in block.iter_mut().enumerate() {
        row.extend(rel_next.iter().map(|v| co.ring.reduce(-(v[r] as i64))));
    }
    let cocycles: Vec<Vec<u64>> = if d_q.is_empty() {
        (0..nq)
            .map(|i| {
                let mut v = vec![0; nq];
                v[i] = 1;
                v
            })
            .collect()
    } else {
        kernel(co.ring, &block, nq + rel_next.len())
            .into_iter()
            .map(|v| v[..nq].to_vec())
            .filter(|v| v.iter().any(|a| *a != 0))
            .collect()
    };
    let mut boundaries = co.relations(n);
    if q > 0 {
        let d_prev = co.coboundary(x, q - 1);
        let cols = x.faces(q - 1).len() * co.k;
        for j in 0..cols {
            boundaries.push(d_prev.iter().map(|r| r[j]).collect());
        }
    }
    let summands = quotient(co.ring, &cocycles, &boundaries, nq);
    let orders: Vec<u64> = summands.iter().map(|(o, _)| *o).collect();
    Ok(CohomologyGroup {
        degree: q,
        invariant_factors: invariant_factors(&orders),
        representatives: summands.iter().map(|(_, v)| co.cochain(x, q, v)).collect(),
        orders,
    })
}

/// A cochain `w` with `dw = c`, if there is one.
pub fn solve_coboundary(x: &SimplicialComplex, sys: &LocalSystem, c: &Cochain) -> Result<Option<Cochain>> {
    c.check(x, &sys.stalk)?;
    if c.degree == 0 {
        return Ok(c.is_zero().then(|| Cochain::zero(0)));
    }
    let co = Coordinates::new(sys);
    let q = c.degree - 1;
    let mut a = co.coboundary(x, q);
    let n = x.faces(q).len() * co.k;
    let rel = co.relations(x.faces(c.degree).len());
    for (r, row) in a.iter_mut().enumerate() {
        row.extend(rel.iter().map(|v| v[r]));
    }
    let b = co.vector(x, c);
    if a.is_empty() {
        return Ok(Some(Cochain::zero(q)));
    }
    Ok(solve(co.ring, &a, n + rel.len(), &b).map(|y| co.cochain(x, q, &y[..n])))
}

/// Whether `dw = c` holds simplex by simplex.
pub fn verify_witness(x: &SimplicialComplex, sys: &LocalSystem, w: &Cochain, c: &Cochain) -> bool {
    w.degree + 1 == c.degree && coboundary(x, sys, w) == *c
}

/// Pullback along a simplicial map, in the pulled-back local system.
/// Simplices collapsed by `f` get zero.
pub fn pullback(f: &SimplicialMap, sys: &LocalSystem, c: &Cochain) -> Result<Cochain> {
    c.check(&f.target, &sys.stalk)?;
    let stalk = &sys.stalk;
    let mut out = Cochain::zero(c.degree);
    for s in f.source.faces(c.degree) {
        let images: Vec<usize> = s.vertices().iter().map(|v| f.apply(*v)).collect();
        let img = f.image(s);
        if img.len() != s.len() {
            continue;
        }
        let Some(v) = c.get(&img) else { continue };
        let moved = stalk.apply(sys.transport(images[0], img.vertices()[0]), v);
        out.set(s.clone(), stalk.scale(&moved, sort_sign(&images)));
    }
    Ok(out)
}

/// Simplicial approximation of the identity `sd X -> X` sending each
/// barycenter to the smallest vertex of its simplex.
pub fn min_vertex_map(d: &DerivedComplex) -> SimplicialMap {
    let vertex_map = d.complex().vertices().into_iter().map(|v| (v, d.simplex_of(v).vertices()[0])).collect();
    SimplicialMap::new(d.complex().clone(), d.base().clone(), vertex_map).expect("flags map to faces of their top simplex")
}

/// Pullback to the barycentric subdivision along `min_vertex_map`; the local
/// system on the subdivision is `sys.subdivide(d)`.
pub fn subdivision_pullback(d: &DerivedComplex, sys: &LocalSystem, c: &Cochain) -> Result<Cochain> {
    pullback(&min_vertex_map(d), sys, c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::local::StalkMap;
    use crate::corpus;
    use crate::grouppi::{edge_path_presentation, enumerate_homs, FiniteGroup};

    fn constant(m: u64) -> LocalSystem {
        LocalSystem::constant(Stalk::cyclic(m).unwrap())
    }

    fn orders(x: &SimplicialComplex, sys: &LocalSystem) -> Vec<Vec<u64>> {
        (0..=x.dim().unwrap()).map(|q| cohomology(x, sys, q).unwrap().invariant_factors).collect()
    }

    fn sign_system(x: &SimplicialComplex, m: u64) -> LocalSystem {
        let pres = edge_path_presentation(x, 0).unwrap();
        let homs = enumerate_homs(&pres.presentation, &FiniteGroup::cyclic(2).unwrap(), 1000).unwrap();
        let phi = homs.homs.iter().find(|h| !h.is_trivial()).unwrap();
        let images: Vec<StalkMap> = phi.images.iter().map(|a| StalkMap(vec![vec![if *a == 0 { 1 } else { m - 1 }]])).collect();
        LocalSystem::from_monodromy(Stalk::cyclic(m).unwrap(), &pres, &images).unwrap()
    }

    #[test]
    fn constant_coefficients() {
        assert_eq!(orders(&corpus::circle(5), &constant(4)), vec![vec![4], vec![4]]);
        assert_eq!(orders(&corpus::torus_7(), &constant(3)), vec![vec![3], vec![3, 3], vec![3]]);
        assert_eq!(orders(&corpus::boundary_simplex(3), &constant(2)), vec![vec![2], vec![], vec![2]]);
        // H^*(RP^2; Z/2) = Z/2 in each degree; with Z/3 only H^0
        assert_eq!(orders(&corpus::rp2_6(), &constant(2)), vec![vec![2], vec![2], vec![2]]);
        assert_eq!(orders(&corpus::rp2_6(), &constant(3)), vec![vec![3], vec![], vec![]]);
        // H^1(RP^2; Z/4) = Z/2, H^2 = Z/2
        assert_eq!(orders(&corpus::rp2_6(), &constant(4)), vec![vec![4], vec![2], vec![2]]);
        let two_three = LocalSystem::constant(Stalk::from_orders(vec![2, 3]).unwrap());
        assert_eq!(orders(&corpus::circle(4), &two_three), vec![vec![6], vec![6]]);
    }

    #[test]
    fn twisted_coefficients_on_rp2() {
        // orientation sheaf: H^0 = 0 and H^2 = Z/3 with odd coefficients
        let sys = sign_system(&corpus::rp2_6(), 3);
        assert_eq!(orders(&corpus::rp2_6(), &sys), vec![vec![], vec![], vec![3]]);
    }

    #[test]
    fn coboundary_squares_to_zero() {
        for (x, sys) in [
            (corpus::torus_7(), constant(3)),
            (corpus::rp2_6(), sign_system(&corpus::rp2_6(), 5)),
            (corpus::boundary_simplex(4), constant(6)),
        ] {
            for q in 0..x.dim().unwrap() {
                for s in x.faces(q) {
                    let mut c = Cochain::zero(q);
                    c.set(s.clone(), vec![1]);
                    let dd = coboundary(&x, &sys, &coboundary(&x, &sys, &c));
                    assert!(dd.is_zero(), "dd != 0 on {s}");
                }
            }
        }
    }

    #[test]
    fn representatives_are_cocycles_and_not_coboundaries() {
        let x = corpus::torus_7();
        let sys = constant(3);
        for q in 0..3 {
            let h = cohomology(&x, &sys, q).unwrap();
            for r in &h.representatives {
                assert!(coboundary(&x, &sys, r).is_zero());
                assert!(solve_coboundary(&x, &sys, r).unwrap().is_none());
            }
        }
    }

    #[test]
    fn witnesses_solve() {
        let x = corpus::torus_7();
        let sys = constant(3);
        let mut w = Cochain::zero(0);
        w.set(Simplex::vertex(2), vec![1]);
        w.set(Simplex::vertex(5), vec![2]);
        let c = coboundary(&x, &sys, &w);
        let found = solve_coboundary(&x, &sys, &c).unwrap().unwrap();
        assert!(verify_witness(&x, &sys, &found, &c));
    }

    #[test]
    fn subdivision_commutes_with_coboundary() {
        for (x, sys) in [
            (corpus::torus_7(), constant(5)),
            (corpus::rp2_6(), sign_system(&corpus::rp2_6(), 5)),
            (corpus::boundary_simplex(3), constant(7)),
        ] {
            let d = x.barycentric_subdivision();
            let sd_sys = sys.subdivide(&d);
            sd_sys.check_flat(d.complex()).unwrap();
            for q in 0..x.dim().unwrap() {
                for s in x.faces(q) {
                    let mut c = Cochain::zero(q);
                    c.set(s.clone(), vec![1]);
                    let a = subdivision_pullback(&d, &sys, &coboundary(&x, &sys, &c)).unwrap();
                    let b = coboundary(d.complex(), &sd_sys, &subdivision_pullback(&d, &sys, &c).unwrap());
                    assert_eq!(a, b, "on {s}");
                }
            }
            // and it is an isomorphism on cohomology
            let top = x.dim().unwrap();
            let h = cohomology(&x, &sys, top).unwrap();
            for r in &h.representatives {
                let p = subdivision_pullback(&d, &sys, r).unwrap();
                assert!(solve_coboundary(d.complex(), &sd_sys, &p).unwrap().is_none());
            }
        }
    }

    #[test]
    fn pullback_along_circle_covers() {
        let x = corpus::circle(3);
        let sys = constant(3);
        let generator = &cohomology(&x, &sys, 1).unwrap().representatives[0];
        for k in [1usize, 2, 3] {
            let y = corpus::circle(3 * k);
            let f = SimplicialMap::new(y.clone(), x.clone(), (0..3 * k).map(|v| (v, v % 3)).collect()).unwrap();
            let p = pullback(&f, &sys, generator).unwrap();
            let ysys = sys.pullback(&f);
            assert_eq!(coboundary(&y, &ysys, &p), Cochain::zero(2));
            let w = solve_coboundary(&y, &ysys, &p).unwrap();
            // dies exactly when 3 divides the degree
            assert_eq!(w.is_some(), k == 3, "degree {k}");
            if k == 1 {
                assert_eq!(&p, generator);
            }
        }
    }
}
