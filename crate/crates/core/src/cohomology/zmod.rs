//! Linear algebra over `Z/e`: Smith form with transforms, kernels, cokernels
//! and solving. Every finite module here is killed by `e`, so integer
//! computations can be done modulo `e`.

use num_integer::Integer;

pub(crate) type Matrix = Vec<Vec<u64>>;

#[derive(Clone, Copy, Debug)]
pub(crate) struct Ring {
    pub e: u64,
}

impl Ring {
    pub fn new(e: u64) -> Self {
        assert!(e >= 1 && e < (1 << 31), "modulus out of range");
        Ring { e }
    }

    pub fn reduce(&self, x: i64) -> u64 {
        x.rem_euclid(self.e as i64) as u64
    }

    fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.e
    }

    fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.e
    }

    fn neg(&self, a: u64) -> u64 {
        (self.e - a) % self.e
    }

    /// Additive order of `a` in `Z/e`.
    pub fn order(&self, a: u64) -> u64 {
        self.e / a.gcd(&self.e)
    }

    fn unit_inverse(&self, a: u64) -> Option<u64> {
        let g = (a as i64).extended_gcd(&(self.e as i64));
        (g.gcd == 1).then(|| self.reduce(g.x))
    }

    /// `dst <- x dst + y src`, entrywise.
    fn combine(&self, dst: &mut [u64], x: u64, src: &[u64], y: u64) {
        for (d, s) in dst.iter_mut().zip(src) {
            if *s != 0 || (x != 1 && *d != 0) {
                *d = (self.mul(*d, x) + self.mul(*s, y)) % self.e;
            }
        }
    }

    /// Replaces rows `(p, q)` by `(s p + t q, u p + v q)`.
    fn mix(&self, m: &mut [Vec<u64>], p: usize, q: usize, [s, t, u, v]: [u64; 4]) {
        for j in 0..m[p].len() {
            let (a, b) = (m[p][j], m[q][j]);
            if a == 0 && b == 0 {
                continue;
            }
            m[p][j] = self.add(self.mul(s, a), self.mul(t, b));
            m[q][j] = self.add(self.mul(u, a), self.mul(v, b));
        }
    }

    /// Unimodular `[[s, t], [u, v]]` sending `(a, b)` to `(g, 0)`, with its inverse.
    fn bezout(&self, a: u64, b: u64) -> ([u64; 4], [u64; 4]) {
        if a != 0 && b % a == 0 {
            let q = b / a;
            return ([1, 0, self.neg(q % self.e), 1], [1, 0, q % self.e, 1]);
        }
        let g = (a as i64).extended_gcd(&(b as i64));
        let (s, t) = (self.reduce(g.x), self.reduce(g.y));
        let (ag, bg) = ((a as i64 / g.gcd) as u64 % self.e, (b as i64 / g.gcd) as u64 % self.e);
        // inverse of [[s, t], [-b/g, a/g]] is [[a/g, -t], [b/g, s]]
        ([s, t, self.neg(bg), ag], [ag, self.neg(t), bg, s])
    }
}

/// `u a v = d` with `d` diagonal (not necessarily a divisor chain).
pub(crate) struct Smith {
    pub diagonal: Vec<u64>,
    pub u: Matrix,
    pub u_inv: Matrix,
    /// Transpose of `v`.
    pub vt: Matrix,
}

fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| {
            let mut r = vec![0; n];
            r[i] = 1;
            r
        })
        .collect()
}

fn transpose(a: &Matrix, cols: usize) -> Matrix {
    (0..cols).map(|j| a.iter().map(|r| r[j]).collect()).collect()
}

pub(crate) fn smith(ring: Ring, a: &Matrix, cols: usize) -> Smith {
    let rows = a.len();
    let mut m: Matrix = a.iter().map(|r| r.iter().map(|x| x % ring.e).collect()).collect();
    // column operations are done as row operations on the transpose
    let mut u = identity(rows);
    let mut u_inv = identity(rows);
    let mut vt = identity(cols);
    let mut diagonal = Vec::new();
    for t in 0..rows.min(cols) {
        // prefer unit pivots, then small ones
        let mut best: Option<(u64, usize, usize)> = None;
        'search: for (i, row) in m.iter().enumerate().skip(t) {
            for (j, x) in row.iter().enumerate().skip(t) {
                if *x != 0 {
                    let key = x.gcd(&ring.e);
                    if best.map_or(true, |(k, _, _)| key < k) {
                        best = Some((key, i, j));
                        if key == 1 {
                            break 'search;
                        }
                    }
                }
            }
        }
        let Some((_, pi, pj)) = best else { break };
        m.swap(t, pi);
        u.swap(t, pi);
        for r in u_inv.iter_mut() {
            r.swap(t, pi);
        }
        for r in m.iter_mut() {
            r.swap(t, pj);
        }
        vt.swap(t, pj);
        loop {
            if let Some(inv) = ring.unit_inverse(m[t][t]) {
                // normalize the pivot to 1
                let scale = |r: &mut Vec<u64>| r.iter_mut().for_each(|x| *x = ring.mul(*x, inv));
                scale(&mut m[t]);
                scale(&mut u[t]);
                let back = ring.unit_inverse(inv).expect("unit");
                for r in u_inv.iter_mut() {
                    r[t] = ring.mul(r[t], back);
                }
            }
            let mut dirty = false;
            for i in t + 1..rows {
                let b = m[i][t];
                if b == 0 {
                    continue;
                }
                let (op, inv) = ring.bezout(m[t][t], b);
                ring.mix(&mut m, t, i, op);
                ring.mix(&mut u, t, i, op);
                // u_inv <- u_inv * op^-1, acting on columns t and i
                let [s, tt, uu, v] = inv;
                for r in u_inv.iter_mut() {
                    let (a, c) = (r[t], r[i]);
                    r[t] = ring.add(ring.mul(a, s), ring.mul(c, uu));
                    r[i] = ring.add(ring.mul(a, tt), ring.mul(c, v));
                }
            }
            let pivot_row = m[t].clone();
            for j in t + 1..cols {
                let b = pivot_row[j];
                if b == 0 {
                    continue;
                }
                let a = m[t][t];
                let (op, _) = ring.bezout(a, b);
                let [s, tt, uu, v] = op;
                // columns (t, j) <- (s t + tt j, uu t + v j)
                for r in m.iter_mut() {
                    let (x, y) = (r[t], r[j]);
                    if x == 0 && y == 0 {
                        continue;
                    }
                    r[t] = ring.add(ring.mul(s, x), ring.mul(tt, y));
                    r[j] = ring.add(ring.mul(uu, x), ring.mul(v, y));
                }
                ring.mix(&mut vt, t, j, op);
                if (t + 1..rows).any(|i| m[i][t] != 0) {
                    dirty = true;
                }
            }
            if !dirty {
                break;
            }
        }
        diagonal.push(m[t][t]);
    }
    Smith {
        diagonal,
        u,
        u_inv,
        vt,
    }
}

pub(crate) fn mat_vec(ring: Ring, a: &Matrix, x: &[u64]) -> Vec<u64> {
    a.iter()
        .map(|r| r.iter().zip(x).fold(0, |acc, (p, q)| if *p == 0 || *q == 0 { acc } else { ring.add(acc, ring.mul(*p, *q)) }))
        .collect()
}

/// Generators of `{x : a x = 0}`, as vectors.
pub(crate) fn kernel(ring: Ring, a: &Matrix, cols: usize) -> Vec<Vec<u64>> {
    let s = smith(ring, a, cols);
    let mut gens = Vec::new();
    for j in 0..cols {
        // d y = 0 forces y into (e / gcd(d, e))
        let factor = s.diagonal.get(j).map_or(1, |d| ring.order(*d));
        if factor == ring.e {
            continue;
        }
        let v: Vec<u64> = s.vt[j].iter().map(|x| ring.mul(*x, factor)).collect();
        if v.iter().any(|x| *x != 0) {
            gens.push(v);
        }
    }
    gens
}

/// A solution of `a x = b`, if one exists.
pub(crate) fn solve(ring: Ring, a: &Matrix, cols: usize, b: &[u64]) -> Option<Vec<u64>> {
    let s = smith(ring, a, cols);
    let c = mat_vec(ring, &s.u, b);
    let mut y = vec![0u64; cols];
    for (i, ci) in c.iter().enumerate() {
        let d = s.diagonal.get(i).copied().unwrap_or(0);
        if d == 0 {
            if *ci != 0 {
                return None;
            }
            continue;
        }
        let g = d.gcd(&ring.e);
        if ci % g != 0 {
            return None;
        }
        let m = ring.e / g;
        let inv = if m == 1 {
            0
        } else {
            let r = ((d / g) as i64).extended_gcd(&(m as i64));
            r.x.rem_euclid(m as i64) as u64
        };
        y[i] = (ci / g) % m * inv % m;
    }
    let mut x = vec![0u64; cols];
    for (j, yj) in y.iter().enumerate() {
        if *yj != 0 {
            ring.combine(&mut x, 1, &s.vt[j], *yj);
        }
    }
    Some(x)
}

/// Quotient `span(gens) / span(rels)` inside `(Z/e)^n`, where every relation
/// lies in the span of the generators: cyclic orders with representatives.
pub(crate) fn quotient(ring: Ring, gens: &[Vec<u64>], rels: &[Vec<u64>], n: usize) -> Vec<(u64, Vec<u64>)> {
    let m = gens.len();
    if m == 0 {
        return Vec::new();
    }
    // relations among the generators: kernel of [G | -R], first m coordinates
    let mut block: Matrix = vec![vec![0; m + rels.len()]; n];
    for (j, g) in gens.iter().enumerate() {
        for i in 0..n {
            block[i][j] = g[i];
        }
    }
    for (j, r) in rels.iter().enumerate() {
        for i in 0..n {
            block[i][m + j] = ring.neg(r[i]);
        }
    }
    let mut syzygies: Vec<Vec<u64>> = kernel(ring, &block, m + rels.len())
        .into_iter()
        .map(|v| v[..m].to_vec())
        .collect();
    // the order relations of (Z/e)^m itself are implicit
    syzygies.retain(|v| v.iter().any(|x| *x != 0));
    let s_mat: Matrix = if syzygies.is_empty() {
        vec![vec![0; 0]; m]
    } else {
        transpose(&syzygies, m)
    };
    let smith_s = smith(ring, &s_mat, syzygies.len());
    let mut out = Vec::new();
    for i in 0..m {
        let d = smith_s.diagonal.get(i).copied().unwrap_or(0);
        // Z/e / (d) = Z/gcd(d, e)
        let order = d.gcd(&ring.e);
        if order <= 1 {
            continue;
        }
        // basis vector i of the cokernel pulls back to column i of u^-1
        let coeffs: Vec<u64> = smith_s.u_inv.iter().map(|r| r[i]).collect();
        let mut rep = vec![0u64; n];
        for (g, c) in gens.iter().zip(&coeffs) {
            if *c != 0 {
                ring.combine(&mut rep, 1, g, *c);
            }
        }
        out.push((order, rep));
    }
    out
}
