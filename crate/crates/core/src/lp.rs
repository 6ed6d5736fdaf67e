//! Exact linear programming over the rationals: dense simplex tableau with
//! Bland's rule and a phase-one start from artificial variables.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

type Q = BigRational;

#[derive(Clone, Debug)]
pub(crate) struct Tableau {
    /// `rows[i]` holds the coefficients followed by the right-hand side.
    rows: Vec<Vec<Q>>,
    basis: Vec<usize>,
    vars: usize,
}

#[derive(Debug, PartialEq, Eq)]
pub(crate) enum Outcome {
    Optimal(Q),
    Unbounded,
}

impl Tableau {
    fn rhs(&self, i: usize) -> &Q {
        &self.rows[i][self.vars]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for x in self.rows[r].iter_mut() {
            *x /= &p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Maximizes `cost . x` from the current feasible basis.
    fn optimize(&mut self, cost: &[Q]) -> Outcome {
        loop {
            let entering = (0..self.vars).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let mut rc = cost[j].clone();
                for (i, b) in self.basis.iter().enumerate() {
                    if !self.rows[i][j].is_zero() {
                        rc -= &cost[*b] * &self.rows[i][j];
                    }
                }
                rc.is_positive()
            });
            let Some(j) = entering else {
                let mut value = Q::zero();
                for (i, b) in self.basis.iter().enumerate() {
                    value += &cost[*b] * self.rhs(i);
                }
                return Outcome::Optimal(value);
            };
            let mut leave: Option<(usize, Q)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][j];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / a;
                let better = match &leave {
                    None => true,
                    Some((l, best)) => ratio < *best || (ratio == *best && self.basis[i] < self.basis[*l]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, j),
                None => return Outcome::Unbounded,
            }
        }
    }

    /// A basic feasible solution of `a x = b, x >= 0`, or `None` if infeasible.
    pub(crate) fn feasible(a: &[Vec<Q>], b: &[Q]) -> Option<Tableau> {
        let m = a.len();
        let n = a.first().map_or(0, Vec::len);
        let mut rows = Vec::with_capacity(m);
        for (row, rhs) in a.iter().zip(b) {
            let flip = rhs.is_negative();
            let mut r: Vec<Q> = row.iter().map(|x| if flip { -x } else { x.clone() }).collect();
            r.extend((0..m).map(|_| Q::zero()));
            r.push(if flip { -rhs } else { rhs.clone() });
            rows.push(r);
        }
        for (i, r) in rows.iter_mut().enumerate() {
            r[n + i] = Q::one();
        }
        let mut t = Tableau {
            rows,
            basis: (n..n + m).collect(),
            vars: n + m,
        };
        let cost: Vec<Q> = (0..n + m).map(|j| if j < n { Q::zero() } else { -Q::one() }).collect();
        match t.optimize(&cost) {
            Outcome::Optimal(v) if v.is_zero() => {}
            _ => return None,
        }
        // Drive artificials out of the basis; drop redundant rows.
        let mut i = 0;
        while i < t.rows.len() {
            if t.basis[i] >= n {
                match (0..n).find(|j| !t.rows[i][*j].is_zero()) {
                    Some(j) => t.pivot(i, j),
                    None => {
                        t.rows.remove(i);
                        t.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
        for r in t.rows.iter_mut() {
            let rhs = r.pop().expect("rhs");
            r.truncate(n);
            r.push(rhs);
        }
        t.vars = n;
        Some(t)
    }

    pub(crate) fn maximize(&self, cost: &[Q]) -> Outcome {
        self.clone().optimize(cost)
    }

    /// Current basic solution.
    pub(crate) fn solution(&self) -> Vec<Q> {
        let mut x = vec![Q::zero(); self.vars];
        for (i, b) in self.basis.iter().enumerate() {
            x[*b] = self.rhs(i).clone();
        }
        x
    }
}

/// Dimension of `{x >= 0 : a x = b}` and the coordinates that are positive
/// somewhere on it, or `None` if it is empty.
pub(crate) fn polyhedron_dimension(a: &[Vec<Q>], b: &[Q]) -> Option<(usize, Vec<usize>)> {
    let t = Tableau::feasible(a, b)?;
    let n = a.first().map_or(0, Vec::len);
    let start = t.solution();
    let mut free: Vec<usize> = Vec::new();
    for j in 0..n {
        let positive = start[j].is_positive() || {
            let mut cost = vec![Q::zero(); n];
            cost[j] = Q::one();
            match t.maximize(&cost) {
                Outcome::Optimal(v) => v.is_positive(),
                Outcome::Unbounded => true,
            }
        };
        if positive {
            free.push(j);
        }
    }
    let restricted: Vec<Vec<Q>> = a.iter().map(|row| free.iter().map(|j| row[*j].clone()).collect()).collect();
    Some((free.len() - crate::complex::rational_rank(restricted), free))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64) -> Q {
        Q::from_integer(BigInt::from(n))
    }

    fn dim(a: &[Vec<Q>], b: &[Q]) -> Option<usize> {
        polyhedron_dimension(a, b).map(|(d, _)| d)
    }

    #[test]
    fn simplex_dimension() {
        // x + y + z = 1
        assert_eq!(dim(&[vec![q(1), q(1), q(1)]], &[q(1)]), Some(2));
        // plus x = y: a segment
        assert_eq!(
            dim(&[vec![q(1), q(1), q(1)], vec![q(1), q(-1), q(0)]], &[q(1), q(0)]),
            Some(1)
        );
        // plus z = 1: only (0, 0, 1)
        assert_eq!(
            dim(&[vec![q(1), q(1), q(1)], vec![q(0), q(0), q(1)]], &[q(1), q(1)]),
            Some(0)
        );
    }

    #[test]
    fn infeasible_and_redundant() {
        assert_eq!(dim(&[vec![q(1), q(1)]], &[q(-1)]), None);
        assert_eq!(
            dim(&[vec![q(1), q(1)], vec![q(2), q(2)]], &[q(1), q(2)]),
            Some(1)
        );
        assert_eq!(dim(&[vec![q(1), q(1)], vec![q(1), q(1)]], &[q(1), q(2)]), None);
    }

    #[test]
    fn optimum() {
        // max x + 2y on x + y = 1
        let t = Tableau::feasible(&[vec![q(1), q(1)]], &[q(1)]).unwrap();
        assert_eq!(t.maximize(&[q(1), q(2)]), Outcome::Optimal(q(2)));
    }
}
