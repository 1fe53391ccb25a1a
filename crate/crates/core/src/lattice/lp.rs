//! Dense two-phase simplex over exact rationals, Bland's rule throughout.
//!
//! Sized for the height-lifting problems here: tens of variables and
//! constraints. Solves `minimize c.x subject to A x = b, x >= 0`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type BigQ = BigRational;

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<BigQ>, value: BigQ },
    Infeasible,
    Unbounded,
}

pub fn bq(n: i64) -> BigQ {
    BigQ::from_integer(BigInt::from(n))
}

struct Tableau {
    rows: Vec<Vec<BigQ>>,
    /// Reduced costs; last entry is minus the objective value.
    obj: Vec<BigQ>,
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            *v /= &p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    if !pv.is_zero() {
                        *v -= &f * pv;
                    }
                }
            }
        }
        if !self.obj[c].is_zero() {
            let f = self.obj[c].clone();
            for (v, pv) in self.obj.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Runs Bland's rule over columns `< allowed`. Returns false if unbounded.
    fn optimize(&mut self, allowed: usize) -> bool {
        loop {
            let Some(enter) = (0..allowed).find(|&j| self.obj[j].is_negative()) else {
                return true;
            };
            let rhs = self.ncols;
            let mut best: Option<(BigQ, usize, usize)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[enter].is_positive() {
                    let ratio = &row[rhs] / &row[enter];
                    let better = match &best {
                        None => true,
                        Some((br, _, bvar)) => {
                            ratio < *br || (ratio == *br && self.basis[i] < *bvar)
                        }
                    };
                    if better {
                        best = Some((ratio, i, self.basis[i]));
                    }
                }
            }
            match best {
                None => return false,
                Some((_, r, _)) => self.pivot(r, enter),
            }
        }
    }
}

/// Minimizes `c.x` over `{x >= 0 : A x = b}`.
pub fn minimize(c: &[BigQ], a: &[Vec<BigQ>], b: &[BigQ]) -> LpOutcome {
    let m = a.len();
    let n = c.len();
    let ncols = n + m;
    let mut rows = Vec::with_capacity(m);
    for (i, ai) in a.iter().enumerate() {
        assert_eq!(ai.len(), n, "constraint row {i} has wrong width");
        let neg = b[i].is_negative();
        let mut row: Vec<BigQ> = ai
            .iter()
            .map(|v| if neg { -v.clone() } else { v.clone() })
            .collect();
        row.extend((0..m).map(|k| if k == i { BigQ::one() } else { BigQ::zero() }));
        row.push(if neg { -b[i].clone() } else { b[i].clone() });
        rows.push(row);
    }
    // phase 1 objective: sum of artificials, expressed in non-basic columns
    let mut obj = vec![BigQ::zero(); ncols + 1];
    for row in &rows {
        for j in 0..n {
            obj[j] -= &row[j];
        }
        obj[ncols] -= &row[ncols];
    }
    let mut t = Tableau {
        rows,
        obj,
        basis: (n..n + m).collect(),
        ncols,
    };
    t.optimize(ncols);
    if !t.obj[ncols].is_zero() {
        return LpOutcome::Infeasible;
    }
    // Drive remaining artificials out of the basis; drop redundant rows.
    let mut r = 0;
    while r < t.rows.len() {
        if t.basis[r] >= n {
            if let Some(j) = (0..n).find(|&j| !t.rows[r][j].is_zero()) {
                t.pivot(r, j);
                r += 1;
            } else {
                t.rows.remove(r);
                t.basis.remove(r);
            }
        } else {
            r += 1;
        }
    }
    // phase 2
    let mut obj = vec![BigQ::zero(); ncols + 1];
    obj[..n].clone_from_slice(c);
    for (i, row) in t.rows.iter().enumerate() {
        let cb = if t.basis[i] < n {
            c[t.basis[i]].clone()
        } else {
            BigQ::zero()
        };
        if !cb.is_zero() {
            for (o, v) in obj.iter_mut().zip(row) {
                *o -= &cb * v;
            }
        }
    }
    t.obj = obj;
    if !t.optimize(n) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![BigQ::zero(); n];
    for (i, &bv) in t.basis.iter().enumerate() {
        if bv < n {
            x[bv] = t.rows[i][ncols].clone();
        }
    }
    let value = -t.obj[ncols].clone();
    LpOutcome::Optimal { x, value }
}
