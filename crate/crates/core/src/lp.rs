//! Exact two-phase simplex method for the tiny linear programs that arise
//! in relative-interior intersection tests.
//!
//! Problems are in standard form: maximize `c·x` subject to `A x = b`,
//! `x >= 0`. Bland's rule guarantees termination.

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal { value: Rational, x: Vec<Rational> },
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    obj: Vec<Rational>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = Rational::one() / &self.rows[r][c];
        for v in self.rows[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (v, p) in row.iter_mut().zip(&pivot_row) {
                    if !p.is_zero() {
                        *v -= &f * p;
                    }
                }
            }
        }
        if !self.obj[c].is_zero() {
            let f = self.obj[c].clone();
            for (v, p) in self.obj.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Sets the objective row for maximizing `cost · x` given the current basis.
    fn set_objective(&mut self, cost: &[Rational]) {
        let mut obj: Vec<Rational> = (0..=self.width)
            .map(|j| cost.get(j).cloned().unwrap_or_else(Rational::zero))
            .collect();
        obj[self.width] = Rational::zero();
        for (r, &b) in self.basis.iter().enumerate() {
            let cb = cost.get(b).cloned().unwrap_or_else(Rational::zero);
            if !cb.is_zero() {
                for (v, t) in obj.iter_mut().zip(&self.rows[r]) {
                    *v -= &cb * t;
                }
            }
        }
        self.obj = obj;
    }

    /// Runs simplex iterations on columns `< allowed`. Returns false if unbounded.
    fn optimize(&mut self, allowed: usize) -> bool {
        loop {
            let Some(enter) = (0..allowed).find(|&j| self.obj[j].is_positive()) else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for (r, row) in self.rows.iter().enumerate() {
                if row[enter].is_positive() {
                    let ratio = &row[self.width] / &row[enter];
                    let better = match &best {
                        None => true,
                        Some((br, bv)) => {
                            ratio < *bv || (ratio == *bv && self.basis[r] < self.basis[*br])
                        }
                    };
                    if better {
                        best = Some((r, ratio));
                    }
                }
            }
            let Some((leave, _)) = best else {
                return false;
            };
            self.pivot(leave, enter);
        }
    }
}

/// Maximizes `c·x` subject to `a x = b`, `x >= 0`.
pub fn maximize(a: &[Vec<Rational>], b: &[Rational], c: &[Rational]) -> LpOutcome {
    let m = a.len();
    let n = c.len();
    let width = n + m;
    let mut rows = Vec::with_capacity(m);
    for (i, (row, rhs)) in a.iter().zip(b).enumerate() {
        let flip = rhs.is_negative();
        let mut t = vec![Rational::zero(); width + 1];
        for (j, v) in row.iter().enumerate() {
            t[j] = if flip { -v } else { v.clone() };
        }
        t[n + i] = Rational::one();
        t[width] = if flip { -rhs } else { rhs.clone() };
        rows.push(t);
    }
    let mut tab = Tableau {
        rows,
        obj: Vec::new(),
        basis: (n..n + m).collect(),
        width,
    };

    // Phase 1: drive the artificial variables to zero.
    let mut phase1 = vec![Rational::zero(); width];
    for v in &mut phase1[n..] {
        *v = -Rational::one();
    }
    tab.set_objective(&phase1);
    tab.optimize(width);
    if tab.obj[width].is_positive() {
        // obj[width] holds minus the phase-1 objective value.
        return LpOutcome::Infeasible;
    }
    // Pivot remaining artificial variables out of the basis, dropping
    // redundant rows.
    let mut r = 0;
    while r < tab.rows.len() {
        if tab.basis[r] >= n {
            if let Some(j) = (0..n).find(|&j| !tab.rows[r][j].is_zero()) {
                tab.pivot(r, j);
                r += 1;
            } else {
                tab.rows.remove(r);
                tab.basis.remove(r);
            }
        } else {
            r += 1;
        }
    }
    for row in tab.rows.iter_mut() {
        for v in &mut row[n..width] {
            *v = Rational::zero();
        }
    }

    tab.set_objective(c);
    if !tab.optimize(n) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![Rational::zero(); n];
    for (r, &bv) in tab.basis.iter().enumerate() {
        if bv < n {
            x[bv] = tab.rows[r][width].clone();
        }
    }
    let value = crate::rational::dot(c, &x);
    LpOutcome::Optimal { value, x }
}

/// Finds a point common to the relative interiors of two simplices given
/// by their vertex coordinates, or `None` when the relative interiors are
/// disjoint.
pub fn relint_common_point(s1: &[&[Rational]], s2: &[&[Rational]]) -> Option<Vec<Rational>> {
    let dim = s1[0].len();
    let a = s1.len();
    let b = s2.len();
    // Variables: λ' (a), μ' (b), s. With λ = λ' + s, μ = μ' + s.
    let nv = a + b + 1;
    let mut rows = Vec::new();
    let mut rhs = Vec::new();

    let mut row = vec![Rational::zero(); nv];
    for v in &mut row[..a] {
        *v = Rational::one();
    }
    row[nv - 1] = Rational::from_integer(a.into());
    rows.push(row);
    rhs.push(Rational::one());

    let mut row = vec![Rational::zero(); nv];
    for v in &mut row[a..a + b] {
        *v = Rational::one();
    }
    row[nv - 1] = Rational::from_integer(b.into());
    rows.push(row);
    rhs.push(Rational::one());

    for k in 0..dim {
        let mut row = vec![Rational::zero(); nv];
        let mut s_coeff = Rational::zero();
        for (i, p) in s1.iter().enumerate() {
            row[i] = p[k].clone();
            s_coeff += &p[k];
        }
        for (j, q) in s2.iter().enumerate() {
            row[a + j] = -q[k].clone();
            s_coeff -= &q[k];
        }
        row[nv - 1] = s_coeff;
        rows.push(row);
        rhs.push(Rational::zero());
    }

    let mut cost = vec![Rational::zero(); nv];
    cost[nv - 1] = Rational::one();
    match maximize(&rows, &rhs, &cost) {
        LpOutcome::Optimal { value, x } if value.is_positive() => {
            let s = &x[nv - 1];
            let mut point = vec![Rational::zero(); dim];
            for (i, p) in s1.iter().enumerate() {
                let lambda = &x[i] + s;
                for (acc, c) in point.iter_mut().zip(p.iter()) {
                    *acc += &lambda * c;
                }
            }
            Some(point)
        }
        _ => None,
    }
}
