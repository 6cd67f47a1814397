//! Exact linear programming over the rationals: a dense two-phase simplex
//! with Bland's pivoting rule. Bland's rule never cycles, and rational
//! arithmetic means feasibility and strict positivity are decided exactly,
//! with no tolerances anywhere.

use crate::pathalg::Coef;
use num_traits::{One, Zero};

/// Outcome of [`maximize`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpResult {
    Optimal { value: Coef, solution: Vec<Coef> },
    Infeasible,
    Unbounded,
}

struct Tableau {
    /// m rows of length n+1 (the last column is the right-hand side).
    rows: Vec<Vec<Coef>>,
    basis: Vec<usize>,
    n: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> &Coef {
        &self.rows[i][self.n]
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let scale = self.rows[row][col].clone().recip();
        for x in self.rows[row].iter_mut() {
            *x *= &scale;
        }
        for i in 0..self.rows.len() {
            if i == row || self.rows[i][col].is_zero() {
                continue;
            }
            let factor = self.rows[i][col].clone();
            for j in 0..=self.n {
                let delta = &factor * &self.rows[row][j];
                self.rows[i][j] -= delta;
            }
        }
        self.basis[row] = col;
    }

    /// Reduced cost of column `j` under objective `c` (maximization form).
    fn reduced_cost(&self, c: &[Coef], j: usize) -> Coef {
        let mut r = c[j].clone();
        for (i, &bi) in self.basis.iter().enumerate() {
            if !c[bi].is_zero() {
                r -= &c[bi] * &self.rows[i][j];
            }
        }
        r
    }

    fn objective(&self, c: &[Coef]) -> Coef {
        let mut z = Coef::zero();
        for (i, &bi) in self.basis.iter().enumerate() {
            z += &c[bi] * self.rhs(i);
        }
        z
    }

    /// Bland's rule: entering column = smallest index with positive reduced
    /// cost; leaving row = smallest ratio, ties broken by smallest basic
    /// variable. Returns false when already optimal, errors on an unbounded
    /// ray.
    fn improve(&mut self, c: &[Coef], cols: usize) -> Result<bool, ()> {
        let enter = (0..cols).find(|&j| self.reduced_cost(c, j) > Coef::zero());
        let Some(col) = enter else {
            return Ok(false);
        };
        let mut leave: Option<usize> = None;
        let mut best: Option<Coef> = None;
        for i in 0..self.rows.len() {
            if self.rows[i][col] > Coef::zero() {
                let ratio = self.rhs(i) / &self.rows[i][col];
                let better = match &best {
                    None => true,
                    Some(b) => {
                        ratio < *b || (ratio == *b && self.basis[i] < self.basis[leave.unwrap()])
                    }
                };
                if better {
                    best = Some(ratio);
                    leave = Some(i);
                }
            }
        }
        match leave {
            Some(row) => {
                self.pivot(row, col);
                Ok(true)
            }
            None => Err(()),
        }
    }
}

/// Maximizes c·x subject to A·x = b, x ≥ 0, in exact rational arithmetic.
///
/// `a` holds one row per constraint; rows may be redundant (phase one drops
/// them). Panics only on shape mismatches, never on numeric conditions.
pub fn maximize(c: &[Coef], a: &[Vec<Coef>], b: &[Coef]) -> LpResult {
    let m = a.len();
    let n = c.len();
    assert_eq!(b.len(), m, "one right-hand side per constraint row");
    for row in a {
        assert_eq!(row.len(), n, "constraint row length matches the objective");
    }

    // Phase one: artificial variables n..n+m form the starting basis;
    // minimizing their sum (as a maximization of the negated sum) decides
    // feasibility.
    let mut t = Tableau {
        rows: Vec::with_capacity(m),
        basis: (n..n + m).collect(),
        n: n + m,
    };
    for i in 0..m {
        let flip = b[i] < Coef::zero();
        let mut row: Vec<Coef> = Vec::with_capacity(n + m + 1);
        for x in &a[i] {
            row.push(if flip { -x.clone() } else { x.clone() });
        }
        for k in 0..m {
            row.push(if k == i { Coef::one() } else { Coef::zero() });
        }
        row.push(if flip { -b[i].clone() } else { b[i].clone() });
        t.rows.push(row);
    }
    let phase1: Vec<Coef> = (0..n + m)
        .map(|j| if j < n { Coef::zero() } else { -Coef::one() })
        .collect();
    loop {
        match t.improve(&phase1, n + m) {
            Ok(true) => {}
            Ok(false) => break,
            Err(()) => unreachable!("phase-one objective is bounded by zero"),
        }
    }
    if t.objective(&phase1) < Coef::zero() {
        return LpResult::Infeasible;
    }

    // Drive leftover artificials out of the basis; a row with no real
    // coefficient left is a redundant constraint and is dropped.
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= n {
            match (0..n).find(|&j| !t.rows[i][j].is_zero()) {
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
    // Erase the artificial columns so phase two cannot re-enter them.
    for row in t.rows.iter_mut() {
        for j in n..n + m {
            row[j] = Coef::zero();
        }
    }

    let phase2: Vec<Coef> = c
        .iter()
        .cloned()
        .chain(std::iter::repeat_with(Coef::zero).take(m))
        .collect();
    loop {
        match t.improve(&phase2, n) {
            Ok(true) => {}
            Ok(false) => break,
            Err(()) => return LpResult::Unbounded,
        }
    }
    let mut solution = vec![Coef::zero(); n];
    for (i, &bi) in t.basis.iter().enumerate() {
        if bi < n {
            solution[bi] = t.rhs(i).clone();
        }
    }
    LpResult::Optimal {
        value: t.objective(&phase2),
        solution,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Coef {
        Coef::new(n.into(), d.into())
    }

    fn z(n: i64) -> Coef {
        Coef::from_integer(n.into())
    }

    #[test]
    fn bounded_optimum_with_slacks() {
        // max 3x + 2y subject to x ≤ 2, y ≤ 3, x + y ≤ 4 (slack form).
        let c = vec![z(3), z(2), z(0), z(0), z(0)];
        let a = vec![
            vec![z(1), z(0), z(1), z(0), z(0)],
            vec![z(0), z(1), z(0), z(1), z(0)],
            vec![z(1), z(1), z(0), z(0), z(1)],
        ];
        let b = vec![z(2), z(3), z(4)];
        match maximize(&c, &a, &b) {
            LpResult::Optimal { value, solution } => {
                assert_eq!(value, z(10));
                assert_eq!(solution[0], z(2));
                assert_eq!(solution[1], z(2));
            }
            other => panic!("expected optimum, got {:?}", other),
        }
    }

    #[test]
    fn exact_fractional_answer() {
        // max x subject to 3x + s = 2.
        let c = vec![z(1), z(0)];
        let a = vec![vec![z(3), z(1)]];
        let b = vec![z(2)];
        match maximize(&c, &a, &b) {
            LpResult::Optimal { value, .. } => assert_eq!(value, q(2, 3)),
            other => panic!("expected optimum, got {:?}", other),
        }
    }

    #[test]
    fn detects_infeasible_and_unbounded() {
        // x + y = 2 and x + y = 3 cannot both hold.
        let c = vec![z(0), z(0)];
        let a = vec![vec![z(1), z(1)], vec![z(1), z(1)]];
        assert_eq!(maximize(&c, &a, &[z(2), z(3)]), LpResult::Infeasible);

        // max x with x appearing in no constraint.
        let c = vec![z(1), z(0)];
        let a = vec![vec![z(0), z(1)]];
        assert_eq!(maximize(&c, &a, &[z(1)]), LpResult::Unbounded);
    }

    #[test]
    fn redundant_rows_and_negative_rhs() {
        // The same hyperplane twice, once with flipped sign; optimum on it.
        let c = vec![z(1), z(1)];
        let a = vec![vec![z(1), z(1)], vec![z(-1), z(-1)]];
        let b = vec![z(5), z(-5)];
        match maximize(&c, &a, &b) {
            LpResult::Optimal { value, .. } => assert_eq!(value, z(5)),
            other => panic!("expected optimum, got {:?}", other),
        }
    }

    #[test]
    fn degenerate_vertex_terminates() {
        // x − y = 0, x + y = 0 pins the origin; Bland's rule must not cycle.
        let c = vec![z(1), z(1)];
        let a = vec![vec![z(1), z(-1)], vec![z(1), z(1)]];
        let b = vec![z(0), z(0)];
        match maximize(&c, &a, &b) {
            LpResult::Optimal { value, solution } => {
                assert_eq!(value, z(0));
                assert!(solution.iter().all(|x| x.is_zero()));
            }
            other => panic!("expected optimum, got {:?}", other),
        }
    }
}
