//! Dense two-phase simplex over exact rationals.
//!
//! Pivoting follows Bland's rule (lowest-index entering column, ties in the
//! ratio test broken by lowest-index basic variable), so runs terminate and
//! are reproducible.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

pub fn rational(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cmp {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub cmp: Cmp,
    pub rhs: Rational,
}

/// `maximize objective · x` subject to the constraints and `x >= 0`.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    pub num_vars: usize,
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<Rational>, value: Rational },
    Infeasible,
    Unbounded,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum ColumnKind {
    Original,
    Slack,
    Artificial,
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    kinds: Vec<ColumnKind>,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.rows[row][col].clone();
        for v in self.rows[row].iter_mut() {
            *v = &*v / &p;
        }
        self.rhs[row] = &self.rhs[row] / &p;
        for r in 0..self.rows.len() {
            if r == row || self.rows[r][col].is_zero() {
                continue;
            }
            let factor = self.rows[r][col].clone();
            for c in 0..self.rows[r].len() {
                if !self.rows[row][c].is_zero() {
                    let delta = &factor * &self.rows[row][c];
                    self.rows[r][c] -= delta;
                }
            }
            let delta = &factor * &self.rhs[row];
            self.rhs[r] -= delta;
        }
        self.basis[row] = col;
    }

    /// Runs simplex for `maximize cost · x` over the allowed columns.
    /// Returns `false` if the objective is unbounded.
    fn optimize(&mut self, cost: &[Rational], allowed: impl Fn(usize) -> bool) -> bool {
        let cols = self.kinds.len();
        loop {
            let entering = (0..cols).filter(|&c| allowed(c)).find(|&c| {
                if self.basis.contains(&c) {
                    return false;
                }
                let mut reduced = cost[c].clone();
                for (r, &b) in self.basis.iter().enumerate() {
                    if !cost[b].is_zero() && !self.rows[r][c].is_zero() {
                        reduced -= &cost[b] * &self.rows[r][c];
                    }
                }
                reduced.is_positive()
            });
            let Some(col) = entering else {
                return true;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for r in 0..self.rows.len() {
                if !self.rows[r][col].is_positive() {
                    continue;
                }
                let ratio = &self.rhs[r] / &self.rows[r][col];
                let better = match &leave {
                    None => true,
                    Some((best_r, best)) => {
                        ratio < *best || (ratio == *best && self.basis[r] < self.basis[*best_r])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            match leave {
                None => return false,
                Some((row, _)) => self.pivot(row, col),
            }
        }
    }

    fn value(&self, cost: &[Rational]) -> Rational {
        self.basis
            .iter()
            .zip(&self.rhs)
            .fold(Rational::zero(), |acc, (&b, v)| acc + &cost[b] * v)
    }
}

impl LinearProgram {
    pub fn solve(&self) -> LpOutcome {
        let n = self.num_vars;
        let m = self.constraints.len();

        // Normalise to nonnegative right-hand sides; `>= 0` rows become `<= 0`
        // so their slack can start in the basis.
        let normalized: Vec<(Vec<Rational>, Cmp, Rational)> = self
            .constraints
            .iter()
            .map(|c| {
                let flip = c.rhs.is_negative() || (c.rhs.is_zero() && c.cmp == Cmp::Ge);
                if flip {
                    let cmp = match c.cmp {
                        Cmp::Le => Cmp::Ge,
                        Cmp::Ge => Cmp::Le,
                        Cmp::Eq => Cmp::Eq,
                    };
                    (c.coeffs.iter().map(|v| -v).collect(), cmp, -&c.rhs)
                } else {
                    (c.coeffs.clone(), c.cmp, c.rhs.clone())
                }
            })
            .collect();

        let slack_count = normalized.iter().filter(|(_, cmp, _)| *cmp != Cmp::Eq).count();
        let artificial_count = normalized.iter().filter(|(_, cmp, _)| *cmp != Cmp::Le).count();
        let cols = n + slack_count + artificial_count;
        let mut kinds = vec![ColumnKind::Original; n];
        kinds.extend(std::iter::repeat_n(ColumnKind::Slack, slack_count));
        kinds.extend(std::iter::repeat_n(ColumnKind::Artificial, artificial_count));

        let mut rows = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let (mut next_slack, mut next_art) = (n, n + slack_count);
        for (coeffs, cmp, b) in normalized {
            let mut row = vec![Rational::zero(); cols];
            row[..n].clone_from_slice(&coeffs);
            match cmp {
                Cmp::Le => {
                    row[next_slack] = Rational::one();
                    basis.push(next_slack);
                    next_slack += 1;
                }
                Cmp::Ge => {
                    row[next_slack] = -Rational::one();
                    next_slack += 1;
                    row[next_art] = Rational::one();
                    basis.push(next_art);
                    next_art += 1;
                }
                Cmp::Eq => {
                    row[next_art] = Rational::one();
                    basis.push(next_art);
                    next_art += 1;
                }
            }
            rows.push(row);
            rhs.push(b);
        }
        let mut t = Tableau {
            rows,
            rhs,
            basis,
            kinds,
        };

        if artificial_count > 0 {
            let phase1: Vec<Rational> = t
                .kinds
                .iter()
                .map(|k| {
                    if *k == ColumnKind::Artificial {
                        -Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect();
            t.optimize(&phase1, |_| true);
            if !t.value(&phase1).is_zero() {
                return LpOutcome::Infeasible;
            }
            // Drive remaining (zero-valued) artificials out of the basis.
            let mut r = 0;
            while r < t.rows.len() {
                if t.kinds[t.basis[r]] != ColumnKind::Artificial {
                    r += 1;
                    continue;
                }
                let replacement = (0..cols)
                    .find(|&c| t.kinds[c] != ColumnKind::Artificial && !t.rows[r][c].is_zero());
                match replacement {
                    Some(c) => {
                        t.pivot(r, c);
                        r += 1;
                    }
                    None => {
                        // Redundant row.
                        t.rows.remove(r);
                        t.rhs.remove(r);
                        t.basis.remove(r);
                    }
                }
            }
        }

        let mut cost = vec![Rational::zero(); cols];
        cost[..n].clone_from_slice(&self.objective);
        let kinds = t.kinds.clone();
        if !t.optimize(&cost, |c| kinds[c] != ColumnKind::Artificial) {
            return LpOutcome::Unbounded;
        }
        let mut x = vec![Rational::zero(); n];
        for (r, &b) in t.basis.iter().enumerate() {
            if b < n {
                x[b] = t.rhs[r].clone();
            }
        }
        let value = t.value(&cost);
        LpOutcome::Optimal { x, value }
    }
}
