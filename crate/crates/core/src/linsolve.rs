//! Linear systems with expression coefficients.
//!
//! Equations are reduced against the current rows as they arrive, so the
//! usual case (thousands of component equations, a handful of unknowns,
//! almost all redundant) costs one reduction per equation. Every stored row
//! keeps the label of the equation that introduced it.

use symexpr::Expression;

/// `Σ coefficients[j] x_j + constant = 0`, labelled by where it came from.
#[derive(Clone, Debug)]
pub struct Equation {
    pub coefficients: Vec<Expression>,
    pub constant: Expression,
    pub origin: String,
}

impl Equation {
    pub fn is_trivial(&self) -> bool {
        self.constant.is_zero() && self.coefficients.iter().all(Expression::is_zero)
    }

    /// Residual after substituting `values` for the unknowns.
    pub fn residual(&self, values: &[Expression]) -> Expression {
        let mut acc = self.constant.clone();
        for (c, v) in self.coefficients.iter().zip(values) {
            if !c.is_zero() && !v.is_zero() {
                acc = &acc + &(c * v);
            }
        }
        acc
    }

    /// The single unknown this equation mentions and its forced value.
    pub fn forced_value(&self) -> Option<(usize, Expression)> {
        let mut nonzero = self.coefficients.iter().enumerate().filter(|(_, c)| !c.is_zero());
        let (j, c) = nonzero.next()?;
        if nonzero.next().is_some() {
            return None;
        }
        Some((j, -&(&self.constant / c)))
    }
}

#[derive(Clone, Debug)]
struct Row {
    pivot: usize,
    coefficients: Vec<Expression>,
    constant: Expression,
    origin: Equation,
}

/// A new equation that reduced to `0 = residual` with `residual ≠ 0`.
#[derive(Clone, Debug)]
pub struct Conflict {
    pub equation: Equation,
    pub residual: Expression,
    /// Original equations of the rows used in the reduction.
    pub against: Vec<Equation>,
}

#[derive(Clone, Debug)]
pub enum Solution {
    /// `x = particular + Σ_k t_k basis[k]`, the parameters `t_k` standing for
    /// the unknowns listed in `free`.
    Consistent {
        particular: Vec<Expression>,
        free: Vec<usize>,
        basis: Vec<Vec<Expression>>,
    },
    Inconsistent(Box<Conflict>),
}

impl Solution {
    pub fn is_consistent(&self) -> bool {
        matches!(self, Solution::Consistent { .. })
    }

    /// The general solution with `params[k]` substituted for the k-th free unknown.
    pub fn general(&self, params: &[Expression]) -> Option<Vec<Expression>> {
        let Solution::Consistent { particular, basis, .. } = self else {
            return None;
        };
        let mut x = particular.clone();
        for (b, t) in basis.iter().zip(params) {
            for (xi, bi) in x.iter_mut().zip(b) {
                if !bi.is_zero() {
                    *xi = &*xi + &(bi * t);
                }
            }
        }
        Some(x)
    }
}

#[derive(Clone, Debug)]
pub struct LinearSystem {
    unknowns: usize,
    rows: Vec<Row>,
    conflict: Option<Box<Conflict>>,
    equations: usize,
}

impl LinearSystem {
    pub fn new(unknowns: usize) -> Self {
        LinearSystem {
            unknowns,
            rows: Vec::new(),
            conflict: None,
            equations: 0,
        }
    }

    pub fn unknowns(&self) -> usize {
        self.unknowns
    }

    pub fn equation_count(&self) -> usize {
        self.equations
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_inconsistent(&self) -> bool {
        self.conflict.is_some()
    }

    /// Adds an equation; after the first conflict further equations are ignored.
    pub fn push(&mut self, equation: Equation) {
        assert_eq!(equation.coefficients.len(), self.unknowns);
        self.equations += 1;
        if self.conflict.is_some() || equation.is_trivial() {
            return;
        }
        let mut coefficients = equation.coefficients.clone();
        let mut constant = equation.constant.clone();
        let mut used = Vec::new();
        for (k, row) in self.rows.iter().enumerate() {
            let f = coefficients[row.pivot].clone();
            if f.is_zero() {
                continue;
            }
            used.push(k);
            for (c, r) in coefficients.iter_mut().zip(&row.coefficients) {
                if !r.is_zero() {
                    *c = &*c - &(&f * r);
                }
            }
            if !row.constant.is_zero() {
                constant = &constant - &(&f * &row.constant);
            }
        }
        let Some(pivot) = coefficients.iter().position(|c| !c.is_zero()) else {
            if !constant.is_zero() {
                self.conflict = Some(Box::new(Conflict {
                    against: used.iter().map(|&k| self.rows[k].origin.clone()).collect(),
                    equation,
                    residual: constant,
                }));
            }
            return;
        };
        let inv = coefficients[pivot].recip().expect("pivot is nonzero");
        for c in coefficients.iter_mut() {
            if !c.is_zero() {
                *c = &*c * &inv;
            }
        }
        constant = &constant * &inv;
        for row in &mut self.rows {
            let f = row.coefficients[pivot].clone();
            if f.is_zero() {
                continue;
            }
            for (c, r) in row.coefficients.iter_mut().zip(&coefficients) {
                if !r.is_zero() {
                    *c = &*c - &(&f * r);
                }
            }
            if !constant.is_zero() {
                row.constant = &row.constant - &(&f * &constant);
            }
        }
        self.rows.push(Row {
            pivot,
            coefficients,
            constant,
            origin: equation,
        });
    }

    pub fn solve(&self) -> Solution {
        if let Some(c) = &self.conflict {
            return Solution::Inconsistent(c.clone());
        }
        let n = self.unknowns;
        let mut particular = vec![Expression::zero(); n];
        for row in &self.rows {
            particular[row.pivot] = -&row.constant;
        }
        let pivots: Vec<usize> = self.rows.iter().map(|r| r.pivot).collect();
        let free: Vec<usize> = (0..n).filter(|j| !pivots.contains(j)).collect();
        let basis = free
            .iter()
            .map(|&f| {
                let mut v = vec![Expression::zero(); n];
                v[f] = Expression::one();
                for row in &self.rows {
                    v[row.pivot] = -&row.coefficients[f];
                }
                v
            })
            .collect();
        Solution::Consistent { particular, free, basis }
    }
}

/// Rank of a matrix by elimination.
pub fn rank(m: &[Vec<Expression>]) -> usize {
    let cols = m.first().map_or(0, Vec::len);
    let mut system = LinearSystem::new(cols);
    for (i, row) in m.iter().enumerate() {
        system.push(Equation {
            coefficients: row.clone(),
            constant: Expression::zero(),
            origin: i.to_string(),
        });
    }
    system.rank()
}
