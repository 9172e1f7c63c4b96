use symexpr::{Atom, Expression};

use super::{equation, for_each_index, index_label, named_solution, zero_test, Outcome};
use crate::linalg::Matrix;
use crate::linsolve::LinearSystem;
use crate::metric::Metric;
use crate::tensor::Tensor;

/// `ℰ^e_a = g^{ef} E_{af}`, indexed `[e][a]`.
fn endomorphism(e: &Tensor, inverse: &Matrix) -> Matrix {
    let n = e.dim();
    (0..n)
        .map(|up| {
            (0..n)
                .map(|a| {
                    (0..n)
                        .filter(|&f| !inverse[up][f].is_zero())
                        .map(|f| &inverse[up][f] * &e.get(&[a, f]))
                        .sum()
                })
                .collect()
        })
        .collect()
}

/// `Σ_cyc(a1,a2,a3) D(ℰX_{a1}, X_x, X_{a2}, X_{a3}) = 0`.
pub fn compatibility(d: &Tensor, e: &Tensor, metric: &Metric) -> Outcome {
    let n = d.dim();
    let op = endomorphism(e, metric.inverse());
    zero_test("residual", n, 4, |idx| {
        let (a, x) = ([idx[0], idx[1], idx[2]], idx[3]);
        let mut acc = Expression::zero();
        for s in 0..3 {
            let (a1, a2, a3) = (a[s], a[(s + 1) % 3], a[(s + 2) % 3]);
            for (up, row) in op.iter().enumerate() {
                if row[a1].is_zero() {
                    continue;
                }
                if let Some((v, sign)) = d.get_ref(&[up, x, a2, a3]) {
                    let t = &row[a1] * v;
                    acc = if sign > 0 { &acc + &t } else { &acc - &t };
                }
            }
        }
        acc
    })
}

/// All `E` compatible with `D`, affine in free parameters `a_ij`.
#[derive(Clone, Debug, PartialEq)]
pub struct CompatibleFamily {
    /// `entries[i][j] = E_ij`.
    pub entries: Matrix,
    /// Free parameter names, each a constant atom appearing in `entries`.
    pub parameters: Vec<String>,
}

impl CompatibleFamily {
    pub fn parameter_count(&self) -> usize {
        self.parameters.len()
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.entries.len();
        (0..n).all(|i| (0..i).all(|j| self.entries[i][j] == self.entries[j][i]))
    }

    pub fn parameter(&self, name: &str) -> Expression {
        Expression::atom(Atom::constant(name))
    }
}

/// Unknown order: strictly lower entries first so that they become pivots
/// and the free parameters are the upper-triangular `a_ij`, `i ≤ j`.
fn unknown_order(n: usize) -> Vec<(usize, usize)> {
    let lower = (0..n).flat_map(|i| (0..i).map(move |j| (i, j)));
    let upper = (0..n).flat_map(|i| (i..n).map(move |j| (i, j)));
    lower.chain(upper).collect()
}

/// Solves the compatibility equations over a general (not necessarily
/// symmetric) unknown `E`.
pub fn compatible_space(d: &Tensor, metric: &Metric) -> CompatibleFamily {
    let n = d.dim();
    let ginv = metric.inverse();
    let order = unknown_order(n);
    let column = |i: usize, j: usize| order.iter().position(|&p| p == (i, j)).expect("every entry has a column");
    // raised[f][x][b][c] = Σ_e g^{ef} D_{e x b c}
    let raised: Vec<Expression> = {
        let mut v = Vec::with_capacity(n.pow(4));
        for_each_index(n, 4, |i| {
            let (f, x, b, c) = (i[0], i[1], i[2], i[3]);
            v.push((0..n).filter(|&e| !ginv[e][f].is_zero()).map(|e| &ginv[e][f] * &d.get(&[e, x, b, c])).sum());
        });
        v
    };
    let at = |f: usize, x: usize, b: usize, c: usize| &raised[((f * n + x) * n + b) * n + c];
    let mut system = LinearSystem::new(n * n);
    for_each_index(n, 4, |idx| {
        let (a, x) = ([idx[0], idx[1], idx[2]], idx[3]);
        let mut coefficients = vec![Expression::zero(); n * n];
        for s in 0..3 {
            let (a1, a2, a3) = (a[s], a[(s + 1) % 3], a[(s + 2) % 3]);
            for f in 0..n {
                let c = at(f, x, a2, a3);
                if !c.is_zero() {
                    let k = column(a1, f);
                    coefficients[k] = &coefficients[k] + c;
                }
            }
        }
        system.push(equation(coefficients, Expression::zero(), idx));
    });
    let names: Vec<String> = order.iter().map(|&(i, j)| format!("a{}{}", i + 1, j + 1)).collect();
    let solution = system.solve();
    let values = named_solution(&solution, &names).expect("homogeneous systems are consistent");
    let mut entries = vec![vec![Expression::zero(); n]; n];
    for (k, &(i, j)) in order.iter().enumerate() {
        entries[i][j] = values[k].clone();
    }
    let crate::linsolve::Solution::Consistent { free, .. } = solution else {
        unreachable!()
    };
    let mut parameters: Vec<String> = free.iter().map(|&k| names[k].clone()).collect();
    parameters.sort_by_key(|p| order[names.iter().position(|q| q == p).expect("named")]);
    CompatibleFamily { entries, parameters }
}

pub(crate) fn family_label(i: usize, j: usize) -> String {
    format!("E{}", index_label(&[i, j]))
}
