//! Dense matrix helpers over the expression field.

use symexpr::Expression;

pub type Matrix = Vec<Vec<Expression>>;

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Expression::one() } else { Expression::zero() }).collect())
        .collect()
}

pub fn mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    (0..b.len())
                        .filter(|&k| !a[i][k].is_zero() && !b[k][j].is_zero())
                        .map(|k| &a[i][k] * &b[k][j])
                        .sum()
                })
                .collect()
        })
        .collect()
}

/// Determinant by Gaussian elimination with nonzero pivots.
pub fn determinant(m: &Matrix) -> Expression {
    let n = m.len();
    let mut a = m.clone();
    let mut det = Expression::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Expression::zero();
        };
        if p != col {
            a.swap(p, col);
            det = -det;
        }
        let pivot = a[col][col].clone();
        det = &det * &pivot;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &pivot;
            for c in col..n {
                if !a[col][c].is_zero() {
                    let t = &f * &a[col][c];
                    a[r][c] = &a[r][c] - &t;
                }
            }
        }
    }
    det
}

/// Inverse by Gauss-Jordan elimination, `None` when singular.
pub fn inverse(m: &Matrix) -> Option<Matrix> {
    let n = m.len();
    let mut a = m.clone();
    let mut inv = identity(n);
    for col in 0..n {
        let p = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(p, col);
        inv.swap(p, col);
        let pivot = a[col][col].recip().expect("pivot is nonzero");
        for c in 0..n {
            a[col][c] = &a[col][c] * &pivot;
            inv[col][c] = &inv[col][c] * &pivot;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for c in 0..n {
                if !a[col][c].is_zero() {
                    let t = &f * &a[col][c];
                    a[r][c] = &a[r][c] - &t;
                }
                if !inv[col][c].is_zero() {
                    let t = &f * &inv[col][c];
                    inv[r][c] = &inv[r][c] - &t;
                }
            }
        }
    }
    Some(inv)
}
