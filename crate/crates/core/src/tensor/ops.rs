//! Index raising, traces, covariant derivatives and Kulkarni-Nomizu products.

use symexpr::Expression;

use super::{decode, Generator, Symmetry, Tensor, TensorError};
use crate::linalg::Matrix;

/// Levi-Civita connection coefficients `Γ^l_{ij}`, symmetric in `i, j`.
#[derive(Clone, Debug)]
pub struct Connection {
    dim: usize,
    symbols: Vec<Expression>,
}

impl Connection {
    pub fn new(dim: usize, symbols: Vec<Expression>) -> Self {
        assert_eq!(symbols.len(), dim * dim * dim);
        Connection { dim, symbols }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `Γ^l_{ij}`.
    pub fn get(&self, l: usize, i: usize, j: usize) -> &Expression {
        &self.symbols[(l * self.dim + i) * self.dim + j]
    }

    pub fn is_zero(&self) -> bool {
        self.symbols.iter().all(Expression::is_zero)
    }
}

fn sum_products<'a, I>(terms: I) -> Expression
where
    I: Iterator<Item = (&'a Expression, Expression)>,
{
    let mut acc = Expression::zero();
    for (a, b) in terms {
        if !a.is_zero() && !b.is_zero() {
            acc = &acc + &(a * &b);
        }
    }
    acc
}

/// Dense table of `T^a_{i2...ik} = g^{af} T_{f i2...ik}`, row-major.
pub fn raise_first_index(t: &Tensor, inverse: &Matrix) -> Vec<Expression> {
    let n = t.dim();
    let k = t.valence();
    assert!(k >= 1);
    let total = n.pow(k as u32);
    let mut idx = vec![0; k];
    (0..total)
        .map(|flat| {
            decode(flat, n, &mut idx);
            let a = idx[0];
            let mut lowered = idx.clone();
            sum_products((0..n).map(|f| {
                lowered[0] = f;
                (&inverse[a][f], t.get(&lowered))
            }))
        })
        .collect()
}

pub fn trace(t: &Tensor, inverse: &Matrix) -> Expression {
    assert_eq!(t.valence(), 2);
    let n = t.dim();
    let mut acc = Expression::zero();
    for i in 0..n {
        for j in 0..n {
            if !inverse[i][j].is_zero() {
                if let Some((v, s)) = t.get_ref(&[i, j]) {
                    let term = &inverse[i][j] * v;
                    acc = if s > 0 { &acc + &term } else { &acc - &term };
                }
            }
        }
    }
    acc
}

/// `(∇T)_{i1...ik,x}` with the derivative slot last.
pub fn covariant_derivative(t: &Tensor, connection: &Connection, coordinates: &[impl AsRef<str> + Sync]) -> Tensor {
    let n = t.dim();
    let k = t.valence();
    Tensor::from_fn(n, k + 1, t.symmetry().clone(), |idx| {
        let x = idx[k];
        let base = &idx[..k];
        let mut acc = match t.get_ref(base) {
            Some((v, s)) => {
                let d = v.differentiate(coordinates[x].as_ref());
                if s > 0 {
                    d
                } else {
                    -d
                }
            }
            None => Expression::zero(),
        };
        let mut shifted = base.to_vec();
        for slot in 0..k {
            let original = base[slot];
            for e in 0..n {
                let gamma = connection.get(e, x, original);
                if gamma.is_zero() {
                    continue;
                }
                shifted[slot] = e;
                if let Some((v, s)) = t.get_ref(&shifted) {
                    let term = gamma * v;
                    acc = if s > 0 { &acc - &term } else { &acc + &term };
                }
            }
            shifted[slot] = original;
        }
        acc
    })
}

/// `(A∧E)_{abcd} = A_ad E_bc + A_bc E_ad - A_ac E_bd - A_bd E_ac`.
pub fn kulkarni_nomizu(a: &Tensor, e: &Tensor) -> Result<Tensor, TensorError> {
    if a.valence() != 2 || e.valence() != 2 || a.dim() != e.dim() {
        return Err(TensorError::ShapeMismatch(a.dim(), a.valence(), e.dim(), e.valence()));
    }
    if !a.is_symmetric_matrix() || !e.is_symmetric_matrix() {
        return Err(TensorError::NotSymmetric);
    }
    let n = a.dim();
    let am = a.to_matrix();
    let em = e.to_matrix();
    Ok(Tensor::from_fn(n, 4, Symmetry::riemann(), |i| {
        let (p, q, r, s) = (i[0], i[1], i[2], i[3]);
        let mut acc = Expression::zero();
        for (x, y, sign) in [((p, s), (q, r), 1), ((q, r), (p, s), 1), ((p, r), (q, s), -1), ((q, s), (p, r), -1)] {
            let (u, v) = (&am[x.0][x.1], &em[y.0][y.1]);
            if u.is_zero() || v.is_zero() {
                continue;
            }
            let t = u * v;
            acc = if sign > 0 { &acc + &t } else { &acc - &t };
        }
        acc
    }))
}

/// The (0,4) tensor of the endomorphism `X ∧_E Y`, lowered the same way as
/// the curvature tensor (endomorphism pair last):
/// `(∧_E)_{abcd} = E_bc g_ad - E_bd g_ac`. With `E = g` this is the Gaussian
/// tensor `½ g∧g`.
pub fn endomorphism_wedge(e: &Tensor, metric: &Tensor) -> Tensor {
    let n = e.dim();
    Tensor::from_fn(n, 4, Symmetry::new(vec![Generator::Antisymmetric(2, 3)]), |i| {
        let (a, b, c, d) = (i[0], i[1], i[2], i[3]);
        let first = &e.get(&[b, c]) * &metric.get(&[a, d]);
        let second = &e.get(&[b, d]) * &metric.get(&[a, c]);
        &first - &second
    })
}

/// `(E^2)_{ab} = E_ac g^{cd} E_db`, the square of the associated endomorphism.
pub fn endomorphism_square(e: &Tensor, inverse: &Matrix) -> Tensor {
    let n = e.dim();
    let em = e.to_matrix();
    Tensor::from_fn(n, 2, Symmetry::symmetric_pair(), |i| {
        let mut acc = Expression::zero();
        for c in 0..n {
            if em[i[0]][c].is_zero() {
                continue;
            }
            for d in 0..n {
                if inverse[c][d].is_zero() || em[d][i[1]].is_zero() {
                    continue;
                }
                acc = &acc + &(&(&em[i[0]][c] * &inverse[c][d]) * &em[d][i[1]]);
            }
        }
        acc
    })
}

