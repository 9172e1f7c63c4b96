use symexpr::{Expression, Monomial, Poly, Rational};

use crate::linalg::Matrix;
use crate::linsolve::rank;
use crate::metric::Metric;
use crate::tensor::Tensor;

/// `M = β η ⊗ η`.
#[derive(Clone, Debug, PartialEq)]
pub struct RankOne {
    pub beta: Expression,
    pub eta: Vec<Expression>,
}

impl RankOne {
    /// `g^{ij} η_i η_j`.
    pub fn norm_squared(&self, inverse: &Matrix) -> Expression {
        let mut acc = Expression::zero();
        for (i, a) in self.eta.iter().enumerate() {
            for (j, b) in self.eta.iter().enumerate() {
                if !a.is_zero() && !b.is_zero() && !inverse[i][j].is_zero() {
                    acc = &acc + &(&(a * b) * &inverse[i][j]);
                }
            }
        }
        acc
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum RicciClass {
    /// `S = α g`.
    Einstein { alpha: Expression },
    /// `S = β η ⊗ η`.
    RicciSimple(RankOne),
    /// `S = α g + β Π ⊗ Π`.
    QuasiEinstein { alpha: Expression, rest: RankOne },
    None,
}

/// Square root of the largest square monomial dividing every term of `p`.
fn square_root_of_content(p: &Poly) -> Expression {
    let mut terms = p.terms();
    let Some((first, _)) = terms.next() else {
        return Expression::one();
    };
    let content = terms.fold(first.clone(), |g, (m, _)| g.gcd(m));
    let root = content
        .factors()
        .iter()
        .fold(Monomial::one(), |acc, (atom, e)| acc.mul(&Monomial::atom_pow(atom.clone(), e / 2)));
    Expression::from_poly(Poly::term(Rational::from_integer(1.into()), root))
}

/// Factors a symmetric matrix of rank one as `β η ⊗ η`, anchored at the
/// first nonzero diagonal entry and scaled so no radicals appear.
pub fn rank_one_factor(m: &Matrix) -> Option<RankOne> {
    let i = (0..m.len()).find(|&i| !m[i][i].is_zero())?;
    let mii = &m[i][i];
    let scale = &square_root_of_content(mii.numerator()) / &square_root_of_content(mii.denominator());
    let eta: Vec<Expression> = m[i].iter().map(|v| &(v * &scale) / mii).collect();
    let beta = mii / &(&scale * &scale);
    let ok = (0..m.len()).all(|j| (0..m.len()).all(|k| m[j][k] == &(&beta * &eta[j]) * &eta[k]));
    ok.then_some(RankOne { beta, eta })
}

fn shifted(s: &Matrix, g: &Matrix, alpha: &Expression) -> Matrix {
    s.iter()
        .zip(g)
        .map(|(sr, gr)| sr.iter().zip(gr).map(|(a, b)| a - &(alpha * b)).collect())
        .collect()
}

/// Candidate values of α making every 2×2 minor of `S - α g` vanish, from
/// minors whose α² terms can be eliminated linearly.
fn alpha_candidates(s: &Matrix, g: &Matrix) -> Vec<Expression> {
    let n = s.len();
    let mut quadratics: Vec<[Expression; 3]> = Vec::new();
    for i in 0..n {
        for k in i + 1..n {
            for j in 0..n {
                for l in j + 1..n {
                    // det [[S_ij - α g_ij, S_il - α g_il], [S_kj - α g_kj, S_kl - α g_kl]]
                    let c2 = &(&g[i][j] * &g[k][l]) - &(&g[i][l] * &g[k][j]);
                    let c1 = &(&(&g[i][l] * &s[k][j]) + &(&s[i][l] * &g[k][j])) - &(&(&g[i][j] * &s[k][l]) + &(&s[i][j] * &g[k][l]));
                    let c0 = &(&s[i][j] * &s[k][l]) - &(&s[i][l] * &s[k][j]);
                    if !(c2.is_zero() && c1.is_zero() && c0.is_zero()) {
                        quadratics.push([c2, c1, c0]);
                    }
                }
            }
        }
    }
    let mut out = Vec::new();
    let mut linear = |b: Expression, c: Expression| {
        if !b.is_zero() {
            let a = -&(&c / &b);
            if !out.contains(&a) {
                out.push(a);
            }
        }
    };
    for q in &quadratics {
        if q[0].is_zero() {
            linear(q[1].clone(), q[2].clone());
        }
    }
    let with_square: Vec<&[Expression; 3]> = quadratics.iter().filter(|q| !q[0].is_zero()).collect();
    if let Some(p) = with_square.first() {
        for q in &with_square[1..] {
            linear(&(&q[0] * &p[1]) - &(&p[0] * &q[1]), &(&q[0] * &p[2]) - &(&p[0] * &q[2]));
        }
    }
    out
}

pub fn ricci_decompose(s: &Tensor, metric: &Metric) -> RicciClass {
    let n = metric.dim();
    let sm = s.to_matrix();
    let g = metric.matrix();
    if s.is_zero() {
        return RicciClass::Einstein { alpha: Expression::zero() };
    }
    let kappa = crate::tensor::trace(s, metric.inverse());
    let alpha = &kappa / &Expression::integer(n as i64);
    if shifted(&sm, g, &alpha).iter().flatten().all(Expression::is_zero) {
        return RicciClass::Einstein { alpha };
    }
    if rank(&sm) <= 1 {
        if let Some(f) = rank_one_factor(&sm) {
            return RicciClass::RicciSimple(f);
        }
    }
    for alpha in std::iter::once(alpha).chain(alpha_candidates(&sm, g)) {
        let m = shifted(&sm, g, &alpha);
        if rank(&m) <= 1 {
            if let Some(rest) = rank_one_factor(&m) {
                return RicciClass::QuasiEinstein { alpha, rest };
            }
        }
    }
    RicciClass::None
}
