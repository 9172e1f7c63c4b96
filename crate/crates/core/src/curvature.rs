//! The Levi-Civita connection and the curvature tensors built from it.
//!
//! Sign conventions, fixed against a known component table:
//!
//! * `R^a_{bcd} = ∂_c Γ^a_{bd} - ∂_d Γ^a_{bc} + Γ^a_{ce} Γ^e_{bd} - Γ^a_{de} Γ^e_{bc}`
//!   and `R_{abcd} = g_{ae} R^e_{bcd}`;
//! * `S_{bc} = g^{ad} R_{abcd}` (contraction of the first and last slots);
//! * `κ = g^{bc} S_{bc}`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use symexpr::{Atom, Expression};

use crate::metric::Metric;
use crate::operators::{dot_action, tachibana};
use crate::parse::{TensorAtom, TensorName};
use crate::tensor::{covariant_derivative, endomorphism_wedge, kulkarni_nomizu, trace, Connection, Symmetry, Tensor, TensorError};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CurvatureError {
    #[error("{tensor} needs dimension at least 3, chart has {dim}")]
    DimensionTooSmall { tensor: &'static str, dim: usize },
    #[error("{0} is not a symmetric (0,2) tensor")]
    NotSymmetric(String),
    #[error("{0} must be a (0,{1}) tensor")]
    WrongValence(String, usize),
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

pub fn christoffel(metric: &Metric) -> Connection {
    let n = metric.dim();
    let g = metric.matrix();
    let ginv = metric.inverse();
    let coords = metric.chart().coordinates();
    // dg[k][i][j] = ∂_k g_ij
    let dg: Vec<Vec<Vec<Expression>>> = (0..n)
        .map(|k| (0..n).map(|i| (0..n).map(|j| g[i][j].differentiate(&coords[k])).collect()).collect())
        .collect();
    // Γ_{m,ij} = ½ (∂_i g_jm + ∂_j g_im - ∂_m g_ij)
    let half = Expression::rational(1, 2);
    let lowered: Vec<Expression> = (0..n * n * n)
        .into_par_iter()
        .map(|flat| {
            let (m, i, j) = (flat / (n * n), (flat / n) % n, flat % n);
            let s = &(&dg[i][j][m] + &dg[j][i][m]) - &dg[m][i][j];
            &s * &half
        })
        .collect();
    let symbols: Vec<Expression> = (0..n * n * n)
        .into_par_iter()
        .map(|flat| {
            let (l, i, j) = (flat / (n * n), (flat / n) % n, flat % n);
            let mut acc = Expression::zero();
            for m in 0..n {
                let low = &lowered[(m * n + i) * n + j];
                if !ginv[l][m].is_zero() && !low.is_zero() {
                    acc = &acc + &(&ginv[l][m] * low);
                }
            }
            acc
        })
        .collect();
    Connection::new(n, symbols)
}

pub fn riemann(connection: &Connection, metric: &Metric) -> Tensor {
    let n = metric.dim();
    let g = metric.matrix();
    let coords = metric.chart().coordinates();
    let gamma = |a: usize, b: usize, c: usize| connection.get(a, b, c);
    // R^e_{bcd} for all e, b and c < d.
    let mixed: HashMap<(usize, usize, usize, usize), Expression> = (0..n * n * n * n)
        .into_par_iter()
        .filter_map(|flat| {
            let (e, b, c, d) = (flat / (n * n * n), (flat / (n * n)) % n, (flat / n) % n, flat % n);
            if c >= d {
                return None;
            }
            let mut acc = &gamma(e, b, d).differentiate(&coords[c]) - &gamma(e, b, c).differentiate(&coords[d]);
            for f in 0..n {
                let (p, q) = (gamma(e, c, f), gamma(f, b, d));
                if !p.is_zero() && !q.is_zero() {
                    acc = &acc + &(p * q);
                }
                let (p, q) = (gamma(e, d, f), gamma(f, b, c));
                if !p.is_zero() && !q.is_zero() {
                    acc = &acc - &(p * q);
                }
            }
            (!acc.is_zero()).then_some(((e, b, c, d), acc))
        })
        .collect();
    Tensor::from_fn(n, 4, Symmetry::riemann(), |i| {
        let (a, b, c, d) = (i[0], i[1], i[2], i[3]);
        let mut acc = Expression::zero();
        for e in 0..n {
            if let Some(v) = mixed.get(&(e, b, c, d)) {
                if !g[a][e].is_zero() {
                    acc = &acc + &(&g[a][e] * v);
                }
            }
        }
        acc
    })
}

pub fn ricci(r: &Tensor, metric: &Metric) -> Tensor {
    let n = metric.dim();
    let ginv = metric.inverse();
    Tensor::from_fn(n, 2, Symmetry::symmetric_pair(), |i| {
        let mut acc = Expression::zero();
        for a in 0..n {
            for d in 0..n {
                if ginv[a][d].is_zero() {
                    continue;
                }
                if let Some((v, s)) = r.get_ref(&[a, i[0], i[1], d]) {
                    let t = &ginv[a][d] * v;
                    acc = if s > 0 { &acc + &t } else { &acc - &t };
                }
            }
        }
        acc
    })
}

/// `T = c^4/(8 π G) (S - κ/2 g)` with `c`, `G`, `pi` opaque constants.
pub fn energy_momentum(s: &Tensor, kappa: &Expression, metric: &Metric) -> Tensor {
    let c = Expression::atom(Atom::constant("c"));
    let big_g = Expression::atom(Atom::constant("G"));
    let pi = Expression::atom(Atom::constant("pi"));
    let factor = &c.pow(4).expect("positive power") / &(&(&Expression::integer(8) * &pi) * &big_g);
    let trace_free = s.add_scaled(&(kappa * &Expression::rational(-1, 2)), metric.tensor());
    trace_free.scale(&factor)
}

/// Lazily computed curvature data of one metric.
pub struct CurvatureBundle {
    metric: Metric,
    connection: OnceLock<Connection>,
    riemann: OnceLock<Arc<Tensor>>,
    ricci: OnceLock<Arc<Tensor>>,
    kappa: OnceLock<Expression>,
    cache: Mutex<HashMap<TensorAtom, Arc<Tensor>>>,
}

impl CurvatureBundle {
    pub fn new(metric: Metric) -> Self {
        CurvatureBundle {
            metric,
            connection: OnceLock::new(),
            riemann: OnceLock::new(),
            ricci: OnceLock::new(),
            kappa: OnceLock::new(),
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    pub fn dim(&self) -> usize {
        self.metric.dim()
    }

    pub fn connection(&self) -> &Connection {
        self.connection.get_or_init(|| christoffel(&self.metric))
    }

    pub fn riemann(&self) -> Arc<Tensor> {
        self.riemann.get_or_init(|| Arc::new(riemann(self.connection(), &self.metric))).clone()
    }

    pub fn ricci(&self) -> Arc<Tensor> {
        self.ricci.get_or_init(|| Arc::new(ricci(&self.riemann(), &self.metric))).clone()
    }

    pub fn scalar_curvature(&self) -> Expression {
        self.kappa.get_or_init(|| trace(&self.ricci(), self.metric.inverse())).clone()
    }

    pub fn named(&self, name: TensorName) -> Result<Arc<Tensor>, CurvatureError> {
        self.evaluate(&TensorAtom::Named(name))
    }

    pub fn nabla(&self, name: TensorName) -> Result<Arc<Tensor>, CurvatureError> {
        self.evaluate(&TensorAtom::nabla(TensorAtom::Named(name)))
    }

    /// Evaluates a tensor expression, caching every intermediate.
    pub fn evaluate(&self, atom: &TensorAtom) -> Result<Arc<Tensor>, CurvatureError> {
        if let Some(t) = self.cache.lock().expect("cache lock").get(atom) {
            return Ok(t.clone());
        }
        let value = Arc::new(self.compute(atom)?);
        let mut cache = self.cache.lock().expect("cache lock");
        Ok(cache.entry(atom.clone()).or_insert(value).clone())
    }

    fn compute(&self, atom: &TensorAtom) -> Result<Tensor, CurvatureError> {
        let n = self.dim();
        let nf = n as i64;
        Ok(match atom {
            TensorAtom::Named(name) => match name {
                TensorName::Metric => self.metric.tensor().clone(),
                TensorName::Riemann => (*self.riemann()).clone(),
                TensorName::Ricci => (*self.ricci()).clone(),
                TensorName::Gaussian => {
                    let gg = kulkarni_nomizu(self.metric.tensor(), self.metric.tensor())?;
                    gg.scale(&Expression::rational(1, 2))
                }
                TensorName::Projective => {
                    let wedge = endomorphism_wedge(&self.ricci(), self.metric.tensor());
                    self.riemann().add_scaled(&Expression::rational(-1, nf - 1), &wedge)
                }
                TensorName::Conharmonic => {
                    if n <= 2 {
                        return Err(CurvatureError::DimensionTooSmall { tensor: "K", dim: n });
                    }
                    let gs = kulkarni_nomizu(self.metric.tensor(), &self.ricci())?;
                    self.riemann().add_scaled(&Expression::rational(-1, nf - 2), &gs)
                }
                TensorName::Concircular => {
                    let gauss = self.named(TensorName::Gaussian)?;
                    let c = &self.scalar_curvature() * &Expression::rational(-1, nf * (nf - 1));
                    self.riemann().add_scaled(&c, &gauss)
                }
                TensorName::Weyl => {
                    if n <= 2 {
                        return Err(CurvatureError::DimensionTooSmall { tensor: "C", dim: n });
                    }
                    let k = self.named(TensorName::Conharmonic)?;
                    let gauss = self.named(TensorName::Gaussian)?;
                    let c = &self.scalar_curvature() * &Expression::rational(1, (nf - 2) * (nf - 1));
                    k.add_scaled(&c, &gauss)
                }
                TensorName::EnergyMomentum => energy_momentum(&self.ricci(), &self.scalar_curvature(), &self.metric),
            },
            TensorAtom::Nabla(inner) => {
                let t = self.evaluate(inner)?;
                covariant_derivative(&t, self.connection(), self.metric.chart().coordinates())
            }
            TensorAtom::Dot(d, h) => {
                let dt = self.evaluate(d)?;
                if dt.valence() != 4 {
                    return Err(CurvatureError::WrongValence(d.to_string(), 4));
                }
                let ht = self.evaluate(h)?;
                dot_action(&dt, &ht, self.metric.inverse())
            }
            TensorAtom::Tachibana(a, h) => {
                let at = self.evaluate(a)?;
                if !at.is_symmetric_matrix() {
                    return Err(CurvatureError::NotSymmetric(a.to_string()));
                }
                let ht = self.evaluate(h)?;
                tachibana(&at, &ht)
            }
            TensorAtom::Wedge(a, b) => {
                let at = self.evaluate(a)?;
                let bt = self.evaluate(b)?;
                match kulkarni_nomizu(&at, &bt) {
                    Err(TensorError::NotSymmetric) => {
                        let culprit = if at.is_symmetric_matrix() { b } else { a };
                        return Err(CurvatureError::NotSymmetric(culprit.to_string()));
                    }
                    other => other?,
                }
            }
        })
    }
}
