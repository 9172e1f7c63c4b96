//! Numeric curvature of Vaidya from divided differences of the metric, in
//! exact rational arithmetic, against the symbolic tensors.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use symexpr::{Atom, Rational};

use super::checks::Check;
use super::{all_indices, bundle};

pub const STEP: (i64, i64) = (1, 10_000);
pub const TOLERANCE: f64 = 1e-6;

type Mat = Vec<Vec<Rational>>;

fn q(p: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(d))
}

/// `m(u) = 3/2 + u/5 + u^2/7` and its derivatives.
fn mass(u: &Rational, order: u32) -> Rational {
    match order {
        0 => q(3, 2) + u * q(1, 5) + u * u * q(1, 7),
        1 => q(1, 5) + u * q(2, 7),
        2 => q(2, 7),
        _ => Rational::zero(),
    }
}

/// `(sin δ, cos δ)` by Taylor series; the truncation error is far below the
/// stencil error for `|δ| ≤ 4·10⁻⁴`.
fn sin_cos(delta: &Rational) -> (Rational, Rational) {
    let mut sin = Rational::zero();
    let mut cos = Rational::zero();
    let mut term = Rational::one();
    for k in 0..20u32 {
        if k % 2 == 0 {
            let sign = if k % 4 == 0 { 1 } else { -1 };
            cos += &term * q(sign, 1);
        } else {
            let sign = if k % 4 == 1 { 1 } else { -1 };
            sin += &term * q(sign, 1);
        }
        term = term * delta / q(i64::from(k) + 1, 1);
    }
    (sin, cos)
}

/// A chart point with `θ = θ₀ + δ`, `θ₀ = 2·atan(t)`.
#[derive(Clone)]
pub struct Point {
    pub u: Rational,
    pub r: Rational,
    pub t: Rational,
    pub delta: Rational,
    pub phi: Rational,
}

impl Point {
    fn base_trig(&self) -> (Rational, Rational) {
        let one = Rational::one();
        let den = &one + &self.t * &self.t;
        ((&self.t + &self.t) / &den, (&one - &self.t * &self.t) / den)
    }

    fn shifted(&self, coord: usize, by: &Rational) -> Point {
        let mut p = self.clone();
        match coord {
            0 => p.u += by,
            1 => p.r += by,
            2 => p.delta += by,
            _ => p.phi += by,
        }
        p
    }

    /// Atom values. `cos θ` is only supplied at `δ = 0`, where the pair
    /// lies exactly on the unit circle.
    fn assignment(&self) -> HashMap<Atom, Rational> {
        let (s0, c0) = self.base_trig();
        let mut a = HashMap::new();
        a.insert(Atom::coordinate("u"), self.u.clone());
        a.insert(Atom::coordinate("r"), self.r.clone());
        a.insert(Atom::coordinate("phi"), self.phi.clone());
        if self.delta.is_zero() {
            a.insert(Atom::sin("theta"), s0);
            a.insert(Atom::cos("theta"), c0);
        } else {
            let (sd, cd) = sin_cos(&self.delta);
            a.insert(Atom::sin("theta"), &s0 * &cd + &c0 * &sd);
        }
        a.insert(Atom::function("m", &["u"]), mass(&self.u, 0));
        for k in 1..=4 {
            a.insert(Atom::function_derivative("m", &["u"], &[k]), mass(&self.u, k));
        }
        a
    }
}

pub fn sample_points() -> Vec<Point> {
    // Fixed pseudo-random rationals, away from r = 0 and sin θ = 0.
    let mut state: u64 = 0x9e37_79b9_7f4a_7c15;
    let mut next = |lo: i64, span: i64| {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        q(lo * 97 + (state % (span as u64 * 97)) as i64, 97)
    };
    (0..5)
        .map(|_| Point {
            u: next(-3, 6),
            r: next(3, 8),
            t: next(1, 2) / q(2, 1),
            delta: Rational::zero(),
            phi: next(0, 6),
        })
        .collect()
}

fn invert(m: &Mat) -> Mat {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero()).expect("metric is invertible");
        a.swap(col, pivot);
        let inv = Rational::one() / &a[col][col];
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..2 * n {
                    let t = &f * &a[col][c];
                    a[r][c] -= t;
                }
            }
        }
    }
    a.into_iter().map(|row| row[n..].to_vec()).collect()
}

/// Numeric `R_abcd`, `S_ab` and `C_abcd` at `p`, flattened in index order.
pub struct Numeric {
    pub riemann: Vec<Rational>,
    pub ricci: Vec<Rational>,
    pub weyl: Vec<Rational>,
}

pub fn numeric_curvature(metric_at: &dyn Fn(&Point) -> Mat, p: &Point, n: usize) -> Numeric {
    let h = q(STEP.0, STEP.1);
    let g0 = metric_at(p);
    let gi = invert(&g0);
    // Fourth-order central stencils: offsets and weights, scaled by 1/(12h)
    // for first and 1/(12h²) for second derivatives.
    let first = [(-2i64, 1i64), (-1, -8), (1, 8), (2, -1)];
    let second = [(-2i64, -1i64), (-1, 16), (0, -30), (1, 16), (2, -1)];
    let combine = |terms: Vec<(Rational, Mat)>, scale: &Rational| -> Mat {
        (0..n)
            .map(|a| (0..n).map(|b| terms.iter().map(|(w, m)| w * &m[a][b]).sum::<Rational>() / scale).collect())
            .collect()
    };
    let twelve_h = &h * q(12, 1);
    let twelve_h2 = &h * &h * q(12, 1);
    let at = |c: usize, k: i64| metric_at(&p.shifted(c, &(&h * q(k, 1))));
    // dg[c][a][b] = ∂_c g_ab
    let dg: Vec<Mat> = (0..n).map(|c| combine(first.iter().map(|&(k, w)| (q(w, 1), at(c, k))).collect(), &twelve_h)).collect();
    // ddg[c][d][a][b] = ∂_c ∂_d g_ab
    let mut ddg = vec![vec![vec![vec![Rational::zero(); n]; n]; n]; n];
    for c in 0..n {
        for d in c..n {
            let block = if c == d {
                combine(second.iter().map(|&(k, w)| (q(w, 1), if k == 0 { g0.clone() } else { at(c, k) })).collect(), &twelve_h2)
            } else {
                let mut terms = Vec::new();
                for &(kc, wc) in &first {
                    for &(kd, wd) in &first {
                        let shifted = p.shifted(c, &(&h * q(kc, 1))).shifted(d, &(&h * q(kd, 1)));
                        terms.push((q(wc * wd, 1), metric_at(&shifted)));
                    }
                }
                combine(terms, &(&twelve_h * &twelve_h))
            };
            ddg[c][d] = block.clone();
            ddg[d][c] = block;
        }
    }
    let half = q(1, 2);
    // first kind Γ_ebd and its derivative ∂_c Γ_ebd
    let g1 = |e: usize, b: usize, d: usize| -> Rational { (&dg[b][e][d] + &dg[d][e][b] - &dg[e][b][d]) * &half };
    let dg1 = |c: usize, e: usize, b: usize, d: usize| -> Rational { (&ddg[c][b][e][d] + &ddg[c][d][e][b] - &ddg[c][e][b][d]) * &half };
    let mut gamma = vec![Rational::zero(); n * n * n];
    for a in 0..n {
        for b in 0..n {
            for d in 0..n {
                gamma[(a * n + b) * n + d] = (0..n).map(|e| &gi[a][e] * g1(e, b, d)).sum();
            }
        }
    }
    // ∂_c g^{ae} = -g^{ap} ∂_c g_pq g^{qe}
    let mut dgi = vec![vec![vec![Rational::zero(); n]; n]; n];
    for c in 0..n {
        for a in 0..n {
            for e in 0..n {
                let mut acc = Rational::zero();
                for pp in 0..n {
                    for qq in 0..n {
                        acc -= &gi[a][pp] * &dg[c][pp][qq] * &gi[qq][e];
                    }
                }
                dgi[c][a][e] = acc;
            }
        }
    }
    // dgamma[c][(a,b,d)] = ∂_c Γ^a_bd
    let mut dgamma = vec![vec![Rational::zero(); n * n * n]; n];
    for c in 0..n {
        for a in 0..n {
            for b in 0..n {
                for d in 0..n {
                    dgamma[c][(a * n + b) * n + d] = (0..n).map(|e| &dgi[c][a][e] * g1(e, b, d) + &gi[a][e] * dg1(c, e, b, d)).sum();
                }
            }
        }
    }
    let gm = |a: usize, b: usize, d: usize| &gamma[(a * n + b) * n + d];
    let mut up = vec![Rational::zero(); n.pow(4)];
    for i in all_indices(n, 4) {
        let (a, b, c, d) = (i[0], i[1], i[2], i[3]);
        let mut v = &dgamma[c][(a * n + b) * n + d] - &dgamma[d][(a * n + b) * n + c];
        for e in 0..n {
            v += gm(a, c, e) * gm(e, b, d) - gm(a, d, e) * gm(e, b, c);
        }
        up[((a * n + b) * n + c) * n + d] = v;
    }
    let flat4 = |a: usize, b: usize, c: usize, d: usize| ((a * n + b) * n + c) * n + d;
    let riemann: Vec<Rational> = all_indices(n, 4)
        .map(|i| (0..n).map(|e| &g0[i[0]][e] * &up[flat4(e, i[1], i[2], i[3])]).sum())
        .collect();
    let ricci: Vec<Rational> = all_indices(n, 2)
        .map(|i| {
            let mut acc = Rational::zero();
            for a in 0..n {
                for d in 0..n {
                    acc += &gi[a][d] * &riemann[flat4(a, i[0], i[1], d)];
                }
            }
            acc
        })
        .collect();
    let kappa: Rational = all_indices(n, 2).map(|i| &gi[i[0]][i[1]] * &ricci[i[0] * n + i[1]]).sum();
    let s = |a: usize, b: usize| &ricci[a * n + b];
    let kn = |x: &dyn Fn(usize, usize) -> Rational, y: &dyn Fn(usize, usize) -> Rational, a: usize, b: usize, c: usize, d: usize| {
        x(a, d) * y(b, c) + x(b, c) * y(a, d) - x(a, c) * y(b, d) - x(b, d) * y(a, c)
    };
    let gf = |a: usize, b: usize| g0[a][b].clone();
    let sf = |a: usize, b: usize| s(a, b).clone();
    let nq = q(n as i64, 1);
    let one = Rational::one();
    let two = q(2, 1);
    let c_gs = -(&one / (&nq - &two));
    let c_gg = &kappa / ((&nq - &one) * (&nq - &two)) * &half;
    let weyl: Vec<Rational> = all_indices(n, 4)
        .map(|i| {
            let (a, b, c, d) = (i[0], i[1], i[2], i[3]);
            &riemann[flat4(a, b, c, d)] + &c_gs * kn(&gf, &sf, a, b, c, d) + &c_gg * kn(&gf, &gf, a, b, c, d)
        })
        .collect();
    Numeric { riemann, ricci, weyl }
}

/// Largest absolute difference over the largest symbolic magnitude.
fn relative_error(numeric: &[Rational], symbolic: &[Rational]) -> f64 {
    let scale = symbolic.iter().map(|v| v.abs()).max().unwrap_or_else(Rational::zero);
    let diff = numeric.iter().zip(symbolic).map(|(a, b)| (a - b).abs()).max().unwrap_or_else(Rational::zero);
    if scale.is_zero() {
        return diff.to_f64().unwrap_or(f64::INFINITY);
    }
    (diff / scale).to_f64().unwrap_or(f64::INFINITY)
}

/// Returns the worst relative error per tensor, or the first failure.
pub fn vaidya_divided_differences() -> Result<Vec<(String, f64)>, String> {
    let b = bundle("vaidya");
    let n = b.dim();
    let gm = b.metric().matrix().clone();
    let metric_at = |p: &Point| -> Mat {
        let a = p.assignment();
        gm.iter()
            .map(|row| row.iter().map(|e| e.eval_numeric(&a).expect("metric evaluates")).collect())
            .collect()
    };
    let r = b.riemann();
    let s = b.ricci();
    let c = b.named(curvlab::parse::TensorName::Weyl).map_err(|e| e.to_string())?;
    let mut worst = vec![("R".to_string(), 0f64), ("S".to_string(), 0f64), ("C".to_string(), 0f64)];
    for p in sample_points() {
        let num = numeric_curvature(&metric_at, &p, n);
        let a = p.assignment();
        let eval = |t: &curvlab::tensor::Tensor, k: usize| -> Result<Vec<Rational>, String> {
            all_indices(n, k).map(|i| t.get(&i).eval_numeric(&a).map_err(|e| e.to_string())).collect()
        };
        for (slot, (numeric, symbolic)) in [(&num.riemann, eval(&r, 4)?), (&num.ricci, eval(&s, 2)?), (&num.weyl, eval(&c, 4)?)].into_iter().enumerate() {
            let err = relative_error(numeric, &symbolic);
            worst[slot].1 = worst[slot].1.max(err);
        }
    }
    Ok(worst)
}

pub fn divided_difference_check() -> Check {
    let worst = vaidya_divided_differences()?;
    let bad: Vec<String> = worst.iter().filter(|(_, e)| e.is_nan() || *e >= TOLERANCE).map(|(n, e)| format!("{n}: relative error {e:e}")).collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(bad.join("; "))
    }
}
