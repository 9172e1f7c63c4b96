//! The derivation action `D·H` and the Tachibana tensor `Q(A,H)`.

use symexpr::Expression;

use crate::linalg::Matrix;
use crate::tensor::{Generator, Tensor};

/// Symmetry of an operator result: that of `h` plus antisymmetry of the
/// trailing pair.
fn trailing_pair_symmetry(h: &Tensor) -> crate::tensor::Symmetry {
    let k = h.valence();
    h.symmetry().with(Generator::Antisymmetric(k, k + 1))
}

/// `(D·H)_{a1..ak x y} = -Σ_i 𝒟(x,y)^e_{a_i} H_{a1..e..ak}` with
/// `𝒟(x,y)^e_a = g^{ef} D_{x y a f}`.
pub fn dot_action(d: &Tensor, h: &Tensor, inverse: &Matrix) -> Tensor {
    let n = d.dim();
    let k = h.valence();
    // op[((x*n + y)*n + e)*n + a] = 𝒟(x,y)^e_a
    let mut op = vec![Expression::zero(); n * n * n * n];
    for x in 0..n {
        for y in 0..n {
            for a in 0..n {
                for e in 0..n {
                    let mut acc = Expression::zero();
                    for f in 0..n {
                        if inverse[e][f].is_zero() {
                            continue;
                        }
                        if let Some((v, s)) = d.get_ref(&[x, y, a, f]) {
                            let t = &inverse[e][f] * v;
                            acc = if s > 0 { &acc + &t } else { &acc - &t };
                        }
                    }
                    op[((x * n + y) * n + e) * n + a] = acc;
                }
            }
        }
    }
    let symmetry = if d.symmetry().contains(Generator::Antisymmetric(0, 1)) {
        trailing_pair_symmetry(h)
    } else {
        h.symmetry().clone()
    };
    Tensor::from_fn(n, k + 2, symmetry, |idx| {
        let (x, y) = (idx[k], idx[k + 1]);
        let mut slots = idx[..k].to_vec();
        let mut acc = Expression::zero();
        for i in 0..k {
            let original = slots[i];
            for e in 0..n {
                let c = &op[((x * n + y) * n + e) * n + original];
                if c.is_zero() {
                    continue;
                }
                slots[i] = e;
                if let Some((v, s)) = h.get_ref(&slots) {
                    let t = c * v;
                    acc = if s > 0 { &acc - &t } else { &acc + &t };
                }
            }
            slots[i] = original;
        }
        acc
    })
}

/// `Q(A,H)_{a1..ak x y} = Σ_i (A_{x a_i} H_{..y..} - A_{y a_i} H_{..x..})`.
pub fn tachibana(a: &Tensor, h: &Tensor) -> Tensor {
    let n = a.dim();
    let k = h.valence();
    let am = a.to_matrix();
    Tensor::from_fn(n, k + 2, trailing_pair_symmetry(h), |idx| {
        let (x, y) = (idx[k], idx[k + 1]);
        let mut slots = idx[..k].to_vec();
        let mut acc = Expression::zero();
        for i in 0..k {
            let original = slots[i];
            for (p, q, sign) in [(x, y, 1), (y, x, -1)] {
                let c = &am[p][original];
                if c.is_zero() {
                    continue;
                }
                slots[i] = q;
                if let Some((v, s)) = h.get_ref(&slots) {
                    let t = c * v;
                    acc = if s * sign > 0 { &acc + &t } else { &acc - &t };
                }
            }
            slots[i] = original;
        }
        acc
    })
}
