use symexpr::Expression;

use super::{equation, for_each_index, solve_ansatz, Outcome, Verdict, Witness};
use crate::linsolve::LinearSystem;
use crate::tensor::Tensor;

fn names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

/// The zero 1-form solves every recurrence whose defining tensor is closed
/// (for `R` this is the second Bianchi identity), so recurrence requires a
/// nonzero solution.
fn require_nonzero(outcome: Outcome) -> Outcome {
    let trivial = outcome.is_holds() && outcome.covector("Pi").is_some_and(|pi| pi.iter().all(Expression::is_zero));
    if !trivial {
        return outcome;
    }
    Outcome {
        verdict: Verdict::Fails,
        witnesses: vec![
            outcome.witnesses[0].clone(),
            Witness::text("reason", "the zero 1-form is the only solution"),
        ],
    }
}

fn add(c: &mut Expression, v: Expression) {
    if !v.is_zero() {
        *c = &*c + &v;
    }
}

/// Recurrence of the 2-forms of a (0,4) tensor `d` with covariant
/// derivative `nabla_d` (derivative slot last):
/// `Σ_cyc [(∇D)_{a2 a3 x y, a1} - Π_{a1} D_{a2 a3 x y}] = 0`.
pub fn form_recurrence(d: &Tensor, nabla_d: &Tensor) -> Outcome {
    let n = d.dim();
    let mut system = LinearSystem::new(n);
    for_each_index(n, 5, |idx| {
        if system.is_inconsistent() {
            return;
        }
        let (x, y) = (idx[3], idx[4]);
        let a = [idx[0], idx[1], idx[2]];
        let mut coefficients = vec![Expression::zero(); n];
        let mut constant = Expression::zero();
        for s in 0..3 {
            let (a1, a2, a3) = (a[s], a[(s + 1) % 3], a[(s + 2) % 3]);
            add(&mut constant, nabla_d.get(&[a2, a3, x, y, a1]));
            coefficients[a1] = &coefficients[a1] - &d.get(&[a2, a3, x, y]);
        }
        system.push(equation(coefficients, constant, idx));
    });
    require_nonzero(solve_ansatz(&system, &names("Pi", n), &[("Pi", 0..n)]))
}

/// Recurrence of the 1-forms of a (0,2) tensor `z`:
/// `(∇Z)_{a2 x,a1} - (∇Z)_{a1 x,a2} - Π_{a1} Z_{a2 x} + Π_{a2} Z_{a1 x} = 0`.
pub fn one_form_recurrence(z: &Tensor, nabla_z: &Tensor) -> Outcome {
    let n = z.dim();
    let mut system = LinearSystem::new(n);
    for_each_index(n, 3, |idx| {
        if system.is_inconsistent() {
            return;
        }
        let (a1, a2, x) = (idx[0], idx[1], idx[2]);
        let constant = &nabla_z.get(&[a2, x, a1]) - &nabla_z.get(&[a1, x, a2]);
        let mut coefficients = vec![Expression::zero(); n];
        coefficients[a1] = &coefficients[a1] - &z.get(&[a2, x]);
        coefficients[a2] = &coefficients[a2] + &z.get(&[a1, x]);
        system.push(equation(coefficients, constant, idx));
    });
    require_nonzero(solve_ansatz(&system, &names("Pi", n), &[("Pi", 0..n)]))
}

/// `∇T = Π ⊗ T` with the derivative slot last.
pub fn conformally_recurrent(t: &Tensor, nabla_t: &Tensor) -> Outcome {
    let n = t.dim();
    let k = t.valence();
    let mut system = LinearSystem::new(n);
    for_each_index(n, k + 1, |idx| {
        if system.is_inconsistent() {
            return;
        }
        let mut coefficients = vec![Expression::zero(); n];
        coefficients[idx[k]] = -t.get(&idx[..k]);
        system.push(equation(coefficients, nabla_t.get(idx), idx));
    });
    require_nonzero(solve_ansatz(&system, &names("Pi", n), &[("Pi", 0..n)]))
}

/// `(∇_x S)(y,z) = A_x S_yz + B_y S_xz + D_z S_yx` for 1-forms A, B, D.
pub fn weakly_ricci_symmetric(s: &Tensor, nabla_s: &Tensor) -> Outcome {
    let n = s.dim();
    let mut system = LinearSystem::new(3 * n);
    for_each_index(n, 3, |idx| {
        if system.is_inconsistent() {
            return;
        }
        let (y, z, x) = (idx[0], idx[1], idx[2]);
        let mut coefficients = vec![Expression::zero(); 3 * n];
        coefficients[x] = -s.get(&[y, z]);
        coefficients[n + y] = &coefficients[n + y] - &s.get(&[x, z]);
        coefficients[2 * n + z] = &coefficients[2 * n + z] - &s.get(&[y, x]);
        system.push(equation(coefficients, nabla_s.get(idx), idx));
    });
    let mut all = names("A", n);
    all.extend(names("B", n));
    all.extend(names("D", n));
    solve_ansatz(&system, &all, &[("A", 0..n), ("B", n..2 * n), ("D", 2 * n..3 * n)])
}
