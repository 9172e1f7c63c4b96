use symexpr::Expression;

use super::{equation, solve_ansatz, Outcome};
use crate::curvature::{CurvatureBundle, CurvatureError};
use crate::linsolve::LinearSystem;
use crate::parse::{IdentityAst, IdentityTerm, Scalar, TensorAtom};
use crate::tensor::{layout, Tensor};

/// Programmatic construction of identities, bypassing the parser so that
/// unknown names cannot clash with chart symbols.
#[derive(Default)]
pub struct IdentityBuilder {
    ast: Option<IdentityAst>,
}

impl IdentityBuilder {
    pub fn new() -> Self {
        IdentityBuilder {
            ast: Some(IdentityAst {
                lhs: Vec::new(),
                rhs: Vec::new(),
                unknowns: Vec::new(),
                valence: None,
            }),
        }
    }

    fn ast(&mut self) -> &mut IdentityAst {
        self.ast.as_mut().expect("builder not finished")
    }

    fn push(mut self, left: bool, coefficient: Scalar, tensor: TensorAtom) -> Self {
        let ast = self.ast();
        if let Scalar::Unknown { name, .. } = &coefficient {
            if !ast.unknowns.contains(name) {
                ast.unknowns.push(name.clone());
            }
        }
        ast.valence = Some(tensor.valence());
        let term = IdentityTerm { coefficient, tensor };
        if left {
            ast.lhs.push(term);
        } else {
            ast.rhs.push(term);
        }
        self
    }

    pub fn lhs(self, c: Expression, t: TensorAtom) -> Self {
        self.push(true, Scalar::Known(c), t)
    }

    pub fn rhs(self, c: Expression, t: TensorAtom) -> Self {
        self.push(false, Scalar::Known(c), t)
    }

    pub fn rhs_unknown(self, name: &str, t: TensorAtom) -> Self {
        self.push(
            false,
            Scalar::Unknown {
                factor: Expression::one(),
                name: name.to_string(),
            },
            t,
        )
    }

    pub fn build(mut self) -> IdentityAst {
        self.ast.take().expect("builder not finished")
    }
}

fn accumulate(slot: &mut Option<Tensor>, c: &Expression, t: &Tensor) {
    *slot = Some(match slot.take() {
        None => t.scale(c),
        Some(acc) => acc.add_scaled(c, t),
    });
}

/// Decides `lhs = rhs`, solving for unknown scalars when present.
pub fn check_identity(ast: &IdentityAst, bundle: &CurvatureBundle) -> Result<Outcome, CurvatureError> {
    let Some(valence) = ast.valence else {
        return Ok(Outcome::holds(Vec::new()));
    };
    let n = bundle.dim();
    let mut known: Option<Tensor> = None;
    let mut unknown: Vec<Option<Tensor>> = vec![None; ast.unknowns.len()];
    let sides = ast.lhs.iter().map(|t| (t, 1)).chain(ast.rhs.iter().map(|t| (t, -1)));
    for (term, sign) in sides {
        let tensor = bundle.evaluate(&term.tensor)?;
        let signed = |c: &Expression| if sign > 0 { c.clone() } else { -c };
        match &term.coefficient {
            Scalar::Known(c) => accumulate(&mut known, &signed(c), &tensor),
            Scalar::Unknown { factor, name } => {
                let j = ast.unknowns.iter().position(|u| u == name).expect("recorded unknown");
                accumulate(&mut unknown[j], &signed(factor), &tensor);
            }
        }
    }
    let parts: Vec<&Tensor> = known.iter().chain(unknown.iter().flatten()).collect();
    let Some(first) = parts.first() else {
        return Ok(Outcome::holds(Vec::new()));
    };
    let symmetry = parts.iter().fold(first.symmetry().clone(), |s, t| s.meet(t.symmetry()));
    let mut system = LinearSystem::new(ast.unknowns.len());
    let lay = layout(n, valence, &symmetry);
    let mut idx = vec![0; valence];
    for &rep in lay.representatives() {
        crate::tensor::decode(rep, n, &mut idx);
        let constant = known.as_ref().map_or_else(Expression::zero, |t| t.get(&idx));
        let coefficients = unknown.iter().map(|t| t.as_ref().map_or_else(Expression::zero, |t| t.get(&idx))).collect();
        system.push(equation(coefficients, constant, &idx));
        if system.is_inconsistent() {
            break;
        }
    }
    let groups: Vec<(&str, std::ops::Range<usize>)> = ast.unknowns.iter().enumerate().map(|(j, u)| (u.as_str(), j..j + 1)).collect();
    Ok(solve_ansatz(&system, &ast.unknowns, &groups))
}
