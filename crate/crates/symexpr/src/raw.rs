//! Unnormalized expression trees, as produced by a parser.

use crate::atom::{Atom, Symbol};
use crate::error::ExprError;
use crate::expr::Expression;
use crate::poly::Rational;

#[derive(Clone, Debug, PartialEq)]
pub enum RawExpr {
    Number(Rational),
    Atom(Atom),
    Neg(Box<RawExpr>),
    Add(Box<RawExpr>, Box<RawExpr>),
    Sub(Box<RawExpr>, Box<RawExpr>),
    Mul(Box<RawExpr>, Box<RawExpr>),
    Div(Box<RawExpr>, Box<RawExpr>),
    Pow(Box<RawExpr>, i64),
    /// Partial derivative of the inner expression, `(coordinate, order)` pairs.
    Diff(Box<RawExpr>, Vec<(Symbol, u32)>),
}

impl RawExpr {
    pub fn normalize(&self) -> Result<Expression, ExprError> {
        Ok(match self {
            RawExpr::Number(q) => Expression::constant(q.clone()),
            RawExpr::Atom(a) => Expression::atom(a.clone()),
            RawExpr::Neg(a) => -a.normalize()?,
            RawExpr::Add(a, b) => a.normalize()? + b.normalize()?,
            RawExpr::Sub(a, b) => a.normalize()? - b.normalize()?,
            RawExpr::Mul(a, b) => a.normalize()? * b.normalize()?,
            RawExpr::Div(a, b) => a.normalize()?.checked_div(&b.normalize()?)?,
            RawExpr::Pow(a, e) => a.normalize()?.pow(*e)?,
            RawExpr::Diff(a, vars) => {
                let mut e = a.normalize()?;
                for (x, k) in vars {
                    for _ in 0..*k {
                        e = e.differentiate(x);
                    }
                }
                e
            }
        })
    }
}
