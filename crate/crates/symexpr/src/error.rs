use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("expression has a pole at the given point")]
    Pole,
    #[error("no value assigned to `{0}`")]
    IncompleteAssignment(String),
    #[error("sin({0})^2 + cos({0})^2 != 1 in the assignment")]
    TrigInconsistent(String),
}
