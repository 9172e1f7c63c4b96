//! Curvature conditions: identity checks, recurrences, Ricci structure,
//! compatibility, and the full structure report.

mod compat;
mod compare;
mod identity;
mod recurrence;
mod report;
mod ricci;

use std::fmt;

use symexpr::{Atom, Expression};

use crate::linsolve::{Equation, LinearSystem, Solution};

pub use compat::{compatibility, compatible_space, CompatibleFamily};
pub use compare::{compare, Comparison, ComparisonRow};
pub use identity::{check_identity, IdentityBuilder};
pub use recurrence::{conformally_recurrent, form_recurrence, one_form_recurrence, weakly_ricci_symmetric};
pub use report::{classify, StructureReport, GENERICITY};
pub use ricci::{rank_one_factor, ricci_decompose, RankOne, RicciClass};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Holds,
    Fails,
    NotEvaluated,
}

impl Verdict {
    pub fn from_bool(holds: bool) -> Self {
        if holds {
            Verdict::Holds
        } else {
            Verdict::Fails
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::NotEvaluated => "not-evaluated",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum WitnessValue {
    Scalar(Expression),
    Covector(Vec<Expression>),
    Matrix(Vec<Vec<Expression>>),
    Count(usize),
    Text(String),
}

impl fmt::Display for WitnessValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn list(items: &[Expression]) -> String {
            let parts: Vec<String> = items.iter().map(ToString::to_string).collect();
            format!("{{{}}}", parts.join(", "))
        }
        match self {
            WitnessValue::Scalar(e) => write!(f, "{e}"),
            WitnessValue::Covector(v) => f.write_str(&list(v)),
            WitnessValue::Matrix(m) => {
                let rows: Vec<String> = m.iter().map(|r| list(r)).collect();
                write!(f, "{{{}}}", rows.join(", "))
            }
            WitnessValue::Count(n) => write!(f, "{n}"),
            WitnessValue::Text(s) => f.write_str(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub name: String,
    pub value: WitnessValue,
}

impl Witness {
    pub fn scalar(name: impl Into<String>, e: Expression) -> Self {
        Witness {
            name: name.into(),
            value: WitnessValue::Scalar(e),
        }
    }

    pub fn covector(name: impl Into<String>, v: Vec<Expression>) -> Self {
        Witness {
            name: name.into(),
            value: WitnessValue::Covector(v),
        }
    }

    pub fn text(name: impl Into<String>, s: impl Into<String>) -> Self {
        Witness {
            name: name.into(),
            value: WitnessValue::Text(s.into()),
        }
    }
}

/// Verdict and witnesses of one evaluated condition.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub verdict: Verdict,
    pub witnesses: Vec<Witness>,
}

impl Outcome {
    pub fn holds(witnesses: Vec<Witness>) -> Self {
        Outcome {
            verdict: Verdict::Holds,
            witnesses,
        }
    }

    pub fn fails(witnesses: Vec<Witness>) -> Self {
        Outcome {
            verdict: Verdict::Fails,
            witnesses,
        }
    }

    pub fn not_evaluated(reason: impl Into<String>) -> Self {
        Outcome {
            verdict: Verdict::NotEvaluated,
            witnesses: vec![Witness::text("reason", reason)],
        }
    }

    pub fn is_holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }

    pub fn witness(&self, name: &str) -> Option<&WitnessValue> {
        self.witnesses.iter().find(|w| w.name == name).map(|w| &w.value)
    }

    pub fn scalar(&self, name: &str) -> Option<&Expression> {
        match self.witness(name)? {
            WitnessValue::Scalar(e) => Some(e),
            _ => None,
        }
    }

    pub fn covector(&self, name: &str) -> Option<&[Expression]> {
        match self.witness(name)? {
            WitnessValue::Covector(v) => Some(v),
            _ => None,
        }
    }
}

/// `[1][2][3]` for a 0-based index tuple.
pub fn index_label(idx: &[usize]) -> String {
    idx.iter().map(|i| format!("[{}]", i + 1)).collect()
}

/// Iterates all index tuples of length `k` over `0..n` in lexicographic order.
pub(crate) fn for_each_index(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    let mut idx = vec![0; k];
    let total = n.pow(k as u32);
    for flat in 0..total {
        crate::tensor::decode(flat, n, &mut idx);
        f(&idx);
    }
}

/// Zero-tests `f` on every index tuple; the first nonzero value is the witness.
pub(crate) fn zero_test(name: &str, n: usize, k: usize, f: impl Fn(&[usize]) -> Expression) -> Outcome {
    let mut witness = None;
    let mut idx = vec![0; k];
    for flat in 0..n.pow(k as u32) {
        crate::tensor::decode(flat, n, &mut idx);
        let v = f(&idx);
        if !v.is_zero() {
            witness = Some(Witness::scalar(format!("{name}{}", index_label(&idx)), v));
            break;
        }
    }
    match witness {
        None => Outcome::holds(Vec::new()),
        Some(w) => Outcome::fails(vec![w]),
    }
}

/// General solution with each free unknown replaced by a constant atom named
/// after it, so witnesses stay in the expression grammar.
pub(crate) fn named_solution(solution: &Solution, names: &[String]) -> Option<Vec<Expression>> {
    let Solution::Consistent { free, .. } = solution else {
        return None;
    };
    let params: Vec<Expression> = free.iter().map(|&j| Expression::atom(Atom::constant(&names[j]))).collect();
    solution.general(&params)
}

/// Witnesses of an inconsistent system: single-unknown value clashes are
/// reported as two conflicting forced values, anything else as a residual.
pub(crate) fn conflict_witnesses(solution: &Solution, names: &[String]) -> Vec<Witness> {
    let Solution::Inconsistent(c) = solution else {
        return Vec::new();
    };
    if names.len() == 1 {
        if let (Some(first), Some((_, second))) = (c.against.first(), c.equation.forced_value()) {
            if let Some((_, value)) = first.forced_value() {
                return vec![
                    Witness::scalar(format!("{}{}", names[0], first.origin), value),
                    Witness::scalar(format!("{}{}", names[0], c.equation.origin), second),
                ];
            }
        }
    }
    vec![Witness::scalar(format!("residual{}", c.equation.origin), c.residual.clone())]
}

/// Solves a linear ansatz and converts the result into an outcome whose
/// witnesses are the named unknowns, grouped by `groups` (name, range).
pub(crate) fn solve_ansatz(system: &LinearSystem, names: &[String], groups: &[(&str, std::ops::Range<usize>)]) -> Outcome {
    let solution = system.solve();
    match named_solution(&solution, names) {
        Some(values) => Outcome::holds(
            groups
                .iter()
                .map(|(name, range)| {
                    if range.len() == 1 {
                        Witness::scalar(*name, values[range.start].clone())
                    } else {
                        Witness::covector(*name, values[range.clone()].to_vec())
                    }
                })
                .collect(),
        ),
        None => Outcome::fails(conflict_witnesses(&solution, names)),
    }
}

pub(crate) fn equation(coefficients: Vec<Expression>, constant: Expression, idx: &[usize]) -> Equation {
    Equation {
        coefficients,
        constant,
        origin: index_label(idx),
    }
}
