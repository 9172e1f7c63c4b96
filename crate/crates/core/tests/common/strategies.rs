//! Random expressions over a Vaidya-like chart.

use curvlab::chart::Chart;
use num_bigint::BigInt;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use symexpr::{Atom, Expression, Rational, RawExpr};

use super::checks::Check;

pub fn chart() -> Chart {
    let mut c = Chart::new(&["u", "r", "theta", "phi"]).unwrap();
    c.declare_function("m", &["u"]).unwrap();
    c.declare_function("w", &["u", "r"]).unwrap();
    c.declare_constant("k").unwrap();
    c
}

fn atoms() -> Vec<Atom> {
    vec![
        Atom::constant("k"),
        Atom::coordinate("r"),
        Atom::coordinate("u"),
        Atom::sin("theta"),
        Atom::cos("theta"),
        Atom::function("m", &["u"]),
        Atom::function_derivative("m", &["u"], &[2]),
        Atom::function("w", &["u", "r"]),
        Atom::function_derivative("w", &["u", "r"], &[1, 2]),
    ]
}

fn leaf() -> impl Strategy<Value = RawExpr> {
    prop_oneof![
        (-5i64..6, 1i64..4).prop_map(|(p, d)| RawExpr::Number(Rational::new(BigInt::from(p), BigInt::from(d)))),
        (0..atoms().len()).prop_map(|i| RawExpr::Atom(atoms()[i].clone())),
    ]
}

pub fn raw_tree() -> impl Strategy<Value = RawExpr> {
    leaf().prop_recursive(4, 20, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|a| RawExpr::Neg(Box::new(a))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| RawExpr::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| RawExpr::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| RawExpr::Mul(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| RawExpr::Div(Box::new(a), Box::new(b))),
            (inner, -2i64..4).prop_map(|(a, e)| RawExpr::Pow(Box::new(a), e)),
        ]
    })
}

pub fn expression() -> impl Strategy<Value = Expression> {
    raw_tree().prop_filter_map("division by zero", |t| t.normalize().ok())
}

/// Printing then parsing gives back the same canonical expression.
pub fn round_trips(e: &Expression, chart: &Chart) -> Result<(), String> {
    let text = e.to_string();
    let back = curvlab::parse::parse_expression(&text, chart)
        .map_err(|err| format!("`{text}` does not parse: {err}"))?
        .normalize()
        .map_err(|err| format!("`{text}`: {err}"))?;
    if back == *e {
        Ok(())
    } else {
        Err(format!("`{text}` parses to `{back}`"))
    }
}

/// Distributivity and the product rule for one triple.
pub fn ring_laws(a: &Expression, b: &Expression, c: &Expression) -> Result<(), String> {
    if a * &(b + c) != &(a * b) + &(a * c) {
        return Err(format!("distributivity fails for {a}, {b}, {c}"));
    }
    if &(a * b) * c != a * &(b * c) {
        return Err(format!("associativity fails for {a}, {b}, {c}"));
    }
    for x in ["u", "r", "theta"] {
        let lhs = (a * b).differentiate(x);
        let rhs = &(&a.differentiate(x) * b) + &(a * &b.differentiate(x));
        if lhs != rhs {
            return Err(format!("product rule in {x} fails for {a}, {b}"));
        }
    }
    Ok(())
}

/// Runs both properties on `cases` random inputs.
pub fn randomized_expression_suite(cases: u32) -> Check {
    let chart = chart();
    let mut runner = TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    });
    runner
        .run(&(expression(), expression(), expression()), |(a, b, c)| {
            round_trips(&a, &chart).map_err(TestCaseError::fail)?;
            ring_laws(&a, &b, &c).map_err(TestCaseError::fail)?;
            Ok(())
        })
        .map_err(|e| e.to_string())
}
