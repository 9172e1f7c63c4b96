use std::fmt;

use rayon::prelude::*;
use symexpr::Expression;

use super::compat::family_label;
use super::{
    check_identity, compatibility, compatible_space, conformally_recurrent, form_recurrence, one_form_recurrence, rank_one_factor, ricci_decompose,
    weakly_ricci_symmetric, zero_test, IdentityBuilder, Outcome, RicciClass, Verdict, Witness, WitnessValue,
};
use crate::curvature::{CurvatureBundle, CurvatureError};
use crate::linsolve::rank;
use crate::parse::{TensorAtom, TensorName};
use crate::tensor::endomorphism_square;

pub const GENERICITY: &str =
    "verdicts are generic: function symbols and their derivatives are independent indeterminates, nonzero unless identically zero";

#[derive(Clone, Debug, PartialEq)]
pub struct Condition {
    pub name: String,
    pub outcome: Outcome,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StructureReport {
    pub metric: String,
    pub conditions: Vec<Condition>,
}

impl StructureReport {
    pub fn get(&self, name: &str) -> Option<&Outcome> {
        self.conditions.iter().find(|c| c.name == name).map(|c| &c.outcome)
    }

    pub fn verdict(&self, name: &str) -> Option<Verdict> {
        self.get(name).map(|o| o.verdict)
    }
}

impl fmt::Display for StructureReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# structure report: {}", self.metric)?;
        writeln!(f, "# {GENERICITY}")?;
        for c in &self.conditions {
            write!(f, "{}: {}", c.name, c.outcome.verdict)?;
            for w in &c.outcome.witnesses {
                write!(f, "; witness {} = {}", w.name, w.value)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

type Check = fn(&CurvatureBundle) -> Result<Outcome, CurvatureError>;

fn named(n: TensorName) -> TensorAtom {
    TensorAtom::Named(n)
}

use TensorName::{Conharmonic as K, Concircular as W, EnergyMomentum as T, Metric as G, Projective as P, Ricci as S, Riemann as R, Weyl as C};

fn vanishes(b: &CurvatureBundle, label: &str, atom: &TensorAtom) -> Result<Outcome, CurvatureError> {
    let t = b.evaluate(atom)?;
    Ok(zero_test(label, t.dim(), t.valence(), |i| t.get(i)))
}

fn equal(b: &CurvatureBundle, x: TensorName, y: TensorName) -> Result<Outcome, CurvatureError> {
    let (tx, ty) = (b.named(x)?, b.named(y)?);
    Ok(zero_test(&format!("{}-{}", x.symbol(), y.symbol()), tx.dim(), 4, |i| &tx.get(i) - &ty.get(i)))
}

fn dot(d: TensorName, h: TensorName) -> TensorAtom {
    TensorAtom::dot(named(d), named(h))
}

fn q(a: TensorName, h: TensorName) -> TensorAtom {
    TensorAtom::tachibana(named(a), named(h))
}

fn proportional(b: &CurvatureBundle, lhs: TensorAtom, rhs: TensorAtom) -> Result<Outcome, CurvatureError> {
    check_identity(&IdentityBuilder::new().lhs(Expression::one(), lhs).rhs_unknown("L", rhs).build(), b)
}

fn family(b: &CurvatureBundle, d: TensorName) -> Result<Outcome, CurvatureError> {
    let t = b.named(d)?;
    let fam = compatible_space(&t, b.metric());
    let mut witnesses = vec![Witness {
        name: "parameters".into(),
        value: WitnessValue::Count(fam.parameter_count()),
    }];
    let n = fam.entries.len();
    for i in 0..n {
        for j in 0..n {
            if !fam.entries[i][j].is_zero() {
                witnesses.push(Witness::scalar(family_label(i, j), fam.entries[i][j].clone()));
            }
        }
    }
    Ok(Outcome::holds(witnesses))
}

fn ricci_rank(b: &CurvatureBundle) -> Witness {
    Witness {
        name: "rank".into(),
        value: WitnessValue::Count(rank(&b.ricci().to_matrix())),
    }
}

fn einstein(b: &CurvatureBundle) -> Result<Outcome, CurvatureError> {
    let s = b.ricci();
    let n = b.dim();
    Ok(match ricci_decompose(&s, b.metric()) {
        RicciClass::Einstein { alpha } => Outcome::holds(vec![Witness::scalar("alpha", alpha)]),
        _ => {
            let alpha = &b.scalar_curvature() / &Expression::integer(n as i64);
            let g = b.metric().tensor();
            zero_test("S-alpha*g", n, 2, |i| &s.get(i) - &(&alpha * &g.get(i)))
        }
    })
}

fn ricci_simple(b: &CurvatureBundle) -> Result<Outcome, CurvatureError> {
    let inverse = b.metric().inverse();
    Ok(match ricci_decompose(&b.ricci(), b.metric()) {
        RicciClass::RicciSimple(f) => Outcome::holds(vec![
            Witness::scalar("beta", f.beta.clone()),
            Witness::covector("eta", f.eta.clone()),
            Witness::scalar("norm-eta", f.norm_squared(inverse)),
        ]),
        RicciClass::Einstein { alpha } if alpha.is_zero() => Outcome::holds(vec![Witness::scalar("beta", Expression::zero())]),
        _ => Outcome::fails(vec![ricci_rank(b)]),
    })
}

fn quasi_einstein(b: &CurvatureBundle) -> Result<Outcome, CurvatureError> {
    Ok(match ricci_decompose(&b.ricci(), b.metric()) {
        RicciClass::Einstein { alpha } => Outcome::holds(vec![Witness::scalar("alpha", alpha), Witness::scalar("beta", Expression::zero())]),
        RicciClass::RicciSimple(f) => Outcome::holds(vec![
            Witness::scalar("alpha", Expression::zero()),
            Witness::scalar("beta", f.beta),
            Witness::covector("Pi", f.eta),
        ]),
        RicciClass::QuasiEinstein { alpha, rest } => Outcome::holds(vec![
            Witness::scalar("alpha", alpha),
            Witness::scalar("beta", rest.beta),
            Witness::covector("Pi", rest.eta),
        ]),
        RicciClass::None => Outcome::fails(vec![Witness::text("reason", "no alpha makes S - alpha*g of rank at most one")]),
    })
}

fn ricci_square(b: &CurvatureBundle) -> Result<Outcome, CurvatureError> {
    let sq = endomorphism_square(&b.ricci(), b.metric().inverse());
    Ok(zero_test("S^2", b.dim(), 2, |i| sq.get(i)))
}

fn codazzi(b: &CurvatureBundle) -> Result<Outcome, CurvatureError> {
    let ds = b.nabla(S)?;
    Ok(zero_test("residual", b.dim(), 3, |i| &ds.get(&[i[1], i[2], i[0]]) - &ds.get(&[i[0], i[2], i[1]])))
}

fn cyclic_parallel(b: &CurvatureBundle) -> Result<Outcome, CurvatureError> {
    let ds = b.nabla(S)?;
    Ok(zero_test("residual", b.dim(), 3, |i| {
        let (x, y, z) = (i[0], i[1], i[2]);
        &(&ds.get(&[y, z, x]) + &ds.get(&[z, x, y])) + &ds.get(&[x, y, z])
    }))
}

fn harmonic(b: &CurvatureBundle) -> Result<Outcome, CurvatureError> {
    let dr = b.nabla(R)?;
    let inv = b.metric().inverse();
    let n = b.dim();
    Ok(zero_test("div R", n, 3, |i| {
        let mut acc = Expression::zero();
        for a in 0..n {
            for e in 0..n {
                if !inv[a][e].is_zero() {
                    acc = &acc + &(&inv[a][e] * &dr.get(&[a, i[0], i[1], i[2], e]));
                }
            }
        }
        acc
    }))
}

fn pure_radiation(b: &CurvatureBundle) -> Result<Outcome, CurvatureError> {
    let t = b.named(T)?;
    let m = t.to_matrix();
    if t.is_zero() || rank(&m) != 1 {
        return Ok(Outcome::fails(vec![Witness {
            name: "rank".into(),
            value: WitnessValue::Count(rank(&m)),
        }]));
    }
    let f = rank_one_factor(&m).expect("symmetric rank one");
    let norm = f.norm_squared(b.metric().inverse());
    let witnesses = vec![Witness::scalar("Phi", f.beta.clone()), Witness::covector("k", f.eta.clone()), Witness::scalar("norm-k", norm.clone())];
    Ok(if norm.is_zero() { Outcome::holds(witnesses) } else { Outcome::fails(witnesses) })
}

const CATALOG: &[(&str, Check)] = &[
    ("scalar-flat", |b| {
        let k = b.scalar_curvature();
        let w = vec![Witness::scalar("kappa", k.clone())];
        Ok(if k.is_zero() { Outcome::holds(w) } else { Outcome::fails(w) })
    }),
    ("ricci-flat", |b| vanishes(b, "S", &named(S))),
    ("ricci-symmetric", |b| vanishes(b, "nabla S", &TensorAtom::nabla(named(S)))),
    ("riemann-equals-projective", |b| equal(b, R, P)),
    ("riemann-equals-concircular", |b| equal(b, R, W)),
    ("riemann-equals-conharmonic", |b| equal(b, R, K)),
    ("riemann-equals-weyl", |b| equal(b, R, C)),
    ("weyl-equals-conharmonic", |b| equal(b, C, K)),
    ("einstein", einstein),
    ("quasi-einstein", quasi_einstein),
    ("ricci-simple", ricci_simple),
    ("ricci-wedge-square-zero", |b| vanishes(b, "wedge(S,S)", &TensorAtom::wedge(named(S), named(S)))),
    ("ricci-square-zero", ricci_square),
    ("codazzi-ricci", codazzi),
    ("cyclic-parallel-ricci", cyclic_parallel),
    ("harmonic-curvature", harmonic),
    ("semisymmetric", |b| vanishes(b, "R.R", &dot(R, R))),
    ("conformally-semisymmetric", |b| vanishes(b, "R.C", &dot(R, C))),
    ("pseudosymmetric", |b| proportional(b, dot(R, R), q(G, R))),
    ("weyl-pseudosymmetric", |b| proportional(b, dot(C, C), q(G, C))),
    ("ricci-generalized-pseudosymmetric", |b| proportional(b, dot(R, R), q(S, R))),
    ("curvature-combination", |b| {
        let ast = IdentityBuilder::new()
            .lhs(Expression::one(), dot(R, R))
            .lhs(Expression::integer(-1), q(S, R))
            .rhs_unknown("L", q(G, C))
            .build();
        check_identity(&ast, b)
    }),
    ("conformal-combination", |b| {
        let ast = IdentityBuilder::new()
            .lhs(Expression::one(), dot(R, C))
            .lhs(Expression::one(), dot(C, R))
            .lhs(Expression::integer(-1), q(S, C))
            .rhs_unknown("L", q(G, C))
            .build();
        check_identity(&ast, b)
    }),
    ("recurrent-curvature-2-forms", |b| Ok(form_recurrence(b.named(R)?.as_ref(), b.nabla(R)?.as_ref()))),
    ("recurrent-conformal-2-forms", |b| Ok(form_recurrence(b.named(C)?.as_ref(), b.nabla(C)?.as_ref()))),
    ("recurrent-ricci-1-forms", |b| Ok(one_form_recurrence(b.named(S)?.as_ref(), b.nabla(S)?.as_ref()))),
    ("conformally-recurrent", |b| Ok(conformally_recurrent(b.named(C)?.as_ref(), b.nabla(C)?.as_ref()))),
    ("riemann-compatible-ricci", |b| Ok(compatibility(b.named(R)?.as_ref(), b.named(S)?.as_ref(), b.metric()))),
    ("weyl-compatible-ricci", |b| Ok(compatibility(b.named(C)?.as_ref(), b.named(S)?.as_ref(), b.metric()))),
    ("compatible-space-R", |b| family(b, R)),
    ("compatible-space-P", |b| family(b, P)),
    ("compatible-space-C", |b| family(b, C)),
    ("compatible-space-K", |b| family(b, K)),
    ("weakly-ricci-symmetric", |b| Ok(weakly_ricci_symmetric(b.named(S)?.as_ref(), b.nabla(S)?.as_ref()))),
    ("vacuum", |b| vanishes(b, "T", &named(T))),
    ("parallel-energy-momentum", |b| vanishes(b, "nabla T", &TensorAtom::nabla(named(T)))),
    ("pure-radiation", pure_radiation),
];

/// Structures whose defining conditions are not implemented.
const NOT_EVALUATED: &[&str] = &[
    "venzi-r-space",
    "weakly-symmetric",
    "super-generalized-recurrent",
    "weakly-cyclic-ricci-symmetric",
    "generalized-roter-type",
];

pub fn classify(bundle: &CurvatureBundle) -> StructureReport {
    let mut conditions: Vec<Condition> = CATALOG
        .par_iter()
        .map(|(name, check)| Condition {
            name: name.to_string(),
            outcome: check(bundle).unwrap_or_else(|e| Outcome::not_evaluated(e.to_string())),
        })
        .collect();
    conditions.extend(NOT_EVALUATED.iter().map(|name| Condition {
        name: name.to_string(),
        outcome: Outcome::not_evaluated("condition not implemented"),
    }));
    StructureReport {
        metric: bundle.metric().name().to_string(),
        conditions,
    }
}
