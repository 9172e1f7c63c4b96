//! Checks shared by the dedicated test targets and the acceptance run. Each
//! returns `Err` with a readable description of the first discrepancies.

use std::collections::{BTreeMap, HashMap};

use curvlab::classify::{check_identity, classify, compare, Outcome, StructureReport, Verdict, WitnessValue};
use curvlab::curvature::{CurvatureBundle, CurvatureError};
use curvlab::parse::{parse_identity, TensorAtom, TensorName};
use curvlab::tensor::{encode, layout, Tensor};
use symexpr::{Atom, Expression};

use super::{all_indices, bundle, expr, read_table, tensor};

pub type Check = Result<(), String>;

/// Collects failures instead of stopping at the first.
#[derive(Default)]
pub struct Failures(Vec<String>);

impl Failures {
    pub fn push(&mut self, msg: impl Into<String>) {
        self.0.push(msg.into());
    }

    pub fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        if !ok {
            self.0.push(msg());
        }
    }

    pub fn merge(&mut self, label: &str, result: Check) {
        if let Err(e) = result {
            self.0.push(format!("{label}: {e}"));
        }
    }

    pub fn finish(self) -> Check {
        if self.0.is_empty() {
            Ok(())
        } else {
            Err(self.0.join("; "))
        }
    }
}

pub fn vaidya_tables() -> Check {
    let b = bundle("vaidya");
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/vaidya_tables.txt")).map_err(|e| e.to_string())?;
    let mut by_name: BTreeMap<String, Vec<_>> = BTreeMap::new();
    for e in read_table(&text, b.metric().chart()) {
        by_name.entry(e.name.clone()).or_default().push(e);
    }
    let mut f = Failures::default();
    for (name, listed) in &by_name {
        if name == "kappa" {
            f.check(b.scalar_curvature() == listed[0].value, || format!("kappa = {}", b.scalar_curvature()));
            continue;
        }
        let t = tensor(&b, name);
        for e in listed {
            let got = t.get(&e.index);
            f.check(got == e.value, || format!("{name}{:?}: got {got}, table {}", e.index, e.value));
        }
        let lay = layout(t.dim(), t.valence(), t.symmetry());
        let covered: Vec<usize> = listed.iter().map(|e| lay.entry(encode(&e.index, t.dim())).0).collect();
        for (idx, v) in t.nonzero() {
            let rep = lay.entry(encode(&idx, t.dim())).0;
            f.check(covered.contains(&rep), || format!("{name}{idx:?} = {v} is not in the table"));
        }
    }
    f.finish()
}

fn optional(b: &CurvatureBundle, name: TensorName) -> Option<std::sync::Arc<Tensor>> {
    match b.named(name) {
        Err(CurvatureError::DimensionTooSmall { .. }) => None,
        other => Some(other.expect("curvature tensor")),
    }
}

/// `T_abcd + T_acdb + T_adbc = 0`.
pub fn first_bianchi(t: &Tensor) -> Check {
    let n = t.dim();
    for i in all_indices(n, 4) {
        let (a, b, c, d) = (i[0], i[1], i[2], i[3]);
        let s = &(&t.get(&[a, b, c, d]) + &t.get(&[a, c, d, b])) + &t.get(&[a, d, b, c]);
        if !s.is_zero() {
            return Err(format!("cyclic sum at {i:?} = {s}"));
        }
    }
    Ok(())
}

/// `∇_e R_abcd + ∇_c R_abde + ∇_d R_abec = 0`, derivative slot last.
pub fn second_bianchi(b: &CurvatureBundle) -> Check {
    let nr = tensor(b, "nabla:R");
    for i in all_indices(b.dim(), 5) {
        let (p, q, c, d, e) = (i[0], i[1], i[2], i[3], i[4]);
        let s = &(&nr.get(&[p, q, c, d, e]) + &nr.get(&[p, q, d, e, c])) + &nr.get(&[p, q, e, c, d]);
        if !s.is_zero() {
            return Err(format!("second Bianchi sum at {i:?} = {s}"));
        }
    }
    Ok(())
}

/// Every metric trace of the Weyl tensor vanishes.
pub fn weyl_trace_free(b: &CurvatureBundle) -> Check {
    let Some(c) = optional(b, TensorName::Weyl) else {
        return Ok(());
    };
    let n = b.dim();
    let ginv = b.metric().inverse();
    for (s1, s2) in [(0, 3), (0, 2), (1, 2), (1, 3)] {
        for rest in all_indices(n, 2) {
            let mut acc = Expression::zero();
            for (p, q) in all_indices(n, 2).map(|v| (v[0], v[1])) {
                if ginv[p][q].is_zero() {
                    continue;
                }
                let mut idx = [0usize; 4];
                idx[s1] = p;
                idx[s2] = q;
                let mut free = rest.iter();
                for (slot, v) in idx.iter_mut().enumerate() {
                    if slot != s1 && slot != s2 {
                        *v = *free.next().unwrap();
                    }
                }
                acc = &acc + &(&ginv[p][q] * &c.get(&idx));
            }
            if !acc.is_zero() {
                return Err(format!("trace over slots {s1},{s2} at {rest:?} = {acc}"));
            }
        }
    }
    Ok(())
}

pub fn metric_parallel(b: &CurvatureBundle) -> Check {
    let ng = tensor(b, "nabla:g");
    let first = ng.nonzero().next().map(|(idx, v)| format!("nabla g{idx:?} = {v}"));
    first.map_or(Ok(()), Err)
}

pub fn dot_kills_metric(b: &CurvatureBundle) -> Check {
    for d in ["R", "C", "P", "W", "K", "G"] {
        let atom = TensorAtom::from_dump_name(&format!("dot:{d}.g")).unwrap();
        match b.evaluate(&atom) {
            Err(CurvatureError::DimensionTooSmall { .. }) => continue,
            Err(e) => return Err(e.to_string()),
            Ok(t) => {
                if let Some((idx, v)) = t.nonzero().next() {
                    return Err(format!("({d}.g){idx:?} = {v}"));
                }
            }
        }
    }
    Ok(())
}

/// Direct evaluation of `Q(A,H)` at one index, without the symmetry store.
pub fn tachibana_at(a: &Tensor, h: &Tensor, idx: &[usize]) -> Expression {
    let k = h.valence();
    let (x, y) = (idx[k], idx[k + 1]);
    let mut acc = Expression::zero();
    for i in 0..k {
        let mut hy = idx[..k].to_vec();
        hy[i] = y;
        let mut hx = idx[..k].to_vec();
        hx[i] = x;
        acc = &acc + &(&a.get(&[x, idx[i]]) * &h.get(&hy));
        acc = &acc - &(&a.get(&[y, idx[i]]) * &h.get(&hx));
    }
    acc
}

/// `Q(A,H)` is antisymmetric in its last pair, and the stored tensor agrees
/// with the direct formula on every index.
pub fn tachibana_antisymmetric(b: &CurvatureBundle) -> Check {
    let g = b.metric().tensor().clone();
    let s = b.ricci();
    let r = b.riemann();
    for (an, a) in [("g", &g), ("S", &*s)] {
        let q = tensor(b, &format!("Q:{an}.R"));
        for idx in all_indices(b.dim(), 6) {
            let direct = tachibana_at(a, &r, &idx);
            let mut swapped = idx.clone();
            swapped.swap(4, 5);
            let other = tachibana_at(a, &r, &swapped);
            if !(&direct + &other).is_zero() {
                return Err(format!("Q({an},R) not antisymmetric at {idx:?}"));
            }
            if q.get(&idx) != direct {
                return Err(format!("Q({an},R){idx:?}: stored {} vs direct {direct}", q.get(&idx)));
            }
        }
    }
    Ok(())
}

/// Direct Kulkarni–Nomizu product.
pub fn kn_at(a: &Tensor, e: &Tensor, i: &[usize]) -> Expression {
    let (p, q, r, s) = (i[0], i[1], i[2], i[3]);
    let plus = &(&a.get(&[p, s]) * &e.get(&[q, r])) + &(&a.get(&[q, r]) * &e.get(&[p, s]));
    let minus = &(&a.get(&[p, r]) * &e.get(&[q, s])) + &(&a.get(&[q, s]) * &e.get(&[p, r]));
    &plus - &minus
}

pub fn kn_products(b: &CurvatureBundle) -> Check {
    let g = b.metric().tensor().clone();
    let s = b.ricci();
    for (label, a, e) in [("g^S", &g, &*s), ("S^S", &*s, &*s), ("g^g", &g, &g)] {
        let t = curvlab::tensor::kulkarni_nomizu(a, e).map_err(|e| e.to_string())?;
        first_bianchi(&t).map_err(|m| format!("{label}: {m}"))?;
        for idx in all_indices(b.dim(), 4) {
            if t.get(&idx) != kn_at(a, e, &idx) {
                return Err(format!("{label}{idx:?} disagrees with the direct product"));
            }
        }
    }
    Ok(())
}

/// All symbolic identities of the property suite for one metric.
pub fn identities(b: &CurvatureBundle) -> Check {
    let mut f = Failures::default();
    for name in [TensorName::Riemann, TensorName::Weyl, TensorName::Concircular, TensorName::Conharmonic, TensorName::Gaussian] {
        if let Some(t) = optional(b, name) {
            f.merge(&format!("first Bianchi {}", name.symbol()), first_bianchi(&t));
        }
    }
    f.merge("second Bianchi", second_bianchi(b));
    f.merge("C trace-free", weyl_trace_free(b));
    f.merge("nabla g", metric_parallel(b));
    f.merge("D.g", dot_kills_metric(b));
    f.merge("Q antisymmetry", tachibana_antisymmetric(b));
    f.merge("KN", kn_products(b));
    f.finish()
}

/// Vaidya tensors with `m(u) -> m`, `m', m'', ... -> 0` against Schwarzschild.
pub fn substitution_regression() -> Check {
    const NAMES: [&str; 20] = [
        "g", "R", "S", "C", "P", "W", "K", "G", "T", "nabla:R", "nabla:S", "nabla:C", "nabla:T", "dot:R.R", "dot:R.C", "dot:C.R", "dot:C.C", "Q:g.R", "Q:S.R", "Q:g.C",
    ];
    let v = bundle("vaidya");
    let s = bundle("schwarzschild");
    let mut map = HashMap::new();
    map.insert(Atom::function("m", &["u"]), Expression::atom(Atom::constant("m")));
    for k in 1..=4 {
        map.insert(Atom::function_derivative("m", &["u"], &[k]), Expression::zero());
    }
    let mut f = Failures::default();
    f.check(v.scalar_curvature().substitute(&map).unwrap() == s.scalar_curvature(), || "kappa".into());
    for name in NAMES {
        let (tv, ts) = (tensor(&v, name), tensor(&s, name));
        for idx in all_indices(4, tv.valence()) {
            let left = tv.get(&idx).substitute(&map).map_err(|e| e.to_string())?;
            let right = ts.get(&idx);
            if left != right {
                f.push(format!("{name}{idx:?}: {left} vs {right}"));
                break;
            }
        }
    }
    f.finish()
}

// Report expectations.

pub struct Expect<'a> {
    pub report: &'a StructureReport,
    pub bundle: &'a CurvatureBundle,
    pub failures: Failures,
}

impl<'a> Expect<'a> {
    pub fn new(report: &'a StructureReport, bundle: &'a CurvatureBundle) -> Self {
        Expect {
            report,
            bundle,
            failures: Failures::default(),
        }
    }

    pub fn e(&self, text: &str) -> Expression {
        expr(text, self.bundle.metric().chart())
    }

    fn outcome(&mut self, name: &str) -> Option<&'a Outcome> {
        let o = self.report.get(name);
        if o.is_none() {
            self.failures.push(format!("{name}: missing from report"));
        }
        o
    }

    pub fn verdict(&mut self, name: &str, want: Verdict) {
        if let Some(o) = self.outcome(name) {
            let got = o.verdict;
            self.failures.check(got == want, || format!("{name}: {got}, expected {want}"));
        }
    }

    pub fn holds(&mut self, name: &str) {
        self.verdict(name, Verdict::Holds);
    }

    pub fn fails(&mut self, name: &str) {
        self.verdict(name, Verdict::Fails);
    }

    pub fn scalar(&mut self, name: &str, witness: &str, want: &Expression) {
        if let Some(o) = self.outcome(name) {
            let got = o.scalar(witness).cloned();
            self.failures
                .check(got.as_ref() == Some(want), || format!("{name}: witness {witness} = {got:?}, expected {want}"));
        }
    }

    pub fn covector(&mut self, name: &str, witness: &str, want: &[Expression]) {
        if let Some(o) = self.outcome(name) {
            let got = o.covector(witness).map(<[Expression]>::to_vec);
            self.failures
                .check(got.as_deref() == Some(want), || format!("{name}: witness {witness} = {got:?}"));
        }
    }

    /// Scalar witnesses whose names start with `prefix`.
    pub fn scalars_with_prefix(&mut self, name: &str, prefix: &str) -> Vec<Expression> {
        self.outcome(name)
            .map(|o| {
                o.witnesses
                    .iter()
                    .filter(|w| w.name.starts_with(prefix))
                    .filter_map(|w| match &w.value {
                        WitnessValue::Scalar(e) => Some(e.clone()),
                        _ => None,
                    })
                    .collect()
            })
            .unwrap_or_default()
    }

    /// Checks an identity directly through the identity checker.
    pub fn identity(&mut self, text: &str, want: Verdict) {
        let ast = match parse_identity(text, self.bundle.metric().chart()) {
            Ok(a) => a,
            Err(e) => return self.failures.push(format!("{text}: {e}")),
        };
        match check_identity(&ast, self.bundle) {
            Ok(o) => self.failures.check(o.verdict == want, || format!("{text}: {}, expected {want}", o.verdict)),
            Err(e) => self.failures.push(format!("{text}: {e}")),
        }
    }

    /// A compatible family: parameter count and its nonzero entries, keyed
    /// by 1-based `(i, j)`. Entries not listed must be absent.
    pub fn family(&mut self, name: &str, count: usize, entries: &[((usize, usize), Expression)]) {
        let Some(o) = self.outcome(name) else { return };
        self.failures.check(o.is_holds(), || format!("{name}: {}", o.verdict));
        let params = o.witness("parameters").map(ToString::to_string);
        self.failures
            .check(params.as_deref() == Some(count.to_string().as_str()), || format!("{name}: parameters = {params:?}, expected {count}"));
        let listed: Vec<(String, Expression)> = o
            .witnesses
            .iter()
            .filter(|w| w.name.starts_with("E["))
            .filter_map(|w| match &w.value {
                WitnessValue::Scalar(e) => Some((w.name.clone(), e.clone())),
                _ => None,
            })
            .collect();
        for ((i, j), want) in entries {
            let label = format!("E[{i}][{j}]");
            let got = listed.iter().find(|(n, _)| *n == label).map(|(_, e)| e);
            self.failures.check(got == Some(want), || format!("{name}: {label} = {got:?}, expected {want}"));
        }
        for (label, v) in &listed {
            let expected = entries.iter().any(|((i, j), _)| format!("E[{i}][{j}]") == *label);
            self.failures.check(expected, || format!("{name}: unexpected entry {label} = {v}"));
        }
    }

    pub fn finish(self) -> Check {
        self.failures.finish()
    }
}

pub fn param(name: &str) -> Expression {
    Expression::atom(Atom::constant(name))
}

/// The 6-parameter block-diagonal family, with `E[2][1]` given.
pub fn block_family(e21: Expression) -> Vec<((usize, usize), Expression)> {
    vec![
        ((1, 1), param("a11")),
        ((1, 2), param("a12")),
        ((2, 1), e21),
        ((2, 2), param("a22")),
        ((3, 3), param("a33")),
        ((3, 4), param("a34")),
        ((4, 3), param("a34")),
        ((4, 4), param("a44")),
    ]
}

/// Vaidya structure report.
pub fn vaidya_report() -> Check {
    let b = bundle("vaidya");
    let report = classify(&b);
    let mut x = Expect::new(&report, &b);
    let zero = Expression::zero();
    let l = x.e("m(u)/r^3");

    x.holds("scalar-flat");
    x.scalar("scalar-flat", "kappa", &zero);
    x.fails("ricci-flat");
    x.fails("ricci-symmetric");
    x.holds("riemann-equals-concircular");
    x.holds("weyl-equals-conharmonic");
    x.fails("conformally-semisymmetric");

    x.fails("pseudosymmetric");
    let mut ratios = x.scalars_with_prefix("pseudosymmetric", "L[");
    ratios.sort_by_key(ToString::to_string);
    let mut want = vec![x.e("-2*m(u)/r^3"), l.clone()];
    want.sort_by_key(ToString::to_string);
    x.failures.check(ratios == want, || format!("pseudosymmetric: conflicting ratios {ratios:?}"));

    x.holds("weyl-pseudosymmetric");
    x.scalar("weyl-pseudosymmetric", "L", &l);
    x.holds("curvature-combination");
    x.scalar("curvature-combination", "L", &l);
    x.identity("R.C + C.R = (2*m(u)/r^3)*Q(g,C) + Q(S,C)", Verdict::Holds);
    x.identity("C.C = (m(u)/r^3)*Q(g,C)", Verdict::Holds);
    x.identity("R.R - Q(S,R) = (m(u)/r^3)*Q(g,C)", Verdict::Holds);

    x.fails("recurrent-curvature-2-forms");
    x.fails("recurrent-ricci-1-forms");
    x.holds("recurrent-conformal-2-forms");
    let pi = [x.e("m'(u)/m(u)"), zero.clone(), zero.clone(), zero.clone()];
    x.covector("recurrent-conformal-2-forms", "Pi", &pi);

    x.fails("einstein");
    x.holds("ricci-simple");
    x.scalar("ricci-simple", "beta", &x.e("2*m'(u)"));
    x.scalar("ricci-simple", "norm-eta", &zero);
    let reference = [x.e("1/r"), zero.clone(), zero.clone(), zero.clone()];
    match report.get("ricci-simple").and_then(|o| o.covector("eta")) {
        Some(eta) => {
            let proportional = (0..4).all(|i| (0..4).all(|j| (&(&eta[i] * &reference[j]) - &(&eta[j] * &reference[i])).is_zero()));
            x.failures.check(proportional && !eta[0].is_zero(), || format!("ricci-simple: eta = {eta:?}"));
        }
        None => x.failures.push("ricci-simple: no eta witness"),
    }
    x.holds("ricci-wedge-square-zero");
    x.holds("ricci-square-zero");

    x.fails("codazzi-ricci");
    x.fails("cyclic-parallel-ricci");
    x.holds("riemann-compatible-ricci");
    x.holds("weyl-compatible-ricci");

    let coupled = &param("a12") + &(&x.e("r*m'(u)/m(u)") * &param("a22"));
    x.family("compatible-space-R", 6, &block_family(coupled.clone()));
    x.family("compatible-space-P", 6, &block_family(coupled));
    x.family("compatible-space-C", 6, &block_family(param("a12")));
    x.family("compatible-space-K", 6, &block_family(param("a12")));
    x.finish()
}

/// Schwarzschild structure report.
pub fn schwarzschild_report() -> Check {
    let b = bundle("schwarzschild");
    let report = classify(&b);
    let mut x = Expect::new(&report, &b);
    for name in [
        "ricci-flat",
        "riemann-equals-projective",
        "riemann-equals-concircular",
        "riemann-equals-conharmonic",
        "riemann-equals-weyl",
        "harmonic-curvature",
        "pseudosymmetric",
        "vacuum",
    ] {
        x.holds(name);
    }
    x.scalar("pseudosymmetric", "L", &x.e("m/r^3"));
    x.identity("R.R = (m/r^3)*Q(g,R)", Verdict::Holds);
    x.identity("T = 0", Verdict::Holds);
    x.family("compatible-space-R", 6, &block_family(param("a12")));
    x.finish()
}

/// Side-by-side comparison of Vaidya against Ludwig–Edgar. Rows named in
/// `skip` are not checked.
pub fn radiation_comparison(skip: &[&str]) -> Check {
    let left = classify(&bundle("vaidya"));
    let right = classify(&bundle("ludwig-edgar"));
    let table = compare(&left, &right);
    let mut f = Failures::default();
    let mut row = |name: &str, l: Verdict, r: Verdict| match table.row(name).filter(|_| !skip.contains(&name)) {
        Some(row) => f.check(row.left == l && row.right == r, || format!("{name}: vaidya {}, ludwig-edgar {}", row.left, row.right)),
        None if skip.contains(&name) => {}
        None => f.push(format!("{name}: missing from comparison")),
    };
    use Verdict::{Fails, Holds, NotEvaluated};
    // Shared properties.
    row("scalar-flat", Holds, Holds);
    row("codazzi-ricci", Fails, Fails);
    row("cyclic-parallel-ricci", Fails, Fails);
    row("ricci-simple", Holds, Holds);
    row("riemann-compatible-ricci", Holds, Holds);
    row("weyl-compatible-ricci", Holds, Holds);
    row("recurrent-conformal-2-forms", Holds, Holds);
    // Distinguishing properties.
    row("semisymmetric", Fails, Holds);
    row("weakly-ricci-symmetric", Fails, Holds);
    row("parallel-energy-momentum", Fails, Holds);
    row("venzi-r-space", NotEvaluated, NotEvaluated);
    if let Some(r) = table.row("venzi-r-space") {
        f.check(r.marker() == "n/a", || format!("venzi-r-space marker {}", r.marker()));
    }
    f.finish()
}
