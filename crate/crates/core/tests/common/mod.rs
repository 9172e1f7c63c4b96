#![allow(dead_code, clippy::needless_range_loop)]

pub mod checks;
pub mod oracle;
pub mod strategies;

use std::path::PathBuf;
use std::sync::Arc;

use curvlab::chart::Chart;
use curvlab::curvature::CurvatureBundle;
use curvlab::metric::Metric;
use curvlab::parse::{parse_expression, parse_metric_file, TensorAtom};
use curvlab::tensor::Tensor;
use symexpr::Expression;

pub const CATALOG: [&str; 5] = ["vaidya", "schwarzschild", "ludwig-edgar", "minkowski", "sphere2"];

pub fn catalog_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../catalog").join(format!("{name}.metric"))
}

pub fn metric(name: &str) -> Metric {
    let text = std::fs::read_to_string(catalog_path(name)).expect("catalog file");
    Metric::from_spec(parse_metric_file(&text).expect("parses")).expect("nondegenerate")
}

pub fn bundle(name: &str) -> CurvatureBundle {
    CurvatureBundle::new(metric(name))
}

pub fn tensor(bundle: &CurvatureBundle, name: &str) -> Arc<Tensor> {
    let atom = TensorAtom::from_dump_name(name).unwrap_or_else(|| panic!("unknown tensor {name}"));
    bundle.evaluate(&atom).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// Every index tuple of length `k` over `0..n`.
pub fn all_indices(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..n.pow(k as u32)).map(move |mut flat| {
        let mut idx = vec![0; k];
        for slot in idx.iter_mut().rev() {
            *slot = flat % n;
            flat /= n;
        }
        idx
    })
}

pub fn expr(text: &str, chart: &Chart) -> Expression {
    parse_expression(text, chart).expect("parses").normalize().expect("normalizes")
}

/// One line of a component table: `NAME[i][j].. = expr`, 1-based indices.
pub struct TableEntry {
    pub name: String,
    pub index: Vec<usize>,
    pub value: Expression,
}

pub fn read_table(text: &str, chart: &Chart) -> Vec<TableEntry> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|line| {
            let (lhs, rhs) = line.split_once(" = ").expect("entry has ' = '");
            let (name, rest) = lhs.split_once('[').map_or((lhs, ""), |(n, r)| (n, r));
            let index = rest
                .split(['[', ']'])
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<usize>().expect("index") - 1)
                .collect();
            TableEntry {
                name: name.trim().to_string(),
                index,
                value: expr(rhs, chart),
            }
        })
        .collect()
}
