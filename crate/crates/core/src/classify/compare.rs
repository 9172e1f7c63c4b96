use std::fmt;

use super::{StructureReport, Verdict};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComparisonRow {
    pub name: String,
    pub left: Verdict,
    pub right: Verdict,
}

impl ComparisonRow {
    pub fn marker(&self) -> &'static str {
        if self.left == Verdict::NotEvaluated || self.right == Verdict::NotEvaluated {
            "n/a"
        } else if self.left == self.right {
            "agree"
        } else {
            "differ"
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comparison {
    pub left: String,
    pub right: String,
    pub rows: Vec<ComparisonRow>,
}

impl Comparison {
    pub fn row(&self, name: &str) -> Option<&ComparisonRow> {
        self.rows.iter().find(|r| r.name == name)
    }
}

pub fn compare(left: &StructureReport, right: &StructureReport) -> Comparison {
    let rows = left
        .conditions
        .iter()
        .filter_map(|c| {
            right.verdict(&c.name).map(|r| ComparisonRow {
                name: c.name.clone(),
                left: c.outcome.verdict,
                right: r,
            })
        })
        .collect();
    Comparison {
        left: left.metric.clone(),
        right: right.metric.clone(),
        rows,
    }
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.rows.iter().map(|r| r.name.len()).max().unwrap_or(0).max("condition".len());
        let lw = self.left.len().max("not-evaluated".len());
        let rw = self.right.len().max("not-evaluated".len());
        writeln!(f, "{:width$}  {:lw$}  {:rw$}  marker", "condition", self.left, self.right)?;
        for r in &self.rows {
            writeln!(f, "{:width$}  {:lw$}  {:rw$}  {}", r.name, r.left.to_string(), r.right.to_string(), r.marker())?;
        }
        Ok(())
    }
}
