//! Text and JSON-lines dumps of nonzero canonical components.

use std::fmt;

use symexpr::Expression;

use super::Tensor;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DumpFormat {
    #[default]
    Text,
    JsonLines,
}

/// One dumped component; `index` is 1-based and empty for scalars.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DumpLine {
    pub name: String,
    pub index: Vec<usize>,
    pub value: String,
}

impl DumpLine {
    pub fn render(&self, format: DumpFormat) -> String {
        match format {
            DumpFormat::Text => self.to_string(),
            DumpFormat::JsonLines => serde_json::json!({
                "name": self.name,
                "index": self.index,
                "value": self.value,
            })
            .to_string(),
        }
    }
}

impl fmt::Display for DumpLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        for i in &self.index {
            write!(f, "[{i}]")?;
        }
        write!(f, " = {}", self.value)
    }
}

impl Tensor {
    pub fn dump_lines(&self, name: &str) -> Vec<DumpLine> {
        self.nonzero()
            .map(|(idx, v)| DumpLine {
                name: name.to_string(),
                index: idx.iter().map(|i| i + 1).collect(),
                value: v.to_string(),
            })
            .collect()
    }

    pub fn dump(&self, name: &str, format: DumpFormat) -> String {
        render_lines(&self.dump_lines(name), format)
    }
}

pub fn scalar_line(name: &str, value: &Expression) -> DumpLine {
    DumpLine {
        name: name.to_string(),
        index: Vec::new(),
        value: value.to_string(),
    }
}

pub fn render_lines(lines: &[DumpLine], format: DumpFormat) -> String {
    let mut out = String::new();
    for l in lines {
        out.push_str(&l.render(format));
        out.push('\n');
    }
    out
}
