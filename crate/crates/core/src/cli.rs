//! Command-line front end.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::catalog;
use crate::classify::{check_identity, classify, compare, StructureReport};
use crate::curvature::{CurvatureBundle, CurvatureError};
use crate::metric::{Metric, MetricError};
use crate::parse::{parse_identity, parse_metric_file, ParseError, ParseErrorKind, TensorAtom};
use crate::tensor::{render_lines, scalar_line, DumpFormat, DumpLine};

#[derive(Parser, Debug)]
#[command(name = "curvlab", version, about = "Symbolic curvature of metrics and curvature-condition checks")]
pub struct Cli {
    /// Output format for tensor dumps.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub dump_format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Format {
    Text,
    JsonLines,
}

impl From<Format> for DumpFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Text => DumpFormat::Text,
            Format::JsonLines => DumpFormat::JsonLines,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Dump the nonzero components of a tensor.
    Compute {
        /// Metric file, or a catalog name.
        metric: String,
        /// g, ginv, gamma, R, S, kappa, C, P, W, K, G, T, nabla:X, dot:X.Y or Q:X.Y.
        tensor: String,
        /// Write the dump here instead of standard output.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Decide an identity such as "C.C = L*Q(g,C)".
    Check { metric: String, identity: String },
    /// Evaluate the full condition catalog.
    Classify { metric: String },
    /// Side-by-side classification of two metrics.
    Compare { left: String, right: String },
    /// Shipped catalog entries.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Subcommand, Debug)]
pub enum CatalogAction {
    List,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}:{source}")]
    Parse { path: String, source: ParseError },
    #[error("identity:{0}")]
    Identity(ParseError),
    #[error("{path}: {source}")]
    Degenerate { path: String, source: MetricError },
    #[error("unknown tensor `{0}`")]
    UnknownTensor(String),
    #[error(transparent)]
    Curvature(#[from] CurvatureError),
}

impl CliError {
    /// 2 for malformed input, 3 for a degenerate metric.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Degenerate { .. } => 3,
            CliError::Parse { source, .. } if source.kind == ParseErrorKind::DegenerateMetric => 3,
            _ => 2,
        }
    }
}

pub fn load(arg: &str) -> Result<CurvatureBundle, CliError> {
    let path = catalog::resolve(arg);
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(&path).map_err(|source| CliError::Io { path: shown.clone(), source })?;
    let spec = parse_metric_file(&text).map_err(|source| CliError::Parse { path: shown.clone(), source })?;
    let metric = Metric::from_spec(spec).map_err(|source| CliError::Degenerate { path: shown, source })?;
    Ok(CurvatureBundle::new(metric))
}

fn matrix_lines(name: &str, m: &[Vec<symexpr::Expression>]) -> Vec<DumpLine> {
    let mut out = Vec::new();
    for (i, row) in m.iter().enumerate() {
        for (j, v) in row.iter().enumerate().skip(i) {
            if !v.is_zero() {
                out.push(DumpLine {
                    name: name.to_string(),
                    index: vec![i + 1, j + 1],
                    value: v.to_string(),
                });
            }
        }
    }
    out
}

pub fn dump(bundle: &CurvatureBundle, tensor: &str) -> Result<Vec<DumpLine>, CliError> {
    Ok(match tensor {
        "kappa" => vec![scalar_line("kappa", &bundle.scalar_curvature())],
        "ginv" => matrix_lines("ginv", bundle.metric().inverse()),
        "gamma" => {
            let n = bundle.dim();
            let gamma = bundle.connection();
            let mut out = Vec::new();
            for l in 0..n {
                for i in 0..n {
                    for j in i..n {
                        let v = gamma.get(l, i, j);
                        if !v.is_zero() {
                            out.push(DumpLine {
                                name: "gamma".into(),
                                index: vec![l + 1, i + 1, j + 1],
                                value: v.to_string(),
                            });
                        }
                    }
                }
            }
            out
        }
        name => {
            let atom = TensorAtom::from_dump_name(name).ok_or_else(|| CliError::UnknownTensor(name.to_string()))?;
            bundle.evaluate(&atom)?.dump_lines(name)
        }
    })
}

pub fn report(arg: &str) -> Result<StructureReport, CliError> {
    Ok(classify(&load(arg)?))
}

/// Runs a parsed command line, writing to `out`; returns the exit code.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    let io = |e: std::io::Error| CliError::Io { path: "<output>".into(), source: e };
    match &cli.command {
        Command::Compute { metric, tensor, output } => {
            let bundle = load(metric)?;
            let text = render_lines(&dump(&bundle, tensor)?, cli.dump_format.into());
            match output {
                Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
                    path: path.display().to_string(),
                    source,
                })?,
                None => out.write_all(text.as_bytes()).map_err(io)?,
            }
            Ok(0)
        }
        Command::Check { metric, identity } => {
            let bundle = load(metric)?;
            let ast = parse_identity(identity, bundle.metric().chart()).map_err(CliError::Identity)?;
            let outcome = check_identity(&ast, &bundle)?;
            write!(out, "{}", outcome.verdict).map_err(io)?;
            for w in &outcome.witnesses {
                write!(out, "; witness {} = {}", w.name, w.value).map_err(io)?;
            }
            writeln!(out).map_err(io)?;
            Ok(if outcome.is_holds() { 0 } else { 1 })
        }
        Command::Classify { metric } => {
            write!(out, "{}", report(metric)?).map_err(io)?;
            Ok(0)
        }
        Command::Compare { left, right } => {
            let (l, r) = (report(left)?, report(right)?);
            write!(out, "{}", compare(&l, &r)).map_err(io)?;
            Ok(0)
        }
        Command::Catalog { action: CatalogAction::List } => {
            for e in catalog::list() {
                let golden = e.report.as_ref().map_or(String::new(), |p| format!(" (report {})", p.display()));
                writeln!(out, "{}\t{}{golden}", e.name, e.metric.display()).map_err(io)?;
            }
            Ok(0)
        }
    }
}
