//! Line-based metric definition files.
//!
//! ```text
//! metric vaidya
//! dim 4
//! coords u r theta phi
//! function m(u)
//! g[1][1] = -(1 - 2*m(u)/r)
//! g[1][2] = -1
//! ```

use symexpr::{ExprError, Expression};

use super::expr::parse_expression_at;
use super::lexer::{Lexer, TokenKind, Tokens};
use super::{ParseError, ParseErrorKind, Position};
use crate::chart::{Chart, ChartError};
use crate::linalg::{determinant, Matrix};

#[derive(Clone, Debug, PartialEq)]
pub struct MetricSpec {
    pub name: String,
    pub chart: Chart,
    /// Symmetric component matrix, 0-based.
    pub components: Matrix,
}

struct Line<'a> {
    number: usize,
    text: &'a str,
}

fn strip_comment(text: &str) -> &str {
    match text.find('#') {
        Some(i) => &text[..i],
        None => text,
    }
}

fn pos(line: usize, column: usize) -> Position {
    Position { line, column }
}

fn chart_error(line: usize, e: ChartError) -> ParseError {
    ParseError::new(pos(line, 1), ParseErrorKind::Invalid(e.to_string()))
}

pub fn parse_metric_file(text: &str) -> Result<MetricSpec, ParseError> {
    let lines: Vec<Line> = text
        .lines()
        .enumerate()
        .map(|(i, l)| Line {
            number: i + 1,
            text: strip_comment(l),
        })
        .filter(|l| !l.text.trim().is_empty())
        .collect();

    let mut name = String::from("unnamed");
    let mut dim: Option<(usize, usize)> = None;
    let mut coords: Option<(Vec<String>, usize)> = None;
    let mut functions: Vec<(String, Vec<String>, usize)> = Vec::new();
    let mut constants: Vec<(String, usize)> = Vec::new();
    let mut assignments: Vec<&Line> = Vec::new();

    for line in &lines {
        let trimmed = line.text.trim_start();
        let indent = line.text.len() - trimmed.len();
        let (keyword, rest) = trimmed.split_once(char::is_whitespace).unwrap_or((trimmed, ""));
        let rest_words: Vec<&str> = rest.split_whitespace().collect();
        match keyword {
            "metric" => name = rest.trim().to_string(),
            "dim" => {
                let n = rest
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| ParseError::new(pos(line.number, indent + 5), ParseErrorKind::Invalid("`dim` needs a positive integer".into())))?;
                dim = Some((n, line.number));
            }
            "coords" => coords = Some((rest_words.iter().map(|s| s.to_string()).collect(), line.number)),
            "function" => {
                let tokens = Lexer::tokenize(rest, pos(line.number, indent + keyword.len() + 2))?;
                let mut t = Tokens::new(tokens);
                let fname = match t.next().kind {
                    TokenKind::Ident(s) => s,
                    _ => return Err(ParseError::new(pos(line.number, indent + 1), ParseErrorKind::Invalid("expected `function name(args)`".into()))),
                };
                t.expect(TokenKind::LParen, "`(`")?;
                let mut args = Vec::new();
                loop {
                    match t.next().kind {
                        TokenKind::Ident(s) => args.push(s),
                        _ => return Err(ParseError::new(pos(line.number, indent + 1), ParseErrorKind::Invalid("expected an argument name".into()))),
                    }
                    if !t.eat(&TokenKind::Comma) {
                        break;
                    }
                }
                t.expect(TokenKind::RParen, "`)`")?;
                t.expect_end()?;
                functions.push((fname, args, line.number));
            }
            "constant" => {
                for w in rest_words {
                    constants.push((w.to_string(), line.number));
                }
            }
            _ if trimmed.starts_with('g') => assignments.push(line),
            _ => {
                return Err(ParseError::new(
                    pos(line.number, indent + 1),
                    ParseErrorKind::Invalid(format!("unknown directive `{keyword}`")),
                ))
            }
        }
    }

    let coord_names = match (&coords, dim) {
        (Some((c, l)), Some((n, _))) if c.len() != n => {
            return Err(ParseError::new(
                pos(*l, 1),
                ParseErrorKind::Invalid(format!("`coords` lists {} names but `dim` is {n}", c.len())),
            ))
        }
        (Some((c, _)), _) => c.clone(),
        (None, Some((n, _))) => (1..=n).map(|i| format!("x{i}")).collect(),
        (None, None) => return Err(ParseError::new(pos(1, 1), ParseErrorKind::Invalid("missing `dim` or `coords`".into()))),
    };
    let header_line = coords.as_ref().map(|c| c.1).or(dim.map(|d| d.1)).unwrap_or(1);
    let mut chart = Chart::new(&coord_names).map_err(|e| chart_error(header_line, e))?;
    for (c, l) in &constants {
        chart.declare_constant(c).map_err(|e| chart_error(*l, e))?;
    }
    for (f, args, l) in &functions {
        chart.declare_function(f, args).map_err(|e| chart_error(*l, e))?;
    }

    let n = chart.dim();
    let mut assigned: Vec<Vec<Option<(Expression, usize)>>> = vec![vec![None; n]; n];
    for line in assignments {
        let (i, j, value) = parse_assignment(line, &chart)?;
        if let Some((_, _)) = &assigned[i][j] {
            return Err(ParseError::new(pos(line.number, 1), ParseErrorKind::DuplicateAssignment(i + 1, j + 1)));
        }
        if i != j {
            if let Some((other, _)) = &assigned[j][i] {
                if *other != value {
                    return Err(ParseError::new(pos(line.number, 1), ParseErrorKind::AsymmetricAssignment(i + 1, j + 1)));
                }
            }
        }
        assigned[i][j] = Some((value, line.number));
    }
    let mut components = vec![vec![Expression::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            if let Some((v, _)) = assigned[i][j].as_ref().or(assigned[j][i].as_ref()) {
                components[i][j] = v.clone();
            }
        }
    }
    if determinant(&components).is_zero() {
        return Err(ParseError::new(pos(header_line, 1), ParseErrorKind::DegenerateMetric));
    }
    Ok(MetricSpec { name, chart, components })
}

fn parse_assignment(line: &Line, chart: &Chart) -> Result<(usize, usize, Expression), ParseError> {
    let n = chart.dim();
    let eq = line
        .text
        .find('=')
        .ok_or_else(|| ParseError::new(pos(line.number, 1), ParseErrorKind::Invalid("expected `g[i][j] = expression`".into())))?;
    let lhs = &line.text[..eq];
    let mut t = Tokens::new(Lexer::tokenize(lhs, pos(line.number, 1))?);
    match t.next().kind {
        TokenKind::Ident(s) if s == "g" => {}
        _ => return Err(ParseError::new(pos(line.number, 1), ParseErrorKind::Invalid("expected `g[i][j] = expression`".into()))),
    }
    let mut idx = [0usize; 2];
    for slot in &mut idx {
        t.expect(TokenKind::LBracket, "`[`")?;
        let tok = t.next();
        let v = match tok.kind {
            TokenKind::Number(v) => v,
            _ => return Err(ParseError::new(tok.position, ParseErrorKind::Invalid("expected an index".into()))),
        };
        let v: usize = v.try_into().unwrap_or(usize::MAX);
        if v == 0 || v > n {
            return Err(ParseError::new(tok.position, ParseErrorKind::IndexOutOfRange { index: v, dim: n }));
        }
        *slot = v - 1;
        t.expect(TokenKind::RBracket, "`]`")?;
    }
    t.expect_end()?;
    let origin = pos(line.number, eq + 2);
    let raw = parse_expression_at(&line.text[eq + 1..], chart, origin)?;
    let value = raw.normalize().map_err(|e| match e {
        ExprError::DivisionByZero => ParseError::new(origin, ParseErrorKind::DivisionByZero),
        other => ParseError::new(origin, ParseErrorKind::Invalid(other.to_string())),
    })?;
    Ok((idx[0], idx[1], value))
}
