//! The curvature-identity language, e.g. `R.R - Q(S,R) = L*Q(g,C)`.

use std::fmt;

use num_bigint::BigInt;
use symexpr::{Expression, Rational};

use super::expr::ExprParser;
use super::lexer::{Lexer, Token, TokenKind, Tokens};
use super::{ParseError, ParseErrorKind, Position};
use crate::chart::Chart;

/// Named tensors of the curvature catalog.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TensorName {
    Riemann,
    Ricci,
    Weyl,
    Projective,
    Concircular,
    Conharmonic,
    Gaussian,
    Metric,
    EnergyMomentum,
}

impl TensorName {
    pub const ALL: [TensorName; 9] = [
        TensorName::Riemann,
        TensorName::Ricci,
        TensorName::Weyl,
        TensorName::Projective,
        TensorName::Concircular,
        TensorName::Conharmonic,
        TensorName::Gaussian,
        TensorName::Metric,
        TensorName::EnergyMomentum,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            TensorName::Riemann => "R",
            TensorName::Ricci => "S",
            TensorName::Weyl => "C",
            TensorName::Projective => "P",
            TensorName::Concircular => "W",
            TensorName::Conharmonic => "K",
            TensorName::Gaussian => "G",
            TensorName::Metric => "g",
            TensorName::EnergyMomentum => "T",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|t| t.symbol() == s)
    }

    pub fn valence(self) -> usize {
        match self {
            TensorName::Ricci | TensorName::Metric | TensorName::EnergyMomentum => 2,
            _ => 4,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TensorAtom {
    Named(TensorName),
    /// `D.H`: curvature operator of the (0,4) tensor `D` acting on `H`.
    Dot(Box<TensorAtom>, Box<TensorAtom>),
    /// `Q(A,H)` for a symmetric (0,2) tensor `A`.
    Tachibana(Box<TensorAtom>, Box<TensorAtom>),
    Nabla(Box<TensorAtom>),
    /// Kulkarni-Nomizu product of two (0,2) tensors.
    Wedge(Box<TensorAtom>, Box<TensorAtom>),
}

impl TensorAtom {
    pub fn named(name: TensorName) -> Self {
        TensorAtom::Named(name)
    }

    pub fn dot(d: TensorAtom, h: TensorAtom) -> Self {
        TensorAtom::Dot(Box::new(d), Box::new(h))
    }

    pub fn tachibana(a: TensorAtom, h: TensorAtom) -> Self {
        TensorAtom::Tachibana(Box::new(a), Box::new(h))
    }

    pub fn nabla(t: TensorAtom) -> Self {
        TensorAtom::Nabla(Box::new(t))
    }

    pub fn wedge(a: TensorAtom, b: TensorAtom) -> Self {
        TensorAtom::Wedge(Box::new(a), Box::new(b))
    }

    pub fn valence(&self) -> usize {
        match self {
            TensorAtom::Named(n) => n.valence(),
            TensorAtom::Dot(_, h) | TensorAtom::Tachibana(_, h) => h.valence() + 2,
            TensorAtom::Nabla(t) => t.valence() + 1,
            TensorAtom::Wedge(..) => 4,
        }
    }

    /// Parses the compact names used by the dump command: `R`, `nabla:S`,
    /// `dot:R.C`, `Q:g.R`.
    pub fn from_dump_name(name: &str) -> Option<Self> {
        if let Some(rest) = name.strip_prefix("nabla:") {
            return Some(TensorAtom::nabla(Self::from_dump_name(rest)?));
        }
        if let Some(rest) = name.strip_prefix("dot:") {
            let (d, h) = rest.split_once('.')?;
            let d = TensorName::from_symbol(d).filter(|d| d.valence() == 4)?;
            return Some(TensorAtom::dot(TensorAtom::Named(d), Self::from_dump_name(h)?));
        }
        if let Some(rest) = name.strip_prefix("Q:") {
            let (a, h) = rest.split_once('.')?;
            let a = TensorName::from_symbol(a).filter(|a| a.valence() == 2)?;
            return Some(TensorAtom::tachibana(TensorAtom::Named(a), Self::from_dump_name(h)?));
        }
        TensorName::from_symbol(name).map(TensorAtom::Named)
    }
}

impl fmt::Display for TensorAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TensorAtom::Named(n) => f.write_str(n.symbol()),
            TensorAtom::Dot(d, h) => write!(f, "{d}.{h}"),
            TensorAtom::Tachibana(a, h) => write!(f, "Q({a},{h})"),
            TensorAtom::Nabla(t) => match **t {
                TensorAtom::Named(_) | TensorAtom::Nabla(_) => write!(f, "nabla {t}"),
                _ => write!(f, "nabla({t})"),
            },
            TensorAtom::Wedge(a, b) => write!(f, "wedge({a},{b})"),
        }
    }
}

/// Coefficient of a term: a known expression, or a known expression times
/// an unknown scalar.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Known(Expression),
    Unknown { factor: Expression, name: String },
}

#[derive(Clone, Debug, PartialEq)]
pub struct IdentityTerm {
    pub coefficient: Scalar,
    pub tensor: TensorAtom,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IdentityAst {
    pub lhs: Vec<IdentityTerm>,
    pub rhs: Vec<IdentityTerm>,
    /// Unknown scalar names in order of first appearance.
    pub unknowns: Vec<String>,
    /// Common valence of every tensor atom; `None` when both sides are zero.
    pub valence: Option<usize>,
}

pub fn parse_identity(text: &str, chart: &Chart) -> Result<IdentityAst, ParseError> {
    let mut t = Tokens::new(Lexer::tokenize(text, Position { line: 1, column: 1 })?);
    let mut p = IdentityParser {
        chart,
        unknowns: Vec::new(),
        valence: None,
    };
    let lhs = p.side(&mut t)?;
    t.expect(TokenKind::Equals, "`=`")?;
    let rhs = p.side(&mut t)?;
    t.expect_end()?;
    Ok(IdentityAst {
        lhs,
        rhs,
        unknowns: p.unknowns,
        valence: p.valence,
    })
}

struct IdentityParser<'a> {
    chart: &'a Chart,
    unknowns: Vec<String>,
    valence: Option<usize>,
}

enum Factor {
    Scalar(Expression),
    Unknown(String),
    Tensor(TensorAtom),
    Zero,
}

impl IdentityParser<'_> {
    fn side(&mut self, t: &mut Tokens) -> Result<Vec<IdentityTerm>, ParseError> {
        let mut terms = Vec::new();
        let mut negative = t.eat(&TokenKind::Minus);
        loop {
            if let Some(term) = self.term(t, negative)? {
                terms.push(term);
            }
            if t.eat(&TokenKind::Plus) {
                negative = false;
            } else if t.eat(&TokenKind::Minus) {
                negative = true;
            } else {
                return Ok(terms);
            }
        }
    }

    fn term(&mut self, t: &mut Tokens, negative: bool) -> Result<Option<IdentityTerm>, ParseError> {
        let start = t.peek().position;
        let mut coefficient = if negative { Expression::integer(-1) } else { Expression::one() };
        let mut unknown: Option<String> = None;
        let mut tensor: Option<TensorAtom> = None;
        let mut zero = false;
        loop {
            let here = t.peek().position;
            match self.factor(t)? {
                Factor::Scalar(e) => coefficient = &coefficient * &e,
                Factor::Zero => zero = true,
                Factor::Unknown(name) => {
                    if unknown.is_some() {
                        return Err(ParseError::new(here, ParseErrorKind::Invalid("unknown scalars must appear linearly".into())));
                    }
                    if !self.unknowns.contains(&name) {
                        self.unknowns.push(name.clone());
                    }
                    unknown = Some(name);
                }
                Factor::Tensor(atom) => {
                    if tensor.is_some() {
                        return Err(ParseError::new(here, ParseErrorKind::Invalid("a term holds exactly one tensor".into())));
                    }
                    let v = atom.valence();
                    match self.valence {
                        Some(expected) if expected != v => {
                            return Err(ParseError::new(here, ParseErrorKind::ValenceMismatch { expected, found: v }))
                        }
                        _ => self.valence = Some(v),
                    }
                    tensor = Some(atom);
                }
            }
            if !t.eat(&TokenKind::Star) {
                break;
            }
        }
        if zero || coefficient.is_zero() {
            return Ok(None);
        }
        let Some(tensor) = tensor else {
            return Err(ParseError::new(start, ParseErrorKind::Invalid("term has no tensor".into())));
        };
        let coefficient = match unknown {
            Some(name) => Scalar::Unknown { factor: coefficient, name },
            None => Scalar::Known(coefficient),
        };
        Ok(Some(IdentityTerm { coefficient, tensor }))
    }

    fn factor(&mut self, t: &mut Tokens) -> Result<Factor, ParseError> {
        let tok = t.peek().clone();
        match &tok.kind {
            TokenKind::Number(n) => {
                t.next();
                let mut q = Rational::from_integer(n.clone());
                if t.peek().kind == TokenKind::Slash {
                    if let TokenKind::Number(d) = t.peek_at(1).kind.clone() {
                        t.next();
                        t.next();
                        if d == BigInt::from(0) {
                            return Err(ParseError::new(tok.position, ParseErrorKind::DivisionByZero));
                        }
                        q /= Rational::from_integer(d);
                    }
                }
                if q == Rational::from_integer(BigInt::from(0)) {
                    return Ok(Factor::Zero);
                }
                Ok(Factor::Scalar(Expression::constant(q)))
            }
            TokenKind::LParen => {
                t.next();
                let raw = ExprParser { chart: self.chart }.sum(t)?;
                t.expect(TokenKind::RParen, "`)`")?;
                let e = raw.normalize().map_err(|_| ParseError::new(tok.position, ParseErrorKind::DivisionByZero))?;
                Ok(Factor::Scalar(e))
            }
            TokenKind::Ident(name) => {
                if TensorName::from_symbol(name).is_some() || matches!(name.as_str(), "Q" | "nabla" | "wedge") {
                    return Ok(Factor::Tensor(self.tensor(t)?));
                }
                if name.starts_with('L') {
                    if self.chart.lookup(name).is_some() {
                        return Err(ParseError::new(tok.position, ParseErrorKind::UnknownClashesWithSymbol(name.clone())));
                    }
                    t.next();
                    return Ok(Factor::Unknown(name.clone()));
                }
                if self.chart.lookup(name).is_some() {
                    return Err(ParseError::new(
                        tok.position,
                        ParseErrorKind::Invalid("scalar coefficients must be parenthesized".into()),
                    ));
                }
                Err(ParseError::new(tok.position, ParseErrorKind::UnknownTensor(name.clone())))
            }
            _ => Err(t.unexpected("a tensor term")),
        }
    }

    /// `primary ('.' tensor)?`, right associative.
    fn tensor(&mut self, t: &mut Tokens) -> Result<TensorAtom, ParseError> {
        let start = t.peek().clone();
        let head = self.tensor_primary(t)?;
        if t.eat(&TokenKind::Dot) {
            require_valence(&start, &head, 4)?;
            let rest = self.tensor(t)?;
            return Ok(TensorAtom::dot(head, rest));
        }
        Ok(head)
    }

    fn tensor_primary(&mut self, t: &mut Tokens) -> Result<TensorAtom, ParseError> {
        let tok = t.peek().clone();
        match &tok.kind {
            TokenKind::LParen => {
                t.next();
                let inner = self.tensor(t)?;
                t.expect(TokenKind::RParen, "`)`")?;
                Ok(inner)
            }
            TokenKind::Ident(name) => {
                t.next();
                match name.as_str() {
                    "Q" => {
                        t.expect(TokenKind::LParen, "`(`")?;
                        let a_tok = t.peek().clone();
                        let a = self.tensor(t)?;
                        require_valence(&a_tok, &a, 2)?;
                        t.expect(TokenKind::Comma, "`,`")?;
                        let h = self.tensor(t)?;
                        t.expect(TokenKind::RParen, "`)`")?;
                        Ok(TensorAtom::tachibana(a, h))
                    }
                    "wedge" => {
                        t.expect(TokenKind::LParen, "`(`")?;
                        let a_tok = t.peek().clone();
                        let a = self.tensor(t)?;
                        require_valence(&a_tok, &a, 2)?;
                        t.expect(TokenKind::Comma, "`,`")?;
                        let b_tok = t.peek().clone();
                        let b = self.tensor(t)?;
                        require_valence(&b_tok, &b, 2)?;
                        t.expect(TokenKind::RParen, "`)`")?;
                        Ok(TensorAtom::wedge(a, b))
                    }
                    "nabla" => Ok(TensorAtom::nabla(self.tensor_primary(t)?)),
                    other => TensorName::from_symbol(other)
                        .map(TensorAtom::Named)
                        .ok_or_else(|| ParseError::new(tok.position, ParseErrorKind::UnknownTensor(other.to_string()))),
                }
            }
            _ => Err(t.unexpected("a tensor")),
        }
    }
}

fn require_valence(at: &Token, atom: &TensorAtom, expected: usize) -> Result<(), ParseError> {
    let found = atom.valence();
    if found == expected {
        Ok(())
    } else {
        Err(ParseError::new(at.position, ParseErrorKind::ValenceMismatch { expected, found }))
    }
}
