//! Recursive-descent parser for scalar expressions.
//!
//! Precedence from tightest: `^` (right associative, integer exponents),
//! unary minus, `*` and `/`, then `+` and `-`.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use symexpr::{Atom, RawExpr, Rational, Symbol};

use super::lexer::{Lexer, TokenKind, Tokens};
use super::{ParseError, ParseErrorKind, Position};
use crate::chart::{Chart, Symbolic};

pub fn parse_expression(text: &str, chart: &Chart) -> Result<RawExpr, ParseError> {
    parse_expression_at(text, chart, Position { line: 1, column: 1 })
}

/// Like [`parse_expression`], with positions offset to `origin`.
pub fn parse_expression_at(text: &str, chart: &Chart, origin: Position) -> Result<RawExpr, ParseError> {
    let mut tokens = Tokens::new(Lexer::tokenize(text, origin)?);
    let e = ExprParser { chart }.sum(&mut tokens)?;
    tokens.expect_end()?;
    Ok(e)
}

pub(crate) struct ExprParser<'a> {
    pub chart: &'a Chart,
}

impl ExprParser<'_> {
    pub fn sum(&self, t: &mut Tokens) -> Result<RawExpr, ParseError> {
        let mut lhs = self.product(t)?;
        loop {
            if t.eat(&TokenKind::Plus) {
                lhs = RawExpr::Add(Box::new(lhs), Box::new(self.product(t)?));
            } else if t.eat(&TokenKind::Minus) {
                lhs = RawExpr::Sub(Box::new(lhs), Box::new(self.product(t)?));
            } else {
                return Ok(lhs);
            }
        }
    }

    pub fn product(&self, t: &mut Tokens) -> Result<RawExpr, ParseError> {
        let mut lhs = self.unary(t)?;
        loop {
            if t.eat(&TokenKind::Star) {
                lhs = RawExpr::Mul(Box::new(lhs), Box::new(self.unary(t)?));
            } else if t.eat(&TokenKind::Slash) {
                lhs = RawExpr::Div(Box::new(lhs), Box::new(self.unary(t)?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&self, t: &mut Tokens) -> Result<RawExpr, ParseError> {
        if t.eat(&TokenKind::Minus) {
            return Ok(RawExpr::Neg(Box::new(self.unary(t)?)));
        }
        self.power(t)
    }

    fn power(&self, t: &mut Tokens) -> Result<RawExpr, ParseError> {
        let base = self.primary(t)?;
        if t.eat(&TokenKind::Caret) {
            let e = self.exponent(t)?;
            return Ok(RawExpr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn exponent(&self, t: &mut Tokens) -> Result<i64, ParseError> {
        let start = t.peek().position;
        let negative = t.eat(&TokenKind::Minus);
        let value = match t.peek().kind.clone() {
            TokenKind::Number(n) => {
                t.next();
                n
            }
            TokenKind::LParen => {
                t.next();
                let v = self.exponent(t)?;
                if !t.eat(&TokenKind::RParen) {
                    return Err(ParseError::new(start, ParseErrorKind::NonIntegerExponent));
                }
                BigInt::from(v)
            }
            _ => return Err(ParseError::new(start, ParseErrorKind::NonIntegerExponent)),
        };
        let mut value = value
            .to_i64()
            .ok_or_else(|| ParseError::new(start, ParseErrorKind::Invalid("exponent too large".into())))?;
        if negative {
            value = -value;
        }
        if t.eat(&TokenKind::Caret) {
            let rhs = self.exponent(t)?;
            let rhs = u32::try_from(rhs).map_err(|_| ParseError::new(start, ParseErrorKind::NonIntegerExponent))?;
            value = value
                .checked_pow(rhs)
                .ok_or_else(|| ParseError::new(start, ParseErrorKind::Invalid("exponent too large".into())))?;
        }
        Ok(value)
    }

    fn primary(&self, t: &mut Tokens) -> Result<RawExpr, ParseError> {
        let tok = t.peek().clone();
        match tok.kind {
            TokenKind::Number(n) => {
                t.next();
                Ok(RawExpr::Number(Rational::from_integer(n)))
            }
            TokenKind::LParen => {
                t.next();
                let e = self.sum(t)?;
                t.expect(TokenKind::RParen, "`)`")?;
                Ok(e)
            }
            TokenKind::Ident(name) => {
                t.next();
                self.identifier(t, &name, tok.position)
            }
            _ => Err(t.unexpected("an expression")),
        }
    }

    fn identifier(&self, t: &mut Tokens, name: &str, position: Position) -> Result<RawExpr, ParseError> {
        match name {
            "sin" | "cos" if t.peek().kind == TokenKind::LParen => {
                t.next();
                let coord = self.coordinate_name(t)?;
                t.expect(TokenKind::RParen, "`)`")?;
                let atom = if name == "sin" { Atom::sin(&coord) } else { Atom::cos(&coord) };
                return Ok(RawExpr::Atom(atom));
            }
            "diff" if t.peek().kind == TokenKind::LParen => {
                t.next();
                let inner = self.sum(t)?;
                let mut vars: Vec<(Symbol, u32)> = Vec::new();
                while t.eat(&TokenKind::Comma) {
                    let coord = self.coordinate_name(t)?;
                    let mut order = 1u32;
                    if t.peek().kind == TokenKind::Comma {
                        if let TokenKind::Number(n) = &t.peek_at(1).kind {
                            order = n.to_u32().ok_or_else(|| {
                                ParseError::new(t.peek_at(1).position, ParseErrorKind::Invalid("derivative order too large".into()))
                            })?;
                            t.next();
                            t.next();
                        }
                    }
                    vars.push((Symbol::from(coord.as_str()), order));
                }
                if vars.is_empty() {
                    return Err(t.unexpected("`,` and a coordinate"));
                }
                t.expect(TokenKind::RParen, "`)`")?;
                return Ok(RawExpr::Diff(Box::new(inner), vars));
            }
            _ => {}
        }
        match self.chart.lookup(name) {
            Some(Symbolic::Coordinate(_)) => Ok(RawExpr::Atom(Atom::coordinate(name))),
            Some(Symbolic::Constant) => Ok(RawExpr::Atom(Atom::constant(name))),
            Some(Symbolic::Function(decl)) => {
                let mut primes = 0u32;
                while t.eat(&TokenKind::Prime) {
                    primes += 1;
                }
                t.expect(TokenKind::LParen, "`(` after a function name")?;
                let mut args = Vec::new();
                if t.peek().kind != TokenKind::RParen {
                    loop {
                        args.push(self.coordinate_name(t)?);
                        if !t.eat(&TokenKind::Comma) {
                            break;
                        }
                    }
                }
                t.expect(TokenKind::RParen, "`)`")?;
                let declared: Vec<&str> = decl.args.iter().map(|a| &**a).collect();
                if args.iter().map(String::as_str).ne(declared.iter().copied()) {
                    return Err(ParseError::new(
                        position,
                        ParseErrorKind::Invalid(format!("function `{name}` is declared as {name}({})", declared.join(","))),
                    ));
                }
                if primes > 0 && declared.len() != 1 {
                    return Err(ParseError::new(
                        position,
                        ParseErrorKind::Invalid(format!("prime notation needs a one-argument function; use diff({name}(...), ...)")),
                    ));
                }
                let orders = if primes > 0 { vec![primes] } else { vec![0; declared.len()] };
                Ok(RawExpr::Atom(Atom::function_derivative(name, &declared, &orders)))
            }
            None => Err(ParseError::new(position, ParseErrorKind::UnknownIdentifier(name.to_string()))),
        }
    }

    fn coordinate_name(&self, t: &mut Tokens) -> Result<String, ParseError> {
        let tok = t.peek().clone();
        match &tok.kind {
            TokenKind::Ident(name) => {
                if self.chart.coordinate_index(name).is_none() {
                    return Err(ParseError::new(
                        tok.position,
                        ParseErrorKind::Invalid(format!("`{name}` is not a coordinate")),
                    ));
                }
                t.next();
                Ok(name.clone())
            }
            _ => Err(t.unexpected("a coordinate")),
        }
    }
}
