use num_bigint::BigInt;

use super::{ParseError, ParseErrorKind, Position};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TokenKind {
    Number(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Prime,
    Dot,
    Comma,
    Equals,
    LParen,
    RParen,
    LBracket,
    RBracket,
    End,
}

impl TokenKind {
    pub fn describe(&self) -> String {
        match self {
            TokenKind::Number(n) => format!("number `{n}`"),
            TokenKind::Ident(s) => format!("identifier `{s}`"),
            TokenKind::End => "end of input".to_string(),
            other => format!("`{}`", other.symbol()),
        }
    }

    fn symbol(&self) -> &'static str {
        match self {
            TokenKind::Plus => "+",
            TokenKind::Minus => "-",
            TokenKind::Star => "*",
            TokenKind::Slash => "/",
            TokenKind::Caret => "^",
            TokenKind::Prime => "'",
            TokenKind::Dot => ".",
            TokenKind::Comma => ",",
            TokenKind::Equals => "=",
            TokenKind::LParen => "(",
            TokenKind::RParen => ")",
            TokenKind::LBracket => "[",
            TokenKind::RBracket => "]",
            _ => "",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub position: Position,
}

/// Tokenizes one logical line; positions are reported relative to `origin`.
pub struct Lexer;

impl Lexer {
    pub fn tokenize(text: &str, origin: Position) -> Result<Vec<Token>, ParseError> {
        let mut tokens = Vec::new();
        let mut line = origin.line;
        let mut column = origin.column;
        let mut chars = text.chars().peekable();
        while let Some(&ch) = chars.peek() {
            let position = Position { line, column };
            if ch == '\n' {
                chars.next();
                line += 1;
                column = 1;
                continue;
            }
            if ch.is_whitespace() {
                chars.next();
                column += 1;
                continue;
            }
            if ch.is_ascii_digit() {
                let mut digits = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        digits.push(d);
                        chars.next();
                        column += 1;
                    } else {
                        break;
                    }
                }
                let n = digits.parse::<BigInt>().expect("ascii digits");
                tokens.push(Token {
                    kind: TokenKind::Number(n),
                    position,
                });
                continue;
            }
            if ch.is_alphabetic() || ch == '_' {
                let mut ident = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_alphanumeric() || d == '_' {
                        ident.push(d);
                        chars.next();
                        column += 1;
                    } else {
                        break;
                    }
                }
                tokens.push(Token {
                    kind: TokenKind::Ident(ident),
                    position,
                });
                continue;
            }
            let kind = match ch {
                '+' => TokenKind::Plus,
                '-' => TokenKind::Minus,
                '*' => TokenKind::Star,
                '/' => TokenKind::Slash,
                '^' => TokenKind::Caret,
                '\'' => TokenKind::Prime,
                '.' => TokenKind::Dot,
                ',' => TokenKind::Comma,
                '=' => TokenKind::Equals,
                '(' => TokenKind::LParen,
                ')' => TokenKind::RParen,
                '[' => TokenKind::LBracket,
                ']' => TokenKind::RBracket,
                other => return Err(ParseError::new(position, ParseErrorKind::UnexpectedChar(other))),
            };
            chars.next();
            column += 1;
            tokens.push(Token { kind, position });
        }
        tokens.push(Token {
            kind: TokenKind::End,
            position: Position { line, column },
        });
        Ok(tokens)
    }
}

/// Cursor over a token vector.
pub(crate) struct Tokens {
    tokens: Vec<Token>,
    pos: usize,
}

impl Tokens {
    pub fn new(tokens: Vec<Token>) -> Self {
        Tokens { tokens, pos: 0 }
    }

    pub fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    pub fn peek_at(&self, offset: usize) -> &Token {
        let i = (self.pos + offset).min(self.tokens.len() - 1);
        &self.tokens[i]
    }

    pub fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    pub fn eat(&mut self, kind: &TokenKind) -> bool {
        if &self.peek().kind == kind {
            self.next();
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, kind: TokenKind, what: &str) -> Result<Token, ParseError> {
        if self.peek().kind == kind {
            Ok(self.next())
        } else {
            Err(self.unexpected(what))
        }
    }

    pub fn unexpected(&self, what: &str) -> ParseError {
        let t = self.peek();
        ParseError::new(
            t.position,
            ParseErrorKind::Unexpected {
                expected: what.to_string(),
                found: t.kind.describe(),
            },
        )
    }

    pub fn expect_end(&self) -> Result<(), ParseError> {
        if self.peek().kind == TokenKind::End {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }
}
