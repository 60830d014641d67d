//! Plain-text polynomial syntax.
//!
//! ```text
//! expr   := ['+' | '-'] term (('+' | '-') term)*
//! term   := factor (['*'] factor | '/' factor)*
//! factor := ('+' | '-') factor | atom ['^' integer]
//! atom   := integer | identifier | '(' expr ')'
//! ```
//!
//! Juxtaposition multiplies (`3x^2 y`), and `/` is only accepted when the
//! divisor is a nonzero constant, so `3/2*x` and `(x+y)/4` parse.

use std::sync::Arc;

use num_bigint::BigInt;

use super::{Poly, PolyError, Ring};

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<(usize, Token)>, PolyError> {
    let bytes: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '+' => Token::Plus,
            '-' => Token::Minus,
            '*' => Token::Star,
            '/' => Token::Slash,
            '^' => Token::Caret,
            '(' => Token::LParen,
            ')' => Token::RParen,
            d if d.is_ascii_digit() => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = bytes[start..i].iter().collect();
                out.push((start, Token::Num(text.parse().expect("digits"))));
                continue;
            }
            a if a.is_ascii_alphabetic() || a == '_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == '_') {
                    i += 1;
                }
                out.push((start, Token::Ident(bytes[start..i].iter().collect())));
                continue;
            }
            other => {
                return Err(PolyError::Parse {
                    pos: start,
                    msg: format!("unexpected character '{other}'"),
                })
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    ring: &'a Arc<Ring>,
    toks: Vec<(usize, Token)>,
    pos: usize,
    len: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.0).unwrap_or(self.len)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, PolyError> {
        Err(PolyError::Parse {
            pos: self.here(),
            msg: msg.into(),
        })
    }

    fn expr(&mut self) -> Result<Poly, PolyError> {
        let mut acc = match self.peek() {
            Some(Token::Minus) => {
                self.pos += 1;
                -self.term()?
            }
            Some(Token::Plus) => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Token::Minus) => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly, PolyError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.pos += 1;
                    acc = &acc * &self.factor()?;
                }
                Some(Token::Slash) => {
                    self.pos += 1;
                    let at = self.here();
                    let d = self.factor()?;
                    if !d.is_constant() || d.is_zero() {
                        return Err(PolyError::Parse {
                            pos: at,
                            msg: "division is only allowed by a nonzero constant".into(),
                        });
                    }
                    acc = acc.scale(&d.constant_term().inverse());
                }
                Some(Token::Num(_)) | Some(Token::Ident(_)) | Some(Token::LParen) => {
                    acc = &acc * &self.factor()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Poly, PolyError> {
        match self.peek() {
            Some(Token::Minus) => {
                self.pos += 1;
                return Ok(-self.factor()?);
            }
            Some(Token::Plus) => {
                self.pos += 1;
                return self.factor();
            }
            _ => {}
        }
        let base = self.atom()?;
        if let Some(Token::Caret) = self.peek() {
            self.pos += 1;
            match self.peek().cloned() {
                Some(Token::Num(n)) => {
                    self.pos += 1;
                    let e: u32 = n
                        .try_into()
                        .map_err(|_| PolyError::Parse {
                            pos: self.here(),
                            msg: "exponent too large".into(),
                        })?;
                    return Ok(base.pow(e));
                }
                _ => return self.err("expected a nonnegative integer exponent"),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly, PolyError> {
        match self.peek().cloned() {
            Some(Token::Num(n)) => {
                self.pos += 1;
                Ok(Poly::constant(self.ring, self.ring.field().from_bigint(&n)))
            }
            Some(Token::Ident(name)) => match self.ring.var_index(&name) {
                Some(i) => {
                    self.pos += 1;
                    Ok(Poly::var(self.ring, i))
                }
                None => self.err(format!("unknown variable '{name}'")),
            },
            Some(Token::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                match self.peek() {
                    Some(Token::RParen) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => self.err("expected ')'"),
                }
            }
            Some(_) => self.err("expected a number, variable or '('"),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses a polynomial over `ring`.
pub fn parse_poly(ring: &Arc<Ring>, s: &str) -> Result<Poly, PolyError> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err(PolyError::Parse {
            pos: 0,
            msg: "empty polynomial".into(),
        });
    }
    let mut p = Parser {
        ring,
        toks,
        pos: 0,
        len: s.chars().count(),
    };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(out)
}
