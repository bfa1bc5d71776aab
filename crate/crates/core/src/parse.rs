//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('-' | '+') unary | power
//! power  := atom ('^' exponent)?
//! atom   := number | identifier | '(' expr ')'
//! ```
//!
//! Numbers are integers or finite decimals. Division is only by nonzero
//! constants, exponents must be non-negative integers, and juxtaposition
//! (`2x`) is rejected.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::poly::{Polynomial, VariableContext};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigRational),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Num(q) => format!("number `{q}`"),
        Tok::Ident(s) => format!("identifier `{s}`"),
        Tok::Plus => "`+`".into(),
        Tok::Minus => "`-`".into(),
        Tok::Star => "`*`".into(),
        Tok::Slash => "`/`".into(),
        Tok::Caret => "`^`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::End => "end of input".into(),
    }
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut column) = (1usize, 1usize);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, column);
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Token {
                tok,
                line: tl,
                column: tc,
            });
            i += 1;
            column += 1;
            continue;
        }
        if c == '\n' {
            line += 1;
            column = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            column += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let int_part: String = chars[start..i].iter().collect();
            let mut value = BigRational::from_integer(int_part.parse::<BigInt>().unwrap());
            if i < chars.len() && chars[i] == '.' {
                let frac_start = i + 1;
                let mut j = frac_start;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                if j == frac_start {
                    return Err(Error::Syntax {
                        line: tl,
                        column: tc + (i - start) + 1,
                        message: "expected digits after decimal point".into(),
                    });
                }
                let frac: String = chars[frac_start..j].iter().collect();
                let digits = frac.parse::<BigInt>().unwrap();
                let scale = num_traits::pow(BigInt::from(10), frac.len());
                value += BigRational::new(digits, scale);
                i = j;
            }
            column += i - start;
            out.push(Token {
                tok: Tok::Num(value),
                line: tl,
                column: tc,
            });
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            column += i - start;
            out.push(Token {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                line: tl,
                column: tc,
            });
            continue;
        }
        return Err(Error::Syntax {
            line: tl,
            column: tc,
            message: format!("unexpected character `{c}`"),
        });
    }
    out.push(Token {
        tok: Tok::End,
        line,
        column,
    });
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    ctx: &'a Arc<VariableContext>,
}

type QPoly = Polynomial<BigRational>;

impl Parser<'_> {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, message: String) -> Error {
        let t = self.peek();
        Error::Syntax {
            line: t.line,
            column: t.column,
            message,
        }
    }

    fn expr(&mut self) -> Result<QPoly> {
        let mut acc = self.term()?;
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<QPoly> {
        let mut acc = self.unary()?;
        loop {
            match self.peek().tok {
                Tok::Star => {
                    self.bump();
                    acc = &acc * &self.unary()?;
                }
                Tok::Slash => {
                    let at = self.bump();
                    let rhs = self.unary()?;
                    match rhs.as_constant() {
                        Some(c) if !c.is_zero() => acc = acc.scale(&(BigRational::one() / c)),
                        _ => {
                            return Err(Error::BadDivision {
                                line: at.line,
                                column: at.column,
                            })
                        }
                    }
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<QPoly> {
        match self.peek().tok {
            Tok::Minus => {
                self.bump();
                Ok(-self.unary()?)
            }
            Tok::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<QPoly> {
        let base = self.atom()?;
        if self.peek().tok != Tok::Caret {
            return Ok(base);
        }
        let caret = self.bump();
        let exp_tok = self.peek().clone();
        let exponent = match exp_tok.tok {
            Tok::Minus | Tok::Plus => self.unary()?,
            _ => self.atom()?,
        };
        let bad = |message: &str| Error::BadExponent {
            line: exp_tok.line,
            column: exp_tok.column,
            message: message.into(),
        };
        let value = exponent
            .as_constant()
            .ok_or_else(|| bad("exponent must be a constant"))?;
        if !value.is_integer() {
            return Err(bad("exponent must be an integer"));
        }
        if value.is_negative() {
            return Err(bad("exponent must be non-negative"));
        }
        let e = value
            .to_integer()
            .to_u32()
            .filter(|&e| e <= 1024)
            .ok_or_else(|| bad("exponent too large"))?;
        if self.peek().tok == Tok::Caret {
            let _ = caret;
            return Err(self.error_here("chained `^` is ambiguous; use parentheses".into()));
        }
        Ok(base.pow(e))
    }

    fn atom(&mut self) -> Result<QPoly> {
        let t = self.bump();
        match t.tok {
            Tok::Num(q) => {
                let p = Polynomial::constant(self.ctx, q);
                self.reject_juxtaposition()?;
                Ok(p)
            }
            Tok::Ident(name) => match self.ctx.index_of(&name) {
                Some(i) => {
                    let p = Polynomial::var(self.ctx, i)?;
                    self.reject_juxtaposition()?;
                    Ok(p)
                }
                None => Err(Error::UnknownIdentifier {
                    name,
                    line: t.line,
                    column: t.column,
                }),
            },
            Tok::LParen => {
                let inner = self.expr()?;
                if self.peek().tok != Tok::RParen {
                    return Err(self.error_here(format!("expected `)`, found {}", describe(&self.peek().tok))));
                }
                self.bump();
                self.reject_juxtaposition()?;
                Ok(inner)
            }
            other => Err(Error::Syntax {
                line: t.line,
                column: t.column,
                message: format!("expected a number, identifier or `(`, found {}", describe(&other)),
            }),
        }
    }

    fn reject_juxtaposition(&self) -> Result<()> {
        match self.peek().tok {
            Tok::Num(_) | Tok::Ident(_) | Tok::LParen => Err(self.error_here(format!(
                "implicit multiplication is not allowed before {}; insert `*`",
                describe(&self.peek().tok)
            ))),
            _ => Ok(()),
        }
    }
}

/// Parses `text` into a polynomial over any scalar field.
pub fn parse_polynomial_in<K: Scalar>(text: &str, ctx: &Arc<VariableContext>) -> Result<Polynomial<K>> {
    let toks = lex(text)?;
    let mut parser = Parser { toks, pos: 0, ctx };
    let p = parser.expr()?;
    if parser.peek().tok != Tok::End {
        return Err(parser.error_here(format!("unexpected {}", describe(&parser.peek().tok))));
    }
    Ok(p.map_coefficients(K::from_rational))
}

/// Parses `text` into an exact rational polynomial.
pub fn parse_polynomial(text: &str, ctx: &Arc<VariableContext>) -> Result<Polynomial<BigRational>> {
    parse_polynomial_in(text, ctx)
}
