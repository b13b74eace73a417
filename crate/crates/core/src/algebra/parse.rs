//! Polynomial text grammar.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := ('-' | '+') unary | power
//! power  := atom ('^' INT)?
//! atom   := INT ('/' INT)? | IDENT | '(' expr ')'
//! IDENT  := [A-Za-z_][A-Za-z0-9_]*
//! INT    := [0-9]+
//! ```
//!
//! Whitespace (including newlines) is ignored between tokens. `-x^2` parses
//! as `-(x^2)`. A `/` may only join two integer literals. The Unicode minus
//! sign `−` is accepted as `-`. Canonical output of [`Polynomial`]'s
//! `Display` always parses back to the same polynomial.

use num_bigint::BigInt;

use super::field::Field;
use super::monomial::VarSet;
use super::polynomial::Polynomial;
use crate::error::{Error, ParseError, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
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
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn tokenize(src: &str) -> std::result::Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut line, mut col) = (1usize, 1usize);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let simple = match c {
            '+' => Some(Tok::Plus),
            '-' | '−' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = simple {
            out.push(Spanned {
                tok,
                line: l0,
                column: c0,
            });
            i += 1;
            col += 1;
            continue;
        }
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Spanned {
                tok: Tok::Int(s.parse().expect("digits")),
                line: l0,
                column: c0,
            });
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            col += i - start;
            out.push(Spanned {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                line: l0,
                column: c0,
            });
            continue;
        }
        return Err(ParseError {
            line,
            column: col,
            message: format!("unexpected character {c:?}"),
        });
    }
    out.push(Spanned {
        tok: Tok::End,
        line,
        column: col,
    });
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    vars: &'a VarSet,
    field: Field,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn err(&self, message: impl Into<String>) -> Error {
        let t = &self.toks[self.pos];
        Error::Parse(ParseError {
            line: t.line,
            column: t.column,
            message: message.into(),
        })
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = acc.add(&self.term()?)?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = acc.sub(&self.term()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.unary()?;
        while *self.peek() == Tok::Star {
            self.bump();
            acc = acc.mul(&self.unary()?)?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                Ok(self.unary()?.neg())
            }
            Tok::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        match self.bump() {
            Tok::Int(e) => {
                let e: u32 = e.try_into().map_err(|_| self.err("exponent too large"))?;
                base.pow(e)
            }
            _ => {
                self.pos -= 1;
                Err(self.err("expected a non-negative integer exponent"))
            }
        }
    }

    fn atom(&mut self) -> Result<Polynomial> {
        let at = self.pos;
        match self.bump() {
            Tok::Int(n) => {
                let mut den = BigInt::from(1);
                if *self.peek() == Tok::Slash {
                    self.bump();
                    match self.bump() {
                        Tok::Int(d) => den = d,
                        _ => {
                            self.pos -= 1;
                            return Err(self.err("expected integer denominator after '/'"));
                        }
                    }
                }
                let c = self.field.from_ratio(&n, &den).map_err(|_| {
                    self.pos = at;
                    self.err(format!("denominator vanishes in {}", self.field))
                })?;
                Ok(Polynomial::constant(self.vars, c))
            }
            Tok::Ident(name) => match self.vars.index_of(&name) {
                Some(i) => Polynomial::var(self.vars, self.field, i),
                None => {
                    self.pos = at;
                    Err(self.err(format!("unknown variable {name:?}")))
                }
            },
            Tok::LParen => {
                let inner = self.expr()?;
                if self.bump() != Tok::RParen {
                    self.pos -= 1;
                    return Err(self.err("expected ')'"));
                }
                Ok(inner)
            }
            Tok::End => Err(self.err("unexpected end of input")),
            other => {
                self.pos = at;
                Err(self.err(format!("unexpected token {other:?}")))
            }
        }
    }
}

impl Polynomial {
    /// Parses `src` over a fixed variable set.
    pub fn parse(src: &str, vars: &VarSet, field: Field) -> Result<Polynomial> {
        let toks = tokenize(src)?;
        let mut p = Parser {
            toks,
            pos: 0,
            vars,
            field,
        };
        let out = p.expr()?;
        if *p.peek() != Tok::End {
            return Err(p.err("trailing input"));
        }
        Ok(out)
    }

    /// Parses `src`, taking variables in order of first appearance.
    pub fn parse_infer(src: &str, field: Field) -> Result<Polynomial> {
        let vars = infer_vars(src)?;
        Self::parse(src, &vars, field)
    }
}

/// Identifiers of `src` in order of first appearance.
pub fn infer_vars(src: &str) -> Result<VarSet> {
    let toks = tokenize(src)?;
    let mut names: Vec<String> = Vec::new();
    for t in toks {
        if let Tok::Ident(n) = t.tok {
            if !names.contains(&n) {
                names.push(n);
            }
        }
    }
    VarSet::new(names)
}
