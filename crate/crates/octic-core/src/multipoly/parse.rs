//! Parser for the canonical polynomial text format over the rationals:
//! sums of terms like `2*x*y^3`, `-1/2*z`, `x`, `7`. Inverse of the
//! canonical `Display` output.

use super::poly::{Poly, QPoly};
use super::scalar::Rational;
use super::{MultipolyError, Vars};
use num_bigint::BigInt;
use num_traits::One;

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    Int(BigInt),
    Name(String),
    Slash,
    End,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn next(&mut self) -> Result<(Tok, usize), MultipolyError> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        let at = self.pos;
        if self.pos >= self.src.len() {
            return Ok((Tok::End, at));
        }
        let c = self.src[self.pos];
        self.pos += 1;
        let t = match c {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'^' => Tok::Caret,
            b'/' => Tok::Slash,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' => {
                let start = self.pos - 1;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                Tok::Int(s.parse().unwrap())
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos - 1;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                Tok::Name(String::from_utf8(self.src[start..self.pos].to_vec()).unwrap())
            }
            other => {
                return Err(MultipolyError::Parse(format!(
                    "unexpected character {:?} at byte {}",
                    other as char, at
                )))
            }
        };
        Ok((t, at))
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    cur: Tok,
    cur_at: usize,
    vars: Vars,
}

impl<'a> Parser<'a> {
    fn bump(&mut self) -> Result<(), MultipolyError> {
        let (t, at) = self.lexer.next()?;
        self.cur = t;
        self.cur_at = at;
        Ok(())
    }

    fn expr(&mut self) -> Result<QPoly, MultipolyError> {
        let mut neg = false;
        if self.cur == Tok::Minus {
            neg = true;
            self.bump()?;
        } else if self.cur == Tok::Plus {
            self.bump()?;
        }
        let mut acc = self.term()?;
        if neg {
            acc = acc.neg();
        }
        loop {
            match self.cur {
                Tok::Plus => {
                    self.bump()?;
                    let t = self.term()?;
                    acc = acc.try_add(&t)?;
                }
                Tok::Minus => {
                    self.bump()?;
                    let t = self.term()?;
                    acc = acc.try_sub(&t)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<QPoly, MultipolyError> {
        let mut acc = self.factor()?;
        while self.cur == Tok::Star {
            self.bump()?;
            let f = self.factor()?;
            acc = acc.try_mul(&f)?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<QPoly, MultipolyError> {
        let mut base = self.atom()?;
        while self.cur == Tok::Caret {
            self.bump()?;
            match std::mem::replace(&mut self.cur, Tok::End) {
                Tok::Int(n) => {
                    self.bump()?;
                    let e: u32 = n.try_into().map_err(|_| {
                        MultipolyError::Parse(format!(
                            "exponent out of range at byte {}",
                            self.cur_at
                        ))
                    })?;
                    base = base.pow(e);
                }
                other => {
                    return Err(MultipolyError::Parse(format!(
                        "expected integer exponent, found {:?} at byte {}",
                        other, self.cur_at
                    )))
                }
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<QPoly, MultipolyError> {
        match std::mem::replace(&mut self.cur, Tok::End) {
            Tok::Int(n) => {
                self.bump()?;
                // optional rational a/b
                if self.cur == Tok::Slash {
                    self.bump()?;
                    match std::mem::replace(&mut self.cur, Tok::End) {
                        Tok::Int(d) => {
                            self.bump()?;
                            Ok(Poly::constant(&self.vars, Rational::new(n, d)))
                        }
                        other => Err(MultipolyError::Parse(format!(
                            "expected denominator, found {:?} at byte {}",
                            other, self.cur_at
                        ))),
                    }
                } else {
                    Ok(Poly::constant(&self.vars, Rational::from_integer(n)))
                }
            }
            Tok::Name(name) => {
                self.bump()?;
                Poly::var_with(&self.vars, &name, Rational::one())
            }
            Tok::LParen => {
                self.bump()?;
                let inner = self.expr()?;
                if self.cur != Tok::RParen {
                    return Err(MultipolyError::Parse(format!(
                        "expected ')' at byte {}",
                        self.cur_at
                    )));
                }
                self.bump()?;
                Ok(inner)
            }
            other => Err(MultipolyError::Parse(format!(
                "unexpected token {:?} at byte {}",
                other, self.cur_at
            ))),
        }
    }
}

/// Parse a rational polynomial in the canonical text syntax.
pub fn parse_rational_poly(vars: &Vars, src: &str) -> Result<QPoly, MultipolyError> {
    let mut p = Parser {
        lexer: Lexer::new(src),
        cur: Tok::End,
        cur_at: 0,
        vars: vars.clone(),
    };
    p.bump()?;
    let out = p.expr()?;
    if p.cur != Tok::End {
        return Err(MultipolyError::Parse(format!(
            "trailing input at byte {}",
            p.cur_at
        )));
    }
    Ok(out)
}
