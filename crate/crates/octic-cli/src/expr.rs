//! Parser for integer coefficient expressions in the parameter t, used by
//! arrangement files. Grammar:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := integer | 't' | '(' expr ')' | factor '^' posint
//! ```
//!
//! Errors carry 1-based line and column positions.

use num_bigint::BigInt;
use octic_core::multipoly::{QPoly, Rational, Vars};

#[derive(Debug)]
pub struct SyntaxError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl std::fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "syntax error at line {}, column {}: {}",
            self.line, self.column, self.message
        )
    }
}

impl std::error::Error for SyntaxError {}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    Int(BigInt),
    T,
    End,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col_base: usize,
}

impl<'a> Lexer<'a> {
    fn next(&mut self) -> Result<(Tok, usize), SyntaxError> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        let col = self.col_base + self.pos + 1;
        if self.pos >= self.src.len() {
            return Ok((Tok::End, col));
        }
        let c = self.src[self.pos];
        self.pos += 1;
        let t = match c {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            0xE2 if self.src[self.pos..].starts_with(&[0x88, 0x92]) => {
                // U+2212 minus sign
                self.pos += 2;
                Tok::Minus
            }
            b'*' => Tok::Star,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b't' => Tok::T,
            b'0'..=b'9' => {
                let start = self.pos - 1;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                Tok::Int(text.parse().unwrap())
            }
            other => {
                return Err(SyntaxError {
                    line: self.line,
                    column: col,
                    message: format!("unexpected character {:?}", other as char),
                })
            }
        };
        Ok((t, col))
    }
}

pub struct ExprParser<'a> {
    lexer: Lexer<'a>,
    cur: Tok,
    cur_col: usize,
    prev_col: usize,
    vars: Vars,
}

impl<'a> ExprParser<'a> {
    /// Parse one whitespace-free expression at the given position.
    pub fn parse(
        src: &'a str,
        line: usize,
        col_base: usize,
        vars: &Vars,
    ) -> Result<QPoly, SyntaxError> {
        let mut p = ExprParser {
            lexer: Lexer {
                src: src.as_bytes(),
                pos: 0,
                line,
                col_base,
            },
            cur: Tok::End,
            cur_col: col_base + 1,
            prev_col: col_base + 1,
            vars: vars.clone(),
        };
        p.bump()?;
        let out = p.expr()?;
        if p.cur != Tok::End {
            return Err(p.err_here("trailing input"));
        }
        Ok(out)
    }

    fn bump(&mut self) -> Result<(), SyntaxError> {
        self.prev_col = self.cur_col;
        let (t, col) = self.lexer.next()?;
        self.cur = t;
        self.cur_col = col;
        Ok(())
    }

    /// Position an error on the current token, or on the previous one at an
    /// unexpected end of input.
    fn err_here(&self, message: &str) -> SyntaxError {
        let column = if self.cur == Tok::End {
            self.prev_col
        } else {
            self.cur_col
        };
        SyntaxError {
            line: self.lexer.line,
            column,
            message: message.to_string(),
        }
    }

    fn expr(&mut self) -> Result<QPoly, SyntaxError> {
        let mut acc = self.term()?;
        loop {
            match self.cur {
                Tok::Plus => {
                    self.bump()?;
                    let t = self.term()?;
                    acc = acc.try_add(&t).expect("same vars");
                }
                Tok::Minus => {
                    self.bump()?;
                    let t = self.term()?;
                    acc = acc.try_sub(&t).expect("same vars");
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<QPoly, SyntaxError> {
        let mut acc = self.factor()?;
        while self.cur == Tok::Star {
            self.bump()?;
            let f = self.factor()?;
            acc = acc.try_mul(&f).expect("same vars");
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<QPoly, SyntaxError> {
        let mut base = match std::mem::replace(&mut self.cur, Tok::End) {
            Tok::Int(n) => {
                self.bump()?;
                QPoly::constant(&self.vars, Rational::from_integer(n))
            }
            Tok::T => {
                self.bump()?;
                QPoly::qvar(&self.vars, "t")
            }
            Tok::LParen => {
                self.bump()?;
                let inner = self.expr()?;
                if self.cur != Tok::RParen {
                    return Err(self.err_here("expected ')'"));
                }
                self.bump()?;
                inner
            }
            other => {
                self.cur = other;
                return Err(self.err_here("expected an integer, 't' or '('"));
            }
        };
        while self.cur == Tok::Caret {
            self.bump()?;
            match std::mem::replace(&mut self.cur, Tok::End) {
                Tok::Int(n) => {
                    self.bump()?;
                    let e: u32 = (&n).try_into().map_err(|_| self.err_here("exponent too large"))?;
                    if e == 0 {
                        return Err(self.err_here("exponent must be positive"));
                    }
                    base = base.pow(e);
                }
                other => {
                    self.cur = other;
                    return Err(self.err_here("expected a positive integer exponent"));
                }
            }
        }
        Ok(base)
    }
}
