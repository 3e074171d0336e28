//! Tiny arithmetic expressions for exact-looking parameters such as
//! `(2+sqrt3)/4` or `-sqrt(3)/4`.
//!
//! Grammar: `+ - * /`, parentheses, decimal literals and `sqrt` applied to a
//! literal or a parenthesized expression (`√` is accepted as well).

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExprError {
    #[error("unexpected character {0:?} at {1}")]
    Unexpected(char, usize),
    #[error("unexpected end of expression")]
    End,
    #[error("bad number {0:?}")]
    Number(String),
    #[error("sqrt of a negative value")]
    NegativeSqrt,
    #[error("result is not finite")]
    NonFinite,
}

struct Parser<'a> {
    s: &'a [u8],
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<f64, ExprError> {
        let mut v = self.term()?;
        loop {
            if self.eat('+') {
                v += self.term()?;
            } else if self.eat('-') {
                v -= self.term()?;
            } else {
                return Ok(v);
            }
        }
    }

    fn term(&mut self) -> Result<f64, ExprError> {
        let mut v = self.unary()?;
        loop {
            if self.eat('*') {
                v *= self.unary()?;
            } else if self.eat('/') {
                v /= self.unary()?;
            } else {
                return Ok(v);
            }
        }
    }

    fn unary(&mut self) -> Result<f64, ExprError> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<f64, ExprError> {
        match self.peek() {
            None => Err(ExprError::End),
            Some('(') => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(')') {
                    return match self.peek() {
                        Some(c) => Err(ExprError::Unexpected(c, self.pos)),
                        None => Err(ExprError::End),
                    };
                }
                Ok(v)
            }
            Some('√') => {
                self.pos += '√'.len_utf8();
                sqrt(self.primary()?)
            }
            Some('s') if self.src[self.pos..].starts_with("sqrt") => {
                self.pos += 4;
                sqrt(self.primary()?)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => self.number(),
            Some(c) => Err(ExprError::Unexpected(c, self.pos)),
        }
    }

    fn number(&mut self) -> Result<f64, ExprError> {
        let start = self.pos;
        while self.pos < self.s.len() && (self.s[self.pos].is_ascii_digit() || self.s[self.pos] == b'.') {
            self.pos += 1;
        }
        // exponent part
        if self.pos < self.s.len() && matches!(self.s[self.pos], b'e' | b'E') {
            let mut p = self.pos + 1;
            if p < self.s.len() && matches!(self.s[p], b'+' | b'-') {
                p += 1;
            }
            if p < self.s.len() && self.s[p].is_ascii_digit() {
                while p < self.s.len() && self.s[p].is_ascii_digit() {
                    p += 1;
                }
                self.pos = p;
            }
        }
        let text = &self.src[start..self.pos];
        text.parse().map_err(|_| ExprError::Number(text.to_string()))
    }
}

fn sqrt(v: f64) -> Result<f64, ExprError> {
    if v < 0.0 {
        Err(ExprError::NegativeSqrt)
    } else {
        Ok(v.sqrt())
    }
}

pub fn eval(src: &str) -> Result<f64, ExprError> {
    let mut p = Parser { s: src.as_bytes(), src, pos: 0 };
    let v = p.expr()?;
    if let Some(c) = p.peek() {
        return Err(ExprError::Unexpected(c, p.pos));
    }
    if !v.is_finite() {
        return Err(ExprError::NonFinite);
    }
    Ok(v)
}
