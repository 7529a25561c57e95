//! Parser for cyclotomic expressions in the GAP-style `E(n)` notation.
//!
//! ```text
//! expr  := ["+" | "-"] term (("+" | "-") term)*
//! term  := unary (("*" | "/") unary)*
//! unary := "-" unary | atom
//! atom  := INT | "E(" INT ")" ["^" ["-"] INT] | "(" expr ")"
//! ```
//!
//! Division is only allowed by a nonzero rational.

use num_bigint::BigInt;
use num_traits::Zero;

use super::{lcm, Cyclotomic};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Int(BigInt),
    Root { n: u32, exp: i64 },
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>, usize),
}

impl Expr {
    pub fn parse(text: &str) -> Result<Expr> {
        let mut p = Parser { src: text.as_bytes(), pos: 0 };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(e)
    }

    /// Least common multiple of all `n` in `E(n)` occurring in the expression.
    pub fn conductor(&self) -> u32 {
        match self {
            Expr::Int(_) => 1,
            Expr::Root { n, .. } => *n,
            Expr::Neg(a) => a.conductor(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b, _) => {
                lcm(a.conductor(), b.conductor())
            }
        }
    }

    pub fn eval(&self, conductor: u32) -> Result<Cyclotomic> {
        Ok(match self {
            Expr::Int(v) => Cyclotomic::from_integer(conductor, v.clone()),
            Expr::Root { n, exp } => Cyclotomic::root_of_unity(*n, *exp, conductor)?,
            Expr::Neg(a) => -a.eval(conductor)?,
            Expr::Add(a, b) => a.eval(conductor)?.checked_add(&b.eval(conductor)?)?,
            Expr::Sub(a, b) => a.eval(conductor)?.checked_add(&-b.eval(conductor)?)?,
            Expr::Mul(a, b) => a.eval(conductor)?.checked_mul(&b.eval(conductor)?)?,
            Expr::Div(a, b, pos) => {
                let divisor = b.eval(conductor)?;
                let q = divisor.as_rational().ok_or_else(|| Error::Syntax {
                    pos: *pos,
                    msg: "division by an irrational value".into(),
                })?;
                if q.is_zero() {
                    return Err(Error::Syntax { pos: *pos, msg: "division by zero".into() });
                }
                a.eval(conductor)?.scale(&q.recip())
            }
        })
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Syntax { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", c as char)))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = match self.peek() {
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            Some(b'-') => {
                self.pos += 1;
                Expr::Neg(Box::new(self.term()?))
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(b'-') => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(b'/') => {
                    let at = self.pos;
                    self.pos += 1;
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?), at);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => Ok(Expr::Int(self.integer()?)),
            Some(b'E') => {
                self.pos += 1;
                self.expect(b'(')?;
                let at = self.pos;
                let n = self.integer()?;
                let n: u32 = u32::try_from(&n)
                    .ok()
                    .filter(|&n| n > 0)
                    .ok_or(Error::Syntax { pos: at, msg: "E(n) needs 0 < n < 2^32".into() })?;
                self.expect(b')')?;
                let mut exp = 1i64;
                if self.peek() == Some(b'^') {
                    self.pos += 1;
                    let negative = self.peek() == Some(b'-');
                    if negative {
                        self.pos += 1;
                    }
                    let at = self.pos;
                    let e = i64::try_from(self.integer()?)
                        .map_err(|_| Error::Syntax { pos: at, msg: "exponent too large".into() })?;
                    exp = if negative { -e } else { e };
                }
                Ok(Expr::Root { n, exp })
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(_) => Err(self.error("expected a number, E(n) or '('")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(digits.parse().expect("ascii digits"))
    }
}
