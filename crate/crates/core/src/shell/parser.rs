use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::ast::{Exponent, Expr, Sign};
use crate::error::{Error, Result};

/// Recursive-descent parser over bytes; positions are byte offsets.
struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

fn err(pos: usize, msg: impl Into<String>) -> Error {
    Error::Syntax { pos, msg: msg.into() }
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(err(self.pos, format!("expected '{}'", c as char)))
        }
    }

    fn keyword(&mut self, kw: &str) -> bool {
        self.skip_ws();
        let end = self.pos + kw.len();
        if self.src.get(self.pos..end) == Some(kw.as_bytes()) {
            let next = self.src.get(end).copied();
            if next.map_or(true, |c| !c.is_ascii_alphanumeric() && c != b'_') {
                self.pos = end;
                return true;
            }
        }
        false
    }

    fn digits(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(err(start, "expected digits"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(s.parse().expect("digit string parses"))
    }

    fn small_int(&mut self) -> Result<i64> {
        let at = self.pos;
        let neg = self.eat(b'-');
        let d = self.digits()?;
        let v: i64 = d.try_into().map_err(|_| err(at, "integer too large"))?;
        Ok(if neg { -v } else { v })
    }

    fn sign(&mut self) -> Option<Sign> {
        match self.peek() {
            Some(b'+') => {
                self.pos += 1;
                Some(Sign::Plus)
            }
            Some(b'-') => {
                self.pos += 1;
                Some(Sign::Minus)
            }
            _ => None,
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let leading = self.sign();
        let first = self.term()?;
        let mut terms = vec![(leading.unwrap_or(Sign::Plus), first)];
        while let Some(s) = self.sign() {
            terms.push((s, self.term()?));
        }
        if terms.len() == 1 && leading.is_none() {
            return Ok(terms.pop().unwrap().1);
        }
        Ok(Expr::Sum { leading, terms })
    }

    fn term(&mut self) -> Result<Expr> {
        let mut fs = vec![self.factor()?];
        while self.eat(b'*') {
            fs.push(self.factor()?);
        }
        Ok(if fs.len() == 1 { fs.pop().unwrap() } else { Expr::Product(fs) })
    }

    fn factor(&mut self) -> Result<Expr> {
        let a = self.atom()?;
        if !self.eat(b'^') {
            return Ok(a);
        }
        let at = self.pos;
        let e = if self.eat(b'(') {
            let num = self.small_int()?;
            let den = if self.eat(b'/') { self.small_int()? } else { 1 };
            self.expect(b')')?;
            if den != 1 && den != 2 {
                return Err(err(at, "exponent denominator must be 1 or 2"));
            }
            if den == 2 && num % 2 == 0 {
                Exponent::int(num / 2)
            } else {
                Exponent { num, den }
            }
        } else {
            Exponent::int(self.small_int()?)
        };
        Ok(Expr::Pow(Box::new(a), e))
    }

    fn index(&mut self) -> Result<i64> {
        self.expect(b'[')?;
        let i = self.small_int()?;
        self.expect(b']')?;
        Ok(i)
    }

    fn atom(&mut self) -> Result<Expr> {
        let at = self.pos;
        match self.peek() {
            None => Err(err(at, "unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(Expr::Group(Box::new(e)))
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.digits()?;
                let d = if self.eat(b'/') { self.digits()? } else { BigInt::from(1) };
                if d.is_zero() {
                    return Err(err(at, "zero denominator"));
                }
                Ok(Expr::Num(BigRational::new(n, d)))
            }
            _ => {
                if self.keyword("db") {
                    Ok(Expr::Db(self.index()?))
                } else if self.keyword("d") {
                    Ok(Expr::D(self.index()?))
                } else if self.keyword("x") {
                    Ok(Expr::X(self.index()?))
                } else if self.keyword("omega") {
                    Ok(Expr::Omega)
                } else if self.keyword("q") {
                    Ok(Expr::Q)
                } else if self.keyword("L") {
                    Ok(Expr::L)
                } else {
                    Err(err(self.pos, "expected a number, q, omega, x[i], d[i], db[i], L or '('"))
                }
            }
        }
    }
}

/// Parses one expression; trailing input is an error.
pub fn parse(text: &str) -> Result<Expr> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let e = p.expr()?;
    if p.peek().is_some() {
        return Err(err(p.pos, "unexpected trailing input"));
    }
    Ok(e)
}
