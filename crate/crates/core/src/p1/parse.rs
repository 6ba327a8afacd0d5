//! Parser for rational functions written over the variable `x`, such as `(x-2)*(x-3)/(x-1)^2`.
//! Integers, `x`, parentheses, `+ - * /`, integer powers and implicit products like `2x` are accepted.

use num_bigint::BigInt;
use std::str::FromStr;

use super::poly::Poly;
use super::ratfunc::RatFunc;
use crate::error::{Error, Result};
use crate::Q;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    X,
    Op(char),
    Open,
    Close,
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        match c {
            ' ' | '\t' => {}
            '0'..='9' => {
                let st = i;
                while i + 1 < cs.len() && cs[i + 1].is_ascii_digit() {
                    i += 1;
                }
                let txt: String = cs[st..=i].iter().collect();
                out.push(Tok::Num(BigInt::from_str(&txt).unwrap()));
            }
            'x' => out.push(Tok::X),
            '+' | '-' | '*' | '/' | '^' => out.push(Tok::Op(c)),
            '(' => out.push(Tok::Open),
            ')' => out.push(Tok::Close),
            _ => return Err(Error::Malformed(format!("unexpected character {:?} in {:?}", c, s))),
        }
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    src: &'a str,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Malformed(format!("{} in {:?}", msg, self.src))
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn expr(&mut self) -> Result<RatFunc> {
        let mut acc = self.term()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let t = self.term()?;
            acc = if c == '+' { acc.add(&t) } else { acc.sub(&t) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RatFunc> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Op('*')) => {
                    self.pos += 1;
                    acc = acc.mul(&self.unary()?);
                }
                Some(Tok::Op('/')) => {
                    self.pos += 1;
                    let d = self.unary()?;
                    if d.is_zero() {
                        return Err(self.err("division by zero"));
                    }
                    acc = acc.div(&d);
                }
                // implicit product: 2x, 3(x-1), (x-1)(x-2)
                Some(Tok::X) | Some(Tok::Open) | Some(Tok::Num(_)) => {
                    acc = acc.mul(&self.power()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<RatFunc> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(self.unary()?.scale(&Q::from_integer(BigInt::from(-1))))
            }
            Some(Tok::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RatFunc> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            let e = self.exponent()?;
            if base.is_zero() && e < 0 {
                return Err(self.err("zero to a negative power"));
            }
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<i64> {
        let neg_paren = matches!(self.peek(), Some(Tok::Open));
        if neg_paren {
            self.pos += 1;
        }
        let mut sign = 1;
        if let Some(Tok::Op('-')) = self.peek() {
            sign = -1;
            self.pos += 1;
        }
        let v = match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                i64::try_from(n).map_err(|_| self.err("exponent too large"))?
            }
            _ => return Err(self.err("expected an integer exponent")),
        };
        if v > 10_000 {
            return Err(self.err("exponent too large"));
        }
        if neg_paren {
            if self.peek() != Some(&Tok::Close) {
                return Err(self.err("unbalanced parenthesis"));
            }
            self.pos += 1;
        }
        Ok(sign * v)
    }

    fn atom(&mut self) -> Result<RatFunc> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(RatFunc::constant(Q::from_integer(n)))
            }
            Some(Tok::X) => {
                self.pos += 1;
                Ok(RatFunc::from_poly(Poly::x()))
            }
            Some(Tok::Open) => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(&Tok::Close) {
                    return Err(self.err("unbalanced parenthesis"));
                }
                self.pos += 1;
                Ok(e)
            }
            _ => Err(self.err("unexpected end or operator")),
        }
    }
}

pub fn parse_ratfunc(s: &str) -> Result<RatFunc> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err(Error::Malformed("empty expression".into()));
    }
    let mut p = Parser { toks, pos: 0, src: s };
    let f = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(f)
}

impl FromStr for RatFunc {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_ratfunc(s)
    }
}
