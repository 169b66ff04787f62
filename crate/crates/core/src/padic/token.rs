//! Symbolic element tokens such as `tau^2`, `5^3`, `3/7*pi^2`, `-1 + p`.
//!
//! `pi` is the base uniformizer `(-p)^{1/(p-1)}` and `tau = pi^p`, so both
//! mean the same element in every tower that contains them. They accept
//! rational exponents written in parentheses, `tau^(1/3)`; every other
//! exponent must be an integer.

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::element::PadicElement;
use super::tower::FieldTower;
use super::{PadicError, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Token {
    Int(BigInt),
    /// The prime `p` of the tower.
    P,
    /// `pi^q`.
    Pi(Q),
    /// `tau^q`.
    Tau(Q),
    Neg(Box<Token>),
    Add(Box<Token>, Box<Token>),
    Sub(Box<Token>, Box<Token>),
    Mul(Box<Token>, Box<Token>),
    Div(Box<Token>, Box<Token>),
    Pow(Box<Token>, i64),
}

pub fn parse_token(s: &str) -> Result<Token, PadicError> {
    let mut ps = Parser {
        src: s.as_bytes(),
        pos: 0,
    };
    let t = ps.expr()?;
    ps.skip_ws();
    if ps.pos != ps.src.len() {
        return Err(ps.err("trailing input"));
    }
    Ok(t)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &'static str) -> PadicError {
        PadicError::Parse { pos: self.pos, msg }
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

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Token, PadicError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = Token::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = Token::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Token, PadicError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(b'*') {
                lhs = Token::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat(b'/') {
                lhs = Token::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Token, PadicError> {
        if self.eat(b'-') {
            return Ok(Token::Neg(Box::new(self.unary()?)));
        }
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let q = self.exponent()?;
        match base {
            Token::Pi(a) => Ok(Token::Pi(a * q)),
            Token::Tau(a) => Ok(Token::Tau(a * q)),
            other if q.is_integer() => Ok(Token::Pow(Box::new(other), q.to_integer())),
            _ => Err(self.err("fractional exponents are allowed on pi and tau only")),
        }
    }

    fn exponent(&mut self) -> Result<Q, PadicError> {
        if self.eat(b'(') {
            let neg = self.eat(b'-');
            let n = self.small_int()?;
            let d = if self.eat(b'/') { self.small_int()? } else { 1 };
            if !self.eat(b')') {
                return Err(self.err("expected ')'"));
            }
            if d == 0 {
                return Err(self.err("zero denominator in exponent"));
            }
            return Ok(Q::new(if neg { -n } else { n }, d));
        }
        let neg = self.eat(b'-');
        let n = self.small_int()?;
        Ok(Q::from_integer(if neg { -n } else { n }))
    }

    fn digits(&mut self) -> Option<&str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| core::str::from_utf8(&self.src[start..self.pos]).unwrap())
    }

    fn small_int(&mut self) -> Result<i64, PadicError> {
        let pos = self.pos;
        let d = self.digits().ok_or(PadicError::Parse {
            pos,
            msg: "expected an integer",
        })?;
        d.parse().map_err(|_| PadicError::Parse {
            pos,
            msg: "exponent out of range",
        })
    }

    fn atom(&mut self) -> Result<Token, PadicError> {
        if self.eat(b'(') {
            let t = self.expr()?;
            if !self.eat(b')') {
                return Err(self.err("expected ')'"));
            }
            return Ok(t);
        }
        if let Some(d) = self.digits() {
            return Ok(Token::Int(d.parse().unwrap()));
        }
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
        }
        match &self.src[start..self.pos] {
            b"pi" => Ok(Token::Pi(Q::one())),
            b"tau" => Ok(Token::Tau(Q::one())),
            b"p" => Ok(Token::P),
            _ => {
                self.pos = start;
                Err(self.err("expected a number, pi, tau, p or '('"))
            }
        }
    }
}

impl Token {
    pub fn int(n: i64) -> Self {
        Token::Int(BigInt::from(n))
    }

    pub fn from_rational(q: &BigRational) -> Self {
        let n = Token::Int(q.numer().abs());
        let t = if q.denom().is_one() {
            n
        } else {
            Token::Div(Box::new(n), Box::new(Token::Int(q.denom().clone())))
        };
        if q.is_negative() {
            Token::Neg(Box::new(t))
        } else {
            t
        }
    }

    /// Folds rational subtrees and drops `0` and `1` where they are identities.
    pub fn simplified(self, p: u32) -> Self {
        if let Some(q) = self.as_rational(p) {
            return Token::from_rational(&q);
        }
        let is = |t: &Token, n: i64| t.as_rational(p).is_some_and(|q| q == BigRational::from_integer(BigInt::from(n)));
        let neg = |t: Token| match t {
            Token::Neg(a) => *a,
            t => Token::Neg(Box::new(t)),
        };
        match self {
            Token::Neg(a) => neg(a.simplified(p)),
            Token::Add(a, b) => match (a.simplified(p), b.simplified(p)) {
                (a, b) if is(&a, 0) => b,
                (a, b) if is(&b, 0) => a,
                (a, b) => Token::Add(Box::new(a), Box::new(b)),
            },
            Token::Sub(a, b) => match (a.simplified(p), b.simplified(p)) {
                (a, b) if is(&b, 0) => a,
                (a, b) if is(&a, 0) => neg(b),
                (a, b) => Token::Sub(Box::new(a), Box::new(b)),
            },
            Token::Mul(a, b) => match (a.simplified(p), b.simplified(p)) {
                (a, b) if is(&a, 0) || is(&b, 0) => Token::int(0),
                (a, b) if is(&a, 1) => b,
                (a, b) if is(&b, 1) => a,
                (a, b) if is(&a, -1) => neg(b),
                (a, b) if is(&b, -1) => neg(a),
                (a, b) => Token::Mul(Box::new(a), Box::new(b)),
            },
            Token::Div(a, b) => match (a.simplified(p), b.simplified(p)) {
                (a, b) if is(&b, 1) => a,
                (a, b) if is(&b, -1) => neg(a),
                (a, b) => Token::Div(Box::new(a), Box::new(b)),
            },
            Token::Pow(a, 1) => a.simplified(p),
            Token::Pow(a, k) => Token::Pow(Box::new(a.simplified(p)), k),
            t => t,
        }
    }

    pub fn is_zero_rational(&self, p: u32) -> bool {
        self.as_rational(p).is_some_and(|q| q.is_zero())
    }

    /// Ramification index `e` needed to hold every `π`-power appearing in the
    /// token at residue characteristic `p`. Always a multiple of `p - 1`.
    pub fn min_ramification(&self, p: u32) -> u32 {
        let base = (p - 1).max(1) as i64;
        let mut e = base;
        self.visit(&mut |t| {
            let v = match t {
                Token::Pi(q) => Some(*q / Q::from_integer(base)),
                Token::Tau(q) => Some(*q * Q::new(p as i64, base)),
                _ => None,
            };
            if let Some(v) = v {
                e = num_integer::lcm(e, *v.denom());
            }
        });
        e as u32
    }

    fn visit(&self, f: &mut impl FnMut(&Token)) {
        f(self);
        match self {
            Token::Neg(a) | Token::Pow(a, _) => a.visit(f),
            Token::Add(a, b) | Token::Sub(a, b) | Token::Mul(a, b) | Token::Div(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            _ => {}
        }
    }

    /// The rational value, when the token does not involve `pi` or `tau`.
    pub fn as_rational(&self, p: u32) -> Option<BigRational> {
        Some(match self {
            Token::Int(n) => BigRational::from_integer(n.clone()),
            Token::P => BigRational::from_integer(BigInt::from(p)),
            Token::Pi(q) | Token::Tau(q) => {
                if q.is_zero() {
                    BigRational::one()
                } else {
                    return None;
                }
            }
            Token::Neg(a) => -a.as_rational(p)?,
            Token::Add(a, b) => a.as_rational(p)? + b.as_rational(p)?,
            Token::Sub(a, b) => a.as_rational(p)? - b.as_rational(p)?,
            Token::Mul(a, b) => a.as_rational(p)? * b.as_rational(p)?,
            Token::Div(a, b) => {
                let d = b.as_rational(p)?;
                if d.is_zero() {
                    return None;
                }
                a.as_rational(p)? / d
            }
            Token::Pow(a, k) => {
                let r = a.as_rational(p)?;
                if r.is_zero() && *k < 0 {
                    return None;
                }
                if *k >= 0 {
                    num_traits::pow(r, *k as usize)
                } else {
                    num_traits::pow(r.recip(), k.unsigned_abs() as usize)
                }
            }
        })
    }

    /// Evaluates in a tower of the same residue characteristic.
    pub fn eval(&self, t: &FieldTower) -> Result<PadicElement, PadicError> {
        let base = Q::from_integer(t.base_e() as i64);
        Ok(match self {
            Token::Int(n) => PadicElement::from_rational(t, &BigRational::from_integer(n.clone())),
            Token::P => PadicElement::from_int(t, t.p() as i64),
            Token::Pi(q) => PadicElement::pi_power(t, t.pi_exponent(*q / base)?),
            Token::Tau(q) => PadicElement::pi_power(
                t,
                t.pi_exponent(*q * Q::from_integer(t.p() as i64) / base)?,
            ),
            Token::Neg(a) => a.eval(t)?.neg(),
            Token::Add(a, b) => a.eval(t)?.add(&b.eval(t)?),
            Token::Sub(a, b) => a.eval(t)?.sub(&b.eval(t)?),
            Token::Mul(a, b) => a.eval(t)?.mul(&b.eval(t)?),
            Token::Div(a, b) => a.eval(t)?.div(&b.eval(t)?)?,
            Token::Pow(a, k) => a.eval(t)?.pow(*k)?,
        })
    }

    fn prec(&self) -> u8 {
        match self {
            Token::Add(..) | Token::Sub(..) => 1,
            Token::Mul(..) | Token::Div(..) => 2,
            Token::Neg(_) => 3,
            _ => 4,
        }
    }
}

macro_rules! token_binop {
    ($tr:ident, $m:ident, $v:ident) => {
        impl core::ops::$tr for Token {
            type Output = Token;
            fn $m(self, rhs: Token) -> Token {
                Token::$v(Box::new(self), Box::new(rhs))
            }
        }
    };
}
token_binop!(Add, add, Add);
token_binop!(Sub, sub, Sub);
token_binop!(Mul, mul, Mul);
token_binop!(Div, div, Div);

impl core::ops::Neg for Token {
    type Output = Token;
    fn neg(self) -> Token {
        Token::Neg(Box::new(self))
    }
}

fn fmt_exp(f: &mut fmt::Formatter<'_>, name: &str, q: &Q) -> fmt::Result {
    if q.is_one() {
        write!(f, "{}", name)
    } else if q.is_integer() && !q.is_negative() {
        write!(f, "{}^{}", name, q)
    } else {
        write!(f, "{}^({})", name, q)
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |f: &mut fmt::Formatter<'_>, t: &Token, min: u8| -> fmt::Result {
            if t.prec() < min {
                write!(f, "({})", t)
            } else {
                write!(f, "{}", t)
            }
        };
        match self {
            Token::Int(n) => write!(f, "{}", n),
            Token::P => write!(f, "p"),
            Token::Pi(q) => fmt_exp(f, "pi", q),
            Token::Tau(q) => fmt_exp(f, "tau", q),
            Token::Neg(a) => {
                write!(f, "-")?;
                wrap(f, a, 4)
            }
            Token::Add(a, b) | Token::Sub(a, b) => {
                wrap(f, a, 1)?;
                write!(f, "{}", if matches!(self, Token::Add(..)) { " + " } else { " - " })?;
                wrap(f, b, 2)
            }
            Token::Mul(a, b) | Token::Div(a, b) => {
                wrap(f, a, 2)?;
                write!(f, "{}", if matches!(self, Token::Mul(..)) { "*" } else { "/" })?;
                wrap(f, b, 3)
            }
            Token::Pow(a, k) => {
                wrap(f, a, 4)?;
                if *k < 0 {
                    write!(f, "^({})", k)
                } else {
                    write!(f, "^{}", k)
                }
            }
        }
    }
}

/// Splits a comma-separated list of tokens.
pub fn parse_token_list(s: &str) -> Result<Vec<Token>, PadicError> {
    s.split(',').map(parse_token).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::Valuation;

    #[test]
    fn parses_examples() {
        for (s, shown) in [
            ("tau^2", "tau^2"),
            ("5^3", "5^3"),
            ("3/7*pi^2", "3/7*pi^2"),
            ("-1 + p", "-1 + p"),
            ("tau^(1/3)", "tau^(1/3)"),
            ("(1+pi)^(-2)", "(1 + pi)^(-2)"),
        ] {
            let t = parse_token(s).unwrap();
            assert_eq!(alloc::format!("{}", t), shown);
            assert_eq!(parse_token(shown).unwrap(), t);
        }
        assert!(parse_token("2^(1/2)").is_err());
        assert!(parse_token("x").is_err());
        assert!(parse_token("3 4").is_err());
    }

    #[test]
    fn values() {
        let t = FieldTower::new(5, 4, 1, 100).unwrap();
        let v = |s: &str| parse_token(s).unwrap().eval(&t).unwrap().valuation().unwrap();
        assert_eq!(v("tau^2"), Valuation::Finite(Q::new(5, 2)));
        assert_eq!(v("5^3"), Valuation::Finite(Q::from_integer(3)));
        assert_eq!(v("3/7*pi^2"), Valuation::Finite(Q::new(1, 2)));
        assert_eq!(v("pi^4 + p"), Valuation::Infinity);
        assert_eq!(
            parse_token("tau^(1/3)").unwrap().eval(&t),
            Err(PadicError::NeedsExtension { e: 12, f: 1 })
        );
    }

    #[test]
    fn ramification_needed() {
        assert_eq!(parse_token("tau^(1/3)").unwrap().min_ramification(7), 18);
        assert_eq!(parse_token("tau^2").unwrap().min_ramification(5), 4);
        assert_eq!(parse_token("pi^(1/2)").unwrap().min_ramification(3), 4);
        assert_eq!(parse_token("17").unwrap().min_ramification(3), 2);
    }
}
