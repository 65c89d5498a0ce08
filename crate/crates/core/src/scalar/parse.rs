//! Recursive-descent parser for scalar expressions in `q`.
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' int)?
//! atom   := integer | 'q' | 'lambda' | 'lambdap' | '(' expr ')'
//! ```
//!
//! Juxtaposition such as `2q` is accepted as multiplication.

use num_bigint::BigInt;

use super::qrational::{lambda, lambda_plus, QRational};
use crate::error::{Error, Result};

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
    base: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str, base: usize) -> Self {
        Cursor {
            src: src.as_bytes(),
            pos: 0,
            base,
        }
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

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::parse(self.base + self.pos, msg)
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse().unwrap())
    }

    fn signed_int(&mut self) -> Result<i64> {
        let neg = self.eat(b'-');
        let paren = !neg && self.eat(b'(');
        let neg = neg || (paren && self.eat(b'-'));
        let n = self.integer()?;
        if paren && !self.eat(b')') {
            return Err(self.err("expected `)`"));
        }
        let n: i64 = n.try_into().map_err(|_| self.err("exponent too large"))?;
        Ok(if neg { -n } else { n })
    }

    fn ident(&mut self) -> &'a str {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).unwrap()
    }

    fn expr(&mut self) -> Result<QRational> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc += self.term()?;
            } else if self.eat(b'-') {
                acc -= self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<QRational> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc *= self.unary()?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let d = self.unary()?;
                    if d.is_zero() {
                        return Err(Error::parse(self.base + at, "division by zero"));
                    }
                    acc = acc / d;
                }
                Some(c) if c == b'(' || c == b'q' || c == b'l' || c.is_ascii_digit() => {
                    acc *= self.power()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<QRational> {
        if self.eat(b'-') {
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<QRational> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let e = self.signed_int()?;
            if e < 0 && base.is_zero() {
                return Err(self.err("negative power of zero"));
            }
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<QRational> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => Ok(QRational::from_bigint(self.integer()?)),
            Some(c) if c.is_ascii_alphabetic() => {
                let at = self.pos;
                match self.ident() {
                    "q" => Ok(QRational::q()),
                    "lambda" => Ok(lambda()),
                    "lambdap" => Ok(lambda_plus()),
                    other => Err(Error::parse(
                        self.base + at,
                        format!("unknown symbol `{other}`"),
                    )),
                }
            }
            Some(c) => Err(self.err(format!("unexpected `{}`", c as char))),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }
}

pub fn parse_qrational(s: &str) -> Result<QRational> {
    parse_qrational_at(s, 0)
}

/// Parses with error positions offset by `base`.
pub fn parse_qrational_at(s: &str, base: usize) -> Result<QRational> {
    let mut c = Cursor::new(s, base);
    let v = c.expr()?;
    if !c.at_end() {
        return Err(c.err("trailing input"));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rendered_forms() {
        for s in ["-1/q", "(1+q^2)/q", "q^-3", "-1/2", "(1-q)/(1+q+q^2)", "0"] {
            let v = parse_qrational(s).unwrap();
            assert_eq!(parse_qrational(&v.render()).unwrap(), v, "{s}");
        }
    }

    #[test]
    fn symbols_and_juxtaposition() {
        let a = parse_qrational("q^3 lambda^2 lambdap").unwrap();
        let b = QRational::q_pow(3) * lambda() * lambda() * lambda_plus();
        assert_eq!(a, b);
        assert_eq!(parse_qrational("2q").unwrap(), QRational::from_int(2) * QRational::q());
        assert_eq!(parse_qrational("q^(-2)").unwrap(), QRational::q_pow(-2));
    }

    #[test]
    fn reports_position() {
        match parse_qrational("1 + x") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("{other:?}"),
        }
        assert!(parse_qrational("1/(q-q)").is_err());
    }
}
