//! Cyclotomic expressions in `E(n)` syntax.
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := factor ('*' factor)*
//! factor   := rational | 'E(' int ')' ['^' int] | '(' expr ')' | '-' factor
//! rational := ['-'] int ['/' int]
//! ```
//!
//! `E(n)` is `exp(2πi/n)`. A leading `-` on a non-numeric factor is accepted
//! so that everything [`Cyclotomic`]'s printer emits parses back.

use deloc_core::exactnum::{Cyclotomic, Rational};
use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at offset {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

pub fn parse_cyclotomic(text: &str) -> Result<Cyclotomic, ParseError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    p.skip_ws();
    if p.at_end() {
        return Err(p.error("empty expression"));
    }
    let value = p.expr()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.error(format!("unexpected '{}'", p.src[p.pos] as char)));
    }
    Ok(value)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn error_at(&self, offset: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            offset,
            message: message.into(),
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
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

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{}'", c as char)))
        }
    }

    fn expr(&mut self) -> Result<Cyclotomic, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = &acc + &self.term()?;
            } else if self.eat(b'-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Cyclotomic, ParseError> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Cyclotomic, ParseError> {
        match self.peek() {
            Some(b'E') => self.root(),
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(b')')?;
                Ok(inner)
            }
            Some(b'-') => {
                let start = self.pos;
                self.pos += 1;
                if self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    self.pos = start;
                    self.rational()
                } else {
                    Ok(-self.factor()?)
                }
            }
            Some(c) if c.is_ascii_digit() => self.rational(),
            Some(c) => Err(self.error(format!("unexpected '{}'", c as char))),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn int(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(digits.parse().expect("digits parse"))
    }

    fn rational(&mut self) -> Result<Cyclotomic, ParseError> {
        let negative = self.eat(b'-');
        let mut num = self.int()?;
        if negative {
            num = -num;
        }
        let mut den = BigInt::from(1);
        if self.eat(b'/') {
            let at = self.pos;
            den = self.int()?;
            if den.is_zero() {
                return Err(self.error_at(at, "zero denominator"));
            }
        }
        Ok(Cyclotomic::from_rational(Rational::new(num, den)))
    }

    fn small_int(&mut self, what: &str) -> Result<(usize, i64), ParseError> {
        self.skip_ws();
        let at = self.pos;
        let negative = self.eat(b'-');
        let v = self.int()?;
        let v: i64 = v
            .try_into()
            .map_err(|_| self.error_at(at, format!("{what} out of range")))?;
        Ok((at, if negative { -v } else { v }))
    }

    fn root(&mut self) -> Result<Cyclotomic, ParseError> {
        let start = self.pos;
        self.pos += 1;
        if !self.eat(b'(') {
            return Err(self.error("expected '(' after E"));
        }
        let (_, n) = self.small_int("order")?;
        if n <= 0 || n > u32::MAX as i64 {
            return Err(self.error_at(
                start,
                format!("E({n}) is not a root of unity of positive order"),
            ));
        }
        self.expect(b')')?;
        let k = if self.eat(b'^') {
            self.small_int("exponent")?.1
        } else {
            1
        };
        Ok(Cyclotomic::root_of_unity(n as u32, k))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Cyclotomic {
        Cyclotomic::from_rational(deloc_core::exactnum::rational(n, d))
    }

    #[test]
    fn examples() {
        assert_eq!(
            parse_cyclotomic("E(4)").unwrap(),
            Cyclotomic::root_of_unity(4, 1)
        );
        let v = parse_cyclotomic("1/2 - E(3)^2").unwrap();
        assert_eq!(v, &q(3, 2) + &Cyclotomic::root_of_unity(3, 1));
        assert_eq!(parse_cyclotomic("E(0)").unwrap_err().offset, 0);
    }

    #[test]
    fn whitespace_and_nesting() {
        let v = parse_cyclotomic("  ( 1 + E( 4 ) ) * ( 1 - E(4) ) ").unwrap();
        assert_eq!(v, Cyclotomic::from_int(2));
        assert_eq!(
            parse_cyclotomic("-1/2*E(5)^2").unwrap(),
            &q(-1, 2) * &Cyclotomic::root_of_unity(5, 2)
        );
        assert_eq!(
            parse_cyclotomic("-E(5)^2").unwrap(),
            -Cyclotomic::root_of_unity(5, 2)
        );
        assert_eq!(
            parse_cyclotomic("E(8)^-1").unwrap(),
            Cyclotomic::root_of_unity(8, 7)
        );
        assert_eq!(parse_cyclotomic("2 - -3").unwrap(), Cyclotomic::from_int(5));
    }

    #[test]
    fn errors_carry_offsets() {
        let cases = [
            ("", 0),
            ("1 +", 3),
            ("1/0", 2),
            ("E(4", 3),
            ("3 4", 2),
            ("  E(-2)", 2),
            ("x", 0),
            ("E4", 1),
            ("(1", 2),
        ];
        for (text, offset) in cases {
            let err = parse_cyclotomic(text).unwrap_err();
            assert_eq!(err.offset, offset, "{text:?}: {err}");
        }
    }

    #[test]
    fn printer_output_parses_back() {
        for v in [
            Cyclotomic::zero(),
            q(-7, 3),
            &q(3, 2) + &Cyclotomic::root_of_unity(3, 1),
            -Cyclotomic::root_of_unity(5, 2),
            &Cyclotomic::root_of_unity(12, 1) - &q(1, 4),
        ] {
            assert_eq!(parse_cyclotomic(&v.to_string()).unwrap(), v);
        }
    }
}
