//! Recursive-descent parser for the polynomial text format.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' uint)?
//! atom   := uint | 'x' index | '(' expr ')'
//! ```
//! Whitespace is ignored; implicit multiplication is rejected.

use super::MPoly;
use crate::error::{Error, Result};
use crate::field::PrimeField;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    n: usize,
    field: PrimeField,
}

pub fn parse_poly(text: &str, n: usize, field: PrimeField) -> Result<MPoly> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        n,
        field,
    };
    p.skip_ws();
    if p.pos == p.src.len() {
        return Err(p.err("empty input"));
    }
    let out = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(out)
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
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

    fn expr(&mut self) -> Result<MPoly> {
        let mut acc = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == b'+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<MPoly> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = &acc * &rhs;
                }
                Some(c) if c.is_ascii_alphanumeric() || c == b'(' => {
                    return Err(self.err("implicit multiplication is not allowed"));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<MPoly> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<MPoly> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            let digits = self.digits();
            if digits.is_empty() {
                return Err(self.err("expected a nonnegative integer exponent"));
            }
            let e: u32 = std::str::from_utf8(digits)
                .expect("ascii digits")
                .parse()
                .map_err(|_| Error::Syntax {
                    pos: start,
                    msg: "exponent too large".into(),
                })?;
            if self.peek() == Some(b'^') {
                return Err(self.err("chained exponents are ambiguous; use parentheses"));
            }
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn digits(&mut self) -> &[u8] {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }

    fn atom(&mut self) -> Result<MPoly> {
        let f = self.field;
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b'x') => {
                self.pos += 1;
                let start = self.pos;
                let digits = self.digits();
                if digits.is_empty() {
                    return Err(Error::Syntax {
                        pos: start,
                        msg: "expected a variable index after 'x'".into(),
                    });
                }
                let index: usize = std::str::from_utf8(digits)
                    .expect("ascii")
                    .parse()
                    .unwrap_or(usize::MAX);
                if index == 0 || index > self.n {
                    return Err(Error::VariableIndexOutOfRange { index, n: self.n });
                }
                Ok(MPoly::var(self.n, f, index - 1))
            }
            Some(c) if c.is_ascii_digit() => {
                // literals of any length, reduced digit by digit
                let p = f.modulus();
                let v = self.digits().iter().fold(0u64, |acc, &d| {
                    f.add(f.mul(acc, 10 % p), (d - b'0') as u64 % p)
                });
                Ok(MPoly::constant(self.n, f, v))
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::MultiIndex;

    fn fp(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn parses_with_reduction() {
        let f = parse_poly("x1^2 - 2*x1 + 1", 1, fp(5)).unwrap();
        let terms: Vec<(Vec<u32>, u64)> = f.terms().map(|(k, c)| (k.exps().to_vec(), c)).collect();
        assert_eq!(terms, vec![(vec![0], 1), (vec![1], 3), (vec![2], 1)]);
    }

    #[test]
    fn zero_and_range_errors() {
        assert!(parse_poly("0", 3, fp(7)).unwrap().is_zero());
        assert_eq!(
            parse_poly("x4", 3, fp(7)),
            Err(Error::VariableIndexOutOfRange { index: 4, n: 3 })
        );
        assert_eq!(
            parse_poly("x0", 3, fp(7)),
            Err(Error::VariableIndexOutOfRange { index: 0, n: 3 })
        );
    }

    #[test]
    fn syntax_errors() {
        for bad in [
            "2x1", "x1 +", "(x1", "x1^", "", "x1 x2", "x1^2^3", "3 $ 4", "x",
        ] {
            assert!(
                matches!(parse_poly(bad, 2, fp(7)), Err(Error::Syntax { .. })),
                "{bad:?}"
            );
        }
    }

    #[test]
    fn precedence_and_parentheses() {
        let f7 = fp(7);
        assert_eq!(
            parse_poly("-x1^2", 1, f7).unwrap(),
            parse_poly("-(x1^2)", 1, f7).unwrap()
        );
        assert_eq!(
            parse_poly("(x1 + 1)^2", 1, f7).unwrap(),
            parse_poly("x1^2 + 2*x1 + 1", 1, f7).unwrap()
        );
        assert_eq!(
            parse_poly("2*3 + 1", 1, f7).unwrap(),
            MPoly::constant(1, f7, 0)
        );
        assert_eq!(
            parse_poly(" x1 * x2 - - x2 ", 2, f7).unwrap(),
            parse_poly("x1*x2+x2", 2, f7).unwrap()
        );
        let big = parse_poly("123456789012345678901234567890*x1", 1, f7).unwrap();
        assert_eq!(
            big.coeff(MultiIndex::unit(1, 0).exps()),
            (123456789012345678901234567890u128 % 7) as u64
        );
    }
}
