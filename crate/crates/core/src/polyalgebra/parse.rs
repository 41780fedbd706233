//! Recursive-descent reader for polynomial text such as `x0*x2 - 3/2*x1^2`.
//!
//! Grammar:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | 'x' integer | '(' expr ')'
//! ```
//!
//! Division is only allowed by a nonzero constant. The result is always the
//! expanded normal form.

use num_bigint::BigInt;
use num_traits::Zero;

use super::poly::Poly;
use super::Rat;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("variable x{index} at position {position} is out of range for {nvars} variables")]
    VariableOutOfRange { index: usize, nvars: usize, position: usize },
}

impl ParseError {
    pub fn position(&self) -> usize {
        match self {
            ParseError::Syntax { position, .. } => *position,
            ParseError::VariableOutOfRange { position, .. } => *position,
        }
    }
}

/// Parses `text` as a polynomial in `x0..x{nvars-1}`.
pub fn parse_poly(text: &str, nvars: usize) -> Result<Poly, ParseError> {
    let mut parser = Parser { src: text.as_bytes(), pos: 0, nvars };
    parser.skip_ws();
    if parser.at_end() {
        return Err(parser.error("empty expression"));
    }
    let p = parser.expr()?;
    parser.skip_ws();
    if !parser.at_end() {
        return Err(parser.error(format!("unexpected character '{}'", parser.peek_char())));
    }
    Ok(p)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    nvars: usize,
}

impl Parser<'_> {
    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn peek_char(&self) -> char {
        std::str::from_utf8(&self.src[self.pos..])
            .ok()
            .and_then(|s| s.chars().next())
            .unwrap_or('?')
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ' | b'\t' | b'\r' | b'\n')) {
            self.pos += 1;
        }
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::Syntax { position: self.pos, message: message.into() }
    }

    fn expr(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.term()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    acc = &acc + &rhs;
                }
                Some(b'-') => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    acc = &acc - &rhs;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.unary()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = &acc * &rhs;
                }
                Some(b'/') => {
                    self.pos += 1;
                    self.skip_ws();
                    let at = self.pos;
                    let rhs = self.unary()?;
                    let c = constant_value(&rhs).ok_or(ParseError::Syntax {
                        position: at,
                        message: "division is only allowed by a constant".into(),
                    })?;
                    if c.is_zero() {
                        return Err(ParseError::Syntax {
                            position: at,
                            message: "division by zero".into(),
                        });
                    }
                    acc = acc.scale(&c.recip());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Poly, ParseError> {
        self.skip_ws();
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

    fn power(&mut self) -> Result<Poly, ParseError> {
        let base = self.atom()?;
        self.skip_ws();
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let at = self.pos;
            let digits = self.digits().ok_or_else(|| self.error("expected exponent"))?;
            let e: u32 = digits.parse().map_err(|_| ParseError::Syntax {
                position: at,
                message: "exponent too large".into(),
            })?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly, ParseError> {
        self.skip_ws();
        let at = self.pos;
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.skip_ws();
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b'x') => {
                self.pos += 1;
                let digits = self
                    .digits()
                    .ok_or_else(|| self.error("expected variable index after 'x'"))?;
                let index: usize = digits.parse().unwrap_or(usize::MAX);
                if index >= self.nvars {
                    return Err(ParseError::VariableOutOfRange {
                        index,
                        nvars: self.nvars,
                        position: at,
                    });
                }
                Ok(Poly::var(self.nvars, index))
            }
            Some(c) if c.is_ascii_digit() => {
                let digits = self.digits().expect("digit present");
                let n: BigInt = digits.parse().expect("ascii digits");
                Ok(Poly::constant(self.nvars, Rat::from_integer(n)))
            }
            None => Err(self.error("unexpected end of input")),
            Some(_) => Err(self.error(format!("unexpected character '{}'", self.peek_char()))),
        }
    }

    fn digits(&mut self) -> Option<String> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            None
        } else {
            Some(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
        }
    }
}

fn constant_value(p: &Poly) -> Option<Rat> {
    match p.num_terms() {
        0 => Some(Rat::zero()),
        1 => {
            let (m, c) = p.leading_term()?;
            m.is_one().then(|| c.clone())
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalgebra::Monomial;
    use num_traits::One;

    #[test]
    fn quadric() {
        let f = parse_poly("x0*x2 - x1^2", 3).unwrap();
        assert_eq!(f.num_terms(), 2);
        assert_eq!(f.degree(), Some(2));
        assert!(f.is_homogeneous());
    }

    #[test]
    fn cancellation_gives_zero() {
        let f = parse_poly("x0 - x0", 2).unwrap();
        assert!(f.is_zero());
    }

    #[test]
    fn binomial_expansion() {
        let f = parse_poly("(x0+x1)^2", 2).unwrap();
        let two = Rat::from_integer(2.into());
        let expected = Poly::from_terms(
            2,
            [
                (Monomial::new(vec![2, 0]), Rat::one()),
                (Monomial::new(vec![1, 1]), two),
                (Monomial::new(vec![0, 2]), Rat::one()),
            ],
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn rational_literals_and_unary() {
        let f = parse_poly("-3/4*x0 + (x1)/2 - -x1", 2).unwrap();
        assert_eq!(f.to_string(), "-3/4*x0 + 3/2*x1");
        assert_eq!(parse_poly("-x0^2", 1).unwrap().to_string(), "-x0^2");
    }

    #[test]
    fn errors_report_positions() {
        let e = parse_poly("x0 + * x1", 2).unwrap_err();
        assert_eq!(e.position(), 5);
        let e = parse_poly("x0 + x3", 3).unwrap_err();
        assert_eq!(e, ParseError::VariableOutOfRange { index: 3, nvars: 3, position: 5 });
        let e = parse_poly("(x0 + x1", 2).unwrap_err();
        assert_eq!(e.position(), 8);
        assert!(parse_poly("", 2).is_err());
        assert!(parse_poly("x0 / x1", 2).is_err());
        assert!(parse_poly("x0 / 0", 2).is_err());
        assert!(parse_poly("x0^", 2).is_err());
        assert!(parse_poly("x0 x1", 2).is_err());
        assert!(parse_poly("y0", 2).is_err());
    }
}
