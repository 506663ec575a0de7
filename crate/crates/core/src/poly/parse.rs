use num_bigint::BigInt;
use num_traits::Zero;

use super::{MPoly, UPoly};
use crate::arith::Rat;
use crate::error::{Error, Result};

const MAX_EXPONENT: u64 = 64;

/// A parsed term: coefficient and (0-based variable, exponent) factors.
type RawTerm = (Rat, Vec<(usize, u32)>);

/// Parses a polynomial in `nvars` variables. Variables are `x1..xn`, with
/// `x`, `y`, `z` standing for `x1`, `x2`, `x3`.
pub fn parse_poly(text: &str, nvars: usize) -> Result<MPoly> {
    let terms = Parser::new(text).poly()?;
    build(terms, nvars)
}

/// Like [`parse_poly`], with the variable count taken as the largest
/// variable index that occurs (at least one).
pub fn parse_poly_auto(text: &str) -> Result<MPoly> {
    let terms = Parser::new(text).poly()?;
    let n = terms.iter().flat_map(|(_, fs)| fs.iter().map(|(v, _)| v + 1)).max().unwrap_or(1);
    build(terms, n)
}

/// Parses a univariate polynomial in `x` (equivalently `x1`).
pub fn parse_upoly(text: &str) -> Result<UPoly> {
    parse_poly(text, 1)?.to_upoly()
}

fn build(terms: Vec<RawTerm>, nvars: usize) -> Result<MPoly> {
    let mut out = Vec::with_capacity(terms.len());
    for (c, factors) in terms {
        let mut e = vec![0u32; nvars];
        for (v, k) in factors {
            if v >= nvars {
                return Err(Error::VariableIndex { index: v + 1, nvars });
            }
            e[v] += k;
        }
        out.push((e, c));
    }
    Ok(MPoly::from_terms(nvars, out))
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Parser<'a> {
        Parser { src: text.as_bytes(), pos: 0 }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Syntax { pos: self.pos, msg: msg.into() }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn poly(&mut self) -> Result<Vec<RawTerm>> {
        let mut terms = Vec::new();
        self.skip_ws();
        let mut negate = false;
        if let Some(b @ (b'+' | b'-')) = self.peek() {
            negate = b == b'-';
            self.pos += 1;
            self.skip_ws();
        }
        loop {
            let (c, f) = self.term()?;
            terms.push((if negate { -c } else { c }, f));
            self.skip_ws();
            match self.peek() {
                None => return Ok(terms),
                Some(b'+') => negate = false,
                Some(b'-') => negate = true,
                Some(_) => return Err(self.err("expected '+', '-' or end of input")),
            }
            self.pos += 1;
            self.skip_ws();
        }
    }

    fn term(&mut self) -> Result<RawTerm> {
        let coef = if self.peek().is_some_and(|b| b.is_ascii_digit()) { Some(self.coef()?) } else { None };
        let mut factors = Vec::new();
        loop {
            let save = self.pos;
            self.skip_ws();
            let star = self.peek() == Some(b'*');
            if star {
                self.pos += 1;
                self.skip_ws();
            }
            if self.peek().is_some_and(|b| b.is_ascii_alphabetic()) {
                factors.push(self.factor()?);
            } else if star {
                return Err(self.err("expected a variable after '*'"));
            } else {
                self.pos = save;
                break;
            }
        }
        if coef.is_none() && factors.is_empty() {
            return Err(self.err("expected a term"));
        }
        Ok((coef.unwrap_or_else(Rat::one), factors))
    }

    fn nat(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(digits.parse().expect("digit string"))
    }

    fn coef(&mut self) -> Result<Rat> {
        let n = self.nat()?;
        if self.peek() == Some(b'/') {
            self.pos += 1;
            let d = self.nat()?;
            if d.is_zero() {
                return Err(self.err("zero denominator"));
            }
            return Ok(Rat::new(n, d));
        }
        Ok(Rat::from(n))
    }

    fn factor(&mut self) -> Result<(usize, u32)> {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_alphanumeric()) {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii identifier");
        let var = match name {
            "x" => 0,
            "y" => 1,
            "z" => 2,
            _ => match name.strip_prefix('x').map(str::parse::<usize>) {
                Some(Ok(k)) if k >= 1 && name[1..].bytes().all(|b| b.is_ascii_digit()) => k - 1,
                _ => return Err(Error::UnknownVariable(name.to_string())),
            },
        };
        let save = self.pos;
        self.skip_ws();
        if self.peek() != Some(b'^') {
            self.pos = save;
            return Ok((var, 1));
        }
        self.pos += 1;
        self.skip_ws();
        let e = self.nat()?;
        match u64::try_from(&e) {
            Ok(k) if k <= MAX_EXPONENT => Ok((var, k as u32)),
            Ok(k) => Err(Error::ExponentOverflow(k)),
            Err(_) => Err(Error::ExponentOverflow(u64::MAX)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn motzkin_has_four_terms() {
        let f = parse_poly("x^4*y^2 + x^2*y^4 - 3*x^2*y^2 + 1", 2).unwrap();
        assert_eq!(f.num_terms(), 4);
        assert_eq!(f.coeff(&[2, 2]), Rat::from(-3));
    }

    #[test]
    fn zero_and_fractions() {
        assert!(parse_poly("0", 1).unwrap().is_zero());
        let f = parse_poly("1/2*x1 - x2^3", 2).unwrap();
        assert_eq!(f.num_terms(), 2);
        assert_eq!(f.coeff(&[1, 0]), rat(1, 2));
        assert_eq!(f.coeff(&[0, 3]), Rat::from(-1));
    }

    #[test]
    fn implicit_multiplication() {
        let a = parse_poly("2x1^3x2", 2).unwrap();
        let b = parse_poly("2*x1^3*x2", 2).unwrap();
        assert_eq!(a, b);
        assert_eq!(parse_poly("3/2 x y", 2).unwrap(), parse_poly("3/2*x*y", 2).unwrap());
    }

    #[test]
    fn leading_sign_and_like_terms() {
        assert_eq!(parse_poly("-x + 2x", 1).unwrap(), parse_poly("x", 1).unwrap());
        assert!(parse_poly("x - x", 1).unwrap().is_zero());
    }

    #[test]
    fn errors_carry_position_or_name() {
        assert!(matches!(parse_poly("x +", 1), Err(Error::Syntax { pos: 3, .. })));
        assert!(matches!(parse_poly("2 3", 1), Err(Error::Syntax { .. })));
        assert!(matches!(parse_poly("x*", 1), Err(Error::Syntax { .. })));
        assert!(matches!(parse_poly("1/0", 1), Err(Error::Syntax { .. })));
        assert_eq!(parse_poly("w", 1), Err(Error::UnknownVariable("w".into())));
        assert_eq!(parse_poly("x0", 1), Err(Error::UnknownVariable("x0".into())));
        assert_eq!(parse_poly("x^65", 1), Err(Error::ExponentOverflow(65)));
        assert!(parse_poly("x^64", 1).is_ok());
        assert_eq!(parse_poly("z", 2), Err(Error::VariableIndex { index: 3, nvars: 2 }));
    }

    #[test]
    fn auto_variable_count() {
        assert_eq!(parse_poly_auto("x3 + 1").unwrap().nvars(), 3);
        assert_eq!(parse_poly_auto("5").unwrap().nvars(), 1);
        assert_eq!(parse_upoly("x^3 - x").unwrap(), UPoly::from_i64(&[0, -1, 0, 1]));
    }
}
