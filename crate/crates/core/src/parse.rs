//! Text form of polynomials.
//!
//! ```text
//! poly   := sign? term (sign term)*
//! term   := factor ('*' factor)*
//! factor := int ('/' int)? | ident ('^' int)?
//! ```
//! Whitespace is insignificant. Printing with `Display` produces text that
//! parses back to the same polynomial.

use num_bigint::BigInt;

use crate::error::AlgebraError;
use crate::field::Field;
use crate::monomial::{ExponentVector, DEFAULT_EXPONENT_CAP};
use crate::poly::Polynomial;
use crate::ring::Ring;

#[derive(Debug, Clone, Copy)]
pub struct ParseOptions {
    pub exponent_cap: u64,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions {
            exponent_cap: DEFAULT_EXPONENT_CAP as u64,
        }
    }
}

pub fn parse_polynomial<F: Field>(text: &str, ring: &Ring) -> Result<Polynomial<F>, AlgebraError> {
    parse_polynomial_with(text, ring, ParseOptions::default())
}

pub fn parse_polynomial_with<F: Field>(
    text: &str,
    ring: &Ring,
    opts: ParseOptions,
) -> Result<Polynomial<F>, AlgebraError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        ring,
        cap: opts.exponent_cap.min(DEFAULT_EXPONENT_CAP as u64),
    };
    let mut terms = Vec::new();
    p.skip_ws();
    let mut negate = match p.peek() {
        Some(b'-') => {
            p.pos += 1;
            true
        }
        Some(b'+') => {
            p.pos += 1;
            false
        }
        _ => false,
    };
    loop {
        let (c, e) = p.term::<F>()?;
        terms.push((if negate { -c } else { c }, e));
        p.skip_ws();
        match p.peek() {
            None => break,
            Some(b'+') => negate = false,
            Some(b'-') => negate = true,
            Some(_) => return Err(p.syntax("expected `+`, `-` or end of input")),
        }
        p.pos += 1;
    }
    Ok(Polynomial::from_terms_unchecked(ring, terms))
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ring: &'a Ring,
    cap: u64,
}

impl Parser<'_> {
    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn syntax(&self, message: &str) -> AlgebraError {
        AlgebraError::Syntax {
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn term<F: Field>(&mut self) -> Result<(F, ExponentVector), AlgebraError> {
        let mut coeff = F::one();
        let mut exps = vec![0u64; self.ring.nvars()];
        loop {
            self.skip_ws();
            match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    let start = self.pos;
                    let num = self.integer()?;
                    self.skip_ws();
                    if self.peek() == Some(b'/') {
                        self.pos += 1;
                        self.skip_ws();
                        let den = self.integer()?;
                        let q = F::from_fraction(&num, &den)
                            .ok_or(AlgebraError::ZeroDenominator { position: start })?;
                        coeff = coeff.mul_ref(&q);
                    } else {
                        coeff = coeff.mul_ref(&F::from_bigint(&num));
                    }
                }
                Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                    let start = self.pos;
                    while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
                        self.pos += 1;
                    }
                    let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                    let var = self.ring.index_of(name).ok_or_else(|| AlgebraError::UnknownVariable {
                        name: name.to_string(),
                        position: start,
                    })?;
                    self.skip_ws();
                    let mut e = 1u64;
                    if self.peek() == Some(b'^') {
                        self.pos += 1;
                        self.skip_ws();
                        e = self.exponent()?;
                    }
                    exps[var] += e;
                    if exps[var] > self.cap {
                        return Err(AlgebraError::ExponentOverflow {
                            value: exps[var],
                            cap: self.cap,
                        });
                    }
                }
                _ => return Err(self.syntax("expected a number or a variable")),
            }
            self.skip_ws();
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                break;
            }
        }
        let exps: Vec<u32> = exps.into_iter().map(|e| e as u32).collect();
        Ok((coeff, ExponentVector::new(&exps)?))
    }

    fn digits(&mut self) -> Result<&str, AlgebraError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.syntax("expected digits"));
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).expect("ascii"))
    }

    fn integer(&mut self) -> Result<BigInt, AlgebraError> {
        let s = self.digits()?;
        Ok(s.parse().expect("digit string"))
    }

    fn exponent(&mut self) -> Result<u64, AlgebraError> {
        let cap = self.cap;
        let s = self.digits()?;
        match s.parse::<u64>() {
            Ok(v) if v <= cap => Ok(v),
            Ok(v) => Err(AlgebraError::ExponentOverflow { value: v, cap }),
            Err(_) => Err(AlgebraError::ExponentOverflow { value: u64::MAX, cap }),
        }
    }
}

/// Parse a list of generator strings.
pub fn parse_generators<F: Field, S: AsRef<str>>(
    gens: &[S],
    ring: &Ring,
) -> Result<Vec<Polynomial<F>>, AlgebraError> {
    gens.iter().map(|g| parse_polynomial(g.as_ref(), ring)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Fp, Rational};
    use crate::ring::RingDescriptor;

    fn ring() -> Ring {
        RingDescriptor::new::<Rational, _>(&["x", "y"]).unwrap()
    }

    fn ev(e: &[u32]) -> ExponentVector {
        ExponentVector::from_slice(e)
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn reads_terms() {
        let f: Polynomial<Rational> = parse_polynomial("x^2 + 3*x*y", &ring()).unwrap();
        assert_eq!(f.terms(), &[(q(1, 1), ev(&[2, 0])), (q(3, 1), ev(&[1, 1]))]);
    }

    #[test]
    fn cancellation_gives_zero() {
        let f: Polynomial<Rational> = parse_polynomial("x - x", &ring()).unwrap();
        assert!(f.is_zero());
    }

    #[test]
    fn lowest_terms() {
        let f: Polynomial<Rational> = parse_polynomial("2/4*y", &ring()).unwrap();
        assert_eq!(f.terms(), &[(q(1, 2), ev(&[0, 1]))]);
    }

    #[test]
    fn whitespace_is_insignificant() {
        let a: Polynomial<Rational> = parse_polynomial(" x ^ 2*y -  3 / 6 ", &ring()).unwrap();
        let b: Polynomial<Rational> = parse_polynomial("x^2*y-1/2", &ring()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn error_positions() {
        let r = ring();
        match parse_polynomial::<Rational>("x + * y", &r) {
            Err(AlgebraError::Syntax { position, .. }) => assert_eq!(position, 4),
            other => panic!("{other:?}"),
        }
        assert_eq!(
            parse_polynomial::<Rational>("x + z", &r),
            Err(AlgebraError::UnknownVariable {
                name: "z".into(),
                position: 4
            })
        );
        assert_eq!(
            parse_polynomial::<Rational>("3/0*x", &r),
            Err(AlgebraError::ZeroDenominator { position: 0 })
        );
        assert!(matches!(
            parse_polynomial::<Rational>("x^2147483648", &r),
            Err(AlgebraError::ExponentOverflow { .. })
        ));
        let small = ParseOptions { exponent_cap: 10 };
        assert!(parse_polynomial_with::<Rational>("x^6*x^5", &r, small).is_err());
        assert!(parse_polynomial::<Rational>("", &r).is_err());
        assert!(parse_polynomial::<Rational>("x y", &r).is_err());
    }

    #[test]
    fn prime_field_coefficients() {
        let r = RingDescriptor::new::<Fp, _>(&["x", "y"]).unwrap();
        let f: Polynomial<Fp> = parse_polynomial("1/2*x + 1/2*x - y", &r).unwrap();
        assert_eq!(f.to_string(), "x - y");
    }
}
