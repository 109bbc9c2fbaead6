//! Sparse multivariate polynomials in canonical form.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};



use crate::error::AlgebraError;
use crate::field::Field;
use crate::monomial::ExponentVector;
use crate::ring::{same_ring, Ring};

/// A polynomial over `F`. Terms are sorted strictly descending in the ring's
/// order with nonzero coefficients, so structural equality is ideal-free
/// polynomial equality.
#[derive(Clone)]
pub struct Polynomial<F> {
    ring: Ring,
    terms: Vec<(F, ExponentVector)>,
}

impl<F: Field> Polynomial<F> {
    pub fn zero(ring: &Ring) -> Self {
        Polynomial {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    pub fn one(ring: &Ring) -> Self {
        Self::constant(ring, F::one())
    }

    pub fn constant(ring: &Ring, c: F) -> Self {
        Self::term(ring, c, ExponentVector::zero(ring.nvars()))
    }

    pub fn term(ring: &Ring, c: F, exp: ExponentVector) -> Self {
        assert_eq!(exp.len(), ring.nvars(), "exponent length must match ring");
        let terms = if c.is_zero() { Vec::new() } else { vec![(c, exp)] };
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    /// The monic monomial `x^exp`.
    pub fn monomial(ring: &Ring, exp: ExponentVector) -> Self {
        Self::term(ring, F::one(), exp)
    }

    pub fn variable(ring: &Ring, i: usize) -> Self {
        Self::monomial(ring, ExponentVector::pure_power(ring.nvars(), i, 1))
    }

    /// Canonicalize an arbitrary list of terms.
    pub fn from_terms(ring: &Ring, terms: Vec<(F, ExponentVector)>) -> Result<Self, AlgebraError> {
        if let Some((_, e)) = terms.iter().find(|(_, e)| e.len() != ring.nvars()) {
            return Err(AlgebraError::LengthMismatch(e.len(), ring.nvars()));
        }
        Ok(Self::from_terms_unchecked(ring, terms))
    }

    pub(crate) fn from_terms_unchecked(ring: &Ring, mut terms: Vec<(F, ExponentVector)>) -> Self {
        let order = ring.order();
        terms.sort_by(|a, b| order.compare(&b.1, &a.1));
        let mut out: Vec<(F, ExponentVector)> = Vec::with_capacity(terms.len());
        for (c, e) in terms {
            match out.last_mut() {
                Some(last) if last.1 == e => {
                    last.0 = last.0.add_ref(&c);
                }
                _ => {
                    if let Some(last) = out.last() {
                        if last.0.is_zero() {
                            out.pop();
                        }
                    }
                    out.push((c, e));
                }
            }
        }
        if matches!(out.last(), Some((c, _)) if c.is_zero()) {
            out.pop();
        }
        Polynomial {
            ring: ring.clone(),
            terms: out,
        }
    }

    /// Terms already sorted descending, deduplicated and nonzero.
    pub(crate) fn from_sorted_terms(ring: &Ring, terms: Vec<(F, ExponentVector)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| ring.order().compare(&w[0].1, &w[1].1) == Ordering::Greater));
        debug_assert!(terms.iter().all(|(c, _)| !c.is_zero()));
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn terms(&self) -> &[(F, ExponentVector)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(F, ExponentVector)> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading_monomial(&self) -> Option<&ExponentVector> {
        self.terms.first().map(|(_, e)| e)
    }

    pub fn leading_coeff(&self) -> Option<&F> {
        self.terms.first().map(|(c, _)| c)
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.iter().map(|(_, e)| e.degree()).max()
    }

    /// A single term (coefficient arbitrary).
    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(_, e)| e.is_one())
    }

    pub fn monic(&self) -> Self {
        match self.leading_coeff() {
            None => self.clone(),
            Some(lc) if lc.is_one() => self.clone(),
            Some(lc) => self.scale(&lc.inv().expect("nonzero leading coefficient")),
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(a, e)| (a.mul_ref(c), *e)).collect(),
        }
    }

    /// `c * x^m * self`.
    pub fn mul_term(&self, c: &F, m: &ExponentVector) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(a, e)| (a.mul_ref(c), e.mul(m))).collect(),
        }
    }

    fn check_ring(&self, other: &Self) -> Result<(), AlgebraError> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(AlgebraError::RingMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_ring(other)?;
        Ok(self.merge(other, |c| c.clone()))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_ring(other)?;
        Ok(self.merge(other, |c| -c.clone()))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_ring(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(&self.ring));
        }
        if other.len() == 1 {
            let (c, m) = &other.terms[0];
            return Ok(self.mul_term(c, m));
        }
        if self.len() == 1 {
            let (c, m) = &self.terms[0];
            return Ok(other.mul_term(c, m));
        }
        let mut terms = Vec::with_capacity(self.len() * other.len());
        for (a, ea) in &self.terms {
            for (b, eb) in &other.terms {
                terms.push((a.mul_ref(b), ea.checked_mul(eb)?));
            }
        }
        Ok(Self::from_terms_unchecked(&self.ring, terms))
    }

    /// Sorted merge of `self` with `other` transformed termwise by `f`.
    fn merge(&self, other: &Self, f: impl Fn(&F) -> F) -> Self {
        let order = self.ring.order();
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (a, ea) = &self.terms[i];
            let (b, eb) = &other.terms[j];
            match order.compare(ea, eb) {
                Ordering::Greater => {
                    out.push((a.clone(), *ea));
                    i += 1;
                }
                Ordering::Less => {
                    out.push((f(b), *eb));
                    j += 1;
                }
                Ordering::Equal => {
                    let s = a.add_ref(&f(b));
                    if !s.is_zero() {
                        out.push((s, *ea));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.terms[i..].iter().cloned());
        out.extend(other.terms[j..].iter().map(|(b, e)| (f(b), *e)));
        Polynomial {
            ring: self.ring.clone(),
            terms: out,
        }
    }

    /// `self - c * x^m * g`, skipping the first `skip` terms of `self`
    /// (which the caller knows cancel or have been consumed).
    pub(crate) fn sub_scaled_tail(&self, skip: usize, c: &F, m: &ExponentVector, g: &Self, g_skip: usize) -> Self {
        let order = self.ring.order();
        let a_terms = &self.terms[skip..];
        let b_terms = &g.terms[g_skip..];
        let mut out = Vec::with_capacity(a_terms.len() + b_terms.len());
        let (mut i, mut j) = (0, 0);
        while i < a_terms.len() && j < b_terms.len() {
            let (a, ea) = &a_terms[i];
            let eb = b_terms[j].1.mul(m);
            match order.compare(ea, &eb) {
                Ordering::Greater => {
                    out.push((a.clone(), *ea));
                    i += 1;
                }
                Ordering::Less => {
                    out.push((-(b_terms[j].0.mul_ref(c)), eb));
                    j += 1;
                }
                Ordering::Equal => {
                    let s = a.sub_ref(&b_terms[j].0.mul_ref(c));
                    if !s.is_zero() {
                        out.push((s, eb));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a_terms[i..].iter().cloned());
        for (b, e) in &b_terms[j..] {
            out.push((-(b.mul_ref(c)), e.mul(m)));
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: out,
        }
    }

    /// Exact quotient `self / g`, or `None` if `g` does not divide `self`.
    pub fn exact_div(&self, g: &Self) -> Option<Self> {
        if g.is_zero() || !same_ring(&self.ring, &g.ring) {
            return None;
        }
        let (gc, gm) = (g.leading_coeff()?.clone(), *g.leading_monomial()?);
        let gci = gc.inv()?;
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some((c, m)) = rem.terms.first().cloned() {
            let q = m.div(&gm)?;
            let qc = c.mul_ref(&gci);
            rem = rem.sub_scaled_tail(1, &qc, &q, g, 1);
            quot.push((qc, q));
        }
        Some(Polynomial::from_sorted_terms(&self.ring, quot))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(&self.ring);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn evaluate(&self, point: &[F]) -> F {
        assert_eq!(point.len(), self.ring.nvars());
        let mut acc = F::zero();
        for (c, e) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e.as_slice()) {
                for _ in 0..k {
                    t = t.mul_ref(x);
                }
            }
            acc = acc.add_ref(&t);
        }
        acc
    }

    /// Embed into a ring with one extra leading variable, multiplied by
    /// `x_0^e0` there.
    pub(crate) fn lift_with(&self, ring: &Ring, e0: u32) -> Self {
        assert_eq!(ring.nvars(), self.ring.nvars() + 1);
        Self::from_terms_unchecked(ring, self.terms.iter().map(|(c, e)| (c.clone(), e.prepend(e0))).collect())
    }

    /// Drop the leading variable, assuming it does not occur.
    pub(crate) fn project_from(&self, ring: &Ring) -> Self {
        assert_eq!(ring.nvars() + 1, self.ring.nvars());
        Self::from_terms_unchecked(ring, self.terms.iter().map(|(c, e)| {
            debug_assert_eq!(e.get(0), 0);
            (c.clone(), e.drop_front(1))
        }).collect())
    }
}

impl<F: Field> PartialEq for Polynomial<F> {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl<F: Field> Eq for Polynomial<F> {}

impl<F: Field> Add for &Polynomial<F> {
    type Output = Polynomial<F>;
    fn add(self, rhs: Self) -> Polynomial<F> {
        self.try_add(rhs).expect("ring mismatch")
    }
}

impl<F: Field> Sub for &Polynomial<F> {
    type Output = Polynomial<F>;
    fn sub(self, rhs: Self) -> Polynomial<F> {
        self.try_sub(rhs).expect("ring mismatch")
    }
}

impl<F: Field> Mul for &Polynomial<F> {
    type Output = Polynomial<F>;
    fn mul(self, rhs: Self) -> Polynomial<F> {
        self.try_mul(rhs).expect("ring mismatch")
    }
}

impl<F: Field> Neg for &Polynomial<F> {
    type Output = Polynomial<F>;
    fn neg(self) -> Polynomial<F> {
        self.scale(&-F::one())
    }
}

/// `x^2*y` style text for an exponent vector.
pub fn monomial_string(names: &[String], e: &ExponentVector) -> String {
    let mut s = String::new();
    write_monomial(&mut s, names, e).expect("string write");
    s
}

pub(crate) fn write_monomial(f: &mut impl fmt::Write, names: &[String], e: &ExponentVector) -> fmt::Result {
    let mut first = true;
    for (name, &k) in names.iter().zip(e.as_slice()) {
        if k == 0 {
            continue;
        }
        if !first {
            f.write_char('*')?;
        }
        first = false;
        f.write_str(name)?;
        if k > 1 {
            write!(f, "^{k}")?;
        }
    }
    if first {
        f.write_char('1')?;
    }
    Ok(())
}

impl<F: Field> fmt::Display for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let names = self.ring.variables();
        for (i, (c, e)) in self.terms.iter().enumerate() {
            let neg = c.prints_negative();
            let abs = if neg { -c.clone() } else { c.clone() };
            match (i == 0, neg) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            if e.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write_monomial(f, names, e)?;
            } else {
                write!(f, "{abs}*")?;
                write_monomial(f, names, e)?;
            }
        }
        Ok(())
    }
}

impl<F: Field> fmt::Debug for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use crate::field::Rational;
    use crate::parse::parse_polynomial;
    use crate::ring::RingDescriptor;

    fn ring() -> Ring {
        RingDescriptor::new::<Rational, _>(&["x", "y"]).unwrap()
    }

    fn p(s: &str) -> Polynomial<Rational> {
        parse_polynomial(s, &ring()).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        assert_eq!(&p("x + y") * &p("x - y"), p("x^2 - y^2"));
    }

    #[test]
    fn identities_and_annihilation() {
        let f = p("3*x*y - 1/2*y^2 + 7");
        assert_eq!(&f + &Polynomial::zero(&ring()), f);
        assert!(f.scale(&Rational::zero()).is_zero());
        assert!((&f - &f).is_zero());
    }

    #[test]
    fn ring_mismatch_is_rejected() {
        let other = RingDescriptor::new::<Rational, _>(&["a", "b"]).unwrap();
        let g = Polynomial::<Rational>::variable(&other, 0);
        assert_eq!(p("x").try_add(&g), Err(AlgebraError::RingMismatch));
        assert_eq!(p("x").try_mul(&g), Err(AlgebraError::RingMismatch));
    }

    #[test]
    fn exact_division() {
        let f = p("x^3 - y^3");
        let g = p("x - y");
        assert_eq!(f.exact_div(&g), Some(p("x^2 + x*y + y^2")));
        assert_eq!(p("x^2 + 1").exact_div(&g), None);
    }

    #[test]
    fn display_form() {
        assert_eq!(p("-x^2 + 3*x*y - 2/4*y + 1").to_string(), "-x^2 + 3*x*y - 1/2*y + 1");
        assert_eq!(p("0").to_string(), "0");
    }
}
