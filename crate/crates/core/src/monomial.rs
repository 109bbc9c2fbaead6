//! Dense exponent vectors and monomial orders.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::AlgebraError;

/// Upper bound on the number of ring variables, including the auxiliary
/// elimination variable used by intersections.
pub const MAX_VARS: usize = 8;

/// Default cap on a single exponent.
pub const DEFAULT_EXPONENT_CAP: u32 = (1 << 31) - 1;

/// Exponents of a monomial `x_1^e_1 ... x_d^e_d`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct ExponentVector {
    exps: [u32; MAX_VARS],
    len: u8,
}

impl ExponentVector {
    pub fn new(exps: &[u32]) -> Result<Self, AlgebraError> {
        if exps.len() > MAX_VARS {
            return Err(AlgebraError::InvalidRing(format!(
                "at most {MAX_VARS} variables are supported"
            )));
        }
        if let Some(&e) = exps.iter().find(|&&e| e > DEFAULT_EXPONENT_CAP) {
            return Err(AlgebraError::ExponentOverflow {
                value: e as u64,
                cap: DEFAULT_EXPONENT_CAP as u64,
            });
        }
        let mut v = Self::zero(exps.len());
        v.exps[..exps.len()].copy_from_slice(exps);
        Ok(v)
    }

    /// Panics on more than [`MAX_VARS`] entries.
    pub fn from_slice(exps: &[u32]) -> Self {
        Self::new(exps).expect("valid exponent vector")
    }

    pub fn zero(len: usize) -> Self {
        assert!(len <= MAX_VARS, "at most {MAX_VARS} variables");
        ExponentVector {
            exps: [0; MAX_VARS],
            len: len as u8,
        }
    }

    /// `x_var^e`.
    pub fn pure_power(len: usize, var: usize, e: u32) -> Self {
        let mut v = Self::zero(len);
        v.exps[var] = e;
        v
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len as usize
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn as_slice(&self) -> &[u32] {
        &self.exps[..self.len as usize]
    }

    #[inline]
    pub fn get(&self, i: usize) -> u32 {
        self.exps[i]
    }

    pub fn set(&mut self, i: usize, e: u32) {
        assert!(i < self.len());
        self.exps[i] = e;
    }

    #[inline]
    pub fn degree(&self) -> u64 {
        self.as_slice().iter().map(|&e| e as u64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.as_slice().iter().all(|&e| e == 0)
    }

    /// `self | other`.
    #[inline]
    pub fn divides(&self, other: &Self) -> bool {
        self.as_slice()
            .iter()
            .zip(other.as_slice())
            .all(|(a, b)| a <= b)
    }

    pub fn is_coprime(&self, other: &Self) -> bool {
        self.as_slice()
            .iter()
            .zip(other.as_slice())
            .all(|(&a, &b)| a == 0 || b == 0)
    }

    pub fn lcm(&self, other: &Self) -> Self {
        let mut r = *self;
        for i in 0..self.len() {
            r.exps[i] = self.exps[i].max(other.exps[i]);
        }
        r
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let mut r = *self;
        for i in 0..self.len() {
            r.exps[i] = self.exps[i].min(other.exps[i]);
        }
        r
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        let mut r = *self;
        for i in 0..self.len() {
            let s = self.exps[i] as u64 + other.exps[i] as u64;
            if s > DEFAULT_EXPONENT_CAP as u64 {
                return Err(AlgebraError::ExponentOverflow {
                    value: s,
                    cap: DEFAULT_EXPONENT_CAP as u64,
                });
            }
            r.exps[i] = s as u32;
        }
        Ok(r)
    }

    /// Product of monomials. Panics on exponent overflow.
    #[inline]
    pub fn mul(&self, other: &Self) -> Self {
        self.checked_mul(other).expect("exponent overflow")
    }

    /// `self / other`, or `None` when `other` does not divide `self`.
    #[inline]
    pub fn div(&self, other: &Self) -> Option<Self> {
        let mut r = *self;
        for i in 0..self.len() {
            r.exps[i] = self.exps[i].checked_sub(other.exps[i])?;
        }
        Some(r)
    }

    /// Componentwise `max(self - other, 0)`: the generator of `(x^self : x^other)`.
    pub fn saturating_div(&self, other: &Self) -> Self {
        let mut r = *self;
        for i in 0..self.len() {
            r.exps[i] = self.exps[i].saturating_sub(other.exps[i]);
        }
        r
    }

    /// Drop the first `k` coordinates.
    pub fn drop_front(&self, k: usize) -> Self {
        Self::from_slice(&self.as_slice()[k..])
    }

    /// Prepend one coordinate.
    pub fn prepend(&self, e: u32) -> Self {
        let mut v = Self::zero(self.len() + 1);
        v.exps[0] = e;
        v.exps[1..=self.len()].copy_from_slice(self.as_slice());
        v
    }
}

impl fmt::Debug for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.as_slice())
    }
}

impl Serialize for ExponentVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.as_slice().serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExponentVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<u32>::deserialize(d)?;
        ExponentVector::new(&v).map_err(serde::de::Error::custom)
    }
}

/// Term order on exponent vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MonomialOrder {
    Grevlex,
    Lex,
    /// The first `split` variables are compared lexicographically and
    /// dominate; ties are broken by grevlex on the remaining variables.
    Block { split: usize },
}

impl MonomialOrder {
    /// Compare two exponent vectors of equal length.
    #[inline]
    pub fn compare(&self, a: &ExponentVector, b: &ExponentVector) -> Ordering {
        match *self {
            MonomialOrder::Grevlex => grevlex(a.as_slice(), b.as_slice()),
            MonomialOrder::Lex => a.as_slice().cmp(b.as_slice()),
            MonomialOrder::Block { split } => {
                let (a0, a1) = a.as_slice().split_at(split);
                let (b0, b1) = b.as_slice().split_at(split);
                a0.cmp(b0).then_with(|| grevlex(a1, b1))
            }
        }
    }
}

#[inline]
fn grevlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    match da.cmp(&db) {
        Ordering::Equal => {}
        o => return o,
    }
    for i in (0..a.len()).rev() {
        match a[i].cmp(&b[i]) {
            Ordering::Equal => continue,
            // smaller exponent in the last differing variable wins
            o => return o.reverse(),
        }
    }
    Ordering::Equal
}

/// Checked comparison that rejects vectors of different lengths.
pub fn monomial_compare(
    a: &ExponentVector,
    b: &ExponentVector,
    order: MonomialOrder,
) -> Result<Ordering, AlgebraError> {
    if a.len() != b.len() {
        return Err(AlgebraError::LengthMismatch(a.len(), b.len()));
    }
    Ok(order.compare(a, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(e: &[u32]) -> ExponentVector {
        ExponentVector::from_slice(e)
    }

    #[test]
    fn order_examples() {
        let g = MonomialOrder::Grevlex;
        assert_eq!(monomial_compare(&ev(&[2, 0]), &ev(&[1, 1]), g).unwrap(), Ordering::Greater);
        assert_eq!(
            monomial_compare(&ev(&[1, 5]), &ev(&[2, 0]), MonomialOrder::Lex).unwrap(),
            Ordering::Less
        );
        for o in [g, MonomialOrder::Lex, MonomialOrder::Block { split: 1 }] {
            assert_eq!(monomial_compare(&ev(&[3, 3]), &ev(&[3, 3]), o).unwrap(), Ordering::Equal);
        }
        assert!(monomial_compare(&ev(&[1]), &ev(&[1, 0]), g).is_err());
    }

    #[test]
    fn grevlex_breaks_ties_on_last_variable() {
        let g = MonomialOrder::Grevlex;
        // x*z < y^2 in grevlex with x > y > z
        assert_eq!(g.compare(&ev(&[1, 0, 1]), &ev(&[0, 2, 0])), Ordering::Less);
        assert_eq!(g.compare(&ev(&[0, 0, 2]), &ev(&[1, 1, 0])), Ordering::Less);
    }

    #[test]
    fn block_order_eliminates_first_block() {
        let b = MonomialOrder::Block { split: 1 };
        assert_eq!(b.compare(&ev(&[1, 0, 0]), &ev(&[0, 9, 9])), Ordering::Greater);
        assert_eq!(b.compare(&ev(&[0, 2, 0]), &ev(&[0, 1, 1])), Ordering::Greater);
    }

    #[test]
    fn exponent_overflow_is_an_error() {
        let big = ev(&[DEFAULT_EXPONENT_CAP]);
        assert!(big.checked_mul(&ev(&[1])).is_err());
        assert!(ExponentVector::new(&[u32::MAX]).is_err());
    }

    #[test]
    fn divisibility_helpers() {
        let a = ev(&[2, 1]);
        let b = ev(&[3, 1]);
        assert!(a.divides(&b));
        assert_eq!(b.div(&a), Some(ev(&[1, 0])));
        assert_eq!(a.div(&b), None);
        assert_eq!(a.saturating_div(&b), ev(&[0, 0]));
        assert_eq!(a.lcm(&ev(&[0, 4])), ev(&[2, 4]));
    }
}
