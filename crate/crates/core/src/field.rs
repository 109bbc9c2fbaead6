//! Exact coefficient fields: the rationals and prime fields `Z/p`.

use std::fmt::{self, Debug, Display};
use std::hash::Hash;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::AlgebraError;
use crate::linalg::{inv_mod, mul_mod, residue_bigint, MERSENNE_61};

/// The largest prime below `2^31`; default modulus for [`Fp`].
pub const DEFAULT_PRIME: u64 = 2_147_483_647;

static PRIME: OnceLock<u64> = OnceLock::new();

/// Which coefficient field a ring is defined over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Rational,
    Prime(u64),
}

impl Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldKind::Rational => write!(f, "Q"),
            FieldKind::Prime(p) => write!(f, "fp:{p}"),
        }
    }
}

impl FromStr for FieldKind {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("q") {
            return Ok(FieldKind::Rational);
        }
        let lower = t.to_ascii_lowercase();
        if lower == "fp" {
            return Ok(FieldKind::Prime(DEFAULT_PRIME));
        }
        if let Some(rest) = lower.strip_prefix("fp:") {
            let p: u64 = rest
                .parse()
                .map_err(|_| AlgebraError::InvalidField(s.to_string()))?;
            if !is_prime(p) || p >= 1 << 32 {
                return Err(AlgebraError::InvalidField(format!(
                    "{p} is not a prime below 2^32"
                )));
            }
            return Ok(FieldKind::Prime(p));
        }
        Err(AlgebraError::InvalidField(s.to_string()))
    }
}

impl Serialize for FieldKind {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FieldKind {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An exact field. Every implementation must be free of rounding.
pub trait Field:
    Clone
    + Debug
    + Display
    + PartialEq
    + Eq
    + Hash
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Send
    + Sync
    + 'static
{
    fn kind() -> FieldKind;

    fn from_i64(v: i64) -> Self;

    fn from_bigint(v: &BigInt) -> Self;

    /// `num/den`, or `None` when the denominator vanishes in the field.
    fn from_fraction(num: &BigInt, den: &BigInt) -> Option<Self>;

    fn inv(&self) -> Option<Self>;

    fn add_ref(&self, rhs: &Self) -> Self;

    fn sub_ref(&self, rhs: &Self) -> Self;

    fn mul_ref(&self, rhs: &Self) -> Self;

    /// Whether the printed form of this value carries a leading minus sign.
    fn prints_negative(&self) -> bool;

    fn div_ref(&self, rhs: &Self) -> Self {
        self.mul_ref(&rhs.inv().expect("division by zero"))
    }

    /// Image in `Z/p` for the prime returned by [`Field::rank_prime`];
    /// `None` when a denominator vanishes modulo `p`.
    fn residue(&self, p: u64) -> Option<u64>;

    /// The prime used for linear algebra over this field, and whether ranks
    /// modulo it equal ranks over the field (otherwise they are lower bounds).
    fn rank_prime() -> (u64, bool);

    /// The value as a rational number, for fields of characteristic zero.
    fn to_rational(&self) -> Option<BigRational>;
}

pub type Rational = BigRational;

impl Field for BigRational {
    fn kind() -> FieldKind {
        FieldKind::Rational
    }

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_bigint(v: &BigInt) -> Self {
        BigRational::from_integer(v.clone())
    }

    fn from_fraction(num: &BigInt, den: &BigInt) -> Option<Self> {
        if den.is_zero() {
            None
        } else {
            Some(BigRational::new(num.clone(), den.clone()))
        }
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn prints_negative(&self) -> bool {
        self.is_negative()
    }

    fn div_ref(&self, rhs: &Self) -> Self {
        self / rhs
    }

    fn residue(&self, p: u64) -> Option<u64> {
        let num = residue_bigint(self.numer(), p);
        inv_mod(residue_bigint(self.denom(), p), p).map(|d| mul_mod(num, d, p))
    }

    fn rank_prime() -> (u64, bool) {
        (MERSENNE_61, false)
    }

    fn to_rational(&self) -> Option<BigRational> {
        Some(self.clone())
    }
}

/// Configure the process-wide modulus for [`Fp`]. May be called once; later
/// calls succeed only when they repeat the configured prime.
pub fn set_prime_modulus(p: u64) -> Result<(), AlgebraError> {
    if !is_prime(p) || p >= 1 << 32 {
        return Err(AlgebraError::InvalidField(format!(
            "{p} is not a prime below 2^32"
        )));
    }
    let current = *PRIME.get_or_init(|| p);
    if current == p {
        Ok(())
    } else {
        Err(AlgebraError::InvalidField(format!(
            "prime modulus already fixed to {current}"
        )))
    }
}

/// The modulus used by [`Fp`] arithmetic in this process.
pub fn prime_modulus() -> u64 {
    *PRIME.get_or_init(|| DEFAULT_PRIME)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Element of `Z/p` for the process-wide prime, stored as its representative
/// in `0..p`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Fp(u64);

impl Fp {
    pub fn new(v: u64) -> Self {
        Fp(v % prime_modulus())
    }

    pub fn value(self) -> u64 {
        self.0
    }

    fn pow(self, mut e: u64) -> Self {
        let p = prime_modulus();
        let mut base = self.0;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        Fp(acc)
    }
}

impl Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = prime_modulus();
        if self.0 > p / 2 {
            write!(f, "-{}", p - self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl Zero for Fp {
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl One for Fp {
    fn one() -> Self {
        Fp(1)
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        let p = prime_modulus();
        let s = self.0 + rhs.0;
        Fp(if s >= p { s - p } else { s })
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, rhs: Fp) -> Fp {
        let p = prime_modulus();
        Fp(if self.0 >= rhs.0 {
            self.0 - rhs.0
        } else {
            self.0 + p - rhs.0
        })
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        Fp(self.0 * rhs.0 % prime_modulus())
    }
}

impl Div for Fp {
    type Output = Fp;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Fp) -> Fp {
        self * rhs.inv().expect("division by zero in Z/p")
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        if self.0 == 0 {
            self
        } else {
            Fp(prime_modulus() - self.0)
        }
    }
}

impl Field for Fp {
    fn kind() -> FieldKind {
        FieldKind::Prime(prime_modulus())
    }

    fn from_i64(v: i64) -> Self {
        let p = prime_modulus() as i128;
        Fp((v as i128).rem_euclid(p) as u64)
    }

    fn from_bigint(v: &BigInt) -> Self {
        let p = BigInt::from(prime_modulus());
        let r = v.mod_floor(&p);
        Fp(r.to_u64().expect("residue fits in u64"))
    }

    fn from_fraction(num: &BigInt, den: &BigInt) -> Option<Self> {
        let d = Fp::from_bigint(den);
        d.inv().map(|di| Fp::from_bigint(num) * di)
    }

    fn inv(&self) -> Option<Self> {
        if self.0 == 0 {
            None
        } else {
            Some(self.pow(prime_modulus() - 2))
        }
    }

    fn add_ref(&self, rhs: &Self) -> Self {
        *self + *rhs
    }

    fn sub_ref(&self, rhs: &Self) -> Self {
        *self - *rhs
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        *self * *rhs
    }

    fn residue(&self, p: u64) -> Option<u64> {
        assert_eq!(p, prime_modulus(), "Fp elements only reduce modulo their own prime");
        Some(self.0)
    }

    fn rank_prime() -> (u64, bool) {
        (prime_modulus(), true)
    }

    fn to_rational(&self) -> Option<BigRational> {
        None
    }

    fn prints_negative(&self) -> bool {
        self.0 > prime_modulus() / 2
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_prime_is_prime() {
        assert!(is_prime(DEFAULT_PRIME));
        // 2^31 - 67 = 89 * 691 * 34919.
        assert!(!is_prime((1 << 31) - 67));
    }

    #[test]
    fn rationals_are_lowest_terms() {
        let q = Rational::from_fraction(&BigInt::from(2), &BigInt::from(-4)).unwrap();
        assert_eq!(q.to_string(), "-1/2");
        assert!(Rational::from_fraction(&BigInt::from(1), &BigInt::from(0)).is_none());
    }

    #[test]
    fn fp_inverse_and_sign() {
        let a = Fp::from_i64(-3);
        assert!(a.prints_negative());
        assert_eq!(a.to_string(), "-3");
        assert_eq!(a * a.inv().unwrap(), Fp::one());
        assert!(Fp::zero().inv().is_none());
        let half = Fp::from_fraction(&BigInt::from(1), &BigInt::from(2)).unwrap();
        assert_eq!(half + half, Fp::one());
    }

    #[test]
    fn field_kind_round_trip() {
        for s in ["Q", "fp:2147483647", "fp:101"] {
            let k: FieldKind = s.parse().unwrap();
            assert_eq!(k.to_string(), s);
        }
        assert!("fp:100".parse::<FieldKind>().is_err());
        assert!("R".parse::<FieldKind>().is_err());
    }
}
