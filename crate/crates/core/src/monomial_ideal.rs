//! Monomial ideals as antichains of exponent vectors.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{AlgebraError, Error, Result};
use crate::field::Field;
use crate::monomial::{ExponentVector, MonomialOrder};
use crate::poly::Polynomial;
use crate::ring::Ring;

/// Divisibility-minimal generators, deduplicated and sorted descending in grevlex.
pub fn minimalize(mut gens: Vec<ExponentVector>) -> Vec<ExponentVector> {
    gens.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.as_slice().cmp(b.as_slice())));
    gens.dedup();
    let mut kept: Vec<ExponentVector> = Vec::with_capacity(gens.len());
    for g in gens {
        // anything dividing g has degree <= deg g and was seen first
        if !kept.iter().any(|k| k.divides(&g)) {
            kept.push(g);
        }
    }
    kept.sort_by(|a, b| MonomialOrder::Grevlex.compare(b, a));
    kept
}

/// Smallest pure power of each variable among `gens`, if every variable has one.
fn pure_power_bounds(nvars: usize, gens: &[ExponentVector]) -> std::result::Result<Vec<u32>, usize> {
    let mut k = vec![u32::MAX; nvars];
    for g in gens {
        let support: Vec<usize> = (0..nvars).filter(|&i| g.get(i) > 0).collect();
        match support.as_slice() {
            [] => return Ok(vec![0; nvars]),
            [i] => k[*i] = k[*i].min(g.get(*i)),
            _ => {}
        }
    }
    match k.iter().position(|&e| e == u32::MAX) {
        Some(i) => Err(i),
        None => Ok(k),
    }
}

/// Number of monomials divisible by no element of `gens`.
///
/// The first `d-1` coordinates range over the pure-power box; for each such
/// prefix the admissible last exponents form an interval `[0, f(prefix))`,
/// and `f` satisfies `f(v) = min(own(v), f(v - e_i))`.
pub(crate) fn staircase_count(nvars: usize, gens: &[ExponentVector]) -> Result<u64> {
    let k = pure_power_bounds(nvars, gens).map_err(|variable| Error::NotArtinian { variable })?;
    if k.contains(&0) {
        return Ok(0);
    }
    let last = nvars - 1;
    if last == 0 {
        return Ok(k[0] as u64);
    }
    let dims: Vec<usize> = k[..last].iter().map(|&e| e as usize).collect();
    let size: usize = dims.iter().product();
    let mut f = vec![k[last]; size];
    let index = |v: &[u32]| -> usize {
        let mut idx = 0usize;
        for (i, &e) in v.iter().enumerate() {
            idx = idx * dims[i] + e as usize;
        }
        idx
    };
    for g in gens {
        let prefix = &g.as_slice()[..last];
        if prefix.iter().zip(&dims).all(|(&e, &n)| (e as usize) < n) {
            let i = index(prefix);
            f[i] = f[i].min(g.get(last));
        }
    }
    // row-major order visits v - e_i before v
    let mut strides = vec![1usize; last];
    for i in (0..last.saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * dims[i + 1];
    }
    let mut coords = vec![0usize; last];
    let mut total = 0u64;
    for idx in 0..size {
        let mut m = f[idx];
        for i in 0..last {
            if coords[i] > 0 {
                m = m.min(f[idx - strides[i]]);
            }
        }
        f[idx] = m;
        total += m as u64;
        for i in (0..last).rev() {
            coords[i] += 1;
            if coords[i] < dims[i] {
                break;
            }
            coords[i] = 0;
        }
    }
    Ok(total)
}

/// A monomial ideal, stored as its minimal generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MonomialIdeal {
    nvars: usize,
    gens: Vec<ExponentVector>,
}

impl MonomialIdeal {
    pub fn new(nvars: usize, gens: Vec<ExponentVector>) -> Result<Self, AlgebraError> {
        if let Some(g) = gens.iter().find(|g| g.len() != nvars) {
            return Err(AlgebraError::LengthMismatch(nvars, g.len()));
        }
        Ok(MonomialIdeal {
            nvars,
            gens: minimalize(gens),
        })
    }

    pub fn from_exponents(nvars: usize, exps: &[&[u32]]) -> Result<Self, AlgebraError> {
        let gens = exps.iter().map(|e| ExponentVector::new(e)).collect::<Result<Vec<_>, _>>()?;
        Self::new(nvars, gens)
    }

    pub fn unit(nvars: usize) -> Self {
        MonomialIdeal {
            nvars,
            gens: vec![ExponentVector::zero(nvars)],
        }
    }

    /// `(x_1, ..., x_d)^k`.
    pub fn maximal_power(nvars: usize, k: u32) -> Self {
        let mut gens = Vec::new();
        let mut cur = vec![0u32; nvars];
        fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<ExponentVector>) {
            if i + 1 == cur.len() {
                cur[i] = left;
                out.push(ExponentVector::from_slice(cur));
                return;
            }
            for e in (0..=left).rev() {
                cur[i] = e;
                rec(i + 1, left - e, cur, out);
            }
        }
        rec(0, k, &mut cur, &mut gens);
        MonomialIdeal {
            nvars,
            gens: minimalize(gens),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn generators(&self) -> &[ExponentVector] {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.gens.iter().any(|g| g.is_one())
    }

    pub fn contains(&self, v: &ExponentVector) -> bool {
        self.gens.iter().any(|g| g.divides(v))
    }

    /// `other ⊆ self`.
    pub fn contains_ideal(&self, other: &MonomialIdeal) -> bool {
        other.gens.iter().all(|g| self.contains(g))
    }

    pub fn sum(&self, other: &MonomialIdeal) -> MonomialIdeal {
        let mut gens = self.gens.clone();
        gens.extend_from_slice(&other.gens);
        MonomialIdeal {
            nvars: self.nvars,
            gens: minimalize(gens),
        }
    }

    pub fn product(&self, other: &MonomialIdeal) -> MonomialIdeal {
        let mut gens = Vec::with_capacity(self.gens.len() * other.gens.len());
        for a in &self.gens {
            for b in &other.gens {
                gens.push(a.mul(b));
            }
        }
        MonomialIdeal {
            nvars: self.nvars,
            gens: minimalize(gens),
        }
    }

    pub fn power(&self, n: u32) -> MonomialIdeal {
        let mut acc = MonomialIdeal::unit(self.nvars);
        for _ in 0..n {
            acc = acc.product(self);
        }
        acc
    }

    pub fn intersection(&self, other: &MonomialIdeal) -> MonomialIdeal {
        let mut gens = Vec::with_capacity(self.gens.len() * other.gens.len());
        for a in &self.gens {
            for b in &other.gens {
                gens.push(a.lcm(b));
            }
        }
        MonomialIdeal {
            nvars: self.nvars,
            gens: minimalize(gens),
        }
    }

    /// `(self : x^g)`.
    pub fn colon_monomial(&self, g: &ExponentVector) -> MonomialIdeal {
        MonomialIdeal {
            nvars: self.nvars,
            gens: minimalize(self.gens.iter().map(|a| a.saturating_div(g)).collect()),
        }
    }

    /// `(self : other)`; `other` must be nonzero.
    pub fn colon(&self, other: &MonomialIdeal) -> Result<MonomialIdeal> {
        let mut it = other.gens.iter();
        let first = it.next().ok_or(Error::ZeroColonDivisor)?;
        let mut acc = self.colon_monomial(first);
        for g in it {
            acc = acc.intersection(&self.colon_monomial(g));
        }
        Ok(acc)
    }

    /// Componentwise maximum of the generators.
    pub fn max_exponents(&self) -> Vec<u32> {
        let mut m = vec![0u32; self.nvars];
        for g in &self.gens {
            for (i, e) in g.as_slice().iter().enumerate() {
                m[i] = m[i].max(*e);
            }
        }
        m
    }

    /// Smallest `k_i` with `x_i^{k_i}` in the ideal, for every variable.
    pub fn pure_power_bounds(&self) -> Option<Vec<u32>> {
        pure_power_bounds(self.nvars, &self.gens).ok()
    }

    pub fn is_m_primary(&self) -> bool {
        self.pure_power_bounds().is_some()
    }

    /// `dim_k A/I`, the number of monomials outside the ideal.
    pub fn staircase_length(&self) -> Result<u64> {
        if self.gens.is_empty() {
            return Err(Error::NotMPrimary);
        }
        staircase_count(self.nvars, &self.gens).map_err(|e| match e {
            Error::NotArtinian { .. } => Error::NotMPrimary,
            other => other,
        })
    }

    /// The monomials outside the ideal, in grevlex-ascending order.
    pub fn standard_monomials(&self) -> Result<Vec<ExponentVector>> {
        let k = self.pure_power_bounds().ok_or(Error::NotMPrimary)?;
        let mut out = Vec::new();
        for_each_in_box(&k.iter().map(|&e| e.saturating_sub(1)).collect::<Vec<_>>(), |v| {
            if !self.contains(v) {
                out.push(*v);
            }
        });
        out.sort_by(|a, b| MonomialOrder::Grevlex.compare(a, b));
        Ok(out)
    }

    pub fn to_polynomials<F: Field>(&self, ring: &Ring) -> Vec<Polynomial<F>> {
        self.gens.iter().map(|g| Polynomial::monomial(ring, *g)).collect()
    }

    /// Membership table over the box spanned by the generators.
    pub fn grid(&self) -> StaircaseGrid {
        StaircaseGrid::new(self)
    }

    /// Text form with the given variable names, e.g. `(x^2, x*y, y^2)`.
    pub fn display_with(&self, names: &[String]) -> String {
        let parts: Vec<String> = self
            .gens
            .iter()
            .map(|g| crate::poly::monomial_string(names, g))
            .collect();
        format!("({})", parts.join(", "))
    }
}

impl PartialOrd for MonomialIdeal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (other.contains_ideal(self), self.contains_ideal(other)) {
            (true, true) => Some(Ordering::Equal),
            (true, false) => Some(Ordering::Less),
            (false, true) => Some(Ordering::Greater),
            (false, false) => None,
        }
    }
}

/// Visit every vector `v` with `0 <= v <= upper` componentwise, in row-major order.
pub fn for_each_in_box(upper: &[u32], mut f: impl FnMut(&ExponentVector)) {
    let d = upper.len();
    let mut v = ExponentVector::zero(d);
    loop {
        f(&v);
        let mut i = d;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if v.get(i) < upper[i] {
                v.set(i, v.get(i) + 1);
                break;
            }
            v.set(i, 0);
        }
    }
}

/// Dense membership bitmap for a monomial ideal.
///
/// Coordinates beyond the generators' maximum exponent do not affect
/// membership, so queries are clamped into the box.
#[derive(Debug, Clone)]
pub struct StaircaseGrid {
    upper: Vec<u32>,
    strides: Vec<usize>,
    bits: Vec<bool>,
}

impl StaircaseGrid {
    pub fn new(ideal: &MonomialIdeal) -> Self {
        let upper = ideal.max_exponents();
        let d = upper.len();
        let mut strides = vec![1usize; d];
        for i in (0..d.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * (upper[i + 1] as usize + 1);
        }
        let size = if d == 0 { 1 } else { strides[0] * (upper[0] as usize + 1) };
        let mut bits = vec![false; size];
        for g in ideal.generators() {
            let idx: usize = g.as_slice().iter().zip(&strides).map(|(&e, &s)| e as usize * s).sum();
            bits[idx] = true;
        }
        let mut idx = 0usize;
        for_each_in_box(&upper, |v| {
            if !bits[idx] {
                bits[idx] = (0..d).any(|i| v.get(i) > 0 && bits[idx - strides[i]]);
            }
            idx += 1;
        });
        StaircaseGrid { upper, strides, bits }
    }

    pub fn contains(&self, v: &ExponentVector) -> bool {
        let idx: usize = v
            .as_slice()
            .iter()
            .zip(&self.upper)
            .zip(&self.strides)
            .map(|((&e, &u), &s)| e.min(u) as usize * s)
            .sum();
        self.bits[idx]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ideal(d: usize, exps: &[&[u32]]) -> MonomialIdeal {
        MonomialIdeal::from_exponents(d, exps).unwrap()
    }

    #[test]
    fn minimal_generator_examples() {
        assert_eq!(ideal(2, &[&[2, 0], &[3, 0], &[0, 1]]), ideal(2, &[&[2, 0], &[0, 1]]));
        assert_eq!(ideal(2, &[&[1, 1]]).generators().len(), 1);
        let m = MonomialIdeal::maximal_power(2, 1);
        let mut both = m.power(2).generators().to_vec();
        both.extend_from_slice(m.power(3).generators());
        assert_eq!(MonomialIdeal::new(2, both).unwrap(), m.power(2));
    }

    #[test]
    fn staircase_examples() {
        for k in 1..8u32 {
            let len = MonomialIdeal::maximal_power(2, k).staircase_length().unwrap();
            assert_eq!(len, (k * (k + 1) / 2) as u64);
        }
        assert_eq!(ideal(2, &[&[2, 0], &[0, 3]]).staircase_length().unwrap(), 6);
        assert_eq!(MonomialIdeal::maximal_power(3, 2).staircase_length().unwrap(), 4);
        assert_eq!(MonomialIdeal::maximal_power(3, 4).staircase_length().unwrap(), 20);
        assert!(matches!(
            ideal(2, &[&[2, 0], &[1, 1]]).staircase_length(),
            Err(Error::NotMPrimary)
        ));
        assert_eq!(MonomialIdeal::unit(3).staircase_length().unwrap(), 0);
    }

    #[test]
    fn colon_and_intersection() {
        let i = ideal(2, &[&[2, 0], &[1, 1]]);
        assert_eq!(i.colon_monomial(&ExponentVector::from_slice(&[1, 0])), ideal(2, &[&[1, 0], &[0, 1]]));
        let j = ideal(2, &[&[4, 0], &[3, 1], &[1, 3], &[0, 4]]);
        let m = MonomialIdeal::maximal_power(2, 1);
        assert_eq!(j.colon(&m).unwrap(), ideal(2, &[&[3, 0], &[2, 2], &[0, 3]]));
        assert!(matches!(j.colon(&ideal(2, &[])), Err(Error::ZeroColonDivisor)));
        assert_eq!(ideal(2, &[&[1, 0]]).intersection(&ideal(2, &[&[0, 1]])), ideal(2, &[&[1, 1]]));
    }

    #[test]
    fn grid_matches_divisibility() {
        let i = ideal(3, &[&[3, 0, 0], &[0, 2, 0], &[1, 0, 1], &[0, 0, 4]]);
        let g = i.grid();
        for_each_in_box(&[5, 5, 5], |v| assert_eq!(g.contains(v), i.contains(v), "{v:?}"));
    }
}
