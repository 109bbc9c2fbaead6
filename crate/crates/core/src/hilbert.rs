//! Hilbert functions, h-vectors and Hilbert coefficients of filtrations.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::filtration::Filtration;
use crate::field::Rational;

/// `H(n) = ℓ(A/a_{n+1})` on `0..=N` together with its certified h-vector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertData {
    #[serde(rename = "H")]
    pub hilbert: Vec<u64>,
    pub h: Vec<i64>,
    #[serde(with = "rational_strings")]
    pub e: Vec<Rational>,
    pub postulation: u32,
    pub window: u32,
}

/// Exact rationals as `"p/q"` strings (`"p"` for integers).
pub mod rational_strings {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    use crate::field::Rational;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|q| q.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter().map(|s| s.parse::<Rational>().map_err(D::Error::custom)).collect()
    }
}

impl HilbertData {
    /// `e_i` as an integer; every coefficient produced here is integral.
    pub fn e_int(&self, i: usize) -> i64 {
        match self.e.get(i) {
            Some(q) => {
                assert!(q.is_integer());
                i64::try_from(q.to_integer()).expect("small coefficient")
            }
            None => 0,
        }
    }

    pub fn e_ints(&self) -> Vec<i64> {
        (0..self.e.len()).map(|i| self.e_int(i)).collect()
    }

    /// `Σ_j h_j C(n - j + d, d)`.
    pub fn predict(&self, n: u64, d: usize) -> i128 {
        predict(&self.h, n as i64, d)
    }
}

/// Binomial coefficient `C(n, k)` for `n >= 0`, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r
}

/// The polynomial `(x)(x-1)...(x-k+1)/k!` evaluated at an integer.
fn binomial_poly(x: i64, k: u64) -> i128 {
    let mut num: i128 = 1;
    for i in 0..k as i64 {
        num *= (x - i) as i128;
    }
    let mut fact: i128 = 1;
    for i in 1..=k as i128 {
        fact *= i;
    }
    num / fact
}

fn predict(h: &[i64], n: i64, d: usize) -> i128 {
    h.iter()
        .enumerate()
        .filter(|&(j, _)| n - j as i64 >= 0)
        .map(|(j, &hj)| hj as i128 * binomial((n - j as i64) as u64 + d as u64, d as u64) as i128)
        .sum()
}

/// The Hilbert polynomial from the h-vector, valid for every integer `n`.
fn hilbert_polynomial(h: &[i64], n: i64, d: usize) -> i128 {
    h.iter()
        .enumerate()
        .map(|(j, &hj)| hj as i128 * binomial_poly(n - j as i64 + d as i64, d as u64))
        .sum()
}

/// The same polynomial through `Σ (-1)^i e_i C(n + d - i, d - i)`.
fn hilbert_polynomial_from_e(e: &[i64], n: i64, d: usize) -> i128 {
    (0..=d)
        .map(|i| {
            let sign = if i % 2 == 0 { 1 } else { -1 };
            sign * e.get(i).copied().unwrap_or(0) as i128 * binomial_poly(n + (d - i) as i64, (d - i) as u64)
        })
        .sum()
}

/// Coefficients of `(1 - t)^{d+1} Σ H(n) t^n` that are determined by `table`.
fn series_numerator(table: &[u64], d: usize) -> Vec<i128> {
    (0..table.len())
        .map(|k| {
            (0..=k.min(d + 1))
                .map(|j| {
                    let c = binomial((d + 1) as u64, j as u64) as i128;
                    let sign = if j % 2 == 0 { 1 } else { -1 };
                    sign * c * table[k - j] as i128
                })
                .sum()
        })
        .collect()
}

/// The h-vector if the last `w` determined coefficients vanish.
pub fn extract_h_vector(table: &[u64], d: usize, w: usize) -> Option<Vec<i64>> {
    let c = series_numerator(table, d);
    let s = c.iter().rposition(|x| *x != 0)?;
    if c.len() - 1 - s < w {
        return None;
    }
    Some(c[..=s].iter().map(|&x| i64::try_from(x).expect("h-vector entry")).collect())
}

/// `e_i = Σ_j C(j, i) h_j` for `i = 0..=up_to`.
pub fn coefficients_from_h(h: &[i64], up_to: usize) -> Vec<Rational> {
    (0..=up_to)
        .map(|i| {
            let s: i128 = h
                .iter()
                .enumerate()
                .map(|(j, &hj)| binomial(j as u64, i as u64) as i128 * hj as i128)
                .sum();
            Rational::from_integer(BigInt::from(s))
        })
        .collect()
}

/// How far to tabulate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableSize {
    Fixed(u32),
    Auto,
}

/// Table, h-vector and coefficients `e_0..=e_up_to` of a filtration.
///
/// The h-vector is accepted once `w` trailing series coefficients vanish and
/// it predicts one further, freshly computed value of `H`.
pub fn hilbert_data<F: Field>(f: &mut Filtration<F>, size: TableSize, up_to: usize) -> Result<HilbertData> {
    let d = f.nvars();
    let w = f.config().hilbert_window as usize;
    let (start, stop) = match size {
        TableSize::Fixed(n) => (n, n),
        TableSize::Auto => ((d + 1 + w) as u32, f.config().hilbert_n_max),
    };
    let mut table: Vec<u64> = Vec::new();
    for n in 0..=start {
        table.push(f.length(n as i64 + 1)?);
    }
    let mut n = start;
    loop {
        let fresh = f.length(n as i64 + 2)?;
        if let Some(h) = extract_h_vector(&table, d, w) {
            if predict(&h, n as i64 + 1, d) == fresh as i128 {
                return finish(table, h, d, up_to, w as u32);
            }
        }
        table.push(fresh);
        n += 1;
        if n > stop {
            return Err(Error::StabilizationNotReached { n_max: stop as usize });
        }
    }
}

fn finish(table: Vec<u64>, h: Vec<i64>, d: usize, up_to: usize, w: u32) -> Result<HilbertData> {
    let e = coefficients_from_h(&h, up_to.max(d));
    let e_int: Vec<i64> = e.iter().map(|q| i64::try_from(q.to_integer()).expect("small")).collect();
    let n_top = table.len() as i64 - 1;
    let mut postulation = table.len() as u32;
    for n0 in (0..=n_top).rev() {
        if hilbert_polynomial(&h, n0, d) == table[n0 as usize] as i128 {
            postulation = n0 as u32;
        } else {
            break;
        }
    }
    // the e-basis form must reproduce the table on the postulation range
    for n in postulation as i64..=n_top {
        if hilbert_polynomial_from_e(&e_int, n, d) != table[n as usize] as i128 {
            return Err(Error::Precondition(format!("binomial fit disagrees with H({n})")));
        }
    }
    if h.iter().sum::<i64>() <= 0 || e.first().is_none_or(|e0| e0.is_zero()) {
        return Err(Error::Precondition("multiplicity must be positive".into()));
    }
    Ok(HilbertData {
        hilbert: table,
        h,
        e: e.into_iter().take(up_to + 1).collect(),
        postulation,
        window: w,
    })
}

pub fn hilbert_function_table<F: Field>(f: &mut Filtration<F>, size: TableSize) -> Result<HilbertData> {
    let d = f.nvars();
    hilbert_data(f, size, d)
}

pub fn h_vector<F: Field>(f: &mut Filtration<F>) -> Result<Vec<i64>> {
    Ok(hilbert_data(f, TableSize::Auto, f.nvars())?.h)
}

pub fn hilbert_coefficients<F: Field>(f: &mut Filtration<F>, up_to: usize) -> Result<HilbertData> {
    hilbert_data(f, TableSize::Auto, up_to)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn h_vector_of_a_known_table() {
        // 2n^2 + 5n + 3
        let table: Vec<u64> = (0..8).map(|n| 2 * n * n + 5 * n + 3).collect();
        let h = extract_h_vector(&table, 2, 3).unwrap();
        assert_eq!(h, vec![3, 1]);
        let e = coefficients_from_h(&h, 3);
        assert_eq!(e, vec![4, 1, 0, 0].into_iter().map(|x: i64| Rational::from_integer(x.into())).collect::<Vec<_>>());
        assert_eq!(predict(&h, 8, 2), 2 * 64 + 40 + 3);
    }

    #[test]
    fn short_tables_are_not_certified() {
        let table: Vec<u64> = (0..3).map(|n| 2 * n * n + 5 * n + 3).collect();
        assert!(extract_h_vector(&table, 2, 3).is_none());
    }

    #[test]
    fn serialization_uses_fraction_strings() {
        let data = HilbertData {
            hilbert: vec![1],
            h: vec![1],
            e: vec![Rational::new(1.into(), 2.into()), Rational::from_integer(3.into())],
            postulation: 0,
            window: 3,
        };
        let s = serde_json::to_string(&data).unwrap();
        assert_eq!(s, r#"{"H":[1],"h":[1],"e":["1/2","3"],"postulation":0,"window":3}"#);
        assert_eq!(serde_json::from_str::<HilbertData>(&s).unwrap(), data);
    }
}
