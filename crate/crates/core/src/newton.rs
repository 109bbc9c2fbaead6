//! Newton polyhedra and integral closures of monomial ideals.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{AlgebraError, Error, Result};
use crate::field::Rational;
use crate::lp;
use crate::monomial::ExponentVector;
use crate::monomial_ideal::{for_each_in_box, MonomialIdeal};

/// A supporting inequality `normal · v >= rhs` with primitive integer normal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Facet {
    pub normal: Vec<i64>,
    pub rhs: i64,
}

impl Facet {
    fn value(&self, v: &ExponentVector) -> i64 {
        self.normal.iter().zip(v.as_slice()).map(|(w, &e)| w * e as i64).sum()
    }
}

/// `conv(exponents) + R_{>=0}^d`, stored by its facets with positive right-hand side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonPolyhedron {
    nvars: usize,
    facets: Vec<Facet>,
}

fn det(mut m: Vec<Vec<i128>>) -> i128 {
    // Bareiss fraction-free elimination
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&i| m[i][k] != 0) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

/// A vector orthogonal to the `d-1` rows of `dirs`, or `None` if they are dependent.
fn normal_vector(dirs: &[Vec<i64>], d: usize) -> Option<Vec<i64>> {
    let mut w = Vec::with_capacity(d);
    for col in 0..d {
        let minor: Vec<Vec<i128>> = dirs
            .iter()
            .map(|r| (0..d).filter(|&c| c != col).map(|c| r[c] as i128).collect())
            .collect();
        let v = det(minor);
        w.push(if col % 2 == 0 { v } else { -v });
    }
    if w.iter().all(|&x| x == 0) {
        return None;
    }
    let g = w.iter().fold(0i128, |g, &x| g.gcd(&x));
    Some(w.into_iter().map(|x| (x / g) as i64).collect())
}

impl NewtonPolyhedron {
    pub fn new(ideal: &MonomialIdeal) -> Self {
        let d = ideal.nvars();
        let points: Vec<Vec<i64>> = ideal
            .generators()
            .iter()
            .map(|g| g.as_slice().iter().map(|&e| e as i64).collect())
            .collect();
        let mut facets: Vec<Facet> = Vec::new();
        let total = points.len() + d;
        // element k < points.len() is a point, otherwise the ray e_{k - points.len()}
        let mut chosen: Vec<usize> = Vec::with_capacity(d);
        fn visit(
            start: usize,
            total: usize,
            d: usize,
            chosen: &mut Vec<usize>,
            points: &[Vec<i64>],
            facets: &mut Vec<Facet>,
        ) {
            if chosen.len() == d {
                let base = &points[chosen[0]];
                let dirs: Vec<Vec<i64>> = chosen[1..]
                    .iter()
                    .map(|&k| {
                        if k < points.len() {
                            points[k].iter().zip(base).map(|(a, b)| a - b).collect()
                        } else {
                            let mut e = vec![0; d];
                            e[k - points.len()] = 1;
                            e
                        }
                    })
                    .collect();
                let Some(mut w) = normal_vector(&dirs, d) else { return };
                if w.iter().all(|&x| x <= 0) {
                    w.iter_mut().for_each(|x| *x = -*x);
                }
                if w.iter().any(|&x| x < 0) {
                    return;
                }
                let b: i64 = w.iter().zip(base).map(|(a, b)| a * b).sum();
                if b <= 0 {
                    return;
                }
                let supporting = points.iter().all(|p| w.iter().zip(p).map(|(a, b)| a * b).sum::<i64>() >= b);
                if supporting {
                    facets.push(Facet { normal: w, rhs: b });
                }
                return;
            }
            for k in start..total {
                // the first chosen element must be a point
                if chosen.is_empty() && k >= points.len() {
                    break;
                }
                chosen.push(k);
                visit(k + 1, total, d, chosen, points, facets);
                chosen.pop();
            }
        }
        if !points.is_empty() && !ideal.is_unit() {
            visit(0, total, d, &mut chosen, &points, &mut facets);
        }
        facets.sort();
        facets.dedup();
        NewtonPolyhedron { nvars: d, facets }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn contains(&self, v: &ExponentVector) -> bool {
        self.contains_scaled(v, 1)
    }

    /// `v ∈ n·NP`, i.e. `x^v` is integral over `I^n`.
    pub fn contains_scaled(&self, v: &ExponentVector, n: u32) -> bool {
        self.facets.iter().all(|f| f.value(v) >= n as i64 * f.rhs)
    }

    /// Largest `n` with `v ∈ n·NP`, or `None` when every `n` works.
    pub fn closure_order(&self, v: &ExponentVector) -> Option<u64> {
        self.facets.iter().map(|f| (f.value(v) / f.rhs) as u64).min()
    }
}

fn check_dim(v: &ExponentVector, ideal: &MonomialIdeal) -> Result<(), AlgebraError> {
    if v.len() != ideal.nvars() {
        Err(AlgebraError::LengthMismatch(ideal.nvars(), v.len()))
    } else {
        Ok(())
    }
}

/// Exact LP test of `x^v` integral over `I^n`: some convex combination of the
/// generators is dominated by `v / n`.
pub fn np_membership_scaled(v: &ExponentVector, ideal: &MonomialIdeal, n: u32) -> Result<bool, AlgebraError> {
    check_dim(v, ideal)?;
    if ideal.is_zero() {
        return Ok(false);
    }
    let d = ideal.nvars();
    let gens = ideal.generators();
    let m = gens.len();
    let q = |x: i64| Rational::from_integer(x.into());
    let mut rows = Vec::with_capacity(d + 1);
    let mut rhs = Vec::with_capacity(d + 1);
    for i in 0..d {
        let mut row: Vec<Rational> = gens.iter().map(|g| q(g.get(i) as i64 * n as i64)).collect();
        row.extend((0..d).map(|k| q((k == i) as i64)));
        rows.push(row);
        rhs.push(q(v.get(i) as i64));
    }
    let mut last: Vec<Rational> = vec![q(1); m];
    last.extend((0..d).map(|_| q(0)));
    rows.push(last);
    rhs.push(q(1));
    Ok(lp::feasible(&rows, &rhs))
}

pub fn np_membership(v: &ExponentVector, ideal: &MonomialIdeal) -> Result<bool, AlgebraError> {
    np_membership_scaled(v, ideal, 1)
}

fn closure_in_box(np: &NewtonPolyhedron, upper: &[u32], n: u32) -> Vec<ExponentVector> {
    let d = upper.len();
    let mut gens = Vec::new();
    for_each_in_box(upper, |v| {
        if !np.contains_scaled(v, n) {
            return;
        }
        let minimal = (0..d).all(|i| {
            if v.get(i) == 0 {
                return true;
            }
            let mut w = *v;
            w.set(i, v.get(i) - 1);
            !np.contains_scaled(&w, n)
        });
        if minimal {
            gens.push(*v);
        }
    });
    gens
}

/// `I*`, the integral closure of a nonzero monomial ideal.
pub fn integral_closure(ideal: &MonomialIdeal) -> MonomialIdeal {
    integral_closure_of_power(ideal, 1)
}

/// `(I^n)*`, computed from `NP(I^n) = n·NP(I)`.
pub fn integral_closure_of_power(ideal: &MonomialIdeal, n: u32) -> MonomialIdeal {
    let np = NewtonPolyhedron::new(ideal);
    closure_of_power_with(&np, ideal, n)
}

pub(crate) fn closure_of_power_with(np: &NewtonPolyhedron, ideal: &MonomialIdeal, n: u32) -> MonomialIdeal {
    if n == 0 || ideal.is_unit() {
        return MonomialIdeal::unit(ideal.nvars());
    }
    // If v_i exceeds every generator's i-th exponent (times n), v - e_i still
    // dominates the same convex combination, so v is not a minimal generator.
    let upper: Vec<u32> = ideal.max_exponents().iter().map(|&e| e * n).collect();
    MonomialIdeal::new(ideal.nvars(), closure_in_box(np, &upper, n)).expect("lengths agree")
}

/// Whether `I = I*`, with a monomial of `I* \ I` when not.
pub fn is_integrally_closed(ideal: &MonomialIdeal) -> (bool, Option<ExponentVector>) {
    let closure = integral_closure(ideal);
    witness(ideal, &closure)
}

fn witness(ideal: &MonomialIdeal, closure: &MonomialIdeal) -> (bool, Option<ExponentVector>) {
    match closure.generators().iter().find(|g| !ideal.contains(g)) {
        Some(w) => (false, Some(*w)),
        None => (true, None),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalityFailure {
    pub n: u32,
    pub witness: ExponentVector,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum NormalityVerdict {
    Normal { up_to: u32 },
    NotNormal { first_failure: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalityReport {
    pub checked_window: u32,
    pub failures: Vec<NormalityFailure>,
    pub verdict: NormalityVerdict,
    pub heuristic: String,
}

impl NormalityReport {
    pub fn is_normal(&self) -> bool {
        matches!(self.verdict, NormalityVerdict::Normal { .. })
    }
}

/// Default normality window in `d` variables.
pub fn default_normality_window(nvars: usize) -> u32 {
    (nvars.saturating_sub(1) as u32).max(3)
}

/// Checks `I^n = (I^n)*` for `n = 1..=window`. Every reported witness is
/// re-verified by the exact LP and by non-membership in `I^n`.
pub fn normality_report(ideal: &MonomialIdeal, window: u32) -> Result<NormalityReport> {
    if !ideal.is_m_primary() {
        return Err(Error::NotMPrimary);
    }
    let np = NewtonPolyhedron::new(ideal);
    let mut failures = Vec::new();
    let mut power = MonomialIdeal::unit(ideal.nvars());
    for n in 1..=window {
        power = power.product(ideal);
        let closure = closure_of_power_with(&np, ideal, n);
        if let (false, Some(w)) = witness(&power, &closure) {
            let integral = np_membership_scaled(&w, ideal, n)?;
            if !integral || power.contains(&w) {
                return Err(Error::Precondition(format!("normality witness {w:?} failed verification")));
            }
            failures.push(NormalityFailure { n, witness: w });
        }
    }
    let verdict = match failures.first() {
        Some(f) => NormalityVerdict::NotNormal { first_failure: f.n },
        None => NormalityVerdict::Normal { up_to: window },
    };
    Ok(NormalityReport {
        checked_window: window,
        failures,
        verdict,
        heuristic: format!(
            "powers 1..={window} compared with their integral closures; normality beyond n = {window} is not checked"
        ),
    })
}

/// `d!` times the volume of the region below the Newton polyhedron, which is
/// the multiplicity `e_0` of an m-primary monomial ideal. Each compact facet
/// is fanned into simplices and coned off at the origin. Needs `d <= 3`.
pub fn normalized_covolume(ideal: &MonomialIdeal) -> Result<u64> {
    let d = ideal.nvars();
    if !ideal.is_m_primary() {
        return Err(Error::NotMPrimary);
    }
    if d == 0 || d > 3 {
        return Err(Error::Precondition(format!("volume computed for 1 to 3 variables, got {d}")));
    }
    let np = NewtonPolyhedron::new(ideal);
    let points: Vec<Vec<i64>> = ideal
        .generators()
        .iter()
        .map(|g| g.as_slice().iter().map(|&e| e as i64).collect())
        .collect();
    let mut total: i128 = 0;
    for f in np.facets() {
        // m-primary: every facet with positive right-hand side is compact
        debug_assert!(f.normal.iter().all(|&w| w > 0));
        let on: Vec<&Vec<i64>> = points
            .iter()
            .filter(|p| f.normal.iter().zip(p.iter()).map(|(w, e)| w * e).sum::<i64>() == f.rhs)
            .collect();
        total += match d {
            1 => on[0][0] as i128,
            2 => {
                // endpoints are the extremes in the first coordinate
                let lo = on.iter().min_by_key(|p| p[0]).expect("facet vertex");
                let hi = on.iter().max_by_key(|p| p[0]).expect("facet vertex");
                (lo[0] as i128 * hi[1] as i128 - lo[1] as i128 * hi[0] as i128).abs()
            }
            _ => {
                let hull = planar_hull(&on);
                (1..hull.len().saturating_sub(1))
                    .map(|i| {
                        det(vec![
                            hull[0].iter().map(|&x| x as i128).collect(),
                            hull[i].iter().map(|&x| x as i128).collect(),
                            hull[i + 1].iter().map(|&x| x as i128).collect(),
                        ])
                        .abs()
                    })
                    .sum()
            }
        };
    }
    Ok(total as u64)
}

/// Convex hull, in order, of points on a plane with positive normal; projects
/// away the last coordinate.
fn planar_hull(points: &[&Vec<i64>]) -> Vec<Vec<i64>> {
    let mut pts: Vec<Vec<i64>> = points.iter().map(|p| (*p).clone()).collect();
    pts.sort_by_key(|p| (p[0], p[1]));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: &Vec<i64>, a: &Vec<i64>, b: &Vec<i64>| (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    let mut lower: Vec<Vec<i64>> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Vec<i64>> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}
