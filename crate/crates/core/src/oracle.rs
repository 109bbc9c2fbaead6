//! Cross-checks between independent routes to the same quantity: Gröbner
//! computations against monomial combinatorics, and the exact LP against a
//! bounded power test.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::field::{Field, Rational};
use crate::filtration::AdicOrder;
use crate::groebner::GroebnerConfig;
use crate::ideal::{
    artinian_quotient_length, ideal_colon, ideal_intersection, ideal_power, ideal_product, Ideal,
};
use crate::monomial::ExponentVector;
use crate::monomial_ideal::{for_each_in_box, MonomialIdeal};
use crate::newton::{np_membership, normalized_covolume};
use crate::poly::Polynomial;
use crate::ring::{Ring, RingDescriptor};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct OracleConfig {
    pub instances: usize,
    pub nvars: usize,
    pub max_degree: u32,
    pub seed: u64,
    /// Largest `k` tried by the power test.
    pub power_k: u32,
    pub groebner: GroebnerConfig,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            instances: 100,
            nvars: 2,
            max_degree: 4,
            seed: 0,
            power_k: 12,
            groebner: GroebnerConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Disagreement {
    pub suite: String,
    pub ideal: String,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub instances: usize,
    /// Comparisons made per suite.
    pub checks: BTreeMap<String, u64>,
    pub disagreements: Vec<Disagreement>,
    /// Points the LP puts in the Newton polyhedron that the power test did
    /// not confirm within `k <= power_k`; kept for review, not failures.
    pub lp_only: Vec<Disagreement>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.disagreements.is_empty()
    }

    fn count(&mut self, suite: &str) {
        *self.checks.entry(suite.to_string()).or_default() += 1;
    }

    fn compare<T: PartialEq + std::fmt::Debug>(&mut self, suite: &str, ideal: &str, left: T, right: T) {
        self.count(suite);
        if left != right {
            self.disagreements.push(Disagreement {
                suite: suite.into(),
                ideal: ideal.into(),
                detail: format!("{left:?} != {right:?}"),
            });
        }
    }
}

/// Pure powers `x_i^{k_i}` plus a few random monomials of degree `<= max_degree`.
pub fn random_m_primary(rng: &mut impl Rng, nvars: usize, max_degree: u32) -> MonomialIdeal {
    let mut gens: Vec<ExponentVector> = (0..nvars)
        .map(|i| ExponentVector::pure_power(nvars, i, rng.gen_range(1..=max_degree)))
        .collect();
    for _ in 0..rng.gen_range(0..=2 * nvars) {
        let deg = rng.gen_range(1..=max_degree);
        let mut e = vec![0u32; nvars];
        for _ in 0..deg {
            e[rng.gen_range(0..nvars)] += 1;
        }
        gens.push(ExponentVector::from_slice(&e));
    }
    MonomialIdeal::new(nvars, gens).expect("valid exponents")
}

/// `x^{kv} ∈ I^k` for some `k <= k_max`.
pub fn power_test(v: &ExponentVector, order: &mut AdicOrder, k_max: u32) -> bool {
    (1..=k_max).any(|k| {
        let kv: Vec<u32> = v.as_slice().iter().map(|&e| e * k).collect();
        order.in_power(&ExponentVector::from_slice(&kv), k)
    })
}

/// `ℓ(A/I)` by testing every point of the pure-power box against the generators.
pub fn brute_force_colength(ideal: &MonomialIdeal) -> Option<u64> {
    let bounds = ideal.pure_power_bounds()?;
    let upper: Vec<u32> = bounds.iter().map(|b| b.saturating_sub(1)).collect();
    let mut count = 0;
    for_each_in_box(&upper, |v| {
        if !ideal.generators().iter().any(|g| g.divides(v)) {
            count += 1;
        }
    });
    Some(count)
}

fn to_ideal(ring: &Ring, m: &MonomialIdeal) -> Result<Ideal<Rational>> {
    Ok(Ideal::from_monomial_ideal(ring, m)?)
}

fn from_ideal(i: &Ideal<Rational>) -> Option<MonomialIdeal> {
    i.as_monomial_ideal()
}

/// Image of `m` under `x_i ↦ x_i + Σ_{j>i} c_ij x_j`. The substitution fixes
/// the origin, so colengths of m-primary ideals are unchanged.
fn unipotent_image(ring: &Ring, m: &MonomialIdeal, rng: &mut impl Rng) -> Result<Ideal<Rational>> {
    let d = ring.nvars();
    let forms: Vec<Polynomial<Rational>> = (0..d)
        .map(|i| {
            let mut f = Polynomial::variable(ring, i);
            for j in i + 1..d {
                let c: i64 = rng.gen_range(-2..=2);
                f = &f + &Polynomial::variable(ring, j).scale(&Rational::from_i64(c));
            }
            f
        })
        .collect();
    let gens = m
        .generators()
        .iter()
        .map(|g| {
            (0..d).fold(Polynomial::one(ring), |acc, i| &acc * &forms[i].pow(g.get(i)))
        })
        .collect();
    Ok(Ideal::new(ring, gens)?)
}

/// Runs every suite on `cfg.instances` random m-primary monomial ideals.
pub fn run_oracle_suite(cfg: &OracleConfig) -> Result<OracleReport> {
    let names: Vec<String> = ["x", "y", "z", "w", "u", "v", "s", "t"][..cfg.nvars]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let ring = RingDescriptor::new::<Rational, _>(&names)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let g = &cfg.groebner;
    let mut report = OracleReport::default();
    for _ in 0..cfg.instances {
        let i = random_m_primary(&mut rng, cfg.nvars, cfg.max_degree);
        let j = random_m_primary(&mut rng, cfg.nvars, cfg.max_degree);
        let label = format!("{} ; {}", i.display_with(&names), j.display_with(&names));
        let (ii, jj) = (to_ideal(&ring, &i)?, to_ideal(&ring, &j)?);

        let stair = i.staircase_length()?;
        report.compare("length/groebner", &label, artinian_quotient_length(&ii, g)?, stair);
        report.compare("length/brute-force", &label, brute_force_colength(&i), Some(stair));
        let moved = unipotent_image(&ring, &i, &mut rng)?;
        report.compare("length/coordinate-change", &label, artinian_quotient_length(&moved, g)?, stair);

        report.compare("product", &label, from_ideal(&ideal_product(&ii, &jj, g)?), Some(i.product(&j)));
        report.compare("power", &label, from_ideal(&ideal_power(&ii, 2, g)?), Some(i.power(2)));
        report.compare(
            "intersection",
            &label,
            from_ideal(&ideal_intersection(&ii, &jj, g)?),
            Some(i.intersection(&j)),
        );
        report.compare("colon", &label, from_ideal(&ideal_colon(&ii, &jj, g)?), Some(i.colon(&j)?));

        if cfg.nvars <= 3 {
            let e0 = {
                let mut f = crate::filtration::Filtration::new(
                    crate::filtration::FiltrationKind::Adic(ii.clone()),
                    &Default::default(),
                )?;
                crate::hilbert::hilbert_data(&mut f, crate::hilbert::TableSize::Auto, 0)?.e_int(0) as u64
            };
            report.compare("multiplicity/volume", &label, normalized_covolume(&i)?, e0);
        }

        let mut order = AdicOrder::new(&i);
        let upper: Vec<u32> = i.max_exponents().iter().map(|m| m + 1).collect();
        let mut points = Vec::new();
        for_each_in_box(&upper, |v| points.push(*v));
        for v in points {
            let lp = np_membership(&v, &i)?;
            let power = power_test(&v, &mut order, cfg.power_k);
            report.count("np-membership");
            if power && !lp {
                report.disagreements.push(Disagreement {
                    suite: "np-membership".into(),
                    ideal: label.clone(),
                    detail: format!("power test accepts {:?}, LP rejects", v.as_slice()),
                });
            } else if lp && !power {
                report.lp_only.push(Disagreement {
                    suite: "np-membership".into(),
                    ideal: label.clone(),
                    detail: format!("LP accepts {:?}, no k <= {} confirms", v.as_slice(), cfg.power_k),
                });
            }
        }
        report.instances += 1;
    }
    Ok(report)
}
