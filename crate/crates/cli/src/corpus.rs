//! Seeded generation of m-primary monomial ideals.

use std::collections::BTreeSet;

use blowup_core::{normality_report, ExponentVector, FieldKind, MonomialIdeal};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use crate::CliError;

pub const VARIABLES: [&str; 3] = ["x", "y", "z"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusSpec {
    pub dim: usize,
    pub max_degree: u32,
    /// `None` enumerates every instance.
    pub count: Option<usize>,
    pub seed: u64,
    pub field: FieldKind,
    pub require_normal: bool,
}

impl CorpusSpec {
    pub fn validate(&self) -> Result<(), CliError> {
        if !(2..=3).contains(&self.dim) {
            return Err(CliError::Input(format!("dimension must be 2 or 3, got {}", self.dim)));
        }
        if !(1..=8).contains(&self.max_degree) {
            return Err(CliError::Input(format!("max degree must be in 1..=8, got {}", self.max_degree)));
        }
        if self.count.is_some_and(|c| c > 100_000) {
            return Err(CliError::Input("at most 100000 instances".into()));
        }
        Ok(())
    }

    pub fn variables(&self) -> Vec<String> {
        VARIABLES[..self.dim].iter().map(|s| s.to_string()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    pub instances: Vec<MonomialIdeal>,
    pub warning: Option<String>,
}

/// Non-constant monomials of degree `<= max_degree` that are not pure powers.
fn mixed_monomials(dim: usize, max_degree: u32) -> Vec<ExponentVector> {
    let mut out = Vec::new();
    let upper = vec![max_degree; dim];
    blowup_core::monomial_ideal::for_each_in_box(&upper, |v| {
        let support = v.as_slice().iter().filter(|&&e| e > 0).count();
        if support >= 2 && v.degree() <= max_degree as u64 {
            out.push(*v);
        }
    });
    out
}

fn all_monomials(dim: usize, max_degree: u32) -> Vec<ExponentVector> {
    let mut out = Vec::new();
    let upper = vec![max_degree; dim];
    blowup_core::monomial_ideal::for_each_in_box(&upper, |v| {
        if v.degree() >= 1 && v.degree() <= max_degree as u64 {
            out.push(*v);
        }
    });
    out
}

/// Canonical form used for deduplication and ordering.
fn key(ideal: &MonomialIdeal) -> Vec<Vec<u32>> {
    ideal.generators().iter().map(|g| g.as_slice().to_vec()).collect()
}

fn accept(ideal: &MonomialIdeal, spec: &CorpusSpec) -> Result<bool, CliError> {
    if !ideal.is_m_primary() {
        return Ok(false);
    }
    if spec.require_normal {
        let window = blowup_core::newton::default_normality_window(spec.dim);
        return Ok(normality_report(ideal, window)?.is_normal());
    }
    Ok(true)
}

/// The deterministic stream: pure powers `x_i^{k_i}`, `k_i <= D`, plus `0..=2d`
/// further monomials of degree `<= D`, minimalized and deduplicated.
pub fn generate_corpus(spec: &CorpusSpec) -> Result<Corpus, CliError> {
    spec.validate()?;
    let Some(count) = spec.count else {
        return enumerate_corpus(spec);
    };
    let pool = all_monomials(spec.dim, spec.max_degree);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let budget = 50 * count + 1000;
    for _ in 0..budget {
        if out.len() == count {
            break;
        }
        let mut gens: Vec<ExponentVector> = (0..spec.dim)
            .map(|i| ExponentVector::pure_power(spec.dim, i, rng.gen_range(1..=spec.max_degree)))
            .collect();
        let extra = rng.gen_range(0..=2 * spec.dim);
        gens.extend(pool.choose_multiple(&mut rng, extra).copied());
        let ideal = MonomialIdeal::new(spec.dim, gens)?;
        if !seen.insert(key(&ideal)) {
            continue;
        }
        if accept(&ideal, spec)? {
            out.push(ideal);
        }
    }
    let warning = (out.len() < count).then(|| {
        format!(
            "only {} of {count} instances found within {budget} samples",
            out.len()
        )
    });
    Ok(Corpus { instances: out, warning })
}

/// Every ideal the sampler can produce, in canonical order. Only small
/// parameters are accepted.
fn enumerate_corpus(spec: &CorpusSpec) -> Result<Corpus, CliError> {
    let mixed = mixed_monomials(spec.dim, spec.max_degree);
    if mixed.len() > 20 {
        return Err(CliError::Input(format!(
            "exhaustive enumeration needs a count for {} candidate monomials",
            mixed.len()
        )));
    }
    let max_extra = 2 * spec.dim;
    let mut found = BTreeSet::new();
    let pure: Vec<Vec<u32>> = {
        let mut acc = vec![vec![]];
        for _ in 0..spec.dim {
            acc = acc
                .into_iter()
                .flat_map(|p: Vec<u32>| (1..=spec.max_degree).map(move |k| [p.clone(), vec![k]].concat()))
                .collect();
        }
        acc
    };
    for ks in &pure {
        for mask in 0u32..(1 << mixed.len()) {
            if mask.count_ones() as usize > max_extra {
                continue;
            }
            let mut gens: Vec<ExponentVector> = ks
                .iter()
                .enumerate()
                .map(|(i, &k)| ExponentVector::pure_power(spec.dim, i, k))
                .collect();
            gens.extend((0..mixed.len()).filter(|b| mask >> b & 1 == 1).map(|b| mixed[b]));
            let ideal = MonomialIdeal::new(spec.dim, gens)?;
            found.insert(key(&ideal));
        }
    }
    let mut instances = Vec::new();
    for gens in found {
        let gens = gens.iter().map(|g| ExponentVector::from_slice(g)).collect();
        let ideal = MonomialIdeal::new(spec.dim, gens)?;
        if accept(&ideal, spec)? {
            instances.push(ideal);
        }
    }
    Ok(Corpus { instances, warning: None })
}
