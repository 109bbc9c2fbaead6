//! Per-instance analysis runs, isolated from each other and ordered by id.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use blowup_core::{
    analyze_instance, monomial_string, AnalysisConfig, Classification, Field, FieldKind, Fp, Ideal, InstanceAnalysis,
    MonomialIdeal, Rational, RingDescriptor,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// One analysed instance. Replaying `ideal` with `seed` and the same
/// configuration reproduces every field except `elapsed_ms`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusRecord {
    pub id: usize,
    pub ideal: String,
    pub vars: Vec<String>,
    pub field: String,
    pub generators: Vec<String>,
    pub seed: u64,
    pub analysis: Option<InstanceAnalysis>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub elapsed_ms: Option<f64>,
}

impl CorpusRecord {
    pub fn classification(&self) -> Classification {
        self.analysis
            .as_ref()
            .map_or(Classification::Unresolved, |a| a.verdict.classification)
    }

    /// A stage stopped on a resource limit.
    pub fn hit_budget(&self) -> bool {
        self.analysis
            .as_ref()
            .is_some_and(|a| a.errors.iter().any(|e| e.resource))
    }
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub vars: Vec<String>,
    pub field: FieldKind,
    pub seed: u64,
    pub jobs: usize,
    pub timings: bool,
}

/// Seed of instance `id` in a run seeded with `seed`.
pub fn instance_seed(seed: u64, id: usize) -> u64 {
    seed ^ id as u64
}

fn analyze_as<F: Field>(ring_vars: &[String], ideal: &MonomialIdeal, seed: u64, cfg: &AnalysisConfig) -> Result<InstanceAnalysis, String> {
    let ring = RingDescriptor::new::<F, _>(ring_vars).map_err(|e| e.to_string())?;
    let a = Ideal::<F>::from_monomial_ideal(&ring, ideal).map_err(|e| e.to_string())?;
    analyze_instance(&a, seed, cfg).map_err(|e| e.to_string())
}

/// Analyses one instance; errors and panics end up in the record.
pub fn run_instance(id: usize, ideal: &MonomialIdeal, opts: &RunOptions, cfg: &AnalysisConfig) -> CorpusRecord {
    let seed = instance_seed(opts.seed, id);
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(|| match opts.field {
        FieldKind::Rational => analyze_as::<Rational>(&opts.vars, ideal, seed, cfg),
        FieldKind::Prime(_) => analyze_as::<Fp>(&opts.vars, ideal, seed, cfg),
    }))
    .unwrap_or_else(|panic| {
        let msg = panic
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "unknown panic".into());
        Err(format!("internal error: {msg}"))
    });
    let elapsed = start.elapsed().as_secs_f64() * 1000.0;
    let generators = ideal
        .generators()
        .iter()
        .map(|g| monomial_string(&opts.vars, g))
        .collect();
    let (analysis, error) = match outcome {
        Ok(a) => (Some(a), None),
        Err(e) => (None, Some(e)),
    };
    CorpusRecord {
        id,
        ideal: ideal.display_with(&opts.vars),
        vars: opts.vars.clone(),
        field: opts.field.to_string(),
        generators,
        seed,
        analysis,
        error,
        elapsed_ms: opts.timings.then_some(elapsed),
    }
}

/// Analyses every instance, `jobs` at a time; output is ordered by id
/// whatever the completion order.
pub fn run_analysis(corpus: &[MonomialIdeal], opts: &RunOptions, cfg: &AnalysisConfig) -> Result<Vec<CorpusRecord>, CliError> {
    run_analysis_with(corpus, opts, |_| cfg.clone())
}

/// As [`run_analysis`], with a configuration chosen per instance id.
pub fn run_analysis_with(
    corpus: &[MonomialIdeal],
    opts: &RunOptions,
    cfg_for: impl Fn(usize) -> AnalysisConfig + Sync,
) -> Result<Vec<CorpusRecord>, CliError> {
    if let FieldKind::Prime(p) = opts.field {
        blowup_core::field::set_prime_modulus(p)?;
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs.max(1))
        .build()
        .map_err(|e| CliError::Input(e.to_string()))?;
    Ok(pool.install(|| {
        corpus
            .par_iter()
            .enumerate()
            .map(|(id, ideal)| run_instance(id, ideal, opts, &cfg_for(id)))
            .collect()
    }))
}
