//! Corpus generation, batch runs and reports on top of `blowup-core`.

pub mod corpus;
pub mod report;
pub mod runner;

use std::str::FromStr;

use blowup_core::{
    hilbert_data, parse_generators, rr_deviation_sequence, AlgebraError, AnalysisConfig, Field, FieldKind, Filtration,
    FiltrationKind, Fp, HilbertData, Ideal, Rational, RingDescriptor, TableSize,
};
use serde::{Deserialize, Serialize};

use crate::runner::{run_instance, CorpusRecord, RunOptions};

pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_COUNTEREXAMPLE: i32 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Core(#[from] blowup_core::Error),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_resource() => EXIT_BUDGET,
            CliError::Io(_) | CliError::Csv(_) => 1,
            _ => EXIT_INPUT,
        }
    }
}

/// `{"vars": [...], "field": "Q", "generators": [...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealInput {
    pub vars: Vec<String>,
    #[serde(default = "default_field")]
    pub field: String,
    pub generators: Vec<String>,
}

fn default_field() -> String {
    "Q".into()
}

impl IdealInput {
    pub fn field_kind(&self) -> Result<FieldKind, CliError> {
        Ok(FieldKind::from_str(&self.field)?)
    }
}

/// Report for ideals outside the monomial pipeline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneralReport {
    pub vars: Vec<String>,
    pub field: String,
    pub generators: Vec<String>,
    pub hilbert_adic: Option<HilbertData>,
    pub rr_deviation: Option<Vec<u64>>,
    pub errors: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComputeReport {
    Monomial(Box<CorpusRecord>),
    General(GeneralReport),
}

impl ComputeReport {
    pub fn exit_code(&self) -> i32 {
        match self {
            ComputeReport::Monomial(r) if r.classification() == blowup_core::Classification::CounterexampleCandidate => {
                EXIT_COUNTEREXAMPLE
            }
            ComputeReport::Monomial(r) if r.hit_budget() => EXIT_BUDGET,
            ComputeReport::General(g) if !g.errors.is_empty() => EXIT_BUDGET,
            _ => 0,
        }
    }
}

fn general_report<F: Field>(input: &IdealInput, cfg: &AnalysisConfig) -> Result<GeneralReport, CliError> {
    let ring = RingDescriptor::new::<F, _>(&input.vars)?;
    let ideal = Ideal::<F>::new(&ring, parse_generators(&input.generators, &ring)?)?;
    let mut errors = Vec::new();
    let hilbert_adic = Filtration::new(FiltrationKind::Adic(ideal.clone()), &cfg.filtration)
        .and_then(|mut f| hilbert_data(&mut f, TableSize::Auto, ring.nvars().max(3)))
        .map_err(|e| errors.push(format!("hilbert-adic: {e}")))
        .ok();
    let rr_deviation = rr_deviation_sequence(&ideal, cfg.rr_window, &cfg.filtration)
        .map_err(|e| errors.push(format!("ratliff-rush: {e}")))
        .ok();
    Ok(GeneralReport {
        vars: input.vars.clone(),
        field: input.field.clone(),
        generators: ideal.generators().iter().map(|g| g.to_string()).collect(),
        hilbert_adic,
        rr_deviation,
        errors,
    })
}

fn monomial_of<F: Field>(input: &IdealInput) -> Result<Option<blowup_core::MonomialIdeal>, CliError> {
    let ring = RingDescriptor::new::<F, _>(&input.vars)?;
    let ideal = Ideal::<F>::new(&ring, parse_generators(&input.generators, &ring)?)?;
    Ok(ideal.as_monomial_ideal())
}

/// The full report for one ideal.
pub fn compute(input: &IdealInput, seed: u64, cfg: &AnalysisConfig) -> Result<ComputeReport, CliError> {
    let field = input.field_kind()?;
    if let FieldKind::Prime(p) = field {
        blowup_core::field::set_prime_modulus(p)?;
    }
    if input.generators.is_empty() {
        return Err(CliError::Input("no generators given".into()));
    }
    let monomial = match field {
        FieldKind::Rational => monomial_of::<Rational>(input)?,
        FieldKind::Prime(_) => monomial_of::<Fp>(input)?,
    };
    match monomial {
        Some(m) if (1..=3).contains(&m.nvars()) => {
            if !m.is_m_primary() {
                return Err(CliError::Core(blowup_core::Error::NotMPrimary));
            }
            let opts = RunOptions {
                vars: input.vars.clone(),
                field,
                seed,
                jobs: 1,
                timings: false,
            };
            let record = run_instance(0, &m, &opts, cfg);
            if let Some(e) = &record.error {
                return Err(CliError::Input(e.clone()));
            }
            Ok(ComputeReport::Monomial(Box::new(record)))
        }
        _ => Ok(ComputeReport::General(match field {
            FieldKind::Rational => general_report::<Rational>(input, cfg)?,
            FieldKind::Prime(_) => general_report::<Fp>(input, cfg)?,
        })),
    }
}
