use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use blowup_cli::corpus::{generate_corpus, CorpusSpec, VARIABLES};
use blowup_cli::report::{aggregate, emit_report, Format};
use blowup_cli::runner::{run_analysis, RunOptions};
use blowup_cli::{compute, CliError, ComputeReport, IdealInput, EXIT_BUDGET, EXIT_COUNTEREXAMPLE};
use blowup_core::{
    parse_generators, run_oracle_suite, AnalysisConfig, FieldKind, Ideal, MonomialIdeal, OracleConfig, Rational,
    RingDescriptor,
};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "blowup", version, about = "Hilbert coefficients and Cohen-Macaulay certificates for m-primary ideals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full report for one ideal read from a JSON file.
    Compute {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = ComputeFormat::Json)]
        format: ComputeFormat,
        #[arg(long)]
        budget_pairs: Option<u64>,
    },
    /// Print a seeded corpus of m-primary monomial ideals as JSON lines.
    GenCorpus {
        #[command(flatten)]
        corpus: CorpusArgs,
    },
    /// Analyse a corpus and report verdicts.
    VerifyItoh {
        /// Corpus in JSON lines, as written by gen-corpus; generated when absent.
        #[arg(long)]
        input: Option<PathBuf>,
        #[command(flatten)]
        corpus: CorpusArgs,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        budget_pairs: Option<u64>,
        /// Record wall-clock time per instance (breaks byte-identical output).
        #[arg(long)]
        timings: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Cross-check Gröbner results against monomial combinatorics and the LP against the power test.
    OracleCheck {
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 4)]
        max_deg: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        budget_pairs: Option<u64>,
        #[arg(long, value_enum, default_value_t = ComputeFormat::Table)]
        format: ComputeFormat,
    },
}

#[derive(Args, Clone)]
struct CorpusArgs {
    #[arg(long, default_value_t = 3)]
    dim: usize,
    #[arg(long, default_value_t = 5)]
    max_deg: u32,
    /// Omit to enumerate every instance (small parameters only).
    #[arg(long)]
    count: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "q")]
    field: String,
    #[arg(long)]
    require_normal: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ComputeFormat {
    Json,
    Table,
}

impl CorpusArgs {
    fn spec(&self) -> Result<CorpusSpec, CliError> {
        Ok(CorpusSpec {
            dim: self.dim,
            max_degree: self.max_deg,
            count: self.count,
            seed: self.seed,
            field: FieldKind::from_str(&self.field)?,
            require_normal: self.require_normal,
        })
    }
}

fn config(budget_pairs: Option<u64>) -> AnalysisConfig {
    let mut cfg = AnalysisConfig::default();
    if let Some(b) = budget_pairs {
        cfg.filtration.groebner.max_pair_reductions = b;
    }
    cfg
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Reads a gen-corpus file; every line must share variables and field.
fn read_corpus(path: &PathBuf) -> Result<(Vec<String>, FieldKind, Vec<MonomialIdeal>), CliError> {
    let mut vars: Option<Vec<String>> = None;
    let mut field = FieldKind::Rational;
    let mut ideals = Vec::new();
    for (n, line) in BufReader::new(File::open(path)?).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let input: IdealInput =
            serde_json::from_str(&line).map_err(|e| CliError::Input(format!("line {}: {e}", n + 1)))?;
        match &vars {
            None => {
                vars = Some(input.vars.clone());
                field = input.field_kind()?;
            }
            Some(v) if *v != input.vars || input.field_kind()? != field => {
                return Err(CliError::Input(format!("line {}: variables or field differ from line 1", n + 1)));
            }
            _ => {}
        }
        let ring = RingDescriptor::new::<Rational, _>(&input.vars)?;
        let ideal = Ideal::<Rational>::new(&ring, parse_generators(&input.generators, &ring)?)?;
        let m = ideal
            .as_monomial_ideal()
            .ok_or_else(|| CliError::Input(format!("line {}: not a monomial ideal", n + 1)))?;
        ideals.push(m);
    }
    let vars = vars.ok_or_else(|| CliError::Input("empty corpus".into()))?;
    if vars.len() > 3 {
        return Err(CliError::Input("corpus ideals need at most 3 variables".into()));
    }
    Ok((vars, field, ideals))
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Compute {
            input,
            seed,
            format,
            budget_pairs,
        } => {
            let text = std::fs::read_to_string(&input)?;
            let parsed: IdealInput = serde_json::from_str(&text).map_err(|e| CliError::Input(e.to_string()))?;
            let cfg = AnalysisConfig {
                huckaba_huneke_max: 4,
                ..config(budget_pairs)
            };
            let report = compute(&parsed, seed, &cfg)?;
            let mut out = output(&None)?;
            match (format, &report) {
                (ComputeFormat::Table, ComputeReport::Monomial(r)) => {
                    emit_report(std::slice::from_ref(r.as_ref()), Format::Table, &mut out)?
                }
                _ => {
                    serde_json::to_writer_pretty(&mut out, &report)?;
                    writeln!(out)?;
                }
            }
            out.flush()?;
            Ok(report.exit_code())
        }
        Command::GenCorpus { corpus } => {
            let spec = corpus.spec()?;
            let generated = generate_corpus(&spec)?;
            if let Some(w) = &generated.warning {
                eprintln!("warning: {w}");
            }
            let vars = spec.variables();
            let mut out = output(&None)?;
            for (id, ideal) in generated.instances.iter().enumerate() {
                let line = serde_json::json!({
                    "id": id,
                    "vars": vars,
                    "field": spec.field.to_string(),
                    "generators": ideal.generators().iter().map(|g| blowup_core::monomial_string(&vars, g)).collect::<Vec<_>>(),
                });
                writeln!(out, "{line}")?;
            }
            out.flush()?;
            Ok(0)
        }
        Command::VerifyItoh {
            input,
            corpus,
            format,
            jobs,
            budget_pairs,
            timings,
            output: path,
        } => {
            let (vars, field, ideals) = match &input {
                Some(p) => read_corpus(p)?,
                None => {
                    let spec = corpus.spec()?;
                    let generated = generate_corpus(&spec)?;
                    if let Some(w) = &generated.warning {
                        eprintln!("warning: {w}");
                    }
                    (spec.variables(), spec.field, generated.instances)
                }
            };
            let opts = RunOptions {
                vars,
                field,
                seed: corpus.seed,
                jobs,
                timings,
            };
            let records = run_analysis(&ideals, &opts, &config(budget_pairs))?;
            let mut out = output(&path)?;
            emit_report(&records, format, &mut out)?;
            out.flush()?;
            let agg = aggregate(&records);
            if format != Format::Table {
                eprintln!(
                    "instances={} theorem-applicable={} verified={} counterexample-candidates={}",
                    agg.instances, agg.theorem_applicable, agg.verified, agg.counterexample_candidates
                );
            }
            Ok(if agg.counterexample_candidates > 0 {
                EXIT_COUNTEREXAMPLE
            } else if records.iter().any(|r| r.hit_budget()) {
                EXIT_BUDGET
            } else {
                0
            })
        }
        Command::OracleCheck {
            count,
            dim,
            max_deg,
            seed,
            budget_pairs,
            format,
        } => {
            if !(1..=VARIABLES.len()).contains(&dim) {
                return Err(CliError::Input(format!("dimension must be 1 to 3, got {dim}")));
            }
            let mut cfg = OracleConfig {
                instances: count,
                nvars: dim,
                max_degree: max_deg,
                seed,
                ..OracleConfig::default()
            };
            if let Some(b) = budget_pairs {
                cfg.groebner.max_pair_reductions = b;
            }
            let report = run_oracle_suite(&cfg)?;
            let mut out = output(&None)?;
            match format {
                ComputeFormat::Json => {
                    serde_json::to_writer_pretty(&mut out, &report)?;
                    writeln!(out)?;
                }
                ComputeFormat::Table => {
                    for (suite, n) in &report.checks {
                        writeln!(out, "{suite:<26} {n:>7} checks")?;
                    }
                    writeln!(out, "disagreements: {}", report.disagreements.len())?;
                    for d in &report.disagreements {
                        writeln!(out, "  {} {}: {}", d.suite, d.ideal, d.detail)?;
                    }
                    writeln!(out, "LP-only points (for review): {}", report.lp_only.len())?;
                }
            }
            out.flush()?;
            Ok(if report.passed() { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
