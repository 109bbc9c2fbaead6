//! json-lines, csv and table output for analysed corpora.

use std::io::Write;

use blowup_core::{Classification, CmStatus};
use serde::Serialize;

use crate::runner::CorpusRecord;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    JsonLines,
    Csv,
    Table,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Aggregate {
    pub instances: usize,
    pub normal: usize,
    pub e3_zero: usize,
    pub theorem_applicable: usize,
    pub verified: usize,
    pub counterexample_candidates: usize,
    pub unresolved: usize,
    pub errors: usize,
}

pub fn aggregate(records: &[CorpusRecord]) -> Aggregate {
    let mut agg = Aggregate {
        instances: records.len(),
        ..Aggregate::default()
    };
    for r in records {
        let Some(a) = &r.analysis else {
            agg.errors += 1;
            continue;
        };
        let v = &a.verdict;
        agg.normal += usize::from(v.normality.as_ref().is_some_and(|n| n.is_normal()));
        agg.e3_zero += usize::from(v.e.get(3) == Some(&0));
        agg.theorem_applicable += usize::from(v.theorem_applicable);
        match v.classification {
            Classification::VerifiedInstance => agg.verified += 1,
            Classification::CounterexampleCandidate => agg.counterexample_candidates += 1,
            Classification::Unresolved => agg.unresolved += 1,
            Classification::VacuousInstance => {}
        }
    }
    agg
}

const CSV_HEADER: [&str; 15] = [
    "id", "d", "gens", "e0", "e1", "e2", "e3", "e0*", "e1*", "e2*", "e3*", "red", "normal", "cm", "classification",
];

/// The flat summary fields of a record; missing values are empty.
fn summary_row(r: &CorpusRecord) -> Vec<String> {
    let mut row = vec![r.id.to_string(), r.vars.len().to_string(), r.generators.len().to_string()];
    let a = r.analysis.as_ref();
    let coeffs = |h: Option<&blowup_core::HilbertData>| -> Vec<String> {
        (0..4)
            .map(|i| h.map_or(String::new(), |h| h.e_int(i).to_string()))
            .collect()
    };
    row.extend(coeffs(a.and_then(|a| a.hilbert_adic.as_ref())));
    row.extend(coeffs(a.and_then(|a| a.hilbert_closure.as_ref())));
    row.push(
        a.and_then(|a| a.reduction.as_ref())
            .map_or(String::new(), |rd| rd.reduction_number.to_string()),
    );
    row.push(
        a.and_then(|a| a.verdict.normality.as_ref())
            .map_or(String::new(), |n| n.is_normal().to_string()),
    );
    row.push(a.and_then(|a| a.depth.as_ref()).map_or(String::new(), |d| {
        (d.cm_status == CmStatus::Certified).to_string()
    }));
    row.push(r.classification().as_str().to_string());
    row
}

pub fn write_json_lines(records: &[CorpusRecord], out: &mut impl Write) -> Result<(), CliError> {
    for r in records {
        serde_json::to_writer(&mut *out, r)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn write_csv(records: &[CorpusRecord], out: &mut impl Write) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record(summary_row(r))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_table(records: &[CorpusRecord], out: &mut impl Write) -> Result<(), CliError> {
    let mut rows: Vec<Vec<String>> = vec![CSV_HEADER.iter().map(|s| s.to_string()).collect()];
    for r in records {
        let mut row = summary_row(r);
        row.insert(1, r.ideal.clone());
        rows.push(row);
    }
    rows[0].insert(1, "ideal".into());
    let widths: Vec<usize> = (0..rows[0].len())
        .map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
        .collect();
    for row in &rows {
        let cells: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(cell, w)| format!("{cell:<w$}"))
            .collect();
        writeln!(out, "{}", cells.join("  ").trim_end())?;
    }
    let agg = aggregate(records);
    writeln!(out)?;
    writeln!(
        out,
        "instances={} normal={} e3=0={} theorem-applicable={} verified={} counterexample-candidates={} unresolved={} errors={}",
        agg.instances,
        agg.normal,
        agg.e3_zero,
        agg.theorem_applicable,
        agg.verified,
        agg.counterexample_candidates,
        agg.unresolved,
        agg.errors
    )?;
    Ok(())
}

pub fn emit_report(records: &[CorpusRecord], format: Format, out: &mut impl Write) -> Result<(), CliError> {
    match format {
        Format::JsonLines => write_json_lines(records, out),
        Format::Csv => write_csv(records, out),
        Format::Table => write_table(records, out),
    }
}
