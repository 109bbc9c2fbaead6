use std::process::Command;

use blowup_cli::corpus::{generate_corpus, CorpusSpec};
use blowup_cli::report::{emit_report, Format};
use blowup_cli::runner::{run_analysis, run_analysis_with, RunOptions};
use blowup_cli::{compute, ComputeReport, IdealInput};
use blowup_core::{AnalysisConfig, Classification, FieldKind, MonomialIdeal};

fn options(dim: usize, jobs: usize) -> RunOptions {
    RunOptions {
        vars: ["x", "y", "z"][..dim].iter().map(|s| s.to_string()).collect(),
        field: FieldKind::Rational,
        seed: 3,
        jobs,
        timings: false,
    }
}

fn small_corpus() -> Vec<MonomialIdeal> {
    generate_corpus(&CorpusSpec {
        dim: 3,
        max_degree: 3,
        count: Some(12),
        seed: 5,
        field: FieldKind::Rational,
        require_normal: false,
    })
    .unwrap()
    .instances
}

fn render(records: &[blowup_cli::runner::CorpusRecord], format: Format) -> String {
    let mut out = Vec::new();
    emit_report(records, format, &mut out).unwrap();
    String::from_utf8(out).unwrap()
}

#[test]
fn thread_count_does_not_change_output() {
    let corpus = small_corpus();
    let cfg = AnalysisConfig::default();
    let one = run_analysis(&corpus, &options(3, 1), &cfg).unwrap();
    let four = run_analysis(&corpus, &options(3, 4), &cfg).unwrap();
    assert_eq!(render(&one, Format::JsonLines), render(&four, Format::JsonLines));
    assert!(one.iter().enumerate().all(|(i, r)| r.id == i));
}

#[test]
fn a_starved_instance_does_not_affect_the_others() {
    let corpus = small_corpus();
    let normal = run_analysis(&corpus, &options(3, 2), &AnalysisConfig::default()).unwrap();
    let victim = normal
        .iter()
        .position(|r| r.analysis.as_ref().unwrap().reduction.as_ref().unwrap().reduction_number > 0)
        .unwrap();
    let starved = run_analysis_with(&corpus, &options(3, 2), |id| {
        let mut cfg = AnalysisConfig::default();
        if id == victim {
            cfg.r_max = 0;
        }
        cfg
    })
    .unwrap();
    assert!(starved[victim].hit_budget());
    assert_ne!(starved[victim], normal[victim]);
    for (i, (a, b)) in normal.iter().zip(&starved).enumerate() {
        if i != victim {
            assert_eq!(a, b);
        }
    }
}

#[test]
fn csv_row_of_the_square_of_the_maximal_ideal() {
    let m2 = MonomialIdeal::maximal_power(3, 2);
    let records = run_analysis(&[m2], &options(3, 1), &AnalysisConfig::default()).unwrap();
    let csv = render(&records, Format::Csv);
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("id,d,gens,e0,e1,e2,e3,e0*,e1*,e2*,e3*,red,normal,cm,classification")
    );
    assert_eq!(lines.next(), Some("0,3,6,8,4,0,0,8,4,0,0,1,true,true,VerifiedInstance"));
}

#[test]
fn a_non_normal_ideal_is_vacuous_with_closure_data() {
    let input = IdealInput {
        vars: vec!["x".into(), "y".into()],
        field: "Q".into(),
        generators: vec!["x^2".into(), "y^2".into()],
    };
    let ComputeReport::Monomial(r) = compute(&input, 0, &AnalysisConfig::default()).unwrap() else {
        panic!("monomial input gave a general report");
    };
    let a = r.analysis.as_ref().unwrap();
    assert_eq!(a.verdict.classification, Classification::VacuousInstance);
    assert!(!a.verdict.theorem_applicable);
    assert_eq!(a.hilbert_adic.as_ref().unwrap().e_ints()[..3], [4, 0, 0]);
    // (x^2, xy, y^2) is normal with e = (4, 1, 0)
    assert_eq!(a.hilbert_closure.as_ref().unwrap().e_ints()[..3], [4, 1, 0]);
}

#[test]
fn empty_reports_keep_their_header() {
    assert_eq!(render(&[], Format::JsonLines), "");
    assert_eq!(
        render(&[], Format::Csv),
        "id,d,gens,e0,e1,e2,e3,e0*,e1*,e2*,e3*,red,normal,cm,classification\n"
    );
    assert!(render(&[], Format::Table).contains("instances=0 "));
}

#[test]
fn general_ideals_get_a_general_report() {
    let input = IdealInput {
        vars: vec!["x".into(), "y".into()],
        field: "Q".into(),
        generators: vec!["x^2+y^3".into(), "x*y".into(), "y^2".into()],
    };
    let ComputeReport::General(g) = compute(&input, 0, &AnalysisConfig::default()).unwrap() else {
        panic!("expected a general report");
    };
    assert!(g.errors.is_empty(), "{:?}", g.errors);
    // colength of (x^2, xy, y^2) equals that of a once y^3 is in the ideal
    assert_eq!(g.hilbert_adic.unwrap().hilbert[0], 3);
}

fn blowup(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_blowup")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.json");
    std::fs::write(&good, r#"{"vars": ["x", "y"], "generators": ["x^2", "x*y", "y^2"]}"#).unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"vars": ["x", "y"], "generators": ["x^2", "x*y"]}"#).unwrap();
    let garbled = dir.path().join("garbled.json");
    std::fs::write(&garbled, r#"{"vars": ["x"], "generators": ["x^^2"]}"#).unwrap();

    let (code, stdout, _) = blowup(&["compute", "--input", good.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.contains("\"VerifiedInstance\""));
    let (code, _, stderr) = blowup(&["compute", "--input", bad.to_str().unwrap()]);
    assert_eq!(code, 2, "{stderr}");
    let (code, _, _) = blowup(&["compute", "--input", garbled.to_str().unwrap()]);
    assert_eq!(code, 2);
    let (code, _, _) = blowup(&["gen-corpus", "--dim", "5"]);
    assert_eq!(code, 2);
}

#[test]
fn generated_corpus_round_trips_through_verify() {
    let dir = tempfile::tempdir().unwrap();
    let (code, corpus, _) = blowup(&["gen-corpus", "--dim", "2", "--max-deg", "3", "--count", "6", "--seed", "1"]);
    assert_eq!(code, 0);
    assert_eq!(corpus.lines().count(), 6);
    let path = dir.path().join("corpus.jsonl");
    std::fs::write(&path, &corpus).unwrap();
    let (code, from_file, _) = blowup(&["verify-itoh", "--input", path.to_str().unwrap(), "--format", "csv", "--seed", "1"]);
    assert_eq!(code, 0);
    let (_, generated, _) = blowup(&[
        "verify-itoh", "--dim", "2", "--max-deg", "3", "--count", "6", "--seed", "1", "--format", "csv",
    ]);
    assert_eq!(from_file, generated);
    assert_eq!(from_file.lines().count(), 7);
}
