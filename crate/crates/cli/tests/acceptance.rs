//! One PASS/FAIL line per acceptance criterion. Runs without the libtest
//! harness so the lines always print: `cargo test -p blowup-cli --test acceptance`.

use std::time::{Duration, Instant};

use blowup_cli::corpus::{generate_corpus, CorpusSpec};
use blowup_cli::report::write_json_lines;
use blowup_cli::runner::{run_analysis, CorpusRecord, RunOptions};
use blowup_core::{
    analyze_instance, hilbert_data, ideal_intersection, ideal_power, ideal_product, ideals_equal, integral_closure,
    is_integrally_closed, parse_generators, run_oracle_suite, AnalysisConfig, Classification, CmStatus, ExponentVector,
    FieldKind, Filtration, FiltrationConfig, FiltrationKind, GroebnerConfig, MonomialIdeal, OracleConfig, QIdeal, Rational,
    RingDescriptor, TableSize,
};

const SWEEP_SEED: u64 = 20;

fn q_ideal(vars: &[&str], gens: &[&str]) -> QIdeal {
    let ring = RingDescriptor::new::<Rational, _>(vars).unwrap();
    QIdeal::new(&ring, parse_generators(gens, &ring).unwrap()).unwrap()
}

struct Outcome {
    criterion: usize,
    name: &'static str,
    failures: Vec<String>,
    elapsed: Duration,
    limit: Option<Duration>,
}

impl Outcome {
    fn passed(&self) -> bool {
        self.failures.is_empty() && self.limit.is_none_or(|l| self.elapsed <= l)
    }
}

fn run(
    criterion: usize,
    name: &'static str,
    limit: Option<Duration>,
    body: impl FnOnce(&mut Vec<String>),
) -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    body(&mut failures);
    Outcome {
        criterion,
        name,
        failures,
        elapsed: start.elapsed(),
        limit,
    }
}

fn check(failures: &mut Vec<String>, ok: bool, what: impl Into<String>) {
    if !ok {
        failures.push(what.into());
    }
}

fn sweep_spec() -> CorpusSpec {
    CorpusSpec {
        dim: 3,
        max_degree: 5,
        count: Some(200),
        seed: SWEEP_SEED,
        field: FieldKind::Rational,
        require_normal: false,
    }
}

fn sweep_options() -> RunOptions {
    RunOptions {
        vars: sweep_spec().variables(),
        field: FieldKind::Rational,
        seed: SWEEP_SEED,
        jobs: std::thread::available_parallelism().map_or(2, |n| n.get()),
        timings: false,
    }
}

fn run_sweep() -> Vec<CorpusRecord> {
    let corpus = generate_corpus(&sweep_spec()).unwrap();
    run_analysis(&corpus.instances, &sweep_options(), &AnalysisConfig::default()).unwrap()
}

fn json_lines(records: &[CorpusRecord]) -> Vec<u8> {
    let mut out = Vec::new();
    write_json_lines(records, &mut out).unwrap();
    out
}

fn flagship(f: &mut Vec<String>) {
    let a = q_ideal(&["x", "y", "z"], &["x^2", "x*y", "x*z", "y^2", "y*z", "z^2"]);
    let r = analyze_instance(&a, 0, &AnalysisConfig::default()).unwrap();
    let e = r.hilbert_adic.as_ref().map(|h| h.e_ints());
    check(f, e.as_deref() == Some(&[8, 4, 0, 0][..]), format!("e = {e:?}"));
    // ℓ(A/m^{2n+2}) = C(2n+4, 3)
    if let Some(h) = &r.hilbert_adic {
        for n in 0..8u64 {
            let k = 2 * n + 4;
            let want = (k * (k - 1) * (k - 2) / 6) as i128;
            check(f, h.predict(n, 3) == want, format!("P({n}) = {} != {want}", h.predict(n, 3)));
        }
    }
    let v = &r.verdict;
    check(f, v.normality.as_ref().is_some_and(|n| n.is_normal() && n.checked_window >= 3), "normality");
    let depth = r.depth.as_ref();
    check(f, depth.is_some_and(|d| d.cm_status == CmStatus::Certified && d.cm), "cm");
    let red = r.reduction.as_ref();
    check(f, red.map(|x| x.reduction_number) == Some(1), format!("red = {:?}", red.map(|x| x.reduction_number)));
    check(f, red.map(|x| x.sigma.clone()) == Some(vec![4, 0]), format!("sigma = {:?}", red.map(|x| &x.sigma)));
    check(f, v.classification == Classification::VerifiedInstance, format!("{:?}", v.classification));
}

fn two_dimensional(f: &mut Vec<String>) {
    let a = q_ideal(&["x", "y"], &["x^2", "x*y", "y^2"]);
    let r = analyze_instance(&a, 0, &AnalysisConfig::default()).unwrap();
    let e = r.hilbert_adic.as_ref().map(|h| h.e_ints());
    check(f, e.as_deref().map(|e| &e[..4]) == Some(&[4, 1, 0, 0][..]), format!("e = {e:?}"));
    let sigma = r.reduction.as_ref().map(|x| x.sigma.clone());
    check(f, sigma == Some(vec![1, 0]), format!("sigma = {sigma:?}"));
    match &r.identities {
        Some(id) => {
            check(f, id.all_hold, "identities");
            for name in ["e1", "e2", "e3"] {
                check(
                    f,
                    id.checks.iter().any(|c| c.name.starts_with(name) && c.holds),
                    format!("identity for {name} missing or failing"),
                );
            }
        }
        None => f.push("no identity report".into()),
    }
    // a^2 ∩ c = c·a through Gröbner bases
    let c = q_ideal(&["x", "y"], &["x^2", "y^2"]);
    let g = GroebnerConfig::default();
    let lhs = ideal_intersection(&ideal_power(&a, 2, &g).unwrap(), &c, &g).unwrap();
    let rhs = ideal_product(&c, &a, &g).unwrap();
    check(f, ideals_equal(&lhs, &rhs, &g).unwrap(), "a^2 ∩ (x^2, y^2) != (x^2, y^2)·a");
}

fn closure_contrast(f: &mut Vec<String>) {
    let i = MonomialIdeal::from_exponents(2, &[&[2, 0], &[0, 2]]).unwrap();
    let want = MonomialIdeal::from_exponents(2, &[&[2, 0], &[1, 1], &[0, 2]]).unwrap();
    check(f, integral_closure(&i) == want, "closure");
    let (closed, witness) = is_integrally_closed(&i);
    check(f, !closed, "reported closed");
    check(f, witness == Some(ExponentVector::from_slice(&[1, 1])), format!("witness {witness:?}"));
    let a = q_ideal(&["x", "y"], &["x^2", "y^2"]);
    let cfg = FiltrationConfig::default();
    let mut adic = Filtration::new(FiltrationKind::Adic(a.clone()), &cfg).unwrap();
    let mut bar = Filtration::new(FiltrationKind::IntegralClosure(a), &cfg).unwrap();
    let h = hilbert_data(&mut adic, TableSize::Fixed(6), 2).unwrap();
    let hb = hilbert_data(&mut bar, TableSize::Fixed(6), 2).unwrap();
    check(f, h.hilbert[0] == 4 && hb.hilbert[0] == 3, format!("H(0) = {} vs {}", h.hilbert[0], hb.hilbert[0]));
}

fn sweep(records: &[CorpusRecord], f: &mut Vec<String>) {
    check(f, records.len() >= 200, format!("{} instances", records.len()));
    for r in records {
        match r.classification() {
            Classification::CounterexampleCandidate => f.push(format!("{}: {}", r.id, r.ideal)),
            Classification::Unresolved => f.push(format!("{} unresolved: {}", r.id, r.ideal)),
            _ => {}
        }
        if let Some(a) = &r.analysis {
            if a.verdict.theorem_applicable && a.depth.as_ref().is_none_or(|d| d.cm_status != CmStatus::Certified) {
                f.push(format!("{} applicable but cm not certified: {}", r.id, r.ideal));
            }
        } else {
            f.push(format!("{} failed: {:?}", r.id, r.error));
        }
    }
}

fn signs(records: &[CorpusRecord], f: &mut Vec<String>) {
    for r in records {
        let Some(a) = &r.analysis else { continue };
        match (&a.hilbert_adic, &a.hilbert_closure) {
            (Some(h), Some(hb)) => {
                let (e, eb) = (h.e_ints(), hb.e_ints());
                if e[1] < 0 || e[2] < 0 || eb[1] < 0 || eb[2] < 0 || eb[3] < 0 {
                    f.push(format!("{}: e = {e:?}, e* = {eb:?}", r.ideal));
                }
            }
            _ => f.push(format!("{}: missing Hilbert data", r.ideal)),
        }
        if a.inequalities.as_ref().is_none_or(|i| i.violations > 0) {
            f.push(format!("{}: inequality report", r.ideal));
        }
    }
}

fn oracles(f: &mut Vec<String>) {
    let report = run_oracle_suite(&OracleConfig {
        instances: 100,
        seed: 6,
        ..OracleConfig::default()
    })
    .unwrap();
    check(f, report.instances == 100, "instance count");
    for d in &report.disagreements {
        f.push(format!("{} {}: {}", d.suite, d.ideal, d.detail));
    }
}

fn veronese(records: &[CorpusRecord], f: &mut Vec<String>) {
    let cfg = FiltrationConfig::default();
    let ring = RingDescriptor::new::<Rational, _>(&["x", "y", "z"]).unwrap();
    let mut tested = 0;
    for r in records.iter().filter(|r| r.analysis.is_some()).take(20) {
        let gens: Vec<&str> = r.generators.iter().map(String::as_str).collect();
        let a = QIdeal::new(&ring, parse_generators(&gens, &ring).unwrap()).unwrap();
        let e0 = r.analysis.as_ref().unwrap().hilbert_adic.as_ref().map(|h| h.e_int(0));
        for l in [2u32, 3] {
            let kind = FiltrationKind::Veronese(Box::new(FiltrationKind::Adic(a.clone())), l);
            let got = Filtration::new(kind, &cfg)
                .and_then(|mut v| hilbert_data(&mut v, TableSize::Auto, 0))
                .map(|h| h.e_int(0));
            match (got, e0) {
                (Ok(g), Some(e0)) if g == (l as i64).pow(3) * e0 => {}
                (got, e0) => f.push(format!("{} l={l}: {got:?} vs {e0:?}", r.ideal)),
            }
        }
        tested += 1;
    }
    check(f, tested == 20, format!("{tested} instances"));
}

fn ratliff_rush(records: &[CorpusRecord], f: &mut Vec<String>) {
    for r in records {
        let Some(a) = &r.analysis else { continue };
        if a.verdict.normality.as_ref().is_some_and(|n| n.is_normal()) {
            match &a.rr_deviation {
                Some(dev) if dev.len() >= 5 && dev.iter().all(|&x| x == 0) => {}
                other => f.push(format!("{}: deviation {other:?}", r.ideal)),
            }
        }
        if a.rr_in_closure != Some(true) {
            f.push(format!("{}: ã ⊆ a* is {:?}", r.ideal, a.rr_in_closure));
        }
    }
}

fn power_reductions(records: &[CorpusRecord], f: &mut Vec<String>) {
    for r in records {
        let Some(a) = &r.analysis else { continue };
        let v = &a.verdict;
        if !v.theorem_applicable {
            continue;
        }
        let ns: Vec<u32> = v.power_reductions.iter().map(|p| p.n).collect();
        check(f, ns == [1, 2, 3], format!("{}: window {ns:?}", r.ideal));
        for p in &v.power_reductions {
            check(
                f,
                p.holds && p.reduction_number.is_some_and(|x| x <= 2),
                format!("{}: red(a^{}) = {:?}", r.ideal, p.n, p.reduction_number),
            );
        }
    }
}

fn main() {
    let mut outcomes = Vec::new();
    outcomes.push(run(1, "flagship (x,y,z)^2", Some(Duration::from_secs(10)), flagship));
    outcomes.push(run(2, "(x,y)^2 identities", Some(Duration::from_secs(2)), two_dimensional));
    outcomes.push(run(3, "closure contrast (x^2,y^2)", Some(Duration::from_secs(1)), closure_contrast));

    let start = Instant::now();
    let records = run_sweep();
    let sweep_time = start.elapsed();
    let mut o = run(4, "sweep of 200 ideals, d=3, deg<=5", Some(Duration::from_secs(600)), |f| sweep(&records, f));
    o.elapsed += sweep_time;
    outcomes.push(o);
    outcomes.push(run(5, "sign inequalities", None, |f| signs(&records, f)));
    outcomes.push(run(6, "oracle equivalence", None, oracles));
    outcomes.push(run(7, "Veronese scaling", None, |f| veronese(&records, f)));
    outcomes.push(run(8, "Ratliff-Rush on normal instances", None, |f| ratliff_rush(&records, f)));
    outcomes.push(run(9, "red(a^n) <= 2 for n = 1..3", None, |f| power_reductions(&records, f)));
    outcomes.push(run(10, "byte-identical rerun", None, |f| {
        let again = run_sweep();
        check(f, json_lines(&records) == json_lines(&again), "json-lines output differs");
    }));

    for o in &outcomes {
        println!(
            "{} criterion {:>2}  {:<36} {:>8.2}s{}",
            if o.passed() { "PASS" } else { "FAIL" },
            o.criterion,
            o.name,
            o.elapsed.as_secs_f64(),
            o.failures.first().map_or(String::new(), |x| format!("  ({x})"))
        );
    }
    let failed: Vec<_> = outcomes.iter().filter(|o| !o.passed()).collect();
    for o in &failed {
        for x in &o.failures {
            println!("  criterion {}: {x}", o.criterion);
        }
    }
    if !failed.is_empty() {
        eprintln!("{} criteria failed", failed.len());
        std::process::exit(1);
    }
}
