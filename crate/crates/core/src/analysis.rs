//! Minimal reductions, reduction numbers, σ-sequences, Cohen–Macaulay
//! certificates for the associated graded ring, and the per-instance verdict.
//!
//! For monomial `a` every length is computed inside `A/a^m` for a suitable
//! `m`, whose standard monomials form a basis. Ranks are taken modulo a prime:
//! over `Z/p` they are exact, over Q they are lower bounds for the true rank,
//! so the resulting lengths are upper bounds. Every positive certificate below
//! is arranged so that an upper bound meeting a lower bound proves equality.

use std::collections::HashMap;
use std::rc::Rc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::filtration::{AdicOrder, Filtration, FiltrationConfig, FiltrationKind};
use crate::groebner::GroebnerConfig;
use crate::hilbert::{binomial, hilbert_data, HilbertData, TableSize};
use crate::ideal::{
    artinian_quotient_length, ideal_intersection, ideal_power, ideal_product, ideal_sum, ideals_equal, Ideal,
};
use crate::linalg::{bareiss_rank, mod_rank, residue_i64, ModRank};
use crate::monomial::{ExponentVector, MonomialOrder};
use crate::monomial_ideal::MonomialIdeal;
use crate::newton::{default_normality_window, integral_closure, normality_report, normalized_covolume, NormalityReport};
use crate::poly::Polynomial;
use crate::ring::Ring;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct AnalysisConfig {
    pub filtration: FiltrationConfig,
    /// Generic coefficients are drawn from `-bound..=bound`.
    pub coefficient_bound: i64,
    pub reduction_attempts: u32,
    pub r_max: u32,
    pub superficial_attempts: u32,
    pub superficial_start: u32,
    /// Superficiality certificates are skipped when false.
    pub certify_superficial: bool,
    pub rr_window: u32,
    pub normality_window: Option<u32>,
    pub power_window: u32,
    /// Largest `l` for the depth probe of `G(a^l)`; zero disables it.
    pub huckaba_huneke_max: u32,
    /// The probe stops at the first `l` with `ℓ(A/a^l)` above this.
    pub huckaba_huneke_colength: u64,
    /// Gröbner fallback for Valabrega–Valla checks that fail modulo the rank prime.
    pub exact_fallback: bool,
    pub fallback_groebner: GroebnerConfig,
    /// Smallest prime field accepted for generic sampling.
    pub min_prime: u64,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            filtration: FiltrationConfig::default(),
            coefficient_bound: 500,
            reduction_attempts: 5,
            r_max: 10,
            superficial_attempts: 10,
            superficial_start: 2,
            certify_superficial: true,
            rr_window: 5,
            normality_window: None,
            power_window: 3,
            huckaba_huneke_max: 0,
            huckaba_huneke_colength: 400,
            exact_fallback: true,
            fallback_groebner: GroebnerConfig {
                max_pair_reductions: 5_000,
                max_basis_size: 2_000,
            },
            min_prime: 1000,
        }
    }
}

// ---------------------------------------------------------------------------
// standard monomials of powers

struct Staircase {
    monos: Vec<ExponentVector>,
    index: HashMap<ExponentVector, u32>,
}

impl Staircase {
    fn len(&self) -> usize {
        self.monos.len()
    }

    fn col(&self, v: &ExponentVector) -> Option<u32> {
        self.index.get(v).copied()
    }
}

/// Powers of a fixed m-primary monomial ideal and the staircases of `A/a^m`.
pub(crate) struct PowerTable {
    a: MonomialIdeal,
    order: AdicOrder,
    powers: Vec<MonomialIdeal>,
    stairs: HashMap<u32, Rc<Staircase>>,
}

impl PowerTable {
    pub(crate) fn new(a: &MonomialIdeal) -> Result<Self> {
        if a.is_unit() || !a.is_m_primary() {
            return Err(Error::NotMPrimary);
        }
        Ok(PowerTable {
            a: a.clone(),
            order: AdicOrder::new(a),
            powers: vec![MonomialIdeal::unit(a.nvars()), a.clone()],
            stairs: HashMap::new(),
        })
    }

    fn nvars(&self) -> usize {
        self.a.nvars()
    }

    fn power(&mut self, k: u32) -> &MonomialIdeal {
        while self.powers.len() <= k as usize {
            let next = self.powers.last().expect("a^0").product(&self.a);
            self.powers.push(next);
        }
        &self.powers[k as usize]
    }

    fn staircase(&mut self, m: u32) -> Result<Rc<Staircase>> {
        if let Some(s) = self.stairs.get(&m) {
            return Ok(s.clone());
        }
        let mut monos = if m == 0 {
            Vec::new()
        } else {
            self.power(m).standard_monomials()?
        };
        // largest monomial first, so pivots follow a term order
        let order = MonomialOrder::Grevlex;
        monos.sort_by(|x, y| order.compare(y, x));
        let index = monos.iter().enumerate().map(|(i, v)| (*v, i as u32)).collect();
        let s = Rc::new(Staircase { monos, index });
        self.stairs.insert(m, s.clone());
        Ok(s)
    }

    /// `ℓ(A/a^m)`.
    fn length(&mut self, m: u32) -> Result<u64> {
        Ok(self.staircase(m)?.len() as u64)
    }

    /// Monomials of `a^i` outside `a^m`.
    fn in_power_below(&mut self, i: u32, m: u32) -> Result<Vec<ExponentVector>> {
        let s = self.staircase(m)?;
        Ok(s.monos.iter().filter(|w| self.order.in_power(w, i)).copied().collect())
    }
}

// ---------------------------------------------------------------------------
// polynomials reduced modulo the rank prime

type ModPoly = Vec<(ExponentVector, u64)>;

fn to_mod_poly<F: Field>(f: &Polynomial<F>, p: u64) -> Result<ModPoly> {
    f.terms()
        .iter()
        .map(|(c, e)| {
            c.residue(p)
                .map(|r| (*e, r))
                .ok_or_else(|| Error::Precondition("coefficient denominator vanishes modulo the rank prime".into()))
        })
        .collect()
}

/// `y·w` restricted to the columns of `s`.
fn shifted_row(y: &ModPoly, w: &ExponentVector, s: &Staircase) -> Vec<(u32, u64)> {
    y.iter()
        .filter_map(|(e, c)| s.col(&e.mul(w)).map(|col| (col, *c)))
        .collect()
}

/// Coefficients of `y·g` on the minimal generators `cols`, i.e. the image in
/// `a^{r+1}/m·a^{r+1}`.
fn nakayama_rows(ys: &[ModPoly], gens_r: &[ExponentVector], cols: &HashMap<ExponentVector, u32>) -> Vec<Vec<(u32, u64)>> {
    let mut rows = Vec::with_capacity(ys.len() * gens_r.len());
    for y in ys {
        for g in gens_r {
            rows.push(
                y.iter()
                    .filter_map(|(e, c)| cols.get(&e.mul(g)).map(|&col| (col, *c)))
                    .collect(),
            );
        }
    }
    rows
}

fn column_index(gens: &[ExponentVector]) -> HashMap<ExponentVector, u32> {
    gens.iter().enumerate().map(|(i, g)| (*g, i as u32)).collect()
}

/// Lengths of quotients `A/(Σ y_k a^i + a^m)` for a fixed list of `y`.
struct Engine<'t> {
    table: &'t mut PowerTable,
    ys: Vec<ModPoly>,
    p: u64,
    memo: HashMap<(usize, u32, u32), u64>,
}

impl<'t> Engine<'t> {
    fn new(table: &'t mut PowerTable, ys: Vec<ModPoly>, p: u64) -> Self {
        Engine {
            table,
            ys,
            p,
            memo: HashMap::new(),
        }
    }

    /// `ℓ(A/((y_1..y_j)·a^i + a^m))`, an upper bound over Q.
    fn colength(&mut self, j: usize, i: u32, m: u32) -> Result<u64> {
        if let Some(&v) = self.memo.get(&(j, i, m)) {
            return Ok(v);
        }
        let s = self.table.staircase(m)?;
        let ws = if m == 0 { Vec::new() } else { self.table.in_power_below(i, m - 1)? };
        let mut rank = ModRank::new(s.len(), self.p);
        'outer: for y in &self.ys[..j] {
            for w in &ws {
                if rank.rank() == s.len() {
                    break 'outer;
                }
                rank.insert(&shifted_row(y, w, &s));
            }
        }
        let v = (s.len() - rank.rank()) as u64;
        self.memo.insert((j, i, m), v);
        Ok(v)
    }

    /// Whether `(y)·a^r + m·a^{r+1} = a^{r+1}` modulo the rank prime.
    fn spans_next_power(&mut self, r: u32) -> bool {
        let gens_r = self.table.power(r).generators().to_vec();
        let next = self.table.power(r + 1).generators().to_vec();
        let cols = column_index(&next);
        let rows = nakayama_rows(&self.ys, &gens_r, &cols);
        rows.len() >= next.len() && mod_rank(next.len(), &rows, self.p) == next.len()
    }

    /// `rank ψ_n + rank R_n = j·ℓ(A/a^{n-1})` for the map
    /// `ψ_n : (A/a^{n-1})^j → A/a^n, e_i ↦ y_i` and the Koszul relations
    /// `R_n`; equality gives `a^n ∩ (y_1..y_j) = (y_1..y_j)·a^{n-1}`.
    fn partial_vv(&mut self, j: usize, n: u32) -> Result<bool> {
        if n <= 1 {
            return Ok(true);
        }
        let s1 = self.table.staircase(n - 1)?;
        let s0 = self.table.staircase(n - 2)?;
        let sn = self.table.staircase(n)?;
        let mut psi = ModRank::new(sn.len(), self.p);
        for y in &self.ys[..j] {
            for w in &s1.monos {
                psi.insert(&shifted_row(y, w, &sn));
            }
        }
        let width = s1.len();
        let mut koszul = ModRank::new(j * width, self.p);
        let p = self.p;
        for i in 0..j {
            for k in i + 1..j {
                for s in &s0.monos {
                    let mut row: Vec<(u32, u64)> = shifted_row(&self.ys[k], s, &s1)
                        .into_iter()
                        .map(|(c, v)| (c + (i * width) as u32, v))
                        .collect();
                    row.extend(
                        shifted_row(&self.ys[i], s, &s1)
                            .into_iter()
                            .map(|(c, v)| (c + (k * width) as u32, (p - v) % p)),
                    );
                    koszul.insert(&row);
                }
            }
        }
        let total = psi.rank() + koszul.rank();
        if total > j * width {
            return Err(Error::Precondition("rank count exceeds the domain dimension".into()));
        }
        Ok(total == j * width)
    }
}

// ---------------------------------------------------------------------------
// sampling

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn sample_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, bound: i64) -> Vec<Vec<i64>> {
    (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_range(-bound..=bound)).collect())
        .collect()
}

fn combination<F: Field>(ring: &Ring, gens: &[ExponentVector], lambda: &[i64]) -> Polynomial<F> {
    let terms = lambda
        .iter()
        .zip(gens)
        .filter(|(l, _)| **l != 0)
        .map(|(l, g)| (F::from_i64(*l), *g))
        .collect();
    Polynomial::from_terms(ring, terms).expect("generators live in the ring")
}

fn mod_combination(gens: &[ExponentVector], lambda: &[i64], p: u64) -> ModPoly {
    lambda
        .iter()
        .zip(gens)
        .map(|(l, g)| (*g, residue_i64(*l, p)))
        .filter(|(_, c)| *c != 0)
        .collect()
}

fn check_field<F: Field>(cfg: &AnalysisConfig) -> Result<(u64, bool)> {
    let (p, exact) = F::rank_prime();
    if exact && p < cfg.min_prime {
        return Err(Error::Precondition(format!(
            "prime field of size {p} is too small for generic sampling (need at least {})",
            cfg.min_prime
        )));
    }
    Ok((p, exact))
}

fn monomial_base<F: Field>(a: &Ideal<F>) -> Result<MonomialIdeal> {
    a.as_monomial_ideal()
        .ok_or_else(|| Error::Precondition("this computation needs a monomial ideal".into()))
}

// ---------------------------------------------------------------------------
// superficial elements

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuperficialCertificate {
    /// `b_n` is computed for `n = start..start + b.len()`.
    pub start: u32,
    pub b: Vec<u64>,
    pub certified: bool,
    pub attempts: u32,
}

#[derive(Debug, Clone)]
pub struct SuperficialElement<F: Field> {
    pub element: Polynomial<F>,
    pub coefficients: Vec<i64>,
    pub certificate: SuperficialCertificate,
}

/// `b_n = ℓ(((a^{n+1} : x) ∩ a^c)/a^n)` for `n = c..c+window`, as the kernel
/// of multiplication by `x` from `a^c/a^n` to `A/a^{n+1}`. Over Q the
/// computed values are upper bounds, so zeros are exact.
fn b_sequence(table: &mut PowerTable, x: &ModPoly, start: u32, window: u32, p: u64) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for n in start..start + window {
        let domain = table.in_power_below(start, n)?;
        let target = table.staircase(n + 1)?;
        let mut rank = ModRank::new(target.len(), p);
        for w in &domain {
            rank.insert(&shifted_row(x, w, &target));
        }
        out.push((domain.len() - rank.rank()) as u64);
    }
    Ok(out)
}

fn certify_superficial(
    table: &mut PowerTable,
    x: &ModPoly,
    cfg: &AnalysisConfig,
    window: u32,
    p: u64,
    attempts: u32,
) -> Result<SuperficialCertificate> {
    let b = b_sequence(table, x, cfg.superficial_start, window, p)?;
    let certified = b.iter().all(|&v| v == 0);
    Ok(SuperficialCertificate {
        start: cfg.superficial_start,
        b,
        certified,
        attempts,
    })
}

/// A generic combination `x = Σ λ_i g_i` of the minimal generators of `a`,
/// certified on the window `n = c..c+window`.
pub fn sample_superficial_element<F: Field>(
    a: &Ideal<F>,
    seed: u64,
    window: u32,
    cfg: &AnalysisConfig,
) -> Result<SuperficialElement<F>> {
    if a.is_zero() {
        return Err(Error::Precondition("the zero ideal has no superficial elements".into()));
    }
    let m = monomial_base(a)?;
    let (p, _) = check_field::<F>(cfg)?;
    let mut table = PowerTable::new(&m)?;
    let mut rng = rng_for(seed, 1);
    let gens = m.generators().to_vec();
    let mut last = Vec::new();
    for attempt in 1..=cfg.superficial_attempts {
        let lambda = sample_matrix(&mut rng, 1, gens.len(), cfg.coefficient_bound).remove(0);
        let x = mod_combination(&gens, &lambda, p);
        let cert = certify_superficial(&mut table, &x, cfg, window, p, attempt)?;
        if cert.certified {
            return Ok(SuperficialElement {
                element: combination(a.ring(), &gens, &lambda),
                coefficients: lambda,
                certificate: cert,
            });
        }
        last = cert.b;
    }
    Err(Error::CertificationFailed {
        attempts: cfg.superficial_attempts as usize,
        last_window: last,
    })
}

// ---------------------------------------------------------------------------
// reductions

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionData {
    pub reduction_generators: Vec<String>,
    /// Rows `λ` with `y_k = Σ λ_{k,i} g_i` over the minimal generators of `a`.
    pub coefficients: Option<Vec<Vec<i64>>>,
    pub reduction_number: u32,
    /// `σ_i = ℓ(a^{i+1}/c·a^i)` for `i = 0..=reduction_number`.
    pub sigma: Vec<u64>,
    /// Whether every `σ_i` is known exactly (not only as an upper bound).
    pub sigma_exact: bool,
    /// Whether `c·a^{r-1} ≠ a^r` was confirmed exactly.
    pub minimality_certified: bool,
    pub rng_seed: u64,
    pub attempt: u32,
    pub prime: u64,
    pub superficial: Option<SuperficialCertificate>,
}

/// A reduction of a monomial ideal as used by the pipeline.
struct Reduction {
    ys: Vec<ModPoly>,
    lambda: Option<Vec<Vec<i64>>>,
    generators: Vec<String>,
    r: u32,
    attempt: u32,
    minimality_certified: bool,
}

/// Exact rank test `c·a^r + m·a^{r+1} = a^{r+1}` over Q.
fn spans_exactly<F: Field>(c: &[Polynomial<F>], table: &mut PowerTable, r: u32) -> Result<bool> {
    let gens_r = table.power(r).generators().to_vec();
    let next = table.power(r + 1).generators().to_vec();
    if c.len() * gens_r.len() < next.len() {
        return Ok(false);
    }
    let cols = column_index(&next);
    let mut rows = Vec::new();
    for y in c {
        let q: Vec<(crate::field::Rational, ExponentVector)> = y
            .terms()
            .iter()
            .map(|(coef, e)| (coef.to_rational().expect("characteristic zero"), *e))
            .collect();
        let den = q.iter().fold(BigInt::one(), |acc, (x, _)| acc.lcm(x.denom()));
        for g in &gens_r {
            let mut row = vec![BigInt::zero(); next.len()];
            for (x, e) in &q {
                if let Some(&col) = cols.get(&e.mul(g)) {
                    row[col as usize] = x.numer() * (&den / x.denom());
                }
            }
            rows.push(row);
        }
    }
    Ok(bareiss_rank(rows) == next.len())
}

/// Ascending search for `r` with `c·a^r = a^{r+1}`. Over Q the search result
/// is confirmed by an exact rank computation at `r - 1`.
fn reduction_number_of<F: Field>(
    c: &[Polynomial<F>],
    ys: &[ModPoly],
    table: &mut PowerTable,
    r_max: u32,
    p: u64,
    exact_field: bool,
) -> Result<Option<(u32, bool)>> {
    let mut engine = Engine::new(table, ys.to_vec(), p);
    let Some(mut r) = (0..=r_max).find(|&r| engine.spans_next_power(r)) else {
        return Ok(None);
    };
    if exact_field {
        return Ok(Some((r, true)));
    }
    while r > 0 && spans_exactly(c, table, r - 1)? {
        r -= 1;
    }
    Ok(Some((r, true)))
}

fn sample_reduction<F: Field>(
    ring: &Ring,
    table: &mut PowerTable,
    cfg: &AnalysisConfig,
    seed: u64,
) -> Result<Reduction> {
    let (p, exact) = check_field::<F>(cfg)?;
    let d = table.nvars();
    let gens = table.a.generators().to_vec();
    let mut rng = rng_for(seed, 0);
    for attempt in 1..=cfg.reduction_attempts {
        let lambda = sample_matrix(&mut rng, d, gens.len(), cfg.coefficient_bound);
        let polys: Vec<Polynomial<F>> = lambda.iter().map(|l| combination(ring, &gens, l)).collect();
        let ys: Vec<ModPoly> = lambda.iter().map(|l| mod_combination(&gens, l, p)).collect();
        if let Some((r, minimal)) = reduction_number_of(&polys, &ys, table, cfg.r_max, p, exact)? {
            return Ok(Reduction {
                ys,
                generators: polys.iter().map(|f| f.to_string()).collect(),
                lambda: Some(lambda),
                r,
                attempt,
                minimality_certified: minimal,
            });
        }
    }
    Err(Error::NoReductionFound {
        r_max: cfg.r_max as usize,
        attempts: cfg.reduction_attempts as usize,
    })
}

fn given_reduction<F: Field>(c: &Ideal<F>, table: &mut PowerTable, cfg: &AnalysisConfig) -> Result<Reduction> {
    let (p, exact) = F::rank_prime();
    for f in c.generators() {
        if !f.terms().iter().all(|(_, e)| table.a.contains(e)) {
            return Err(Error::Precondition(format!("{f} does not lie in the ideal")));
        }
    }
    let ys = c.generators().iter().map(|f| to_mod_poly(f, p)).collect::<Result<Vec<_>>>()?;
    match reduction_number_of(c.generators(), &ys, table, cfg.r_max, p, exact)? {
        Some((r, minimal)) => Ok(Reduction {
            ys,
            lambda: None,
            generators: c.generators().iter().map(|f| f.to_string()).collect(),
            r,
            attempt: 0,
            minimality_certified: minimal,
        }),
        None => Err(Error::NotAReduction { r_max: cfg.r_max as usize }),
    }
}

/// `σ_i = ℓ(A/(c·a^i + a^{r+1})) - ℓ(A/a^{i+1})`; `c·a^i ⊇ a^{r+1}` for `i ≤ r`.
fn sigma_of(table: &mut PowerTable, red: &Reduction, p: u64) -> Result<Vec<u64>> {
    let r = red.r;
    let lens: Vec<u64> = (1..=r + 1).map(|m| table.length(m)).collect::<Result<_>>()?;
    let mut engine = Engine::new(table, red.ys.clone(), p);
    let d = red.ys.len();
    let mut sigma = Vec::new();
    for i in 0..r {
        let l = engine.colength(d, i, r + 1)?;
        sigma.push(l - lens[i as usize]);
    }
    sigma.push(0);
    Ok(sigma)
}

/// `d` generic combinations of the generators of `a` forming a reduction.
pub fn minimal_reduction<F: Field>(a: &Ideal<F>, seed: u64, cfg: &AnalysisConfig) -> Result<ReductionData> {
    let m = monomial_base(a)?;
    let mut table = PowerTable::new(&m)?;
    let red = sample_reduction::<F>(a.ring(), &mut table, cfg, seed)?;
    let (p, exact) = F::rank_prime();
    let sigma = sigma_of(&mut table, &red, p)?;
    let superficial = if cfg.certify_superficial {
        Some(certify_superficial(&mut table, &red.ys[0], cfg, red.r + 3, p, red.attempt)?)
    } else {
        None
    };
    Ok(ReductionData {
        reduction_generators: red.generators,
        coefficients: red.lambda,
        reduction_number: red.r,
        sigma,
        sigma_exact: exact,
        minimality_certified: red.minimality_certified,
        rng_seed: seed,
        attempt: red.attempt,
        prime: p,
        superficial,
    })
}

/// Reduction data for a given reduction `c` of a monomial ideal.
pub fn reduction_data<F: Field>(a: &Ideal<F>, c: &Ideal<F>, cfg: &AnalysisConfig) -> Result<ReductionData> {
    let m = monomial_base(a)?;
    let mut table = PowerTable::new(&m)?;
    let red = given_reduction(c, &mut table, cfg)?;
    let (p, exact) = F::rank_prime();
    let sigma = sigma_of(&mut table, &red, p)?;
    Ok(ReductionData {
        reduction_generators: red.generators,
        coefficients: None,
        reduction_number: red.r,
        sigma,
        sigma_exact: exact,
        minimality_certified: red.minimality_certified,
        rng_seed: 0,
        attempt: 0,
        prime: p,
        superficial: None,
    })
}

/// `min{r : c·a^r = a^{r+1}}` for a reduction `c ⊆ a`, locally at the origin.
pub fn reduction_number<F: Field>(a: &Ideal<F>, c: &Ideal<F>, cfg: &AnalysisConfig) -> Result<u32> {
    match a.as_monomial_ideal() {
        Some(m) => {
            let mut table = PowerTable::new(&m)?;
            Ok(given_reduction(c, &mut table, cfg)?.r)
        }
        None => reduction_number_groebner(a, c, cfg),
    }
}

/// `c·a^r + m·a^{r+1} = a^{r+1}` by Gröbner bases; both sides are m-primary,
/// so the global comparison decides the local one.
fn reduction_number_groebner<F: Field>(a: &Ideal<F>, c: &Ideal<F>, cfg: &AnalysisConfig) -> Result<u32> {
    let g = &cfg.filtration.groebner;
    let ring = a.ring();
    let maximal = Ideal::new(ring, (0..ring.nvars()).map(|i| Polynomial::variable(ring, i)).collect())?;
    let mut ar = Ideal::unit(ring);
    for r in 0..=cfg.r_max {
        let next = ideal_product(&ar, a, g)?;
        let lhs = ideal_sum(&ideal_product(c, &ar, g)?, &ideal_product(&maximal, &next, g)?, g)?;
        if ideals_equal(&lhs, &next, g)? {
            return Ok(r);
        }
        ar = next;
    }
    Err(Error::NotAReduction { r_max: cfg.r_max as usize })
}

/// `σ_i = ℓ(a^{i+1}/c·a^i)` for `i = 0..=red`.
pub fn sigma_sequence<F: Field>(a: &Ideal<F>, c: &Ideal<F>, cfg: &AnalysisConfig) -> Result<Vec<u64>> {
    match a.as_monomial_ideal() {
        Some(m) => {
            let mut table = PowerTable::new(&m)?;
            let red = given_reduction(c, &mut table, cfg)?;
            let (p, _) = F::rank_prime();
            sigma_of(&mut table, &red, p)
        }
        None => {
            let g = &cfg.filtration.groebner;
            let r = reduction_number_groebner(a, c, cfg)?;
            let top = ideal_power(a, r + 1, g)?;
            let mut out = Vec::new();
            for i in 0..=r {
                let ai = ideal_power(a, i, g)?;
                let ca = ideal_sum(&ideal_product(c, &ai, g)?, &top, g)?;
                let next = ideal_power(a, i + 1, g)?;
                out.push(artinian_quotient_length(&ca, g)? - artinian_quotient_length(&next, g)?);
            }
            Ok(out)
        }
    }
}

// ---------------------------------------------------------------------------
// depth and the Cohen–Macaulay certificate

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckStatus {
    Pass,
    Fail,
    Unresolved,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckMethod {
    /// Ranks modulo a prime certify a pass; a failure is only evidence.
    ModularRank,
    /// Ranks over the coefficient field itself.
    FieldRank,
    Groebner,
    ImpliedByCm,
    BudgetExceeded,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VvEntry {
    pub j: usize,
    pub n: u32,
    pub status: CheckStatus,
    pub method: CheckMethod,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CmStatus {
    Certified,
    Refuted,
    /// Fails modulo the rank prime; not decided exactly.
    ModularFailure,
    Unresolved,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepthReport {
    /// All Ratliff–Rush deviations vanish on the window.
    pub depth_ge1: bool,
    pub rr_deviation: Vec<u64>,
    /// `a^n ∩ (y_1..y_j) = (y_1..y_j)·a^{n-1}` for `j = 1..d`, `n = 1..=red+1`.
    pub vv_certificate: Vec<VvEntry>,
    pub cm: bool,
    pub cm_status: CmStatus,
    pub depth_lower_bound: usize,
    pub depth_upper_bound: usize,
    pub witnesses: Vec<VvEntry>,
    pub rationale: String,
}

const VV_RATIONALE: &str = "for n > red+1, a^n = c·a^(n-1) makes the j = d identity automatic; \
entries with j < d are checked on the window n <= red+1 only";

struct DepthInput<'a, F: Field> {
    ring: &'a Ring,
    reduction: &'a Reduction,
    e0: u64,
    rr_deviation: Vec<u64>,
    polys: Vec<Polynomial<F>>,
    fallback: bool,
}

fn depth_report<F: Field>(table: &mut PowerTable, input: DepthInput<'_, F>, cfg: &AnalysisConfig) -> Result<DepthReport> {
    let (p, exact) = F::rank_prime();
    let red = input.reduction;
    let d = red.ys.len();
    let r = red.r;
    let base_method = if exact { CheckMethod::FieldRank } else { CheckMethod::ModularRank };
    let lens: Vec<u64> = (0..=r + 1).map(|m| table.length(m)).collect::<Result<_>>()?;
    let mut entries: Vec<VvEntry> = Vec::new();
    {
        let mut engine = Engine::new(table, red.ys.clone(), p);
        for n in 1..=r + 1 {
            let lhs = lens[n as usize] + input.e0 - engine.colength(d, 0, n)?;
            let rhs = engine.colength(d, n - 1, r + 1)?;
            if lhs > rhs {
                return Err(Error::Precondition(format!("length sandwich violated at n = {n}")));
            }
            entries.push(VvEntry {
                j: d,
                n,
                status: if lhs == rhs { CheckStatus::Pass } else { CheckStatus::Fail },
                method: base_method,
                witness: None,
            });
        }
        for j in 1..d {
            for n in 1..=r + 1 {
                let pass = engine.partial_vv(j, n)?;
                entries.push(VvEntry {
                    j,
                    n,
                    status: if pass { CheckStatus::Pass } else { CheckStatus::Fail },
                    method: base_method,
                    witness: None,
                });
            }
        }
    }

    // exact decision for modular failures in the top row
    if !exact && input.fallback {
        let a = Ideal::from_monomial_ideal(input.ring, &table.a)?;
        for e in entries.iter_mut().filter(|e| e.j == d && e.status == CheckStatus::Fail) {
            match exact_vv::<F>(&a, table, &input.polys, e.n, r, &cfg.fallback_groebner) {
                Ok(None) => {
                    e.status = CheckStatus::Pass;
                    e.method = CheckMethod::Groebner;
                }
                Ok(Some(w)) => {
                    e.method = CheckMethod::Groebner;
                    e.witness = Some(w);
                }
                Err(err) if err.is_resource() => {
                    e.status = CheckStatus::Unresolved;
                    e.method = CheckMethod::BudgetExceeded;
                }
                Err(err) => return Err(err),
            }
        }
    }

    let top: Vec<&VvEntry> = entries.iter().filter(|e| e.j == d).collect();
    let exact_failure = |e: &&VvEntry| {
        e.status == CheckStatus::Fail && matches!(e.method, CheckMethod::FieldRank | CheckMethod::Groebner)
    };
    let depth_ge1 = input.rr_deviation.iter().all(|&x| x == 0);
    let cm_status = if top.iter().all(|e| e.status == CheckStatus::Pass) {
        CmStatus::Certified
    } else if top.iter().any(exact_failure) || !depth_ge1 {
        CmStatus::Refuted
    } else if top.iter().any(|e| e.status == CheckStatus::Unresolved) {
        CmStatus::Unresolved
    } else {
        CmStatus::ModularFailure
    };
    let cm = cm_status == CmStatus::Certified;
    if cm {
        for e in entries.iter_mut().filter(|e| e.status != CheckStatus::Pass) {
            e.status = CheckStatus::Pass;
            e.method = CheckMethod::ImpliedByCm;
        }
    }
    if cm && !depth_ge1 {
        return Err(Error::Precondition(
            "inconsistent depth probes: Cohen-Macaulay certificate with a nonzero Ratliff-Rush deviation".into(),
        ));
    }
    let lower = (1..=d)
        .take_while(|&j| entries.iter().filter(|e| e.j == j).all(|e| e.status == CheckStatus::Pass))
        .last()
        .unwrap_or(0);
    let upper = if !depth_ge1 {
        0
    } else if cm_status == CmStatus::Refuted {
        d - 1
    } else {
        d
    };
    let witnesses = entries.iter().filter(|e| e.status != CheckStatus::Pass).cloned().collect();
    Ok(DepthReport {
        depth_ge1,
        rr_deviation: input.rr_deviation,
        vv_certificate: entries,
        cm,
        cm_status,
        depth_lower_bound: lower,
        depth_upper_bound: upper,
        witnesses,
        rationale: VV_RATIONALE.into(),
    })
}

/// Exact check of `a^n ∩ c = c·a^{n-1}` modulo `a^{r+1} ⊆ c`; returns a
/// witness in the intersection outside the product when it fails.
fn exact_vv<F: Field>(
    a: &Ideal<F>,
    table: &mut PowerTable,
    c: &[Polynomial<F>],
    n: u32,
    r: u32,
    g: &GroebnerConfig,
) -> Result<Option<String>> {
    let ring = a.ring();
    let top = Ideal::from_monomial_ideal(ring, table.power(r + 1))?;
    let an = Ideal::from_monomial_ideal(ring, table.power(n))?;
    let an1 = Ideal::from_monomial_ideal(ring, table.power(n - 1))?;
    let c_ideal = Ideal::new(ring, c.to_vec())?;
    let c_top = ideal_sum(&c_ideal, &top, g)?;
    let meet = ideal_intersection(&an, &c_top, g)?;
    let prod = ideal_sum(&ideal_product(&c_ideal, &an1, g)?, &top, g)?;
    let gb = prod.groebner_basis(g)?;
    for f in meet.generators() {
        if !gb.contains(f)? {
            return Ok(Some(f.to_string()));
        }
    }
    let _ = a;
    Ok(None)
}

/// Valabrega–Valla table for the reduction `c` of a monomial ideal.
pub fn valabrega_valla_certificate<F: Field>(
    a: &Ideal<F>,
    reduction: &ReductionData,
    cfg: &AnalysisConfig,
) -> Result<DepthReport> {
    let m = monomial_base(a)?;
    let ring = a.ring();
    let mut table = PowerTable::new(&m)?;
    let polys = reduction
        .reduction_generators
        .iter()
        .map(|s| crate::parse::parse_polynomial::<F>(s, ring))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let c = Ideal::new(ring, polys.clone())?;
    let red = given_reduction(&c, &mut table, cfg)?;
    let mut adic = Filtration::new(FiltrationKind::Adic(a.clone()), &cfg.filtration)?;
    let e0 = hilbert_data(&mut adic, TableSize::Auto, 0)?.e_int(0) as u64;
    let rr = crate::filtration::rr_deviation_sequence(a, cfg.rr_window, &cfg.filtration)?;
    depth_report(
        &mut table,
        DepthInput {
            ring,
            reduction: &red,
            e0,
            rr_deviation: rr,
            polys,
            fallback: cfg.exact_fallback,
        },
        cfg,
    )
}

// ---------------------------------------------------------------------------
// coefficient identities

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub name: String,
    pub lhs: i64,
    pub rhs: i64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sigma2Consequence {
    pub sigma2_zero: bool,
    /// `a^3 = c·a^2`, read off the reduction number.
    pub cube_reduced: bool,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub hypothesis: String,
    pub sigma: Vec<u64>,
    pub e: Vec<i64>,
    pub checks: Vec<IdentityCheck>,
    pub h: Vec<i64>,
    pub h_predicted: Vec<i64>,
    pub h_shape_holds: bool,
    pub sigma2: Option<Sigma2Consequence>,
    pub all_hold: bool,
}

fn trim(mut v: Vec<i64>) -> Vec<i64> {
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
    v
}

/// Compares `e_1, e_2, e_3` with `Σσ_i, Σ iσ_i, Σ C(i,2)σ_i` and the
/// h-polynomial with `ℓ(A/a) + Σ (σ_{i-1} - σ_i) t^i`.
fn identity_report(
    hypothesis: String,
    hilbert: &HilbertData,
    sigma: &[u64],
    colength_a: u64,
    reduction_number: u32,
) -> IdentityReport {
    let e: Vec<i64> = (0..4).map(|i| hilbert.e_int(i)).collect();
    let sums: Vec<i64> = (1..4)
        .map(|k| {
            sigma
                .iter()
                .enumerate()
                .map(|(i, &s)| binomial(i as u64, k as u64 - 1) as i64 * s as i64)
                .sum()
        })
        .collect();
    let names = ["e1 = sum sigma_i", "e2 = sum i*sigma_i", "e3 = sum C(i,2)*sigma_i"];
    let checks: Vec<IdentityCheck> = (0..3)
        .map(|k| IdentityCheck {
            name: names[k].into(),
            lhs: e[k + 1],
            rhs: sums[k],
            holds: e[k + 1] == sums[k],
        })
        .collect();
    let mut predicted = vec![colength_a as i64];
    for i in 1..=sigma.len() {
        let prev = sigma[i - 1] as i64;
        let cur = sigma.get(i).map_or(0, |&s| s as i64);
        predicted.push(prev - cur);
    }
    let predicted = trim(predicted);
    let h = trim(hilbert.h.clone());
    let h_shape_holds = predicted == h;
    let sigma2 = (e[3] == 0).then(|| {
        let sigma2_zero = sigma.get(2).is_none_or(|&s| s == 0);
        let cube_reduced = reduction_number <= 2;
        Sigma2Consequence {
            sigma2_zero,
            cube_reduced,
            holds: sigma2_zero && cube_reduced,
        }
    });
    let all_hold = checks.iter().all(|c| c.holds) && h_shape_holds && sigma2.as_ref().is_none_or(|s| s.holds);
    IdentityReport {
        hypothesis,
        sigma: sigma.to_vec(),
        e,
        checks,
        h: hilbert.h.clone(),
        h_predicted: predicted,
        h_shape_holds,
        sigma2,
        all_hold,
    }
}

/// Depth hypothesis under which the identities are asserted: `depth G ≥ d-1`.
fn identity_hypothesis(d: usize, depth: &DepthReport) -> std::result::Result<String, String> {
    match d {
        0 | 1 => Ok("d <= 1: no depth condition".into()),
        2 if depth.depth_ge1 => Ok(format!(
            "depth G >= 1: Ratliff-Rush deviation vanishes for n = 1..{}",
            depth.rr_deviation.len()
        )),
        2 => Err("depth G >= 1 not verified: nonzero Ratliff-Rush deviation".into()),
        _ if depth.depth_lower_bound >= d - 1 => Ok(format!(
            "depth G >= {}: Valabrega-Valla table with j <= {} passes",
            d - 1,
            d - 1
        )),
        _ => Err(format!("depth G >= {} not verified by the Valabrega-Valla table", d - 1)),
    }
}

/// The coefficient identities for a monomial ideal, with a freshly sampled reduction.
pub fn coefficient_identities<F: Field>(a: &Ideal<F>, seed: u64, cfg: &AnalysisConfig) -> Result<IdentityReport> {
    let analysis = analyze_instance(a, seed, cfg)?;
    if let Some(report) = analysis.identities {
        return Ok(report);
    }
    let reason = analysis
        .errors
        .iter()
        .find(|e| e.stage == "identities")
        .map(|e| e.message.clone())
        .unwrap_or_else(|| "identities were not evaluated".into());
    Err(Error::HypothesisNotVerified(reason))
}

// ---------------------------------------------------------------------------
// sign inequalities and powers

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignCheck {
    pub name: String,
    pub value: i64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerReduction {
    pub n: u32,
    /// Smallest `r <= bound` found for a generic reduction of `a^n`.
    pub reduction_number: Option<u32>,
    pub bound: u32,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub e: Vec<i64>,
    pub e_closure: Vec<i64>,
    pub checks: Vec<SignCheck>,
    /// In two variables with `e_2 = 0`: `red(a^n) <= 1` on the window.
    pub narita: Option<Vec<PowerReduction>>,
    pub violations: usize,
}

/// `red(a^n) <= bound` via a generic reduction of `a^n`, certified by rank.
fn power_reduction<F: Field>(
    table: &mut PowerTable,
    n: u32,
    bound: u32,
    cfg: &AnalysisConfig,
    seed: u64,
) -> Result<PowerReduction> {
    let (p, _) = check_field::<F>(cfg)?;
    let d = table.nvars();
    let gens = table.power(n).generators().to_vec();
    let mut rng = rng_for(seed, 10 + n as u64);
    let mut best: Option<u32> = None;
    for _ in 0..cfg.reduction_attempts {
        let lambda = sample_matrix(&mut rng, d, gens.len(), cfg.coefficient_bound);
        let ys: Vec<ModPoly> = lambda.iter().map(|l| mod_combination(&gens, l, p)).collect();
        for r in 0..=bound {
            let gens_r = table.power(n * r).generators().to_vec();
            let next = table.power(n * (r + 1)).generators().to_vec();
            let rows = nakayama_rows(&ys, &gens_r, &column_index(&next));
            if rows.len() >= next.len() && mod_rank(next.len(), &rows, p) == next.len() {
                best = Some(best.map_or(r, |b: u32| b.min(r)));
                break;
            }
        }
        if best.is_some() {
            break;
        }
    }
    Ok(PowerReduction {
        n,
        reduction_number: best,
        bound,
        holds: best.is_some(),
    })
}

fn sign_checks(e: &[i64], e_closure: &[i64]) -> Vec<SignCheck> {
    let mut out = Vec::new();
    for (name, v) in [("e1 >= 0", e[1]), ("e2 >= 0", e[2])] {
        out.push(SignCheck {
            name: name.into(),
            value: v,
            holds: v >= 0,
        });
    }
    for (name, v) in [("e1* >= 0", e_closure[1]), ("e2* >= 0", e_closure[2]), ("e3* >= 0", e_closure[3])] {
        out.push(SignCheck {
            name: name.into(),
            value: v,
            holds: v >= 0,
        });
    }
    out
}

fn coefficients<F: Field>(kind: FiltrationKind<F>, cfg: &AnalysisConfig) -> Result<HilbertData> {
    let mut f = Filtration::new(kind, &cfg.filtration)?;
    hilbert_data(&mut f, TableSize::Auto, 3)
}

/// Sign conditions on adic and closure coefficients of a monomial ideal.
pub fn itoh_inequalities<F: Field>(a: &Ideal<F>, seed: u64, cfg: &AnalysisConfig) -> Result<InequalityReport> {
    let m = monomial_base(a)?;
    let mut table = PowerTable::new(&m)?;
    let adic = coefficients(FiltrationKind::Adic(a.clone()), cfg)?;
    let closure = coefficients(FiltrationKind::IntegralClosure(a.clone()), cfg)?;
    inequality_report::<F>(&mut table, &adic, &closure, cfg, seed)
}

fn inequality_report<F: Field>(
    table: &mut PowerTable,
    adic: &HilbertData,
    closure: &HilbertData,
    cfg: &AnalysisConfig,
    seed: u64,
) -> Result<InequalityReport> {
    let e: Vec<i64> = (0..4).map(|i| adic.e_int(i)).collect();
    let e_closure: Vec<i64> = (0..4).map(|i| closure.e_int(i)).collect();
    let checks = sign_checks(&e, &e_closure);
    let narita = if table.nvars() == 2 && e[2] == 0 {
        Some(
            (1..=cfg.power_window)
                .map(|n| power_reduction::<F>(table, n, 1, cfg, seed))
                .collect::<Result<Vec<_>>>()?,
        )
    } else {
        None
    };
    let violations = checks.iter().filter(|c| !c.holds).count()
        + narita.as_ref().map_or(0, |v| v.iter().filter(|p| !p.holds).count());
    Ok(InequalityReport {
        e,
        e_closure,
        checks,
        narita,
        violations,
    })
}

// ---------------------------------------------------------------------------
// verdict

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Classification {
    VerifiedInstance,
    VacuousInstance,
    #[serde(rename = "COUNTEREXAMPLE-CANDIDATE")]
    CounterexampleCandidate,
    Unresolved,
}

impl Classification {
    pub fn as_str(&self) -> &'static str {
        match self {
            Classification::VerifiedInstance => "VerifiedInstance",
            Classification::VacuousInstance => "VacuousInstance",
            Classification::CounterexampleCandidate => "COUNTEREXAMPLE-CANDIDATE",
            Classification::Unresolved => "Unresolved",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ItohVerdict {
    pub normality: Option<NormalityReport>,
    pub e: Vec<i64>,
    /// Normal on the checked window and `e_3 = 0`.
    pub theorem_applicable: bool,
    pub conclusion_holds: Option<bool>,
    pub classification: Classification,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unresolved_stage: Option<String>,
    /// `red(a^n) <= 2` on the power window, for applicable instances.
    pub power_reductions: Vec<PowerReduction>,
    /// `a^2 ∩ c = c·a`, recorded when `a` is integrally closed.
    pub integrally_closed_identity: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageError {
    pub stage: String,
    pub message: String,
    pub resource: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepthProbe {
    pub l: u32,
    pub reduction_number: u32,
    pub depth_lower_bound: usize,
}

/// Everything computed for one ideal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceAnalysis {
    pub nvars: usize,
    pub seed: u64,
    pub hilbert_adic: Option<HilbertData>,
    pub hilbert_closure: Option<HilbertData>,
    pub rr_deviation: Option<Vec<u64>>,
    /// `ã ⊆ a*`.
    pub rr_in_closure: Option<bool>,
    /// `e_0` as `d!` times the covolume of the Newton polyhedron.
    pub e0_volume: Option<u64>,
    pub reduction: Option<ReductionData>,
    pub depth: Option<DepthReport>,
    pub identities: Option<IdentityReport>,
    pub inequalities: Option<InequalityReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub huckaba_huneke: Option<Vec<DepthProbe>>,
    pub verdict: ItohVerdict,
    pub errors: Vec<StageError>,
}

struct Stages {
    errors: Vec<StageError>,
}

impl Stages {
    fn run<T>(&mut self, stage: &str, f: impl FnOnce() -> Result<T>) -> Option<T> {
        match f() {
            Ok(v) => Some(v),
            Err(e) => {
                self.errors.push(StageError {
                    stage: stage.into(),
                    message: e.to_string(),
                    resource: e.is_resource(),
                });
                None
            }
        }
    }

    fn failed(&self, stage: &str) -> bool {
        self.errors.iter().any(|e| e.stage == stage)
    }
}

/// The full pipeline for an m-primary monomial ideal in at most three variables.
/// Stage failures are recorded, never propagated, except for invalid input.
pub fn analyze_instance<F: Field>(a: &Ideal<F>, seed: u64, cfg: &AnalysisConfig) -> Result<InstanceAnalysis> {
    let m = monomial_base(a)?;
    let d = m.nvars();
    if d == 0 || d > 3 {
        return Err(Error::Precondition(format!("verdicts need 1 to 3 variables, got {d}")));
    }
    check_field::<F>(cfg)?;
    let mut table = PowerTable::new(&m)?;
    let ring = a.ring().clone();
    let (p, exact) = F::rank_prime();
    let mut st = Stages { errors: Vec::new() };

    let window = cfg.normality_window.unwrap_or_else(|| default_normality_window(d));
    let normality = st.run("normality", || normality_report(&m, window));
    let adic = st.run("hilbert-adic", || coefficients(FiltrationKind::Adic(a.clone()), cfg));
    let closure = st.run("hilbert-closure", || {
        coefficients(FiltrationKind::IntegralClosure(a.clone()), cfg)
    });
    let rr = st.run("ratliff-rush", || {
        crate::filtration::rr_deviation_sequence(a, cfg.rr_window, &cfg.filtration)
    });
    let rr_in_closure = st.run("ratliff-rush-closure", || {
        let rr1 = crate::filtration::ratliff_rush_closure(a, 1, &cfg.filtration)?;
        let rr1 = rr1.as_monomial_ideal().expect("monomial");
        Ok(integral_closure(&m).contains_ideal(&rr1))
    });
    let e0_volume = st.run("volume", || {
        let v = normalized_covolume(&m)?;
        match &adic {
            Some(h) if h.e_int(0) as u64 != v => Err(Error::Precondition(format!(
                "multiplicity {} disagrees with the Newton covolume {v}",
                h.e_int(0)
            ))),
            _ => Ok(v),
        }
    });
    let inequalities = match (&adic, &closure) {
        (Some(h), Some(hc)) => st.run("inequalities", || inequality_report::<F>(&mut table, h, hc, cfg, seed)),
        _ => None,
    };

    // the exact fallback only matters where the verdict depends on it
    let applicable = normality.as_ref().is_some_and(|n| n.is_normal()) && adic.as_ref().is_some_and(|h| h.e_int(3) == 0);
    let red = st.run("reduction", || sample_reduction::<F>(&ring, &mut table, cfg, seed));
    let mut reduction_data = None;
    let mut depth = None;
    if let Some(red) = &red {
        let sigma = st.run("sigma", || sigma_of(&mut table, red, p));
        let superficial = if cfg.certify_superficial {
            st.run("superficial", || {
                certify_superficial(&mut table, &red.ys[0], cfg, red.r + 3, p, red.attempt)
            })
        } else {
            None
        };
        if let Some(sigma) = sigma {
            let sigma_sum: i64 = sigma.iter().map(|&s| s as i64).sum();
            let sigma_exact = exact || adic.as_ref().is_some_and(|h| h.e_int(1) == sigma_sum);
            reduction_data = Some(ReductionData {
                reduction_generators: red.generators.clone(),
                coefficients: red.lambda.clone(),
                reduction_number: red.r,
                sigma,
                sigma_exact,
                minimality_certified: red.minimality_certified,
                rng_seed: seed,
                attempt: red.attempt,
                prime: p,
                superficial,
            });
        }
        if let (Some(h), Some(rr)) = (&adic, &rr) {
            depth = st.run("valabrega-valla", || {
                let polys = red
                    .lambda
                    .as_ref()
                    .expect("sampled")
                    .iter()
                    .map(|l| combination::<F>(&ring, m.generators(), l))
                    .collect();
                depth_report(
                    &mut table,
                    DepthInput {
                        ring: &ring,
                        reduction: red,
                        e0: h.e_int(0) as u64,
                        rr_deviation: rr.clone(),
                        polys,
                        fallback: cfg.exact_fallback && applicable,
                    },
                    cfg,
                )
            });
        }
    }

    let identities = match (&adic, &reduction_data, &depth) {
        (Some(h), Some(rd), Some(dr)) => st.run("identities", || match identity_hypothesis(d, dr) {
            Ok(hyp) => Ok(identity_report(hyp, h, &rd.sigma, table.length(1)?, rd.reduction_number)),
            Err(reason) => Err(Error::HypothesisNotVerified(reason)),
        }),
        _ => None,
    };

    let huckaba_huneke = if cfg.huckaba_huneke_max > 0 {
        st.run("huckaba-huneke", || {
            let mut probes = Vec::new();
            for l in 1..=cfg.huckaba_huneke_max {
                let al = m.power(l);
                if al.staircase_length()? > cfg.huckaba_huneke_colength {
                    break;
                }
                probes.push(depth_probe::<F>(&ring, &al, l, cfg, seed)?);
            }
            Ok(probes)
        })
    } else {
        None
    };

    // verdict
    let normal = normality.as_ref().map(|n| n.is_normal());
    let e: Vec<i64> = adic.as_ref().map(|h| (0..4).map(|i| h.e_int(i)).collect()).unwrap_or_default();
    let theorem_applicable = normal == Some(true) && e.get(3) == Some(&0);
    let cm_status = depth.as_ref().map(|dr| dr.cm_status);
    let conclusion_holds = match cm_status {
        Some(CmStatus::Certified) => Some(true),
        Some(CmStatus::Refuted | CmStatus::ModularFailure) => Some(false),
        _ => None,
    };
    let integrally_closed_identity = match (&depth, &normality) {
        (Some(dr), Some(nr)) if nr.failures.iter().all(|f| f.n != 1) => dr
            .vv_certificate
            .iter()
            .find(|e| e.j == d && e.n == 2)
            .map(|e| e.status == CheckStatus::Pass)
            .or(Some(true)),
        _ => None,
    };
    let mut power_reductions = Vec::new();
    if theorem_applicable {
        if let Some(prs) = st.run("power-reductions", || {
            (1..=cfg.power_window)
                .map(|n| power_reduction::<F>(&mut table, n, 2, cfg, seed))
                .collect::<Result<Vec<_>>>()
        }) {
            power_reductions = prs;
        }
    }
    let verdict_stages = ["normality", "hilbert-adic", "ratliff-rush", "reduction", "valabrega-valla"];
    let failed_stage = verdict_stages.iter().find(|s| st.failed(s)).map(|s| s.to_string());
    let (classification, unresolved_stage) = if let Some(stage) = failed_stage {
        if normal == Some(false) || (e.len() > 3 && e[3] != 0) {
            (Classification::VacuousInstance, None)
        } else {
            (Classification::Unresolved, Some(stage))
        }
    } else if !theorem_applicable {
        (Classification::VacuousInstance, None)
    } else {
        match conclusion_holds {
            Some(true) => (Classification::VerifiedInstance, None),
            Some(false) => (Classification::CounterexampleCandidate, None),
            None => (Classification::Unresolved, Some("valabrega-valla".to_string())),
        }
    };

    Ok(InstanceAnalysis {
        nvars: d,
        seed,
        hilbert_adic: adic,
        hilbert_closure: closure,
        rr_deviation: rr,
        rr_in_closure,
        e0_volume,
        reduction: reduction_data,
        depth,
        identities,
        inequalities,
        huckaba_huneke,
        verdict: ItohVerdict {
            normality,
            e,
            theorem_applicable,
            conclusion_holds,
            classification,
            unresolved_stage,
            power_reductions,
            integrally_closed_identity,
        },
        errors: st.errors,
    })
}

/// Verdict for a monomial ideal.
pub fn itoh_verdict<F: Field>(a: &Ideal<F>, seed: u64, cfg: &AnalysisConfig) -> Result<ItohVerdict> {
    Ok(analyze_instance(a, seed, cfg)?.verdict)
}

/// Lower bound for `depth G(a^l)` from the Valabrega–Valla table of a generic reduction of `a^l`.
fn depth_probe<F: Field>(ring: &Ring, al: &MonomialIdeal, l: u32, cfg: &AnalysisConfig, seed: u64) -> Result<DepthProbe> {
    let mut table = PowerTable::new(al)?;
    let red = sample_reduction::<F>(ring, &mut table, cfg, seed ^ (0x5eed_0000 + l as u64))?;
    let (p, _) = F::rank_prime();
    let d = red.ys.len();
    let mut engine = Engine::new(&mut table, red.ys.clone(), p);
    let mut lower = 0;
    for j in 1..d {
        let ok = (1..=red.r + 1).map(|n| engine.partial_vv(j, n)).collect::<Result<Vec<_>>>()?;
        if ok.iter().all(|&b| b) {
            lower = j;
        } else {
            break;
        }
    }
    Ok(DepthProbe {
        l,
        reduction_number: red.r,
        depth_lower_bound: lower,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;
    use crate::parse::parse_generators;
    use crate::ring::RingDescriptor;

    fn ideal(vars: &[&str], gens: &[&str]) -> Ideal<Rational> {
        let r = RingDescriptor::new::<Rational, _>(vars).unwrap();
        Ideal::new(&r, parse_generators(gens, &r).unwrap()).unwrap()
    }

    #[test]
    fn fixture_reductions() {
        let cfg = AnalysisConfig::default();
        let m2 = ideal(&["x", "y"], &["x^2", "x*y", "y^2"]);
        let c = ideal(&["x", "y"], &["x^2", "y^2"]);
        assert_eq!(reduction_number(&m2, &c, &cfg).unwrap(), 1);
        assert_eq!(sigma_sequence(&m2, &c, &cfg).unwrap(), vec![1, 0]);
        assert_eq!(reduction_number(&m2, &m2, &cfg).unwrap(), 0);

        let m2_3 = ideal(&["x", "y", "z"], &["x^2", "x*y", "x*z", "y^2", "y*z", "z^2"]);
        let c3 = ideal(&["x", "y", "z"], &["x^2", "y^2", "z^2"]);
        assert_eq!(reduction_number(&m2_3, &c3, &cfg).unwrap(), 1);
        assert_eq!(sigma_sequence(&m2_3, &c3, &cfg).unwrap(), vec![4, 0]);

        // every monomial of degree 6 is divisible by x^3 or y^3
        let m3 = ideal(&["x", "y"], &["x^3", "x^2*y", "x*y^2", "y^3"]);
        let c = ideal(&["x", "y"], &["x^3", "y^3"]);
        assert_eq!(reduction_number(&m3, &c, &cfg).unwrap(), 1);

        // x^6 y^2 lies in a^2 but not in c*a
        let gap = ideal(&["x", "y"], &["x^4", "x^3*y", "x*y^3", "y^4"]);
        let c = ideal(&["x", "y"], &["x^4", "y^4"]);
        assert_eq!(reduction_number(&gap, &c, &cfg).unwrap(), 2);

        let p = ideal(&["x", "y"], &["x^2", "y^3"]);
        assert_eq!(reduction_number(&p, &p, &cfg).unwrap(), 0);
        assert_eq!(sigma_sequence(&p, &p, &cfg).unwrap(), vec![0]);
    }

    #[test]
    fn groebner_path_agrees_on_fixtures() {
        let cfg = AnalysisConfig::default();
        let gap = ideal(&["x", "y"], &["x^4", "x^3*y", "x*y^3", "y^4"]);
        let c = ideal(&["x", "y"], &["x^4", "y^4"]);
        assert_eq!(reduction_number_groebner(&gap, &c, &cfg).unwrap(), 2);
        // 16 - 11, and x^6y^2, x^2y^6
        assert_eq!(sigma_sequence(&gap, &c, &cfg).unwrap(), vec![5, 2, 0]);
        let twisted = ideal(&["x", "y"], &["x^2 + y^3", "x*y", "y^2"]);
        let c = ideal(&["x", "y"], &["x^2 + y^3", "y^2"]);
        assert_eq!(reduction_number(&twisted, &c, &cfg).unwrap(), 1);
    }

    #[test]
    fn sampled_reduction_of_a_square() {
        let cfg = AnalysisConfig::default();
        let m2 = ideal(&["x", "y"], &["x^2", "x*y", "y^2"]);
        let rd = minimal_reduction(&m2, 7, &cfg).unwrap();
        assert_eq!(rd.reduction_number, 1);
        assert_eq!(rd.sigma, vec![1, 0]);
        assert!(rd.minimality_certified);
        assert!(rd.superficial.as_ref().unwrap().certified);
        assert_eq!(minimal_reduction(&m2, 7, &cfg).unwrap(), rd);
    }

    #[test]
    fn superficial_examples() {
        let cfg = AnalysisConfig::default();
        let m = ideal(&["x", "y"], &["x", "y"]);
        let s = sample_superficial_element(&m, 3, 3, &cfg).unwrap();
        assert!(s.certificate.b.iter().all(|&b| b == 0));
        let r = RingDescriptor::new::<Rational, _>(&["x", "y"]).unwrap();
        assert!(matches!(
            sample_superficial_element(&Ideal::<Rational>::zero(&r), 3, 3, &cfg),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn square_of_the_maximal_ideal_in_three_variables() {
        let cfg = AnalysisConfig::default();
        let a = ideal(&["x", "y", "z"], &["x^2", "x*y", "x*z", "y^2", "y*z", "z^2"]);
        let out = analyze_instance(&a, 11, &cfg).unwrap();
        assert!(out.errors.is_empty(), "{:?}", out.errors);
        assert_eq!(out.verdict.e, vec![8, 4, 0, 0]);
        assert_eq!(out.verdict.classification, Classification::VerifiedInstance);
        let red = out.reduction.unwrap();
        assert_eq!((red.reduction_number, red.sigma.clone()), (1, vec![4, 0]));
        assert!(out.depth.unwrap().cm);
        assert!(out.identities.unwrap().all_hold);
    }

    #[test]
    fn non_normal_instances_are_vacuous() {
        let cfg = AnalysisConfig::default();
        let a = ideal(&["x", "y"], &["x^2", "y^2"]);
        let v = itoh_verdict(&a, 5, &cfg).unwrap();
        assert_eq!(v.classification, Classification::VacuousInstance);
        assert!(!v.theorem_applicable);
    }

    #[test]
    fn a_non_cohen_macaulay_instance() {
        // (x^4, x^3 y, x y^3, y^4): x^2 y^2 lies in the Ratliff-Rush closure
        let cfg = AnalysisConfig::default();
        let a = ideal(&["x", "y"], &["x^4", "x^3*y", "x*y^3", "y^4"]);
        let out = analyze_instance(&a, 2, &cfg).unwrap();
        let depth = out.depth.unwrap();
        assert!(!depth.depth_ge1);
        assert_eq!(depth.cm_status, CmStatus::Refuted);
        assert_eq!(depth.depth_upper_bound, 0);
        assert_eq!(out.verdict.classification, Classification::VacuousInstance);
    }
}
