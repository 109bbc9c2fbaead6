//! Lazily evaluated filtrations `n ↦ a_n` and the Ratliff–Rush closure.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::groebner::GroebnerConfig;
use crate::ideal::{artinian_quotient_length, ideal_colon, ideal_contains, ideal_power, ideal_product, Ideal};
use crate::monomial::ExponentVector;
use crate::monomial_ideal::MonomialIdeal;
use crate::newton::{closure_of_power_with, NewtonPolyhedron};
use crate::ring::Ring;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct FiltrationConfig {
    pub groebner: GroebnerConfig,
    pub rr_k_max: u32,
    pub rr_confirm: u32,
    pub hilbert_n_max: u32,
    pub hilbert_window: u32,
}

impl Default for FiltrationConfig {
    fn default() -> Self {
        FiltrationConfig {
            groebner: GroebnerConfig::default(),
            rr_k_max: 20,
            rr_confirm: 2,
            hilbert_n_max: 60,
            hilbert_window: 3,
        }
    }
}

#[derive(Debug, Clone)]
pub enum FiltrationKind<F: Field> {
    Adic(Ideal<F>),
    IntegralClosure(Ideal<F>),
    RatliffRush(Ideal<F>),
    Veronese(Box<FiltrationKind<F>>, u32),
    Shift(Box<FiltrationKind<F>>, i64),
}

/// A term of a filtration, kept combinatorial when the base ideal is monomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term<F: Field> {
    Monomial(MonomialIdeal),
    General(Ideal<F>),
}

impl<F: Field> Term<F> {
    pub fn to_ideal(&self, ring: &Ring) -> Ideal<F> {
        match self {
            Term::Monomial(m) => Ideal::from_monomial_ideal(ring, m).expect("ring matches"),
            Term::General(i) => i.clone(),
        }
    }

    pub fn as_monomial(&self) -> Option<&MonomialIdeal> {
        match self {
            Term::Monomial(m) => Some(m),
            Term::General(_) => None,
        }
    }

    fn length(&self, cfg: &GroebnerConfig) -> Result<u64> {
        match self {
            Term::Monomial(m) if m.is_unit() => Ok(0),
            Term::Monomial(m) => m.staircase_length(),
            Term::General(i) => artinian_quotient_length(i, cfg),
        }
    }

    /// `other ⊆ self`.
    fn contains(&self, other: &Term<F>, ring: &Ring, cfg: &GroebnerConfig) -> Result<bool> {
        match (self, other) {
            (Term::Monomial(a), Term::Monomial(b)) => Ok(a.contains_ideal(b)),
            _ => ideal_contains(&self.to_ideal(ring), &other.to_ideal(ring), cfg),
        }
    }

    fn product(&self, other: &Term<F>, ring: &Ring, cfg: &GroebnerConfig) -> Result<Term<F>> {
        match (self, other) {
            (Term::Monomial(a), Term::Monomial(b)) => Ok(Term::Monomial(a.product(b))),
            _ => Ok(Term::General(ideal_product(&self.to_ideal(ring), &other.to_ideal(ring), cfg)?)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum BaseKind {
    Adic,
    Closure,
    RatliffRush,
}

#[derive(Debug, Clone)]
enum Inner<F: Field> {
    Base {
        kind: BaseKind,
        base: Term<F>,
        np: Option<NewtonPolyhedron>,
        order: Option<AdicOrder>,
        terms: BTreeMap<u32, Term<F>>,
        lengths: BTreeMap<u32, u64>,
    },
    Veronese(Box<Filtration<F>>, u32),
    Shift(Box<Filtration<F>>, i64),
}

/// A filtration `{a_n}` with memoized terms and colengths `ℓ(A/a_n)`.
#[derive(Debug, Clone)]
pub struct Filtration<F: Field> {
    ring: Ring,
    cfg: FiltrationConfig,
    inner: Inner<F>,
}

impl<F: Field> Filtration<F> {
    pub fn new(kind: FiltrationKind<F>, cfg: &FiltrationConfig) -> Result<Self> {
        let (ring, inner) = match kind {
            FiltrationKind::Veronese(base, l) => {
                if l == 0 {
                    return Err(Error::Precondition("Veronese index must be positive".into()));
                }
                let f = Filtration::new(*base, cfg)?;
                (f.ring.clone(), Inner::Veronese(Box::new(f), l))
            }
            FiltrationKind::Shift(base, s) => {
                let f = Filtration::new(*base, cfg)?;
                (f.ring.clone(), Inner::Shift(Box::new(f), s))
            }
            FiltrationKind::Adic(a) => base_inner(BaseKind::Adic, a, cfg)?,
            FiltrationKind::IntegralClosure(a) => base_inner(BaseKind::Closure, a, cfg)?,
            FiltrationKind::RatliffRush(a) => base_inner(BaseKind::RatliffRush, a, cfg)?,
        };
        Ok(Filtration {
            ring,
            cfg: cfg.clone(),
            inner,
        })
    }

    pub fn adic(a: &Ideal<F>, cfg: &FiltrationConfig) -> Result<Self> {
        Filtration::new(FiltrationKind::Adic(a.clone()), cfg)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn nvars(&self) -> usize {
        self.ring.nvars()
    }

    pub fn config(&self) -> &FiltrationConfig {
        &self.cfg
    }

    /// The `n`-th term; the unit ideal for `n <= 0` on the base kinds.
    pub fn term(&mut self, n: i64) -> Result<Term<F>> {
        match &mut self.inner {
            Inner::Veronese(f, l) => {
                if n <= 0 {
                    Ok(Term::Monomial(MonomialIdeal::unit(self.ring.nvars())))
                } else {
                    f.term(n * *l as i64)
                }
            }
            Inner::Shift(f, s) => f.term(n + *s),
            Inner::Base { .. } => {
                if n <= 0 {
                    return Ok(Term::Monomial(MonomialIdeal::unit(self.ring.nvars())));
                }
                let n = n as u32;
                self.fill_to(n)?;
                match &self.inner {
                    Inner::Base { terms, .. } => Ok(terms[&n].clone()),
                    _ => unreachable!(),
                }
            }
        }
    }

    /// `ℓ(A/a_n)`.
    pub fn length(&mut self, n: i64) -> Result<u64> {
        match &mut self.inner {
            Inner::Veronese(f, l) => {
                if n <= 0 {
                    Ok(0)
                } else {
                    f.length(n * *l as i64)
                }
            }
            Inner::Shift(f, s) => f.length(n + *s),
            Inner::Base { .. } => {
                if n <= 0 {
                    return Ok(0);
                }
                let n = n as u32;
                if let Inner::Base { lengths, .. } = &self.inner {
                    if let Some(&v) = lengths.get(&n) {
                        return Ok(v);
                    }
                }
                let t = self.term(n as i64)?;
                let v = t.length(&self.cfg.groebner)?;
                if let Inner::Base { lengths, .. } = &mut self.inner {
                    lengths.insert(n, v);
                }
                Ok(v)
            }
        }
    }

    /// Computes terms `1..=n`, checking `a_{k+1} ⊆ a_k` and `a·a_k ⊆ a_{k+1}`.
    fn fill_to(&mut self, n: u32) -> Result<()> {
        let ring = self.ring.clone();
        let cfg = self.cfg.clone();
        let Inner::Base {
            kind,
            base,
            np,
            order,
            terms,
            ..
        } = &mut self.inner
        else {
            unreachable!()
        };
        let mut k = terms.keys().next_back().copied().unwrap_or(0);
        while k < n {
            k += 1;
            let prev = terms.get(&(k - 1)).cloned();
            let next = match (*kind, &*base) {
                (BaseKind::Adic, _) => match &prev {
                    Some(p) => p.product(base, &ring, &cfg.groebner)?,
                    None => base.clone(),
                },
                (BaseKind::Closure, Term::Monomial(a)) => {
                    Term::Monomial(closure_of_power_with(np.as_ref().expect("polyhedron"), a, k))
                }
                (BaseKind::Closure, Term::General(_)) => unreachable!("rejected at construction"),
                (BaseKind::RatliffRush, Term::Monomial(a)) => Term::Monomial(rr_monomial(
                    a,
                    np.as_ref().expect("polyhedron"),
                    order.as_mut().expect("order"),
                    k,
                    cfg.rr_k_max,
                    cfg.rr_confirm,
                )?),
                (BaseKind::RatliffRush, Term::General(a)) => {
                    Term::General(rr_general(a, k, cfg.rr_k_max, cfg.rr_confirm, &cfg.groebner)?)
                }
            };
            if let Some(p) = &prev {
                if !p.contains(&next, &ring, &cfg.groebner)? {
                    return Err(Error::FiltrationAxiom(format!("a_{k} is not contained in a_{}", k - 1)));
                }
                if *kind != BaseKind::Adic && !next.contains(&p.product(base, &ring, &cfg.groebner)?, &ring, &cfg.groebner)? {
                    return Err(Error::FiltrationAxiom(format!("a·a_{} is not contained in a_{k}", k - 1)));
                }
            } else if *kind != BaseKind::Adic && !next.contains(base, &ring, &cfg.groebner)? {
                return Err(Error::FiltrationAxiom("a is not contained in a_1".into()));
            }
            terms.insert(k, next);
        }
        Ok(())
    }
}

fn base_inner<F: Field>(kind: BaseKind, a: Ideal<F>, cfg: &FiltrationConfig) -> Result<(Ring, Inner<F>)> {
    let ring = a.ring().clone();
    let base = match a.as_monomial_ideal() {
        Some(m) => {
            if m.is_unit() || !m.is_m_primary() {
                return Err(Error::NotMPrimary);
            }
            Term::Monomial(m)
        }
        None => {
            if kind == BaseKind::Closure {
                return Err(Error::UnsupportedFiltration(
                    "integral closure is only available for monomial base ideals".into(),
                ));
            }
            let gb = a.groebner_basis(&cfg.groebner)?;
            if gb.is_unit() {
                return Err(Error::NotMPrimary);
            }
            gb.standard_monomial_count().map_err(|_| Error::NotMPrimary)?;
            Term::General(Ideal::new(&ring, gb.into_basis())?)
        }
    };
    let np = base.as_monomial().map(NewtonPolyhedron::new);
    let order = base.as_monomial().map(AdicOrder::new);
    Ok((
        ring,
        Inner::Base {
            kind,
            base,
            np,
            order,
            terms: BTreeMap::new(),
            lengths: BTreeMap::new(),
        },
    ))
}

pub fn filtration_term<F: Field>(f: &mut Filtration<F>, n: i64) -> Result<Ideal<F>> {
    let ring = f.ring().clone();
    Ok(f.term(n)?.to_ideal(&ring))
}

/// `ord_a(u) = max{k : x^u ∈ a^k}` for a monomial ideal `a`, memoized.
#[derive(Debug, Clone)]
pub struct AdicOrder {
    gens: Vec<ExponentVector>,
    memo: HashMap<ExponentVector, u32>,
}

impl AdicOrder {
    pub fn new(a: &MonomialIdeal) -> Self {
        assert!(!a.is_unit(), "order function of the unit ideal is unbounded");
        AdicOrder {
            gens: a.generators().to_vec(),
            memo: HashMap::new(),
        }
    }

    pub fn ord(&mut self, u: &ExponentVector) -> u32 {
        if let Some(&v) = self.memo.get(u) {
            return v;
        }
        let mut best = 0;
        for i in 0..self.gens.len() {
            if let Some(w) = u.div(&self.gens[i]) {
                best = best.max(1 + self.ord(&w));
            }
        }
        self.memo.insert(*u, best);
        best
    }

    /// `x^u ∈ a^k`.
    pub fn in_power(&mut self, u: &ExponentVector, k: u32) -> bool {
        k == 0 || self.ord(u) >= k
    }
}

/// `ã_n` for a monomial `a`. Every element of the chain lies between `a^n`
/// and `(a^n)*`, so only the finitely many monomials of `(a^n)* \ a^n` are tested.
fn rr_monomial(
    a: &MonomialIdeal,
    np: &NewtonPolyhedron,
    order: &mut AdicOrder,
    n: u32,
    k_max: u32,
    confirm: u32,
) -> Result<MonomialIdeal> {
    let an = a.power(n);
    let candidates: Vec<ExponentVector> = an
        .standard_monomials()?
        .into_iter()
        .filter(|v| np.contains_scaled(v, n))
        .collect();
    let mut member = vec![false; candidates.len()];
    let mut counts: Vec<u64> = Vec::new();
    let mut ak = MonomialIdeal::unit(a.nvars());
    for k in 1..=k_max {
        ak = ak.product(a);
        for (i, v) in candidates.iter().enumerate() {
            if !member[i] && ak.generators().iter().all(|g| order.in_power(&v.mul(g), n + k)) {
                member[i] = true;
            }
        }
        counts.push(member.iter().filter(|&&m| m).count() as u64);
        let c = confirm.max(1) as usize;
        if counts.len() >= c && counts[counts.len() - c..].iter().all(|&x| x == counts[counts.len() - 1]) {
            let stable: Vec<ExponentVector> = candidates
                .iter()
                .zip(&member)
                .filter(|(_, &m)| m)
                .map(|(v, _)| *v)
                .collect();
            // guard: ã_n · a ⊆ (a^{n+1+k} : a^k)
            for v in &stable {
                for h in a.generators() {
                    let vh = v.mul(h);
                    if !ak.generators().iter().all(|g| order.in_power(&vh.mul(g), n + 1 + k)) {
                        return Err(Error::FiltrationAxiom(format!(
                            "Ratliff-Rush guard failed for n = {n} at k = {k}"
                        )));
                    }
                }
            }
            let mut gens = an.generators().to_vec();
            gens.extend(stable);
            return Ok(MonomialIdeal::new(a.nvars(), gens)?);
        }
    }
    Err(Error::RatliffRushNotStable {
        n: n as usize,
        k_max: k_max as usize,
        partial: counts,
    })
}

fn rr_general<F: Field>(a: &Ideal<F>, n: u32, k_max: u32, confirm: u32, cfg: &GroebnerConfig) -> Result<Ideal<F>> {
    let ring = a.ring().clone();
    let an = ideal_power(a, n, cfg)?;
    let base_len = artinian_quotient_length(&an, cfg)?;
    let mut lens: Vec<u64> = Vec::new();
    let mut chain: Vec<Ideal<F>> = Vec::new();
    let mut ak = Ideal::unit(&ring);
    let mut ank = an.clone();
    for k in 1..=k_max {
        ak = ideal_product(&ak, a, cfg)?;
        ank = ideal_product(&ank, a, cfg)?;
        let c = ideal_colon(&ank, &ak, cfg)?;
        // the chain is increasing, so equal colengths mean equal ideals
        lens.push(base_len - artinian_quotient_length(&c, cfg)?);
        chain.push(c);
        let w = confirm.max(1) as usize;
        if lens.len() >= w && lens[lens.len() - w..].iter().all(|&x| x == lens[lens.len() - 1]) {
            let stable = chain.pop().expect("nonempty");
            let next = ideal_colon(&ideal_product(&ank, a, cfg)?, &ak, cfg)?;
            if !ideal_contains(&next, &ideal_product(&stable, a, cfg)?, cfg)? {
                return Err(Error::FiltrationAxiom(format!(
                    "Ratliff-Rush guard failed for n = {n} at k = {k}"
                )));
            }
            return Ok(stable);
        }
    }
    Err(Error::RatliffRushNotStable {
        n: n as usize,
        k_max: k_max as usize,
        partial: lens,
    })
}

/// `ã_n`, the stable value of `(a^{n+k} : a^k)`.
pub fn ratliff_rush_closure<F: Field>(a: &Ideal<F>, n: u32, cfg: &FiltrationConfig) -> Result<Ideal<F>> {
    if n == 0 {
        return Err(Error::Precondition("Ratliff-Rush closure needs n >= 1".into()));
    }
    let mut f = Filtration::new(FiltrationKind::RatliffRush(a.clone()), cfg)?;
    filtration_term(&mut f, n as i64)
}

/// `ℓ(ã_{n+1}/a^{n+1})` for `n = 0..N-1`.
pub fn rr_deviation_sequence<F: Field>(a: &Ideal<F>, n_terms: u32, cfg: &FiltrationConfig) -> Result<Vec<u64>> {
    let mut adic = Filtration::new(FiltrationKind::Adic(a.clone()), cfg)?;
    let mut rr = Filtration::new(FiltrationKind::RatliffRush(a.clone()), cfg)?;
    (1..=n_terms as i64)
        .map(|n| Ok(adic.length(n)? - rr.length(n)?))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;
    use crate::parse::parse_generators;
    use crate::ring::RingDescriptor;

    fn ideal(vars: &[&str], gens: &str) -> Ideal<Rational> {
        let r = RingDescriptor::new::<Rational, _>(vars).unwrap();
        let gens: Vec<&str> = gens.split(", ").collect();
        Ideal::new(&r, parse_generators(&gens, &r).unwrap()).unwrap()
    }

    fn mono(t: Term<Rational>) -> MonomialIdeal {
        t.as_monomial().unwrap().clone()
    }

    #[test]
    fn adic_terms() {
        let a = ideal(&["x", "y"], "x^2, x*y, y^2");
        let mut f = Filtration::adic(&a, &FiltrationConfig::default()).unwrap();
        assert_eq!(mono(f.term(2).unwrap()), MonomialIdeal::maximal_power(2, 4));
        assert!(mono(f.term(0).unwrap()).is_unit());
        assert!(mono(f.term(-3).unwrap()).is_unit());
        assert_eq!(f.length(3).unwrap(), 21);
    }

    #[test]
    fn shift_and_veronese_terms() {
        let a = ideal(&["x", "y"], "x^2, y^3");
        let cfg = FiltrationConfig::default();
        let mut base = Filtration::adic(&a, &cfg).unwrap();
        let mut shift = Filtration::new(FiltrationKind::Shift(Box::new(FiltrationKind::Adic(a.clone())), 2), &cfg).unwrap();
        let mut ver = Filtration::new(FiltrationKind::Veronese(Box::new(FiltrationKind::Adic(a.clone())), 2), &cfg).unwrap();
        for n in -2..4 {
            assert_eq!(shift.term(n).unwrap(), base.term(n + 2).unwrap());
        }
        for n in 1..4 {
            assert_eq!(ver.term(n).unwrap(), base.term(2 * n).unwrap());
        }
    }

    #[test]
    fn closure_requires_monomial_base() {
        let a = ideal(&["x", "y"], "x^2 - y^3, y^4");
        let err = Filtration::new(FiltrationKind::IntegralClosure(a), &FiltrationConfig::default()).unwrap_err();
        assert!(matches!(err, Error::UnsupportedFiltration(_)));
    }

    #[test]
    fn ratliff_rush_examples() {
        let cfg = FiltrationConfig::default();
        let m2 = ideal(&["x", "y"], "x^2, x*y, y^2");
        assert_eq!(ratliff_rush_closure(&m2, 1, &cfg).unwrap().as_monomial_ideal().unwrap(), MonomialIdeal::maximal_power(2, 2));
        assert_eq!(rr_deviation_sequence(&m2, 3, &cfg).unwrap(), vec![0, 0, 0]);
        let p = ideal(&["x", "y"], "x^2, y^3");
        assert_eq!(rr_deviation_sequence(&p, 4, &cfg).unwrap(), vec![0, 0, 0, 0]);
        // (x^4, x^3 y, x y^3, y^4) is not Ratliff-Rush closed: x^2 y^2 lies in the closure
        let q = ideal(&["x", "y"], "x^4, x^3*y, x*y^3, y^4");
        let rr = ratliff_rush_closure(&q, 1, &cfg).unwrap().as_monomial_ideal().unwrap();
        assert!(rr.contains(&ExponentVector::from_slice(&[2, 2])));
        assert_eq!(rr_deviation_sequence(&q, 1, &cfg).unwrap(), vec![1]);
    }

    #[test]
    fn general_and_monomial_ratliff_rush_agree() {
        let cfg = FiltrationConfig::default();
        let q = ideal(&["x", "y"], "x^4, x^3*y, x*y^3, y^4");
        let mono = ratliff_rush_closure(&q, 1, &cfg).unwrap().as_monomial_ideal().unwrap();
        let g = rr_general(&q, 1, 20, 2, &cfg.groebner).unwrap();
        let gm = g.as_monomial_ideal().unwrap();
        assert_eq!(gm, mono);
    }

    #[test]
    fn adic_order() {
        let m = MonomialIdeal::maximal_power(2, 2);
        let mut o = AdicOrder::new(&m);
        assert_eq!(o.ord(&ExponentVector::from_slice(&[3, 2])), 2);
        assert_eq!(o.ord(&ExponentVector::from_slice(&[1, 0])), 0);
    }
}
