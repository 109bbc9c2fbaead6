//! Ideals of a polynomial ring and the Gröbner-basis operations on them.

use crate::error::{AlgebraError, Error, Result};
use crate::field::Field;
use crate::groebner::{buchberger_reduced_basis, GroebnerBasis, GroebnerConfig};
use crate::monomial_ideal::MonomialIdeal;
use crate::poly::Polynomial;
use crate::ring::{same_ring, Ring};

/// A finitely generated ideal. The generator list may be redundant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ideal<F: Field> {
    ring: Ring,
    generators: Vec<Polynomial<F>>,
}

impl<F: Field> Ideal<F> {
    pub fn new(ring: &Ring, generators: Vec<Polynomial<F>>) -> Result<Self, AlgebraError> {
        if generators.iter().any(|g| !same_ring(g.ring(), ring)) {
            return Err(AlgebraError::RingMismatch);
        }
        Ok(Ideal {
            ring: ring.clone(),
            generators: generators.into_iter().filter(|g| !g.is_zero()).collect(),
        })
    }

    pub fn zero(ring: &Ring) -> Self {
        Ideal {
            ring: ring.clone(),
            generators: Vec::new(),
        }
    }

    pub fn unit(ring: &Ring) -> Self {
        Ideal {
            ring: ring.clone(),
            generators: vec![Polynomial::one(ring)],
        }
    }

    pub fn from_monomial_ideal(ring: &Ring, m: &MonomialIdeal) -> Result<Self, AlgebraError> {
        if m.nvars() != ring.nvars() {
            return Err(AlgebraError::LengthMismatch(ring.nvars(), m.nvars()));
        }
        Ok(Ideal {
            ring: ring.clone(),
            generators: m.to_polynomials(ring),
        })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial<F>] {
        &self.generators
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    /// The monomial ideal with the same generators, when every generator is a monomial.
    pub fn as_monomial_ideal(&self) -> Option<MonomialIdeal> {
        if !self.generators.iter().all(|g| g.is_monomial()) {
            return None;
        }
        let exps = self.generators.iter().map(|g| *g.leading_monomial().unwrap()).collect();
        MonomialIdeal::new(self.ring.nvars(), exps).ok()
    }

    pub fn groebner_basis(&self, cfg: &GroebnerConfig) -> Result<GroebnerBasis<F>> {
        buchberger_reduced_basis(&self.ring, &self.generators, cfg)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(AlgebraError::RingMismatch.into())
        }
    }

    fn from_basis(gb: GroebnerBasis<F>) -> Self {
        Ideal {
            ring: gb.ring().clone(),
            generators: gb.into_basis(),
        }
    }
}

pub fn ideal_membership<F: Field>(f: &Polynomial<F>, ideal: &Ideal<F>, cfg: &GroebnerConfig) -> Result<bool> {
    ideal.groebner_basis(cfg)?.contains(f)
}

/// `J ⊆ I`.
pub fn ideal_contains<F: Field>(i: &Ideal<F>, j: &Ideal<F>, cfg: &GroebnerConfig) -> Result<bool> {
    i.check(j)?;
    let gb = i.groebner_basis(cfg)?;
    for g in j.generators() {
        if !gb.contains(g)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CombineOp {
    Sum,
    Product,
    Power(u32),
}

/// Sum, product (with `other`) or power of `i`, re-minimalized through its reduced basis.
pub fn ideal_combine<F: Field>(
    op: CombineOp,
    i: &Ideal<F>,
    other: Option<&Ideal<F>>,
    cfg: &GroebnerConfig,
) -> Result<Ideal<F>> {
    match (op, other) {
        (CombineOp::Sum, Some(j)) => ideal_sum(i, j, cfg),
        (CombineOp::Product, Some(j)) => ideal_product(i, j, cfg),
        (CombineOp::Power(n), _) => ideal_power(i, n, cfg),
        _ => Err(Error::Precondition("binary operation needs a second ideal".into())),
    }
}

pub fn ideal_sum<F: Field>(i: &Ideal<F>, j: &Ideal<F>, cfg: &GroebnerConfig) -> Result<Ideal<F>> {
    i.check(j)?;
    let mut gens = i.generators.clone();
    gens.extend(j.generators.iter().cloned());
    Ok(Ideal::from_basis(buchberger_reduced_basis(&i.ring, &gens, cfg)?))
}

fn raw_product<F: Field>(i: &Ideal<F>, j: &Ideal<F>) -> Ideal<F> {
    let mut gens = Vec::with_capacity(i.generators.len() * j.generators.len());
    for a in &i.generators {
        for b in &j.generators {
            gens.push(a * b);
        }
    }
    Ideal {
        ring: i.ring.clone(),
        generators: gens,
    }
}

pub fn ideal_product<F: Field>(i: &Ideal<F>, j: &Ideal<F>, cfg: &GroebnerConfig) -> Result<Ideal<F>> {
    i.check(j)?;
    Ok(Ideal::from_basis(raw_product(i, j).groebner_basis(cfg)?))
}

/// `I^n` by repeated squaring; `I^0` is the unit ideal.
pub fn ideal_power<F: Field>(i: &Ideal<F>, n: u32, cfg: &GroebnerConfig) -> Result<Ideal<F>> {
    let mut result = Ideal::unit(&i.ring);
    if n == 0 {
        return Ok(result);
    }
    let mut base = Ideal::from_basis(i.groebner_basis(cfg)?);
    let mut e = n;
    let mut first = true;
    loop {
        if e & 1 == 1 {
            result = if first {
                base.clone()
            } else {
                Ideal::from_basis(raw_product(&result, &base).groebner_basis(cfg)?)
            };
            first = false;
        }
        e >>= 1;
        if e == 0 {
            return Ok(result);
        }
        base = Ideal::from_basis(raw_product(&base, &base).groebner_basis(cfg)?);
    }
}

/// `I ∩ J` by eliminating `t` from `t·I + (1 - t)·J`.
pub fn ideal_intersection<F: Field>(i: &Ideal<F>, j: &Ideal<F>, cfg: &GroebnerConfig) -> Result<Ideal<F>> {
    i.check(j)?;
    if i.is_zero() || j.is_zero() {
        return Ok(Ideal::zero(&i.ring));
    }
    let ring_t = i.ring.with_elimination_variable()?;
    let mut gens = Vec::with_capacity(i.generators.len() + j.generators.len());
    for f in &i.generators {
        gens.push(f.lift_with(&ring_t, 1));
    }
    for g in &j.generators {
        let g0 = g.lift_with(&ring_t, 0);
        let g1 = g.lift_with(&ring_t, 1);
        gens.push(&g0 - &g1);
    }
    let gb = buchberger_reduced_basis(&ring_t, &gens, cfg)?;
    let projected: Vec<Polynomial<F>> = gb
        .basis()
        .iter()
        .filter(|p| p.leading_monomial().unwrap().get(0) == 0)
        .map(|p| p.project_from(&i.ring))
        .collect();
    let result = Ideal::from_basis(buchberger_reduced_basis(&i.ring, &projected, cfg)?);

    let (gi, gj) = (i.groebner_basis(cfg)?, j.groebner_basis(cfg)?);
    for g in result.generators() {
        if !gi.contains(g)? || !gj.contains(g)? {
            return Err(Error::Precondition("intersection failed its containment check".into()));
        }
    }
    Ok(result)
}

/// `(I : J)` as the intersection of `(I ∩ (g)) / g` over the generators `g` of `J`.
pub fn ideal_colon<F: Field>(i: &Ideal<F>, j: &Ideal<F>, cfg: &GroebnerConfig) -> Result<Ideal<F>> {
    i.check(j)?;
    if j.is_zero() {
        return Err(Error::ZeroColonDivisor);
    }
    let mut acc: Option<Ideal<F>> = None;
    for g in j.generators() {
        let part = if g.is_constant() {
            Ideal::from_basis(i.groebner_basis(cfg)?)
        } else {
            let principal = Ideal {
                ring: i.ring.clone(),
                generators: vec![g.clone()],
            };
            let meet = ideal_intersection(i, &principal, cfg)?;
            let quotients = meet
                .generators()
                .iter()
                .map(|h| {
                    h.exact_div(g)
                        .ok_or_else(|| Error::Precondition("intersection element not divisible".into()))
                })
                .collect::<Result<Vec<_>>>()?;
            Ideal::from_basis(buchberger_reduced_basis(&i.ring, &quotients, cfg)?)
        };
        acc = Some(match acc {
            None => part,
            Some(a) => ideal_intersection(&a, &part, cfg)?,
        });
    }
    let result = acc.expect("nonempty divisor");

    let gi = i.groebner_basis(cfg)?;
    for a in result.generators() {
        for g in j.generators() {
            if !gi.contains(&(a * g))? {
                return Err(Error::Precondition("colon failed its containment check".into()));
            }
        }
    }
    Ok(result)
}

pub fn ideals_equal<F: Field>(i: &Ideal<F>, j: &Ideal<F>, cfg: &GroebnerConfig) -> Result<bool> {
    i.check(j)?;
    Ok(i.groebner_basis(cfg)? == j.groebner_basis(cfg)?)
}

/// `dim_k A/I`, or `NotArtinian` when the quotient is infinite-dimensional.
pub fn artinian_quotient_length<F: Field>(i: &Ideal<F>, cfg: &GroebnerConfig) -> Result<u64> {
    let gb = i.groebner_basis(cfg)?;
    if gb.basis().len() == 1 && gb.basis()[0].leading_monomial().unwrap().is_one() {
        return Ok(0);
    }
    gb.standard_monomial_count()
}

/// The principal ideal `(g)`.
pub fn principal<F: Field>(ring: &Ring, g: Polynomial<F>) -> Ideal<F> {
    let g = if g.is_zero() { vec![] } else { vec![g] };
    Ideal {
        ring: ring.clone(),
        generators: g,
    }
}

impl<F: Field> Ideal<F> {
    pub fn is_unit(&self, cfg: &GroebnerConfig) -> Result<bool> {
        Ok(self.groebner_basis(cfg)?.is_unit())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;
    use crate::parse::parse_polynomial;
    use crate::ring::RingDescriptor;

    fn setup(vars: &[&str]) -> Ring {
        RingDescriptor::new::<Rational, _>(vars).unwrap()
    }

    fn id(r: &Ring, gens: &[&str]) -> Ideal<Rational> {
        Ideal::new(r, gens.iter().map(|s| parse_polynomial(s, r).unwrap()).collect()).unwrap()
    }

    fn cfg() -> GroebnerConfig {
        GroebnerConfig::default()
    }

    #[test]
    fn membership_examples() {
        let r = setup(&["x", "y"]);
        let p = |s| parse_polynomial::<Rational>(s, &r).unwrap();
        let m3 = ideal_power(&id(&r, &["x", "y"]), 3, &cfg()).unwrap();
        assert!(ideal_membership(&p("x^2*y"), &m3, &cfg()).unwrap());
        assert!(!ideal_membership(&p("x"), &id(&r, &["x^2", "y"]), &cfg()).unwrap());
        assert!(!ideal_membership(&p("x*y"), &id(&r, &["x^2", "y^2"]), &cfg()).unwrap());
    }

    #[test]
    fn combine_examples() {
        let r = setup(&["x", "y"]);
        let s = ideal_sum(&id(&r, &["x"]), &id(&r, &["y"]), &cfg()).unwrap();
        assert!(ideals_equal(&s, &id(&r, &["x", "y"]), &cfg()).unwrap());
        let m = id(&r, &["x", "y"]);
        let m2 = ideal_product(&m, &m, &cfg()).unwrap();
        assert!(ideals_equal(&m2, &id(&r, &["x^2", "x*y", "y^2"]), &cfg()).unwrap());
        let m4 = ideal_combine(CombineOp::Power(2), &m2, None, &cfg()).unwrap();
        assert!(ideals_equal(&m4, &id(&r, &["x^4", "x^3*y", "x^2*y^2", "x*y^3", "y^4"]), &cfg()).unwrap());
        assert!(ideal_power(&m, 0, &cfg()).unwrap().is_unit(&cfg()).unwrap());
    }

    #[test]
    fn intersection_examples() {
        let r = setup(&["x", "y"]);
        let i = ideal_intersection(&id(&r, &["x"]), &id(&r, &["y"]), &cfg()).unwrap();
        assert!(ideals_equal(&i, &id(&r, &["x*y"]), &cfg()).unwrap());
        let a = id(&r, &["x^2 + y", "x*y"]);
        let aa = ideal_intersection(&a, &a, &cfg()).unwrap();
        assert!(ideals_equal(&aa, &a, &cfg()).unwrap());
        let m2 = id(&r, &["x^2", "x*y", "y^2"]);
        let c = id(&r, &["x^2", "y^2"]);
        let lhs = ideal_intersection(&ideal_power(&m2, 2, &cfg()).unwrap(), &c, &cfg()).unwrap();
        let rhs = ideal_product(&c, &m2, &cfg()).unwrap();
        assert!(ideals_equal(&lhs, &rhs, &cfg()).unwrap());
    }

    #[test]
    fn colon_examples() {
        let r = setup(&["x", "y"]);
        let q = ideal_colon(&id(&r, &["x^2", "x*y"]), &id(&r, &["x"]), &cfg()).unwrap();
        assert!(ideals_equal(&q, &id(&r, &["x", "y"]), &cfg()).unwrap());
        let a = id(&r, &["x^3 - y", "y^2"]);
        let q = ideal_colon(&a, &id(&r, &["1"]), &cfg()).unwrap();
        assert!(ideals_equal(&q, &a, &cfg()).unwrap());
        let i = id(&r, &["x^4", "x^3*y", "x*y^3", "y^4"]);
        let q = ideal_colon(&i, &id(&r, &["x", "y"]), &cfg()).unwrap();
        let comb = i.as_monomial_ideal().unwrap().colon(&id(&r, &["x", "y"]).as_monomial_ideal().unwrap()).unwrap();
        let comb = Ideal::from_monomial_ideal(&r, &comb).unwrap();
        assert!(ideals_equal(&q, &comb, &cfg()).unwrap());
        assert!(matches!(ideal_colon(&i, &Ideal::zero(&r), &cfg()), Err(Error::ZeroColonDivisor)));
    }

    #[test]
    fn length_examples() {
        let r = setup(&["x", "y"]);
        assert_eq!(artinian_quotient_length(&id(&r, &["x", "y"]), &cfg()).unwrap(), 1);
        assert_eq!(artinian_quotient_length(&id(&r, &["x^2", "x*y", "y^2"]), &cfg()).unwrap(), 3);
        assert!(matches!(
            artinian_quotient_length(&id(&r, &["x^2"]), &cfg()),
            Err(Error::NotArtinian { variable: 1 })
        ));
        let r3 = setup(&["x", "y", "z"]);
        let m4 = ideal_power(&id(&r3, &["x", "y", "z"]), 4, &cfg()).unwrap();
        let mut count = 0;
        for a in 0..4 {
            for b in 0..4 - a {
                count += 4 - a - b;
            }
        }
        assert_eq!(artinian_quotient_length(&m4, &cfg()).unwrap(), count);
        let gens = id(&r, &["x^2 - y", "y^3"]);
        // x^2 = y, y^3 = 0: basis 1, x, y, x*y, y^2, x*y^2
        assert_eq!(artinian_quotient_length(&gens, &cfg()).unwrap(), 6);
    }
}
