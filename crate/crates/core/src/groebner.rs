//! Buchberger's algorithm with the Gebauer–Möller pair criteria.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::monomial::{ExponentVector, MonomialOrder};
use crate::monomial_ideal::{minimalize, staircase_count};
use crate::poly::Polynomial;
use crate::ring::{same_ring, Ring};

/// Resource limits for a single basis computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroebnerConfig {
    /// S-pair reductions allowed per basis computation.
    pub max_pair_reductions: u64,
    /// Largest intermediate basis allowed.
    pub max_basis_size: usize,
}

impl Default for GroebnerConfig {
    fn default() -> Self {
        GroebnerConfig {
            max_pair_reductions: 1_000_000,
            max_basis_size: 200_000,
        }
    }
}

/// A reduced Gröbner basis: monic, no term of any element divisible by the
/// leading monomial of another, sorted ascending by leading monomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroebnerBasis<F: Field> {
    ring: Ring,
    basis: Vec<Polynomial<F>>,
}

impl<F: Field> GroebnerBasis<F> {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn order(&self) -> MonomialOrder {
        self.ring.order()
    }

    pub fn basis(&self) -> &[Polynomial<F>] {
        &self.basis
    }

    pub fn into_basis(self) -> Vec<Polynomial<F>> {
        self.basis
    }

    pub fn leading_monomials(&self) -> Vec<ExponentVector> {
        self.basis.iter().map(|g| *g.leading_monomial().expect("nonzero")).collect()
    }

    pub fn is_unit(&self) -> bool {
        self.basis.len() == 1 && self.basis[0].is_constant()
    }

    /// Remainder of `f` on division by the basis.
    pub fn normal_form(&self, f: &Polynomial<F>) -> Result<Polynomial<F>> {
        if !same_ring(f.ring(), &self.ring) {
            return Err(crate::error::AlgebraError::RingMismatch.into());
        }
        let refs: Vec<&Polynomial<F>> = self.basis.iter().collect();
        Ok(reduce(f, &refs))
    }

    pub fn contains(&self, f: &Polynomial<F>) -> Result<bool> {
        Ok(self.normal_form(f)?.is_zero())
    }

    /// `dim_k A/I`, counted as the monomials outside the leading ideal.
    pub fn standard_monomial_count(&self) -> Result<u64> {
        if self.basis.is_empty() {
            return Err(Error::NotArtinian { variable: 0 });
        }
        staircase_count(self.ring.nvars(), &self.leading_monomials())
    }
}

/// Full reduction of `f` by monic `reducers`.
pub(crate) fn reduce<F: Field>(f: &Polynomial<F>, reducers: &[&Polynomial<F>]) -> Polynomial<F> {
    let ring = f.ring().clone();
    let mut p = f.clone();
    let mut start = 0usize;
    let mut rem: Vec<(F, ExponentVector)> = Vec::new();
    while start < p.len() {
        let (c, m) = &p.terms()[start];
        let hit = reducers
            .iter()
            .find(|g| g.leading_monomial().expect("nonzero reducer").divides(m));
        match hit {
            Some(g) => {
                let q = m.div(g.leading_monomial().unwrap()).unwrap();
                let lc = g.leading_coeff().unwrap();
                let coef = if lc.is_one() { c.clone() } else { c.div_ref(lc) };
                p = p.sub_scaled_tail(start + 1, &coef, &q, g, 1);
                start = 0;
            }
            None => {
                rem.push((c.clone(), *m));
                start += 1;
            }
        }
    }
    Polynomial::from_sorted_terms(&ring, rem)
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Pair {
    sugar: u64,
    lcm_degree: u64,
    i: usize,
    j: usize,
    lcm: ExponentVector,
}

impl Ord for Pair {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.sugar, self.lcm_degree, self.j, self.i).cmp(&(other.sugar, other.lcm_degree, other.j, other.i))
    }
}

impl PartialOrd for Pair {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

struct Builder<F> {
    polys: Vec<Polynomial<F>>,
    sugar: Vec<u64>,
    active: Vec<bool>,
    pairs: BinaryHeap<Reverse<Pair>>,
}

impl<F: Field> Builder<F> {
    fn lm(&self, i: usize) -> &ExponentVector {
        self.polys[i].leading_monomial().expect("nonzero")
    }

    fn reducers(&self) -> Vec<&Polynomial<F>> {
        self.polys
            .iter()
            .zip(&self.active)
            .filter(|(_, &a)| a)
            .map(|(p, _)| p)
            .collect()
    }

    /// Insert a new monic element, updating pairs and the active set.
    fn insert(&mut self, h: Polynomial<F>, sugar: u64) {
        let k = self.polys.len();
        let lh = *h.leading_monomial().expect("nonzero");
        self.polys.push(h);
        self.sugar.push(sugar);
        self.active.push(false);

        let cand: Vec<(usize, ExponentVector)> = (0..k)
            .filter(|&g| self.active[g])
            .map(|g| (g, lh.lcm(self.lm(g))))
            .collect();
        let mut kept: Vec<(usize, ExponentVector, bool)> = Vec::new();
        for (idx, &(g, l)) in cand.iter().enumerate() {
            let coprime = lh.is_coprime(self.lm(g));
            let dominated = !coprime
                && (cand[idx + 1..].iter().any(|(_, l2)| l2.divides(&l))
                    || kept.iter().any(|(_, l2, _)| l2.divides(&l)));
            if !dominated {
                kept.push((g, l, coprime));
            }
        }

        let lms: Vec<ExponentVector> = self.polys.iter().map(|p| *p.leading_monomial().unwrap()).collect();
        self.pairs.retain(|Reverse(p)| {
            !(lh.divides(&p.lcm) && lh.lcm(&lms[p.i]) != p.lcm && lh.lcm(&lms[p.j]) != p.lcm)
        });

        for (g, l, coprime) in kept {
            if coprime {
                continue;
            }
            let dl = l.degree();
            let s = (self.sugar[g] + dl - lms[g].degree()).max(sugar + dl - lh.degree());
            self.pairs.push(Reverse(Pair {
                sugar: s,
                lcm_degree: dl,
                i: g,
                j: k,
                lcm: l,
            }));
        }

        for g in 0..k {
            if self.active[g] && lh.divides(&lms[g]) {
                self.active[g] = false;
            }
        }
        self.active[k] = true;
    }

    fn spoly(&self, i: usize, j: usize, lcm: &ExponentVector) -> Polynomial<F> {
        let (f, g) = (&self.polys[i], &self.polys[j]);
        let mf = lcm.div(f.leading_monomial().unwrap()).unwrap();
        let mg = lcm.div(g.leading_monomial().unwrap()).unwrap();
        f.mul_term(&F::one(), &mf).sub_scaled_tail(1, &F::one(), &mg, g, 1)
    }
}

/// Reduced Gröbner basis of the ideal generated by `gens` in `ring`'s order.
pub fn buchberger_reduced_basis<F: Field>(
    ring: &Ring,
    gens: &[Polynomial<F>],
    cfg: &GroebnerConfig,
) -> Result<GroebnerBasis<F>> {
    for g in gens {
        if !same_ring(g.ring(), ring) {
            return Err(crate::error::AlgebraError::RingMismatch.into());
        }
    }
    let nonzero: Vec<&Polynomial<F>> = gens.iter().filter(|g| !g.is_zero()).collect();
    if nonzero.is_empty() {
        return Ok(GroebnerBasis {
            ring: ring.clone(),
            basis: Vec::new(),
        });
    }
    if nonzero.iter().any(|g| g.is_constant()) {
        return Ok(GroebnerBasis {
            ring: ring.clone(),
            basis: vec![Polynomial::one(ring)],
        });
    }
    if nonzero.iter().all(|g| g.is_monomial()) {
        let exps: Vec<ExponentVector> = nonzero.iter().map(|g| *g.leading_monomial().unwrap()).collect();
        let mut basis: Vec<Polynomial<F>> = minimalize(exps)
            .into_iter()
            .map(|e| Polynomial::monomial(ring, e))
            .collect();
        sort_basis(ring, &mut basis);
        return Ok(GroebnerBasis {
            ring: ring.clone(),
            basis,
        });
    }

    let mut b = Builder {
        polys: Vec::new(),
        sugar: Vec::new(),
        active: Vec::new(),
        pairs: BinaryHeap::new(),
    };
    let order = ring.order();
    let mut input: Vec<&Polynomial<F>> = nonzero;
    input.sort_by(|a, b| order.compare(a.leading_monomial().unwrap(), b.leading_monomial().unwrap()));
    for g in input {
        let h = reduce(g, &b.reducers());
        if !h.is_zero() {
            let s = g.total_degree().unwrap_or(0);
            b.insert(h.monic(), s);
        }
    }

    let mut reductions = 0u64;
    while let Some(Reverse(pair)) = b.pairs.pop() {
        reductions += 1;
        if reductions > cfg.max_pair_reductions {
            return Err(Error::BudgetExceeded {
                what: "S-pair reductions".into(),
                limit: cfg.max_pair_reductions,
            });
        }
        let s = b.spoly(pair.i, pair.j, &pair.lcm);
        let h = reduce(&s, &b.reducers());
        if h.is_zero() {
            continue;
        }
        if h.is_constant() {
            return Ok(GroebnerBasis {
                ring: ring.clone(),
                basis: vec![Polynomial::one(ring)],
            });
        }
        b.insert(h.monic(), pair.sugar);
        if b.polys.len() > cfg.max_basis_size {
            return Err(Error::BudgetExceeded {
                what: "basis size".into(),
                limit: cfg.max_basis_size as u64,
            });
        }
    }

    let kept: Vec<Polynomial<F>> = b.reducers().into_iter().cloned().collect();
    let mut basis = Vec::with_capacity(kept.len());
    for (i, p) in kept.iter().enumerate() {
        let others: Vec<&Polynomial<F>> = kept
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, q)| q)
            .collect();
        let (c, m) = p.terms()[0].clone();
        let tail = Polynomial::from_sorted_terms(ring, p.terms()[1..].to_vec());
        let tail = reduce(&tail, &others);
        let mut terms = vec![(c, m)];
        terms.extend(tail.into_terms());
        basis.push(Polynomial::from_sorted_terms(ring, terms).monic());
    }
    sort_basis(ring, &mut basis);
    Ok(GroebnerBasis {
        ring: ring.clone(),
        basis,
    })
}

fn sort_basis<F: Field>(ring: &Ring, basis: &mut [Polynomial<F>]) {
    let order = ring.order();
    basis.sort_by(|a, b| order.compare(a.leading_monomial().unwrap(), b.leading_monomial().unwrap()));
}
