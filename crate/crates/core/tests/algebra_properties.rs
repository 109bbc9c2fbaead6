use blowup_core::{
    buchberger_reduced_basis, ideal_colon, ideal_contains, ideal_intersection, ideal_product, ideals_equal,
    parse_polynomial, ExponentVector, Field, GroebnerConfig, QIdeal, QPolynomial, Rational, Ring, RingDescriptor,
};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn ring() -> Ring {
    RingDescriptor::new::<Rational, _>(&["x", "y", "z"]).unwrap()
}

fn small_budget() -> GroebnerConfig {
    GroebnerConfig {
        max_pair_reductions: 2_000,
        max_basis_size: 200,
    }
}

fn polynomial(max_deg: u32, max_terms: usize) -> impl Strategy<Value = QPolynomial> {
    prop::collection::vec((-6i64..=6, prop::array::uniform3(0..=max_deg)), 0..=max_terms).prop_map(|terms| {
        let r = ring();
        let terms = terms
            .into_iter()
            .map(|(c, e)| (Rational::from_i64(c), ExponentVector::from_slice(&e)))
            .collect();
        QPolynomial::from_terms(&r, terms).unwrap()
    })
}

fn fraction() -> impl Strategy<Value = Rational> {
    (-50i64..=50, 1i64..=30).prop_map(|(n, d)| Rational::from_i64(n) / Rational::from_i64(d))
}

/// Small ideals that usually finish within the small budget.
fn small_ideal() -> impl Strategy<Value = QIdeal> {
    prop::collection::vec(polynomial(2, 3), 1..=3).prop_map(|gens| QIdeal::new(&ring(), gens).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(f in polynomial(3, 5), g in polynomial(3, 5), h in polynomial(3, 5)) {
        prop_assert_eq!(&(&f + &g) + &h, &f + &(&g + &h));
        prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
        prop_assert_eq!(&f * &g, &g * &f);
        prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
        prop_assert!((&f - &f).is_zero());
    }

    #[test]
    fn equal_polynomials_have_equal_term_lists(f in polynomial(3, 5), g in polynomial(3, 5)) {
        let sum = &f + &g;
        let other = &g + &f;
        prop_assert_eq!(sum.terms(), other.terms());
        prop_assert_eq!(f == g, f.terms() == g.terms());
    }

    #[test]
    fn printed_polynomials_parse_back(f in polynomial(4, 6)) {
        let r = ring();
        let back: QPolynomial = parse_polynomial(&f.to_string(), &r).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn rational_chains_ignore_operand_order(
        ops in prop::collection::vec((fraction(), fraction()), 1000),
        perm_seed in any::<u64>(),
    ) {
        let value = |pairs: &[(Rational, Rational)]| {
            pairs.iter().fold(Rational::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
        };
        let product = |pairs: &[(Rational, Rational)]| {
            pairs.iter().take(40).fold(Rational::one(), |acc, (a, b)| acc * (a.clone() + b.clone() + Rational::one()))
        };
        let mut shuffled: Vec<(Rational, Rational)> = ops.iter().map(|(a, b)| (b.clone(), a.clone())).collect();
        let head: Vec<_> = shuffled.drain(..40).collect();
        let mut state = perm_seed | 1;
        for i in (1..shuffled.len()).rev() {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            shuffled.swap(i, (state % (i as u64 + 1)) as usize);
        }
        let mut head = head;
        head.reverse();
        let rejoined: Vec<_> = head.iter().cloned().chain(shuffled.iter().cloned()).collect();
        prop_assert_eq!(value(&ops), value(&rejoined));
        prop_assert_eq!(product(&ops), product(&head));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn groebner_bases_are_closed_under_s_pairs(ideal in small_ideal()) {
        let r = ring();
        let gb = match buchberger_reduced_basis(&r, ideal.generators(), &small_budget()) {
            Ok(gb) => gb,
            Err(e) if e.is_resource() => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        for g in ideal.generators() {
            prop_assert!(gb.normal_form(g).unwrap().is_zero());
        }
        let basis = gb.basis();
        for i in 0..basis.len() {
            for j in i + 1..basis.len() {
                let (f, g) = (&basis[i], &basis[j]);
                let (lf, lg) = (f.leading_monomial().unwrap(), g.leading_monomial().unwrap());
                let l = lf.lcm(lg);
                let s = &f.mul_term(&(Rational::one() / f.leading_coeff().unwrap().clone()), &l.div(lf).unwrap())
                    - &g.mul_term(&(Rational::one() / g.leading_coeff().unwrap().clone()), &l.div(lg).unwrap());
                prop_assert!(gb.normal_form(&s).unwrap().is_zero(), "S({}, {}) does not reduce to 0", f, g);
            }
        }
    }

    #[test]
    fn ideal_equality_ignores_generator_order(i in small_ideal(), j in small_ideal()) {
        let cfg = small_budget();
        let mut gens = i.generators().to_vec();
        gens.reverse();
        if !gens.is_empty() {
            gens.rotate_left(1);
        }
        let shuffled = QIdeal::new(&ring(), gens).unwrap();
        match (ideals_equal(&i, &shuffled, &cfg), ideals_equal(&i, &j, &cfg), ideals_equal(&shuffled, &j, &cfg)) {
            (Ok(same), Ok(a), Ok(b)) => {
                prop_assert!(same);
                prop_assert_eq!(a, b);
            }
            (Err(e), ..) | (_, Err(e), _) | (.., Err(e)) => prop_assume!(e.is_resource(), "{}", e),
        }
    }

    #[test]
    fn colon_and_intersection_containments(
        i in prop::collection::vec(polynomial(2, 2), 1..=2),
        j in prop::collection::vec(polynomial(2, 2), 1..=2),
    ) {
        let (i, j) = (QIdeal::new(&ring(), i).unwrap(), QIdeal::new(&ring(), j).unwrap());
        let cfg = GroebnerConfig {
            max_pair_reductions: 300,
            max_basis_size: 60,
        };
        let run = || -> blowup_core::Result<()> {
            let q = ideal_colon(&i, &j, &cfg)?;
            assert!(ideal_contains(&i, &ideal_product(&j, &q, &cfg)?, &cfg)?, "J·(I:J) ⊄ I");
            let meet = ideal_intersection(&i, &j, &cfg)?;
            assert!(ideal_contains(&i, &meet, &cfg)? && ideal_contains(&j, &meet, &cfg)?);
            assert!(ideal_contains(&meet, &ideal_product(&i, &j, &cfg)?, &cfg)?, "IJ ⊄ I ∩ J");
            Ok(())
        };
        if let Err(e) = run() {
            prop_assume!(e.is_resource(), "{}", e);
        }
    }
}
