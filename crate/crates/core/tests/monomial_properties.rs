use blowup_core::monomial_ideal::for_each_in_box;
use blowup_core::oracle::random_m_primary;
use blowup_core::{
    analyze_instance, artinian_quotient_length, integral_closure, integral_closure_of_power, minimal_reduction, minimalize,
    np_membership, ratliff_rush_closure, AnalysisConfig, Filtration, FiltrationConfig, FiltrationKind,
    GroebnerConfig, MonomialIdeal, QIdeal, Rational, RingDescriptor, Term,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn ideal(nvars: usize, max_degree: u32) -> impl Strategy<Value = MonomialIdeal> {
    any::<u64>().prop_map(move |seed| random_m_primary(&mut ChaCha8Rng::seed_from_u64(seed), nvars, max_degree))
}

fn q(m: &MonomialIdeal) -> QIdeal {
    let names = ["x", "y", "z"];
    let ring = RingDescriptor::new::<Rational, _>(&names[..m.nvars()]).unwrap();
    QIdeal::from_monomial_ideal(&ring, m).unwrap()
}

/// Closure by scanning a box one larger than the componentwise maximum.
fn closure_in_wider_box(i: &MonomialIdeal) -> MonomialIdeal {
    let upper: Vec<u32> = i.max_exponents().iter().map(|e| e + 1).collect();
    let mut found = Vec::new();
    for_each_in_box(&upper, |v| {
        if np_membership(v, i).unwrap() {
            found.push(*v);
        }
    });
    MonomialIdeal::new(i.nvars(), minimalize(found)).unwrap()
}

fn monomial_term(f: &mut Filtration<Rational>, n: i64) -> MonomialIdeal {
    match f.term(n).unwrap() {
        Term::Monomial(m) => m,
        Term::General(_) => panic!("monomial base gave a general term"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn closure_is_a_closure_operator(i in ideal(3, 4), j in ideal(3, 4)) {
        let bar = integral_closure(&i);
        prop_assert!(bar.contains_ideal(&i));
        prop_assert_eq!(integral_closure(&bar), bar.clone());
        let meet = i.intersection(&j);
        prop_assert!(bar.contains_ideal(&integral_closure(&meet)));
    }

    #[test]
    fn closure_agrees_with_a_wider_box(i in ideal(2, 5)) {
        prop_assert_eq!(integral_closure(&i), closure_in_wider_box(&i));
    }

    #[test]
    fn closures_of_powers_contain_powers_of_closures(i in ideal(2, 4)) {
        let bar = integral_closure(&i);
        for n in 1..=4 {
            prop_assert!(integral_closure_of_power(&i, n).contains_ideal(&bar.power(n)), "n = {}", n);
        }
    }

    #[test]
    fn staircase_counts_the_artinian_length(i in ideal(3, 4)) {
        let groebner = artinian_quotient_length(&q(&i), &GroebnerConfig::default()).unwrap();
        prop_assert_eq!(i.staircase_length().unwrap(), groebner);
    }

    #[test]
    fn ratliff_rush_closure_lies_in_the_integral_closure(i in ideal(2, 5)) {
        let rr = ratliff_rush_closure(&q(&i), 1, &FiltrationConfig::default()).unwrap();
        let rr = rr.as_monomial_ideal().unwrap();
        prop_assert!(rr.contains_ideal(&i));
        prop_assert!(integral_closure(&i).contains_ideal(&rr));
    }

    #[test]
    fn filtration_axioms(i in ideal(3, 3)) {
        let cfg = FiltrationConfig::default();
        for kind in [FiltrationKind::Adic(q(&i)), FiltrationKind::IntegralClosure(q(&i)), FiltrationKind::RatliffRush(q(&i))] {
            let mut f = Filtration::new(kind, &cfg).unwrap();
            let terms: Vec<MonomialIdeal> = (0..=5).map(|n| monomial_term(&mut f, n)).collect();
            prop_assert!(terms[0].is_unit());
            for n in 0..5 {
                prop_assert!(terms[n].contains_ideal(&terms[n + 1]));
                prop_assert!(terms[n + 1].contains_ideal(&i.product(&terms[n])));
            }
        }
    }

    #[test]
    fn veronese_and_shift_relations(i in ideal(2, 4), l in 2u32..=3, s in 0i64..=3) {
        let cfg = FiltrationConfig::default();
        let base = || FiltrationKind::Adic(q(&i));
        let mut f = Filtration::new(base(), &cfg).unwrap();
        let mut v = Filtration::new(FiltrationKind::Veronese(Box::new(base()), l), &cfg).unwrap();
        let mut sh = Filtration::new(FiltrationKind::Shift(Box::new(base()), s), &cfg).unwrap();
        for n in 0..4i64 {
            // H_V(n) = H_F(l(n+1) - 1), i.e. ℓ(A/v_{n+1}) = ℓ(A/a_{l(n+1)})
            prop_assert_eq!(v.length(n + 1).unwrap(), f.length(l as i64 * (n + 1)).unwrap());
            prop_assert_eq!(monomial_term(&mut sh, n), monomial_term(&mut f, n + s));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn reductions_are_seed_reproducible(i in ideal(3, 4), seed in any::<u64>()) {
        let cfg = AnalysisConfig::default();
        let a = minimal_reduction(&q(&i), seed, &cfg).unwrap();
        let b = minimal_reduction(&q(&i), seed, &cfg).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn analysis_invariants(i in ideal(3, 4), seed in any::<u64>()) {
        let r = analyze_instance(&q(&i), seed, &AnalysisConfig::default()).unwrap();
        prop_assert!(r.errors.is_empty(), "{:?}", r.errors);
        let h = r.hilbert_adic.as_ref().unwrap();
        prop_assert_eq!(h.h.iter().sum::<i64>(), h.e_int(0));
        prop_assert_eq!(r.e0_volume, Some(h.e_int(0) as u64));
        let red = r.reduction.as_ref().unwrap();
        let rn = red.reduction_number as usize;
        prop_assert!(red.sigma.iter().skip(rn).all(|&s| s == 0), "{:?} with red {}", red.sigma, rn);
        let depth = r.depth.as_ref().unwrap();
        prop_assert!(!depth.cm || depth.depth_ge1);
        prop_assert!(depth.depth_lower_bound <= depth.depth_upper_bound);
        // reported only once the depth hypothesis is certified
        if let Some(id) = &r.identities {
            prop_assert!(id.all_hold, "{:?}", id.checks);
            prop_assert_eq!(red.sigma.iter().sum::<u64>() as i64, h.e_int(1));
        }
        if integral_closure(&i) == i {
            prop_assert_ne!(r.verdict.integrally_closed_identity, Some(false));
        }
    }
}
