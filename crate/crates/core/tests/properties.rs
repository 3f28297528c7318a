use proptest::prelude::*;
use qorbit_core::charring::{twining_mults, weight_mults};
use qorbit_core::exactmath::{laurent_div, laurent_eval, rational, Evaluated};
use qorbit_core::rootsys::{fold, weyl_enumerate, Involution};
use qorbit_core::twistdata::dot;
use qorbit_core::{LaurentPoly, PolarRational, Rat, Rational, RootSystem, TwistingDatum, Weight, WeightFunction};

fn poly() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((-6i64..=6, -5i64..=5), 0..5)
        .prop_map(|ts| LaurentPoly::from_terms(ts.into_iter().map(|(e, c)| (Rat::new(e, 2), rational(c, 1)))))
}

fn exact(e: Evaluated) -> Rational {
    match e {
        Evaluated::Exact(r) => r,
        Evaluated::Approx(x) => panic!("expected an exact value, got {x}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn laurent_ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &LaurentPoly::one(), a.clone());
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn exact_division_inverts_products(a in poly(), b in poly()) {
        prop_assume!(!b.is_zero());
        prop_assert_eq!(laurent_div(&(&a * &b), &b).unwrap(), a);
    }

    #[test]
    fn evaluation_is_a_ring_map(a in poly(), b in poly(), k in 2i64..6) {
        let q = rational(1, k * k);
        let ev = |p: &LaurentPoly| exact(laurent_eval(p, &q).unwrap());
        prop_assert_eq!(ev(&(&a * &b)), ev(&a) * ev(&b));
        prop_assert_eq!(ev(&(&a + &b)), ev(&a) + ev(&b));
    }

    #[test]
    fn dot_action_is_an_action(i in 0usize..12, j in 0usize..12, m in prop::collection::vec((1i64..9, -4i64..5), 2), s in 0usize..3) {
        let signs = [[1, 1], [1, -1], [-1, -1]][s];
        let nu = TwistingDatum::simple("A2", &[], &signs).unwrap();
        let ws: Vec<_> = nu.w_nu().unwrap().into_iter().map(|(w, _)| w).collect();
        let (a, b) = (&ws[i % ws.len()], &ws[j % ws.len()]);
        let lam = WeightFunction::new(
            m.iter().map(|(c, _)| PolarRational::from_real(rational(*c, 3))).collect(),
            m.iter().map(|(_, e)| Rat::new(*e, 2)).collect(),
        ).unwrap();
        for deformed in [false, true] {
            let lhs = dot(&a.mul(b), &nu, &lam, deformed).unwrap();
            let rhs = dot(a, &nu, &dot(b, &nu, &lam, deformed).unwrap(), deformed).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn weyl_group_permutes_roots(label in prop::sample::select(vec!["A3", "B3", "C3", "G2", "D4"]), i in 0usize..400) {
        let rs = RootSystem::from_label(label).unwrap();
        let ws = weyl_enumerate(&rs).unwrap();
        let w = &ws[i % ws.len()];
        let roots = rs.root_set();
        for r in &roots {
            prop_assert!(roots.contains(&w.act(r).unwrap()));
        }
    }

    #[test]
    fn characters_are_weyl_invariant(label in prop::sample::select(vec!["A2", "B2", "G2", "A3"]), hw in prop::collection::vec(0i64..3, 3), i in 0usize..50) {
        let rs = RootSystem::from_label(label).unwrap();
        let hw = Weight::from_ints(&hw[..rs.rank]);
        let table = weight_mults(&rs, &hw).unwrap();
        let ws = weyl_enumerate(&rs).unwrap();
        let w = &ws[i % ws.len()];
        for (mu, m) in &table.mults {
            prop_assert_eq!(table.get(&w.act(mu).unwrap()), *m);
        }
    }

    #[test]
    fn twining_parity_and_bounds(case in 0usize..3, a in 0i64..3, b in 0i64..3) {
        let (label, tau): (&str, &[usize]) = [("A2", &[2, 1][..]), ("A3", &[3, 2, 1][..]), ("D4", &[1, 2, 4, 3][..])][case];
        let rs = RootSystem::from_label(label).unwrap();
        let inv = Involution::from_one_based(&rs, tau).unwrap();
        let f = fold(&rs, &inv).unwrap();
        let mut hw = Weight::zero(rs.rank);
        for (k, cls) in f.classes.iter().enumerate() {
            for &r in cls {
                hw.0[r] = Rat::from([a, b, a + b][k % 3] % 3);
            }
        }
        let m = weight_mults(&rs, &hw).unwrap();
        let j = twining_mults(&f, &hw).unwrap();
        prop_assert_eq!(j.get(&hw), 1);
        for (mu, v) in &j.jvals {
            let d = m.get(mu) as i64;
            prop_assert!(v.abs() <= d);
            prop_assert_eq!((d - v).rem_euclid(2), 0);
        }
    }
}
