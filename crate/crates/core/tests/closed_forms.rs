use num_traits::ToPrimitive;
use qorbit_core::charring::{fixed_dominant_weights, twining_mults, weight_mults};
use qorbit_core::exactmath::rational;
use qorbit_core::hc_integral::invariant_integral;
use qorbit_core::lowrank_models::{family_member, h2_model, h2_stratify, s_n, BlockSel, Stratum, VermaCase};
use qorbit_core::rootsys::{fold, Involution};
use qorbit_core::{Rat, RootSystem, TwistingDatum, Weight, WeightFunction};

fn f(r: Rat) -> f64 {
    r.to_f64().unwrap()
}

/// Quotient of alternating sums over `W_nu` divided by the quantum dimension.
fn alternating_integral(nu: &TwistingDatum, gamma: &Weight, hw: &Weight, q: f64) -> f64 {
    let rs = nu.rs();
    let alt = |x: &Weight| -> f64 {
        nu.w_nu()
            .unwrap()
            .iter()
            .map(|(w, s)| {
                let wx = w.act(x).unwrap();
                let e = nu.eps_q(&x.sub(&wx)).unwrap().to_real().unwrap().to_f64().unwrap();
                *s as f64 * e * q.powf(2.0 * f(rs.pairing(&gamma.sub(&rs.rho), &wx)))
            })
            .sum()
    };
    let m = weight_mults(rs, hw).unwrap();
    let qdim: f64 = m.mults.iter().map(|(w, k)| *k as f64 * q.powf(2.0 * f(rs.pairing(&rs.rho, w)))).sum();
    alt(&hw.add(&rs.rho)) / alt(&rs.rho) / qdim
}

#[test]
fn integral_matches_alternating_formula() {
    let q = 0.3;
    let cases: [(&str, &[usize], &[i64], &[i64]); 5] = [
        ("A1", &[], &[1], &[1]),
        ("A1", &[], &[-1], &[1]),
        ("A2", &[], &[1, -1], &[1, 1]),
        ("B2", &[], &[-1, 1], &[1, 2]),
        ("A1xA1", &[2, 1], &[1, 1], &[1, 1]),
    ];
    for (label, tau, eps, g) in cases {
        let nu = TwistingDatum::simple(label, tau, eps).unwrap();
        let gamma = Weight(g.iter().map(|&x| Rat::new(x, 5)).collect());
        let lam = WeightFunction::from_gamma(nu.rs(), &gamma);
        for hw in fixed_dominant_weights(&nu.folded, 2) {
            let want = alternating_integral(&nu, &gamma, &hw, q);
            let got = invariant_integral(&nu, &lam, &hw).unwrap().value_f64(q);
            assert!((got - want).abs() <= 1e-11 * want.abs().max(1.0), "{label} {hw}: {got} vs {want}");
        }
    }
}

#[test]
fn central_character_plane() {
    let q = 0.5;
    for n in 0..6 {
        for c in [1.0, -0.5, 3.0] {
            assert_eq!(h2_stratify(c * c, c * s_n(n, q), q).unwrap(), Some(Stratum::Plus { c, n }));
        }
    }
    assert!(matches!(h2_stratify(0.0, 2.0, q).unwrap(), Some(Stratum::Zero { .. })));
    assert!(matches!(h2_stratify(-2.0, 0.7, q).unwrap(), Some(Stratum::Minus { .. })));
    assert_eq!(h2_stratify(1.0, 0.5 * (s_n(0, q) + s_n(1, q)), q).unwrap(), None);
}

#[test]
fn finite_stratum_is_a_matrix_algebra() {
    // the irreducible representation on S_+ has dimension n + 1 and z has spectrum c q^{-n + 2j}
    let q = 0.5;
    for n in 0..5u32 {
        let m = h2_model(Stratum::Plus { c: 2.0, n }, BlockSel::All, 50, q).unwrap();
        let mut mu = m.blocks[0].mu().to_vec();
        mu.sort_by(f64::total_cmp);
        let mut want: Vec<f64> = (0..=n).map(|j| 2.0 * q.powi(2 * j as i32 - n as i32)).collect();
        want.sort_by(f64::total_cmp);
        assert_eq!(mu.len(), want.len());
        for (a, b) in mu.iter().zip(&want) {
            assert!((a - b).abs() < 1e-12 * b);
        }
    }
}

#[test]
fn folding_types() {
    let cases: [(&str, &[usize], &str); 5] = [
        ("A3", &[3, 2, 1], "C2"),
        ("A4", &[4, 3, 2, 1], "BC2"),
        ("A5", &[5, 4, 3, 2, 1], "C3"),
        ("D4", &[1, 2, 4, 3], "B3"),
        ("E6", &[5, 4, 3, 2, 1, 6], "F4"),
    ];
    for (label, tau, want) in cases {
        let rs = RootSystem::from_label(label).unwrap();
        let f = fold(&rs, &Involution::from_one_based(&rs, tau).unwrap()).unwrap();
        assert_eq!(f.label, want, "{label}");
        assert_eq!(f.non_reduced, want.starts_with("BC"));
    }
}

#[test]
fn rank_two_families() {
    let one = rational(1, 1);
    for n in 0..10u32 {
        let a = family_member(VermaCase::A1xA1, &one, n).unwrap();
        assert_eq!(a.exp, Rat::new(1 - n as i64, 2));
        let b = family_member(VermaCase::A2Twisted, &one, n).unwrap();
        assert_eq!(b.exp, Rat::new(3 - n as i64, 2));
        let c = family_member(VermaCase::A1H2, &one, n).unwrap();
        assert_eq!(c.exp, Rat::from(-(n as i64)));
    }
}

#[test]
fn twining_of_adjoint_a2() {
    // adjoint of A2 under the diagram flip: zero weight space of dimension 2 has trace 0
    let rs = RootSystem::from_label("A2").unwrap();
    let f = fold(&rs, &Involution::from_one_based(&rs, &[2, 1]).unwrap()).unwrap();
    let j = twining_mults(&f, &Weight::from_ints(&[1, 1])).unwrap();
    assert_eq!(j.get(&Weight::from_ints(&[0, 0])), 0);
    assert_eq!(j.get(&Weight::from_ints(&[1, 1])), 1);
}
