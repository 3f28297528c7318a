//! Acceptance checks shared by the CLI and the test-suite.

use crate::charring::{classical_twining, fixed_dominant_weights, twining_mults, weight_mults};
use crate::error::{Error, Result};
use crate::exactmath::{rational, rpow, LaurentPoly, PolarRational, Rat, Rational};
use crate::hc_integral::{compact_pairings, e_gamma, fixed_dominant_by_height, hc_image, invariant_integral, limit_sides, solve_cell_weights, HCartanElement, MultProvider};
use crate::lowrank_models::{
    classify_hw, dot_image_modulus, family_index, family_member, fusion_check, h2_model, h2_stratify_exact, invariance_residual, invariance_residuals_with_power, s_n, verma_gram, BlockSel, HwFamily,
    LowRankProvider, QMono, Stratum, VermaCase,
};
use crate::rootsys::{fold, recognize_cartan, Involution, RootSystem, Weight, WeylElement};
use crate::twistdata::{dot, enumerate_w_minus, w_plus, TwistingDatum, WeightFunction};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::time::Instant;

/// Outcome of one acceptance criterion.
#[derive(Clone, Debug)]
pub struct Report {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{tag}] criterion {:>2} {}: {} ({:.2}s)", self.id, self.name, self.detail, self.seconds)
    }
}

type Outcome = Result<(bool, String)>;

/// Criterion ids with their suite names.
pub const SUITES: [(u8, &str); 11] = [
    (1, "fold"),
    (2, "theosec"),
    (3, "twining"),
    (4, "hc-symmetry"),
    (5, "rank1-state"),
    (6, "classify"),
    (7, "cell-weights"),
    (8, "positivity"),
    (9, "invariance"),
    (10, "grassmannian"),
    (11, "dot-orbits"),
];

fn timed(id: u8, name: &'static str, limit: Option<f64>, f: impl FnOnce() -> Outcome) -> Report {
    let t = Instant::now();
    let res = f();
    let seconds = t.elapsed().as_secs_f64();
    let (mut passed, mut detail) = match res {
        Ok(x) => x,
        Err(e) => (false, format!("error: {e}")),
    };
    if let Some(l) = limit {
        if seconds > l {
            passed = false;
            detail = format!("{detail}; runtime {seconds:.2}s exceeds {l}s");
        }
    }
    Report { id, name, passed, detail, seconds }
}

/// Runs criterion `id` with its default parameters.
pub fn criterion(id: u8) -> Result<Report> {
    let name = SUITES.iter().find(|(i, _)| *i == id).map(|(_, n)| *n).ok_or_else(|| Error::Validation(format!("no criterion {id}")))?;
    Ok(match id {
        1 => timed(id, name, Some(1.0), fold_table),
        2 => timed(id, name, Some(30.0), || theosec(4)),
        3 => timed(id, name, None, || twining_agreement(3)),
        4 => timed(id, name, None, || hc_symmetry(100, 6, 7)),
        5 => timed(id, name, None, rank1_state),
        6 => timed(id, name, None, || classification(20, 200, 11)),
        7 => timed(id, name, None, cell_weights),
        8 => timed(id, name, None, || positivity(20)),
        9 => timed(id, name, None, || invariance(400)),
        10 => timed(id, name, None, || grassmannian(6)),
        _ => timed(id, name, None, || dot_orbits(20)),
    })
}

/// Looks a suite up by name or number.
pub fn suite_id(name: &str) -> Result<u8> {
    if let Ok(i) = name.parse::<u8>() {
        if SUITES.iter().any(|(j, _)| *j == i) {
            return Ok(i);
        }
    }
    SUITES.iter().find(|(_, n)| *n == name).map(|(i, _)| *i).ok_or_else(|| Error::Validation(format!("unknown suite '{name}'")))
}

pub fn all() -> Vec<Report> {
    SUITES.iter().map(|(i, _)| criterion(*i).expect("known id")).collect()
}

fn datum(label: &str, tau: &[usize], eps: &[i64]) -> Result<TwistingDatum> {
    TwistingDatum::simple(label, tau, eps)
}

/// Folding table up to rank 6.
pub fn fold_table() -> Outcome {
    let rev = |n: usize| (1..=n).rev().collect::<Vec<_>>();
    let mut cases: Vec<(String, Vec<usize>, String, bool)> = Vec::new();
    for n in 1..=2 {
        cases.push((format!("A{}", 2 * n + 1), rev(2 * n + 1), format!("C{}", n + 1), false));
    }
    for n in 1..=3 {
        cases.push((format!("A{}", 2 * n), rev(2 * n), format!("BC{n}"), true));
    }
    for n in 4..=6usize {
        let mut t: Vec<usize> = (1..=n).collect();
        t.swap(n - 2, n - 1);
        cases.push((format!("D{n}"), t, format!("B{}", n - 1), false));
    }
    cases.push(("E6".into(), vec![5, 4, 3, 2, 1, 6], "F4".into(), false));
    let mut bad = Vec::new();
    for (l, t, want, nr) in &cases {
        let rs = RootSystem::from_label(l)?;
        let f = fold(&rs, &Involution::from_one_based(&rs, t)?)?;
        let cartan_ok = want.starts_with("BC") || recognize_cartan(&f.cartan).as_deref() == Some(want.as_str());
        if &f.label != want || f.non_reduced != *nr || !cartan_ok {
            bad.push(format!("{l} -> {} (non_reduced {})", f.label, f.non_reduced));
        }
    }
    Ok((bad.is_empty(), if bad.is_empty() { format!("{} foldings reproduced", cases.len()) } else { bad.join(", ") }))
}

fn involutions(label: &str) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    match label {
        "A2" => out.push(vec![2, 1]),
        "A3" => out.push(vec![3, 2, 1]),
        "A4" => out.push(vec![4, 3, 2, 1]),
        "D4" => out.extend([vec![1, 2, 4, 3], vec![3, 2, 1, 4], vec![4, 2, 3, 1]]),
        _ => {}
    }
    out
}

/// Reduced regular twisting data on `label`: signs on fixed nodes, 1 on the other nodes.
pub fn reduced_regular_data(label: &str) -> Result<Vec<TwistingDatum>> {
    let rs = RootSystem::from_label(label)?;
    let mut out = Vec::new();
    for tau in involutions(label) {
        let inv = if tau.is_empty() { Involution::identity(rs.rank) } else { Involution::from_one_based(&rs, &tau)? };
        let fixed = inv.fixed();
        for mask in 0..(1u32 << fixed.len()) {
            let mut eps = vec![1i64; rs.rank];
            for (i, &r) in fixed.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    eps[r] = -1;
                }
            }
            out.push(datum(label, &tau, &eps)?);
        }
    }
    Ok(out)
}

/// Factorisation `W_nu = W_nu^- W_nu^+` on connected types up to `max_rank`.
pub fn theosec(max_rank: usize) -> Outcome {
    let labels = ["A1", "A2", "A3", "A4", "B2", "B3", "B4", "C3", "C4", "D4", "G2", "F4"];
    let mut count = 0;
    let mut bad = Vec::new();
    for l in labels {
        let rs = RootSystem::from_label(l)?;
        if rs.rank > max_rank {
            continue;
        }
        for nu in reduced_regular_data(l)? {
            let wm = enumerate_w_minus(&nu)?;
            let wp = w_plus(&nu)?;
            let wn = nu.w_nu()?;
            let prods: HashSet<Vec<i64>> = wm.iter().flat_map(|(a, _)| wp.iter().map(move |b| a.mul(b).matrix)).collect();
            let inside = wm.iter().all(|(a, _)| wp.iter().all(|b| nu.contains(&a.mul(b))));
            let signs: HashSet<_> = wm.iter().map(|(_, s)| s.clone()).collect();
            count += 1;
            if wm.len() * wp.len() != wn.len() || prods.len() != wn.len() || !inside || signs.len() != wm.len() {
                bad.push(format!("{l} tau={:?} eps={:?}", nu.tau().perm, nu.eps));
            }
        }
    }
    Ok((bad.is_empty(), if bad.is_empty() { format!("{count} data factor correctly") } else { bad.join("; ") }))
}

/// Division-formula and classical twining multiplicities agree.
pub fn twining_agreement(bound: i64) -> Outcome {
    let cases: [(&str, &[usize]); 6] = [("A2", &[2, 1]), ("A3", &[3, 2, 1]), ("A1xA1", &[2, 1]), ("D4", &[1, 2, 4, 3]), ("A2", &[]), ("A3", &[])];
    let mut checked = 0;
    let mut bad = Vec::new();
    for (l, t) in cases {
        let rs = RootSystem::from_label(l)?;
        let inv = if t.is_empty() { Involution::identity(rs.rank) } else { Involution::from_one_based(&rs, t)? };
        let f = fold(&rs, &inv)?;
        for hw in fixed_dominant_weights(&f, bound) {
            let div = twining_mults(&f, &hw)?;
            let ok = if t.is_empty() {
                let m = weight_mults(&rs, &hw)?;
                m.mults.iter().all(|(w, &k)| div.get(w) == k as i64) && div.jvals.iter().all(|(w, &j)| m.get(w) as i64 == j)
            } else {
                let cl = classical_twining(&f, &hw)?;
                cl.twining.jvals.iter().all(|(w, &j)| div.get(w) == j) && div.jvals.iter().all(|(w, &j)| cl.twining.get(w) == j)
            };
            checked += 1;
            if !ok {
                bad.push(format!("{l} {hw}"));
            }
        }
    }
    Ok((bad.is_empty(), if bad.is_empty() { format!("{checked} highest weights agree") } else { bad.join(", ") }))
}

/// `w`-transform of a Cartan element: `T_omega -> (w . -)` substitution written back on the `T`s.
pub fn dot_transform(nu: &TwistingDatum, el: &HCartanElement, w: &WeylElement) -> Result<HCartanElement> {
    let rs = nu.rs();
    let winv = w.inverse(rs);
    let mut out = HCartanElement::zero(el.rank, el.lattice);
    for (om, c) in &el.terms {
        let img = winv.apply(om);
        let diff = om.sub(&img);
        let e = nu.eps_q(&diff)?.to_real().ok_or_else(|| Error::Validation("eps_Q is not real".into()))?;
        let shift = Rat::from(2) * rs.pairing(&rs.rho, &diff);
        out.add_term(img, c.shift(shift).scale(&e));
    }
    Ok(out)
}

/// Evaluation at `q = 2^{-grid}` with every exponent forced onto `Z / grid`.
struct PointEval {
    grid: i64,
    half: Rational,
}

impl PointEval {
    fn q_pow(&self, e: Rat) -> Result<Rational> {
        let k = e * Rat::from(self.grid);
        if !k.is_integer() {
            return Err(Error::Validation(format!("exponent {e} is off the evaluation grid")));
        }
        Ok(rpow(&self.half, k.to_integer()))
    }

    fn poly(&self, p: &LaurentPoly) -> Result<Rational> {
        let mut s = Rational::zero();
        for (e, c) in p.terms() {
            s += c * self.q_pow(*e)?;
        }
        Ok(s)
    }

    fn value(&self, coefs: &[(Weight, Rational)], lam: &WeightFunction, cache: &mut HashMap<Weight, Rational>) -> Result<Rational> {
        let mut s = Rational::zero();
        for (w, c) in coefs {
            if !cache.contains_key(w) {
                let (pc, e) = lam.value(w)?;
                let r = pc.to_real().ok_or_else(|| Error::Validation(format!("lambda_P({w}) is not real")))?;
                cache.insert(w.clone(), r * self.q_pow(e)?);
            }
            s += c * &cache[w];
        }
        Ok(s)
    }
}

fn random_lambda(nu: &TwistingDatum, rng: &mut ChaCha8Rng) -> Result<WeightFunction> {
    let n = nu.rank();
    let mut coef = vec![PolarRational::one(); n];
    let mut exp = vec![Rat::zero(); n];
    for cls in nu.tau().classes() {
        let m = rational(rng.gen_range(1..=9), rng.gen_range(1..=9));
        let e = Rat::new(rng.gen_range(-6..=6), 2);
        if cls.len() == 1 {
            let sgn = if rng.gen_bool(0.5) { 1 } else { -1 };
            coef[cls[0]] = PolarRational::from_real(m * rational(sgn, 1));
        } else {
            let ph = Rat::new(rng.gen_range(0..12), 12);
            coef[cls[0]] = PolarRational::new(m.clone(), ph)?;
            coef[cls[1]] = PolarRational::new(m, -ph)?;
        }
        for &r in &cls {
            exp[r] = e;
        }
    }
    WeightFunction::new(coef, exp)
}

fn grid_gauges(nu: &TwistingDatum) -> Result<Vec<WeightFunction>> {
    let n = nu.rank();
    let pairs: Vec<Vec<usize>> = nu.tau().classes().into_iter().filter(|c| c.len() == 2).collect();
    let mut out = Vec::new();
    for k in [1i64, 3, 5] {
        let mut coef = vec![PolarRational::one(); n];
        for (i, p) in pairs.iter().enumerate() {
            let ph = Rat::new(k * (i as i64 + 1), 12);
            coef[p[0]] = PolarRational::unit(ph);
            coef[p[1]] = PolarRational::unit(-ph);
        }
        out.push(WeightFunction::new(coef, vec![Rat::zero(); n])?);
    }
    Ok(out)
}

/// Data of rank at most 3 used for the Harish-Chandra symmetry check.
pub fn hc_data() -> Result<Vec<TwistingDatum>> {
    Ok(vec![
        datum("A1", &[], &[1])?,
        datum("A1", &[], &[-1])?,
        datum("A1xA1", &[2, 1], &[1, 1])?,
        datum("A2", &[], &[1, -1])?,
        datum("A2", &[2, 1], &[1, 1])?,
        datum("B2", &[], &[-1, 1])?,
        datum("G2", &[], &[1, -1])?,
        datum("A3", &[3, 2, 1], &[1, -1, 1])?,
        datum("A3", &[], &[-1, 1, -1])?,
        datum("B3", &[], &[1, 1, -1])?,
        datum("C3", &[], &[-1, 1, 1])?,
    ])
}

/// Exact `W_nu` and gauge invariance of every central character of height at most `max_height`.
pub fn hc_symmetry(samples: usize, max_height: i64, seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut evals = 0usize;
    let mut bad = Vec::new();
    for nu in hc_data()? {
        let rs = nu.rs();
        let wnu = nu.w_nu()?;
        let mut elements = Vec::new();
        for hw in fixed_dominant_by_height(&nu, Rat::from(max_height)) {
            let el = hc_image(&nu, &hw, &twining_mults(&nu.folded, &hw)?)?;
            for (w, _) in &wnu {
                if dot_transform(&nu, &el, w)? != el {
                    bad.push(format!("{} formal {hw} {w}", rs.label));
                }
            }
            elements.push(el);
        }
        let mut grid = 2i64;
        for el in &elements {
            for (w, c) in &el.terms {
                grid = num_integer::lcm(grid, *(Rat::from(2) * rs.pairing(&rs.rho, w)).denom());
                for e in c.terms().keys() {
                    grid = num_integer::lcm(grid, *e.denom());
                }
            }
        }
        let pe = PointEval { grid, half: rational(1, 2) };
        let coefs: Vec<Vec<(Weight, Rational)>> = elements
            .iter()
            .map(|el| el.terms.iter().map(|(w, c)| pe.poly(c).map(|v| (w.clone(), v))).collect::<Result<_>>())
            .collect::<Result<_>>()?;
        let gauges = grid_gauges(&nu)?;
        for _ in 0..samples {
            let lam = random_lambda(&nu, &mut rng)?;
            let mut cache = HashMap::new();
            let base: Vec<Rational> = coefs.iter().map(|c| pe.value(c, &lam, &mut cache)).collect::<Result<_>>()?;
            let mut others: Vec<WeightFunction> = wnu.iter().map(|(w, _)| dot(w, &nu, &lam, true)).collect::<Result<_>>()?;
            others.extend(gauges.iter().map(|g| lam.times(g)));
            for mu in &others {
                let mut cache = HashMap::new();
                for (c, b) in coefs.iter().zip(&base) {
                    evals += 1;
                    if &pe.value(c, mu, &mut cache)? != b {
                        bad.push(format!("{} lambda={lam} mu={mu}", rs.label));
                    }
                }
            }
        }
    }
    bad.truncate(5);
    Ok((bad.is_empty(), if bad.is_empty() { format!("{evals} exact evaluations invariant") } else { bad.join("; ") }))
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
}

/// Invariant integrals against rank one trace states.
pub fn rank1_state() -> Outcome {
    let q = rational(1, 2);
    let qf = 0.5;
    let mut notes = Vec::new();
    let mut ok = true;
    // S_plus(1, n): z spectrum q^{-n+2j}, exact comparison
    let nu = datum("A1", &[], &[1])?;
    for n in 0..=5i64 {
        let lam = WeightFunction::new(vec![PolarRational::one()], vec![Rat::from(-n)])?;
        let spectrum: Vec<Rational> = (0..=n).map(|j| rpow(&q, 2 * j - n)).collect();
        let tr = |k: usize| spectrum.iter().map(|z| rpow(z, k as i64)).fold(Rational::zero(), |a, b| a + b);
        for k in 0..=3usize {
            let v = invariant_integral(&nu, &lam, &Weight::from_ints(&[k as i64]))?.exact(&q)?;
            if v != Some(tr(k + 1) / tr(1)) {
                ok = false;
                notes.push(format!("S_plus n={n} k={k}"));
            }
        }
    }
    let mut worst: f64 = 0.0;
    // S_zero(t) with lambda = q t, and S_minus(1, a) with lambda = a q
    let cases = [("A1", 0i64, Stratum::Zero { t: 1.5 }, rational(3, 2)), ("A1", -1, Stratum::Minus { c: 1.0, a: 1.5 }, rational(3, 2))];
    for (l, e, s, c) in cases {
        let nu = datum(l, &[], &[e])?;
        let lam = WeightFunction::new(vec![PolarRational::from_real(c)], vec![Rat::one()])?;
        let model = h2_model(s, BlockSel::All, 400, qf)?;
        for k in 0..=3usize {
            let int = invariant_integral(&nu, &lam, &Weight::from_ints(&[k as i64]))?.value_f64(qf);
            let st = model.state(&model.monomial(&vec![0; k]));
            let err = (int - st).abs() / int.abs().max(st.abs());
            worst = worst.max(err);
            if !rel_close(int, st, 1e-10) {
                ok = false;
                notes.push(format!("{} k={k}: {int} vs {st}", s.name()));
            }
        }
    }
    notes.insert(0, format!("S_plus exact for n<=5, k<=3; S_zero/S_minus worst relative error {worst:.1e}"));
    Ok((ok, notes.join("; ")))
}

/// Classification against sign scans, strata grid, and random rejections.
pub fn classification(n_max: u32, n_random: usize, seed: u64) -> Outcome {
    let q = rational(1, 2);
    let one = Rational::one();
    let mut notes = Vec::new();
    let mut ok = true;
    for case in [VermaCase::A1H2, VermaCase::A1xA1, VermaCase::A2Twisted] {
        let c = classify_hw(case, &one, &q, n_max)?;
        let expect: Vec<Rat> = (0..=n_max as i64)
            .map(|n| match case {
                VermaCase::A1H2 => Rat::from(-n),
                VermaCase::A1xA1 => Rat::new(1 - n, 2),
                VermaCase::A2Twisted => Rat::new(3 - n, 2),
            })
            .collect();
        match c.family {
            HwFamily::Discrete(m) if m.iter().map(|x| x.exp).eq(expect.iter().copied()) && m.iter().all(|x| x.coef.is_one()) => {}
            _ => {
                ok = false;
                notes.push(format!("{} family mismatch", case.name()));
            }
        }
        if !matches!(classify_hw(case, &Rational::zero(), &q, n_max)?.family, HwFamily::AllModuli) {
            ok = false;
            notes.push(format!("{} eps=0", case.name()));
        }
    }
    if !matches!(classify_hw(VermaCase::A1H2, &-one.clone(), &q, n_max)?.family, HwFamily::HalfLines) {
        ok = false;
        notes.push("A1 eps<0".into());
    }
    // S_plus grid: t = c s_n admissible, midpoints rejected
    for c in [rational(1, 1), rational(-2, 1), rational(1, 3)] {
        for n in 0..=n_max {
            let sn = rpow(&q, -(n as i64) - 1) + rpow(&q, n as i64 + 1);
            let d = &c * &c;
            match h2_stratify_exact(&d, &(&c * &sn), &q)? {
                Some(Stratum::Plus { n: m, .. }) if m == n => {}
                other => {
                    ok = false;
                    notes.push(format!("grid c={c} n={n}: {other:?}"));
                }
            }
            let mid = (s_n(n, 0.5) + s_n(n + 1, 0.5)) / 2.0;
            let mid = Rational::from_float(mid).unwrap() * &c;
            if h2_stratify_exact(&d, &mid, &q)?.is_some() {
                ok = false;
                notes.push(format!("off-grid c={c} n={n} accepted"));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rejected = 0;
    let mut tried = 0;
    while tried < n_random {
        let case = [VermaCase::A1H2, VermaCase::A1xA1, VermaCase::A2Twisted][tried % 3];
        let lam = QMono::new(rational(rng.gen_range(1..=12), rng.gen_range(1..=12)), Rat::new(rng.gen_range(-24..=24), 4))?;
        if family_index(case, &lam, &one, &q, 60)?.is_some() {
            continue;
        }
        tried += 1;
        if !verma_gram(case, &lam, &one, 400, &q)?.unitarizable {
            rejected += 1;
        }
    }
    if rejected != n_random {
        ok = false;
    }
    notes.insert(0, format!("families n<=20 confirmed by sign scans; grid checks done; {rejected}/{n_random} off-family weights rejected"));
    Ok((ok, notes.join("; ")))
}

/// Cell weights from the normalisation equations against `|e_gamma|` and the limit identity.
pub fn cell_weights() -> Outcome {
    let q = rational(1, 2);
    let qf = 0.5;
    let eps = rational(-1, 1);
    let nu = VermaCase::A1H2.datum(&eps)?;
    let prov = LowRankProvider { case: VermaCase::A1H2, eps: eps.clone(), q: q.clone() };
    let mut worst: f64 = 0.0;
    let mut limit_worst: f64 = 0.0;
    const DEPTH: usize = 80;
    for g in [Rat::new(1, 3), Rat::new(1, 4), Rat::new(-1, 2)] {
        let gamma = Weight(vec![g]);
        let lam = WeightFunction::from_gamma(nu.rs(), &gamma);
        let eg = e_gamma(&nu, &lam)?.value_f64(qf).abs();
        let cw = solve_cell_weights(&nu, &lam, &prov, DEPTH, &q)?;
        for c in &cw {
            worst = worst.max((c - eg).abs() / eg);
        }
        for ((w, _), c) in enumerate_w_minus(&nu)?.iter().zip(&cw) {
            let h = dot(w, &nu, &lam, true)?;
            let m = prov.mults(w, &h, DEPTH)?;
            let (l, r) = limit_sides(&nu, &gamma, w, &m, 60, qf)?;
            let (lhs, rhs) = (c * l, eg * r);
            limit_worst = limit_worst.max((lhs - rhs).abs() / lhs.abs().max(rhs.abs()));
        }
    }
    Ok((worst < 1e-8 && limit_worst < 1e-8, format!("max |c_w - |e_gamma||/|e_gamma| = {worst:.1e}; limit sides at n=60 differ by {limit_worst:.1e}")))
}

/// `(rho - gamma, beta) > 0` on compact positive roots for classified weights.
pub fn positivity(n_max: u32) -> Outcome {
    let one = Rational::one();
    let q = rational(1, 2);
    let mut checked = 0;
    let mut bad = Vec::new();
    let mut check = |nu: &TwistingDatum, lam: &WeightFunction, what: String| -> Result<()> {
        let gamma = lam.gamma(nu.rs()).ok_or_else(|| Error::Validation("lambda is not a q-power".into()))?;
        for (b, p) in compact_pairings(nu, &gamma)? {
            checked += 1;
            if p <= Rat::zero() {
                bad.push(format!("{what} beta={b}"));
            }
        }
        Ok(())
    };
    for (case, nu) in [
        (VermaCase::A1H2, datum("A1", &[], &[1])?),
        (VermaCase::A1xA1, datum("A1xA1", &[2, 1], &[1, 1])?),
        (VermaCase::A2Twisted, datum("A2", &[2, 1], &[1, 1])?),
    ] {
        match classify_hw(case, &one, &q, n_max)?.family {
            HwFamily::Discrete(members) => {
                for (n, m) in members.iter().enumerate() {
                    check(&nu, &m.weight_function(nu.rank()), format!("{} n={n}", case.name()))?;
                }
            }
            _ => return Ok((false, "expected a discrete family".into())),
        }
    }
    let neg = datum("A1", &[], &[-1])?;
    let vacuous = crate::twistdata::compact_roots(&neg)?.positive.is_empty();
    for e in [-3i64, -1, 0, 2, 5] {
        check(&neg, &WeightFunction::new(vec![PolarRational::one()], vec![Rat::from(e)])?, format!("A1- e={e}"))?;
    }
    Ok((bad.is_empty() && vacuous, format!("{checked} exact pairings positive; A1 eps=-1 has no compact roots: {vacuous}")))
}

/// Invariance residuals and fusion spectra of the truncated rank one models.
pub fn invariance(cutoff: usize) -> Outcome {
    let qf = 0.5;
    let mut worst: f64 = 0.0;
    let mut rel: f64 = 0.0;
    let mut fusion: f64 = 0.0;
    let mut missing = 0;
    let mut control = f64::INFINITY;
    for s in [Stratum::Plus { c: 1.0, n: 4 }, Stratum::Zero { t: 1.5 }, Stratum::Minus { c: 1.0, a: 1.5 }] {
        let m = h2_model(s, BlockSel::All, cutoff, qf)?;
        worst = worst.max(invariance_residual(&m));
        let wrong = invariance_residuals_with_power(&m, 3, 2.0).iter().map(|r| r.e_action).fold(0.0, f64::max);
        control = control.min(wrong);
        rel = rel.max(m.relation_residual());
        let f = fusion_check(&h2_model(s, BlockSel::All, 300, qf)?, 300, &[-2, -1, 0, 1, 2]);
        fusion = fusion.max(f.max_deviation);
        missing += f.missing.len();
    }
    let ok = worst <= 1e-10 && rel <= 1e-12 && fusion <= 1e-8 && missing == 0 && control > 1e-6;
    Ok((ok, format!("state residual {worst:.1e} (|z|^2-weighted control {control:.1e}), relation residual {rel:.1e}, fusion deviation {fusion:.1e}, missing eigenvalues {missing}")))
}

fn permutation(rs: &RootSystem, w: &WeylElement) -> Option<Vec<usize>> {
    let n = rs.rank + 1;
    let e = |i: usize| {
        let mut v = Weight::zero(rs.rank);
        if i < n - 1 {
            v.0[i] += Rat::one();
        }
        if i > 0 {
            v.0[i - 1] -= Rat::one();
        }
        v
    };
    let basis: Vec<Weight> = (0..n).map(e).collect();
    (0..n).map(|i| basis.iter().position(|b| *b == w.apply(&basis[i]))).collect()
}

/// `W^-` in type A with one negative sign equals the set of shuffles.
pub fn grassmannian(max_n: usize) -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    let mut count = 0;
    for n in 2..=max_n {
        for m in 1..n {
            let eps: Vec<i64> = (1..n).map(|r| if r == m { -1 } else { 1 }).collect();
            let nu = datum(&format!("A{}", n - 1), &[], &eps)?;
            let got: BTreeSet<Vec<usize>> = enumerate_w_minus(&nu)?
                .iter()
                .map(|(w, _)| permutation(nu.rs(), w).ok_or_else(|| Error::Validation("not a permutation".into())))
                .collect::<Result<_>>()?;
            let mut want = BTreeSet::new();
            for mask in 0u32..(1 << n) {
                if mask.count_ones() as usize != m {
                    continue;
                }
                let first: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
                let second: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 0).collect();
                want.insert([first, second].concat());
            }
            let binom = (0..m).fold(1usize, |a, i| a * (n - i) / (i + 1));
            count += 1;
            if got != want || got.len() != binom {
                ok = false;
                notes.push(format!("A{} m={m}: {} vs {}", n - 1, got.len(), binom));
            }
        }
    }
    notes.insert(0, format!("{count} (N, m) pairs equal the shuffle sets"));
    Ok((ok, notes.join("; ")))
}

/// Dot images of the classified families are disjoint from the families.
pub fn dot_orbits(n_max: u32) -> Outcome {
    let q = rational(1, 2);
    let one = Rational::one();
    let mut ok = true;
    let mut notes = Vec::new();
    let mut count = 0;
    for case in [VermaCase::A1H2, VermaCase::A1xA1, VermaCase::A2Twisted] {
        let fam: Vec<QMono> = (0..=4 * n_max + 8).map(|n| family_member(case, &one, n)).collect::<Result<_>>()?;
        for n in 0..=n_max {
            let (c, e) = dot_image_modulus(case, &fam[n as usize], &one)?;
            let img = QMono::new(c.clone(), e)?;
            let mut hit = false;
            for m in &fam {
                hit |= m.equals_at(&img, &q)?;
            }
            let predicted = match case {
                VermaCase::A1H2 => None,
                VermaCase::A1xA1 => Some(Rat::new(3 + n as i64, 2)),
                VermaCase::A2Twisted => Some(Rat::new(5 + n as i64, 2)),
            };
            count += 1;
            if hit || predicted.is_some_and(|p| p != e || !c.is_one()) {
                ok = false;
                notes.push(format!("{} n={n}: image {img}", case.name()));
            }
        }
    }
    notes.insert(0, format!("{count} dot images avoid their families"));
    Ok((ok, notes.join("; ")))
}
