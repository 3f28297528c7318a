//! Harish-Chandra images of central elements, invariant integrals and cell weights.

use crate::charring::{q_dim, weight_mults, TwiningTable};
use crate::error::{invalid, Error, Result};
use crate::exactmath::{laurent_div, to_f64, LaurentPoly, PolarRational, RadicalValue, Rat, Rational};
use crate::rootsys::{Weight, WeylElement};
use crate::twistdata::{compact_roots, dot, enumerate_w_minus, w_plus, TwistingDatum, WeightFunction};
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;

/// Lattice the `T_omega` are indexed by.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Lattice {
    P,
    PTau,
}

/// Finite sum `sum_omega c_omega(q) T_omega`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HCartanElement {
    pub rank: usize,
    pub lattice: Lattice,
    pub terms: BTreeMap<Weight, LaurentPoly>,
}

impl HCartanElement {
    pub fn zero(rank: usize, lattice: Lattice) -> Self {
        Self { rank, lattice, terms: BTreeMap::new() }
    }

    pub fn unit(rank: usize, lattice: Lattice) -> Self {
        let mut e = Self::zero(rank, lattice);
        e.terms.insert(Weight::zero(rank), LaurentPoly::one());
        e
    }

    pub fn add_term(&mut self, w: Weight, c: LaurentPoly) {
        let slot = self.terms.entry(w.clone()).or_default();
        *slot = &*slot + &c;
        if slot.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn coeff(&self, w: &Weight) -> LaurentPoly {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    /// `sum_omega c_omega(q) lambda_P(omega)` as a Laurent polynomial in `q`. Fails when some
    /// `lambda_P(omega)` is not real.
    pub fn eval_symbolic(&self, lambda: &WeightFunction) -> Result<LaurentPoly> {
        if lambda.rank() != self.rank {
            return invalid("weight function rank mismatch");
        }
        let mut out = LaurentPoly::zero();
        for (w, c) in &self.terms {
            out = &out + &(c * &lambda.real_monomial(w)?);
        }
        Ok(out)
    }

    /// Exact value at `q` in the radical normal form.
    pub fn eval_radical(&self, lambda: &WeightFunction, q: &Rational) -> Result<RadicalValue> {
        self.eval_symbolic(lambda)?.eval_radical(q)
    }

    pub fn eval_point(&self, lambda: &WeightFunction, q: &Rational) -> Result<crate::exactmath::Evaluated> {
        crate::exactmath::laurent_eval(&self.eval_symbolic(lambda)?, q)
    }
}

fn require_reduced(nu: &TwistingDatum) -> Result<()> {
    let f = nu.classify();
    if !f.ungauged || !f.reduced {
        return invalid("the twisting datum must be ungauged and reduced");
    }
    Ok(())
}

fn real_eps(nu: &TwistingDatum, w: &Weight) -> Result<Rational> {
    nu.eps_q(w)?.to_real().ok_or_else(|| Error::Validation(format!("eps_Q({w}) is not real")))
}

fn q_rho(nu: &TwistingDatum, w: &Weight, factor: i64) -> LaurentPoly {
    LaurentPoly::q_pow(Rat::from(factor) * nu.rs().pairing(&nu.rs().rho, w))
}

fn check_table(nu: &TwistingDatum, hw: &Weight, j: &TwiningTable) -> Result<()> {
    if !nu.folded.is_fixed(hw) {
        return invalid(format!("{hw} is not tau-fixed"));
    }
    if &j.highest != hw {
        return invalid("twining table belongs to a different highest weight");
    }
    Ok(())
}

/// `sum_omega j(omega) eps_Q(varpi - omega) q^{-2(rho, omega)} T_omega` over tau-fixed `omega`.
pub fn hc_image(nu: &TwistingDatum, hw: &Weight, j: &TwiningTable) -> Result<HCartanElement> {
    require_reduced(nu)?;
    check_table(nu, hw, j)?;
    let mut el = HCartanElement::zero(nu.rank(), Lattice::PTau);
    for (w, &jv) in &j.jvals {
        if jv == 0 {
            continue;
        }
        let e = real_eps(nu, &hw.sub(w))?;
        if e.is_zero() {
            continue;
        }
        el.add_term(w.clone(), q_rho(nu, w, -2).scale(&(e * Rational::from_integer(jv.into()))));
    }
    Ok(el)
}

/// The same element grouped into `W_nu`-orbits of dominant weights with stabiliser weights.
pub fn hc_image_grouped(nu: &TwistingDatum, hw: &Weight, j: &TwiningTable) -> Result<HCartanElement> {
    require_reduced(nu)?;
    check_table(nu, hw, j)?;
    let wnu = nu.w_nu()?;
    let mut el = HCartanElement::zero(nu.rank(), Lattice::PTau);
    for (w, &jv) in j.jvals.iter().filter(|(w, _)| w.is_dominant()) {
        if jv == 0 {
            continue;
        }
        let e = real_eps(nu, &hw.sub(w))?;
        if e.is_zero() {
            continue;
        }
        let stab = wnu.iter().filter(|(x, _)| &x.apply(w) == w).count() as i64;
        let base = e * Rational::new(jv.into(), stab.into());
        for (x, _) in &wnu {
            let img = x.apply(w);
            let c = real_eps(nu, &w.sub(&img))? * &base;
            el.add_term(img.clone(), q_rho(nu, &img, -2).scale(&c));
        }
    }
    Ok(el)
}

/// Tau-fixed dominant weights of height `(varpi, rho^vee) <= bound`.
pub fn fixed_dominant_by_height(nu: &TwistingDatum, bound: Rat) -> Vec<Weight> {
    let f = &nu.folded;
    let rs = nu.rs();
    let n = rs.rank;
    let class_w: Vec<Weight> = f
        .classes
        .iter()
        .map(|c| {
            let mut w = Weight::zero(n);
            for &s in c {
                w.0[s] = Rat::one();
            }
            w
        })
        .collect();
    let hts: Vec<Rat> = class_w.iter().map(|w| rs.height(w)).collect();
    let mut out = Vec::new();
    let mut cur = vec![0i64; class_w.len()];
    loop {
        let h: Rat = cur.iter().zip(&hts).map(|(&k, h)| Rat::from(k) * h).sum();
        if h <= bound {
            let mut w = Weight::zero(n);
            for (k, cw) in cur.iter().zip(&class_w) {
                w = w.add(&cw.scale(Rat::from(*k)));
            }
            out.push(w);
            cur[0] += 1;
            continue;
        }
        let mut i = 0;
        loop {
            cur[i] = 0;
            i += 1;
            if i == cur.len() {
                return out;
            }
            cur[i] += 1;
            let h: Rat = cur.iter().zip(&hts).map(|(&k, h)| Rat::from(k) * h).sum();
            if h <= bound {
                break;
            }
        }
    }
}

/// Outcome of a central character comparison.
#[derive(Clone, Debug)]
pub struct CentralMatch {
    pub equal_on_center: bool,
    /// `(w, gauge)` with `lambda' = gauge * (w . lambda)`.
    pub witness: Option<(WeylElement, Vec<PolarRational>)>,
}

impl CentralMatch {
    pub fn consistent(&self) -> bool {
        self.equal_on_center == self.witness.is_some()
    }
}

fn modulus_value(c: &PolarRational, e: Rat, q: &Rational) -> Result<RadicalValue> {
    LaurentPoly::monomial(c.modulus().clone(), e).eval_radical(q)
}

/// Compares the values of all `hc_image(z_varpi)` of height at most `bound` at `lambda` and
/// `lambda2`, and independently searches `W_nu` times the gauge torus for a witness.
pub fn same_central_character(
    nu: &TwistingDatum,
    lambda: &WeightFunction,
    lambda2: &WeightFunction,
    q: &Rational,
    bound: Rat,
) -> Result<CentralMatch> {
    require_reduced(nu)?;
    for l in [lambda, lambda2] {
        if !l.is_tau_symmetric(nu.tau()) {
            return invalid(format!("{l} is not tau-symmetric"));
        }
    }
    let mut equal = true;
    for hw in fixed_dominant_by_height(nu, bound) {
        let j = crate::charring::twining_mults(&nu.folded, &hw)?;
        let el = hc_image(nu, &hw, &j)?;
        if el.eval_radical(lambda, q)? != el.eval_radical(lambda2, q)? {
            equal = false;
            break;
        }
    }
    let mut witness = None;
    'outer: for (w, _) in nu.w_nu()? {
        let mu = dot(&w, nu, lambda, true)?;
        let mut gauge = Vec::with_capacity(nu.rank());
        for r in 0..nu.rank() {
            let (a, b) = ((&mu.coef[r], mu.exp[r]), (&lambda2.coef[r], lambda2.exp[r]));
            if modulus_value(a.0, a.1, q)? != modulus_value(b.0, b.1, q)? {
                continue 'outer;
            }
            let g = PolarRational::unit(b.0.phase() - a.0.phase());
            if nu.tau().apply(r) == r && g != PolarRational::one() {
                continue 'outer;
            }
            gauge.push(g);
        }
        witness = Some((w, gauge));
        break;
    }
    Ok(CentralMatch { equal_on_center: equal, witness })
}

/// Quotient of Laurent polynomials after exact cancellation when it exists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QRatio {
    pub num: LaurentPoly,
    pub den: LaurentPoly,
}

impl QRatio {
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        if den.is_zero() {
            return invalid("vanishing denominator");
        }
        Ok(match laurent_div(&num, &den) {
            Ok(quo) => Self { num: quo, den: LaurentPoly::one() },
            Err(_) => Self { num, den },
        })
    }

    pub fn is_polynomial(&self) -> bool {
        self.den == LaurentPoly::one()
    }

    /// Exact value when both parts evaluate to rationals.
    pub fn exact(&self, q: &Rational) -> Result<Option<Rational>> {
        let (n, d) = (self.num.eval_radical(q)?, self.den.eval_radical(q)?);
        if d.is_zero() {
            return Err(Error::Validation("denominator vanishes at q".into()));
        }
        Ok(match (n.as_rational(), d.as_rational()) {
            (Some(a), Some(b)) if n.coeffs.len() <= 1 || n.coeffs[1..].iter().all(|c| c.is_zero()) => Some(a / b),
            _ => None,
        })
    }

    pub fn value_f64(&self, q: f64) -> f64 {
        self.num.eval_f64(q) / self.den.eval_f64(q)
    }
}

fn alternating(nu: &TwistingDatum, lambda: &WeightFunction, x: &Weight, wnu: &[(WeylElement, i64)]) -> Result<LaurentPoly> {
    let mut s = LaurentPoly::zero();
    for (w, sg) in wnu {
        let img = w.apply(x);
        let e = real_eps(nu, &x.sub(&img))?;
        if e.is_zero() {
            continue;
        }
        let term = &lambda.real_monomial(&img)? * &q_rho(nu, &img, -2);
        s = &s + &term.scale(&(e * Rational::from_integer((*sg).into())));
    }
    Ok(s)
}

/// Value of the invariant integral on `a_varpi`.
#[derive(Clone, Debug)]
pub struct IntegralValue {
    /// Quotient of the two alternating sums.
    pub ratio: QRatio,
    pub qdim: LaurentPoly,
}

impl IntegralValue {
    pub fn exact(&self, q: &Rational) -> Result<Option<Rational>> {
        let r = self.ratio.exact(q)?;
        let d = crate::exactmath::laurent_eval(&self.qdim, q)?;
        Ok(match (r, d.exact()) {
            (Some(r), Some(d)) => Some(r / d),
            _ => None,
        })
    }

    pub fn value_f64(&self, q: f64) -> f64 {
        self.ratio.value_f64(q) / self.qdim.eval_f64(q)
    }
}

fn check_lambda(nu: &TwistingDatum, lambda: &WeightFunction) -> Result<()> {
    if lambda.rank() != nu.rank() || !lambda.is_tau_symmetric(nu.tau()) || !lambda.is_positive() {
        return invalid(format!("{lambda} is not a positive tau-symmetric weight function"));
    }
    Ok(())
}

/// `(1/dim_q V) * sum_{W_nu} hsgn eps_Q(varpi+rho-w(varpi+rho)) lambda_P(w(varpi+rho)) q^{-2(rho,w(varpi+rho))}`
/// divided by the same sum at `varpi = 0`. With `lambda = q^{2 gamma}` this is the integral of `a_varpi`.
pub fn invariant_integral(nu: &TwistingDatum, lambda: &WeightFunction, hw: &Weight) -> Result<IntegralValue> {
    require_reduced(nu)?;
    check_lambda(nu, lambda)?;
    if !nu.folded.is_fixed(hw) || !hw.is_dominant() {
        return invalid(format!("{hw} is not a tau-fixed dominant weight"));
    }
    let rs = nu.rs();
    let wnu = nu.w_nu()?;
    let num = alternating(nu, lambda, &hw.add(&rs.rho), &wnu)?;
    let den = alternating(nu, lambda, &rs.rho, &wnu)?;
    let qdim = q_dim(rs, &weight_mults(rs, hw)?);
    Ok(IntegralValue { ratio: QRatio::new(num, den)?, qdim })
}

/// `e_gamma`: the Weyl denominator at `q^{-2 rho}` over the `W_nu` alternating sum at `rho`.
pub fn e_gamma(nu: &TwistingDatum, lambda: &WeightFunction) -> Result<QRatio> {
    require_reduced(nu)?;
    check_lambda(nu, lambda)?;
    let rs = nu.rs();
    let mut num = LaurentPoly::one();
    for a in &rs.pos_roots {
        let h = rs.pairing(&rs.rho, a);
        num = &num * &(&LaurentPoly::q_pow(-h) - &LaurentPoly::q_pow(h));
    }
    let den = alternating(nu, lambda, &rs.rho, &nu.w_nu()?)?;
    QRatio::new(num, den)
}

/// `(rho - gamma, beta)` for every compact positive folded root `beta`.
pub fn compact_pairings(nu: &TwistingDatum, gamma: &Weight) -> Result<Vec<(Weight, Rat)>> {
    let c = compact_roots(nu)?;
    let rs = nu.rs();
    let v = rs.rho.sub(gamma);
    Ok(c.positive.iter().map(|&i| {
        let b = nu.folded.pos_roots[i].clone();
        let p = rs.pairing(&v, &b);
        (b, p)
    }).collect())
}

/// Weight-space multiplicities of the module attached to a cell: pairs `(alpha_+, dim)`.
pub type CellMults = Vec<(Weight, u64)>;

/// Supplies multiplicities for the highest weight module of a cell.
pub trait MultProvider {
    fn mults(&self, w: &WeylElement, highest: &WeightFunction, depth: usize) -> Result<CellMults>;
}

/// One cell of the invariant state.
#[derive(Clone, Debug)]
pub struct CellData {
    pub w: WeylElement,
    pub highest: WeightFunction,
    pub c_w: f64,
    pub c_w_exact: Option<Rational>,
    pub trace: f64,
    pub depth: usize,
    pub tail_bound: f64,
}

/// Cells with normalized state weights.
#[derive(Clone, Debug)]
pub struct CellState {
    pub cells: Vec<CellData>,
    pub weights: Vec<f64>,
}

fn value_f64(c: &PolarRational, e: Rat, q: f64) -> f64 {
    let (re, _) = c.to_f64_pair();
    re * q.powf(e.to_f64().unwrap())
}

/// `Tr(pi_w(a_varpi) A_w)` truncated to the supplied multiplicities.
pub fn cell_trace(nu: &TwistingDatum, highest: &WeightFunction, mults: &CellMults, hw: &Weight, q: f64) -> Result<f64> {
    let rs = nu.rs();
    let (cr, er) = highest.value(&rs.rho)?;
    let (cv, ev) = highest.value(hw)?;
    if !cv.is_real() {
        return invalid("a_varpi is not real on the highest weight");
    }
    let top = value_f64(&cv, ev, q) * to_f64(cr.modulus()) * q.powf(er.to_f64().unwrap());
    Ok(mults
        .iter()
        .map(|(a, m)| {
            let x = rs.pairing(&hw.add(&rs.rho), a) * Rat::from(2);
            *m as f64 * top * q.powf(x.to_f64().unwrap())
        })
        .sum())
}

/// Invariant state data over the cells `W_nu^-`.
pub fn cell_state(nu: &TwistingDatum, lambda: &WeightFunction, provider: &dyn MultProvider, depth: usize, q: &Rational) -> Result<CellState> {
    require_reduced(nu)?;
    check_lambda(nu, lambda)?;
    let qf = to_f64(q);
    let eg = e_gamma(nu, lambda)?;
    let c_exact = eg.exact(q)?.map(|r| r.abs());
    let c_w = eg.value_f64(qf).abs();
    let mut cells = Vec::new();
    for (w, _) in enumerate_w_minus(nu)? {
        let highest = dot(&w, nu, lambda, true)?;
        let mults = provider.mults(&w, &highest, depth)?;
        let trace = cell_trace(nu, &highest, &mults, &Weight::zero(nu.rank()), qf)?;
        let last = mults.last().map(|(a, _)| nu.rs().height(a)).unwrap_or_else(Rat::zero).to_f64().unwrap();
        let ratio = qf.powi(2);
        let lead = trace / mults.iter().map(|(_, m)| *m as f64).sum::<f64>().max(1.0);
        let tail_bound: f64 = (1..=2000).map(|k| {
            let l = last + k as f64;
            (l + 1.0).powi(2) * ratio.powf(l) * lead.abs()
        }).sum();
        cells.push(CellData { w, highest, c_w, c_w_exact: c_exact.clone(), trace, depth, tail_bound });
    }
    let total: f64 = cells.iter().map(|c| c.c_w * c.trace).sum();
    let weights = cells.iter().map(|c| c.c_w * c.trace / total).collect();
    Ok(CellState { cells, weights })
}

/// Solves for the cell weights from the truncated traces of `a_varpi` for the first few
/// tau-fixed dominant weights, matching them with [`invariant_integral`].
pub fn solve_cell_weights(nu: &TwistingDatum, lambda: &WeightFunction, provider: &dyn MultProvider, depth: usize, q: &Rational) -> Result<Vec<f64>> {
    let qf = to_f64(q);
    let cells: Vec<(WeylElement, WeightFunction)> = enumerate_w_minus(nu)?
        .into_iter()
        .map(|(w, _)| dot(&w, nu, lambda, true).map(|h| (w, h)))
        .collect::<Result<_>>()?;
    let k = cells.len();
    let mut hws = fixed_dominant_by_height(nu, Rat::from(12));
    hws.sort_by_key(|a| nu.rs().height(a));
    if hws.len() < k {
        return invalid("not enough tau-fixed dominant weights to separate the cells");
    }
    let mults: Vec<CellMults> = cells.iter().map(|(w, h)| provider.mults(w, h, depth)).collect::<Result<_>>()?;
    let m = hws.len().min(2 * k + 2);
    let mut a = nalgebra::DMatrix::<f64>::zeros(m, k);
    let mut b = nalgebra::DVector::<f64>::zeros(m);
    for (i, hw) in hws.iter().take(m).enumerate() {
        for (c, (_, h)) in cells.iter().enumerate() {
            a[(i, c)] = cell_trace(nu, h, &mults[c], hw, qf)?;
        }
        b[i] = invariant_integral(nu, lambda, hw)?.value_f64(qf);
    }
    let svd = a.svd(true, true);
    let x = svd.solve(&b, 1e-300).map_err(|e| Error::Validation(e.to_string()))?;
    Ok(x.iter().copied().collect())
}

/// Both sides of the limit identity at `omega = (n-1) rho`, each divided by its weight
/// (`c_w` on the left, `|e_gamma|` on the right).
pub fn limit_sides(nu: &TwistingDatum, gamma: &Weight, w: &WeylElement, mults: &CellMults, n: u32, q: f64) -> Result<(f64, f64)> {
    let rs = nu.rs();
    let nf = n as f64;
    let lhs: f64 = mults
        .iter()
        .map(|(a, m)| *m as f64 * q.powf(2.0 * nf * rs.pairing(&rs.rho, a).to_f64().unwrap()))
        .sum();
    let winv = w.inverse(rs);
    let wr = winv.apply(&rs.rho);
    let wnu = nu.w_nu()?;
    let v = rs.rho.sub(gamma);
    let mut num = 0.0;
    for u in w_plus(nu)? {
        let sg = wnu.iter().find(|(x, _)| *x == u).map(|(_, s)| *s).ok_or_else(|| Error::Validation("W_nu^+ not inside W_nu".into()))?;
        let img = u.inverse(rs).apply(&wr);
        num += sg as f64 * q.powf(2.0 * nf * rs.pairing(&v, &wr.sub(&img)).to_f64().unwrap());
    }
    let mut den = 1.0;
    for a in &rs.pos_roots {
        den *= 1.0 - q.powf(2.0 * nf * rs.pairing(&rs.rho, a).to_f64().unwrap());
    }
    // the sum over W of sgn(w) q^{2n(rho, rho - w^{-1} rho)} factors as a product over positive roots
    Ok((lhs, num.abs() / den.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charring::twining_mults;
    use crate::exactmath::rational;

    fn image(nu: &TwistingDatum, hw: &[i64]) -> HCartanElement {
        let hw = Weight::from_ints(hw);
        let j = twining_mults(&nu.folded, &hw).unwrap();
        hc_image(nu, &hw, &j).unwrap()
    }

    #[test]
    fn unit_image() {
        let nu = TwistingDatum::simple("A2", &[], &[1, -1]).unwrap();
        let el = image(&nu, &[0, 0]);
        assert_eq!(el, HCartanElement::unit(2, Lattice::PTau));
    }

    #[test]
    fn rank_one_image() {
        for e in [1i64, -1] {
            let nu = TwistingDatum::simple("A1", &[], &[e]).unwrap();
            let el = image(&nu, &[1]);
            assert_eq!(el.coeff(&Weight::from_ints(&[1])), LaurentPoly::q_pow(Rat::from(-1)));
            assert_eq!(el.coeff(&Weight::from_ints(&[-1])), LaurentPoly::monomial(rational(e, 1), Rat::from(1)));
        }
    }

    #[test]
    fn swap_image() {
        let nu = TwistingDatum::simple("A1xA1", &[2, 1], &[1, 1]).unwrap();
        let el = image(&nu, &[1, 1]);
        assert_eq!(el.terms.len(), 2);
        assert_eq!(el.coeff(&Weight::from_ints(&[1, 1])), LaurentPoly::q_pow(Rat::from(-2)));
        assert_eq!(el.coeff(&Weight::from_ints(&[-1, -1])), LaurentPoly::q_pow(Rat::from(2)));
    }

    #[test]
    fn grouped_form_agrees() {
        for (l, tau, e, hw) in [
            ("A2", vec![], vec![1, -1], vec![1, 1]),
            ("B2", vec![], vec![-1, 1], vec![1, 2]),
            ("A3", vec![3, 2, 1], vec![1, -1, 1], vec![1, 1, 1]),
            ("G2", vec![], vec![-1, -1], vec![1, 0]),
        ] {
            let nu = TwistingDatum::simple(l, &tau, &e).unwrap();
            let hw = Weight::from_ints(&hw);
            let j = twining_mults(&nu.folded, &hw).unwrap();
            assert_eq!(hc_image(&nu, &hw, &j).unwrap(), hc_image_grouped(&nu, &hw, &j).unwrap(), "{l}");
        }
    }

    #[test]
    fn eval_rank_one_negative() {
        let nu = TwistingDatum::simple("A1", &[], &[-1]).unwrap();
        let el = image(&nu, &[1]);
        let c = rational(3, 1);
        let q = rational(1, 2);
        let lam = WeightFunction::from_reals(std::slice::from_ref(&c)).unwrap();
        let v = el.eval_point(&lam, &q).unwrap();
        assert_eq!(v.exact().unwrap(), &(&c / &q - &q / &c));
        let lam2 = WeightFunction::new(vec![PolarRational::from_real(-c.recip())], vec![Rat::from(2)]).unwrap();
        assert_eq!(el.eval_point(&lam2, &q).unwrap(), v);
        let m = same_central_character(&nu, &lam, &lam2, &q, Rat::from(3)).unwrap();
        assert!(m.equal_on_center && m.consistent());
        assert_eq!(m.witness.unwrap().0.to_string(), "s1");
    }

    #[test]
    fn positive_sign_not_central() {
        let nu = TwistingDatum::simple("A1", &[], &[1]).unwrap();
        let q = rational(1, 2);
        let lam = WeightFunction::from_reals(&[rational(3, 1)]).unwrap();
        let lam2 = WeightFunction::from_reals(&[rational(-3, 1)]).unwrap();
        let m = same_central_character(&nu, &lam, &lam2, &q, Rat::from(3)).unwrap();
        assert!(!m.equal_on_center && m.consistent());
        let m = same_central_character(&nu, &lam, &lam, &q, Rat::from(3)).unwrap();
        assert!(m.equal_on_center && m.witness.unwrap().0.is_identity());
    }

    #[test]
    fn integral_rank_one() {
        let nu = TwistingDatum::simple("A1", &[], &[1]).unwrap();
        let rs = nu.rs().clone();
        let lam = WeightFunction::from_gamma(&rs, &Weight::from_ints(&[-1]));
        let v = invariant_integral(&nu, &lam, &Weight::from_ints(&[1])).unwrap();
        let q = rational(1, 3);
        let expect = (rational(9, 1) + rational(1, 9)) / (rational(3, 1) + rational(1, 3));
        assert_eq!(v.exact(&q).unwrap(), Some(expect));
        let one = invariant_integral(&nu, &lam, &Weight::zero(1)).unwrap();
        assert_eq!(one.exact(&q).unwrap(), Some(Rational::one()));
    }

    #[test]
    fn integral_matches_image() {
        let nu = TwistingDatum::simple("B2", &[], &[1, -1]).unwrap();
        let rs = nu.rs().clone();
        let lam = WeightFunction::from_gamma(&rs, &Weight(vec![Rat::new(-1, 2), Rat::from(-2)]));
        for hw in [[1, 0], [0, 1], [1, 1], [2, 1]] {
            let hw = Weight::from_ints(&hw);
            let j = twining_mults(&nu.folded, &hw).unwrap();
            let img = hc_image(&nu, &hw, &j).unwrap().eval_symbolic(&lam).unwrap();
            let v = invariant_integral(&nu, &lam, &hw).unwrap();
            assert!(v.ratio.is_polynomial());
            assert_eq!(img, v.ratio.num);
        }
    }

    #[test]
    fn e_gamma_numerator_is_weyl_sum() {
        let nu = TwistingDatum::simple("B2", &[], &[1, 1]).unwrap();
        let rs = nu.rs().clone();
        let lam = WeightFunction::from_gamma(&rs, &Weight::from_ints(&[-1, -1]));
        let eg = e_gamma(&nu, &lam).unwrap();
        let mut weyl = LaurentPoly::zero();
        for w in crate::rootsys::weyl_enumerate(&rs).unwrap() {
            let img = w.apply(&rs.rho);
            let t = LaurentPoly::monomial(rational(if w.length() % 2 == 0 { 1 } else { -1 }, 1), Rat::from(-2) * rs.pairing(&rs.rho, &img));
            weyl = &weyl + &t;
        }
        let den = alternating(&nu, &lam, &rs.rho, &nu.w_nu().unwrap()).unwrap();
        assert_eq!(QRatio::new(weyl, den).unwrap(), eg);
    }

    #[test]
    fn heights_enumeration() {
        let nu = TwistingDatum::simple("A3", &[3, 2, 1], &[1, 1, 1]).unwrap();
        let ws = fixed_dominant_by_height(&nu, Rat::from(3));
        let expect: Vec<Weight> = [vec![0, 0, 0], vec![0, 1, 0], vec![1, 0, 1]].iter().map(|v| Weight::from_ints(v)).collect();
        let mut got = ws.clone();
        got.sort();
        let mut e = expect;
        e.sort();
        assert_eq!(got, e);
    }
}
