//! Twisting data, their flags, Weyl-group actions, compact roots and the twisted
//! dot-actions.

mod weylnu;

pub use weylnu::{compact_roots, enumerate_w_minus, gauge_transport, strongly_reduce, w_plus, CompactRoots, GaugeTransport, StrongReduction};

use crate::error::{invalid, Error, Result};
use crate::exactmath::{fmt_rat, LaurentPoly, PolarRational, Rat, Rational};
use crate::rootsys::{enumerate_group, fold, FoldedSystem, Involution, RootSystem, Weight, WeylElement, WEYL_GUARD};
use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;
use std::fmt;

/// Diagram involution with a conjugate-symmetric node labelling.
#[derive(Clone, Debug)]
pub struct TwistingDatum {
    pub folded: FoldedSystem,
    pub eps: Vec<PolarRational>,
}

/// The eight classification flags.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct DatumFlags {
    pub regular: bool,
    pub positive: bool,
    pub strongly_positive: bool,
    pub symmetric_pair: bool,
    pub gauge: bool,
    pub ungauged: bool,
    pub reduced: bool,
    pub strongly_reduced: bool,
}

impl DatumFlags {
    pub fn as_pairs(&self) -> [(&'static str, bool); 8] {
        [
            ("regular", self.regular),
            ("positive", self.positive),
            ("strongly_positive", self.strongly_positive),
            ("symmetric_pair", self.symmetric_pair),
            ("gauge", self.gauge),
            ("ungauged", self.ungauged),
            ("reduced", self.reduced),
            ("strongly_reduced", self.strongly_reduced),
        ]
    }
}

/// Sign of `eps_Q(varpi_r - w^{-1} varpi_r)` for each class, at its lowest node.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignCharacter(pub Vec<i8>);

impl SignCharacter {
    pub fn trivial(n: usize) -> Self {
        SignCharacter(vec![1; n])
    }

    pub fn is_trivial(&self) -> bool {
        self.0.iter().all(|&s| s == 1)
    }
}

impl fmt::Display for SignCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            write!(f, "{}", if *s > 0 { '+' } else { '-' })?;
        }
        Ok(())
    }
}

fn real_sign(p: &PolarRational) -> Result<i8> {
    if p.is_zero() {
        return invalid("sign of a vanishing eps value");
    }
    match p.to_real() {
        Some(r) => Ok(if r.is_positive() { 1 } else { -1 }),
        None => invalid(format!("eps value {p} is not real")),
    }
}

impl TwistingDatum {
    pub fn new(rs: &RootSystem, tau: Involution, eps: Vec<PolarRational>) -> Result<Self> {
        if eps.len() != rs.rank {
            return invalid(format!("eps has {} entries, expected {}", eps.len(), rs.rank));
        }
        let folded = fold(rs, &tau)?;
        for r in 0..rs.rank {
            if eps[tau.apply(r)] != eps[r].conj() {
                return invalid(format!("eps_{} must be the conjugate of eps_{}", tau.apply(r) + 1, r + 1));
            }
        }
        Ok(Self { folded, eps })
    }

    pub fn from_reals(rs: &RootSystem, tau: Involution, eps: &[Rational]) -> Result<Self> {
        Self::new(rs, tau, eps.iter().cloned().map(PolarRational::from_real).collect())
    }

    /// Convenience constructor from a label, 1-based tau images and small integer eps.
    pub fn simple(label: &str, tau: &[usize], eps: &[i64]) -> Result<Self> {
        let rs = RootSystem::from_label(label)?;
        let t = if tau.is_empty() { Involution::identity(rs.rank) } else { Involution::from_one_based(&rs, tau)? };
        Self::from_reals(&rs, t, &eps.iter().map(|&e| Rational::from_integer(e.into())).collect::<Vec<_>>())
    }

    pub fn rs(&self) -> &RootSystem {
        &self.folded.base
    }

    pub fn tau(&self) -> &Involution {
        &self.folded.tau
    }

    pub fn rank(&self) -> usize {
        self.eps.len()
    }

    /// `J_nu`.
    pub fn support(&self) -> BTreeSet<usize> {
        (0..self.rank()).filter(|&r| !self.eps[r].is_zero()).collect()
    }

    /// Fixed nodes in the support.
    pub fn j_tau(&self) -> Vec<usize> {
        (0..self.rank()).filter(|&r| self.tau().apply(r) == r && !self.eps[r].is_zero()).collect()
    }

    pub fn with_eps(&self, eps: Vec<PolarRational>) -> Result<Self> {
        let mut out = self.clone();
        for r in 0..self.rank() {
            if eps[self.tau().apply(r)] != eps[r].conj() {
                return invalid("eps is not conjugate symmetric");
            }
        }
        out.eps = eps;
        Ok(out)
    }

    pub fn classify(&self) -> DatumFlags {
        let tau = self.tau();
        let fixed: Vec<usize> = tau.fixed();
        let star = tau.i_star();
        let e = &self.eps;
        let one = PolarRational::one();
        let regular = e.iter().all(|x| !x.is_zero());
        let positive = regular && fixed.iter().all(|&r| e[r].is_positive());
        let strongly_positive = e.iter().all(|x| x.is_positive());
        let symmetric_pair = e.iter().all(|x| x.modulus().is_one());
        let gauge = fixed.iter().all(|&r| e[r] == one) && star.iter().all(|&r| e[r].modulus().is_one());
        let ungauged = star.iter().all(|&r| e[r].is_zero() || e[r].is_positive());
        let minus = PolarRational::from_real(-Rational::one());
        let reduced = fixed.iter().all(|&r| e[r].is_zero() || e[r] == one || e[r] == minus)
            && star.iter().all(|&r| e[r].is_zero() || e[r] == one);
        let mut strongly_reduced = reduced;
        if reduced {
            for comp in self.tau_components() {
                let k = comp.iter().filter(|&&r| tau.apply(r) == r && e[r] == minus).count();
                if k > 1 {
                    strongly_reduced = false;
                }
            }
        }
        DatumFlags { regular, positive, strongly_positive, symmetric_pair, gauge, ungauged, reduced, strongly_reduced }
    }

    /// Components of `J_nu` after merging each component with its tau image.
    pub fn tau_components(&self) -> Vec<Vec<usize>> {
        let comps = self.rs().sub_components(&self.support());
        let mut merged: Vec<BTreeSet<usize>> = Vec::new();
        for c in comps {
            let img: BTreeSet<usize> = c.iter().map(|&r| self.tau().apply(r)).collect();
            let set: BTreeSet<usize> = c.into_iter().collect();
            if let Some(m) = merged.iter_mut().find(|m| !m.is_disjoint(&set) || !m.is_disjoint(&img)) {
                m.extend(set);
                m.extend(img);
            } else {
                let mut s = set;
                s.extend(img);
                merged.push(s);
            }
        }
        merged.into_iter().map(|s| s.into_iter().collect()).collect()
    }

    pub fn require_ungauged(&self) -> Result<()> {
        if !self.classify().ungauged {
            return invalid("twisting datum must be ungauged");
        }
        Ok(())
    }

    /// `eps_Q(omega)` on `Q^{J+}`.
    pub fn eps_q(&self, w: &Weight) -> Result<PolarRational> {
        let c = self.rs().to_alpha(w);
        self.eps_from_coords(&c, "Q")
    }

    /// `eps_P(omega)` on `P^{J+}`.
    pub fn eps_p(&self, w: &Weight) -> Result<PolarRational> {
        self.eps_from_coords(&w.0, "P")
    }

    fn eps_from_coords(&self, c: &[Rat], lattice: &str) -> Result<PolarRational> {
        let mut v = PolarRational::one();
        for (r, x) in c.iter().enumerate() {
            if !x.is_integer() {
                return invalid(format!("weight is not in {lattice}: coordinate {}", fmt_rat(x)));
            }
            let n = x.to_integer();
            if self.eps[r].is_zero() && n < 0 {
                return invalid(format!("weight leaves the monoid {lattice}^{{J+}} at node {}", r + 1));
            }
            v = v.mul(&self.eps[r].pow(n)?);
        }
        Ok(v)
    }

    /// Is `w` in `W_nu = W^tau cap W_J`?
    pub fn contains(&self, w: &WeylElement) -> bool {
        let n = self.rank();
        let tau = self.tau();
        for r in 0..n {
            let img = w.apply(&Weight::unit(n, r));
            if img.permute(&tau.perm) != w.apply(&Weight::unit(n, tau.apply(r))) {
                return false;
            }
            if self.eps[r].is_zero() && img != Weight::unit(n, r) {
                return false;
            }
        }
        true
    }

    /// Lifted generators of `W_nu`.
    pub fn generators(&self) -> Vec<WeylElement> {
        self.folded
            .classes
            .iter()
            .zip(&self.folded.generators)
            .filter(|(c, _)| !self.eps[c[0]].is_zero())
            .map(|(_, g)| g.clone())
            .collect()
    }

    /// `W_nu` with `hsgn`.
    pub fn w_nu(&self) -> Result<Vec<(WeylElement, i64)>> {
        Ok(enumerate_group(self.rs(), &self.generators(), WEYL_GUARD)?
            .into_iter()
            .map(|(w, l)| (w, if l % 2 == 0 { 1 } else { -1 }))
            .collect())
    }

    /// `(w eps)_r = eps_Q(w^{-1} alpha_r)`.
    pub fn act_eps(&self, w: &WeylElement) -> Result<Self> {
        if !self.contains(w) {
            return invalid(format!("{w} is not in W_nu"));
        }
        let winv = w.inverse(self.rs());
        let eps = (0..self.rank()).map(|r| self.eps_q(&winv.apply(&self.rs().simple_root(r)))).collect::<Result<Vec<_>>>()?;
        let mut out = self.clone();
        out.eps = eps;
        Ok(out)
    }

    /// Signs of `eps_Q(varpi_r - w^{-1} varpi_r)` per class.
    pub fn sign_character(&self, w: &WeylElement) -> Result<SignCharacter> {
        let winv = w.inverse(self.rs());
        self.sign_character_inv(&winv)
    }

    pub(crate) fn sign_character_inv(&self, winv: &WeylElement) -> Result<SignCharacter> {
        let n = self.rank();
        let mut out = Vec::with_capacity(self.folded.classes.len());
        for c in &self.folded.classes {
            let v = Weight::unit(n, c[0]);
            out.push(real_sign(&self.eps_q(&v.sub(&winv.apply(&v)))?)?);
        }
        Ok(SignCharacter(out))
    }

    /// Folded value `eps_hat(beta)` for a folded root given in folded simple-root coordinates.
    pub fn eps_hat(&self, k: &[i64]) -> Result<PolarRational> {
        let mut v = PolarRational::one();
        for (i, &ki) in k.iter().enumerate() {
            v = v.mul(&self.eps[self.folded.classes[i][0]].pow(ki)?);
        }
        Ok(v)
    }
}

/// Point of `H_tau^x`: `lambda_r = coef_r * q^{exp_r}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightFunction {
    pub coef: Vec<PolarRational>,
    pub exp: Vec<Rat>,
}

impl WeightFunction {
    pub fn new(coef: Vec<PolarRational>, exp: Vec<Rat>) -> Result<Self> {
        if coef.len() != exp.len() {
            return invalid("coefficient and exponent lengths differ");
        }
        if coef.iter().any(|c| c.is_zero()) {
            return invalid("weight function values must be nonzero");
        }
        Ok(Self { coef, exp })
    }

    pub fn trivial(n: usize) -> Self {
        Self { coef: vec![PolarRational::one(); n], exp: vec![Rat::zero(); n] }
    }

    /// `lambda_r = c_r` with `c_r` real and nonzero.
    pub fn from_reals(c: &[Rational]) -> Result<Self> {
        Self::new(c.iter().cloned().map(PolarRational::from_real).collect(), vec![Rat::zero(); c.len()])
    }

    /// `lambda = q^{2 gamma}`, i.e. `lambda_r = q^{2(gamma, varpi_r)}`.
    pub fn from_gamma(rs: &RootSystem, gamma: &Weight) -> Self {
        let exp = (0..rs.rank).map(|r| Rat::from(2) * rs.pairing(gamma, &rs.fundamental(r))).collect();
        Self { coef: vec![PolarRational::one(); rs.rank], exp }
    }

    pub fn rank(&self) -> usize {
        self.coef.len()
    }

    /// `gamma` with `lambda = q^{2 gamma}`, when all coefficients are 1.
    pub fn gamma(&self, rs: &RootSystem) -> Option<Weight> {
        if self.coef.iter().any(|c| *c != PolarRational::one()) {
            return None;
        }
        let ginv = crate::rootsys::rat_inverse(&rs.gram)?;
        Some(Weight((0..rs.rank).map(|r| (0..rs.rank).map(|s| ginv[r][s] * self.exp[s] / Rat::from(2)).sum()).collect()))
    }

    /// `lambda_P(omega)` for integral `omega`, as `(coefficient, q-exponent)`.
    pub fn value(&self, w: &Weight) -> Result<(PolarRational, Rat)> {
        let mut c = PolarRational::one();
        let mut e = Rat::zero();
        for (r, x) in w.0.iter().enumerate() {
            if !x.is_integer() {
                return invalid("lambda_P is only defined on P");
            }
            let n = x.to_integer();
            if n != 0 {
                c = c.mul(&self.coef[r].pow(n)?);
                e += self.exp[r] * Rat::from(n);
            }
        }
        Ok((c, e))
    }

    /// `lambda_P(omega)` as a Laurent monomial, for values that are real.
    pub fn real_monomial(&self, w: &Weight) -> Result<LaurentPoly> {
        let (c, e) = self.value(w)?;
        match c.to_real() {
            Some(r) => Ok(LaurentPoly::monomial(r, e)),
            None => invalid(format!("lambda_P({w}) is not real")),
        }
    }

    pub fn is_tau_symmetric(&self, tau: &Involution) -> bool {
        (0..self.rank()).all(|r| self.coef[tau.apply(r)] == self.coef[r].conj() && self.exp[tau.apply(r)] == self.exp[r])
    }

    /// In `H_tau^{>>}`: every value is a positive real.
    pub fn is_positive(&self) -> bool {
        self.coef.iter().all(|c| c.is_positive())
    }

    /// Multiplies pointwise by another weight function (e.g. a gauge).
    pub fn times(&self, o: &Self) -> Self {
        Self {
            coef: self.coef.iter().zip(&o.coef).map(|(a, b)| a.mul(b)).collect(),
            exp: self.exp.iter().zip(&o.exp).map(|(a, b)| a + b).collect(),
        }
    }

    /// Floating modulus of `lambda_r` at `q`.
    pub fn modulus_f64(&self, r: usize, q: f64) -> f64 {
        crate::exactmath::to_f64(self.coef[r].modulus()) * q.powf(*self.exp[r].numer() as f64 / *self.exp[r].denom() as f64)
    }
}

impl fmt::Display for WeightFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coef
            .iter()
            .zip(&self.exp)
            .map(|(c, e)| if e.is_zero() { c.to_string() } else { format!("{c}*q^{{{}}}", fmt_rat(e)) })
            .collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// Twisted dot-action `(w . lambda)_P(omega) = eps_Q(omega - w^{-1} omega) lambda_P(w^{-1} omega)`,
/// with the extra factor `q^{(2 rho, omega - w^{-1} omega)}` when `deformed`.
pub fn dot(w: &WeylElement, nu: &TwistingDatum, lambda: &WeightFunction, deformed: bool) -> Result<WeightFunction> {
    nu.require_ungauged()?;
    if !nu.contains(w) {
        return invalid(format!("{w} is not in W_nu"));
    }
    if lambda.rank() != nu.rank() {
        return invalid("weight function rank mismatch");
    }
    let winv = w.inverse(nu.rs());
    dot_with_inverse(&winv, nu, lambda, deformed)
}

pub(crate) fn dot_with_inverse(winv: &WeylElement, nu: &TwistingDatum, lambda: &WeightFunction, deformed: bool) -> Result<WeightFunction> {
    let rs = nu.rs();
    let n = nu.rank();
    let two_rho = rs.rho.scale(Rat::from(2));
    let mut coef = Vec::with_capacity(n);
    let mut exp = Vec::with_capacity(n);
    for r in 0..n {
        let v = Weight::unit(n, r);
        let img = winv.apply(&v);
        let diff = v.sub(&img);
        let e = nu.eps_q(&diff)?;
        if e.is_zero() {
            return Err(Error::Validation("dot-action produced a zero value".into()));
        }
        let (c, x) = lambda.value(&img)?;
        coef.push(e.mul(&c));
        exp.push(if deformed { x + rs.pairing(&two_rho, &diff) } else { x });
    }
    Ok(WeightFunction { coef, exp })
}
