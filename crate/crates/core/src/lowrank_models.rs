//! Rank one operator models, low rank Verma Gram recursions and highest weight classification.

use crate::error::{broken, invalid, Error, Result};
use crate::exactmath::{exact_root, rpow, to_f64, LaurentPoly, Rat, Rational};
use crate::hc_integral::{CellMults, MultProvider};
use crate::rootsys::{Weight, WeylElement};
use crate::twistdata::{TwistingDatum, WeightFunction};
use nalgebra::{DMatrix, SymmetricEigen};
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

const GRID_TOL: f64 = 1e-10;

fn check_q(q: f64) -> Result<()> {
    if !(q > 0.0 && q < 1.0) {
        return invalid(format!("q = {q} must lie in (0, 1)"));
    }
    Ok(())
}

fn check_q_exact(q: &Rational) -> Result<()> {
    if !q.is_positive() || q >= &Rational::one() {
        return invalid("q must lie in (0, 1)");
    }
    Ok(())
}

/// `s_n = q^{-n-1} + q^{n+1}`.
pub fn s_n(n: u32, q: f64) -> f64 {
    q.powi(-(n as i32) - 1) + q.powi(n as i32 + 1)
}

fn s_n_exact(n: u32, q: &Rational) -> Rational {
    rpow(q, -(n as i64) - 1) + rpow(q, n as i64 + 1)
}

/// Region of the `(d, t)` plane of central characters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Stratum {
    /// `d = c^2`, `t = c s_n`.
    Plus { c: f64, n: u32 },
    Zero { t: f64 },
    /// `d = -c^2`, `t = (a - 1/a) c` with `c, a > 0`.
    Minus { c: f64, a: f64 },
}

impl Stratum {
    pub fn d(&self) -> f64 {
        match *self {
            Stratum::Plus { c, .. } => c * c,
            Stratum::Zero { .. } => 0.0,
            Stratum::Minus { c, .. } => -c * c,
        }
    }

    pub fn t(&self, q: f64) -> f64 {
        match *self {
            Stratum::Plus { c, n } => c * s_n(n, q),
            Stratum::Zero { t } => t,
            Stratum::Minus { c, a } => (a - 1.0 / a) * c,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Stratum::Plus { .. } => "S_plus",
            Stratum::Zero { .. } => "S_zero",
            Stratum::Minus { .. } => "S_minus",
        }
    }
}

fn minus_stratum(d: f64, t: f64) -> Stratum {
    let c = (-d).sqrt();
    let r = t / c;
    Stratum::Minus { c, a: (r + (r * r + 4.0).sqrt()) / 2.0 }
}

/// Locates `(d, t)`; `None` when `d > 0` and `t` is off the `c s_n` grid.
pub fn h2_stratify(d: f64, t: f64, q: f64) -> Result<Option<Stratum>> {
    check_q(q)?;
    if !d.is_finite() || !t.is_finite() {
        return invalid("d and t must be finite");
    }
    if d == 0.0 {
        return Ok(Some(Stratum::Zero { t }));
    }
    if d < 0.0 {
        return Ok(Some(minus_stratum(d, t)));
    }
    let c = d.sqrt();
    let r = t.abs() / c;
    for n in 0..=10_000u32 {
        let s = s_n(n, q);
        if (r - s).abs() <= GRID_TOL * s {
            return Ok(Some(Stratum::Plus { c: c.copysign(t), n }));
        }
        if s > r * (1.0 + GRID_TOL) || !s.is_finite() {
            break;
        }
    }
    Ok(None)
}

/// Exact variant: the `S_plus` grid condition is `t^2 = d s_n^2`.
pub fn h2_stratify_exact(d: &Rational, t: &Rational, q: &Rational) -> Result<Option<Stratum>> {
    check_q_exact(q)?;
    if d.is_zero() {
        return Ok(Some(Stratum::Zero { t: to_f64(t) }));
    }
    if d.is_negative() {
        return Ok(Some(minus_stratum(to_f64(d), to_f64(t))));
    }
    let t2 = t * t;
    for n in 0..=10_000u32 {
        let s = s_n_exact(n, q);
        let rhs = d * &s * &s;
        match rhs.cmp(&t2) {
            Ordering::Equal => return Ok(Some(Stratum::Plus { c: to_f64(d).sqrt().copysign(to_f64(t)), n })),
            Ordering::Greater => break,
            Ordering::Less => {}
        }
    }
    Ok(None)
}

/// Weighted shift `X e_n = coef[n] e_{n + shift}` on a truncated `l^2(N)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ShiftOp {
    pub shift: i64,
    pub coef: Vec<f64>,
}

impl ShiftOp {
    pub fn diag(coef: Vec<f64>) -> Self {
        Self { shift: 0, coef }
    }

    pub fn identity(n: usize) -> Self {
        Self::diag(vec![1.0; n])
    }

    pub fn dim(&self) -> usize {
        self.coef.len()
    }

    /// `self * o`.
    pub fn compose(&self, o: &Self) -> Self {
        let n = self.dim() as i64;
        let coef = (0..n)
            .map(|k| {
                let m = k + o.shift;
                if (0..n).contains(&m) {
                    o.coef[k as usize] * self.coef[m as usize]
                } else {
                    0.0
                }
            })
            .collect();
        Self { shift: self.shift + o.shift, coef }
    }

    /// `Tr(diag(w) X)`.
    pub fn weighted_trace(&self, w: &[f64]) -> f64 {
        if self.shift != 0 {
            return 0.0;
        }
        self.coef.iter().zip(w).map(|(a, b)| a * b).sum()
    }

    /// `z^{-1} X z` for `z = diag(mu)`, computed entrywise.
    pub fn conj_diag(&self, mu: &[f64]) -> Self {
        let n = self.dim() as i64;
        let coef = (0..n)
            .map(|k| {
                let m = k + self.shift;
                if (0..n).contains(&m) {
                    self.coef[k as usize] * (mu[k as usize] / mu[m as usize])
                } else {
                    0.0
                }
            })
            .collect();
        Self { shift: self.shift, coef }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        for (k, c) in self.coef.iter().enumerate() {
            let r = k as i64 + self.shift;
            if (0..n as i64).contains(&r) {
                m[(r as usize, k)] = *c;
            }
        }
        m
    }
}

/// Dense truncation of a model operator.
#[derive(Clone, Debug)]
pub struct TruncatedOperator {
    pub matrix: DMatrix<f64>,
    pub cutoff: usize,
    pub label: String,
}

/// One irreducible block: `z` diagonal, `w` raising, `v = w^T` lowering, `u = qt - q^2 z`.
#[derive(Clone, Debug)]
pub struct H2Block {
    pub label: &'static str,
    pub z: ShiftOp,
    pub v: ShiftOp,
    pub w: ShiftOp,
    pub u: ShiftOp,
}

impl H2Block {
    pub fn mu(&self) -> &[f64] {
        &self.z.coef
    }

    fn gen(&self, g: usize) -> &ShiftOp {
        [&self.z, &self.v, &self.w, &self.u][g]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockSel {
    All,
    Plus,
    Minus,
}

#[derive(Clone, Debug)]
pub struct H2Model {
    pub stratum: Stratum,
    pub q: f64,
    pub cutoff: usize,
    pub blocks: Vec<H2Block>,
}

fn build_block(label: &'static str, mu0: f64, dim: usize, d: f64, t: f64, q: f64) -> Result<H2Block> {
    let mu: Vec<f64> = (0..dim).map(|k| mu0 * q.powi(2 * k as i32)).collect();
    let scale = d.abs().max(t.abs() * mu0.abs()).max(mu0 * mu0).max(f64::MIN_POSITIVE);
    let mut beta = vec![0.0; dim];
    for k in 0..dim {
        let b2 = q * q * (-d + q * t * mu[k] - q * q * mu[k] * mu[k]);
        if b2 < -1e-9 * q * q * scale {
            return Err(broken("h2_model", format!("negative norm {b2} at index {k}")));
        }
        beta[k] = b2.max(0.0).sqrt();
    }
    let mut wc = beta.clone();
    if let Some(last) = wc.last_mut() {
        *last = 0.0;
    }
    let mut vc = vec![0.0; dim];
    vc[1..dim].copy_from_slice(&beta[..(dim - 1)]);
    Ok(H2Block {
        label,
        z: ShiftOp::diag(mu.clone()),
        v: ShiftOp { shift: -1, coef: vc },
        w: ShiftOp { shift: 1, coef: wc },
        u: ShiftOp::diag(mu.iter().map(|m| q * t - q * q * m).collect()),
    })
}

/// Truncated model of the irreducible representations over a stratum.
pub fn h2_model(s: Stratum, sel: BlockSel, cutoff: usize, q: f64) -> Result<H2Model> {
    check_q(q)?;
    if cutoff < 2 {
        return invalid("cutoff must be at least 2");
    }
    let (d, t) = (s.d(), s.t(q));
    let blocks = match s {
        Stratum::Plus { c, n } => {
            if sel != BlockSel::All {
                return invalid("the +/- block selector only applies to S_minus");
            }
            if c == 0.0 {
                return invalid("c must be nonzero");
            }
            vec![build_block("S_plus", c * q.powi(-(n as i32)), (n as usize + 1).min(cutoff), d, t, q)?]
        }
        Stratum::Zero { t } => {
            if sel != BlockSel::All {
                return invalid("the +/- block selector only applies to S_minus");
            }
            if t == 0.0 {
                return invalid("S_zero with t = 0 has only the zero character");
            }
            vec![build_block("S_zero", q * t, cutoff, d, t, q)?]
        }
        Stratum::Minus { c, a } => {
            if !(c > 0.0 && a > 0.0) {
                return invalid("S_minus needs c > 0 and a > 0");
            }
            let mut b = Vec::new();
            if sel != BlockSel::Minus {
                b.push(build_block("S_minus+", c * a * q, cutoff, d, t, q)?);
            }
            if sel != BlockSel::Plus {
                b.push(build_block("S_minus-", -c * q / a, cutoff, d, t, q)?);
            }
            b
        }
    };
    Ok(H2Model { stratum: s, q, cutoff, blocks })
}

/// Generators of the model algebra, in the order used by monomial words.
pub const H2_GENERATORS: [&str; 4] = ["z", "v", "w", "u"];

impl H2Model {
    /// Block diagonal dense matrices for `z, v, w, u`.
    pub fn operators(&self) -> Vec<TruncatedOperator> {
        let n: usize = self.blocks.iter().map(|b| b.z.dim()).sum();
        (0..4)
            .map(|g| {
                let mut m = DMatrix::zeros(n, n);
                let mut off = 0;
                for b in &self.blocks {
                    let k = b.z.dim();
                    m.view_mut((off, off), (k, k)).copy_from(&b.gen(g).to_dense());
                    off += k;
                }
                TruncatedOperator { matrix: m, cutoff: self.cutoff, label: H2_GENERATORS[g].to_string() }
            })
            .collect()
    }

    /// The word `x_{g_1} ... x_{g_k}` on each block.
    pub fn monomial(&self, word: &[usize]) -> Vec<ShiftOp> {
        self.blocks
            .iter()
            .map(|b| word.iter().fold(ShiftOp::identity(b.z.dim()), |acc, &g| acc.compose(b.gen(g))))
            .collect()
    }

    /// `Tr(|z| X) / Tr(|z|)`: the plain trace state on one block and the signed one on `S_minus`.
    pub fn state(&self, x: &[ShiftOp]) -> f64 {
        self.state_with_power(x, 1.0)
    }

    /// `Tr(|z|^p X) / Tr(|z|^p)`, which is invariant only for `p = 1`.
    pub fn state_with_power(&self, x: &[ShiftOp], p: f64) -> f64 {
        let weights: Vec<Vec<f64>> = self.blocks.iter().map(|b| b.mu().iter().map(|m| m.abs().powf(p)).collect()).collect();
        let num: f64 = weights.iter().zip(x).map(|(w, op)| op.weighted_trace(w)).sum();
        let den: f64 = weights.iter().flatten().sum();
        num / den
    }

    /// Largest residual of the defining relations away from the truncation edge, relative to
    /// the size of the central character.
    pub fn relation_residual(&self) -> f64 {
        let q = self.q;
        let (d, t) = (self.stratum.d(), self.stratum.t(q));
        let mut worst: f64 = 0.0;
        for b in &self.blocks {
            let n = b.z.dim();
            let finite = matches!(self.stratum, Stratum::Plus { n: m, .. } if (m as usize) < self.cutoff);
            let vw = b.v.compose(&b.w);
            let wv = b.w.compose(&b.v);
            let zw = b.z.compose(&b.w);
            let wz = b.w.compose(&b.z);
            for k in 0..n {
                let m = b.mu()[k];
                let scale = 1.0f64.max(d.abs()).max((t * m).abs()).max(m * m);
                if finite || k + 1 < n {
                    let r1 = vw.coef[k] / (q * q) - (-d + q * t * m - q * q * m * m);
                    let r3 = zw.coef[k] - q * q * wz.coef[k];
                    worst = worst.max(r1.abs() / scale).max(r3.abs() / scale);
                }
                let r2 = wv.coef[k] / (q * q) - (-d + t * m / q - m * m / (q * q));
                let u = b.u.coef[k] - (q * t - q * q * m);
                worst = worst.max(r2.abs() / scale).max(u.abs() / scale);
            }
        }
        worst
    }
}

/// All words of length at most `deg` in the four generators.
pub fn monomial_words(deg: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut layer = vec![vec![]];
    for _ in 0..deg {
        layer = layer
            .iter()
            .flat_map(|w: &Vec<usize>| (0..4).map(move |g| [w.clone(), vec![g]].concat()))
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

/// Invariance defects of the model state for one monomial.
#[derive(Clone, Debug)]
pub struct Residual {
    pub word: Vec<usize>,
    pub e_action: f64,
    pub k_action: f64,
}

/// `|state(E . X)|` and `|state(K . X) - state(X)|` for every monomial of degree at most `deg`, with
/// `E . X = xX - (z^{-1} X z) x`, `K . X = z^{-1} X z` and `x = q^{1/2} v z^{-1} / (q^{-1} - q)`.
pub fn invariance_residuals(model: &H2Model, deg: usize) -> Vec<Residual> {
    invariance_residuals_with_power(model, deg, 1.0)
}

/// [`invariance_residuals`] for the weight `|z|^p` in place of `|z|`.
pub fn invariance_residuals_with_power(model: &H2Model, deg: usize, p: f64) -> Vec<Residual> {
    let q = model.q;
    let pref = q.sqrt() / (1.0 / q - q);
    let xs: Vec<ShiftOp> = model
        .blocks
        .iter()
        .map(|b| ShiftOp { shift: -1, coef: b.v.coef.iter().zip(b.mu()).map(|(v, m)| pref * v / m).collect() })
        .collect();
    monomial_words(deg)
        .into_iter()
        .map(|word| {
            let x = model.monomial(&word);
            let kx: Vec<ShiftOp> = x.iter().zip(&model.blocks).map(|(op, b)| op.conj_diag(b.mu())).collect();
            let lhs: Vec<ShiftOp> = xs.iter().zip(&x).map(|(a, b)| a.compose(b)).collect();
            let rhs: Vec<ShiftOp> = kx.iter().zip(&xs).map(|(a, b)| a.compose(b)).collect();
            let e_action = (model.state_with_power(&lhs, p) - model.state_with_power(&rhs, p)).abs();
            let k_action = (model.state_with_power(&kx, p) - model.state_with_power(&x, p)).abs();
            Residual { word, e_action, k_action }
        })
        .collect()
}

/// Maximum of [`invariance_residuals`] over monomials of degree at most 3.
pub fn invariance_residual(model: &H2Model) -> f64 {
    invariance_residuals(model, 3).iter().map(|r| r.e_action.max(r.k_action)).fold(0.0, f64::max)
}

/// Eigenvalues of the rotated operator `z' = z (x) a*a + w (x) a*c + v (x) c*a + u (x) c*c` on
/// `model (x) l^2(N)`, where `a e_k = (1 - q^{2k})^{1/2} e_{k-1}` and `c e_k = q^k e_k`. The
/// operator preserves `m - k`; `deltas` selects those blocks and `cut` truncates the second factor.
pub fn fusion_spectrum(model: &H2Model, cut: usize, deltas: &[i64]) -> Vec<f64> {
    let q = model.q;
    let mut out = Vec::new();
    for b in &model.blocks {
        let dim = b.z.dim() as i64;
        for &delta in deltas {
            let ks: Vec<i64> = (0..cut as i64).filter(|k| (0..dim).contains(&(k + delta))).collect();
            if ks.is_empty() {
                continue;
            }
            let n = ks.len();
            let mut h = DMatrix::<f64>::zeros(n, n);
            for (i, &k) in ks.iter().enumerate() {
                let m = (k + delta) as usize;
                let q2k = q.powi(2 * k as i32);
                h[(i, i)] = b.z.coef[m] * (1.0 - q2k) + b.u.coef[m] * q2k;
                if i + 1 < n {
                    let off = b.w.coef[m] * q.powi(k as i32) * (1.0 - q.powi(2 * k as i32 + 2)).sqrt();
                    h[(i + 1, i)] = off;
                    h[(i, i + 1)] = off;
                }
            }
            // subnormal entries can stall the eigen solver
            h.apply(|x| {
                if x.abs() < 1e-150 {
                    *x = 0.0
                }
            });
            out.extend(SymmetricEigen::new(h).eigenvalues.iter().copied());
        }
    }
    out.sort_by(f64::total_cmp);
    out
}

/// Comparison of a fused spectrum with the spectrum of the model itself.
#[derive(Clone, Debug)]
pub struct FusionReport {
    pub eigenvalues: usize,
    /// Largest distance from a computed eigenvalue to the expected set.
    pub max_deviation: f64,
    /// Expected eigenvalues of modulus above `1e-6` that no computed eigenvalue reaches.
    pub missing: Vec<f64>,
}

pub fn fusion_check(model: &H2Model, cut: usize, deltas: &[i64]) -> FusionReport {
    let fused = fusion_spectrum(model, cut, deltas);
    let mut expected: Vec<f64> = model.blocks.iter().flat_map(|b| b.mu().iter().copied()).collect();
    expected.push(0.0);
    let dist = |x: f64, set: &[f64]| set.iter().map(|e| (x - e).abs()).fold(f64::INFINITY, f64::min);
    let max_deviation = fused.iter().map(|&x| dist(x, &expected)).fold(0.0, f64::max);
    let missing = expected.iter().copied().filter(|e| e.abs() > 1e-6 && dist(*e, &fused) > 1e-8).collect();
    FusionReport { eigenvalues: fused.len(), max_deviation, missing }
}

/// The three low rank cases with explicit Gram recursions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VermaCase {
    A1H2,
    A1xA1,
    A2Twisted,
}

impl VermaCase {
    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace(['_', '-'], "").as_str() {
            "a1h2" | "a1" => Ok(VermaCase::A1H2),
            "a1xa1" => Ok(VermaCase::A1xA1),
            "a2" | "a2twisted" => Ok(VermaCase::A2Twisted),
            _ => invalid(format!("unknown case '{s}'")),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            VermaCase::A1H2 => "A1_H2",
            VermaCase::A1xA1 => "A1xA1",
            VermaCase::A2Twisted => "A2_twisted",
        }
    }

    /// Twisting datum with `eps` on every node.
    pub fn datum(&self, eps: &Rational) -> Result<TwistingDatum> {
        let (label, tau): (&str, &[usize]) = match self {
            VermaCase::A1H2 => ("A1", &[]),
            VermaCase::A1xA1 => ("A1xA1", &[2, 1]),
            VermaCase::A2Twisted => ("A2", &[2, 1]),
        };
        let rs = crate::rootsys::RootSystem::from_label(label)?;
        let t = if tau.is_empty() {
            crate::rootsys::Involution::identity(rs.rank)
        } else {
            crate::rootsys::Involution::from_one_based(&rs, tau)?
        };
        TwistingDatum::from_reals(&rs, t, &vec![eps.clone(); rs.rank])
    }

    /// Weight drop `alpha_+` at a-level `level`, in the fundamental weight basis.
    pub fn alpha_plus(&self, level: u32) -> Weight {
        let l = Rat::from(level as i64);
        match self {
            VermaCase::A1H2 => Weight(vec![l]),
            VermaCase::A1xA1 => Weight(vec![l, l]),
            VermaCase::A2Twisted => Weight(vec![l / 2, l / 2]),
        }
    }

    /// `(A, r_0, slope)` with the sign of the `t`-th factor equal to the sign of `1 - A q^{r_0 + slope t}`.
    fn factor_data(&self, lambda: &QMono, eps: &Rational) -> (Rational, Rat, i64) {
        let c = &lambda.coef;
        let e = lambda.exp;
        match self {
            VermaCase::A1H2 => (eps / (c * c), Rat::from(2) - e * 2, -2),
            VermaCase::A1xA1 => (eps * eps / rpow(c, 4), Rat::from(4) - e * 4, -2),
            VermaCase::A2Twisted => (eps * eps / (c * c), Rat::from(4) - e * 2, -1),
        }
    }
}

/// Positive monomial `coef * q^exp`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMono {
    pub coef: Rational,
    pub exp: Rat,
}

impl QMono {
    pub fn new(coef: Rational, exp: Rat) -> Result<Self> {
        if !coef.is_positive() {
            return invalid("lambda must be positive");
        }
        Ok(Self { coef, exp })
    }

    pub fn q_pow(exp: Rat) -> Self {
        Self { coef: Rational::one(), exp }
    }

    /// Parses `c`, `q^{e}` or `c*q^{e}`.
    pub fn parse(s: &str) -> Result<Self> {
        let p = LaurentPoly::parse_monomial(s)?;
        match p.terms().iter().next() {
            Some((e, c)) if p.len() == 1 => Self::new(c.clone(), *e),
            _ => invalid(format!("'{s}' is not a monomial")),
        }
    }

    pub fn ln(&self, q: f64) -> f64 {
        to_f64(&self.coef).ln() + self.exp.to_f64().unwrap() * q.ln()
    }

    pub fn value_f64(&self, q: f64) -> f64 {
        self.ln(q).exp()
    }

    fn as_poly(&self) -> LaurentPoly {
        LaurentPoly::monomial(self.coef.clone(), self.exp)
    }

    /// Exact equality of values at `q`.
    pub fn equals_at(&self, o: &Self, q: &Rational) -> Result<bool> {
        Ok(self.as_poly().eval_radical(q)? == o.as_poly().eval_radical(q)?)
    }

    pub fn weight_function(&self, rank: usize) -> WeightFunction {
        WeightFunction {
            coef: vec![crate::exactmath::PolarRational::from_real(self.coef.clone()); rank],
            exp: vec![self.exp; rank],
        }
    }
}

impl std::fmt::Display for QMono {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.as_poly())
    }
}

/// Exact comparison of `a q^r` with `1`.
fn cmp_with_one(a: &Rational, r: Rat, q: &Rational) -> Ordering {
    if !a.is_positive() {
        return Ordering::Less;
    }
    let d = *r.denom();
    (rpow(a, d) * rpow(q, *r.numer())).cmp(&Rational::one())
}

fn ln_abs_one_minus_exp(x: f64) -> f64 {
    if x < 0.0 {
        (-x.exp_m1()).ln()
    } else {
        x + (-(-x).exp_m1()).ln()
    }
}

fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// Sign scan of the Gram recursion.
#[derive(Clone, Debug)]
pub struct VermaRecord {
    pub case: VermaCase,
    pub lambda: QMono,
    pub eps: Rational,
    /// Signs of `c_0, ..., c_tmax`.
    pub signs: Vec<i8>,
    /// `ln |c_t|`, `-inf` once the norms vanish.
    pub log_norms: Vec<f64>,
    pub unitarizable: bool,
    /// First `t` with `c_t = 0`.
    pub truncation: Option<usize>,
}

impl VermaRecord {
    pub fn norm(&self, t: usize) -> f64 {
        self.signs[t] as f64 * self.log_norms[t].exp()
    }
}

/// Runs the closed-form Gram recursion of `case` up to `t_max`, with exact signs.
pub fn verma_gram(case: VermaCase, lambda: &QMono, eps: &Rational, t_max: usize, q: &Rational) -> Result<VermaRecord> {
    check_q_exact(q)?;
    if !lambda.coef.is_positive() {
        return invalid("lambda must be positive");
    }
    if t_max > 10_000 {
        return Err(Error::Guard(format!("t_max = {t_max} exceeds 10^4")));
    }
    let qf = to_f64(q);
    let lq = qf.ln();
    let (a, r0, slope) = case.factor_data(lambda, eps);
    let la = if a.is_zero() { f64::NEG_INFINITY } else { to_f64(&a.abs()).ln() };
    let mut signs = vec![1i8];
    let mut logs = vec![0.0f64];
    let mut truncation = None;
    for t in 1..=t_max {
        if truncation.is_some() {
            signs.push(0);
            logs.push(f64::NEG_INFINITY);
            continue;
        }
        let tf = t as f64;
        let r = r0 + Rat::from(slope * t as i64);
        let x = la + r.to_f64().unwrap() * lq;
        let (sign, lf) = if a.is_zero() {
            (1i8, 0.0)
        } else if a.is_negative() {
            (1, softplus(x))
        } else {
            let ord = if x.abs() > 1e-6 { 0.0f64.partial_cmp(&x).unwrap().reverse() } else { cmp_with_one(&a, r, q) };
            match ord {
                Ordering::Less => (1, ln_abs_one_minus_exp(x)),
                Ordering::Equal => (0, f64::NEG_INFINITY),
                Ordering::Greater => (-1, ln_abs_one_minus_exp(x)),
            }
        };
        let qt = -tf * lq + (-(2.0 * tf * lq).exp_m1()).ln();
        let pre = match case {
            VermaCase::A1H2 => qt - tf * lq - (1.0 / (qf * qf) - 1.0).ln() - (1.0 / qf - qf).ln(),
            VermaCase::A1xA1 => (1.0 - tf) * lq + qt - 2.0 * (1.0 / qf - qf).ln(),
            VermaCase::A2Twisted => {
                let extra = if a.is_zero() {
                    0.0
                } else {
                    softplus(la + (4.0 - tf) * lq - 2.0 * lambda.exp.to_f64().unwrap() * lq)
                        - softplus(la + (5.0 - 2.0 * tf) * lq - 2.0 * lambda.exp.to_f64().unwrap() * lq)
                };
                (1.0 - tf) * lq + qt - 2.0 * (1.0 / qf - qf).ln() + extra
            }
        };
        let prev = *signs.last().unwrap();
        signs.push(prev * sign);
        logs.push(if sign == 0 { f64::NEG_INFINITY } else { logs.last().unwrap() + pre + lf });
        if sign == 0 {
            truncation = Some(t);
        }
    }
    let unitarizable = signs.iter().all(|&s| s >= 0);
    Ok(VermaRecord { case, lambda: lambda.clone(), eps: eps.clone(), signs, log_norms: logs, unitarizable, truncation })
}

/// Admissible highest weight moduli.
#[derive(Clone, Debug)]
pub enum HwFamily {
    /// Members `n = 0, 1, ...`.
    Discrete(Vec<QMono>),
    AllModuli,
    /// Every nonzero real; the negative half-line is the dot image of the positive one.
    HalfLines,
}

#[derive(Clone, Debug)]
pub struct HwClass {
    pub case: VermaCase,
    pub eps: Rational,
    pub family: HwFamily,
    /// Number of weights confirmed by a sign scan.
    pub confirmed: usize,
}

fn check_eps(case: VermaCase, eps: &Rational) -> Result<()> {
    if case != VermaCase::A1H2 && eps.is_negative() {
        return invalid(format!("{} needs an ungauged eps >= 0", case.name()));
    }
    Ok(())
}

/// Member `n` of the discrete family for `eps > 0`.
pub fn family_member(case: VermaCase, eps: &Rational, n: u32) -> Result<QMono> {
    if !eps.is_positive() {
        return invalid("discrete families need eps > 0");
    }
    let n = Rat::from(n as i64);
    let root = || exact_root(eps, 2).ok_or_else(|| Error::Validation("eps must be a rational square".into()));
    match case {
        VermaCase::A1H2 => QMono::new(root()?, -n),
        VermaCase::A1xA1 => QMono::new(root()?, (Rat::one() - n) / 2),
        VermaCase::A2Twisted => QMono::new(eps.clone(), (Rat::from(3) - n) / 2),
    }
}

fn sample_moduli() -> Vec<QMono> {
    [(1, 1, 0, 1), (1, 1, -2, 1), (1, 1, 1, 3), (3, 2, 0, 1), (2, 7, 5, 2), (5, 1, -7, 4)]
        .iter()
        .map(|&(a, b, e, f)| QMono { coef: crate::exactmath::rational(a, b), exp: Rat::new(e, f) })
        .collect()
}

/// Admissible highest weights of `case`, each confirmed by [`verma_gram`].
pub fn classify_hw(case: VermaCase, eps: &Rational, q: &Rational, n_max: u32) -> Result<HwClass> {
    check_eps(case, eps)?;
    check_q_exact(q)?;
    if eps.is_positive() {
        let mut members = Vec::new();
        for n in 0..=n_max {
            let m = family_member(case, eps, n)?;
            let rec = verma_gram(case, &m, eps, n as usize + 4, q)?;
            if !rec.unitarizable || rec.truncation != Some(n as usize + 1) {
                return Err(broken("classify_hw", format!("member {n} = {m} fails its sign scan")));
            }
            members.push(m);
        }
        let confirmed = members.len();
        return Ok(HwClass { case, eps: eps.clone(), family: HwFamily::Discrete(members), confirmed });
    }
    let samples = sample_moduli();
    for m in &samples {
        let rec = verma_gram(case, m, eps, 64, q)?;
        if !rec.unitarizable || rec.truncation.is_some() {
            return Err(broken("classify_hw", format!("{m} fails its sign scan")));
        }
    }
    let family = if eps.is_zero() { HwFamily::AllModuli } else { HwFamily::HalfLines };
    Ok(HwClass { case, eps: eps.clone(), family, confirmed: samples.len() })
}

/// Index `n` of `lambda` in the discrete family, if it is a member.
pub fn family_index(case: VermaCase, lambda: &QMono, eps: &Rational, q: &Rational, n_bound: u32) -> Result<Option<u32>> {
    for n in 0..=n_bound {
        if family_member(case, eps, n)?.equals_at(lambda, q)? {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// Multiplicities per a-level `m` (a-eigenvalue `lambda q^m`) up to `depth`.
pub fn module_weight_mults(case: VermaCase, lambda: &QMono, eps: &Rational, q: &Rational, depth: u32) -> Result<BTreeMap<u32, u64>> {
    check_eps(case, eps)?;
    let n: Option<u32> = if eps.is_positive() {
        let rec = verma_gram(case, lambda, eps, (depth as usize + 2).clamp(200, 10_000), q)?;
        match (rec.unitarizable, rec.truncation) {
            (true, Some(t)) => Some(t as u32 - 1),
            _ => return invalid(format!("{lambda} is not in the classified family")),
        }
    } else {
        None
    };
    let cap = |l: u32| n.map_or(l, |n| l.min(n));
    let mut out = BTreeMap::new();
    for l in 0..=depth {
        let m: u64 = match case {
            VermaCase::A1H2 => {
                if l % 2 == 1 || n.is_some_and(|n| l / 2 > n) {
                    continue;
                }
                1
            }
            VermaCase::A1xA1 => cap(l) as u64 + 1,
            VermaCase::A2Twisted => (0..=cap(l)).map(|t| ((l - t) / 2 + 1) as u64).sum(),
        };
        out.insert(l, m);
    }
    Ok(out)
}

/// Multiplicities for [`crate::hc_integral::cell_state`] from the low rank classification.
#[derive(Clone, Debug)]
pub struct LowRankProvider {
    pub case: VermaCase,
    pub eps: Rational,
    pub q: Rational,
}

impl MultProvider for LowRankProvider {
    fn mults(&self, _w: &WeylElement, highest: &WeightFunction, depth: usize) -> Result<CellMults> {
        let c = &highest.coef[0];
        if !c.is_real() {
            return invalid("cell highest weight is not real");
        }
        let lam = QMono::new(c.modulus().clone(), highest.exp[0])?;
        let eps = if self.eps.is_positive() && c.to_real().is_some_and(|r| r.is_negative()) {
            return invalid("negative highest weight for eps > 0");
        } else {
            self.eps.clone()
        };
        Ok(module_weight_mults(self.case, &lam, &eps, &self.q, depth as u32)?
            .into_iter()
            .map(|(l, m)| (self.case.alpha_plus(l), m))
            .collect())
    }
}

/// Counts of positive, negative and zero eigenvalues.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Inertia {
    pub pos: usize,
    pub neg: usize,
    pub zero: usize,
}

/// Exact inertia of a symmetric rational matrix by symmetric elimination.
pub fn inertia(m: &[Vec<Rational>]) -> Inertia {
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    let mut res = Inertia::default();
    let mut alive: Vec<usize> = (0..a.len()).collect();
    while !alive.is_empty() {
        if let Some(pi) = alive.iter().position(|&i| !a[i][i].is_zero()) {
            let p = alive.remove(pi);
            let piv = a[p][p].clone();
            if piv.is_positive() {
                res.pos += 1;
            } else {
                res.neg += 1;
            }
            for &i in &alive {
                let f = &a[i][p] / &piv;
                for &j in &alive {
                    let d = &f * &a[p][j];
                    a[i][j] -= d;
                }
            }
            continue;
        }
        let pair = alive.iter().enumerate().find_map(|(x, &i)| alive[x + 1..].iter().find(|&&j| !a[i][j].is_zero()).map(|&j| (i, j)));
        match pair {
            None => {
                res.zero += alive.len();
                break;
            }
            Some((i, j)) => {
                // a_ii = a_jj = 0 and a_ij != 0: the 2x2 block has one eigenvalue of each sign
                res.pos += 1;
                res.neg += 1;
                alive.retain(|&k| k != i && k != j);
                let det = -(&a[i][j] * &a[i][j]);
                for &k in &alive {
                    for &l in &alive {
                        let (bk, bl) = ((&a[k][i], &a[k][j]), (&a[i][l], &a[j][l]));
                        // inverse of [[0, b], [b, 0]] is [[0, 1/b], [1/b, 0]]
                        let corr = -((bk.0 * bl.1 + bk.1 * bl.0) * &a[i][j]) / &det;
                        a[k][l] -= corr;
                    }
                }
            }
        }
    }
    res
}

/// Gram matrix of all words of length `level` in the lowering generators, built from the
/// commutation rules only, and its inertia. Needs exact values of `lambda` and of `q^{1/2}`.
pub fn slow_gram_inertia(case: VermaCase, lambda: &Rational, eps: &Rational, q: &Rational, level: usize) -> Result<Inertia> {
    check_q_exact(q)?;
    if level > 6 {
        return Err(Error::Guard("slow Gram oracle is limited to level 6".into()));
    }
    if !lambda.is_positive() {
        return invalid("lambda must be positive");
    }
    let qh = exact_root(q, 2).ok_or_else(|| Error::Validation("q^{1/2} must be rational".into()))?;
    let qi = q.recip();
    let gens = if case == VermaCase::A1H2 { 1 } else { 2 };
    let step = if case == VermaCase::A1H2 { q * q } else { q.clone() };
    // a acts on a word of length l by lambda * step^l
    let a_inv = |l: usize, p: i64| rpow(&(lambda * rpow(&step, l as i64)), -p);
    // x_g x_h^* = s * x_h^* x_g + c(l), the constant acting on a word of length l
    let rule = |g: usize, h: usize, l: usize| -> (Rational, Rational) {
        if g == h {
            let c = match case {
                VermaCase::A1H2 => (eps * a_inv(l, 2) - Rational::one()) / (q - &qi),
                _ => Rational::one() / (&qi - q),
            };
            return (&qi * &qi, c);
        }
        match case {
            VermaCase::A1xA1 => (Rational::one(), eps * q / (q - &qi) * a_inv(l, 2)),
            _ => (q.clone(), eps * q * &qh / (q - &qi) * a_inv(l, 1)),
        }
    };
    type Vector = HashMap<Vec<u8>, Rational>;
    fn lower(g: usize, word: &[u8], rule: &dyn Fn(usize, usize, usize) -> (Rational, Rational), memo: &mut HashMap<(usize, Vec<u8>), Vector>) -> Vector {
        if let Some(v) = memo.get(&(g, word.to_vec())) {
            return v.clone();
        }
        let mut out = Vector::new();
        if let Some((&h, rest)) = word.split_first() {
            let (s, c) = rule(g, h as usize, rest.len());
            for (w, x) in lower(g, rest, rule, memo) {
                let mut key = vec![h];
                key.extend(w);
                *out.entry(key).or_insert_with(Rational::zero) += &s * x;
            }
            if !c.is_zero() {
                *out.entry(rest.to_vec()).or_insert_with(Rational::zero) += c;
            }
        }
        out.retain(|_, v| !v.is_zero());
        memo.insert((g, word.to_vec()), out.clone());
        out
    }
    fn inner(u: &[u8], v: &Vector, rule: &dyn Fn(usize, usize, usize) -> (Rational, Rational), memo: &mut HashMap<(usize, Vec<u8>), Vector>) -> Rational {
        match u.split_first() {
            None => v.get(&Vec::new()).cloned().unwrap_or_else(Rational::zero),
            Some((&g, rest)) => {
                let mut lowered = Vector::new();
                for (w, x) in v {
                    for (w2, y) in lower(g as usize, w, rule, memo) {
                        *lowered.entry(w2).or_insert_with(Rational::zero) += x * y;
                    }
                }
                inner(rest, &lowered, rule, memo)
            }
        }
    }
    let mut words: Vec<Vec<u8>> = vec![vec![]];
    for _ in 0..level {
        words = words.iter().flat_map(|w| (0..gens as u8).map(move |g| [w.clone(), vec![g]].concat())).collect();
    }
    let mut memo = HashMap::new();
    let gram: Vec<Vec<Rational>> = words
        .iter()
        .map(|u| {
            words
                .iter()
                .map(|v| {
                    let vv: Vector = [(v.clone(), Rational::one())].into_iter().collect();
                    inner(u, &vv, &rule, &mut memo)
                })
                .collect()
        })
        .collect();
    Ok(inertia(&gram))
}

/// Modulus of `s . lambda` at the first node, for `lambda` constant on the nodes.
pub fn dot_image_modulus(case: VermaCase, lambda: &QMono, eps: &Rational) -> Result<(Rational, Rat)> {
    let nu = case.datum(eps)?;
    let lam = lambda.weight_function(nu.rank());
    let s = nu.generators().into_iter().next().ok_or_else(|| Error::Validation("no generators".into()))?;
    let img = crate::twistdata::dot(&s, &nu, &lam, true)?;
    Ok((img.coef[0].modulus().clone(), img.exp[0]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rational;

    const Q: f64 = 0.5;

    #[test]
    fn stratify_examples() {
        assert_eq!(h2_stratify(1.0, 1.0 / Q + Q, Q).unwrap(), Some(Stratum::Plus { c: 1.0, n: 0 }));
        assert_eq!(h2_stratify(0.0, 0.0, Q).unwrap(), Some(Stratum::Zero { t: 0.0 }));
        assert_eq!(h2_stratify(-1.0, 0.0, Q).unwrap(), Some(Stratum::Minus { c: 1.0, a: 1.0 }));
        assert_eq!(h2_stratify(1.0, 3.0, Q).unwrap(), None);
        let q = rational(1, 2);
        assert_eq!(h2_stratify_exact(&rational(4, 1), &rational(-5, 1), &q).unwrap(), Some(Stratum::Plus { c: -2.0, n: 0 }));
        assert_eq!(h2_stratify_exact(&rational(4, 1), &rational(5, 1), &q).unwrap(), Some(Stratum::Plus { c: 2.0, n: 0 }));
        assert_eq!(h2_stratify_exact(&rational(1, 1), &rational(17, 8), &q).unwrap(), None);
        assert_eq!(h2_stratify_exact(&rational(1, 1), &rational(65, 8), &q).unwrap(), Some(Stratum::Plus { c: 1.0, n: 2 }));
    }

    #[test]
    fn model_spectra() {
        let m = h2_model(Stratum::Plus { c: 1.0, n: 1 }, BlockSel::All, 10, Q).unwrap();
        assert_eq!(m.blocks[0].mu(), &[2.0, 0.5]);
        let m = h2_model(Stratum::Minus { c: 1.0, a: 2.0 }, BlockSel::Plus, 5, Q).unwrap();
        assert!((m.blocks[0].mu()[1] - 2.0 * Q.powi(3)).abs() < 1e-15);
        assert!(h2_model(Stratum::Zero { t: 1.0 }, BlockSel::Plus, 5, Q).is_err());
        assert!(h2_model(Stratum::Zero { t: 0.0 }, BlockSel::All, 5, Q).is_err());
    }

    #[test]
    fn relations_hold() {
        for s in [Stratum::Plus { c: -1.5, n: 4 }, Stratum::Zero { t: -2.0 }, Stratum::Minus { c: 0.7, a: 1.9 }] {
            let m = h2_model(s, BlockSel::All, 60, Q).unwrap();
            assert!(m.relation_residual() < 1e-12, "{s:?}: {}", m.relation_residual());
        }
    }

    #[test]
    fn dense_matches_banded() {
        let m = h2_model(Stratum::Zero { t: 1.0 }, BlockSel::All, 6, Q).unwrap();
        let ops = m.operators();
        let prod = &ops[1].matrix * &ops[2].matrix;
        assert!((prod - m.monomial(&[1, 2])[0].to_dense()).norm() < 1e-14);
    }

    #[test]
    fn invariance_small() {
        for s in [Stratum::Plus { c: 1.0, n: 3 }, Stratum::Zero { t: 1.3 }, Stratum::Minus { c: 1.0, a: 0.6 }] {
            let m = h2_model(s, BlockSel::All, 120, Q).unwrap();
            assert!(invariance_residual(&m) < 1e-10, "{s:?}");
        }
    }

    #[test]
    fn fusion_reproduces_spectrum() {
        for s in [Stratum::Plus { c: 1.0, n: 1 }, Stratum::Plus { c: -2.0, n: 3 }, Stratum::Zero { t: 1.0 }, Stratum::Minus { c: 1.0, a: 1.5 }] {
            let m = h2_model(s, BlockSel::All, 80, Q).unwrap();
            let r = fusion_check(&m, 80, &[-2, -1, 0, 1, 2]);
            assert!(r.max_deviation < 1e-8 && r.missing.is_empty(), "{s:?}: {r:?}");
        }
    }

    #[test]
    fn verma_examples() {
        let q = rational(1, 2);
        let r = verma_gram(VermaCase::A1xA1, &QMono::q_pow(Rat::zero()), &rational(1, 1), 6, &q).unwrap();
        assert!((r.norm(1) - 0.5).abs() < 1e-14);
        assert_eq!(r.truncation, Some(2));
        assert!(r.unitarizable);
        let r = verma_gram(VermaCase::A1xA1, &QMono::q_pow(Rat::new(1, 4)), &rational(1, 1), 6, &q).unwrap();
        assert!(r.signs[2] < 0 && !r.unitarizable);
        let r = verma_gram(VermaCase::A2Twisted, &QMono::q_pow(Rat::new(3, 2)), &rational(1, 1), 6, &q).unwrap();
        assert_eq!(r.truncation, Some(1));
        assert!(r.unitarizable);
    }

    #[test]
    fn norms_match_direct_product() {
        let q = 0.5f64;
        let lam = 1.7f64;
        let r = verma_gram(VermaCase::A2Twisted, &QMono::new(rational(17, 10), Rat::zero()).unwrap(), &rational(1, 1), 8, &rational(1, 2)).unwrap();
        let mut c = 1.0;
        for t in 1..=8 {
            let tf = t as f64;
            let e2 = lam.powi(-2);
            c *= q.powf(1.0 - tf) * (q.powf(-tf) - q.powf(tf)) * (1.0 + e2 * q.powf(4.0 - tf))
                / ((1.0 / q - q).powi(2) * (1.0 + e2 * q.powf(5.0 - 2.0 * tf)))
                * (1.0 - e2 * q.powf(4.0 - tf));
            assert!((r.norm(t) - c).abs() <= 1e-12 * c.abs(), "t = {t}");
        }
        let r = verma_gram(VermaCase::A1H2, &QMono::new(rational(3, 1), Rat::zero()).unwrap(), &rational(1, 1), 6, &rational(1, 2)).unwrap();
        let (mut b, mut c) = (0.0f64, 1.0f64);
        for t in 1..=6 {
            b = b / (q * q) + (1.0 / 9.0 * q.powi(-4 * (t - 1)) - 1.0) / (q - 1.0 / q);
            c *= b;
            assert!((r.norm(t as usize) - c).abs() <= 1e-12 * c.abs(), "t = {t}");
        }
    }

    #[test]
    fn classification_examples() {
        let q = rational(1, 2);
        let one = rational(1, 1);
        match classify_hw(VermaCase::A1H2, &one, &q, 5).unwrap().family {
            HwFamily::Discrete(m) => assert_eq!(m[3], QMono::q_pow(Rat::from(-3))),
            f => panic!("{f:?}"),
        }
        match classify_hw(VermaCase::A1xA1, &one, &q, 5).unwrap().family {
            HwFamily::Discrete(m) => assert_eq!(m[0], QMono::q_pow(Rat::new(1, 2))),
            f => panic!("{f:?}"),
        }
        assert!(matches!(classify_hw(VermaCase::A1xA1, &Rational::zero(), &q, 5).unwrap().family, HwFamily::AllModuli));
        assert!(matches!(classify_hw(VermaCase::A1H2, &-one.clone(), &q, 5).unwrap().family, HwFamily::HalfLines));
        assert!(classify_hw(VermaCase::A2Twisted, &-one, &q, 5).is_err());
    }

    #[test]
    fn weight_mults_examples() {
        let q = rational(1, 2);
        let one = rational(1, 1);
        let m = module_weight_mults(VermaCase::A1H2, &QMono::q_pow(Rat::from(-1)), &one, &q, 10).unwrap();
        assert_eq!(m.into_iter().collect::<Vec<_>>(), vec![(0, 1), (2, 1)]);
        let m = module_weight_mults(VermaCase::A1xA1, &QMono::q_pow(Rat::zero()), &one, &q, 4).unwrap();
        assert_eq!(m.values().copied().collect::<Vec<_>>(), vec![1, 2, 2, 2, 2]);
        let m = module_weight_mults(VermaCase::A1xA1, &QMono::q_pow(Rat::zero()), &Rational::zero(), &q, 4).unwrap();
        assert_eq!(m.values().copied().collect::<Vec<_>>(), vec![1, 2, 3, 4, 5]);
        assert!(module_weight_mults(VermaCase::A1xA1, &QMono::q_pow(Rat::new(1, 4)), &one, &q, 4).is_err());
    }

    #[test]
    fn inertia_basic() {
        let r = |x: i64| rational(x, 1);
        let m = vec![vec![r(0), r(1), r(0)], vec![r(1), r(0), r(0)], vec![r(0), r(0), r(0)]];
        assert_eq!(inertia(&m), Inertia { pos: 1, neg: 1, zero: 1 });
        let m = vec![vec![r(2), r(1)], vec![r(1), r(2)]];
        assert_eq!(inertia(&m), Inertia { pos: 2, neg: 0, zero: 0 });
    }

    #[test]
    fn slow_oracle_agrees() {
        let q = rational(1, 4);
        let one = rational(1, 1);
        for case in [VermaCase::A1H2, VermaCase::A1xA1, VermaCase::A2Twisted] {
            for n in 0..4u32 {
                let m = family_member(case, &one, n).unwrap();
                let lam = m.as_poly().eval_radical(&q).unwrap().as_rational().unwrap();
                let mults = module_weight_mults(case, &m, &one, &q, 8).unwrap();
                let max_level = if case == VermaCase::A1H2 { 4 } else { 3 };
                for level in 0..=max_level {
                    let i = slow_gram_inertia(case, &lam, &one, &q, level).unwrap();
                    let key = if case == VermaCase::A1H2 { 2 * level } else { level } as u32;
                    let expect = mults.get(&key).copied().unwrap_or(0);
                    assert_eq!((i.pos as u64, i.neg), (expect, 0), "{case:?} n={n} level={level}");
                }
            }
        }
    }

    #[test]
    fn slow_oracle_detects_negative_norm() {
        let q = rational(1, 4);
        let one = rational(1, 1);
        let lam = rational(3, 4);
        let rec = verma_gram(VermaCase::A1xA1, &QMono::new(lam.clone(), Rat::zero()).unwrap(), &one, 4, &q).unwrap();
        assert_eq!(&rec.signs[..3], &[1, 1, -1]);
        assert_eq!(slow_gram_inertia(VermaCase::A1xA1, &lam, &one, &q, 1).unwrap().neg, 0);
        assert!(slow_gram_inertia(VermaCase::A1xA1, &lam, &one, &q, 2).unwrap().neg > 0);
    }
}
