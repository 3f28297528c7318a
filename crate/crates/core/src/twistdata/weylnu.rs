use super::{TwistingDatum, SignCharacter};
use crate::error::{broken, invalid, Error, Result};
use crate::exactmath::{exact_root, rpow, PolarRational, Rat, Rational};
use crate::rootsys::{enumerate_group, Weight, WeylElement, WEYL_GUARD};
use num_integer::Integer;
use num_traits::{One, Signed};
use std::collections::{HashMap, HashSet};

/// Compact folded roots with a simple system and lifted reflections.
#[derive(Clone, Debug)]
pub struct CompactRoots {
    /// Indices into the folded positive roots.
    pub positive: Vec<usize>,
    pub simple: Vec<usize>,
    /// Reflections in the simple compact roots, as elements of `W_nu`.
    pub generators: Vec<WeylElement>,
}

fn action_key(nu: &TwistingDatum, w: &WeylElement) -> Vec<Weight> {
    nu.folded.varpi_hat.iter().map(|v| w.apply(v)).collect()
}

pub fn compact_roots(nu: &TwistingDatum) -> Result<CompactRoots> {
    nu.require_ungauged()?;
    let f = &nu.folded;
    let star: HashSet<usize> = nu.tau().i_star().into_iter().collect();
    let in_j = |i: usize| !nu.eps[f.classes[i][0]].is_zero();
    let mut positive = Vec::new();
    for (idx, k) in f.pos_roots_hat.iter().enumerate() {
        if k.iter().enumerate().any(|(i, &c)| c != 0 && !in_j(i)) {
            continue;
        }
        let sign_ok = nu.eps_hat(k)?.is_positive();
        let odd = k.iter().enumerate().any(|(i, &c)| star.contains(&f.classes[i][0]) && in_j(i) && c.is_odd());
        if sign_ok || odd {
            positive.push(idx);
        }
    }
    let set: HashSet<&Vec<i64>> = positive.iter().map(|&i| &f.pos_roots_hat[i]).collect();
    let simple: Vec<usize> = positive
        .iter()
        .copied()
        .filter(|&i| {
            let b = &f.pos_roots_hat[i];
            !positive.iter().any(|&j| {
                let c = &f.pos_roots_hat[j];
                let d: Vec<i64> = b.iter().zip(c).map(|(x, y)| x - y).collect();
                d.iter().all(|&x| x >= 0) && d.iter().any(|&x| x > 0) && set.contains(&d)
            })
        })
        .collect();
    let wnu = nu.w_nu()?;
    let lookup: HashMap<Vec<Weight>, &WeylElement> = wnu.iter().map(|(w, _)| (action_key(nu, w), w)).collect();
    let mut generators = Vec::new();
    for &i in &simple {
        let beta = &f.pos_roots[i];
        let key: Vec<Weight> = f
            .varpi_hat
            .iter()
            .map(|v| v.sub(&beta.scale(nu.rs().coroot_pairing(beta, v))))
            .collect();
        match lookup.get(&key) {
            Some(w) => generators.push((*w).clone()),
            None => return Err(broken("compact-reflection-lift", format!("no element of W_nu reflects in root {i}"))),
        }
    }
    Ok(CompactRoots { positive, simple, generators })
}

/// `W_nu^+`, the Weyl group of the compact roots.
pub fn w_plus(nu: &TwistingDatum) -> Result<Vec<WeylElement>> {
    let c = compact_roots(nu)?;
    Ok(enumerate_group(nu.rs(), &c.generators, WEYL_GUARD)?.into_iter().map(|(w, _)| w).collect())
}

/// `W_nu^-` by breadth-first search over words in `J^tau`, extending only on a sign change.
pub fn enumerate_w_minus(nu: &TwistingDatum) -> Result<Vec<(WeylElement, SignCharacter)>> {
    let flags = nu.classify();
    if !flags.ungauged || !flags.reduced {
        return invalid("W_nu^- needs an ungauged reduced twisting datum");
    }
    let rs = nu.rs();
    let gens: Vec<WeylElement> = nu.j_tau().into_iter().map(|r| WeylElement::simple(rs, r)).collect();
    let id = WeylElement::identity(rs.rank);
    let mut seen: HashSet<Vec<i64>> = HashSet::from([id.matrix.clone()]);
    let mut out = vec![(id, SignCharacter::trivial(nu.folded.classes.len()))];
    let mut head = 0;
    while head < out.len() {
        let (w, sc) = out[head].clone();
        head += 1;
        for g in &gens {
            let x = g.mul(&w);
            if seen.contains(&x.matrix) {
                continue;
            }
            let sx = nu.sign_character(&x)?;
            if sx != sc {
                if out.len() >= WEYL_GUARD {
                    return Err(Error::Guard(format!("W_nu^- exceeds {WEYL_GUARD} elements")));
                }
                seen.insert(x.matrix.clone());
                out.push((x, sx));
            }
        }
    }
    Ok(out)
}

/// Result of strong reduction: `eps' = f (w eps)` with `f` positive.
#[derive(Clone, Debug)]
pub struct StrongReduction {
    pub datum: TwistingDatum,
    pub w: WeylElement,
    pub f: Vec<Rational>,
}

fn multiplicative_reduction(nu: &TwistingDatum) -> Vec<Rational> {
    nu.eps.iter().map(|e| if e.is_zero() { Rational::one() } else { e.modulus().recip() }).collect()
}

fn scaled(nu: &TwistingDatum, f: &[Rational]) -> Result<TwistingDatum> {
    nu.with_eps(nu.eps.iter().zip(f).map(|(e, x)| e.scale(x)).collect())
}

/// Finds an equivalent strongly reduced datum, searching `W_nu^-` first and then `W_nu`.
pub fn strongly_reduce(nu: &TwistingDatum) -> Result<StrongReduction> {
    nu.require_ungauged()?;
    let f0 = multiplicative_reduction(nu);
    let base = scaled(nu, &f0)?;
    let try_w = |w: &WeylElement| -> Result<Option<StrongReduction>> {
        let moved = nu.act_eps(w)?;
        let f = multiplicative_reduction(&moved);
        let cand = scaled(&moved, &f)?;
        let flags = cand.classify();
        Ok((flags.ungauged && flags.strongly_reduced).then(|| StrongReduction { datum: cand, w: w.clone(), f }))
    };
    for (w, _) in enumerate_w_minus(&base)? {
        if let Some(hit) = try_w(&w)? {
            return Ok(hit);
        }
    }
    let mut all: Vec<WeylElement> = nu.w_nu()?.into_iter().map(|(w, _)| w).collect();
    all.sort_by(|a, b| (a.length(), &a.word).cmp(&(b.length(), &b.word)));
    for w in &all {
        if let Some(hit) = try_w(w)? {
            return Ok(hit);
        }
    }
    Err(broken("strong-reduction", "no strongly reduced datum in the W_nu orbit"))
}

/// Character `f` on `P` with `f_P(varpi_r) = coef_r * radicand_r^{1/n}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaugeTransport {
    pub n: u32,
    pub values: Vec<(PolarRational, Rational)>,
}

impl GaugeTransport {
    /// `f_P(omega)` for integral `omega`, as `(coefficient, radicand)` with the same root index.
    pub fn eval(&self, w: &Weight) -> Result<(PolarRational, Rational)> {
        let mut c = PolarRational::one();
        let mut r = Rational::one();
        for (i, x) in w.0.iter().enumerate() {
            if !x.is_integer() {
                return invalid("f_P is only defined on P");
            }
            let k = x.to_integer();
            c = c.mul(&self.values[i].0.pow(k)?);
            r *= rpow(&self.values[i].1, k);
        }
        Ok((c, r))
    }

    /// Collapses `coef * radicand^{1/n}` to an exact polar value when the root is rational.
    pub fn exact(&self, w: &Weight) -> Result<Option<PolarRational>> {
        let (c, r) = self.eval(w)?;
        Ok(exact_root(&r, self.n).map(|root| c.scale(&root)))
    }
}

/// Builds `f` with `eps'_r = f_P(alpha_r) eps_r` and `f_P(omega) eps_Q(omega - w^{-1} omega) > 0`
/// on `P^tau`, from `eps' = lambda (w eps)` with `lambda` positive.
pub fn gauge_transport(nu: &TwistingDatum, nu2: &TwistingDatum, w: &WeylElement) -> Result<GaugeTransport> {
    let rs = nu.rs();
    if nu2.rank() != nu.rank() || nu2.tau() != nu.tau() {
        return invalid("data must share the diagram and involution");
    }
    let moved = nu.act_eps(w)?;
    let n = rs.rank;
    let mut lambda = Vec::with_capacity(n);
    for r in 0..n {
        let (a, b) = (&nu2.eps[r], &moved.eps[r]);
        if a.is_zero() && b.is_zero() {
            lambda.push(Rational::one());
            continue;
        }
        if a.is_zero() || b.is_zero() {
            return invalid("supports differ; data are not Weyl related");
        }
        let l = a.mul(&b.inv()?);
        if !l.is_positive() {
            return invalid(format!("eps'/(w eps) at node {} is {l}, not positive", r + 1));
        }
        lambda.push(l.modulus().clone());
    }
    let big_n = rs.cartan_inv.iter().flatten().fold(1i64, |acc, x| acc.lcm(x.denom()));
    let winv = w.inverse(rs);
    let mut values = Vec::with_capacity(n);
    for r in 0..n {
        let mut rad = Rational::one();
        for s in 0..n {
            let k = rs.cartan_inv[s][r] * Rat::from(big_n);
            rad *= rpow(&lambda[s], k.to_integer());
        }
        let v = Weight::unit(n, r);
        let e = nu.eps_q(&v.sub(&winv.apply(&v)))?;
        let mut coef = e.inv()?;
        if let Some(root) = exact_root(&rad, big_n as u32) {
            coef = coef.scale(&root);
            rad = Rational::one();
        }
        values.push((coef, rad));
    }
    let f = GaugeTransport { n: big_n as u32, values };
    for r in 0..n {
        if nu.eps[r].is_zero() {
            continue;
        }
        let val = f.exact(&rs.simple_root(r))?.ok_or_else(|| broken("gauge-transport", "f_P(alpha_r) is irrational"))?;
        if val.mul(&nu.eps[r]) != nu2.eps[r] {
            return Err(broken("gauge-transport", format!("f_P(alpha_{}) eps_{} != eps'_{}", r + 1, r + 1, r + 1)));
        }
    }
    for c in &nu.folded.classes {
        let mut v = Weight::zero(n);
        for &s in c {
            v.0[s] = Rat::one();
        }
        let (coef, rad) = f.eval(&v)?;
        let e = nu.eps_q(&v.sub(&winv.apply(&v)))?;
        if !(coef.mul(&e).is_positive() && rad.is_positive()) {
            return Err(broken("gauge-transport", "positivity on P^tau fails"));
        }
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rational;

    fn words(v: &[(WeylElement, SignCharacter)]) -> Vec<String> {
        v.iter().map(|(w, _)| w.to_string()).collect()
    }

    #[test]
    fn w_minus_examples() {
        let nu = TwistingDatum::simple("A1", &[], &[1]).unwrap();
        assert_eq!(words(&enumerate_w_minus(&nu).unwrap()), ["e"]);
        let nu = TwistingDatum::simple("A1", &[], &[-1]).unwrap();
        assert_eq!(words(&enumerate_w_minus(&nu).unwrap()), ["e", "s1"]);
        let nu = TwistingDatum::simple("A1xA1", &[2, 1], &[1, 1]).unwrap();
        assert_eq!(words(&enumerate_w_minus(&nu).unwrap()), ["e"]);
        let nu = TwistingDatum::simple("A2", &[], &[-1, 1]).unwrap();
        assert_eq!(words(&enumerate_w_minus(&nu).unwrap()), ["e", "s1", "s2s1"]);
    }

    #[test]
    fn compact_examples() {
        let nu = TwistingDatum::simple("A2", &[], &[-1, 1]).unwrap();
        let c = compact_roots(&nu).unwrap();
        let roots: Vec<&Vec<i64>> = c.positive.iter().map(|&i| &nu.folded.pos_roots_hat[i]).collect();
        assert_eq!(roots, vec![&vec![0, 1]]);
        let nu = TwistingDatum::simple("A3", &[3, 2, 1], &[1, -1, 1]).unwrap();
        let c = compact_roots(&nu).unwrap();
        let roots: Vec<&Vec<i64>> = c.positive.iter().map(|&i| &nu.folded.pos_roots_hat[i]).collect();
        assert!(roots.contains(&&vec![1, 1]));
        let nu = TwistingDatum::simple("B2", &[], &[1, 1]).unwrap();
        assert_eq!(compact_roots(&nu).unwrap().positive.len(), 4);
    }

    #[test]
    fn strong_reduction_examples() {
        let nu = TwistingDatum::simple("A1", &[], &[-4]).unwrap();
        let r = strongly_reduce(&nu).unwrap();
        assert_eq!(r.datum.eps[0], PolarRational::from_real(rational(-1, 1)));
        assert!(r.w.is_identity());
        assert_eq!(r.f, vec![rational(1, 4)]);
        let nu = TwistingDatum::simple("A2", &[], &[-1, -1]).unwrap();
        let r = strongly_reduce(&nu).unwrap();
        assert_eq!(r.w.to_string(), "s1");
        assert_eq!(r.datum.eps, vec![PolarRational::from_real(rational(-1, 1)), PolarRational::one()]);
    }

    #[test]
    fn gauge_transport_examples() {
        let nu = TwistingDatum::simple("A2", &[], &[-1, 1]).unwrap();
        let id = WeylElement::identity(2);
        let f = gauge_transport(&nu, &nu, &id).unwrap();
        assert!(f.values.iter().all(|(c, r)| *c == PolarRational::one() && r.is_one()));
        let nu = TwistingDatum::simple("A1", &[], &[-1]).unwrap();
        let s = WeylElement::simple(nu.rs(), 0);
        let f = gauge_transport(&nu, &nu, &s).unwrap();
        assert_eq!(f.exact(&Weight::from_ints(&[1])).unwrap().unwrap(), PolarRational::from_real(rational(-1, 1)));
        let nu4 = TwistingDatum::simple("A1", &[], &[-4]).unwrap();
        let f = gauge_transport(&nu, &nu4, &WeylElement::identity(1)).unwrap();
        assert_eq!(f.exact(&Weight::from_ints(&[1])).unwrap().unwrap(), PolarRational::from_real(rational(2, 1)));
    }

    #[test]
    fn gauge_transport_rejects_unrelated() {
        let nu = TwistingDatum::simple("A1", &[], &[-1]).unwrap();
        let nu2 = TwistingDatum::simple("A1", &[], &[1]).unwrap();
        assert!(gauge_transport(&nu, &nu2, &WeylElement::identity(1)).is_err());
    }
}
