use super::{LaurentPoly, Rational};
use crate::error::{invalid, Result};
use crate::rootsys::Weight;
use num_traits::One;
use std::collections::BTreeMap;

/// Group-algebra element `sum_w c_w(q) e^w` over a weight lattice of fixed rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharElement {
    rank: usize,
    terms: BTreeMap<Weight, LaurentPoly>,
}

impl CharElement {
    pub fn zero(rank: usize) -> Self {
        Self { rank, terms: BTreeMap::new() }
    }

    /// `e^w` with coefficient 1.
    pub fn exp(w: Weight) -> Self {
        let mut c = Self::zero(w.rank());
        c.add_term(w, LaurentPoly::one());
        c
    }

    pub fn one(rank: usize) -> Self {
        Self::exp(Weight::zero(rank))
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn terms(&self) -> &BTreeMap<Weight, LaurentPoly> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &Weight) -> LaurentPoly {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, w: Weight, c: LaurentPoly) {
        assert_eq!(w.rank(), self.rank, "weight rank mismatch");
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(w.clone()).or_default();
        *slot = &*slot + &c;
        if slot.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn add_rational(&mut self, w: Weight, c: Rational) {
        self.add_term(w, LaurentPoly::constant(c));
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        if self.rank != o.rank {
            return invalid(format!("lattice mismatch: rank {} vs {}", self.rank, o.rank));
        }
        let mut r = self.clone();
        for (w, c) in &o.terms {
            r.add_term(w.clone(), c.clone());
        }
        Ok(r)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut r = Self::zero(self.rank);
        for (w, p) in &self.terms {
            r.add_term(w.clone(), p.scale(c));
        }
        r
    }

    /// Applies a linear map to every exponent.
    pub fn map_weights(&self, f: impl Fn(&Weight) -> Weight) -> Self {
        let mut r: Option<Self> = None;
        for (w, p) in &self.terms {
            let nw = f(w);
            let acc = r.get_or_insert_with(|| Self::zero(nw.rank()));
            acc.add_term(nw, p.clone());
        }
        r.unwrap_or_else(|| Self::zero(self.rank))
    }
}

/// Convolution product in the group algebra.
pub fn char_mul(a: &CharElement, b: &CharElement) -> Result<CharElement> {
    if a.rank != b.rank {
        return invalid(format!("lattice mismatch: rank {} vs {}", a.rank, b.rank));
    }
    let mut r = CharElement::zero(a.rank);
    for (w1, c1) in &a.terms {
        for (w2, c2) in &b.terms {
            r.add_term(w1.add(w2), c1 * c2);
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rational;

    fn w(v: i64) -> Weight {
        Weight::from_ints(&[v])
    }

    #[test]
    fn inverse_weights_multiply_to_unit() {
        let p = char_mul(&CharElement::exp(w(1)), &CharElement::exp(w(-1))).unwrap();
        assert_eq!(p, CharElement::one(1));
    }

    #[test]
    fn zero_annihilates() {
        let p = char_mul(&CharElement::exp(w(1)), &CharElement::zero(1)).unwrap();
        assert!(p.is_zero());
    }

    #[test]
    fn binomial_square() {
        let s = CharElement::exp(w(1)).add(&CharElement::exp(w(-1))).unwrap();
        let sq = char_mul(&s, &s).unwrap();
        let mut expect = CharElement::exp(w(2));
        expect.add_rational(w(0), rational(2, 1));
        expect.add_rational(w(-2), rational(1, 1));
        assert_eq!(sq, expect);
    }

    #[test]
    fn rank_mismatch_rejected() {
        let a = CharElement::one(1);
        let b = CharElement::one(2);
        assert!(char_mul(&a, &b).is_err());
    }
}
