use super::{fmt_rat, fmt_rational, rpow, to_f64, Rat, Rational};
use crate::error::{invalid, Result};
use num_traits::{One, Signed, Zero};
use std::fmt;

/// `modulus * exp(2 pi i * phase)` with the phase measured in turns.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PolarRational {
    modulus: Rational,
    phase: Rat,
}

fn reduce_phase(p: Rat) -> Rat {
    let f = p - p.floor();
    if f < Rat::zero() {
        f + Rat::one()
    } else {
        f
    }
}

impl PolarRational {
    pub fn new(modulus: Rational, phase: Rat) -> Result<Self> {
        if modulus.is_negative() {
            return invalid("polar modulus must be non-negative");
        }
        let phase = if modulus.is_zero() { Rat::zero() } else { reduce_phase(phase) };
        Ok(Self { modulus, phase })
    }

    pub fn zero() -> Self {
        Self { modulus: Rational::zero(), phase: Rat::zero() }
    }

    pub fn one() -> Self {
        Self { modulus: Rational::one(), phase: Rat::zero() }
    }

    /// Real number as a polar value: negative reals get phase 1/2.
    pub fn from_real(r: Rational) -> Self {
        if r.is_negative() {
            Self { modulus: -r, phase: Rat::new(1, 2) }
        } else {
            Self { modulus: r, phase: Rat::zero() }
        }
    }

    pub fn unit(phase: Rat) -> Self {
        Self { modulus: Rational::one(), phase: reduce_phase(phase) }
    }

    pub fn modulus(&self) -> &Rational {
        &self.modulus
    }

    pub fn phase(&self) -> Rat {
        self.phase
    }

    pub fn is_zero(&self) -> bool {
        self.modulus.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.phase.is_zero() || self.phase == Rat::new(1, 2)
    }

    pub fn is_positive(&self) -> bool {
        !self.is_zero() && self.phase.is_zero()
    }

    /// Signed real value when the phase is 0 or 1/2.
    pub fn to_real(&self) -> Option<Rational> {
        if self.phase.is_zero() {
            Some(self.modulus.clone())
        } else if self.phase == Rat::new(1, 2) {
            Some(-self.modulus.clone())
        } else {
            None
        }
    }

    pub fn conj(&self) -> Self {
        Self { modulus: self.modulus.clone(), phase: reduce_phase(-self.phase) }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let modulus = &self.modulus * &o.modulus;
        let phase = if modulus.is_zero() { Rat::zero() } else { reduce_phase(self.phase + o.phase) };
        Self { modulus, phase }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return invalid("inverse of zero polar value");
        }
        Ok(Self { modulus: self.modulus.recip(), phase: reduce_phase(-self.phase) })
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        if e == 0 {
            return Ok(Self::one());
        }
        if self.is_zero() {
            return if e > 0 { Ok(Self::zero()) } else { invalid("negative power of zero") };
        }
        Ok(Self { modulus: rpow(&self.modulus, e), phase: reduce_phase(self.phase * Rat::from(e)) })
    }

    pub fn scale(&self, r: &Rational) -> Self {
        self.mul(&Self::from_real(r.clone()))
    }

    /// `(re, im)` as floats.
    pub fn to_f64_pair(&self) -> (f64, f64) {
        let m = to_f64(&self.modulus);
        let t = 2.0 * std::f64::consts::PI * (*self.phase.numer() as f64 / *self.phase.denom() as f64);
        (m * t.cos(), m * t.sin())
    }
}

impl fmt::Display for PolarRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.to_real() {
            write!(f, "{}", fmt_rational(&r))
        } else {
            write!(f, "{}@{}", fmt_rational(&self.modulus), fmt_rat(&self.phase))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rational;

    #[test]
    fn zero_modulus_forces_phase_zero() {
        let z = PolarRational::new(Rational::zero(), Rat::new(1, 3)).unwrap();
        assert_eq!(z.phase(), Rat::zero());
    }

    #[test]
    fn phase_reduces_mod_one() {
        let p = PolarRational::new(rational(2, 1), Rat::new(-1, 4)).unwrap();
        assert_eq!(p.phase(), Rat::new(3, 4));
        assert_eq!(p.mul(&p.conj()), PolarRational::from_real(rational(4, 1)));
    }

    #[test]
    fn negative_real_roundtrip() {
        let p = PolarRational::from_real(rational(-3, 2));
        assert_eq!(p.to_real(), Some(rational(-3, 2)));
        assert_eq!(p.pow(2).unwrap().to_real(), Some(rational(9, 4)));
        assert_eq!(p.inv().unwrap().to_real(), Some(rational(-2, 3)));
    }
}
