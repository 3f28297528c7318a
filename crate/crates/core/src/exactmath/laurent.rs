use super::{exact_root, fmt_rat, fmt_rational, lcm_i64, parse_rat, parse_rational, rpow, to_f64, Rat, Rational};
use crate::error::{invalid, Error, Result};
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};

/// Default exponent grid: exponents live in `(1/4)Z` unless a context raises it.
pub const DEFAULT_GRID: i64 = 4;

/// Finite sum `sum c_e q^e` with rational exponents on the grid `(1/D)Z`.
#[derive(Clone, Debug)]
pub struct LaurentPoly {
    terms: BTreeMap<Rat, Rational>,
    grid: i64,
}

impl PartialEq for LaurentPoly {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}
impl Eq for LaurentPoly {}

impl Hash for LaurentPoly {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.terms.hash(state)
    }
}

impl Default for LaurentPoly {
    fn default() -> Self {
        Self::zero()
    }
}

fn grid_for(e: &Rat, grid: i64) -> i64 {
    lcm_i64(grid, *e.denom())
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new(), grid: DEFAULT_GRID }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, Rat::zero())
    }

    /// `c q^e`; the grid is raised when `e` does not fit the default one.
    pub fn monomial(c: Rational, e: Rat) -> Self {
        let mut p = Self::zero();
        p.grid = grid_for(&e, p.grid);
        if !c.is_zero() {
            p.terms.insert(e, c);
        }
        p
    }

    pub fn q_pow(e: Rat) -> Self {
        Self::monomial(Rational::one(), e)
    }

    pub fn from_terms<I: IntoIterator<Item = (Rat, Rational)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in it {
            p.add_term(e, c);
        }
        p
    }

    /// Re-declares the grid; fails if an exponent is off the new grid.
    pub fn with_grid(mut self, grid: i64) -> Result<Self> {
        if grid <= 0 {
            return invalid("grid must be positive");
        }
        for e in self.terms.keys() {
            if grid % e.denom() != 0 {
                return invalid(format!("exponent {} off the grid 1/{grid}", fmt_rat(e)));
            }
        }
        self.grid = grid;
        Ok(self)
    }

    pub fn grid(&self) -> i64 {
        self.grid
    }

    pub fn terms(&self) -> &BTreeMap<Rat, Rational> {
        &self.terms
    }

    pub fn coeff(&self, e: &Rat) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn highest(&self) -> Option<(&Rat, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn lowest(&self) -> Option<(&Rat, &Rational)> {
        self.terms.iter().next()
    }

    pub fn add_term(&mut self, e: Rat, c: Rational) {
        if c.is_zero() {
            return;
        }
        self.grid = grid_for(&e, self.grid);
        let slot = self.terms.entry(e).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self { terms: BTreeMap::new(), grid: self.grid };
        }
        Self { terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(), grid: self.grid }
    }

    /// Multiplies by `q^s`.
    pub fn shift(&self, s: Rat) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, v)| (*e + s, v.clone())).collect(),
            grid: grid_for(&s, self.grid),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Substitutes `q -> q^{-1}`.
    pub fn invert_q(&self) -> Self {
        Self { terms: self.terms.iter().map(|(e, v)| (-*e, v.clone())).collect(), grid: self.grid }
    }

    pub fn is_palindromic(&self) -> bool {
        self.invert_q() == *self
    }

    /// Value at `q = 1`.
    pub fn at_one(&self) -> Rational {
        self.terms.values().fold(Rational::zero(), |a, c| a + c)
    }

    /// Float evaluation for any `q > 0`.
    pub fn eval_f64(&self, q: f64) -> f64 {
        let lq = q.ln();
        self.terms
            .iter()
            .map(|(e, c)| to_f64(c) * (lq * (*e.numer() as f64) / (*e.denom() as f64)).exp())
            .sum()
    }

    /// Exact value in `Q(q^{1/m})` written in a canonical radical basis.
    pub fn eval_radical(&self, q: &Rational) -> Result<RadicalValue> {
        check_q(q)?;
        let l = self.terms.keys().fold(1i64, |a, e| lcm_i64(a, *e.denom()));
        // largest divisor d of l with q^{1/d} rational
        let mut d = 1i64;
        let mut base = q.clone();
        for cand in (1..=l).rev() {
            if l % cand == 0 {
                if let Some(r) = exact_root(q, cand as u32) {
                    d = cand;
                    base = r;
                    break;
                }
            }
        }
        let m = l / d;
        let mut coeffs = vec![Rational::zero(); m as usize];
        for (e, c) in &self.terms {
            // q^e = base^{e*d}; e*d = s + k/m
            let a = (*e * Rat::from(l)).to_integer(); // exponent in units of 1/l
            let s = a.div_euclid(m);
            let k = a.rem_euclid(m);
            coeffs[k as usize] += c * rpow(&base, s);
        }
        Ok(RadicalValue { base, index: m as u32, coeffs })
    }

    /// Exact test for `p(q) = 0` at a rational `q`.
    pub fn vanishes_at(&self, q: &Rational) -> Result<bool> {
        Ok(self.eval_radical(q)?.is_zero())
    }

    /// Parses a single monomial such as `q^{-1/2}`, `3/2*q^{2}`, `-q` or `5/2`.
    pub fn parse_monomial(s: &str) -> Result<Self> {
        let s = s.trim();
        let (coef, qpart) = match s.find('q') {
            None => return Ok(Self::constant(parse_rational(s)?)),
            Some(i) => (s[..i].trim().trim_end_matches('*').trim(), &s[i..]),
        };
        let c = match coef {
            "" | "+" => Rational::one(),
            "-" => -Rational::one(),
            other => parse_rational(other)?,
        };
        let e = if qpart == "q" {
            Rat::one()
        } else if let Some(rest) = qpart.strip_prefix("q^") {
            parse_rat(rest.trim_start_matches('{').trim_end_matches('}'))?
        } else {
            return invalid(format!("bad monomial '{s}'"));
        };
        Ok(Self::monomial(c, e))
    }
}

fn check_q(q: &Rational) -> Result<()> {
    if !q.is_positive() || *q >= Rational::one() {
        return invalid("q must satisfy 0 < q < 1");
    }
    Ok(())
}

/// `sum_k c_k base^{k/index}` with `x^index - base` irreducible over Q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadicalValue {
    pub base: Rational,
    pub index: u32,
    pub coeffs: Vec<Rational>,
}

impl RadicalValue {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn as_rational(&self) -> Option<Rational> {
        if self.coeffs.iter().skip(1).all(|c| c.is_zero()) {
            Some(self.coeffs.first().cloned().unwrap_or_else(Rational::zero))
        } else {
            None
        }
    }

    pub fn to_f64(&self) -> f64 {
        let b = to_f64(&self.base);
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| to_f64(c) * b.powf(k as f64 / self.index as f64))
            .sum()
    }
}

/// Value of a Laurent polynomial: exact rational or a binary64 fallback.
#[derive(Clone, Debug, PartialEq)]
pub enum Evaluated {
    Exact(Rational),
    Approx(f64),
}

impl Evaluated {
    pub fn to_f64(&self) -> f64 {
        match self {
            Evaluated::Exact(r) => to_f64(r),
            Evaluated::Approx(x) => *x,
        }
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            Evaluated::Exact(r) => Some(r),
            Evaluated::Approx(_) => None,
        }
    }
}

impl fmt::Display for Evaluated {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Evaluated::Exact(r) => write!(f, "{}", fmt_rational(r)),
            Evaluated::Approx(x) => write!(f, "{}", super::fmt_real(*x)),
        }
    }
}

/// Evaluates at `0 < q < 1`; exact whenever the needed root of `q` is rational.
pub fn laurent_eval(p: &LaurentPoly, q: &Rational) -> Result<Evaluated> {
    let v = p.eval_radical(q)?;
    Ok(match v.as_rational() {
        Some(r) if v.index == 1 || v.coeffs.iter().skip(1).all(|c| c.is_zero()) => Evaluated::Exact(r),
        _ => Evaluated::Approx(v.to_f64()),
    })
}

/// Exact quotient in the Laurent ring, working from the highest exponent down.
pub fn laurent_div(num: &LaurentPoly, den: &LaurentPoly) -> Result<LaurentPoly> {
    let (dh, dc) = match den.highest() {
        Some((e, c)) => (*e, c.clone()),
        None => return invalid("division by the zero polynomial"),
    };
    let dl = *den.lowest().unwrap().0;
    let mut rem = num.clone();
    let mut quo = LaurentPoly::zero();
    quo.grid = lcm_i64(num.grid, den.grid);
    let floor = match num.lowest() {
        Some((e, _)) => *e - dl,
        None => return Ok(quo),
    };
    while let Some((e, c)) = rem.highest().map(|(e, c)| (*e, c.clone())) {
        let t = e - dh;
        if t < floor {
            return Err(Error::InexactDivision(format!("{}*q^{{{}}}", fmt_rational(&c), fmt_rat(&e))));
        }
        let k = &c / &dc;
        quo.add_term(t, k.clone());
        rem = &rem - &den.shift(t).scale(&k);
    }
    Ok(quo)
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, o: &LaurentPoly) -> LaurentPoly {
        let mut r = self.clone();
        r.grid = lcm_i64(r.grid, o.grid);
        for (e, c) in &o.terms {
            r.add_term(*e, c.clone());
        }
        r
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, o: &LaurentPoly) -> LaurentPoly {
        let mut r = self.clone();
        r.grid = lcm_i64(r.grid, o.grid);
        for (e, c) in &o.terms {
            r.add_term(*e, -c.clone());
        }
        r
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, o: &LaurentPoly) -> LaurentPoly {
        let mut r = LaurentPoly::zero();
        r.grid = lcm_i64(self.grid, o.grid);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                r.add_term(*e1 + *e2, c1 * c2);
            }
        }
        r
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(&-Rational::one())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, o: LaurentPoly) -> LaurentPoly {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Renders an exponent as `q^{a/b}`.
pub fn fmt_qexp(e: &Rat) -> String {
    format!("q^{{{}}}", fmt_rat(e))
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter() {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            if e.is_zero() {
                write!(f, "{}", fmt_rational(&a))?;
            } else if a.is_one() {
                write!(f, "{}", fmt_qexp(e))?;
            } else {
                write!(f, "{}*{}", fmt_rational(&a), fmt_qexp(e))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rational;

    fn qq(e: i64) -> LaurentPoly {
        LaurentPoly::q_pow(Rat::from(e))
    }

    #[test]
    fn eval_examples() {
        let p = &qq(-1) + &qq(1);
        assert_eq!(laurent_eval(&p, &rational(1, 2)).unwrap(), Evaluated::Exact(rational(5, 2)));
        assert_eq!(laurent_eval(&LaurentPoly::one(), &rational(1, 3)).unwrap(), Evaluated::Exact(rational(1, 1)));
        let h = LaurentPoly::q_pow(Rat::new(1, 2));
        assert_eq!(laurent_eval(&h, &rational(1, 4)).unwrap(), Evaluated::Exact(rational(1, 2)));
        match laurent_eval(&h, &rational(1, 2)).unwrap() {
            Evaluated::Approx(x) => assert!((x - 0.5f64.sqrt()).abs() < 1e-15),
            other => panic!("expected float path, got {other:?}"),
        }
    }

    #[test]
    fn eval_rejects_bad_q() {
        assert!(laurent_eval(&LaurentPoly::one(), &rational(1, 1)).is_err());
        assert!(laurent_eval(&LaurentPoly::one(), &rational(0, 1)).is_err());
    }

    #[test]
    fn div_examples() {
        let num = &qq(-2) - &qq(2);
        let den = &qq(-1) - &qq(1);
        assert_eq!(laurent_div(&num, &den).unwrap(), &qq(-1) + &qq(1));
        let num = &qq(-4) - &qq(4);
        let den = &qq(-2) - &qq(2);
        assert_eq!(laurent_div(&num, &den).unwrap(), &qq(-2) + &qq(2));
        assert_eq!(laurent_div(&num, &num).unwrap(), LaurentPoly::one());
    }

    #[test]
    fn div_reports_remainder() {
        let num = &qq(2) + &LaurentPoly::one();
        let den = &qq(1) + &LaurentPoly::one();
        assert!(matches!(laurent_div(&num, &den), Err(Error::InexactDivision(_))));
    }

    #[test]
    fn radical_canonical_form() {
        // q^{1/2} + q^{3/2} at q = 1/2 is (1 + 1/2) * 2^{-1/2}
        let p = &LaurentPoly::q_pow(Rat::new(1, 2)) + &LaurentPoly::q_pow(Rat::new(3, 2));
        let v = p.eval_radical(&rational(1, 2)).unwrap();
        assert_eq!(v.index, 2);
        assert_eq!(v.coeffs, vec![rational(0, 1), rational(3, 2)]);
        // q^{1/2} - 2 q^{3/2} vanishes at q = 1/2
        let z = &LaurentPoly::q_pow(Rat::new(1, 2)) - &LaurentPoly::monomial(rational(2, 1), Rat::new(3, 2));
        assert!(z.vanishes_at(&rational(1, 2)).unwrap());
    }

    #[test]
    fn parse_and_display() {
        let p = LaurentPoly::parse_monomial("3/2*q^{-1/2}").unwrap();
        assert_eq!(p, LaurentPoly::monomial(rational(3, 2), Rat::new(-1, 2)));
        assert_eq!(LaurentPoly::parse_monomial("-q").unwrap(), -&qq(1));
        assert_eq!(format!("{}", &qq(-1) - &qq(1)), "q^{-1} - q^{1}");
    }

    #[test]
    fn grid_is_raised_and_validated() {
        let p = LaurentPoly::q_pow(Rat::new(1, 3));
        assert_eq!(p.grid() % 3, 0);
        assert!(p.clone().with_grid(4).is_err());
        assert!(LaurentPoly::q_pow(Rat::new(1, 2)).with_grid(4).is_ok());
    }
}
