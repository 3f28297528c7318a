//! Weight multiplicities, quantum dimensions and twining multiplicities.

use crate::error::{broken, invalid, Error, Result};
use crate::exactmath::{char_mul, CharElement, LaurentPoly, Rat, Rational};
use crate::rootsys::{FoldedSystem, RootSystem, Weight};
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::{BTreeMap, BTreeSet, HashMap};

/// Largest module dimension handled.
pub const DIM_GUARD: u128 = 1_000_000;

/// Weight multiplicities of an irreducible module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultTable {
    pub highest: Weight,
    pub mults: BTreeMap<Weight, u64>,
}

impl MultTable {
    pub fn get(&self, w: &Weight) -> u64 {
        self.mults.get(w).copied().unwrap_or(0)
    }

    pub fn dim(&self) -> u64 {
        self.mults.values().sum()
    }
}

/// Twining multiplicities on the tau-fixed weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwiningTable {
    pub highest: Weight,
    pub jvals: BTreeMap<Weight, i64>,
}

impl TwiningTable {
    pub fn get(&self, w: &Weight) -> i64 {
        self.jvals.get(w).copied().unwrap_or(0)
    }
}

/// Weyl dimension formula.
pub fn weyl_dimension(rs: &RootSystem, hw: &Weight) -> Rat {
    let lr = hw.add(&rs.rho);
    rs.pos_roots.iter().map(|a| rs.pairing(&lr, a) / rs.pairing(&rs.rho, a)).product()
}

/// Dominant representative of the W-orbit of `w`.
pub fn dominant_rep(rs: &RootSystem, w: &Weight) -> Weight {
    let mut v = w.clone();
    while let Some(r) = (0..rs.rank).find(|&r| v.0[r].is_negative()) {
        let c = v.0[r];
        v = v.sub(&rs.simple_root(r).scale(c));
    }
    v
}

/// W-orbit of a weight.
pub fn orbit(rs: &RootSystem, w: &Weight) -> Vec<Weight> {
    let mut seen = BTreeSet::from([w.clone()]);
    let mut out = vec![w.clone()];
    let mut i = 0;
    while i < out.len() {
        let v = out[i].clone();
        i += 1;
        for r in 0..rs.rank {
            let img = v.sub(&rs.simple_root(r).scale(v.0[r]));
            if seen.insert(img.clone()) {
                out.push(img);
            }
        }
    }
    out
}

fn check_dominant(rs: &RootSystem, hw: &Weight) -> Result<()> {
    if hw.rank() != rs.rank || !hw.is_integral() || !hw.is_dominant() {
        return invalid(format!("{hw} is not a dominant integral weight"));
    }
    let dim = weyl_dimension(rs, hw);
    if dim.to_integer() as u128 > DIM_GUARD {
        return Err(Error::Guard(format!("dim V = {} exceeds {DIM_GUARD}", dim)));
    }
    Ok(())
}

/// Dominant weights `mu <= hw`, found along chains that subtract positive roots.
fn dominant_weights_below(rs: &RootSystem, hw: &Weight) -> Vec<Weight> {
    let mut seen = BTreeSet::from([hw.clone()]);
    let mut out = vec![hw.clone()];
    let mut i = 0;
    while i < out.len() {
        let v = out[i].clone();
        i += 1;
        for a in &rs.pos_roots {
            let u = v.sub(a);
            if u.is_dominant() && seen.insert(u.clone()) {
                out.push(u);
            }
        }
    }
    out.sort_by_key(|a| rs.height(&hw.sub(a)));
    out
}

/// Freudenthal recursion.
pub fn weight_mults(rs: &RootSystem, hw: &Weight) -> Result<MultTable> {
    check_dominant(rs, hw)?;
    let doms = dominant_weights_below(rs, hw);
    let lr = hw.add(&rs.rho);
    let top = rs.pairing(&lr, &lr);
    let mut dm: HashMap<Weight, u64> = HashMap::new();
    for mu in &doms {
        if mu == hw {
            dm.insert(mu.clone(), 1);
            continue;
        }
        let mr = mu.add(&rs.rho);
        let denom = top - rs.pairing(&mr, &mr);
        let mut acc = Rat::zero();
        for a in &rs.pos_roots {
            let mut k = 1i64;
            loop {
                let nu = mu.add(&a.scale(Rat::from(k)));
                if !rs.in_q_plus(&hw.sub(&nu)) {
                    break;
                }
                let m = dm.get(&dominant_rep(rs, &nu)).copied().unwrap_or(0);
                acc += Rat::from(2 * m as i64) * rs.pairing(&nu, a);
                k += 1;
            }
        }
        let m = acc / denom;
        if !m.is_integer() || m.is_negative() {
            return Err(broken("freudenthal", format!("non-integral multiplicity at {mu}")));
        }
        dm.insert(mu.clone(), m.to_integer() as u64);
    }
    let mut mults = BTreeMap::new();
    for mu in &doms {
        let m = dm[mu];
        if m > 0 {
            for w in orbit(rs, mu) {
                mults.insert(w, m);
            }
        }
    }
    Ok(MultTable { highest: hw.clone(), mults })
}

/// `sum_omega mult(omega) q^{(2 rho, omega)}`.
pub fn q_dim(rs: &RootSystem, table: &MultTable) -> LaurentPoly {
    let two_rho = rs.rho.scale(Rat::from(2));
    LaurentPoly::from_terms(
        table.mults.iter().map(|(w, &m)| (rs.pairing(&two_rho, w), Rational::from_integer((m as i64).into()))),
    )
}

/// Character `sum mult(omega) e^omega`.
pub fn character(table: &MultTable) -> CharElement {
    let mut c = CharElement::zero(table.highest.rank());
    for (w, &m) in &table.mults {
        c.add_rational(w.clone(), Rational::from_integer((m as i64).into()));
    }
    c
}

/// `sum_w sgn(w) e^{w x}` over a list of elements with signs.
pub fn alternant(elems: &[(crate::rootsys::WeylElement, i64)], x: &Weight) -> CharElement {
    let mut c = CharElement::zero(x.rank());
    for (w, s) in elems {
        c.add_rational(w.apply(x), Rational::from_integer((*s).into()));
    }
    c
}

fn order_key(rs: &RootSystem, w: &Weight) -> (Rat, Weight) {
    (rs.pairing(&rs.rho, w), w.clone())
}

fn leading(rs: &RootSystem, c: &CharElement) -> Option<(Weight, LaurentPoly)> {
    c.terms().iter().max_by(|a, b| order_key(rs, a.0).cmp(&order_key(rs, b.0))).map(|(w, p)| (w.clone(), p.clone()))
}

/// Leading-term division in the group algebra, highest term first under
/// `((rho, omega), coordinates)`. Stops with an error once the quotient drops below `floor`.
pub fn char_div(rs: &RootSystem, num: &CharElement, den: &CharElement, floor: Rat) -> Result<CharElement> {
    let (dw, dc) = leading(rs, den).ok_or_else(|| Error::Validation("division by zero character".into()))?;
    let inv = match dc.terms().iter().next() {
        Some((e, c)) if dc.len() == 1 && e.is_zero() => c.recip(),
        _ => return invalid("leading coefficient of the divisor must be a constant"),
    };
    let mut rem = num.clone();
    let mut quo = CharElement::zero(num.rank());
    while let Some((w, c)) = leading(rs, &rem) {
        let t = w.sub(&dw);
        if rs.pairing(&rs.rho, &t) < floor {
            return Err(Error::InexactDivision(format!("remainder term at {w}")));
        }
        let k = c.scale(&inv);
        let mut mono = CharElement::zero(num.rank());
        mono.add_term(t.clone(), k.clone());
        quo.add_term(t, k);
        rem = rem.sub(&char_mul(&mono, den)?)?;
    }
    Ok(quo)
}

/// Twining multiplicities from the twining character quotient over `W^tau` with `hsgn`.
pub fn twining_mults(folded: &FoldedSystem, hw: &Weight) -> Result<TwiningTable> {
    let rs = &folded.base;
    if !folded.is_fixed(hw) {
        return invalid(format!("{hw} is not tau-fixed"));
    }
    let table = weight_mults(rs, hw)?;
    let wt = folded.weyl_tau()?;
    let num = alternant(&wt, &hw.add(&rs.rho));
    let den = alternant(&wt, &rs.rho);
    let floor = -rs.pairing(&rs.rho, hw) - Rat::one();
    let quo = char_div(rs, &num, &den, floor)?;
    let mut jvals = BTreeMap::new();
    for w in table.mults.keys().filter(|w| folded.is_fixed(w)) {
        jvals.insert(w.clone(), 0);
    }
    for (w, c) in quo.terms() {
        let v = c.at_one();
        if c.len() != 1 || !c.coeff(&Rat::zero()).eq(&v) || !v.is_integer() {
            return Err(broken("twining-division", "non-integral quotient coefficient"));
        }
        if !jvals.contains_key(w) {
            return Err(broken("twining-division", format!("quotient term at {w} outside the module")));
        }
        jvals.insert(w.clone(), v.to_integer().to_i64().unwrap());
    }
    Ok(TwiningTable { highest: hw.clone(), jvals })
}

/// Output of the classical construction of `V_hw` with its twining intertwiner.
#[derive(Clone, Debug)]
pub struct ClassicalModule {
    pub mults: MultTable,
    pub twining: TwiningTable,
}

type Vector = Vec<Rational>;

fn add_scaled(acc: &mut [Rational], v: &[Rational], c: &Rational) {
    if c.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        *a += x * c;
    }
}

/// Row reduction: returns indices of a maximal independent subset of `rows` and, for every
/// row, its coordinates in terms of that subset.
fn independent_rows(rows: &[Vector]) -> (Vec<usize>, Vec<Vector>) {
    let width = rows.first().map_or(0, |r| r.len());
    // echelon basis: (pivot column, reduced row, combination of original basis rows)
    let mut ech: Vec<(usize, Vector, Vector)> = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();
    let mut coords: Vec<Vector> = Vec::with_capacity(rows.len());
    for (idx, row) in rows.iter().enumerate() {
        let mut r = row.clone();
        let mut comb: Vector = vec![Rational::zero(); chosen.len() + 1];
        for (p, er, ec) in &ech {
            if !r[*p].is_zero() {
                let f = r[*p].clone();
                add_scaled(&mut r, er, &-f.clone());
                add_scaled(&mut comb[..ec.len()], ec, &f);
            }
        }
        match (0..width).find(|&j| !r[j].is_zero()) {
            Some(p) => {
                let inv = r[p].recip();
                let mut er: Vector = r.iter().map(|x| x * &inv).collect();
                er[p] = Rational::one();
                // row = comb . chosen + r, so r/r_p expresses er in chosen plus the new row
                let mut ec: Vector = comb[..chosen.len()].iter().map(|x| -x * &inv).collect();
                ec.push(inv.clone());
                ech.push((p, er, ec));
                chosen.push(idx);
                let mut c = vec![Rational::zero(); chosen.len()];
                c[chosen.len() - 1] = Rational::one();
                coords.push(c);
            }
            None => {
                comb.truncate(chosen.len());
                coords.push(comb);
            }
        }
    }
    let k = chosen.len();
    for c in coords.iter_mut() {
        c.resize(k, Rational::zero());
    }
    (chosen, coords)
}

/// Builds `V_hw` at `q = 1` from the Chevalley relations `[E_k, F_i] = delta_ki H_i`, choosing
/// bases among the vectors `F_i b`, and computes the trace of `J` with `J xi = xi` and
/// `J F_i = F_{tau i} J` on each tau-fixed weight space.
pub fn classical_twining(folded: &FoldedSystem, hw: &Weight) -> Result<ClassicalModule> {
    let rs = &folded.base;
    check_dominant(rs, hw)?;
    if !folded.is_fixed(hw) {
        return invalid(format!("{hw} is not tau-fixed"));
    }
    let n = rs.rank;
    let tau = &folded.tau;
    let alpha: Vec<Weight> = (0..n).map(|r| rs.simple_root(r)).collect();
    let mut dims: HashMap<Weight, usize> = HashMap::from([(hw.clone(), 1)]);
    // e_act[(mu,k)][b] = E_k b in V_{mu+alpha_k}; f_act[(mu,i)][b] = F_i b in V_{mu-alpha_i}
    let mut e_act: HashMap<(Weight, usize), Vec<Vector>> = HashMap::new();
    let mut f_act: HashMap<(Weight, usize), Vec<Vector>> = HashMap::new();
    // how each basis vector arose: (i, c) means F_i applied to basis vector c of mu+alpha_i
    let mut origin: HashMap<Weight, Vec<(usize, usize)>> = HashMap::from([(hw.clone(), vec![])]);
    for k in 0..n {
        e_act.insert((hw.clone(), k), vec![vec![]]);
    }
    let dim_of = |dims: &HashMap<Weight, usize>, w: &Weight| dims.get(w).copied().unwrap_or(0);
    let mut level = vec![hw.clone()];
    let mut order = vec![hw.clone()];
    while !level.is_empty() {
        let mut next: BTreeSet<Weight> = BTreeSet::new();
        for mu in &level {
            for a in &alpha {
                next.insert(mu.sub(a));
            }
        }
        let mut built = Vec::new();
        for mu in next {
            let mut cands: Vec<(usize, usize)> = Vec::new();
            for i in 0..n {
                for c in 0..dim_of(&dims, &mu.add(&alpha[i])) {
                    cands.push((i, c));
                }
            }
            if cands.is_empty() {
                continue;
            }
            let widths: Vec<usize> = (0..n).map(|k| dim_of(&dims, &mu.add(&alpha[k]))).collect();
            let mut phis: Vec<Vector> = Vec::with_capacity(cands.len());
            for &(i, c) in &cands {
                let nu = mu.add(&alpha[i]);
                let mut phi: Vector = Vec::new();
                for k in 0..n {
                    let mut part = vec![Rational::zero(); widths[k]];
                    if widths[k] > 0 {
                        let up = nu.add(&alpha[k]);
                        if dim_of(&dims, &up) > 0 {
                            let ek = &e_act[&(nu.clone(), k)][c];
                            let fi = &f_act[&(up.clone(), i)];
                            for (j, x) in ek.iter().enumerate() {
                                add_scaled(&mut part, &fi[j], x);
                            }
                        }
                        if k == i {
                            part[c] += Rational::from_integer(nu.0[i].to_integer().into());
                        }
                    }
                    phi.extend(part);
                }
                phis.push(phi);
            }
            let (chosen, coords) = independent_rows(&phis);
            if chosen.is_empty() {
                for i in 0..n {
                    let d = dim_of(&dims, &mu.add(&alpha[i]));
                    if d > 0 {
                        f_act.insert((mu.add(&alpha[i]), i), vec![vec![]; d]);
                    }
                }
                continue;
            }
            let d = chosen.len();
            dims.insert(mu.clone(), d);
            for i in 0..n {
                let dd = dim_of(&dims, &mu.add(&alpha[i]));
                if dd > 0 {
                    f_act.insert((mu.add(&alpha[i]), i), vec![vec![]; dd]);
                }
            }
            for (idx, &(i, c)) in cands.iter().enumerate() {
                f_act.get_mut(&(mu.add(&alpha[i]), i)).unwrap()[c] = coords[idx].clone();
            }
            for k in 0..n {
                let mut rows = Vec::with_capacity(d);
                let off: usize = (0..k).map(|j| widths[j]).sum();
                for &b in &chosen {
                    rows.push(phis[b][off..off + widths[k]].to_vec());
                }
                e_act.insert((mu.clone(), k), rows);
            }
            origin.insert(mu.clone(), chosen.iter().map(|&b| cands[b]).collect());
            built.push(mu.clone());
        }
        order.extend(built.iter().cloned());
        level = built;
    }
    // J on each weight space, V_mu -> V_{tau mu}
    let mut jmat: HashMap<Weight, Vec<Vector>> = HashMap::from([(hw.clone(), vec![vec![Rational::one()]])]);
    for mu in order.iter().skip(1) {
        let tmu = tau.act_weight(mu);
        let dt = dim_of(&dims, &tmu);
        let mut rows = Vec::new();
        for &(i, c) in &origin[mu] {
            let ti = tau.apply(i);
            let src = tau.act_weight(&mu.add(&alpha[i]));
            let jc = &jmat[&mu.add(&alpha[i])][c];
            let fi = &f_act[&(src, ti)];
            let mut v = vec![Rational::zero(); dt];
            for (j, x) in jc.iter().enumerate() {
                add_scaled(&mut v, &fi[j], x);
            }
            rows.push(v);
        }
        jmat.insert(mu.clone(), rows);
    }
    let mut mults = BTreeMap::new();
    let mut jvals = BTreeMap::new();
    for (w, &d) in &dims {
        if d > 0 {
            mults.insert(w.clone(), d as u64);
            if folded.is_fixed(w) {
                let m = &jmat[w];
                let tr: Rational = (0..d).map(|b| m[b][b].clone()).sum();
                if !tr.is_integer() {
                    return Err(broken("classical-twining", "non-integral trace"));
                }
                jvals.insert(w.clone(), tr.to_integer().to_i64().unwrap());
            }
        }
    }
    Ok(ClassicalModule {
        mults: MultTable { highest: hw.clone(), mults },
        twining: TwiningTable { highest: hw.clone(), jvals },
    })
}

/// Tau-fixed dominant weights with `(varpi, theta^vee) <= bound` for every highest root `theta`
/// of the components.
pub fn fixed_dominant_weights(folded: &FoldedSystem, bound: i64) -> Vec<Weight> {
    let rs = &folded.base;
    let thetas: Vec<Weight> = rs
        .components
        .iter()
        .map(|comp| rs.pos_roots.iter().rfind(|b| comp.iter().any(|&r| !rs.to_alpha(b)[r].is_zero())).unwrap().clone())
        .collect();
    let mut out = Vec::new();
    let classes = &folded.classes;
    let mut cur = vec![0i64; classes.len()];
    loop {
        let mut w = Weight::zero(rs.rank);
        for (c, &k) in classes.iter().zip(&cur) {
            for &s in c {
                w.0[s] = Rat::from(k);
            }
        }
        if thetas.iter().all(|t| rs.coroot_pairing(t, &w) <= Rat::from(bound)) {
            out.push(w);
        }
        let mut i = 0;
        loop {
            if i == cur.len() {
                return out;
            }
            cur[i] += 1;
            if cur[i] <= bound {
                break;
            }
            cur[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::{fold, Involution};

    fn folded(l: &str, tau: &[usize]) -> FoldedSystem {
        let rs = RootSystem::from_label(l).unwrap();
        let t = if tau.is_empty() { Involution::identity(rs.rank) } else { Involution::from_one_based(&rs, tau).unwrap() };
        fold(&rs, &t).unwrap()
    }

    #[test]
    fn mult_examples() {
        let rs = RootSystem::from_label("A1").unwrap();
        let t = weight_mults(&rs, &Weight::from_ints(&[1])).unwrap();
        assert_eq!(t.mults.len(), 2);
        let rs = RootSystem::from_label("A2").unwrap();
        let t = weight_mults(&rs, &Weight::from_ints(&[1, 1])).unwrap();
        assert_eq!(t.get(&Weight::zero(2)), 2);
        assert_eq!(t.dim(), 8);
        let t = weight_mults(&rs, &Weight::from_ints(&[1, 0])).unwrap();
        assert_eq!((t.mults.len(), t.dim()), (3, 3));
    }

    #[test]
    fn qdim_examples() {
        let rs = RootSystem::from_label("A1").unwrap();
        let t = weight_mults(&rs, &Weight::from_ints(&[1])).unwrap();
        assert_eq!(q_dim(&rs, &t), LaurentPoly::from_terms([(Rat::from(-1), Rational::one()), (Rat::from(1), Rational::one())]));
        let rs = RootSystem::from_label("A2").unwrap();
        let t = weight_mults(&rs, &Weight::from_ints(&[1, 0])).unwrap();
        let expect = LaurentPoly::from_terms([(Rat::from(-2), Rational::one()), (Rat::zero(), Rational::one()), (Rat::from(2), Rational::one())]);
        assert_eq!(q_dim(&rs, &t), expect);
        let t = weight_mults(&rs, &Weight::zero(2)).unwrap();
        assert_eq!(q_dim(&rs, &t), LaurentPoly::one());
    }

    #[test]
    fn rejects_non_dominant() {
        let rs = RootSystem::from_label("A2").unwrap();
        assert!(weight_mults(&rs, &Weight::from_ints(&[-1, 0])).is_err());
    }

    #[test]
    fn twining_a2_adjoint() {
        let f = folded("A2", &[2, 1]);
        let hw = Weight::from_ints(&[1, 1]);
        let t = twining_mults(&f, &hw).unwrap();
        assert_eq!(t.get(&hw), 1);
        assert_eq!(t.get(&hw.neg()), 1);
        assert_eq!(t.get(&Weight::zero(2)), 0);
        let c = classical_twining(&f, &hw).unwrap();
        assert_eq!(c.twining, t);
    }

    #[test]
    fn twining_a1xa1_flip() {
        let f = folded("A1xA1", &[2, 1]);
        let hw = Weight::from_ints(&[1, 1]);
        let t = twining_mults(&f, &hw).unwrap();
        assert_eq!(t.jvals.len(), 2);
        assert!(t.jvals.values().all(|&j| j == 1));
    }

    #[test]
    fn twining_identity_is_multiplicity() {
        let f = folded("B2", &[]);
        let hw = Weight::from_ints(&[1, 1]);
        let t = twining_mults(&f, &hw).unwrap();
        let m = weight_mults(&f.base, &hw).unwrap();
        for (w, &j) in &t.jvals {
            assert_eq!(j as u64, m.get(w));
        }
    }
}
