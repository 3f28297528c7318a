//! Cartan data, weights, Weyl groups, diagram involutions and folding.

mod fold;
mod weyl;

pub use fold::{fold, recognize_cartan, FoldedSystem};
pub use weyl::{enumerate_group, weyl_enumerate, WeylElement, WEYL_GUARD};

use crate::error::{invalid, Result};
use crate::exactmath::{fmt_rat, Rat};
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeSet, HashSet};
use std::fmt;

/// Weight in the fundamental-weight basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight(pub Vec<Rat>);

impl Weight {
    pub fn zero(rank: usize) -> Self {
        Weight(vec![Rat::zero(); rank])
    }

    pub fn from_ints(v: &[i64]) -> Self {
        Weight(v.iter().map(|&x| Rat::from(x)).collect())
    }

    pub fn unit(rank: usize, r: usize) -> Self {
        let mut w = Self::zero(rank);
        w.0[r] = Rat::one();
        w
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rat] {
        &self.0
    }

    pub fn add(&self, o: &Self) -> Self {
        Weight(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        Weight(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Self {
        Weight(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, c: Rat) -> Self {
        Weight(self.0.iter().map(|a| a * c).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|a| a.is_zero())
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|a| a.is_integer())
    }

    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|a| !a.is_negative())
    }

    pub fn permute(&self, perm: &[usize]) -> Self {
        let mut out = Self::zero(self.rank());
        for (r, &t) in perm.iter().enumerate() {
            out.0[t] = self.0[r];
        }
        out
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(fmt_rat).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Finite root system with cached form data.
#[derive(Clone, Debug)]
pub struct RootSystem {
    pub label: String,
    pub rank: usize,
    /// `cartan[r][s] = (alpha_r^vee, alpha_s)`.
    pub cartan: Vec<Vec<i64>>,
    /// `d_r = (alpha_r, alpha_r)/2`, short roots normalised to 1 per component.
    pub d: Vec<Rat>,
    /// `(varpi_r, varpi_s)`.
    pub gram: Vec<Vec<Rat>>,
    pub cartan_inv: Vec<Vec<Rat>>,
    /// Positive roots in the simple-root basis, sorted by height.
    pub pos_roots_alpha: Vec<Vec<i64>>,
    /// The same roots in the fundamental-weight basis.
    pub pos_roots: Vec<Weight>,
    pub rho: Weight,
    pub components: Vec<Vec<usize>>,
}

fn chain(n: usize) -> Vec<Vec<i64>> {
    let mut a = vec![vec![0i64; n]; n];
    for i in 0..n {
        a[i][i] = 2;
        if i + 1 < n {
            a[i][i + 1] = -1;
            a[i + 1][i] = -1;
        }
    }
    a
}

fn simple_cartan(kind: char, n: usize) -> Result<Vec<Vec<i64>>> {
    let bad = || invalid(format!("unknown type {kind}{n}"));
    match kind {
        'A' if n >= 1 => Ok(chain(n)),
        'B' if n >= 2 => {
            let mut a = chain(n);
            a[n - 1][n - 2] = -2;
            Ok(a)
        }
        'C' if n >= 2 => {
            let mut a = chain(n);
            a[n - 2][n - 1] = -2;
            Ok(a)
        }
        'D' if n >= 3 => {
            let mut a = chain(n - 1);
            a.iter_mut().for_each(|row| row.push(0));
            a.push(vec![0; n]);
            a[n - 1][n - 1] = 2;
            a[n - 3][n - 1] = -1;
            a[n - 1][n - 3] = -1;
            Ok(a)
        }
        'E' if (6..=8).contains(&n) => {
            let mut a = chain(n - 1);
            a.iter_mut().for_each(|row| row.push(0));
            a.push(vec![0; n]);
            a[n - 1][n - 1] = 2;
            a[2][n - 1] = -1;
            a[n - 1][2] = -1;
            Ok(a)
        }
        'F' if n == 4 => {
            let mut a = chain(4);
            a[2][1] = -2;
            Ok(a)
        }
        'G' if n == 2 => Ok(vec![vec![2, -3], vec![-1, 2]]),
        _ => bad(),
    }
}

/// Cartan matrix for a label such as `"A3"`, `"G2"` or `"A1xB2"`.
pub fn cartan_from_label(label: &str) -> Result<Vec<Vec<i64>>> {
    let mut blocks = Vec::new();
    for part in label.split(['x', 'X']) {
        let part = part.trim();
        let mut chars = part.chars();
        let kind = chars.next().map(|c| c.to_ascii_uppercase());
        let n: usize = chars.as_str().parse().or_else(|_| invalid(format!("bad type label '{part}'")))?;
        match kind {
            Some(k) => blocks.push(simple_cartan(k, n)?),
            None => return invalid("empty type label"),
        }
    }
    let total: usize = blocks.iter().map(|b| b.len()).sum();
    let mut a = vec![vec![0i64; total]; total];
    let mut off = 0;
    for b in blocks {
        for (i, row) in b.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                a[off + i][off + j] = *v;
            }
        }
        off += b.len();
    }
    Ok(a)
}

/// Inverse of a square rational matrix, `None` when singular.
pub fn rat_inverse(m: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rat>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let p = a[col][col];
        a[col].iter_mut().for_each(|x| *x /= p);
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col];
                let pivot_row = a[col].clone();
                a[r].iter_mut().zip(pivot_row).for_each(|(x, y)| *x -= f * y);
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

fn rat_det(m: &[Vec<Rat>]) -> Rat {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = Rat::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rat::zero();
        };
        if piv != col {
            a.swap(col, piv);
            det = -det;
        }
        let p = a[col][col];
        det *= p;
        for r in col + 1..n {
            let f = a[r][col] / p;
            if !f.is_zero() {
                let pivot_row = a[col].clone();
                a[r].iter_mut().zip(pivot_row).for_each(|(x, y)| *x -= f * y);
            }
        }
    }
    det
}

fn components_of(a: &[Vec<i64>]) -> Vec<Vec<usize>> {
    let n = a.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut comp = vec![s];
        seen[s] = true;
        let mut i = 0;
        while i < comp.len() {
            let r = comp[i];
            for t in 0..n {
                if !seen[t] && a[r][t] != 0 {
                    seen[t] = true;
                    comp.push(t);
                }
            }
            i += 1;
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

impl RootSystem {
    /// Builds from a type label.
    pub fn from_label(label: &str) -> Result<Self> {
        let a = cartan_from_label(label)?;
        let mut rs = Self::from_cartan(a)?;
        rs.label = label.split(['x', 'X']).map(|p| p.trim().to_ascii_uppercase()).collect::<Vec<_>>().join("x");
        Ok(rs)
    }

    /// Builds from an explicit finite-type Cartan matrix.
    pub fn from_cartan(a: Vec<Vec<i64>>) -> Result<Self> {
        let n = a.len();
        if n == 0 || a.iter().any(|r| r.len() != n) {
            return invalid("Cartan matrix must be square and non-empty");
        }
        for r in 0..n {
            if a[r][r] != 2 {
                return invalid(format!("diagonal entry a_{r}{r} must be 2"));
            }
            for s in 0..n {
                if r != s && (a[r][s] > 0 || (a[r][s] == 0) != (a[s][r] == 0)) {
                    return invalid(format!("invalid off-diagonal entries at ({r},{s})"));
                }
            }
        }
        let components = components_of(&a);
        let mut d = vec![Rat::zero(); n];
        for comp in &components {
            d[comp[0]] = Rat::one();
            let mut stack = vec![comp[0]];
            while let Some(r) = stack.pop() {
                for &s in comp {
                    if a[r][s] != 0 && r != s {
                        let ds = d[r] * Rat::from(a[r][s]) / Rat::from(a[s][r]);
                        if d[s].is_zero() {
                            d[s] = ds;
                            stack.push(s);
                        } else if d[s] != ds {
                            return invalid("Cartan matrix is not symmetrizable");
                        }
                    }
                }
            }
            let min = comp.iter().map(|&r| d[r]).min().unwrap();
            for &r in comp {
                d[r] /= min;
            }
        }
        let sym: Vec<Vec<Rat>> = (0..n).map(|r| (0..n).map(|s| d[r] * Rat::from(a[r][s])).collect()).collect();
        for k in 1..=n {
            let minor: Vec<Vec<Rat>> = sym[..k].iter().map(|row| row[..k].to_vec()).collect();
            if !rat_det(&minor).is_positive() {
                return invalid("Cartan matrix is not of finite type");
            }
        }
        let ar: Vec<Vec<Rat>> = a.iter().map(|row| row.iter().map(|&x| Rat::from(x)).collect()).collect();
        let cartan_inv = rat_inverse(&ar).expect("finite type Cartan matrices are invertible");
        let gram: Vec<Vec<Rat>> = (0..n).map(|r| (0..n).map(|s| d[r] * cartan_inv[r][s]).collect()).collect();
        let pos_roots_alpha = positive_roots(&a)?;
        let pos_roots = pos_roots_alpha.iter().map(|c| alpha_to_weight(&a, c)).collect();
        let rho = Weight(vec![Rat::one(); n]);
        let label = recognize_cartan(&a).unwrap_or_else(|| "custom".to_string());
        Ok(Self { label, rank: n, cartan: a, d, gram, cartan_inv, pos_roots_alpha, pos_roots, rho, components })
    }

    /// `(lambda, mu)` for weights in the fundamental-weight basis.
    pub fn pairing(&self, x: &Weight, y: &Weight) -> Rat {
        let mut s = Rat::zero();
        for r in 0..self.rank {
            if x.0[r].is_zero() {
                continue;
            }
            for t in 0..self.rank {
                s += x.0[r] * self.gram[r][t] * y.0[t];
            }
        }
        s
    }

    /// `2(beta, x)/(beta, beta)`.
    pub fn coroot_pairing(&self, beta: &Weight, x: &Weight) -> Rat {
        Rat::from(2) * self.pairing(beta, x) / self.pairing(beta, beta)
    }

    /// Simple root `alpha_r` in the fundamental-weight basis (column `r` of the Cartan matrix).
    pub fn simple_root(&self, r: usize) -> Weight {
        Weight((0..self.rank).map(|t| Rat::from(self.cartan[t][r])).collect())
    }

    pub fn fundamental(&self, r: usize) -> Weight {
        Weight::unit(self.rank, r)
    }

    /// Coordinates in the simple-root basis.
    pub fn to_alpha(&self, w: &Weight) -> Vec<Rat> {
        (0..self.rank).map(|r| (0..self.rank).map(|t| self.cartan_inv[r][t] * w.0[t]).sum()).collect()
    }

    pub fn from_alpha(&self, c: &[Rat]) -> Weight {
        Weight((0..self.rank).map(|t| (0..self.rank).map(|r| Rat::from(self.cartan[t][r]) * c[r]).sum()).collect())
    }

    pub fn in_p(&self, w: &Weight) -> bool {
        w.is_integral()
    }

    pub fn in_q(&self, w: &Weight) -> bool {
        self.to_alpha(w).iter().all(|c| c.is_integer())
    }

    /// Nonzero element of `Q^+`.
    pub fn in_q_plus(&self, w: &Weight) -> bool {
        let c = self.to_alpha(w);
        c.iter().all(|x| x.is_integer() && !x.is_negative())
    }

    /// All roots (positive and negative) in the fundamental-weight basis.
    pub fn roots(&self) -> Vec<Weight> {
        let mut v = self.pos_roots.clone();
        v.extend(self.pos_roots.iter().map(|r| r.neg()));
        v
    }

    pub fn root_set(&self) -> HashSet<Weight> {
        self.roots().into_iter().collect()
    }

    pub fn is_root(&self, w: &Weight) -> bool {
        self.pos_roots.contains(w) || self.pos_roots.contains(&w.neg())
    }

    /// Highest root of the first component.
    pub fn highest_root(&self) -> Weight {
        self.pos_roots.last().cloned().unwrap()
    }

    /// Height in the simple-root basis.
    pub fn height(&self, w: &Weight) -> Rat {
        self.to_alpha(w).into_iter().sum()
    }

    /// Weyl group order from the exponents read off the root-height partition.
    pub fn weyl_order(&self) -> u128 {
        let mut order = 1u128;
        for comp in &self.components {
            let mut counts = std::collections::BTreeMap::<i64, i64>::new();
            for c in &self.pos_roots_alpha {
                if comp.iter().any(|&r| c[r] != 0) {
                    *counts.entry(c.iter().sum()).or_default() += 1;
                }
            }
            let maxh = counts.keys().copied().max().unwrap_or(0);
            for k in 1..=maxh {
                let here = counts.get(&k).copied().unwrap_or(0);
                let next = counts.get(&(k + 1)).copied().unwrap_or(0);
                for _ in 0..(here - next) {
                    order *= (k + 1) as u128;
                }
            }
        }
        order
    }

    /// Nodes adjacent to `r`.
    pub fn neighbours(&self, r: usize) -> Vec<usize> {
        (0..self.rank).filter(|&s| s != r && self.cartan[r][s] != 0).collect()
    }

    /// Connected components of the subdiagram on `nodes`.
    pub fn sub_components(&self, nodes: &BTreeSet<usize>) -> Vec<Vec<usize>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for &s in nodes {
            if seen.contains(&s) {
                continue;
            }
            let mut comp = vec![s];
            seen.insert(s);
            let mut i = 0;
            while i < comp.len() {
                let r = comp[i];
                for t in self.neighbours(r) {
                    if nodes.contains(&t) && seen.insert(t) {
                        comp.push(t);
                    }
                }
                i += 1;
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }
}

fn alpha_to_weight(a: &[Vec<i64>], c: &[i64]) -> Weight {
    let n = a.len();
    Weight((0..n).map(|t| Rat::from((0..n).map(|r| a[t][r] * c[r]).sum::<i64>())).collect())
}

fn positive_roots(a: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    let n = a.len();
    let mut set: HashSet<Vec<i64>> = HashSet::new();
    let mut all = Vec::new();
    let mut layer: Vec<Vec<i64>> = (0..n)
        .map(|r| {
            let mut v = vec![0; n];
            v[r] = 1;
            v
        })
        .collect();
    for v in &layer {
        set.insert(v.clone());
    }
    all.extend(layer.iter().cloned());
    while !layer.is_empty() {
        let mut next = Vec::new();
        for beta in &layer {
            for i in 0..n {
                let mut p = 0;
                loop {
                    let mut down = beta.clone();
                    down[i] -= p + 1;
                    if set.contains(&down) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                let pair: i64 = (0..n).map(|j| a[i][j] * beta[j]).sum();
                if p - pair > 0 {
                    let mut up = beta.clone();
                    up[i] += 1;
                    if set.insert(up.clone()) {
                        next.push(up);
                    }
                }
            }
        }
        if set.len() > 20_000 {
            return invalid("root generation did not terminate; matrix is not of finite type");
        }
        next.sort();
        all.extend(next.iter().cloned());
        layer = next;
    }
    Ok(all)
}

/// Diagram involution given as a 0-based permutation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Involution {
    pub perm: Vec<usize>,
}

impl Involution {
    pub fn identity(n: usize) -> Self {
        Self { perm: (0..n).collect() }
    }

    /// Validates `perm` as a diagram involution of `rs`.
    pub fn new(rs: &RootSystem, perm: Vec<usize>) -> Result<Self> {
        let n = rs.rank;
        if perm.len() != n || perm.iter().any(|&p| p >= n) {
            return invalid(format!("involution must permute {n} nodes"));
        }
        for r in 0..n {
            if perm[perm[r]] != r {
                return invalid("tau must square to the identity");
            }
            for s in 0..n {
                if rs.cartan[perm[r]][perm[s]] != rs.cartan[r][s] {
                    return invalid("tau is not a diagram automorphism");
                }
            }
        }
        Ok(Self { perm })
    }

    /// From a 1-based image list such as `[3,2,1]`.
    pub fn from_one_based(rs: &RootSystem, images: &[usize]) -> Result<Self> {
        if images.contains(&0) {
            return invalid("tau entries are 1-based");
        }
        Self::new(rs, images.iter().map(|i| i - 1).collect())
    }

    pub fn apply(&self, r: usize) -> usize {
        self.perm[r]
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }

    /// `I^tau`.
    pub fn fixed(&self) -> Vec<usize> {
        (0..self.perm.len()).filter(|&r| self.perm[r] == r).collect()
    }

    /// `I^*`: lowest index of each 2-cycle.
    pub fn i_star(&self) -> Vec<usize> {
        (0..self.perm.len()).filter(|&r| self.perm[r] > r).collect()
    }

    /// Orbits `{r, tau r}` ordered by their lowest element.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        (0..self.perm.len())
            .filter(|&r| self.perm[r] >= r)
            .map(|r| if self.perm[r] == r { vec![r] } else { vec![r, self.perm[r]] })
            .collect()
    }

    pub fn act_weight(&self, w: &Weight) -> Weight {
        w.permute(&self.perm)
    }
}
