use super::{RootSystem, Weight};
use crate::error::{invalid, Error, Result};
use crate::exactmath::Rat;
use num_traits::{Signed, Zero};
use std::collections::HashSet;
use std::fmt;
use std::hash::{Hash, Hasher};

/// Maximum group size materialised by enumeration.
pub const WEYL_GUARD: usize = 100_000;

/// Weyl group element: a word in simple reflections and its integer action on the
/// fundamental-weight basis. The word `[r_1, ..., r_k]` denotes `s_{r_1} ... s_{r_k}`.
#[derive(Clone, Debug)]
pub struct WeylElement {
    pub word: Vec<usize>,
    /// Row-major `n x n` matrix acting on coordinate columns.
    pub matrix: Vec<i64>,
    pub rank: usize,
}

impl PartialEq for WeylElement {
    fn eq(&self, o: &Self) -> bool {
        self.matrix == o.matrix
    }
}
impl Eq for WeylElement {}
impl Hash for WeylElement {
    fn hash<H: Hasher>(&self, h: &mut H) {
        self.matrix.hash(h)
    }
}

fn matmul(a: &[i64], b: &[i64], n: usize) -> Vec<i64> {
    let mut c = vec![0i64; n * n];
    for i in 0..n {
        for k in 0..n {
            let x = a[i * n + k];
            if x != 0 {
                for j in 0..n {
                    c[i * n + j] += x * b[k * n + j];
                }
            }
        }
    }
    c
}

impl WeylElement {
    pub fn identity(n: usize) -> Self {
        let mut m = vec![0i64; n * n];
        for i in 0..n {
            m[i * n + i] = 1;
        }
        Self { word: vec![], matrix: m, rank: n }
    }

    /// `s_r(lambda) = lambda - lambda_r alpha_r`.
    pub fn simple(rs: &RootSystem, r: usize) -> Self {
        let n = rs.rank;
        let mut m = Self::identity(n).matrix;
        for i in 0..n {
            m[i * n + r] -= rs.cartan[i][r];
        }
        Self { word: vec![r], matrix: m, rank: n }
    }

    pub fn from_word(rs: &RootSystem, word: &[usize]) -> Result<Self> {
        let mut w = Self::identity(rs.rank);
        for &r in word {
            if r >= rs.rank {
                return invalid(format!("reflection index {} out of range", r + 1));
            }
            w = w.mul(&Self::simple(rs, r));
        }
        Ok(w)
    }

    /// Group product `self * o`.
    pub fn mul(&self, o: &Self) -> Self {
        let mut word = self.word.clone();
        word.extend_from_slice(&o.word);
        Self { word, matrix: matmul(&self.matrix, &o.matrix, self.rank), rank: self.rank }
    }

    pub fn inverse(&self, rs: &RootSystem) -> Self {
        let mut word = self.word.clone();
        word.reverse();
        Self::from_word(rs, &word).expect("word indices are valid")
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.rank)
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn act(&self, w: &Weight) -> Result<Weight> {
        if w.rank() != self.rank {
            return invalid(format!("rank mismatch: element {} vs weight {}", self.rank, w.rank()));
        }
        Ok(self.apply(w))
    }

    pub(crate) fn apply(&self, w: &Weight) -> Weight {
        let n = self.rank;
        Weight(
            (0..n)
                .map(|i| {
                    let mut s = Rat::zero();
                    for j in 0..n {
                        let m = self.matrix[i * n + j];
                        if m != 0 {
                            s += w.0[j] * Rat::from(m);
                        }
                    }
                    s
                })
                .collect(),
        )
    }

    /// Reduced word by greedy right descents.
    pub fn reduced(&self, rs: &RootSystem) -> Self {
        let mut cur = self.clone();
        let mut rev = Vec::new();
        while !cur.is_identity() {
            let r = (0..rs.rank)
                .find(|&r| {
                    let img = cur.apply(&rs.simple_root(r));
                    rs.to_alpha(&img).iter().all(|c| !c.is_positive())
                })
                .expect("a non-identity element has a right descent");
            rev.push(r);
            cur = cur.mul(&Self::simple(rs, r));
        }
        rev.reverse();
        Self { word: rev, matrix: self.matrix.clone(), rank: self.rank }
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return write!(f, "e");
        }
        for r in &self.word {
            write!(f, "s{}", r + 1)?;
        }
        Ok(())
    }
}

/// Subgroup generated by `gens`, by BFS on left multiplication. Each element is paired
/// with its length in the given generators.
pub fn enumerate_group(rs: &RootSystem, gens: &[WeylElement], guard: usize) -> Result<Vec<(WeylElement, usize)>> {
    let id = WeylElement::identity(rs.rank);
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    seen.insert(id.matrix.clone());
    let mut out = vec![(id, 0usize)];
    let mut frontier = 0;
    while frontier < out.len() {
        let (w, len) = out[frontier].clone();
        frontier += 1;
        for g in gens {
            let x = g.mul(&w);
            if seen.insert(x.matrix.clone()) {
                if out.len() >= guard {
                    return Err(Error::Guard(format!("group exceeds {guard} elements")));
                }
                out.push((x, len + 1));
            }
        }
    }
    Ok(out)
}

/// All of `W`, each element once, with a shortest word.
pub fn weyl_enumerate(rs: &RootSystem) -> Result<Vec<WeylElement>> {
    let order = rs.weyl_order();
    if order > WEYL_GUARD as u128 {
        return Err(Error::Guard(format!("|W| = {order} exceeds {WEYL_GUARD}")));
    }
    let gens: Vec<WeylElement> = (0..rs.rank).map(|r| WeylElement::simple(rs, r)).collect();
    Ok(enumerate_group(rs, &gens, WEYL_GUARD)?.into_iter().map(|(w, _)| w).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        for (l, k) in [("A2", 6), ("A1xA1", 4), ("B2", 8), ("G2", 12)] {
            let rs = RootSystem::from_label(l).unwrap();
            assert_eq!(weyl_enumerate(&rs).unwrap().len(), k);
        }
    }

    #[test]
    fn simple_reflection_rule() {
        let rs = RootSystem::from_label("A2").unwrap();
        let s1 = WeylElement::simple(&rs, 0);
        let img = s1.act(&rs.fundamental(0)).unwrap();
        assert_eq!(img, rs.fundamental(0).sub(&rs.simple_root(0)));
    }

    #[test]
    fn longest_element_a2() {
        let rs = RootSystem::from_label("A2").unwrap();
        let w0 = weyl_enumerate(&rs).unwrap().into_iter().max_by_key(|w| w.length()).unwrap();
        assert_eq!(w0.length(), 3);
        assert_eq!(w0.act(&rs.fundamental(0)).unwrap(), rs.fundamental(1).neg());
    }

    #[test]
    fn rank_mismatch() {
        let rs = RootSystem::from_label("A2").unwrap();
        assert!(WeylElement::identity(2).act(&Weight::zero(3)).is_err());
        let _ = rs;
    }

    #[test]
    fn guard_trips() {
        let rs = RootSystem::from_label("E7").unwrap();
        assert!(matches!(weyl_enumerate(&rs), Err(Error::Guard(_))));
    }

    #[test]
    fn reduced_word_of_product() {
        let rs = RootSystem::from_label("A2").unwrap();
        let w = WeylElement::from_word(&rs, &[1, 0, 0, 0]).unwrap().reduced(&rs);
        assert_eq!(w.to_string(), "s2s1");
    }
}
