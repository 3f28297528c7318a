use super::weyl::{enumerate_group, WeylElement, WEYL_GUARD};
use super::{components_of, Involution, RootSystem, Weight};
use crate::error::{invalid, Result};
use crate::exactmath::Rat;
use num_traits::Zero;
use std::collections::BTreeSet;

/// Root system on `V^tau` obtained by averaging over a diagram involution.
#[derive(Clone, Debug)]
pub struct FoldedSystem {
    pub base: RootSystem,
    pub tau: Involution,
    /// Classes `{r, tau r}` ordered by lowest element.
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
    /// `(alpha_r^vee, alpha_{tau r})` per node.
    pub tau_pairing: Vec<i64>,
    pub cartan: Vec<Vec<i64>>,
    pub label: String,
    pub non_reduced: bool,
    /// `varpi_rhat` in the base fundamental-weight basis.
    pub varpi_hat: Vec<Weight>,
    /// `alpha_rhat = (alpha_r)_+` in the base fundamental-weight basis.
    pub alpha_hat: Vec<Weight>,
    /// Lifted generators `s_r`, `s_r s_{tau r}` or `s_r s_{tau r} s_r`.
    pub generators: Vec<WeylElement>,
    /// Positive folded roots in the base fundamental-weight basis.
    pub pos_roots: Vec<Weight>,
    /// The same roots in the folded simple-root basis.
    pub pos_roots_hat: Vec<Vec<i64>>,
}

fn recognize_component(a: &[Vec<i64>], comp: &[usize]) -> Option<String> {
    let k = comp.len();
    if k == 1 {
        return Some("A1".into());
    }
    let mut edges = Vec::new();
    for (x, &i) in comp.iter().enumerate() {
        for &j in &comp[x + 1..] {
            if a[i][j] != 0 {
                edges.push((i, j, a[i][j] * a[j][i]));
            }
        }
    }
    if edges.len() != k - 1 {
        return None;
    }
    if edges.iter().any(|e| e.2 == 3) {
        return (k == 2).then(|| "G2".into());
    }
    let degree = |v: usize| edges.iter().filter(|e| e.0 == v || e.1 == v).count();
    let doubles: Vec<_> = edges.iter().filter(|e| e.2 == 2).collect();
    let short = |v: usize, u: usize| a[v][u] == -2;
    if doubles.len() > 1 {
        return None;
    }
    if let Some(&&(i, j, _)) = doubles.first() {
        if comp.iter().any(|&v| degree(v) > 2) {
            return None;
        }
        if k == 2 {
            return Some(if short(i, j) { "C2" } else { "B2" }.into());
        }
        let (end, inner) = if degree(i) == 1 {
            (i, j)
        } else if degree(j) == 1 {
            (j, i)
        } else {
            return (k == 4).then(|| "F4".into());
        };
        return Some(format!("{}{k}", if short(end, inner) { "B" } else { "C" }));
    }
    let branch: Vec<usize> = comp.iter().copied().filter(|&v| degree(v) > 2).collect();
    match branch.len() {
        0 => Some(format!("A{k}")),
        1 if degree(branch[0]) == 3 => {
            let b = branch[0];
            let mut arms = Vec::new();
            for e in edges.iter().filter(|e| e.0 == b || e.1 == b) {
                let mut prev = b;
                let mut cur = if e.0 == b { e.1 } else { e.0 };
                let mut len = 1;
                loop {
                    let nxt = edges
                        .iter()
                        .filter(|e| e.0 == cur || e.1 == cur)
                        .map(|e| if e.0 == cur { e.1 } else { e.0 })
                        .find(|&v| v != prev);
                    match nxt {
                        Some(v) => {
                            prev = cur;
                            cur = v;
                            len += 1;
                        }
                        None => break,
                    }
                }
                arms.push(len);
            }
            arms.sort_unstable();
            match arms.as_slice() {
                [1, 1, _] => Some(format!("D{k}")),
                [1, 2, 2] => Some("E6".into()),
                [1, 2, 3] => Some("E7".into()),
                [1, 2, 4] => Some("E8".into()),
                _ => None,
            }
        }
        _ => None,
    }
}

/// Type label of a finite-type Cartan matrix, components joined by `x`.
pub fn recognize_cartan(a: &[Vec<i64>]) -> Option<String> {
    let parts: Option<Vec<String>> = components_of(a).iter().map(|c| recognize_component(a, c)).collect();
    parts.map(|p| p.join("x"))
}

/// Folds `rs` along `tau`.
pub fn fold(rs: &RootSystem, tau: &Involution) -> Result<FoldedSystem> {
    let n = rs.rank;
    if tau.perm.len() != n {
        return invalid("involution rank mismatch");
    }
    let tau = Involution::new(rs, tau.perm.clone())?;
    let classes = tau.classes();
    let mut class_of = vec![0; n];
    for (i, c) in classes.iter().enumerate() {
        for &r in c {
            class_of[r] = i;
        }
    }
    let tau_pairing: Vec<i64> = (0..n).map(|r| rs.cartan[r][tau.apply(r)]).collect();
    let plus = |w: &Weight| w.add(&tau.act_weight(w)).scale(Rat::new(1, 2));
    let alpha_hat: Vec<Weight> = classes.iter().map(|c| plus(&rs.simple_root(c[0]))).collect();
    let m = classes.len();
    let mut cartan = vec![vec![0i64; m]; m];
    for i in 0..m {
        for j in 0..m {
            let v = rs.coroot_pairing(&alpha_hat[i], &alpha_hat[j]);
            if !v.is_integer() {
                return invalid("folded Cartan entries are not integral");
            }
            cartan[i][j] = v.to_integer();
        }
    }
    let varpi_hat: Vec<Weight> = classes
        .iter()
        .map(|c| {
            let mut w = Weight::zero(n);
            for &s in c {
                w.0[s] = Rat::new(1, 2) + Rat::new(tau_pairing[s], 4);
            }
            w
        })
        .collect();
    let generators: Vec<WeylElement> = classes
        .iter()
        .map(|c| {
            let r = c[0];
            let t = tau.apply(r);
            let word = match tau_pairing[r] {
                2 => vec![r],
                0 => vec![r, t],
                _ => vec![r, t, r],
            };
            WeylElement::from_word(rs, &word).expect("valid nodes")
        })
        .collect();
    let mut seen = BTreeSet::new();
    let mut pos_roots = Vec::new();
    let mut pos_roots_hat = Vec::new();
    for (beta, c) in rs.pos_roots.iter().zip(&rs.pos_roots_alpha) {
        let b = plus(beta);
        if seen.insert(b.clone()) {
            pos_roots.push(b);
            pos_roots_hat.push(classes.iter().map(|cl| cl.iter().map(|&s| c[s]).sum()).collect::<Vec<i64>>());
        }
    }
    let mut order: Vec<usize> = (0..pos_roots.len()).collect();
    order.sort_by_key(|&i| (pos_roots_hat[i].iter().sum::<i64>(), pos_roots_hat[i].clone()));
    let pos_roots: Vec<Weight> = order.iter().map(|&i| pos_roots[i].clone()).collect();
    let pos_roots_hat: Vec<Vec<i64>> = order.iter().map(|&i| pos_roots_hat[i].clone()).collect();
    let mut labels = Vec::new();
    let mut non_reduced = false;
    for comp in components_of(&cartan) {
        let bc = comp.iter().any(|&i| classes[i].iter().any(|&r| tau_pairing[r] == -1));
        non_reduced |= bc;
        let l = if bc {
            format!("BC{}", comp.len())
        } else {
            recognize_component(&cartan, &comp).unwrap_or_else(|| "custom".into())
        };
        labels.push(l);
    }
    Ok(FoldedSystem {
        base: rs.clone(),
        tau,
        classes,
        class_of,
        tau_pairing,
        cartan,
        label: labels.join("x"),
        non_reduced,
        varpi_hat,
        alpha_hat,
        generators,
        pos_roots,
        pos_roots_hat,
    })
}

impl FoldedSystem {
    pub fn rank(&self) -> usize {
        self.classes.len()
    }

    /// `(omega + tau omega)/2`.
    pub fn plus(&self, w: &Weight) -> Weight {
        w.add(&self.tau.act_weight(w)).scale(Rat::new(1, 2))
    }

    pub fn is_fixed(&self, w: &Weight) -> bool {
        self.tau.act_weight(w) == *w
    }

    /// Coordinates of a tau-fixed weight in the `varpi_rhat` basis.
    pub fn hat_coords(&self, w: &Weight) -> Vec<Rat> {
        self.classes.iter().zip(&self.varpi_hat).map(|(c, v)| w.0[c[0]] / v.0[c[0]]).collect()
    }

    /// Folded simple reflection acting on `V^tau`.
    pub fn reflect(&self, i: usize, w: &Weight) -> Weight {
        let a = &self.alpha_hat[i];
        w.sub(&a.scale(self.base.coroot_pairing(a, w)))
    }

    /// `W^tau` with `hsgn` read from the generator length.
    pub fn weyl_tau(&self) -> Result<Vec<(WeylElement, i64)>> {
        Ok(enumerate_group(&self.base, &self.generators, WEYL_GUARD)?
            .into_iter()
            .map(|(w, l)| (w, if l % 2 == 0 { 1 } else { -1 }))
            .collect())
    }

    /// Coefficients of a tau-fixed element of `Q` in the folded simple roots.
    pub fn alpha_hat_coords(&self, w: &Weight) -> Vec<Rat> {
        let c = self.base.to_alpha(w);
        self.classes.iter().map(|cl| cl.iter().map(|&s| c[s]).sum::<Rat>()).collect()
    }

    pub fn is_zero_class(&self, i: usize) -> bool {
        self.alpha_hat[i].0.iter().all(|x| x.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn folded(label: &str, tau: &[usize]) -> FoldedSystem {
        let rs = RootSystem::from_label(label).unwrap();
        let t = Involution::from_one_based(&rs, tau).unwrap();
        fold(&rs, &t).unwrap()
    }

    #[test]
    fn table_rows() {
        assert_eq!(folded("A3", &[3, 2, 1]).label, "C2");
        let f = folded("A4", &[4, 3, 2, 1]);
        assert_eq!((f.label.as_str(), f.non_reduced), ("BC2", true));
        assert_eq!(folded("E6", &[5, 4, 3, 2, 1, 6]).label, "F4");
        assert_eq!(folded("D4", &[1, 2, 4, 3]).label, "B3");
        assert_eq!(folded("A5", &[5, 4, 3, 2, 1]).label, "C3");
        assert_eq!(folded("A1xA1", &[2, 1]).label, "A1");
        assert!(!folded("A1xA1", &[2, 1]).non_reduced);
    }

    #[test]
    fn middle_class_weight_is_halved() {
        let f = folded("A2", &[2, 1]);
        assert_eq!(f.varpi_hat[0], Weight(vec![Rat::new(1, 4), Rat::new(1, 4)]));
        let g = folded("A3", &[3, 2, 1]);
        assert_eq!(g.varpi_hat[0], Weight(vec![Rat::new(1, 2), Rat::zero(), Rat::new(1, 2)]));
    }

    #[test]
    fn lifted_generators_are_folded_reflections() {
        for (l, t) in [("A3", vec![3, 2, 1]), ("A4", vec![4, 3, 2, 1]), ("D4", vec![1, 2, 4, 3])] {
            let f = folded(l, &t);
            for (i, g) in f.generators.iter().enumerate() {
                assert!(g.mul(g).is_identity());
                for v in &f.varpi_hat {
                    assert_eq!(g.apply(v), f.reflect(i, v));
                }
            }
        }
    }

    #[test]
    fn folded_weights_are_dual_to_coroots() {
        let f = folded("A4", &[4, 3, 2, 1]);
        for i in 0..f.rank() {
            for j in 0..f.rank() {
                let v = f.base.coroot_pairing(&f.alpha_hat[j], &f.varpi_hat[i]);
                assert_eq!(v, Rat::from((i == j) as i64));
            }
        }
    }
}
