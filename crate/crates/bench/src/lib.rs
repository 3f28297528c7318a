//! Shared inputs for the kernel benchmarks.

use qorbit_core::{Involution, RootSystem, TwistingDatum, Weight};

pub fn datum(label: &str, tau: &[usize], eps: &[i64]) -> TwistingDatum {
    TwistingDatum::simple(label, tau, eps).expect("valid datum")
}

pub fn folded_d4() -> qorbit_core::FoldedSystem {
    let rs = RootSystem::from_label("D4").expect("D4");
    let tau = Involution::from_one_based(&rs, &[1, 2, 4, 3]).expect("involution");
    qorbit_core::rootsys::fold(&rs, &tau).expect("fold")
}

pub fn weight(c: &[i64]) -> Weight {
    Weight::from_ints(c)
}
