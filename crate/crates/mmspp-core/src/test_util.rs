//! Shared fixtures for the unit tests.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::instance::{Arc, Commodity, Instance};

pub(crate) fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

pub(crate) fn inst(n: &[&str], arcs: &[(u32, u32)], coms: &[(u32, u32)]) -> Instance {
    Instance::new(
        names(n),
        arcs.iter().map(|&(t, h)| Arc::new(t, h)).collect(),
        coms.iter().map(|&(s, t)| Commodity::new(s, t)).collect(),
    )
    .expect("valid test instance")
}

/// Fan: s → a, a → l1..l_k, commodities (s, l_i). Optimal value is
/// ⌈(k+1)/2⌉: s and a are the only possible relays for k demands plus the
/// hop into a.
pub(crate) fn fan(k: usize) -> Instance {
    let mut n = vec!["s".to_string(), "a".to_string()];
    let mut arcs = vec![Arc::new(0, 1)];
    let mut coms = Vec::new();
    for i in 0..k {
        n.push(format!("l{}", i + 1));
        arcs.push(Arc::new(1, 2 + i as u32));
        coms.push(Commodity::new(0, 2 + i as u32));
    }
    Instance::new(n, arcs, coms).unwrap()
}

/// Chain into a claw with three staggered sources:
///
/// ```text
///   r → u → v → {w1, w2, w3, w4, w5}
/// ```
///
/// nodes r=0 u=1 v=2 w1=3 w2=4 w3=5 w4=6 w5=7; commodities
/// (r,w1) (u,w1) (r,w2) (v,w2) (v,w3) (v,w4) (u,w5).
///
/// Blocking sources per arc: ru→r, uv→u, vw1→u, vw2→v, vw3→v, vw4→v,
/// vw5→u.
pub(crate) fn chain_claw() -> Instance {
    inst(
        &["r", "u", "v", "w1", "w2", "w3", "w4", "w5"],
        &[(0, 1), (1, 2), (2, 3), (2, 4), (2, 5), (2, 6), (2, 7)],
        &[(0, 3), (1, 3), (0, 4), (2, 4), (2, 5), (2, 6), (1, 7)],
    )
}
