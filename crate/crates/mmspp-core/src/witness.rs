//! Witness-set lower bounds.
//!
//! A witness is a node set `W` together with a commodity selection `K'`
//! satisfying: the subgraph induced by `W` is connected in the underlying
//! tree, every selected commodity starts inside `W` and ends outside it,
//! and the selected commodities leave `W` over pairwise-disjoint boundary
//! arcs of their paths. Whenever those conditions hold,
//!
//! ```text
//!   LB(W, K')  = ⌈(|K'| + |W| − |S(K')|) / |W|⌉
//!   LB^w(W, K') = ⌈|K'| / |W|⌉
//! ```
//!
//! are valid lower bounds on the maximum out-degree of *every* feasible
//! solution (`S(K')` is the set of distinct sources of `K'`). Single-source
//! instances admit a simpler form over the network boundary alone.
//!
//! Everything here is checkable in polynomial time, so certificates can be
//! re-verified independently of the solver that produced them.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::instance::{Arc, Instance, NO_NODE};

/// Which bound formula a certificate claims.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertificateKind {
    /// The source-aware bound `⌈(|K'| + |W| − |S(K')|)/|W|⌉`.
    Lb,
    /// The source-oblivious bound `⌈|K'|/|W|⌉`.
    LbWeak,
    /// The single-source bound `⌈(|δ⁺(W)| + |W| − 1)/|W|⌉` over the network
    /// boundary of `W`.
    SingleSourceLb,
}

impl CertificateKind {
    /// Stable textual name used in solution files.
    pub fn name(self) -> &'static str {
        match self {
            CertificateKind::Lb => "LB",
            CertificateKind::LbWeak => "LB-weak",
            CertificateKind::SingleSourceLb => "single-source-LB",
        }
    }

    /// Inverse of [`CertificateKind::name`].
    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "LB" => Some(CertificateKind::Lb),
            "LB-weak" => Some(CertificateKind::LbWeak),
            "single-source-LB" => Some(CertificateKind::SingleSourceLb),
            _ => None,
        }
    }
}

impl fmt::Display for CertificateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A lower-bound certificate: witness nodes, selected commodities, claimed
/// kind and value. Verification recomputes the value from scratch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessCertificate {
    /// Formula this certificate claims.
    pub kind: CertificateKind,
    /// Claimed lower bound.
    pub value: u32,
    /// Witness node set, ascending.
    pub witness_nodes: Vec<u32>,
    /// Selected commodity indices, ascending.
    pub commodities: Vec<u32>,
}

impl WitnessCertificate {
    /// Recomputes the claimed value from the instance; `true` iff the
    /// stored value matches and all witness conditions hold.
    pub fn verify(&self, i: &Instance) -> bool {
        let recomputed = match self.kind {
            CertificateKind::Lb => eval_lb(i, &self.witness_nodes, &self.commodities),
            CertificateKind::LbWeak => eval_lb_weak(i, &self.witness_nodes, &self.commodities),
            CertificateKind::SingleSourceLb => eval_lb_single_source(i, &self.witness_nodes),
        };
        recomputed > 0 && recomputed == self.value
    }
}

/// A reason a (witness, commodities) pair fails the lower-bound conditions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// The instance is not a tree; boundary cuts are undefined.
    NotATree,
    /// The witness node set is empty.
    EmptyWitness,
    /// No commodities were selected.
    EmptyCommoditySet,
    /// A witness node index is out of range.
    NodeOutOfRange(u32),
    /// A selected commodity index is out of range.
    CommodityOutOfRange(u32),
    /// The same commodity was selected twice.
    DuplicateCommodity(u32),
    /// The witness nodes do not induce a connected subtree.
    WitnessNotConnected,
    /// A selected commodity's source lies outside the witness set.
    SourceOutsideWitness {
        /// Offending commodity index.
        commodity: u32,
    },
    /// A selected commodity's sink lies inside the witness set.
    SinkInsideWitness {
        /// Offending commodity index.
        commodity: u32,
    },
    /// Two selected commodities leave the witness set over the same arc.
    OverlappingCuts {
        /// First commodity (lower index).
        commodity_a: u32,
        /// Second commodity.
        commodity_b: u32,
        /// The shared boundary arc.
        arc: Arc,
    },
    /// Single-source form: the instance has more than one distinct source.
    MultipleSources,
    /// Single-source form: the source is not a witness node.
    SourceNotInWitness,
    /// Single-source form: the witness does not induce a directed subtree
    /// rooted at the source.
    NotDirectedSubtree,
    /// Single-source form: no network arc leaves the witness set.
    EmptyBoundary,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotATree => write!(f, "instance is not a tree"),
            Violation::EmptyWitness => write!(f, "witness node set is empty"),
            Violation::EmptyCommoditySet => write!(f, "commodity selection is empty"),
            Violation::NodeOutOfRange(u) => write!(f, "witness node {u} out of range"),
            Violation::CommodityOutOfRange(k) => write!(f, "commodity index {k} out of range"),
            Violation::DuplicateCommodity(k) => write!(f, "commodity {k} selected twice"),
            Violation::WitnessNotConnected => {
                write!(f, "witness nodes do not induce a connected subtree")
            }
            Violation::SourceOutsideWitness { commodity } => {
                write!(f, "source of commodity {commodity} lies outside the witness")
            }
            Violation::SinkInsideWitness { commodity } => {
                write!(f, "sink of commodity {commodity} lies inside the witness")
            }
            Violation::OverlappingCuts {
                commodity_a,
                commodity_b,
                arc,
            } => write!(
                f,
                "commodities {commodity_a} and {commodity_b} share boundary arc ({}, {})",
                arc.tail, arc.head
            ),
            Violation::MultipleSources => {
                write!(f, "single-source bound on a multi-source instance")
            }
            Violation::SourceNotInWitness => write!(f, "source is not a witness node"),
            Violation::NotDirectedSubtree => {
                write!(f, "witness does not induce a directed subtree at the source")
            }
            Violation::EmptyBoundary => write!(f, "no network arc leaves the witness set"),
        }
    }
}

fn membership(i: &Instance, witness: &[u32]) -> Option<Vec<bool>> {
    let mut in_w = vec![false; i.node_count()];
    for &u in witness {
        if u as usize >= i.node_count() {
            return None;
        }
        in_w[u as usize] = true;
    }
    Some(in_w)
}

/// The boundary cut of commodity `k` with respect to a witness node set:
/// all arcs of the commodity's path with tail inside and head outside the
/// set, in path order. Empty on non-trees.
pub fn commodity_cut(i: &Instance, witness: &[u32], k: usize) -> Vec<Arc> {
    let Some(in_w) = membership(i, witness) else {
        return Vec::new();
    };
    cut_marked(i, &in_w, k)
}

fn cut_marked(i: &Instance, in_w: &[bool], k: usize) -> Vec<Arc> {
    let Some(path) = i.commodity_path(k) else {
        return Vec::new();
    };
    path.windows(2)
        .filter(|w| in_w[w[0] as usize] && !in_w[w[1] as usize])
        .map(|w| Arc::new(w[0], w[1]))
        .collect()
}

/// Checks every lower-bound condition for `(witness, commodities)` and
/// reports all violations found (empty = the pair is a valid witness).
pub fn check_witness_conditions(
    i: &Instance,
    witness: &[u32],
    commodities: &[u32],
) -> Vec<Violation> {
    let mut out = Vec::new();
    if !i.is_tree() {
        out.push(Violation::NotATree);
        return out;
    }
    if witness.is_empty() {
        out.push(Violation::EmptyWitness);
    }
    if commodities.is_empty() {
        out.push(Violation::EmptyCommoditySet);
    }
    let mut in_w = vec![false; i.node_count()];
    for &u in witness {
        if u as usize >= i.node_count() {
            out.push(Violation::NodeOutOfRange(u));
        } else {
            in_w[u as usize] = true;
        }
    }
    let mut selected = BTreeSet::new();
    let mut valid_commodities = Vec::new();
    for &k in commodities {
        if k as usize >= i.commodities().len() {
            out.push(Violation::CommodityOutOfRange(k));
        } else if !selected.insert(k) {
            out.push(Violation::DuplicateCommodity(k));
        } else {
            valid_commodities.push(k);
        }
    }
    if !out.is_empty() && out.iter().any(|v| matches!(v, Violation::NodeOutOfRange(_))) {
        return out;
    }

    // Connectivity of the induced subtree: walk within the witness set.
    let wcount = in_w.iter().filter(|&&b| b).count();
    if wcount > 0 {
        let start = in_w.iter().position(|&b| b).unwrap() as u32;
        let mut reached = vec![false; i.node_count()];
        reached[start as usize] = true;
        let mut stack = vec![start];
        let mut seen = 1usize;
        let adj = undirected_neighbors(i);
        while let Some(u) = stack.pop() {
            for &w in &adj[u as usize] {
                if in_w[w as usize] && !reached[w as usize] {
                    reached[w as usize] = true;
                    seen += 1;
                    stack.push(w);
                }
            }
        }
        if seen != wcount {
            out.push(Violation::WitnessNotConnected);
        }
    }

    let mut cut_owner: BTreeMap<Arc, u32> = BTreeMap::new();
    for &k in &valid_commodities {
        let c = i.commodities()[k as usize];
        let mut endpoints_ok = true;
        if !in_w[c.source as usize] {
            out.push(Violation::SourceOutsideWitness { commodity: k });
            endpoints_ok = false;
        }
        if in_w[c.sink as usize] {
            out.push(Violation::SinkInsideWitness { commodity: k });
            endpoints_ok = false;
        }
        if !endpoints_ok {
            continue;
        }
        for arc in cut_marked(i, &in_w, k as usize) {
            match cut_owner.get(&arc) {
                Some(&other) => out.push(Violation::OverlappingCuts {
                    commodity_a: other.min(k),
                    commodity_b: other.max(k),
                    arc,
                }),
                None => {
                    cut_owner.insert(arc, k);
                }
            }
        }
    }
    out
}

fn undirected_neighbors(i: &Instance) -> Vec<Vec<u32>> {
    let mut adj = vec![Vec::new(); i.node_count()];
    for a in i.arcs() {
        adj[a.tail as usize].push(a.head);
        adj[a.head as usize].push(a.tail);
    }
    adj
}

fn ceil_div(a: u64, b: u64) -> u32 {
    a.div_ceil(b) as u32
}

/// The source-aware bound `⌈(|K'| + |W| − |S(K')|)/|W|⌉`, or 0 if any
/// witness condition is violated.
pub fn eval_lb(i: &Instance, witness: &[u32], commodities: &[u32]) -> u32 {
    if !check_witness_conditions(i, witness, commodities).is_empty() {
        return 0;
    }
    let w: BTreeSet<u32> = witness.iter().copied().collect();
    let sources: BTreeSet<u32> = commodities
        .iter()
        .map(|&k| i.commodities()[k as usize].source)
        .collect();
    let k = commodities.len() as u64;
    ceil_div(k + w.len() as u64 - sources.len() as u64, w.len() as u64)
}

/// The source-oblivious bound `⌈|K'|/|W|⌉`, or 0 if any witness condition
/// is violated.
pub fn eval_lb_weak(i: &Instance, witness: &[u32], commodities: &[u32]) -> u32 {
    if !check_witness_conditions(i, witness, commodities).is_empty() {
        return 0;
    }
    let w: BTreeSet<u32> = witness.iter().copied().collect();
    ceil_div(commodities.len() as u64, w.len() as u64)
}

/// Checks the single-source form's conditions: one distinct source `s`,
/// `s ∈ W`, the witness induces a directed subtree rooted at `s`, and at
/// least one network arc leaves the witness set.
pub fn check_single_source_conditions(i: &Instance, witness: &[u32]) -> Vec<Violation> {
    let mut out = Vec::new();
    if !i.is_tree() {
        out.push(Violation::NotATree);
        return out;
    }
    if witness.is_empty() {
        out.push(Violation::EmptyWitness);
        return out;
    }
    let Some(in_w) = membership(i, witness) else {
        for &u in witness {
            if u as usize >= i.node_count() {
                out.push(Violation::NodeOutOfRange(u));
            }
        }
        return out;
    };
    let sources = i.sources();
    let &[s] = sources.as_slice() else {
        out.push(Violation::MultipleSources);
        return out;
    };
    if !in_w[s as usize] {
        out.push(Violation::SourceNotInWitness);
    }

    // The witness induces a directed subtree rooted at s iff s is the only
    // witness node whose tree parent lies outside the set, and every other
    // witness node hangs below its parent via a forward (parent → child)
    // network arc.
    let mut directed_ok = in_w[s as usize];
    for &u in witness {
        if u == s {
            continue;
        }
        let p = i.tree_parent(u).expect("tree instance");
        if p == NO_NODE || !in_w[p as usize] || !i.parent_arc_down(u) {
            directed_ok = false;
            break;
        }
    }
    if !directed_ok && in_w[s as usize] {
        out.push(Violation::NotDirectedSubtree);
    }

    let boundary = i
        .arcs()
        .iter()
        .filter(|a| in_w[a.tail as usize] && !in_w[a.head as usize])
        .count();
    if boundary == 0 {
        out.push(Violation::EmptyBoundary);
    }
    out
}

/// The single-source bound `⌈(|δ⁺(W)| + |W| − 1)/|W|⌉` over the network
/// boundary of the witness set, or 0 if its conditions are violated.
pub fn eval_lb_single_source(i: &Instance, witness: &[u32]) -> u32 {
    if !check_single_source_conditions(i, witness).is_empty() {
        return 0;
    }
    let w: BTreeSet<u32> = witness.iter().copied().collect();
    let in_w = membership(i, witness).expect("indices validated");
    let boundary = i
        .arcs()
        .iter()
        .filter(|a| in_w[a.tail as usize] && !in_w[a.head as usize])
        .count() as u64;
    ceil_div(boundary + w.len() as u64 - 1, w.len() as u64)
}

/// Selects, for a fixed witness node set, a commodity set maximizing the
/// source-aware bound.
///
/// The selection takes one crossing commodity per distinct boundary arc
/// (using every coverable arc never hurts the bound) and coordinates the
/// per-arc choices so that the number of distinct sources is minimized —
/// an exact minimum cover of the boundary arcs by sources, found by
/// deterministic branch-and-bound with the lexicographically smallest
/// optimal cover. Per arc, the lowest-index commodity whose source is in
/// the chosen cover wins.
///
/// When few commodities cross the boundary the result is additionally
/// cross-checked against exhaustive subset enumeration, which also handles
/// witness sets where a single commodity leaves and re-enters several
/// times. Returns ascending commodity indices; empty when nothing crosses.
pub fn best_commodities_for(i: &Instance, witness: &[u32]) -> Vec<u32> {
    if !i.is_tree() {
        return Vec::new();
    }
    let Some(in_w) = membership(i, witness) else {
        return Vec::new();
    };

    // Crossing commodities and their boundary cuts.
    let mut crossing: Vec<(u32, Vec<Arc>)> = Vec::new();
    for (k, c) in i.commodities().iter().enumerate() {
        if c.source != c.sink && in_w[c.source as usize] && !in_w[c.sink as usize] {
            let cut = cut_marked(i, &in_w, k);
            if !cut.is_empty() {
                crossing.push((k as u32, cut));
            }
        }
    }
    if crossing.is_empty() {
        return Vec::new();
    }

    let cover_pick = min_source_cover_selection(i, &crossing);

    // Exhaustive cross-check at desk scale: also explores selections that
    // use commodities crossing the boundary more than once.
    if crossing.len() <= 16 {
        let exhaustive = exhaustive_selection(i, witness, &crossing);
        let best_val = eval_lb(i, witness, &exhaustive);
        if eval_lb(i, witness, &cover_pick) >= best_val {
            return cover_pick;
        }
        return exhaustive;
    }
    cover_pick
}

/// One commodity per single-exit boundary arc, with sources coordinated to
/// a lexicographically-smallest minimum cover.
fn min_source_cover_selection(i: &Instance, crossing: &[(u32, Vec<Arc>)]) -> Vec<u32> {
    // Only single-exit commodities participate; each covers exactly one arc.
    let mut per_arc: BTreeMap<Arc, Vec<u32>> = BTreeMap::new();
    for (k, cut) in crossing {
        if let [arc] = cut.as_slice() {
            per_arc.entry(*arc).or_default().push(*k);
        }
    }
    if per_arc.is_empty() {
        return Vec::new();
    }
    let arcs: Vec<&Vec<u32>> = per_arc.values().collect();
    let arc_sources: Vec<BTreeSet<u32>> = arcs
        .iter()
        .map(|cands| {
            cands
                .iter()
                .map(|&k| i.commodities()[k as usize].source)
                .collect()
        })
        .collect();

    let mut best: Option<Vec<u32>> = None;
    let mut chosen: Vec<u32> = Vec::new();
    cover_search(&arc_sources, &mut chosen, &mut best);
    let cover: BTreeSet<u32> = best.expect("cover always exists").into_iter().collect();

    let mut selection: Vec<u32> = arcs
        .iter()
        .map(|cands| {
            *cands
                .iter()
                .find(|&&k| cover.contains(&i.commodities()[k as usize].source))
                .expect("cover covers every arc")
        })
        .collect();
    selection.sort_unstable();
    selection.dedup();
    selection
}

fn cover_search(
    arc_sources: &[BTreeSet<u32>],
    chosen: &mut Vec<u32>,
    best: &mut Option<Vec<u32>>,
) {
    // First arc not covered by the current choice.
    let uncovered = arc_sources
        .iter()
        .find(|srcs| !chosen.iter().any(|s| srcs.contains(s)));
    let Some(candidates) = uncovered else {
        let mut done = chosen.clone();
        done.sort_unstable();
        let better = match best {
            None => true,
            Some(b) => done.len() < b.len() || (done.len() == b.len() && done < *b),
        };
        if better {
            *best = Some(done);
        }
        return;
    };
    if let Some(b) = best {
        if chosen.len() + 1 > b.len() {
            return;
        }
    }
    for &s in candidates.iter() {
        chosen.push(s);
        cover_search(arc_sources, chosen, best);
        chosen.pop();
    }
}

fn exhaustive_selection(i: &Instance, witness: &[u32], crossing: &[(u32, Vec<Arc>)]) -> Vec<u32> {
    let mut best: Vec<u32> = Vec::new();
    let mut best_val = 0u32;
    for mask in 1u32..(1u32 << crossing.len()) {
        let subset: Vec<u32> = (0..crossing.len())
            .filter(|&j| mask & (1 << j) != 0)
            .map(|j| crossing[j].0)
            .collect();
        let val = eval_lb(i, witness, &subset);
        if val > best_val {
            best_val = val;
            best = subset;
        }
    }
    best
}
