//! Exact reference solver and exhaustive witness search.
//!
//! Exponential-time machinery for desk-scale instances: an exact
//! branch-and-bound over per-commodity stop sets, an exhaustive witness
//! maximizer over connected node sets, and a seeded search for instances
//! whose best witness bound sits strictly below the optimum. All entry
//! points enforce [`OracleLimits`] so runaway inputs fail fast instead of
//! hanging.
//!
//! The search is independent of the polynomial solvers by construction: it
//! never calls them, and they never call it. Tests compare the two sides.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{GeneratorError, OracleError};
use crate::generators::{random_instance, RandomShape};
use crate::instance::{Arc, Instance, Solution};
use crate::witness::{best_commodities_for, eval_lb, CertificateKind, WitnessCertificate};

/// Caps on oracle effort. All fields must be positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimits {
    /// Maximum node count accepted.
    pub max_nodes: u32,
    /// Maximum commodity count accepted.
    pub max_commodities: u32,
    /// Budget on search-tree expansions (stop-set applications for the
    /// exact solver, node sets for the witness maximizer). A running
    /// counter aborts the search when it passes this cap.
    pub max_enumeration: u64,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            max_nodes: 14,
            max_commodities: 64,
            max_enumeration: 10_000_000,
        }
    }
}

impl OracleLimits {
    fn validate(&self) -> Result<(), OracleError> {
        if self.max_nodes == 0 || self.max_commodities == 0 || self.max_enumeration == 0 {
            return Err(OracleError::BadLimits);
        }
        Ok(())
    }

    fn admit(&self, i: &Instance) -> Result<(), OracleError> {
        self.validate()?;
        if i.node_count() as u32 > self.max_nodes {
            return Err(OracleError::LimitsExceeded(format!(
                "{} nodes exceed the cap of {}",
                i.node_count(),
                self.max_nodes
            )));
        }
        if i.commodities().len() as u32 > self.max_commodities {
            return Err(OracleError::LimitsExceeded(format!(
                "{} commodities exceed the cap of {}",
                i.commodities().len(),
                self.max_commodities
            )));
        }
        Ok(())
    }
}

/// Branch-and-bound state. Each commodity chooses a stop set — a subset of
/// its path's interior nodes — inducing the hop arcs source → stops → sink.
/// Arcs are shared across commodities via refcounts.
///
/// Two modes: `cap: Some(c)` accepts the first assignment whose maximum
/// degree stays within `c` (used by the iterative-deepening exact solver);
/// `cap: None` scans for the best value, optionally pruning branches that
/// cannot improve it.
struct StopSetSearch {
    node_count: usize,
    interiors: Vec<Vec<u32>>,
    ends: Vec<(u32, u32)>,
    /// `twin_prev[k]` marks commodity `k` as interchangeable with `k - 1`:
    /// same source, sibling leaf sinks nothing else touches. Exchanging
    /// their stop masks permutes arcs without moving any out-degree, so the
    /// search may require masks to be nondecreasing along a twin chain.
    twin_prev: Vec<bool>,
    /// `on_path[k][w]` ⇔ node `w` lies on commodity `k`'s path, source
    /// excluded — the candidate first hops.
    on_path: Vec<Vec<bool>>,
    /// Commodity indices grouped by source node, ascending.
    by_source: Vec<Vec<u32>>,
    chosen: Vec<u32>,
    deg: Vec<u32>,
    /// Arc refcounts, dense: index `tail * node_count + head`.
    refc: Vec<u32>,
    best_value: u32,
    best_arcs: Vec<Arc>,
    counter: u64,
    max_enumeration: u64,
    prune: bool,
    cap: Option<u32>,
    exhausted_budget: bool,
    done: bool,
}

impl StopSetSearch {
    fn new(i: &Instance, lim: &OracleLimits, prune: bool) -> Result<Self, OracleError> {
        if !i.is_tree() {
            return Err(OracleError::NotATree);
        }
        let n = i.node_count();
        assert!(n <= 2048, "stop-set search is desk scale; {n} nodes is past it");
        let mut interiors = Vec::with_capacity(i.commodities().len());
        let mut ends = Vec::with_capacity(i.commodities().len());
        let mut on_path = Vec::with_capacity(i.commodities().len());
        let mut by_source = vec![Vec::new(); n];
        for k in 0..i.commodities().len() {
            let path = i.commodity_path(k).expect("tree instance");
            let inner = if path.len() >= 3 {
                path[1..path.len() - 1].to_vec()
            } else {
                Vec::new()
            };
            interiors.push(inner);
            let (s, t) = (path[0], *path.last().expect("non-empty path"));
            ends.push((s, t));
            let mut marks = vec![false; n];
            for &w in &path[1..] {
                marks[w as usize] = true;
            }
            on_path.push(marks);
            by_source[s as usize].push(k as u32);
        }
        let mut sink_uses = vec![0u32; n];
        let mut source_uses = vec![0u32; n];
        for &(s, t) in &ends {
            source_uses[s as usize] += 1;
            sink_uses[t as usize] += 1;
        }
        let out_deg = i.out_degrees();
        let lone_leaf = |t: u32| -> bool {
            out_deg[t as usize] == 0 && sink_uses[t as usize] == 1 && source_uses[t as usize] == 0
        };
        let twin_prev = (0..ends.len())
            .map(|k| {
                k > 0 && {
                    let (sa, ta) = ends[k - 1];
                    let (sb, tb) = ends[k];
                    sa == sb
                        && ta != tb
                        && lone_leaf(ta)
                        && lone_leaf(tb)
                        && i.tree_parent(ta) == i.tree_parent(tb)
                        && i.tree_parent(ta).is_some()
                }
            })
            .collect();
        Ok(StopSetSearch {
            node_count: n,
            interiors,
            ends,
            twin_prev,
            on_path,
            by_source,
            chosen: vec![0; i.commodities().len()],
            deg: vec![0; n],
            refc: vec![0; n * n],
            best_value: u32::MAX,
            best_arcs: Vec::new(),
            counter: 0,
            max_enumeration: lim.max_enumeration,
            prune,
            cap: None,
            exhausted_budget: false,
            done: false,
        })
    }

    fn snapshot_arcs(&self) -> Vec<Arc> {
        let n = self.node_count;
        let mut arcs = Vec::new();
        for tail in 0..n {
            for head in 0..n {
                if self.refc[tail * n + head] > 0 {
                    arcs.push(Arc::new(tail as u32, head as u32));
                }
            }
        }
        arcs
    }

    /// Hop arcs induced by giving commodity `k` the stop set `mask` (bit j
    /// selects the j-th interior node).
    fn hops(&self, k: usize, mask: u32) -> Vec<(u32, u32)> {
        let (s, t) = self.ends[k];
        if s == t {
            return Vec::new();
        }
        let mut arcs = Vec::new();
        let mut prev = s;
        for (j, &stop) in self.interiors[k].iter().enumerate() {
            if mask & (1 << j) != 0 {
                arcs.push((prev, stop));
                prev = stop;
            }
        }
        arcs.push((prev, t));
        arcs
    }

    fn apply(&mut self, hops: &[(u32, u32)], cur_max: u32) -> u32 {
        let mut new_max = cur_max;
        for &(tail, head) in hops {
            let slot = tail as usize * self.node_count + head as usize;
            self.refc[slot] += 1;
            if self.refc[slot] == 1 {
                self.deg[tail as usize] += 1;
                new_max = new_max.max(self.deg[tail as usize]);
            }
        }
        new_max
    }

    fn undo(&mut self, hops: &[(u32, u32)]) {
        for &(tail, head) in hops {
            let slot = tail as usize * self.node_count + head as usize;
            debug_assert!(self.refc[slot] > 0, "undoing an arc that was applied");
            self.refc[slot] -= 1;
            if self.refc[slot] == 0 {
                self.deg[tail as usize] -= 1;
            }
        }
    }

    /// One-step look-ahead for the capped search. Along a branch, arcs only
    /// accumulate, so once a node's out-degree reaches the cap its arc set
    /// out of that node is final. Every later commodity sourced there must
    /// take its first hop along one of those arcs; if none lands on the
    /// commodity's path, the branch cannot complete and is cut here instead
    /// of after an exponential detour. Only tails this expansion may have
    /// saturated need inspection.
    fn saturation_wedges(&self, k: usize, hops: &[(u32, u32)], cap: u32) -> bool {
        hops.iter().any(|&(tail, _)| {
            self.deg[tail as usize] == cap && {
                let row = tail as usize * self.node_count;
                self.by_source[tail as usize].iter().any(|&j| {
                    j as usize > k && {
                        let path = &self.on_path[j as usize];
                        !(0..self.node_count)
                            .any(|w| self.refc[row + w] > 0 && path[w])
                    }
                })
            }
        })
    }

    fn recurse(&mut self, k: usize, cur_max: u32) {
        if self.done || self.exhausted_budget {
            return;
        }
        if k == self.interiors.len() {
            match self.cap {
                // Capped mode: any completion already satisfies the cap.
                Some(_) => {
                    self.best_value = cur_max;
                    self.best_arcs = self.snapshot_arcs();
                    self.done = true;
                }
                // Strict improvement keeps the first optimum deterministic.
                None => {
                    if cur_max < self.best_value {
                        self.best_value = cur_max;
                        self.best_arcs = self.snapshot_arcs();
                        if self.best_value <= 1 {
                            self.done = true;
                        }
                    }
                }
            }
            return;
        }
        let width = self.interiors[k].len().min(31);
        // Twin chains share a source and indistinguishable sinks, so any
        // assignment can be reordered to make their masks nondecreasing;
        // enumerating only that representative is lossless.
        let first_mask = if self.twin_prev[k] { self.chosen[k - 1] } else { 0 };
        for mask in first_mask..(1u32 << width) {
            self.chosen[k] = mask;
            self.counter += 1;
            if self.counter > self.max_enumeration {
                self.exhausted_budget = true;
                return;
            }
            let hops = self.hops(k, mask);
            let new_max = self.apply(&hops, cur_max);
            let admit = match self.cap {
                // The running maximum only ever grows, so any branch over
                // the cap is over it for good: the pruning is lossless.
                Some(c) => new_max <= c && !self.saturation_wedges(k, &hops, c),
                None => !self.prune || new_max < self.best_value,
            };
            if admit {
                self.recurse(k + 1, new_max);
            }
            self.undo(&hops);
            if self.done || self.exhausted_budget {
                return;
            }
        }
    }
}

fn run_stop_set_search(
    i: &Instance,
    lim: &OracleLimits,
    prune: bool,
) -> Result<Solution, OracleError> {
    lim.admit(i)?;
    if i.commodities().iter().all(|c| c.source == c.sink) {
        return Ok(Solution::from_arcs(i.node_count(), core::iter::empty()));
    }
    let mut search = StopSetSearch::new(i, lim, prune)?;
    search.recurse(0, 0);
    if search.exhausted_budget {
        return Err(OracleError::LimitsExceeded(format!(
            "enumeration budget of {} expansions exhausted",
            lim.max_enumeration
        )));
    }
    debug_assert!(search.best_value != u32::MAX);
    Ok(Solution::from_arcs(
        i.node_count(),
        search.best_arcs.iter().copied(),
    ))
}

/// Exact minimum of the maximum out-degree, by iterative deepening over
/// per-commodity stop sets: for each candidate value `c` in ascending
/// order, a hard-capped search accepts the first assignment whose maximum
/// degree stays within `c`. The cap prunes from the first branch onward,
/// which keeps instances with small optima tractable even when they carry
/// many commodities. Returns an optimal solution; its `max_out_degree` is
/// the optimum. Deterministic: commodities in index order, stop sets in
/// ascending characteristic-vector order, first optimum found wins. The
/// enumeration budget is shared across all deepening rounds.
pub fn exact_min_max_degree(i: &Instance, lim: &OracleLimits) -> Result<Solution, OracleError> {
    lim.admit(i)?;
    if i.commodities().iter().all(|c| c.source == c.sink) {
        return Ok(Solution::from_arcs(i.node_count(), core::iter::empty()));
    }
    // The zero-mask assignment routes every commodity directly, so its
    // degree bounds the optimum and the deepening loop always terminates.
    let mut direct: BTreeMap<u32, alloc::collections::BTreeSet<u32>> = BTreeMap::new();
    for c in i.commodities() {
        if c.source != c.sink {
            direct.entry(c.source).or_default().insert(c.sink);
        }
    }
    let direct_value = direct.values().map(|s| s.len() as u32).max().unwrap_or(0);
    let mut spent = 0u64;
    for c in 1..=direct_value {
        let mut search = StopSetSearch::new(i, lim, true)?;
        search.cap = Some(c);
        search.counter = spent;
        search.recurse(0, 0);
        spent = search.counter;
        if search.exhausted_budget {
            return Err(OracleError::LimitsExceeded(format!(
                "enumeration budget of {} expansions exhausted",
                lim.max_enumeration
            )));
        }
        if search.done {
            return Ok(Solution::from_arcs(
                i.node_count(),
                search.best_arcs.iter().copied(),
            ));
        }
    }
    unreachable!("the capped search succeeds at the direct-routing value")
}

/// Runs the production search and a full enumeration side by side;
/// `Ok(true)` iff both return the same objective value and arc set.
/// Intended for small instances — the full enumeration obeys
/// `max_enumeration` too.
pub fn self_check(i: &Instance, lim: &OracleLimits) -> Result<bool, OracleError> {
    let deepened = exact_min_max_degree(i, lim)?;
    let full = run_stop_set_search(i, lim, false)?;
    Ok(deepened.max_out_degree() == full.max_out_degree() && deepened.arcs() == full.arcs())
}

/// Every node set that induces a connected subtree of the underlying tree,
/// sizes 1 through `max_size`, each set ascending, in deterministic order
/// (roots ascending, then depth-first extension).
///
/// # Panics
///
/// Panics on instances with more than 128 nodes; this is a desk-scale
/// enumeration (the count grows exponentially).
pub fn enumerate_connected_subtrees(i: &Instance, max_size: u32) -> Vec<Vec<u32>> {
    assert!(
        i.node_count() <= 128,
        "connected-subtree enumeration is capped at 128 nodes"
    );
    let n = i.node_count();
    let mut adj = vec![Vec::new(); n];
    for a in i.arcs() {
        adj[a.tail as usize].push(a.head);
        adj[a.head as usize].push(a.tail);
    }
    for l in &mut adj {
        l.sort_unstable();
    }
    let mut out = Vec::new();
    if max_size == 0 {
        return out;
    }
    // Each set is generated once, from its minimum node: extensions only
    // ever add nodes larger than the root, and the `seen` mask keeps a
    // node from entering the extension list twice along one branch.
    for root in 0..n as u32 {
        let ext: Vec<u32> = adj[root as usize]
            .iter()
            .copied()
            .filter(|&w| w > root)
            .collect();
        let seen = ext
            .iter()
            .fold(1u128 << root, |m, &w| m | (1u128 << w));
        let mut current = vec![root];
        extend_subtree(&adj, root, &mut current, &ext, seen, max_size as usize, &mut out);
    }
    out
}

fn extend_subtree(
    adj: &[Vec<u32>],
    root: u32,
    current: &mut Vec<u32>,
    ext: &[u32],
    seen: u128,
    max_size: usize,
    out: &mut Vec<Vec<u32>>,
) {
    let mut sorted = current.clone();
    sorted.sort_unstable();
    out.push(sorted);
    if current.len() == max_size {
        return;
    }
    for (idx, &c) in ext.iter().enumerate() {
        let mut new_seen = seen;
        let mut new_ext: Vec<u32> = ext[idx + 1..].to_vec();
        for &nb in &adj[c as usize] {
            if nb > root && new_seen & (1u128 << nb) == 0 {
                new_seen |= 1u128 << nb;
                new_ext.push(nb);
            }
        }
        current.push(c);
        extend_subtree(adj, root, current, &new_ext, new_seen, max_size, out);
        current.pop();
    }
}

/// Result of [`max_witness`]: the best certificate found and the best value
/// of the source-oblivious bound over the same witness sets.
#[derive(Debug, Clone)]
pub struct MaxWitnessReport {
    /// Strongest source-aware certificate over all connected witness sets.
    pub best: WitnessCertificate,
    /// Maximum of the source-oblivious bound.
    pub weak_max: u32,
}

/// Exhaustively maximizes the witness bound over all connected node sets of
/// size at most `max_size` (with the best commodity selection per set). The
/// enumeration budget counts node sets.
pub fn max_witness(
    i: &Instance,
    lim: &OracleLimits,
    max_size: u32,
) -> Result<MaxWitnessReport, OracleError> {
    lim.admit(i)?;
    if !i.is_tree() {
        return Err(OracleError::NotATree);
    }
    let sets = enumerate_connected_subtrees(i, max_size.min(i.node_count() as u32));
    if sets.len() as u64 > lim.max_enumeration {
        return Err(OracleError::LimitsExceeded(format!(
            "{} witness sets exceed the enumeration budget of {}",
            sets.len(),
            lim.max_enumeration
        )));
    }
    let mut best: Option<WitnessCertificate> = None;
    let mut weak_max = 0u32;
    for w in &sets {
        let selection = best_commodities_for(i, w);
        if selection.is_empty() {
            continue;
        }
        let value = eval_lb(i, w, &selection);
        if value > best.as_ref().map_or(0, |b| b.value) {
            best = Some(WitnessCertificate {
                kind: CertificateKind::Lb,
                value,
                witness_nodes: w.clone(),
                commodities: selection.clone(),
            });
        }
        // The source-oblivious bound wants the largest selection, not the
        // one with the fewest sources: one commodity per boundary arc.
        let mut arcs: Vec<Arc> = selection
            .iter()
            .flat_map(|&k| crate::witness::commodity_cut(i, w, k as usize))
            .collect();
        arcs.sort_unstable();
        arcs.dedup();
        if !arcs.is_empty() {
            let wv = (arcs.len() as u64).div_ceil(w.len() as u64) as u32;
            weak_max = weak_max.max(wv);
        }
    }
    let best = best.ok_or_else(|| {
        OracleError::LimitsExceeded("no valid witness found (no commodities?)".into())
    })?;
    Ok(MaxWitnessReport { best, weak_max })
}

/// Parameters for [`gap_search`].
#[derive(Debug, Clone)]
pub struct GapSearchParams {
    /// Shape family to sample from.
    pub shape: RandomShape,
    /// Node counts are drawn from `4..=max_nodes`.
    pub max_nodes: u32,
    /// Sources per instance.
    pub source_count: u32,
    /// Commodity density in `(0, 1]`.
    pub density: f64,
    /// Master seed; the whole search is a pure function of it.
    pub seed: u64,
    /// Number of instances to try.
    pub budget: u64,
}

/// Outcome of [`gap_search`].
// One value exists per search, so boxing the found instance would buy
// nothing but indirection for every consumer.
#[allow(clippy::large_enum_variant)]
#[derive(Debug, Clone)]
pub enum GapSearchOutcome {
    /// An instance whose optimum strictly exceeds its best witness bound.
    Found {
        /// The gap instance.
        instance: Instance,
        /// Exact optimum.
        optimum: u32,
        /// Best witness bound over all connected witness sets.
        best_bound: u32,
        /// The certificate achieving `best_bound`.
        certificate: WitnessCertificate,
        /// Which attempt (0-based) produced it.
        attempt: u64,
    },
    /// No gap instance within the budget.
    Exhausted {
        /// Instances actually examined (excludes invalid parameter draws).
        examined: u64,
    },
}

/// Seeded search for instances where the strongest witness bound is
/// strictly below the optimum. Attempts draw a node count and an instance
/// seed from a deterministic stream; invalid parameter draws and oracle
/// timeouts are skipped. Returns the first gap instance, or `Exhausted`.
pub fn gap_search(
    params: &GapSearchParams,
    lim: &OracleLimits,
) -> Result<GapSearchOutcome, OracleError> {
    lim.validate()?;
    let mut master = ChaCha8Rng::seed_from_u64(params.seed);
    let mut examined = 0u64;
    for attempt in 0..params.budget {
        let n = master.gen_range(4..=params.max_nodes.max(4));
        let inst_seed = master.next_u64();
        let inst = match random_instance(
            params.shape,
            n,
            params.source_count,
            params.density,
            inst_seed,
        ) {
            Ok(i) => i,
            Err(GeneratorError::InfeasibleParams(_)) => continue,
            Err(_) => continue,
        };
        let optimum = match exact_min_max_degree(&inst, lim) {
            Ok(s) => s.max_out_degree(),
            Err(OracleError::LimitsExceeded(_)) => continue,
            Err(e) => return Err(e),
        };
        let report = match max_witness(&inst, lim, inst.node_count() as u32) {
            Ok(r) => r,
            Err(OracleError::LimitsExceeded(_)) => continue,
            Err(e) => return Err(e),
        };
        examined += 1;
        if optimum > report.best.value {
            return Ok(GapSearchOutcome::Found {
                instance: inst,
                optimum,
                best_bound: report.best.value,
                certificate: report.best,
                attempt,
            });
        }
    }
    Ok(GapSearchOutcome::Exhausted { examined })
}
