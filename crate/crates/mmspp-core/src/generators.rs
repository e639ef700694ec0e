//! Instance generators: seeded random families and structured reductions.
//!
//! Everything here is deterministic — a generator's output is a pure
//! function of its parameters (random families additionally of their seed),
//! so batch producers can parallelize by handing out distinct seeds and
//! still reproduce any instance later. All generators emit instances in
//! normalized form: construction output passes validation and
//! [`crate::Instance::normalize`] leaves it unchanged.
//!
//! The two reduction generators encode decision problems into degree
//! thresholds:
//!
//! - [`from_hitting_set`]: a hitting-set input has a hitting set of size
//!   `≤ b` iff the produced star instance admits a solution with maximum
//!   out-degree `≤ c` (the returned threshold).
//! - [`broom_from_svbp`]: a signed-weight list can be partitioned into
//!   consecutive parts with sums `≤ 1` iff the produced broom instance
//!   admits a solution with maximum out-degree `≤ T`. Instance size grows
//!   with the weight magnitudes, so keep desk-scale weights.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::GeneratorError;
use crate::instance::{Arc, Commodity, Instance};

/// Shape families for [`random_instance`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RandomShape {
    /// Out-tree with every commodity rooted at the tree root.
    SingleSourceTree,
    /// Out-tree with several internal sources.
    OutTree,
    /// Hub node with source leaves pointing in and sink leaves pointed at.
    Star,
    /// Random tree with random arc orientations.
    Tree,
}

impl RandomShape {
    /// Stable textual name (matches the CLI's `--shape` values).
    pub fn name(self) -> &'static str {
        match self {
            RandomShape::SingleSourceTree => "single-source-tree",
            RandomShape::OutTree => "out-tree",
            RandomShape::Star => "star",
            RandomShape::Tree => "tree",
        }
    }

    /// Inverse of [`RandomShape::name`].
    pub fn from_name(s: &str) -> Option<Self> {
        Some(match s {
            "single-source-tree" => RandomShape::SingleSourceTree,
            "out-tree" => RandomShape::OutTree,
            "star" => RandomShape::Star,
            "tree" => RandomShape::Tree,
            _ => return None,
        })
    }
}

fn index_names(prefix: &str, n: u32) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

/// Draws `count` distinct values from `pool` (partial Fisher–Yates),
/// returning them ascending.
fn sample_distinct(rng: &mut ChaCha8Rng, pool: &mut [u32], count: usize) -> Vec<u32> {
    debug_assert!(count <= pool.len());
    for j in 0..count {
        let pick = rng.gen_range(j..pool.len());
        pool.swap(j, pick);
    }
    let mut out: Vec<u32> = pool[..count].to_vec();
    out.sort_unstable();
    out
}

/// Seeded random instance of the requested shape. `n` is the node count
/// before normalization (sink-less leaves are pruned from the output, so
/// the final count can be smaller). Commodities are sampled independently
/// with probability `density` from the valid (source, descendant) pairs;
/// every source is guaranteed at least one commodity.
///
/// Errors on parameter combinations the draw cannot satisfy (too few
/// internal nodes for the requested sources, density outside `(0, 1]`,
/// `n < 2`, ...): callers sweeping seeds should skip those seeds rather
/// than retry, to stay reproducible.
pub fn random_instance(
    shape: RandomShape,
    n: u32,
    source_count: u32,
    density: f64,
    seed: u64,
) -> Result<Instance, GeneratorError> {
    if !(density > 0.0 && density <= 1.0) {
        return Err(GeneratorError::InvalidInput(format!(
            "density must be in (0, 1], got {density}"
        )));
    }
    if n < 2 {
        return Err(GeneratorError::InfeasibleParams(
            "need at least two nodes".to_string(),
        ));
    }
    if source_count == 0 {
        return Err(GeneratorError::InfeasibleParams(
            "need at least one source".to_string(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match shape {
        RandomShape::SingleSourceTree => {
            if source_count != 1 {
                return Err(GeneratorError::InfeasibleParams(
                    "single-source shape takes exactly one source".to_string(),
                ));
            }
            random_rooted(&mut rng, n, 1, density, false)
        }
        RandomShape::OutTree => random_rooted(&mut rng, n, source_count, density, true),
        RandomShape::Star => random_star(&mut rng, n, source_count, density),
        RandomShape::Tree => random_tree(&mut rng, n, source_count, density),
    }
}

/// Uniform random recursive tree: each node after the first attaches to a
/// uniformly chosen earlier node.
fn recursive_tree(rng: &mut ChaCha8Rng, n: u32) -> Vec<u32> {
    (1..n).map(|i| rng.gen_range(0..i)).collect()
}

fn random_rooted(
    rng: &mut ChaCha8Rng,
    n: u32,
    source_count: u32,
    density: f64,
    spread_sources: bool,
) -> Result<Instance, GeneratorError> {
    let parents = recursive_tree(rng, n);
    let arcs: Vec<Arc> = parents
        .iter()
        .enumerate()
        .map(|(i, &p)| Arc::new(p, i as u32 + 1))
        .collect();
    let mut children = vec![Vec::new(); n as usize];
    for a in &arcs {
        children[a.tail as usize].push(a.head);
    }
    let sources = if spread_sources {
        let mut internal: Vec<u32> = (0..n).filter(|&u| !children[u as usize].is_empty()).collect();
        if internal.len() < source_count as usize {
            return Err(GeneratorError::InfeasibleParams(format!(
                "drew a tree with {} internal nodes, need {source_count} sources",
                internal.len()
            )));
        }
        sample_distinct(rng, &mut internal, source_count as usize)
    } else {
        vec![0]
    };

    let mut commodities = Vec::new();
    for &s in &sources {
        let mut desc = Vec::new();
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &w in &children[u as usize] {
                desc.push(w);
                stack.push(w);
            }
        }
        desc.sort_unstable();
        let before = commodities.len();
        for &d in &desc {
            if rng.gen_bool(density) {
                commodities.push(Commodity::new(s, d));
            }
        }
        if commodities.len() == before {
            let d = desc[rng.gen_range(0..desc.len())];
            commodities.push(Commodity::new(s, d));
        }
    }

    finish(index_names("n", n), arcs, commodities)
}

fn random_star(
    rng: &mut ChaCha8Rng,
    n: u32,
    source_count: u32,
    density: f64,
) -> Result<Instance, GeneratorError> {
    if n < 3 || source_count > n - 2 {
        return Err(GeneratorError::InfeasibleParams(format!(
            "star with {n} nodes cannot host {source_count} sources and a sink"
        )));
    }
    let mut leaves: Vec<u32> = (1..n).collect();
    let sources = sample_distinct(rng, &mut leaves, source_count as usize);
    let source_set: BTreeSet<u32> = sources.iter().copied().collect();
    let sinks: Vec<u32> = (1..n).filter(|u| !source_set.contains(u)).collect();

    let mut arcs = Vec::new();
    for u in 1..n {
        if source_set.contains(&u) {
            arcs.push(Arc::new(u, 0));
        } else {
            arcs.push(Arc::new(0, u));
        }
    }
    let mut commodities = Vec::new();
    for &s in &sources {
        let before = commodities.len();
        for &t in &sinks {
            if rng.gen_bool(density) {
                commodities.push(Commodity::new(s, t));
            }
        }
        if commodities.len() == before {
            let t = sinks[rng.gen_range(0..sinks.len())];
            commodities.push(Commodity::new(s, t));
        }
    }
    finish(index_names("n", n), arcs, commodities)
}

fn random_tree(
    rng: &mut ChaCha8Rng,
    n: u32,
    source_count: u32,
    density: f64,
) -> Result<Instance, GeneratorError> {
    let parents = recursive_tree(rng, n);
    let arcs: Vec<Arc> = parents
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let child = i as u32 + 1;
            if rng.gen_bool(0.5) {
                Arc::new(p, child)
            } else {
                Arc::new(child, p)
            }
        })
        .collect();
    let mut out_adj = vec![Vec::new(); n as usize];
    for a in &arcs {
        out_adj[a.tail as usize].push(a.head);
    }
    let mut candidates: Vec<u32> = (0..n).filter(|&u| !out_adj[u as usize].is_empty()).collect();
    if candidates.len() < source_count as usize {
        return Err(GeneratorError::InfeasibleParams(format!(
            "orientation left {} candidate sources, need {source_count}",
            candidates.len()
        )));
    }
    let sources = sample_distinct(rng, &mut candidates, source_count as usize);

    let mut commodities = Vec::new();
    for &s in &sources {
        let mut reach = Vec::new();
        let mut seen = vec![false; n as usize];
        seen[s as usize] = true;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &w in &out_adj[u as usize] {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    reach.push(w);
                    stack.push(w);
                }
            }
        }
        reach.sort_unstable();
        let before = commodities.len();
        for &d in &reach {
            if rng.gen_bool(density) {
                commodities.push(Commodity::new(s, d));
            }
        }
        if commodities.len() == before {
            let d = reach[rng.gen_range(0..reach.len())];
            commodities.push(Commodity::new(s, d));
        }
    }
    finish(index_names("n", n), arcs, commodities)
}

/// Validate, then normalize (prunes sink-less leaves); generators emit the
/// normalized instance.
fn finish(
    names: Vec<String>,
    arcs: Vec<Arc>,
    commodities: Vec<Commodity>,
) -> Result<Instance, GeneratorError> {
    let inst = Instance::new(names, arcs, commodities)
        .map_err(|e| GeneratorError::InvalidInput(e.to_string()))?;
    let inst = inst
        .normalize()
        .map_err(|e| GeneratorError::InvalidInput(e.to_string()))?;
    debug_assert!(inst.is_normalized());
    Ok(inst)
}

/// A hitting-set decision input: does some set of at most `budget` elements
/// intersect every listed set?
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HittingSetInput {
    /// The sets to hit; element values are arbitrary positive integers.
    pub sets: Vec<Vec<u32>>,
    /// Maximum hitting-set size.
    pub budget: u32,
}

impl HittingSetInput {
    /// Validates: at least one set, no empty set, no duplicate element
    /// within a set, positive elements and budget.
    pub fn new(sets: Vec<Vec<u32>>, budget: u32) -> Result<Self, GeneratorError> {
        if sets.is_empty() {
            return Err(GeneratorError::InvalidInput("no sets given".to_string()));
        }
        if budget == 0 {
            return Err(GeneratorError::InvalidInput("budget must be positive".to_string()));
        }
        for (i, s) in sets.iter().enumerate() {
            if s.is_empty() {
                return Err(GeneratorError::InvalidInput(format!("set {} is empty", i + 1)));
            }
            let mut seen = BTreeSet::new();
            for &e in s {
                if e == 0 {
                    return Err(GeneratorError::InvalidInput(
                        "element values must be positive".to_string(),
                    ));
                }
                if !seen.insert(e) {
                    return Err(GeneratorError::InvalidInput(format!(
                        "duplicate element {e} in set {}",
                        i + 1
                    )));
                }
            }
        }
        Ok(HittingSetInput { sets, budget })
    }

    /// Distinct elements across all sets, ascending.
    pub fn elements(&self) -> Vec<u32> {
        let set: BTreeSet<u32> = self.sets.iter().flatten().copied().collect();
        set.into_iter().collect()
    }

    /// Brute-force decision: is there a hitting set of size ≤ budget?
    /// Exponential in the element count; desk scale only.
    pub fn decide_brute_force(&self) -> bool {
        let elems = self.elements();
        let m = elems.len();
        assert!(m <= 20, "brute-force hitting set capped at 20 elements");
        for mask in 0u32..(1u32 << m) {
            if mask.count_ones() > self.budget {
                continue;
            }
            let chosen: BTreeSet<u32> = (0..m)
                .filter(|&j| mask & (1 << j) != 0)
                .map(|j| elems[j])
                .collect();
            if self
                .sets
                .iter()
                .all(|s| s.iter().any(|e| chosen.contains(e)))
            {
                return true;
            }
        }
        false
    }
}

/// Encodes a hitting-set input as a star instance whose optimum crosses
/// the returned threshold `c = max(budget, max set size)` exactly at the
/// decision boundary: the input is YES iff the instance admits a solution
/// with maximum out-degree ≤ `c`.
///
/// Per set `i` there is a source `s_i` with `c + 1` commodities: one per
/// element of the set, one to the hub, and `c − |S_i|` to private filler
/// sinks. The hub additionally feeds `c − budget` filler sinks of its own.
pub fn from_hitting_set(hs: &HittingSetInput) -> (Instance, u32) {
    let elems = hs.elements();
    let max_set = hs.sets.iter().map(|s| s.len() as u32).max().unwrap_or(0);
    let c = hs.budget.max(max_set);

    let mut names: Vec<String> = Vec::new();
    for i in 1..=hs.sets.len() {
        names.push(format!("s{i}"));
    }
    names.push("v".to_string());
    let v = hs.sets.len() as u32;
    let mut sink_of_elem = alloc::collections::BTreeMap::new();
    for &e in &elems {
        sink_of_elem.insert(e, names.len() as u32);
        names.push(format!("t{e}"));
    }
    let mut arcs: Vec<Arc> = (0..hs.sets.len() as u32).map(|i| Arc::new(i, v)).collect();
    for &e in &elems {
        arcs.push(Arc::new(v, sink_of_elem[&e]));
    }

    let mut commodities = Vec::new();
    for (i, set) in hs.sets.iter().enumerate() {
        let s = i as u32;
        let mut sorted = set.clone();
        sorted.sort_unstable();
        for &e in &sorted {
            commodities.push(Commodity::new(s, sink_of_elem[&e]));
        }
        commodities.push(Commodity::new(s, v));
        for j in 0..(c - set.len() as u32) {
            let filler = names.len() as u32;
            names.push(format!("u{}_{}", i + 1, j + 1));
            arcs.push(Arc::new(v, filler));
            commodities.push(Commodity::new(s, filler));
        }
        debug_assert_eq!(
            commodities.iter().filter(|cm| cm.source == s).count() as u32,
            c + 1
        );
    }
    for j in 0..(c - hs.budget) {
        let filler = names.len() as u32;
        names.push(format!("w{}", j + 1));
        arcs.push(Arc::new(v, filler));
        commodities.push(Commodity::new(v, filler));
    }

    let inst = Instance::new(names, arcs, commodities).expect("reduction builds a valid star");
    debug_assert!(inst.is_normalized());
    (inst, c)
}

/// A signed-weight partition input: can `weights` be split into consecutive
/// groups each summing to at most 1? (`target` is the degree threshold the
/// broom encodes the question into; must be at least 2.)
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SvbpInput {
    /// The signed weights, in sequence order.
    pub weights: Vec<i64>,
    /// Degree threshold for the encoding.
    pub target: u32,
}

impl SvbpInput {
    /// Validates: non-empty weights, target ≥ 2.
    pub fn new(weights: Vec<i64>, target: u32) -> Result<Self, GeneratorError> {
        if weights.is_empty() {
            return Err(GeneratorError::InvalidInput("no weights given".to_string()));
        }
        if target < 2 {
            return Err(GeneratorError::InvalidInput(
                "target must be at least 2".to_string(),
            ));
        }
        Ok(SvbpInput { weights, target })
    }

    /// The weights that survive the 0/1 filter, sorted descending — the
    /// groups the broom is built from.
    pub fn usable_weights(&self) -> Vec<i64> {
        let mut w: Vec<i64> = self
            .weights
            .iter()
            .copied()
            .filter(|&w| w != 0 && w != 1)
            .collect();
        w.sort_unstable_by(|a, b| b.cmp(a));
        w
    }

    /// Brute-force decision on the *filtered, sorted* weights: is there a
    /// partition into consecutive parts with every part sum ≤ 1?
    /// Exponential; desk scale only.
    pub fn decide_brute_force(&self) -> bool {
        let w = self.usable_weights();
        if w.is_empty() {
            return true;
        }
        let m = w.len();
        assert!(m <= 20, "brute-force partition capped at 20 weights");
        // Bit j set = a part boundary after position j.
        'outer: for mask in 0u32..(1u32 << (m - 1)) {
            let mut sum = 0i64;
            for (j, &wj) in w.iter().enumerate() {
                sum += wj;
                let boundary = j + 1 == m || mask & (1 << j) != 0;
                if boundary {
                    if sum > 1 {
                        continue 'outer;
                    }
                    sum = 0;
                }
            }
            return true;
        }
        false
    }
}

/// Encodes a signed-weight partition input as a broom instance: a handle
/// dipath of source groups with all sinks hanging from the final handle
/// node. A valid partition (consecutive parts, sums ≤ 1) exists iff the
/// instance admits a solution with maximum out-degree ≤ `target`.
///
/// Group `i` (weights filtered of 0/1 values and sorted descending) gets
/// `α_i + 1` sources and `β_i + target − 1` sinks, where `α_i` is the
/// smallest positive integer with `w_i + α_i(target − 1) ≥ 0` and
/// `β_i = w_i + α_i(target − 1)`.
///
/// Errors when no weight survives the 0/1 filter (the question is then
/// trivially YES and there is no broom to build).
pub fn broom_from_svbp(input: &SvbpInput) -> Result<Instance, GeneratorError> {
    let weights = input.usable_weights();
    if weights.is_empty() {
        return Err(GeneratorError::InvalidInput(
            "all weights are 0/1; the partition question is trivially YES".to_string(),
        ));
    }
    let t = input.target as i64;

    struct Group {
        alpha: u32,
        beta: u32,
    }
    let groups: Vec<Group> = weights
        .iter()
        .map(|&w| {
            let alpha = if w >= 0 {
                1
            } else {
                let need = (-w + (t - 1) - 1) / (t - 1);
                need.max(1) as u32
            };
            let beta = w + alpha as i64 * (t - 1);
            debug_assert!(beta >= 0);
            Group {
                alpha,
                beta: beta as u32,
            }
        })
        .collect();

    let mut names = Vec::new();
    let mut arcs = Vec::new();
    let mut source_ids: Vec<Vec<u32>> = Vec::new();
    let mut prev: Option<u32> = None;
    for (i, g) in groups.iter().enumerate() {
        let mut ids = Vec::new();
        for j in 1..=(g.alpha + 1) {
            let id = names.len() as u32;
            names.push(format!("s{}_{}", i + 1, j));
            if let Some(p) = prev {
                arcs.push(Arc::new(p, id));
            }
            prev = Some(id);
            ids.push(id);
        }
        source_ids.push(ids);
    }
    let handle_end = prev.expect("at least one group");

    let mut sink_ids: Vec<Vec<u32>> = Vec::new();
    for (i, g) in groups.iter().enumerate() {
        let mut ids = Vec::new();
        for j in 1..=(g.beta + input.target - 1) {
            let id = names.len() as u32;
            names.push(format!("t{}_{}", i + 1, j));
            arcs.push(Arc::new(handle_end, id));
            ids.push(id);
        }
        debug_assert_eq!(ids.len() as u32, g.beta + input.target - 1);
        sink_ids.push(ids);
    }

    let mut commodities = Vec::new();
    for (i, g) in groups.iter().enumerate() {
        let first = source_ids[i][0];
        let last = source_ids[i][g.alpha as usize];
        let sinks = &sink_ids[i];
        for &tk in &sinks[..g.beta as usize] {
            commodities.push(Commodity::new(first, tk));
        }
        for &tk in &sinks[g.beta as usize..] {
            commodities.push(Commodity::new(last, tk));
        }
        let final_sink = *sinks.last().expect("target >= 2 gives every group a sink");
        for &sj in &source_ids[i][..g.alpha as usize] {
            commodities.push(Commodity::new(sj, final_sink));
        }
    }

    let inst = Instance::new(names, arcs, commodities).expect("broom construction is valid");
    debug_assert!(inst.is_normalized());
    Ok(inst)
}

/// The star family separating the witness bound from the optimum: `2n`
/// sinks, one source per size-`n` sink subset (lexicographic order), hub
/// `v`. Direct routing costs exactly `n`, which is optimal, while the best
/// witness bound stays near `2n/3`.
///
/// Errors when `n` is 0 or exceeds 6 (the source count is a binomial
/// coefficient).
pub fn star_gap(n: u32) -> Result<Instance, GeneratorError> {
    if n == 0 {
        return Err(GeneratorError::InvalidInput("n must be positive".to_string()));
    }
    if n > 6 {
        return Err(GeneratorError::TooLarge(format!(
            "star gap family is capped at n = 6, got {n}"
        )));
    }
    let sink_count = 2 * n;
    let mut names = vec!["v".to_string()];
    for j in 1..=sink_count {
        names.push(format!("t{j}"));
    }
    let subsets = lexicographic_subsets(sink_count, n);
    let mut arcs = Vec::new();
    let mut commodities = Vec::new();
    for (i, subset) in subsets.iter().enumerate() {
        let s = names.len() as u32;
        names.push(format!("s{}", i + 1));
        arcs.push(Arc::new(s, 0));
        for &j in subset {
            commodities.push(Commodity::new(s, j));
        }
    }
    for j in 1..=sink_count {
        arcs.push(Arc::new(0, j));
    }
    let inst = Instance::new(names, arcs, commodities).expect("star family is valid");
    debug_assert!(inst.is_normalized());
    Ok(inst)
}

/// All size-`k` subsets of `{1, ..., m}` in lexicographic order (as sink
/// node indices, which coincide with element values here).
fn lexicographic_subsets(m: u32, k: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur: Vec<u32> = (1..=k).collect();
    loop {
        out.push(cur.clone());
        // Rightmost position that can still advance.
        let mut i = k as i64 - 1;
        while i >= 0 && cur[i as usize] == m - (k - 1 - i as u32) {
            i -= 1;
        }
        if i < 0 {
            break;
        }
        let i = i as usize;
        cur[i] += 1;
        for j in i + 1..k as usize {
            cur[j] = cur[j - 1] + 1;
        }
    }
    out
}
