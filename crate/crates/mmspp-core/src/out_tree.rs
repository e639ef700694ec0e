//! Additive-1 solver for multi-source out-tree instances.
//!
//! For a fixed degree target `T` the solver repeatedly picks a deepest
//! "claw" (an internal node all of whose children are leaves), keeps the
//! `T` child arcs whose blocking sources sit nearest the claw, re-hangs the
//! remaining child arcs on the claw's parent, and recurses on the smaller
//! instance ([`contract`]). A success lifts back by re-adding the kept
//! arcs; a failure lifts a weak lower-bound certificate instead
//! ([`lift_witness`]), so every infeasibility claim is machine-checkable.
//!
//! Scanning targets upward ([`solve`]) yields a solution with maximum
//! out-degree at most one above the optimum, plus the failure certificate
//! from the last infeasible target proving it.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::SolveError;
use crate::instance::{Arc, Commodity, Instance, Solution};
use crate::report::{SolveReport, SolveStats, SolveStatus};
use crate::witness::{commodity_cut, eval_lb_weak, CertificateKind, WitnessCertificate};

/// Outcome of a fixed-target run: a solution within the bound, or a weak
/// lower-bound certificate with value ≥ the target proving none exists at
/// one degree lower than the certified value.
#[derive(Debug, Clone)]
pub enum OutTreeOutcome {
    /// A feasible solution with maximum out-degree ≤ the target.
    Feasible(Solution),
    /// No solution within the target; the certificate's weak bound is ≥
    /// the target.
    Infeasible(WitnessCertificate),
}

/// Everything needed to replay or invert one claw contraction.
#[derive(Debug, Clone)]
pub struct ContractionRecord {
    /// The contracted claw node (parent-instance index).
    pub node: u32,
    /// Its parent in the network.
    pub parent: u32,
    /// Child arcs the claw keeps — re-added when lifting a solution.
    pub kept_arcs: Vec<Arc>,
    /// Blocking source of each kept arc, aligned with `kept_arcs`.
    pub kept_blocking: Vec<u32>,
    /// Child arcs whose heads were re-hung on the parent.
    pub moved_arcs: Vec<Arc>,
    /// The replacement arcs (parent → re-hung head).
    pub replacement_arcs: Vec<Arc>,
    /// Contracted-instance node index → parent-instance node index.
    pub node_map: Vec<u32>,
    /// Contracted-instance commodity index → parent-instance commodity
    /// index (the first parent commodity mapping onto it).
    pub commodity_map: Vec<u32>,
    /// Out-degrees in the contracted instance (for leaf detection when
    /// lifting witnesses without the instance at hand).
    pub child_out_degree: Vec<u32>,
}

impl ContractionRecord {
    /// Where a parent-instance sink ends up after the contraction: kept
    /// heads collapse onto the claw node, everything else is unchanged.
    pub fn remapped_sink(&self, t: u32) -> u32 {
        if self.kept_arcs.iter().any(|a| a.head == t) {
            self.node
        } else {
            t
        }
    }
}

fn require_out_tree(i: &Instance) -> Result<(), SolveError> {
    if !i.is_out_tree() {
        return Err(SolveError::WrongShape {
            expected: "out-tree",
            found: i.classify().to_string(),
        });
    }
    if !i.is_normalized() {
        return Err(SolveError::NotNormalized);
    }
    Ok(())
}

/// `u` is `w` or one of `w`'s ancestors.
fn ancestor_or_equal(i: &Instance, u: u32, w: u32) -> bool {
    let du = i.tree_depth(u).expect("tree instance");
    let mut x = w;
    let mut dx = i.tree_depth(x).expect("tree instance");
    while dx > du {
        x = i.tree_parent(x).expect("deeper node has a parent");
        dx -= 1;
    }
    x == u
}

/// The commodity sources whose network path uses arc `a`, ascending.
/// On an out-tree that is every source above the arc whose sink lies at or
/// below it. Empty when `a` carries no commodity (or on non-trees).
pub fn sources_requiring(i: &Instance, a: Arc) -> Vec<u32> {
    if !i.is_out_tree() {
        return Vec::new();
    }
    debug_assert!(i.arcs().contains(&a), "arc must belong to the network");
    let set: BTreeSet<u32> = i
        .commodities()
        .iter()
        .filter(|c| ancestor_or_equal(i, c.source, a.tail) && ancestor_or_equal(i, a.head, c.sink))
        .map(|c| c.source)
        .collect();
    set.into_iter().collect()
}

/// The deepest source whose path uses `a` — the source that pins the arc
/// closest to its tail. `None` when no commodity uses `a`.
pub fn blocking_source(i: &Instance, a: Arc) -> Option<u32> {
    sources_requiring(i, a)
        .into_iter()
        .max_by_key(|&s| i.tree_depth(s).expect("tree instance"))
}

/// Partitions a claw's child arcs for target `t`: the kept part holds the
/// `min(t, degree)` arcs whose blocking sources are nearest the claw (ties
/// by head index); the rest will be re-hung on the claw's parent.
pub fn split_arcs(i: &Instance, v: u32, t: u32) -> Result<(Vec<Arc>, Vec<Arc>), SolveError> {
    require_out_tree(i)?;
    if t == 0 {
        return Err(SolveError::BadTarget(t));
    }
    let dv = i.tree_depth(v).expect("tree instance");
    let mut keyed: Vec<(u32, u32)> = Vec::new();
    for a in i.arcs().iter().filter(|a| a.tail == v) {
        let Some(b) = blocking_source(i, *a) else {
            // A child arc no commodity uses contradicts normalization.
            return Err(SolveError::NotNormalized);
        };
        let dist = dv - i.tree_depth(b).expect("tree instance");
        keyed.push((dist, a.head));
    }
    keyed.sort_unstable();
    let cut = keyed.len().min(t as usize);
    let kept = keyed[..cut].iter().map(|&(_, h)| Arc::new(v, h)).collect();
    let moved = keyed[cut..].iter().map(|&(_, h)| Arc::new(v, h)).collect();
    Ok((kept, moved))
}

/// Contracts claw `v` for target `t`: deletes the claw's child arcs,
/// re-hangs the non-kept heads on the claw's parent, redirects commodities
/// sinking at kept heads to sink at `v` itself (dropping the now-trivial
/// ones sourced at `v` and merging duplicates), removes the kept heads,
/// and prunes any nodes left without outgoing arcs or commodities.
///
/// Errors with [`SolveError::BadTarget`] when `v` sources more than `t`
/// commodities (the claw alone then refutes the target) and with
/// [`SolveError::ContractionDissolved`] when no commodity would survive
/// (the claw's kept arcs already solve such an instance).
pub fn contract(i: &Instance, v: u32, t: u32) -> Result<(Instance, ContractionRecord), SolveError> {
    require_out_tree(i)?;
    let parent = i
        .tree_parent(v)
        .expect("cannot contract the root; the single-claw base case handles it");
    let children: Vec<u32> = i.arcs().iter().filter(|a| a.tail == v).map(|a| a.head).collect();
    assert!(
        !children.is_empty()
            && children
                .iter()
                .all(|&w| i.arcs().iter().all(|a| a.tail != w)),
        "contraction target must be a claw (all children leaves)"
    );
    if i.sinks_of(v).len() > t as usize {
        return Err(SolveError::BadTarget(t));
    }
    let (kept_arcs, moved_arcs) = split_arcs(i, v, t)?;
    let kept_blocking: Vec<u32> = kept_arcs
        .iter()
        .map(|&a| blocking_source(i, a).expect("split verified every child arc is used"))
        .collect();
    let kept_heads: BTreeSet<u32> = kept_arcs.iter().map(|a| a.head).collect();
    let replacement_arcs: Vec<Arc> = moved_arcs
        .iter()
        .map(|a| Arc::new(parent, a.head))
        .collect();

    // Redirect sinks, drop trivial commodities, merge duplicates.
    let mut seen = BTreeSet::new();
    let mut kept_coms: Vec<(Commodity, u32)> = Vec::new();
    for (pk, c) in i.commodities().iter().enumerate() {
        let sink = if kept_heads.contains(&c.sink) { v } else { c.sink };
        if c.source == sink || !seen.insert((c.source, sink)) {
            continue;
        }
        kept_coms.push((Commodity::new(c.source, sink), pk as u32));
    }
    if kept_coms.is_empty() {
        return Err(SolveError::ContractionDissolved);
    }

    let n = i.node_count();
    let mut arcs: Vec<Arc> = i
        .arcs()
        .iter()
        .copied()
        .filter(|a| a.tail != v)
        .chain(replacement_arcs.iter().copied())
        .collect();
    let mut removed = vec![false; n];
    for &h in &kept_heads {
        removed[h as usize] = true;
    }
    debug_assert!(arcs
        .iter()
        .all(|a| !removed[a.tail as usize] && !removed[a.head as usize]));

    // Prune nodes with no outgoing arcs that no surviving commodity sinks
    // at, cascading upward.
    let needed: BTreeSet<u32> = kept_coms.iter().map(|(c, _)| c.sink).collect();
    let mut out_deg = vec![0u32; n];
    let mut in_tail = vec![u32::MAX; n];
    for a in &arcs {
        out_deg[a.tail as usize] += 1;
        in_tail[a.head as usize] = a.tail;
    }
    let mut queue: Vec<u32> = (0..n as u32)
        .filter(|&u| !removed[u as usize] && out_deg[u as usize] == 0 && !needed.contains(&u))
        .collect();
    while let Some(u) = queue.pop() {
        removed[u as usize] = true;
        let p = in_tail[u as usize];
        if p != u32::MAX {
            out_deg[p as usize] -= 1;
            if out_deg[p as usize] == 0 && !removed[p as usize] && !needed.contains(&p) {
                queue.push(p);
            }
        }
    }
    arcs.retain(|a| !removed[a.tail as usize] && !removed[a.head as usize]);

    let mut node_map = Vec::new();
    let mut to_child = vec![u32::MAX; n];
    let mut names = Vec::new();
    for u in 0..n as u32 {
        if !removed[u as usize] {
            to_child[u as usize] = node_map.len() as u32;
            node_map.push(u);
            names.push(String::from(i.name(u)));
        }
    }
    let child_arcs: Vec<Arc> = arcs
        .iter()
        .map(|a| Arc::new(to_child[a.tail as usize], to_child[a.head as usize]))
        .collect();
    let child_coms: Vec<Commodity> = kept_coms
        .iter()
        .map(|(c, _)| Commodity::new(to_child[c.source as usize], to_child[c.sink as usize]))
        .collect();
    let commodity_map: Vec<u32> = kept_coms.iter().map(|&(_, pk)| pk).collect();

    let child =
        Instance::new(names, child_arcs, child_coms).expect("contracted instance is valid");
    debug_assert!(child.is_out_tree());
    debug_assert!(child.is_normalized());
    let child_out_degree = child.out_degrees();

    Ok((
        child,
        ContractionRecord {
            node: v,
            parent,
            kept_arcs,
            kept_blocking,
            moved_arcs,
            replacement_arcs,
            node_map,
            commodity_map,
            child_out_degree,
        },
    ))
}

/// The deepest internal node all of whose children are leaves (ties by
/// lowest index). Every out-tree with at least one arc has one.
fn claw_node(i: &Instance) -> u32 {
    let out = i.out_degrees();
    let mut best: Option<(u32, core::cmp::Reverse<u32>)> = None;
    for u in 0..i.node_count() as u32 {
        if out[u as usize] == 0 {
            continue;
        }
        let all_leaves = i
            .arcs()
            .iter()
            .filter(|a| a.tail == u)
            .all(|a| out[a.head as usize] == 0);
        if all_leaves {
            let key = (i.tree_depth(u).expect("tree instance"), core::cmp::Reverse(u));
            if best.is_none_or(|b| key > b) {
                best = Some(key);
            }
        }
    }
    let (_, core::cmp::Reverse(u)) = best.expect("an out-tree always has a deepest claw");
    u
}

/// Certificate for "this node alone needs more than the target": the node
/// as witness, its own commodities as the commodity set.
fn single_node_certificate(i: &Instance, v: u32, commodities: Vec<u32>) -> WitnessCertificate {
    let witness_nodes = vec![v];
    let value = eval_lb_weak(i, &witness_nodes, &commodities);
    debug_assert!(value > 0);
    WitnessCertificate {
        kind: CertificateKind::LbWeak,
        value,
        witness_nodes,
        commodities,
    }
}

/// The cut of a parent-instance commodity along its *contracted* path,
/// expressed in parent coordinates: paths to re-hung heads detour through
/// the claw's parent; paths to redirected sinks stop at the claw.
fn contracted_cut(
    i: &Instance,
    rec: &ContractionRecord,
    in_w: &[bool],
    pk: u32,
) -> Vec<Arc> {
    let c = i.commodities()[pk as usize];
    let child_sink = rec.remapped_sink(c.sink);
    let nodes: Vec<u32> = if rec.moved_arcs.iter().any(|a| a.head == c.sink) {
        let mut nodes = i
            .path_nodes(c.source, rec.parent)
            .expect("source lies above the claw's parent");
        nodes.push(c.sink);
        nodes
    } else if child_sink == rec.node {
        i.path_nodes(c.source, rec.node)
            .expect("redirected commodity reaches the claw")
    } else {
        i.path_nodes(c.source, c.sink)
            .expect("commodity path exists")
    };
    nodes
        .windows(2)
        .filter(|w| in_w[w[0] as usize] && !in_w[w[1] as usize])
        .map(|w| Arc::new(w[0], w[1]))
        .collect()
}

/// Lifts a weak lower-bound certificate across one contraction, from the
/// contracted instance back to its parent `i`.
///
/// Leaf nodes are first pruned from the witness (they never contribute).
/// If every commodity's boundary cut is unchanged by the contraction the
/// certificate transfers verbatim; otherwise the claw node joins the
/// witness, the kept arcs contribute one commodity each (blocking source →
/// head), and commodities redirected to sink at the claw drop out. The
/// lifted weak bound stays at or above every target the inner bound
/// refuted: inner value ≥ t implies lifted value ≥ t.
pub fn lift_witness(
    inner: &WitnessCertificate,
    rec: &ContractionRecord,
    i: &Instance,
) -> Result<WitnessCertificate, SolveError> {
    let bad = |why: &str| SolveError::InvalidCertificate(String::from(why));
    if inner.kind != CertificateKind::LbWeak {
        return Err(bad("expected a weak lower-bound certificate"));
    }
    let child_n = rec.node_map.len() as u32;
    if inner.witness_nodes.iter().any(|&u| u >= child_n) {
        return Err(bad("witness node outside the contracted instance"));
    }
    if inner
        .commodities
        .iter()
        .any(|&k| k as usize >= rec.commodity_map.len())
    {
        return Err(bad("commodity index outside the contracted instance"));
    }

    let witness: BTreeSet<u32> = inner
        .witness_nodes
        .iter()
        .filter(|&&u| rec.child_out_degree[u as usize] > 0)
        .map(|&u| rec.node_map[u as usize])
        .collect();
    if witness.is_empty() {
        return Err(bad("witness contains only leaves"));
    }
    debug_assert!(!witness.contains(&rec.node));
    let ks: Vec<u32> = inner
        .commodities
        .iter()
        .map(|&k| rec.commodity_map[k as usize])
        .collect();

    let w_sorted: Vec<u32> = witness.iter().copied().collect();
    let mut in_w = vec![false; i.node_count()];
    for &u in &w_sorted {
        in_w[u as usize] = true;
    }
    let unchanged = ks.iter().all(|&pk| {
        contracted_cut(i, rec, &in_w, pk) == commodity_cut(i, &w_sorted, pk as usize)
    });

    let (nodes, coms) = if unchanged {
        (w_sorted, ks)
    } else {
        debug_assert!(witness.contains(&rec.parent));
        let mut nodes = w_sorted;
        nodes.push(rec.node);
        nodes.sort_unstable();

        // Commodities now sinking inside the witness drop out; the child
        // cuts of any such commodities coincide, so a valid inner
        // certificate contains at most one.
        let mut coms: Vec<u32> = ks
            .iter()
            .copied()
            .filter(|&pk| rec.remapped_sink(i.commodities()[pk as usize].sink) != rec.node)
            .collect();
        if ks.len() - coms.len() > 1 {
            return Err(bad("several commodities sink at the contracted node"));
        }
        let index_of: BTreeMap<(u32, u32), u32> = i
            .commodities()
            .iter()
            .enumerate()
            .map(|(pk, c)| ((c.source, c.sink), pk as u32))
            .collect();
        for (a, &b) in rec.kept_arcs.iter().zip(&rec.kept_blocking) {
            let pk = *index_of
                .get(&(b, a.head))
                .expect("a blocking source always owns a commodity to the arc head");
            coms.push(pk);
        }
        coms.sort_unstable();
        coms.dedup();
        (nodes, coms)
    };

    let value = eval_lb_weak(i, &nodes, &coms);
    if value == 0 {
        return Err(bad("lifted conditions do not hold"));
    }
    Ok(WitnessCertificate {
        kind: CertificateKind::LbWeak,
        value,
        witness_nodes: nodes,
        commodities: coms,
    })
}

/// Runs the fixed-target algorithm and also returns the contraction trail
/// (outermost first) for inspection.
pub fn solve_target_recorded(
    i: &Instance,
    t: u32,
) -> Result<(OutTreeOutcome, Vec<ContractionRecord>), SolveError> {
    require_out_tree(i)?;
    if t == 0 {
        return Err(SolveError::BadTarget(t));
    }

    let mut levels: Vec<Instance> = Vec::new();
    let mut records: Vec<ContractionRecord> = Vec::new();
    let mut outcome = loop {
        let cur = levels.last().unwrap_or(i);
        let out = cur.out_degrees();
        let internal = out.iter().filter(|&&d| d > 0).count();
        if internal == 1 {
            let r = (0..cur.node_count() as u32)
                .find(|&u| out[u as usize] > 0)
                .expect("counted one internal node");
            let leaves = cur.node_count() as u32 - 1;
            break if leaves <= t {
                OutTreeOutcome::Feasible(Solution::from_arcs(
                    cur.node_count(),
                    cur.arcs().iter().copied(),
                ))
            } else {
                let all: Vec<u32> = (0..cur.commodities().len() as u32).collect();
                OutTreeOutcome::Infeasible(single_node_certificate(cur, r, all))
            };
        }

        let v = claw_node(cur);
        let v_sourced: Vec<u32> = (0..cur.commodities().len() as u32)
            .filter(|&k| cur.commodities()[k as usize].source == v)
            .collect();
        if cur.sinks_of(v).len() > t as usize {
            break OutTreeOutcome::Infeasible(single_node_certificate(cur, v, v_sourced));
        }

        let (kept, _) = split_arcs(cur, v, t)?;
        let kept_heads: BTreeSet<u32> = kept.iter().map(|a| a.head).collect();
        if cur
            .commodities()
            .iter()
            .all(|c| c.source == v && kept_heads.contains(&c.sink))
        {
            // Contraction would dissolve every commodity: the kept arcs
            // (= the whole claw here) already solve this instance.
            break OutTreeOutcome::Feasible(Solution::from_arcs(cur.node_count(), kept));
        }

        let (child, rec) = contract(cur, v, t)?;
        records.push(rec);
        levels.push(child);
    };

    for (j, rec) in records.iter().enumerate().rev() {
        let parent = if j == 0 { i } else { &levels[j - 1] };
        outcome = match outcome {
            OutTreeOutcome::Feasible(sol) => {
                let lifted = Solution::from_arcs(
                    parent.node_count(),
                    sol.arcs()
                        .iter()
                        .map(|a| {
                            Arc::new(
                                rec.node_map[a.tail as usize],
                                rec.node_map[a.head as usize],
                            )
                        })
                        .chain(rec.kept_arcs.iter().copied()),
                );
                debug_assert!(lifted.max_out_degree() <= t);
                debug_assert_eq!(parent.is_feasible(&lifted), Ok(true));
                OutTreeOutcome::Feasible(lifted)
            }
            OutTreeOutcome::Infeasible(cert) => {
                let lifted = lift_witness(&cert, rec, parent)?;
                debug_assert!(lifted.value >= t);
                debug_assert!(lifted.verify(parent));
                OutTreeOutcome::Infeasible(lifted)
            }
        };
    }

    #[cfg(debug_assertions)]
    match &outcome {
        OutTreeOutcome::Feasible(sol) => {
            debug_assert!(sol.max_out_degree() <= t);
            debug_assert_eq!(i.is_feasible(sol), Ok(true));
        }
        OutTreeOutcome::Infeasible(cert) => {
            debug_assert!(cert.value >= t);
            debug_assert!(cert.verify(i));
        }
    }
    Ok((outcome, records))
}

/// Fixed-target solver: a solution with maximum out-degree ≤ `t` (always
/// found when `t` exceeds the optimum), or a weak lower-bound certificate
/// of value ≥ `t` proving the optimum is at least `t`.
pub fn solve_target(i: &Instance, t: u32) -> Result<OutTreeOutcome, SolveError> {
    Ok(solve_target_recorded(i, t)?.0)
}

/// Scans targets upward and returns the first success — guaranteed within
/// one of the optimum. The failure certificate from the last infeasible
/// target (when one exists) ships in the report, proving the gap.
pub fn solve(i: &Instance) -> Result<SolveReport, SolveError> {
    require_out_tree(i)?;
    let max_deg = i.out_degrees().into_iter().max().unwrap_or(0);
    let mut certificate = None;
    let mut contractions = 0u64;
    for t in 1..=max_deg + 1 {
        let (outcome, records) = solve_target_recorded(i, t)?;
        contractions += records.len() as u64;
        match outcome {
            OutTreeOutcome::Feasible(sol) => {
                return Ok(SolveReport {
                    solution: Some(sol),
                    status: SolveStatus::Additive1,
                    certificate,
                    stats: SolveStats {
                        iterations: u64::from(t),
                        contractions,
                        levels: 0,
                    },
                });
            }
            OutTreeOutcome::Infeasible(cert) => certificate = Some(cert),
        }
    }
    unreachable!("the target scan succeeds by max out-degree + 1")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{exact_min_max_degree, OracleLimits};
    use crate::test_util::{chain_claw, fan, inst};
    use crate::witness::check_witness_conditions;

    fn named_arc(i: &Instance, tail: &str, head: &str) -> Arc {
        Arc::new(i.node_index(tail).unwrap(), i.node_index(head).unwrap())
    }

    #[test]
    fn source_sets_and_blocking_sources() {
        let i = chain_claw();
        let cases = [
            ("r", "u", vec!["r"], "r"),
            ("u", "v", vec!["r", "u"], "u"),
            ("v", "w1", vec!["r", "u"], "u"),
            ("v", "w2", vec!["r", "v"], "v"),
            ("v", "w3", vec!["v"], "v"),
            ("v", "w4", vec!["v"], "v"),
            ("v", "w5", vec!["u"], "u"),
        ];
        for (tail, head, sources, blocking) in cases {
            let a = named_arc(&i, tail, head);
            let want: Vec<u32> = sources.iter().map(|s| i.node_index(s).unwrap()).collect();
            assert_eq!(sources_requiring(&i, a), want, "arc {tail}->{head}");
            assert_eq!(
                blocking_source(&i, a),
                Some(i.node_index(blocking).unwrap()),
                "arc {tail}->{head}"
            );
        }
    }

    #[test]
    fn unused_arc_has_no_sources() {
        // Arc r→a carries nothing: the only commodity starts at a.
        let i = inst(&["r", "a", "t"], &[(0, 1), (1, 2)], &[(1, 2)]);
        assert!(sources_requiring(&i, Arc::new(0, 1)).is_empty());
        assert_eq!(blocking_source(&i, Arc::new(0, 1)), None);
        assert_eq!(blocking_source(&i, Arc::new(1, 2)), Some(1));
    }

    #[test]
    fn split_prefers_nearest_blocking_sources() {
        let i = chain_claw();
        let (kept, moved) = split_arcs(&i, i.node_index("v").unwrap(), 3).unwrap();
        let name = |a: &Arc| i.name(a.head).to_string();
        assert_eq!(kept.iter().map(name).collect::<Vec<_>>(), ["w2", "w3", "w4"]);
        assert_eq!(moved.iter().map(name).collect::<Vec<_>>(), ["w1", "w5"]);

        let (kept, moved) = split_arcs(&i, i.node_index("v").unwrap(), 10).unwrap();
        assert_eq!(kept.len(), 5);
        assert!(moved.is_empty());

        // All blocking sources equal → first by head index.
        let f = fan(4);
        let (kept, moved) = split_arcs(&f, 1, 2).unwrap();
        assert_eq!(kept, vec![Arc::new(1, 2), Arc::new(1, 3)]);
        assert_eq!(moved, vec![Arc::new(1, 4), Arc::new(1, 5)]);
    }

    #[test]
    fn contraction_reshapes_the_claw() {
        let i = chain_claw();
        let v = i.node_index("v").unwrap();
        let (child, rec) = contract(&i, v, 3).unwrap();
        assert_eq!(child.names(), &["r", "u", "v", "w1", "w5"]);
        let arcs: Vec<(String, String)> = child
            .arcs()
            .iter()
            .map(|a| (child.name(a.tail).into(), child.name(a.head).into()))
            .collect();
        assert_eq!(
            arcs,
            [
                ("r".into(), "u".into()),
                ("u".into(), "v".into()),
                ("u".into(), "w1".into()),
                ("u".into(), "w5".into())
            ]
        );
        let coms: Vec<(String, String)> = child
            .commodities()
            .iter()
            .map(|c| (child.name(c.source).into(), child.name(c.sink).into()))
            .collect();
        assert_eq!(
            coms,
            [
                ("r".into(), "w1".into()),
                ("u".into(), "w1".into()),
                ("r".into(), "v".into()),
                ("u".into(), "w5".into())
            ]
        );
        assert_eq!(rec.node_map, vec![0, 1, 2, 3, 7]);
        assert_eq!(rec.commodity_map, vec![0, 1, 2, 6]);
        assert_eq!(rec.node, v);
        assert_eq!(rec.parent, i.node_index("u").unwrap());
        assert_eq!(rec.kept_blocking, vec![v, v, v]);
        assert_eq!(rec.remapped_sink(i.node_index("w2").unwrap()), v);
        assert_eq!(
            rec.remapped_sink(i.node_index("w1").unwrap()),
            i.node_index("w1").unwrap()
        );

        // Too small a target for the claw's own commodities.
        assert!(matches!(contract(&i, v, 2), Err(SolveError::BadTarget(2))));
    }

    #[test]
    fn contraction_prunes_emptied_branches() {
        // r → a → {x1, x2}, r → b → {y1..y3}; contracting a leaves it
        // commodity-less, so it disappears entirely.
        let i = inst(
            &["r", "a", "b", "x1", "x2", "y1", "y2", "y3"],
            &[(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6), (2, 7)],
            &[(1, 3), (1, 4), (2, 5), (2, 6), (2, 7)],
        );
        let (child, rec) = contract(&i, 1, 2).unwrap();
        assert_eq!(child.names(), &["r", "b", "y1", "y2", "y3"]);
        assert_eq!(rec.node_map, vec![0, 2, 5, 6, 7]);
        assert_eq!(rec.commodity_map, vec![2, 3, 4]);
    }

    #[test]
    fn base_cases() {
        // Single claw within budget: the network itself.
        let i = inst(&["r", "a", "b"], &[(0, 1), (0, 2)], &[(0, 1), (0, 2)]);
        match solve_target(&i, 2).unwrap() {
            OutTreeOutcome::Feasible(sol) => {
                assert_eq!(sol.arcs(), i.arcs());
            }
            OutTreeOutcome::Infeasible(_) => panic!("two leaves fit in target 2"),
        }
        match solve_target(&i, 1).unwrap() {
            OutTreeOutcome::Infeasible(cert) => {
                assert_eq!(cert.witness_nodes, vec![0]);
                assert_eq!(cert.commodities, vec![0, 1]);
                assert_eq!(cert.value, 2);
                assert!(cert.verify(&i));
            }
            OutTreeOutcome::Feasible(_) => panic!("three nodes cannot route at degree 1"),
        }
    }

    #[test]
    fn overloaded_claw_is_its_own_witness() {
        // b sources three commodities: no target below 3 can work.
        let i = inst(
            &["r", "b", "y1", "y2", "y3"],
            &[(0, 1), (1, 2), (1, 3), (1, 4)],
            &[(1, 2), (1, 3), (1, 4)],
        );
        match solve_target(&i, 2).unwrap() {
            OutTreeOutcome::Infeasible(cert) => {
                assert_eq!(cert.witness_nodes, vec![1]);
                assert_eq!(cert.value, 3);
            }
            OutTreeOutcome::Feasible(_) => panic!("claw alone needs degree 3"),
        }
    }

    #[test]
    fn lift_branch_builds_the_two_node_witness() {
        // Contracting the fan's middle at target 2 moves two leaves up;
        // the inner failure lifts to {source, middle} with all four
        // commodities.
        let i = fan(4);
        match solve_target(&i, 2).unwrap() {
            OutTreeOutcome::Infeasible(cert) => {
                assert_eq!(cert.witness_nodes, vec![0, 1]);
                assert_eq!(cert.commodities, vec![0, 1, 2, 3]);
                assert_eq!(cert.value, 2);
                assert!(check_witness_conditions(&i, &cert.witness_nodes, &cert.commodities)
                    .is_empty());
            }
            OutTreeOutcome::Feasible(_) => panic!("fan(4) needs degree 3"),
        }
        match solve_target(&i, 3).unwrap() {
            OutTreeOutcome::Feasible(sol) => assert_eq!(sol.max_out_degree(), 3),
            OutTreeOutcome::Infeasible(_) => panic!("fan(4) solvable at 3"),
        }
    }

    #[test]
    fn reuse_branch_keeps_remote_witnesses() {
        // Two sibling claws; contracting the light one must not disturb
        // the witness found at the heavy one.
        let i = inst(
            &["r", "a", "b", "x1", "x2", "y1", "y2", "y3"],
            &[(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6), (2, 7)],
            &[(1, 3), (1, 4), (2, 5), (2, 6), (2, 7)],
        );
        let (outcome, records) = solve_target_recorded(&i, 2).unwrap();
        assert_eq!(records.len(), 1);
        match outcome {
            OutTreeOutcome::Infeasible(cert) => {
                assert_eq!(cert.witness_nodes, vec![2]);
                assert_eq!(cert.commodities, vec![2, 3, 4]);
                assert_eq!(cert.value, 3);
            }
            OutTreeOutcome::Feasible(_) => panic!("heavy claw needs 3"),
        }
        let report = solve(&i).unwrap();
        assert_eq!(report.value(), Some(3));
        assert_eq!(report.status, SolveStatus::Additive1);
        assert_eq!(report.certificate.as_ref().unwrap().value, 3);
    }

    #[test]
    fn chain_claw_solves_exactly() {
        let i = chain_claw();
        let report = solve(&i).unwrap();
        assert_eq!(report.value(), Some(3));
        let cert = report.certificate.as_ref().unwrap();
        assert!(cert.value >= 2);
        assert!(cert.verify(&i));
        let optimum = exact_min_max_degree(&i, &OracleLimits::default())
            .unwrap()
            .max_out_degree();
        assert_eq!(optimum, 3);
    }

    #[test]
    fn path_instance_is_target_one() {
        let i = inst(&["r", "a", "t"], &[(0, 1), (1, 2)], &[(0, 2)]);
        let report = solve(&i).unwrap();
        assert_eq!(report.value(), Some(1));
        assert!(report.certificate.is_none());
    }

    #[test]
    fn matches_oracle_within_one_on_random_out_trees() {
        use crate::generators::{random_instance, RandomShape};
        let mut checked = 0;
        for seed in 0..25u64 {
            let Ok(i) = random_instance(RandomShape::OutTree, 9, 2, 0.6, seed) else {
                continue;
            };
            let report = solve(&i).unwrap();
            let got = report.value().unwrap();
            let optimum = exact_min_max_degree(&i, &OracleLimits::default())
                .unwrap()
                .max_out_degree();
            assert!(
                got == optimum || got == optimum + 1,
                "seed {seed}: got {got}, optimum {optimum}"
            );
            if let Some(cert) = &report.certificate {
                assert!(cert.verify(&i), "seed {seed}: bad certificate");
                assert!(got <= cert.value + 1);
            }
            checked += 1;
        }
        assert!(checked >= 20);
    }

    #[test]
    fn single_source_instances_stay_within_one_of_exact() {
        use crate::generators::{random_instance, RandomShape};
        for seed in [3u64, 7, 11, 19] {
            let i = random_instance(RandomShape::SingleSourceTree, 10, 1, 0.5, seed).unwrap();
            let exact = crate::single_source::solve(&i, false).unwrap().value().unwrap();
            let additive = solve(&i).unwrap().value().unwrap();
            assert!(additive == exact || additive == exact + 1);
        }
    }

    #[test]
    fn wrong_shapes_are_rejected() {
        let i = inst(&["a", "v", "t"], &[(0, 1), (1, 2)], &[(0, 2)]);
        assert!(solve(&i).is_ok()); // a path is an out-tree
        // Two sources feeding one center is a star, not an out-tree.
        let star = inst(
            &["v", "s1", "s2", "t"],
            &[(1, 0), (2, 0), (0, 3)],
            &[(1, 3), (2, 3)],
        );
        assert!(matches!(
            solve(&star),
            Err(SolveError::WrongShape { .. })
        ));
        assert!(matches!(
            solve_target(&star, 1),
            Err(SolveError::WrongShape { .. })
        ));
    }

    #[test]
    fn dissolved_contraction_is_reported() {
        let i = inst(
            &["r", "b", "y1", "y2"],
            &[(0, 1), (1, 2), (1, 3)],
            &[(1, 2), (1, 3)],
        );
        assert!(matches!(
            contract(&i, 1, 2),
            Err(SolveError::ContractionDissolved)
        ));
        // solve_target shortcuts it to a feasible claw.
        match solve_target(&i, 2).unwrap() {
            OutTreeOutcome::Feasible(sol) => {
                assert_eq!(sol.arcs(), &[Arc::new(1, 2), Arc::new(1, 3)]);
            }
            OutTreeOutcome::Infeasible(_) => panic!("claw fits at 2"),
        }
    }
}
