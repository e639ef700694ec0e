//! Star 2-approximation and the centroid-decomposition framework for
//! general tree instances.
//!
//! A *junction* instance is one where a single node lies on every
//! commodity path; stars are the simplest case and admit a direct-routing
//! 2-approximation ([`star_direct`]). General trees split at a centroid
//! into one junction instance (the commodities through the centroid) plus
//! independent component instances of at most half the size ([`split`]).
//! Recursing and unioning the junction solutions ([`solve_tree`]) turns
//! any α-approximate junction solver into an α·levels approximation with
//! at most ⌈log₂ n⌉ + 1 levels.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::SolveError;
use crate::instance::{Arc, Commodity, Instance, Solution};
use crate::oracle::{exact_min_max_degree, OracleLimits};
use crate::report::{SolveReport, SolveStats, SolveStatus};
use crate::witness::{eval_lb, CertificateKind, WitnessCertificate};

/// The node adjacent to every other node, when the underlying undirected
/// graph is a star (lowest index wins on two-node instances).
fn star_center(i: &Instance) -> Option<u32> {
    let n = i.node_count();
    if !i.is_tree() || n < 2 {
        return None;
    }
    let mut deg = vec![0u32; n];
    for a in i.arcs() {
        deg[a.tail as usize] += 1;
        deg[a.head as usize] += 1;
    }
    (0..n as u32).find(|&u| deg[u as usize] as usize == n - 1)
}

/// Routes every commodity on its own closure arc source → sink. Feasible
/// on any instance; max out-degree equals the largest per-source count of
/// distinct sinks.
pub fn direct_routing(i: &Instance) -> Solution {
    Solution::from_arcs(
        i.node_count(),
        i.commodities().iter().map(|c| Arc::new(c.source, c.sink)),
    )
}

/// 2-approximation for star instances: direct routing, certified by a
/// witness around the busiest source. When that source is the center the
/// certificate value equals the solution exactly; otherwise the witness
/// {source, center} certifies at least half of it.
pub fn star_direct(i: &Instance) -> Result<SolveReport, SolveError> {
    let Some(center) = star_center(i) else {
        return Err(SolveError::WrongShape {
            expected: "star",
            found: i.classify().to_string(),
        });
    };
    if !i.is_normalized() {
        return Err(SolveError::NotNormalized);
    }

    let solution = direct_routing(i);
    debug_assert_eq!(i.is_feasible(&solution), Ok(true));

    let busiest = i
        .sources()
        .into_iter()
        .max_by_key(|&s| (i.sinks_of(s).len(), core::cmp::Reverse(s)))
        .expect("a normalized instance has a commodity");
    let (witness_nodes, commodities) = if busiest == center {
        let ks: Vec<u32> = (0..i.commodities().len() as u32)
            .filter(|&k| i.commodities()[k as usize].source == center)
            .collect();
        (vec![center], ks)
    } else {
        let ks: Vec<u32> = (0..i.commodities().len() as u32)
            .filter(|&k| {
                let c = i.commodities()[k as usize];
                c.source == busiest && c.sink != center
            })
            .collect();
        if ks.is_empty() {
            // The busiest source's only sink is the center itself.
            let k = (0..i.commodities().len() as u32)
                .find(|&k| i.commodities()[k as usize].source == busiest)
                .expect("every source owns a commodity");
            (vec![busiest], vec![k])
        } else {
            let mut w = vec![busiest, center];
            w.sort_unstable();
            (w, ks)
        }
    };
    let value = eval_lb(i, &witness_nodes, &commodities);
    debug_assert!(value > 0);
    debug_assert!(solution.max_out_degree() <= 2 * value);

    Ok(SolveReport {
        solution: Some(solution),
        status: SolveStatus::Approx2,
        certificate: Some(WitnessCertificate {
            kind: CertificateKind::Lb,
            value,
            witness_nodes,
            commodities,
        }),
        stats: SolveStats::default(),
    })
}

/// The lowest-indexed node whose removal leaves undirected components of
/// at most half the nodes each. Every tree has one.
///
/// Panics when the instance is not a tree.
pub fn centroid(i: &Instance) -> u32 {
    assert!(i.is_tree(), "centroid requires a tree instance");
    let n = i.node_count();
    if n == 1 {
        return 0;
    }
    let mut adj = vec![Vec::new(); n];
    for a in i.arcs() {
        adj[a.tail as usize].push(a.head);
        adj[a.head as usize].push(a.tail);
    }
    let mut parent = vec![u32::MAX; n];
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    let mut stack = vec![0u32];
    seen[0] = true;
    while let Some(u) = stack.pop() {
        order.push(u);
        for &w in &adj[u as usize] {
            if !seen[w as usize] {
                seen[w as usize] = true;
                parent[w as usize] = u;
                stack.push(w);
            }
        }
    }
    let mut size = vec![1u32; n];
    for &u in order.iter().rev() {
        let p = parent[u as usize];
        if p != u32::MAX {
            size[p as usize] += size[u as usize];
        }
    }
    (0..n as u32)
        .find(|&v| {
            let mut worst = n as u32 - size[v as usize];
            for &w in &adj[v as usize] {
                if parent[w as usize] == v {
                    worst = worst.max(size[w as usize]);
                }
            }
            worst as usize * 2 <= n
        })
        .expect("every tree has a centroid")
}

/// A sub-instance together with the maps from its indices back to the
/// instance it was carved from.
#[derive(Debug, Clone)]
pub struct SubInstance {
    /// The carved-out instance.
    pub instance: Instance,
    /// Sub-instance node index → parent node index.
    pub node_map: Vec<u32>,
    /// Sub-instance commodity index → parent commodity index.
    pub commodity_map: Vec<u32>,
}

/// One decomposition step: the junction instance of all commodities whose
/// paths pass the split node, plus one instance per component of the tree
/// minus that node (components without commodities are dropped).
#[derive(Debug, Clone)]
pub struct DecompositionNode {
    /// The node the tree was split at.
    pub split_node: u32,
    /// Commodities routed through the split node, on the nodes their
    /// paths touch. `None` when no commodity passes the split node.
    pub junction: Option<SubInstance>,
    /// The component instances, normalized. Splitting at a centroid
    /// keeps each at most half the parent's size.
    pub children: Vec<SubInstance>,
    /// Depth of this step in a decomposition (0 when produced standalone).
    pub level: u32,
}

/// Carves the sub-instance induced by a node subset and a commodity
/// subset out of `i`.
fn project(i: &Instance, keep: &[bool], ks: &[u32]) -> SubInstance {
    let mut node_map = Vec::new();
    let mut to_sub = vec![u32::MAX; keep.len()];
    let mut names = Vec::new();
    for (u, &k) in keep.iter().enumerate() {
        if k {
            to_sub[u] = node_map.len() as u32;
            node_map.push(u as u32);
            names.push(String::from(i.name(u as u32)));
        }
    }
    let arcs: Vec<Arc> = i
        .arcs()
        .iter()
        .filter(|a| keep[a.tail as usize] && keep[a.head as usize])
        .map(|a| Arc::new(to_sub[a.tail as usize], to_sub[a.head as usize]))
        .collect();
    let commodities: Vec<Commodity> = ks
        .iter()
        .map(|&k| {
            let c = i.commodities()[k as usize];
            Commodity::new(to_sub[c.source as usize], to_sub[c.sink as usize])
        })
        .collect();
    let instance = Instance::new(names, arcs, commodities).expect("sub-instance is valid");
    SubInstance {
        instance,
        node_map,
        commodity_map: ks.to_vec(),
    }
}

/// Re-normalizes a sub-instance, recovering the node map through the
/// (unique) node names.
fn normalized_sub(i: &Instance, sub: SubInstance) -> SubInstance {
    if sub.instance.is_normalized() {
        return sub;
    }
    let norm = sub
        .instance
        .normalize()
        .expect("a component with commodities normalizes");
    debug_assert_eq!(norm.commodities().len(), sub.commodity_map.len());
    let node_map: Vec<u32> = (0..norm.node_count() as u32)
        .map(|u| i.node_index(norm.name(u)).expect("names come from the parent"))
        .collect();
    SubInstance {
        instance: norm,
        node_map,
        commodity_map: sub.commodity_map,
    }
}

/// Splits a tree instance at node `v`: commodities whose path passes `v`
/// form the junction sub-instance (on exactly the nodes their paths
/// touch); every other commodity lands in the component of `v`'s removal
/// containing it.
///
/// Panics when the instance is not a tree.
pub fn split(i: &Instance, v: u32) -> DecompositionNode {
    assert!(i.is_tree(), "split requires a tree instance");
    let n = i.node_count();
    let paths: Vec<Vec<u32>> = (0..i.commodities().len())
        .map(|k| i.commodity_path(k).expect("validated commodity has a path"))
        .collect();
    let through: Vec<bool> = paths.iter().map(|p| p.contains(&v)).collect();

    let junction_ks: Vec<u32> = (0..through.len() as u32)
        .filter(|&k| through[k as usize])
        .collect();
    let junction = if junction_ks.is_empty() {
        None
    } else {
        let mut keep = vec![false; n];
        for &k in &junction_ks {
            for &u in &paths[k as usize] {
                keep[u as usize] = true;
            }
        }
        let sub = project(i, &keep, &junction_ks);
        debug_assert!(sub.instance.is_normalized());
        Some(sub)
    };

    // Undirected components of the tree minus v.
    let mut adj = vec![Vec::new(); n];
    for a in i.arcs() {
        adj[a.tail as usize].push(a.head);
        adj[a.head as usize].push(a.tail);
    }
    let mut comp = vec![u32::MAX; n];
    let mut comp_count = 0;
    for start in 0..n as u32 {
        if start == v || comp[start as usize] != u32::MAX {
            continue;
        }
        let mut stack = vec![start];
        comp[start as usize] = comp_count;
        while let Some(u) = stack.pop() {
            for &w in &adj[u as usize] {
                if w != v && comp[w as usize] == u32::MAX {
                    comp[w as usize] = comp_count;
                    stack.push(w);
                }
            }
        }
        comp_count += 1;
    }
    let mut comp_ks = vec![Vec::new(); comp_count as usize];
    for (k, &th) in through.iter().enumerate() {
        if th {
            continue;
        }
        let c = i.commodities()[k];
        let cs = comp[c.source as usize];
        debug_assert_eq!(cs, comp[c.sink as usize], "off-junction commodity stays in one component");
        comp_ks[cs as usize].push(k as u32);
    }
    let children: Vec<SubInstance> = (0..comp_count)
        .filter(|&c| !comp_ks[c as usize].is_empty())
        .map(|c| {
            let keep: Vec<bool> = comp.iter().map(|&x| x == c).collect();
            normalized_sub(i, project(i, &keep, &comp_ks[c as usize]))
        })
        .collect();

    DecompositionNode {
        split_node: v,
        junction,
        children,
        level: 0,
    }
}

/// How [`solve_tree`] handles each junction sub-instance.
#[derive(Debug, Clone, Copy)]
pub enum JunctionSolver {
    /// Require every junction to be a star and 2-approximate it; errors
    /// on non-star junctions.
    Star,
    /// Exact search within the given limits; errors when a junction
    /// exceeds them.
    Oracle(OracleLimits),
    /// Direct routing: always feasible, no quality guarantee.
    Direct,
    /// Stars via the 2-approximation, anything the default oracle limits
    /// admit exactly, direct routing as the fallback.
    Auto,
}

/// Solves one junction instance. The boolean reports whether the route
/// taken carries an approximation guarantee (direct-routing fallbacks do
/// not).
fn solve_junction(j: &Instance, js: JunctionSolver) -> Result<(Solution, bool), SolveError> {
    let take = |r: SolveReport| (r.solution.expect("star reports carry a solution"), true);
    match js {
        JunctionSolver::Star => star_direct(j).map(take),
        JunctionSolver::Oracle(lim) => exact_min_max_degree(j, &lim)
            .map(|s| (s, true))
            .map_err(|e| SolveError::Junction(e.to_string())),
        JunctionSolver::Direct => Ok((direct_routing(j), false)),
        JunctionSolver::Auto => {
            if star_center(j).is_some() {
                if let Ok(r) = star_direct(j) {
                    return Ok(take(r));
                }
            }
            match exact_min_max_degree(j, &OracleLimits::default()) {
                Ok(s) => Ok((s, true)),
                Err(_) => Ok((direct_routing(j), false)),
            }
        }
    }
}

/// The automatic junction dispatch: stars 2-approximated, small instances
/// solved exactly, direct routing otherwise. Always returns a feasible
/// solution.
pub fn junction_solver_default(i: &Instance) -> Solution {
    solve_junction(i, JunctionSolver::Auto)
        .expect("automatic dispatch always routes")
        .0
}

/// Centroid-decomposition solver for arbitrary tree instances: splits at
/// a centroid, solves the junction instance with the plugged solver,
/// recurses on the components, and unions the arcs. The result is always
/// feasible; with a guaranteed junction solver the maximum out-degree is
/// within (junction ratio) × (levels) of optimal and the status says so.
/// Any direct-routing fallback downgrades the status to heuristic.
pub fn solve_tree(i: &Instance, js: JunctionSolver) -> Result<SolveReport, SolveError> {
    if !i.is_tree() {
        return Err(SolveError::WrongShape {
            expected: "tree",
            found: i.classify().to_string(),
        });
    }
    if !i.is_normalized() {
        return Err(SolveError::NotNormalized);
    }

    let mut arcs: Vec<Arc> = Vec::new();
    let mut junctions = 0u64;
    let mut heuristic = false;
    let mut levels = 0u32;

    // (instance, node map to the root instance, depth)
    let identity: Vec<u32> = (0..i.node_count() as u32).collect();
    let mut stack: Vec<(Instance, Vec<u32>, u32)> = vec![(i.clone(), identity, 0)];
    while let Some((cur, to_root, depth)) = stack.pop() {
        levels = levels.max(depth + 1);
        let node = split(&cur, centroid(&cur));
        if let Some(j) = &node.junction {
            let (sol, guaranteed) = solve_junction(&j.instance, js)?;
            junctions += 1;
            heuristic |= !guaranteed;
            arcs.extend(sol.arcs().iter().map(|a| {
                Arc::new(
                    to_root[j.node_map[a.tail as usize] as usize],
                    to_root[j.node_map[a.head as usize] as usize],
                )
            }));
        }
        for child in node.children {
            let map: Vec<u32> = child
                .node_map
                .iter()
                .map(|&u| to_root[u as usize])
                .collect();
            stack.push((child.instance, map, depth + 1));
        }
    }

    let solution = Solution::from_arcs(i.node_count(), arcs);
    debug_assert_eq!(i.is_feasible(&solution), Ok(true));
    debug_assert!(levels <= (i.node_count() - 1).ilog2() + 2);
    Ok(SolveReport {
        solution: Some(solution),
        status: if heuristic {
            SolveStatus::Heuristic
        } else {
            SolveStatus::LogNFramework
        },
        certificate: None,
        stats: SolveStats {
            iterations: junctions,
            contractions: 0,
            levels,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_util::{chain_claw, inst};

    /// Two fans joined tail-to-tail: r1 → {x1, x2}, r1 → r2 → {y1, y2}.
    fn two_fans() -> Instance {
        inst(
            &["r1", "x1", "x2", "r2", "y1", "y2"],
            &[(0, 1), (0, 2), (0, 3), (3, 4), (3, 5)],
            &[(0, 1), (0, 2), (3, 4), (3, 5)],
        )
    }

    #[test]
    fn direct_routing_is_feasible() {
        for i in [chain_claw(), two_fans()] {
            let sol = direct_routing(&i);
            assert_eq!(i.is_feasible(&sol), Ok(true));
        }
    }

    #[test]
    fn star_from_center_is_certified_exactly() {
        let i = inst(
            &["v", "t1", "t2", "t3"],
            &[(0, 1), (0, 2), (0, 3)],
            &[(0, 1), (0, 2), (0, 3)],
        );
        let report = star_direct(&i).unwrap();
        assert_eq!(report.value(), Some(3));
        let cert = report.certificate.unwrap();
        assert_eq!(cert.witness_nodes, vec![0]);
        assert_eq!(cert.value, 3);
        assert!(cert.verify(&i));
    }

    #[test]
    fn star_with_busy_leaf_certifies_half() {
        // s1 routes to three leaves through the center; the witness
        // {s1, v} certifies ⌈(3+1)/2⌉ = 2 of the solution's 3.
        let i = inst(
            &["s1", "v", "t1", "t2", "t3"],
            &[(0, 1), (1, 2), (1, 3), (1, 4)],
            &[(0, 2), (0, 3), (0, 4)],
        );
        let report = star_direct(&i).unwrap();
        assert_eq!(report.value(), Some(3));
        let cert = report.certificate.as_ref().unwrap();
        assert_eq!(cert.witness_nodes, vec![0, 1]);
        assert_eq!(cert.value, 2);
        assert!(cert.verify(&i));
        assert!(report.value().unwrap() <= 2 * cert.value);
    }

    #[test]
    fn star_whose_busiest_source_feeds_the_center() {
        // Both sources have one sink; the busiest (lowest index) sinks at
        // the center, exercising the single-node witness fallback.
        let i = inst(&["s", "v", "t"], &[(0, 1), (1, 2)], &[(0, 1), (1, 2)]);
        let report = star_direct(&i).unwrap();
        assert_eq!(report.value(), Some(1));
        let cert = report.certificate.unwrap();
        assert_eq!(cert.witness_nodes, vec![0]);
        assert_eq!(cert.commodities, vec![0]);
        assert_eq!(cert.value, 1);
        assert!(cert.verify(&i));
    }

    #[test]
    fn non_star_is_rejected() {
        assert!(matches!(
            star_direct(&chain_claw()),
            Err(SolveError::WrongShape { .. })
        ));
    }

    #[test]
    fn centroid_picks_balanced_split_points() {
        let path = inst(
            &["a", "b", "c", "d", "e"],
            &[(0, 1), (1, 2), (2, 3), (3, 4)],
            &[(0, 4)],
        );
        assert_eq!(centroid(&path), 2);

        let star = inst(
            &["v", "t1", "t2", "t3"],
            &[(0, 1), (0, 2), (0, 3)],
            &[(0, 1), (0, 2), (0, 3)],
        );
        assert_eq!(centroid(&star), 0);

        let balanced = inst(
            &["r", "a", "b", "c", "d", "e", "f"],
            &[(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6)],
            &[(0, 3), (0, 6)],
        );
        assert_eq!(centroid(&balanced), 0);
    }

    #[test]
    fn split_at_star_center_keeps_everything_in_the_junction() {
        let star = inst(
            &["v", "t1", "t2", "t3"],
            &[(0, 1), (0, 2), (0, 3)],
            &[(0, 1), (0, 2), (0, 3)],
        );
        let node = split(&star, 0);
        let junction = node.junction.unwrap();
        assert_eq!(junction.node_map, vec![0, 1, 2, 3]);
        assert_eq!(junction.commodity_map, vec![0, 1, 2]);
        assert!(node.children.is_empty());
    }

    #[test]
    fn split_routes_commodities_to_their_components() {
        let i = two_fans();
        let node = split(&i, i.node_index("r2").unwrap());
        let junction = node.junction.unwrap();
        assert_eq!(junction.commodity_map, vec![2, 3]);
        assert_eq!(junction.node_map, vec![3, 4, 5]);
        assert_eq!(node.children.len(), 1);
        let child = &node.children[0];
        assert_eq!(child.commodity_map, vec![0, 1]);
        assert_eq!(child.node_map, vec![0, 1, 2]);
        assert!(child.instance.is_normalized());
    }

    #[test]
    fn split_covers_every_commodity_exactly_once() {
        for i in [chain_claw(), two_fans()] {
            for v in 0..i.node_count() as u32 {
                let node = split(&i, v);
                let mut seen: Vec<u32> = node
                    .junction
                    .iter()
                    .flat_map(|j| j.commodity_map.iter().copied())
                    .chain(
                        node.children
                            .iter()
                            .flat_map(|c| c.commodity_map.iter().copied()),
                    )
                    .collect();
                seen.sort_unstable();
                let all: Vec<u32> = (0..i.commodities().len() as u32).collect();
                assert_eq!(seen, all, "split at {v}");
            }
        }
    }

    #[test]
    fn junction_dispatch_prefers_exactness_when_small() {
        // chain_claw is a junction tree (every path passes its hub), small
        // enough for the exact search.
        let i = chain_claw();
        let sol = junction_solver_default(&i);
        assert_eq!(i.is_feasible(&sol), Ok(true));
        assert_eq!(sol.max_out_degree(), 3);
    }

    #[test]
    fn junction_dispatch_falls_back_to_direct_routing() {
        // 17 nodes exceed the default oracle cap and the shape is no star.
        let names: Vec<String> = (0..17).map(|k| alloc::format!("n{k}")).collect();
        let name_refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        let arcs: Vec<(u32, u32)> = (0..16).map(|k| (k, k + 1)).collect();
        let coms: Vec<(u32, u32)> = (0..8).map(|k| (k, 16 - k)).collect();
        let i = inst(&name_refs, &arcs, &coms);
        let sol = junction_solver_default(&i);
        assert_eq!(sol.arcs(), direct_routing(&i).arcs());
    }

    #[test]
    fn solve_tree_on_a_star_is_one_level() {
        let star = inst(
            &["v", "t1", "t2", "t3"],
            &[(0, 1), (0, 2), (0, 3)],
            &[(0, 1), (0, 2), (0, 3)],
        );
        let report = solve_tree(&star, JunctionSolver::Star).unwrap();
        assert_eq!(report.value(), Some(3));
        assert_eq!(report.stats.levels, 1);
        assert_eq!(report.status, SolveStatus::LogNFramework);
    }

    #[test]
    fn solve_tree_unions_component_solutions() {
        let i = two_fans();
        let report = solve_tree(&i, JunctionSolver::Oracle(OracleLimits::default())).unwrap();
        let sol = report.solution.unwrap();
        assert_eq!(i.is_feasible(&sol), Ok(true));
        assert_eq!(sol.max_out_degree(), 2);
        assert_eq!(report.status, SolveStatus::LogNFramework);
        assert!(report.stats.levels <= 3);
        assert!(report.stats.iterations >= 2);
    }

    #[test]
    fn solve_tree_direct_fallback_is_flagged() {
        let i = two_fans();
        let report = solve_tree(&i, JunctionSolver::Direct).unwrap();
        assert_eq!(report.status, SolveStatus::Heuristic);
        let sol = report.solution.unwrap();
        assert_eq!(i.is_feasible(&sol), Ok(true));
    }

    #[test]
    fn solve_tree_respects_the_level_bound_on_random_trees() {
        use crate::generators::{random_instance, RandomShape};
        use crate::oracle::exact_min_max_degree;
        for seed in 0..15u64 {
            let Ok(i) = random_instance(RandomShape::Tree, 10, 3, 0.5, seed) else {
                continue;
            };
            let report = solve_tree(&i, JunctionSolver::Oracle(OracleLimits::default())).unwrap();
            let sol = report.solution.as_ref().unwrap();
            assert_eq!(i.is_feasible(sol), Ok(true));
            let n = i.node_count() as u32;
            let bound = 32 - (n - 1).leading_zeros() + 1; // ⌈log₂ n⌉ + 1
            assert!(report.stats.levels <= bound, "seed {seed}");
            let optimum = exact_min_max_degree(&i, &OracleLimits::default())
                .unwrap()
                .max_out_degree();
            assert!(
                sol.max_out_degree() <= bound * optimum,
                "seed {seed}: {} > {bound} * {optimum}",
                sol.max_out_degree()
            );
        }
    }

    #[test]
    fn sub_instances_never_exceed_the_parent_optimum() {
        use crate::oracle::exact_min_max_degree;
        let lim = OracleLimits::default();
        let i = two_fans();
        let parent = exact_min_max_degree(&i, &lim).unwrap().max_out_degree();
        let node = split(&i, centroid(&i));
        for sub in node.junction.iter().chain(node.children.iter()) {
            let val = exact_min_max_degree(&sub.instance, &lim)
                .unwrap()
                .max_out_degree();
            assert!(val <= parent);
        }
    }

    #[test]
    fn wrong_shapes_are_rejected() {
        let star = inst(
            &["v", "s1", "s2", "t"],
            &[(1, 0), (2, 0), (0, 3)],
            &[(1, 3), (2, 3)],
        );
        assert!(solve_tree(&star, JunctionSolver::Auto).is_ok());
        // chain_claw's junction is no star, so the star-only solver balks.
        assert!(matches!(
            solve_tree(&chain_claw(), JunctionSolver::Star),
            Err(SolveError::WrongShape { .. })
        ));
    }
}
