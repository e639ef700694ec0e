//! The validated instance model: networks, commodities, shape
//! classification, solutions and feasibility checking.
//!
//! An [`Instance`] owns a directed network whose underlying undirected graph
//! is connected (for the solvers in this crate, additionally a tree), plus a
//! list of commodities. Construction validates structure; [`Instance::normalize`]
//! brings an instance into the canonical form the solvers expect (no trivial
//! or duplicate commodities, every leaf is some commodity's sink).

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{FeasibilityError, InstanceError};

/// Sentinel "no node" value used in parent arrays.
pub const NO_NODE: u32 = u32::MAX;

/// A directed arc between two node indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Arc {
    /// Tail (origin) node index.
    pub tail: u32,
    /// Head (destination) node index.
    pub head: u32,
}

impl Arc {
    /// Convenience constructor.
    pub fn new(tail: u32, head: u32) -> Self {
        Arc { tail, head }
    }
}

/// A demand pair: everything available at `source` must become reachable
/// from `sink` via the chosen relay arcs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Commodity {
    /// Origin node index.
    pub source: u32,
    /// Destination node index.
    pub sink: u32,
}

impl Commodity {
    /// Convenience constructor.
    pub fn new(source: u32, sink: u32) -> Self {
        Commodity { source, sink }
    }
}

/// Tree-specific derived data, present when the underlying graph is a tree.
#[derive(Debug, Clone)]
struct TreeData {
    /// Root used for the parent/depth arrays: the unique in-degree-0 node
    /// for out-trees, node 0 otherwise.
    root: u32,
    /// Undirected parent of each node (`NO_NODE` at the root).
    uparent: Vec<u32>,
    /// Distance to the root in the underlying tree.
    depth: Vec<u32>,
    /// For `w != root`: true iff the network arc between `w` and its parent
    /// is directed parent → `w`.
    arc_down: Vec<bool>,
    /// True iff every node has at most one entering arc (so the network is
    /// an out-tree rooted at `root`).
    out_tree: bool,
}

/// Shape classes recognized by [`Instance::classify`], ordered from most to
/// least specific. Solvers state their required class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShapeClass {
    /// Out-tree whose commodities all share one source.
    SingleSourceTree {
        /// The common source node.
        source: u32,
    },
    /// Every node has at most one entering arc; multiple sources.
    OutTree {
        /// The unique node without an entering arc.
        root: u32,
    },
    /// One center node is adjacent to every other node.
    Star {
        /// The center node.
        center: u32,
    },
    /// Some node lies on every commodity path.
    JunctionTree {
        /// The lowest-index such node.
        junction: u32,
    },
    /// A tree with none of the structure above.
    GeneralTree,
    /// The underlying undirected graph is not a tree.
    NonTree,
}

impl fmt::Display for ShapeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShapeClass::SingleSourceTree { .. } => write!(f, "single-source-tree"),
            ShapeClass::OutTree { .. } => write!(f, "out-tree"),
            ShapeClass::Star { .. } => write!(f, "star"),
            ShapeClass::JunctionTree { .. } => write!(f, "junction-tree"),
            ShapeClass::GeneralTree => write!(f, "general-tree"),
            ShapeClass::NonTree => write!(f, "non-tree"),
        }
    }
}

/// A validated problem instance. Immutable after construction; cheap to
/// clone and safe to share across threads.
#[derive(Debug, Clone)]
pub struct Instance {
    names: Vec<String>,
    arcs: Vec<Arc>,
    commodities: Vec<Commodity>,
    tree: Option<TreeData>,
}

impl Instance {
    /// Builds and validates an instance.
    ///
    /// Checks: at least one node, unique names, arc/commodity endpoints in
    /// range, no self-loops, no duplicate arcs, underlying graph connected,
    /// and a directed source→sink path for every commodity. Trivial
    /// (source = sink) and duplicate commodities are accepted here and
    /// removed by [`Instance::normalize`].
    pub fn new(
        names: Vec<String>,
        arcs: Vec<Arc>,
        commodities: Vec<Commodity>,
    ) -> Result<Self, InstanceError> {
        if names.is_empty() {
            return Err(InstanceError::NoNodes);
        }
        let n = names.len() as u32;
        {
            let mut seen = BTreeSet::new();
            for name in &names {
                if !seen.insert(name.as_str()) {
                    return Err(InstanceError::DuplicateName(name.clone()));
                }
            }
        }
        for a in &arcs {
            if a.tail >= n {
                return Err(InstanceError::NodeOutOfRange(a.tail));
            }
            if a.head >= n {
                return Err(InstanceError::NodeOutOfRange(a.head));
            }
            if a.tail == a.head {
                return Err(InstanceError::SelfLoop(a.tail));
            }
        }
        {
            let mut sorted = arcs.clone();
            sorted.sort_unstable();
            for w in sorted.windows(2) {
                if w[0] == w[1] {
                    return Err(InstanceError::DuplicateArc(w[0]));
                }
            }
        }
        for c in &commodities {
            if c.source >= n {
                return Err(InstanceError::NodeOutOfRange(c.source));
            }
            if c.sink >= n {
                return Err(InstanceError::NodeOutOfRange(c.sink));
            }
        }

        // Undirected adjacency (CSR) for connectivity and tree data.
        let (uoff, uadj) = undirected_csr(names.len(), &arcs);
        {
            let mut seen = vec![false; names.len()];
            let mut stack = vec![0u32];
            seen[0] = true;
            while let Some(u) = stack.pop() {
                for &(w, _) in
                    &uadj[uoff[u as usize] as usize..uoff[u as usize + 1] as usize]
                {
                    if !seen[w as usize] {
                        seen[w as usize] = true;
                        stack.push(w);
                    }
                }
            }
            if let Some(miss) = seen.iter().position(|&s| !s) {
                return Err(InstanceError::Disconnected(miss as u32));
            }
        }

        let tree = if arcs.len() == names.len() - 1 {
            Some(build_tree_data(names.len(), &arcs, &uoff, &uadj))
        } else {
            None
        };

        let inst = Instance {
            names,
            arcs,
            commodities,
            tree,
        };

        // Directed path existence per commodity. Trees get an O(depth)
        // check; general graphs fall back to one search per commodity.
        if !inst.commodities.is_empty() {
            if inst.tree.is_some() {
                for c in &inst.commodities {
                    if c.source != c.sink && !inst.tree_path_exists(c.source, c.sink) {
                        return Err(InstanceError::NoPath {
                            source: c.source,
                            sink: c.sink,
                        });
                    }
                }
            } else {
                let (off, adj) = directed_csr(inst.names.len(), &inst.arcs);
                let mut seen = vec![u32::MAX; inst.names.len()];
                for (k, c) in inst.commodities.iter().enumerate() {
                    if c.source == c.sink {
                        continue;
                    }
                    let stamp = k as u32;
                    let mut stack = vec![c.source];
                    seen[c.source as usize] = stamp;
                    let mut found = false;
                    while let Some(u) = stack.pop() {
                        if u == c.sink {
                            found = true;
                            break;
                        }
                        for &w in &adj[off[u as usize] as usize..off[u as usize + 1] as usize]
                        {
                            if seen[w as usize] != stamp {
                                seen[w as usize] = stamp;
                                stack.push(w);
                            }
                        }
                    }
                    if !found {
                        return Err(InstanceError::NoPath {
                            source: c.source,
                            sink: c.sink,
                        });
                    }
                }
            }
        }

        Ok(inst)
    }

    /// Number of nodes.
    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    /// Node names, indexed by node id.
    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Name of one node.
    pub fn name(&self, u: u32) -> &str {
        &self.names[u as usize]
    }

    /// Looks a node up by name.
    pub fn node_index(&self, name: &str) -> Option<u32> {
        self.names.iter().position(|n| n == name).map(|i| i as u32)
    }

    /// The network arcs in input order.
    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    /// The commodities in input order.
    pub fn commodities(&self) -> &[Commodity] {
        &self.commodities
    }

    /// True iff the underlying undirected graph is a tree.
    pub fn is_tree(&self) -> bool {
        self.tree.is_some()
    }

    /// True iff every node has at most one entering arc (and the graph is a
    /// tree), i.e. the network is an out-tree.
    pub fn is_out_tree(&self) -> bool {
        self.tree.as_ref().is_some_and(|t| t.out_tree)
    }

    /// Root of the out-tree; `None` if the network is not an out-tree.
    pub fn out_tree_root(&self) -> Option<u32> {
        self.tree.as_ref().filter(|t| t.out_tree).map(|t| t.root)
    }

    /// Depth of `u` below the tree root (out-tree root for out-trees,
    /// node 0 otherwise). `None` on non-trees.
    pub fn tree_depth(&self, u: u32) -> Option<u32> {
        self.tree.as_ref().map(|t| t.depth[u as usize])
    }

    /// Parent of `u` in the rooted underlying tree (`NO_NODE` at the root).
    /// For out-trees this is the network parent. `None` on non-trees.
    pub fn tree_parent(&self, u: u32) -> Option<u32> {
        self.tree.as_ref().map(|t| t.uparent[u as usize])
    }

    /// Out-degree of every node in the network.
    pub fn out_degrees(&self) -> Vec<u32> {
        let mut deg = vec![0u32; self.names.len()];
        for a in &self.arcs {
            deg[a.tail as usize] += 1;
        }
        deg
    }

    /// In-degree of every node in the network.
    pub fn in_degrees(&self) -> Vec<u32> {
        let mut deg = vec![0u32; self.names.len()];
        for a in &self.arcs {
            deg[a.head as usize] += 1;
        }
        deg
    }

    /// Out-neighbor lists in arc input order.
    pub fn out_adjacency(&self) -> Vec<Vec<u32>> {
        let mut adj = vec![Vec::new(); self.names.len()];
        for a in &self.arcs {
            adj[a.tail as usize].push(a.head);
        }
        adj
    }

    /// Out-adjacency in compressed form: `(offsets, heads)` with the
    /// out-neighbors of `u` at `heads[offsets[u]..offsets[u+1]]`, in arc
    /// input order. Preferred for large instances.
    pub fn out_csr(&self) -> (Vec<u32>, Vec<u32>) {
        directed_csr(self.names.len(), &self.arcs)
    }

    /// Distinct commodity sources, ascending.
    pub fn sources(&self) -> Vec<u32> {
        let set: BTreeSet<u32> = self.commodities.iter().map(|c| c.source).collect();
        set.into_iter().collect()
    }

    /// Distinct commodity sinks, ascending.
    pub fn sinks(&self) -> Vec<u32> {
        let set: BTreeSet<u32> = self.commodities.iter().map(|c| c.sink).collect();
        set.into_iter().collect()
    }

    /// Distinct sinks demanded from source `s`, ascending.
    pub fn sinks_of(&self, s: u32) -> Vec<u32> {
        let set: BTreeSet<u32> = self
            .commodities
            .iter()
            .filter(|c| c.source == s)
            .map(|c| c.sink)
            .collect();
        set.into_iter().collect()
    }

    /// Distinct sources demanding sink `t`, ascending.
    pub fn sources_of(&self, t: u32) -> Vec<u32> {
        let set: BTreeSet<u32> = self
            .commodities
            .iter()
            .filter(|c| c.sink == t)
            .map(|c| c.source)
            .collect();
        set.into_iter().collect()
    }

    fn tree_data(&self) -> &TreeData {
        self.tree.as_ref().expect("tree instance required")
    }

    /// True iff the network arc between `u` and its tree parent points
    /// downward (parent → `u`). False at the root. Tree instances only.
    pub(crate) fn parent_arc_down(&self, u: u32) -> bool {
        self.tree_data().arc_down[u as usize]
    }

    /// Lowest common ancestor of `a` and `b` in the rooted underlying tree.
    fn tree_lca(&self, a: u32, b: u32) -> u32 {
        let t = self.tree_data();
        let (mut a, mut b) = (a, b);
        while t.depth[a as usize] > t.depth[b as usize] {
            a = t.uparent[a as usize];
        }
        while t.depth[b as usize] > t.depth[a as usize] {
            b = t.uparent[b as usize];
        }
        while a != b {
            a = t.uparent[a as usize];
            b = t.uparent[b as usize];
        }
        a
    }

    /// True iff the network has a directed `s → t` path (tree instances
    /// only; `s != t` expected).
    fn tree_path_exists(&self, s: u32, t: u32) -> bool {
        let td = self.tree_data();
        let lca = self.tree_lca(s, t);
        // Ascend from s to the meet: every step must use an upward arc.
        let mut x = s;
        while x != lca {
            if td.arc_down[x as usize] {
                return false;
            }
            x = td.uparent[x as usize];
        }
        // The meet-to-t half must use downward arcs throughout.
        let mut y = t;
        while y != lca {
            if !td.arc_down[y as usize] {
                return false;
            }
            y = td.uparent[y as usize];
        }
        true
    }

    /// The node sequence of the network path of commodity `k` (source
    /// first, sink last). Returns `None` when the underlying graph is not a
    /// tree (the path is not unique there).
    ///
    /// # Panics
    ///
    /// Panics if `k` is out of range.
    pub fn commodity_path(&self, k: usize) -> Option<Vec<u32>> {
        let c = self.commodities[k];
        self.path_nodes(c.source, c.sink)
    }

    /// Node sequence of the unique directed `s → t` path, if the instance
    /// is a tree and such a path exists. `s == t` yields the single node.
    pub fn path_nodes(&self, s: u32, t: u32) -> Option<Vec<u32>> {
        self.tree.as_ref()?;
        if s == t {
            return Some(vec![s]);
        }
        if !self.tree_path_exists(s, t) {
            return None;
        }
        let td = self.tree_data();
        let lca = self.tree_lca(s, t);
        let mut up = Vec::new();
        let mut x = s;
        while x != lca {
            up.push(x);
            x = td.uparent[x as usize];
        }
        up.push(lca);
        let mut down = Vec::new();
        let mut y = t;
        while y != lca {
            down.push(y);
            y = td.uparent[y as usize];
        }
        up.extend(down.into_iter().rev());
        Some(up)
    }

    /// True iff the closure contains the arc `u → w`, i.e. the network has
    /// a directed `u → w` path with `u != w`. Tree instances only.
    pub fn closure_contains(&self, u: u32, w: u32) -> Option<bool> {
        self.tree.as_ref()?;
        Some(u != w && self.tree_path_exists(u, w))
    }

    /// Removes trivial and duplicate commodities, then repeatedly deletes
    /// leaves of the underlying tree that have no outgoing arcs and are no
    /// commodity's sink, re-indexing the survivors (original order
    /// preserved). Errors if no commodity remains. Idempotent.
    ///
    /// A node with several incoming arcs and none outgoing carries no
    /// commodity either, but it stays: deleting an interior node would
    /// disconnect the network.
    pub fn normalize(&self) -> Result<Instance, InstanceError> {
        let mut kept: Vec<Commodity> = Vec::with_capacity(self.commodities.len());
        let mut seen = BTreeSet::new();
        for c in &self.commodities {
            if c.source != c.sink && seen.insert((c.source, c.sink)) {
                kept.push(*c);
            }
        }
        if kept.is_empty() {
            return Err(InstanceError::NoCommodities);
        }

        let n = self.names.len();
        let mut out_deg = self.out_degrees();
        let mut is_sink = vec![false; n];
        for c in &kept {
            is_sink[c.sink as usize] = true;
        }
        // Only out-degree-0 nodes are ever removed, so no removal deletes
        // another node's incoming arc: live in-degrees never change, and
        // "leaf with no outgoing arcs" is exactly out_deg == 0 && in_deg <= 1.
        let mut in_deg = vec![0u32; n];
        for a in &self.arcs {
            in_deg[a.head as usize] += 1;
        }
        let prunable = |out_deg: &[u32], u: usize| {
            out_deg[u] == 0 && in_deg[u] <= 1 && !is_sink[u]
        };
        let mut removed = vec![false; n];
        let mut queue: Vec<u32> = (0..n as u32)
            .filter(|&u| prunable(&out_deg, u as usize))
            .collect();
        // In-adjacency so removals can decrement their parents' out-degrees.
        let mut in_adj = vec![Vec::new(); n];
        for a in &self.arcs {
            in_adj[a.head as usize].push(a.tail);
        }
        while let Some(u) = queue.pop() {
            if removed[u as usize] {
                continue;
            }
            removed[u as usize] = true;
            for &p in &in_adj[u as usize] {
                if removed[p as usize] {
                    continue;
                }
                out_deg[p as usize] -= 1;
                if prunable(&out_deg, p as usize) {
                    queue.push(p);
                }
            }
        }

        let mut remap = vec![NO_NODE; n];
        let mut names = Vec::new();
        for u in 0..n {
            if !removed[u] {
                remap[u] = names.len() as u32;
                names.push(self.names[u].clone());
            }
        }
        let arcs: Vec<Arc> = self
            .arcs
            .iter()
            .filter(|a| !removed[a.tail as usize] && !removed[a.head as usize])
            .map(|a| Arc::new(remap[a.tail as usize], remap[a.head as usize]))
            .collect();
        let commodities: Vec<Commodity> = kept
            .iter()
            .map(|c| Commodity::new(remap[c.source as usize], remap[c.sink as usize]))
            .collect();
        Instance::new(names, arcs, commodities)
    }

    /// True iff [`Instance::normalize`] would be a no-op: no trivial or
    /// duplicate commodities, and every leaf without outgoing arcs is a
    /// sink (interior nodes are exempt — see [`Instance::normalize`]).
    pub fn is_normalized(&self) -> bool {
        let mut seen = BTreeSet::new();
        for c in &self.commodities {
            if c.source == c.sink || !seen.insert((c.source, c.sink)) {
                return false;
            }
        }
        if self.commodities.is_empty() {
            return false;
        }
        let out_deg = self.out_degrees();
        let mut in_deg = vec![0u32; self.names.len()];
        for a in &self.arcs {
            in_deg[a.head as usize] += 1;
        }
        let mut is_sink = vec![false; self.names.len()];
        for c in &self.commodities {
            is_sink[c.sink as usize] = true;
        }
        (0..self.names.len()).all(|u| out_deg[u] > 0 || in_deg[u] > 1 || is_sink[u])
    }

    /// Most specific shape class of this instance. Priority: single-source
    /// tree, out-tree, star, junction tree, general tree, non-tree.
    pub fn classify(&self) -> ShapeClass {
        let Some(td) = self.tree.as_ref() else {
            return ShapeClass::NonTree;
        };
        let sources = self.sources();
        if td.out_tree && sources.len() == 1 {
            return ShapeClass::SingleSourceTree {
                source: sources[0],
            };
        }
        if td.out_tree {
            return ShapeClass::OutTree { root: td.root };
        }
        let n = self.names.len();
        let mut udeg = vec![0usize; n];
        for a in &self.arcs {
            udeg[a.tail as usize] += 1;
            udeg[a.head as usize] += 1;
        }
        if let Some(center) = (0..n).find(|&u| udeg[u] == n - 1) {
            return ShapeClass::Star {
                center: center as u32,
            };
        }
        if !self.commodities.is_empty() {
            let mut on_all = vec![0usize; n];
            for k in 0..self.commodities.len() {
                let path = self
                    .commodity_path(k)
                    .expect("tree instance has commodity paths");
                for u in path {
                    on_all[u as usize] += 1;
                }
            }
            if let Some(j) = (0..n).find(|&u| on_all[u] == self.commodities.len()) {
                return ShapeClass::JunctionTree { junction: j as u32 };
            }
        }
        ShapeClass::GeneralTree
    }

    /// Checks a candidate solution: every solution arc must lie in the
    /// closure of the network, and every commodity must be routable inside
    /// `h ∩ cl(P_k)` — a monotone hop sequence along its path. Tree
    /// instances only.
    pub fn is_feasible(&self, h: &Solution) -> Result<bool, FeasibilityError> {
        if self.tree.is_none() {
            return Err(FeasibilityError::NotATree);
        }
        let n = self.names.len() as u32;
        for a in h.arcs() {
            if a.tail >= n {
                return Err(FeasibilityError::NodeOutOfRange(a.tail));
            }
            if a.head >= n {
                return Err(FeasibilityError::NodeOutOfRange(a.head));
            }
            if a.tail == a.head || !self.tree_path_exists(a.tail, a.head) {
                return Err(FeasibilityError::ArcNotInClosure(*a));
            }
        }

        // Hop adjacency of the solution.
        let mut hadj = vec![Vec::new(); self.names.len()];
        for a in h.arcs() {
            hadj[a.tail as usize].push(a.head);
        }

        // Per commodity: furthest-reach sweep over its path positions. A
        // solution arc may be used iff both endpoints are on the path and
        // it jumps forward — exactly the arcs of h ∩ cl(P_k).
        let mut stamp = vec![u32::MAX; self.names.len()];
        let mut pos = vec![0u32; self.names.len()];
        for k in 0..self.commodities.len() {
            let c = self.commodities[k];
            if c.source == c.sink {
                continue;
            }
            let path = self.commodity_path(k).expect("validated commodity");
            for (p, &u) in path.iter().enumerate() {
                stamp[u as usize] = k as u32;
                pos[u as usize] = p as u32;
            }
            let last = (path.len() - 1) as u32;
            let mut reach = 0u32;
            let mut at = 0usize;
            while at as u32 <= reach && reach < last {
                let u = path[at];
                for &w in &hadj[u as usize] {
                    if stamp[w as usize] == k as u32 && pos[w as usize] > at as u32 {
                        reach = reach.max(pos[w as usize]);
                    }
                }
                at += 1;
            }
            if reach < last {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// A candidate routing: a set of closure arcs with per-node out-degrees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    arcs: Vec<Arc>,
    out_degree: Vec<u32>,
    max_out_degree: u32,
}

impl Solution {
    /// Builds a solution over `node_count` nodes from an arc collection.
    /// Arcs are sorted and deduplicated; out-degrees are tallied.
    pub fn from_arcs(node_count: usize, arcs: impl IntoIterator<Item = Arc>) -> Self {
        let mut arcs: Vec<Arc> = arcs.into_iter().collect();
        arcs.sort_unstable();
        arcs.dedup();
        let mut out_degree = vec![0u32; node_count];
        for a in &arcs {
            debug_assert!((a.tail as usize) < node_count && (a.head as usize) < node_count);
            out_degree[a.tail as usize] += 1;
        }
        let max_out_degree = out_degree.iter().copied().max().unwrap_or(0);
        Solution {
            arcs,
            out_degree,
            max_out_degree,
        }
    }

    /// The solution arcs, sorted by (tail, head).
    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    /// Out-degree of node `u` in the solution.
    pub fn out_degree(&self, u: u32) -> u32 {
        self.out_degree[u as usize]
    }

    /// Maximum out-degree over all nodes — the objective value.
    pub fn max_out_degree(&self) -> u32 {
        self.max_out_degree
    }

    /// Number of arcs.
    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }
}

fn undirected_csr(n: usize, arcs: &[Arc]) -> (Vec<u32>, Vec<(u32, bool)>) {
    let mut off = vec![0u32; n + 1];
    for a in arcs {
        off[a.tail as usize + 1] += 1;
        off[a.head as usize + 1] += 1;
    }
    for i in 0..n {
        off[i + 1] += off[i];
    }
    let mut fill = off.clone();
    let mut adj = vec![(0u32, false); 2 * arcs.len()];
    for a in arcs {
        // Entry (w, down): neighbor w, and whether walking u → w follows
        // the arc's own direction.
        adj[fill[a.tail as usize] as usize] = (a.head, true);
        fill[a.tail as usize] += 1;
        adj[fill[a.head as usize] as usize] = (a.tail, false);
        fill[a.head as usize] += 1;
    }
    (off, adj)
}

fn directed_csr(n: usize, arcs: &[Arc]) -> (Vec<u32>, Vec<u32>) {
    let mut off = vec![0u32; n + 1];
    for a in arcs {
        off[a.tail as usize + 1] += 1;
    }
    for i in 0..n {
        off[i + 1] += off[i];
    }
    let mut fill = off.clone();
    let mut adj = vec![0u32; arcs.len()];
    for a in arcs {
        adj[fill[a.tail as usize] as usize] = a.head;
        fill[a.tail as usize] += 1;
    }
    (off, adj)
}

fn build_tree_data(
    n: usize,
    arcs: &[Arc],
    uoff: &[u32],
    uadj: &[(u32, bool)],
) -> TreeData {
    let mut in_deg = vec![0u32; n];
    for a in arcs {
        in_deg[a.head as usize] += 1;
    }
    let out_tree = in_deg.iter().all(|&d| d <= 1);
    let root = if out_tree {
        in_deg
            .iter()
            .position(|&d| d == 0)
            .expect("a connected tree has an in-degree-0 node when all in-degrees are <= 1")
            as u32
    } else {
        0
    };

    let mut uparent = vec![NO_NODE; n];
    let mut depth = vec![0u32; n];
    let mut arc_down = vec![false; n];
    let mut seen = vec![false; n];
    let mut stack = vec![root];
    seen[root as usize] = true;
    while let Some(u) = stack.pop() {
        for &(w, down) in &uadj[uoff[u as usize] as usize..uoff[u as usize + 1] as usize] {
            if !seen[w as usize] {
                seen[w as usize] = true;
                uparent[w as usize] = u;
                depth[w as usize] = depth[u as usize] + 1;
                arc_down[w as usize] = down;
                stack.push(w);
            }
        }
    }
    TreeData {
        root,
        uparent,
        depth,
        arc_down,
        out_tree,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    pub(crate) fn names(list: &[&str]) -> Vec<String> {
        list.iter().map(|s| s.to_string()).collect()
    }

    fn inst(n: &[&str], arcs: &[(u32, u32)], coms: &[(u32, u32)]) -> Instance {
        Instance::new(
            names(n),
            arcs.iter().map(|&(t, h)| Arc::new(t, h)).collect(),
            coms.iter().map(|&(s, t)| Commodity::new(s, t)).collect(),
        )
        .expect("valid test instance")
    }

    /// Fan: s → a, a → l1..l_k, commodities (s, l_i).
    fn fan(k: usize) -> Instance {
        let mut n = alloc::vec!["s".to_string(), "a".to_string()];
        let mut arcs = alloc::vec![Arc::new(0, 1)];
        let mut coms = Vec::new();
        for i in 0..k {
            n.push(alloc::format!("l{}", i + 1));
            arcs.push(Arc::new(1, 2 + i as u32));
            coms.push(Commodity::new(0, 2 + i as u32));
        }
        Instance::new(n, arcs, coms).unwrap()
    }

    #[test]
    fn rejects_duplicate_arcs_and_self_loops() {
        let err = Instance::new(
            names(&["a", "b"]),
            alloc::vec![Arc::new(0, 1), Arc::new(0, 1)],
            Vec::new(),
        )
        .unwrap_err();
        assert_eq!(err, InstanceError::DuplicateArc(Arc::new(0, 1)));

        let err = Instance::new(names(&["a"]), alloc::vec![Arc::new(0, 0)], Vec::new())
            .unwrap_err();
        assert_eq!(err, InstanceError::SelfLoop(0));
    }

    #[test]
    fn rejects_disconnected_and_missing_paths() {
        let err = Instance::new(
            names(&["a", "b", "c"]),
            alloc::vec![Arc::new(0, 1)],
            Vec::new(),
        )
        .unwrap_err();
        assert_eq!(err, InstanceError::Disconnected(2));

        // b → a exists, but the commodity wants a → b.
        let err = Instance::new(
            names(&["a", "b"]),
            alloc::vec![Arc::new(1, 0)],
            alloc::vec![Commodity::new(0, 1)],
        )
        .unwrap_err();
        assert_eq!(err, InstanceError::NoPath { source: 0, sink: 1 });
    }

    #[test]
    fn paths_follow_arc_directions() {
        // a → b ← c: no a→c path even though they are tree-connected.
        let i = inst(&["a", "b", "c"], &[(0, 1), (2, 1)], &[(0, 1)]);
        assert!(i.is_tree());
        assert!(!i.is_out_tree());
        assert_eq!(i.path_nodes(0, 1), Some(alloc::vec![0, 1]));
        assert_eq!(i.path_nodes(0, 2), None);
        assert_eq!(i.closure_contains(0, 1), Some(true));
        assert_eq!(i.closure_contains(0, 2), Some(false));
    }

    #[test]
    fn commodity_path_spans_chain() {
        let i = inst(
            &["r", "u", "v", "w"],
            &[(0, 1), (1, 2), (2, 3)],
            &[(0, 3)],
        );
        assert_eq!(i.commodity_path(0), Some(alloc::vec![0, 1, 2, 3]));
        assert!(i.is_out_tree());
        assert_eq!(i.out_tree_root(), Some(0));
    }

    #[test]
    fn normalize_drops_trivial_duplicates_and_bare_leaves() {
        // d is a leaf nobody sinks at; commodity list has a dup and a
        // trivial entry.
        let i = inst(
            &["s", "a", "b", "d"],
            &[(0, 1), (1, 2), (1, 3)],
            &[(0, 2), (0, 2), (1, 1), (0, 2)],
        );
        let n = i.normalize().unwrap();
        assert_eq!(n.node_count(), 3);
        assert_eq!(n.commodities(), &[Commodity::new(0, 2)]);
        assert!(n.is_normalized());
        // Idempotent.
        let again = n.normalize().unwrap();
        assert_eq!(again.node_count(), n.node_count());
        assert_eq!(again.arcs(), n.arcs());
        assert_eq!(again.commodities(), n.commodities());
    }

    #[test]
    fn normalize_prunes_leaf_chains() {
        // s → a → b → c with only (s, a) demanded: b and c both go.
        let i = inst(
            &["s", "a", "b", "c"],
            &[(0, 1), (1, 2), (2, 3)],
            &[(0, 1)],
        );
        let n = i.normalize().unwrap();
        assert_eq!(n.node_count(), 2);
        assert_eq!(n.arcs(), &[Arc::new(0, 1)]);
    }

    #[test]
    fn normalize_errors_when_nothing_remains() {
        let i = inst(&["a", "b"], &[(0, 1)], &[(0, 0)]);
        assert_eq!(i.normalize().unwrap_err(), InstanceError::NoCommodities);
    }

    #[test]
    fn normalize_keeps_interior_nodes_without_outgoing_arcs() {
        // x → a → c ← b with only (x, a) demanded. c has no outgoing arcs
        // and no sink role, but it sits between a and b: deleting it would
        // disconnect the network, so it must survive.
        let i = inst(
            &["x", "a", "c", "b"],
            &[(0, 1), (1, 2), (3, 2)],
            &[(0, 1)],
        );
        let n = i.normalize().unwrap();
        assert_eq!(n.node_count(), 4);
        assert_eq!(n.arcs(), i.arcs());
        assert!(n.is_normalized());
    }

    #[test]
    fn classify_priorities() {
        // Fan: out-tree + one source = single-source tree.
        assert_eq!(
            fan(3).classify(),
            ShapeClass::SingleSourceTree { source: 0 }
        );

        // Two sources on an out-tree.
        let i = inst(
            &["r", "u", "x", "y"],
            &[(0, 1), (1, 2), (1, 3)],
            &[(0, 2), (1, 3)],
        );
        assert_eq!(i.classify(), ShapeClass::OutTree { root: 0 });

        // Two source leaves pointing into a hub: star.
        let i = inst(
            &["v", "s1", "s2", "t"],
            &[(1, 0), (2, 0), (0, 3)],
            &[(1, 3), (2, 3)],
        );
        assert_eq!(i.classify(), ShapeClass::Star { center: 0 });

        // Both paths share only the middle node m; not a star.
        let i = inst(
            &["m", "a", "b", "c", "d", "e"],
            &[(1, 2), (2, 0), (0, 3), (3, 4), (5, 0)],
            &[(1, 4), (5, 3)],
        );
        assert_eq!(i.classify(), ShapeClass::JunctionTree { junction: 0 });

        // In-degree-2 joint and disjoint commodity paths: general tree.
        let i = inst(
            &["a", "b", "m", "c", "d"],
            &[(0, 1), (2, 1), (2, 3), (3, 4)],
            &[(0, 1), (3, 4)],
        );
        assert_eq!(i.classify(), ShapeClass::GeneralTree);

        // Anti-parallel pair: not a tree.
        let i = inst(&["a", "b"], &[(0, 1), (1, 0)], &[(0, 1)]);
        assert_eq!(i.classify(), ShapeClass::NonTree);
    }

    #[test]
    fn feasibility_accepts_shortcuts_and_rejects_gaps() {
        let i = fan(3);
        // Direct arcs from the source to every sink: all closure arcs.
        let direct = Solution::from_arcs(
            i.node_count(),
            i.commodities().iter().map(|c| Arc::new(c.source, c.sink)),
        );
        assert_eq!(direct.max_out_degree(), 3);
        assert!(i.is_feasible(&direct).unwrap());

        // The network itself routes everything.
        let network = Solution::from_arcs(i.node_count(), i.arcs().iter().copied());
        assert!(i.is_feasible(&network).unwrap());

        // Missing the last hop: infeasible.
        let partial = Solution::from_arcs(i.node_count(), [Arc::new(0, 1), Arc::new(1, 2)]);
        assert!(!i.is_feasible(&partial).unwrap());

        // An arc outside the closure is an error, not mere infeasibility.
        let bogus = Solution::from_arcs(i.node_count(), [Arc::new(2, 0)]);
        assert_eq!(
            i.is_feasible(&bogus).unwrap_err(),
            FeasibilityError::ArcNotInClosure(Arc::new(2, 0))
        );
    }

    #[test]
    fn feasibility_requires_hops_on_the_own_path() {
        // Two commodities on a chain r → u → v; (r, v) may hop r → v, but
        // that hop is useless for (u, v) whose path excludes r.
        let i = inst(&["r", "u", "v"], &[(0, 1), (1, 2)], &[(0, 2), (1, 2)]);
        let h = Solution::from_arcs(i.node_count(), [Arc::new(0, 2)]);
        assert!(!i.is_feasible(&h).unwrap());
        let h = Solution::from_arcs(i.node_count(), [Arc::new(0, 2), Arc::new(1, 2)]);
        assert!(i.is_feasible(&h).unwrap());
    }

    #[test]
    fn solution_dedups_and_tallies() {
        let s = Solution::from_arcs(
            3,
            [Arc::new(0, 1), Arc::new(0, 2), Arc::new(0, 1)],
        );
        assert_eq!(s.arc_count(), 2);
        assert_eq!(s.out_degree(0), 2);
        assert_eq!(s.max_out_degree(), 2);
    }

    #[test]
    fn derived_accessors() {
        let i = inst(
            &["r", "u", "x", "y"],
            &[(0, 1), (1, 2), (1, 3)],
            &[(0, 2), (1, 3), (1, 2)],
        );
        assert_eq!(i.sources(), alloc::vec![0, 1]);
        assert_eq!(i.sinks(), alloc::vec![2, 3]);
        assert_eq!(i.sinks_of(1), alloc::vec![2, 3]);
        assert_eq!(i.sources_of(2), alloc::vec![0, 1]);
        assert_eq!(i.out_degrees(), alloc::vec![1, 2, 0, 0]);
        assert_eq!(i.in_degrees(), alloc::vec![0, 1, 1, 1]);
    }

    #[test]
    fn junk_above_source_is_tree_but_not_single_source_rooted_there() {
        // x → s → a → t, commodity (s, t): out-tree rooted at x, single
        // distinct source s.
        let i = inst(&["x", "s", "a", "t"], &[(0, 1), (1, 2), (2, 3)], &[(1, 3)]);
        assert_eq!(i.classify(), ShapeClass::SingleSourceTree { source: 1 });
        assert_eq!(i.out_tree_root(), Some(0));
        // Normalization keeps x: it has an out-arc. (Junk above the source
        // is handled by the solvers, which route nothing through it.)
        assert!(i.is_normalized());
    }
}
