//! Openly-disjoint path counting by max flow on the vertex-split graph:
//! every non-endpoint vertex becomes an in/out pair joined by a unit arc,
//! edges become arcs of capacity equal to their multiplicity (both ways
//! when undirected), and the flow value equals the number of paths sharing
//! only their endpoints. Witness paths come from flow decomposition and a
//! cut witness from residual reachability.

use crate::gadgets::NetworkInstance;

use super::OracleError;

/// An edge/vertex filter over a network instance.
#[derive(Clone, Debug)]
pub struct SubgraphView<'a> {
    pub instance: &'a NetworkInstance,
    pub active_edge: Vec<bool>,
    pub removed_vertex: Vec<bool>,
}

impl<'a> SubgraphView<'a> {
    pub fn full(instance: &'a NetworkInstance) -> Self {
        SubgraphView {
            instance,
            active_edge: vec![true; instance.edges.len()],
            removed_vertex: vec![false; instance.vertex_count()],
        }
    }

    /// Zero-cost edges plus the chosen ones; the design-problem subgraph.
    pub fn design(instance: &'a NetworkInstance, chosen: &[usize]) -> Self {
        let mut active_edge: Vec<bool> = instance
            .edges
            .iter()
            .map(|e| e.cost == crate::gadgets::EdgeCost::Zero)
            .collect();
        for &e in chosen {
            active_edge[e] = true;
        }
        SubgraphView { instance, active_edge, removed_vertex: vec![false; instance.vertex_count()] }
    }

    /// Everything except the removed edges; the cut-problem residual graph.
    pub fn cut(instance: &'a NetworkInstance, removed: &[usize]) -> Self {
        let mut view = Self::full(instance);
        for &e in removed {
            view.active_edge[e] = false;
        }
        view
    }

    pub fn without_vertices(mut self, vertices: &[usize]) -> Self {
        for &v in vertices {
            self.removed_vertex[v] = true;
        }
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowCertificate {
    pub s: usize,
    pub t: usize,
    pub path_count: u32,
    /// Pairwise openly disjoint s-t paths as vertex sequences.
    pub witness_paths: Vec<Vec<usize>>,
    /// Vertices whose removal, together with the direct s-t edges, separates
    /// the pair; |cut_vertices| + cut_direct_mult = path_count.
    pub cut_vertices: Vec<usize>,
    pub cut_direct_mult: u32,
}

impl FlowCertificate {
    /// Re-derives both sides of the certificate from the view: the witness
    /// paths must be openly disjoint paths of the subgraph and the cut must
    /// separate. Independent of the flow computation that produced it.
    pub fn verify(&self, view: &SubgraphView) -> Result<(), String> {
        if self.witness_paths.len() != self.path_count as usize {
            return Err(format!(
                "{} witness paths for path count {}",
                self.witness_paths.len(),
                self.path_count
            ));
        }
        let adjacency = adjacency_multiset(view);
        let mut interior_seen = std::collections::BTreeSet::new();
        let mut direct_used = 0u32;
        for path in &self.witness_paths {
            if path.first() != Some(&self.s) || path.last() != Some(&self.t) {
                return Err("witness path endpoints wrong".into());
            }
            if path.len() == 2 {
                direct_used += 1;
            }
            for pair in path.windows(2) {
                if !adjacency.contains_key(&(pair[0], pair[1])) {
                    return Err(format!("witness uses missing edge {}-{}", pair[0], pair[1]));
                }
            }
            for &v in &path[1..path.len() - 1] {
                if !interior_seen.insert(v) {
                    return Err(format!("witness paths share interior vertex {v}"));
                }
            }
        }
        let direct_cap: u32 = adjacency.get(&(self.s, self.t)).copied().unwrap_or(0);
        if direct_used > direct_cap {
            return Err("more direct witness paths than direct multiplicity".into());
        }
        if self.cut_vertices.len() as u32 + self.cut_direct_mult != self.path_count {
            return Err("cut size does not match path count".into());
        }
        if self.cut_direct_mult != direct_cap && self.cut_direct_mult != 0 {
            // a direct edge can only be "cut" by accounting for all copies
            return Err("direct cut count neither zero nor the full multiplicity".into());
        }
        if separated(view, self.s, self.t, &self.cut_vertices) {
            Ok(())
        } else {
            Err("cut witness does not separate".into())
        }
    }
}

fn adjacency_multiset(view: &SubgraphView) -> std::collections::BTreeMap<(usize, usize), u32> {
    let mut map = std::collections::BTreeMap::new();
    for (idx, e) in view.instance.edges.iter().enumerate() {
        if !view.active_edge[idx] || view.removed_vertex[e.u] || view.removed_vertex[e.v] {
            continue;
        }
        *map.entry((e.u, e.v)).or_insert(0) += e.mult;
        if !view.instance.directed {
            *map.entry((e.v, e.u)).or_insert(0) += e.mult;
        }
    }
    map
}

/// BFS check that removing the cut vertices and all direct s-t edges leaves
/// no s-t path.
fn separated(view: &SubgraphView, s: usize, t: usize, cut: &[usize]) -> bool {
    let n = view.instance.vertex_count();
    let mut blocked = vec![false; n];
    for &v in cut {
        blocked[v] = true;
    }
    let mut adj = vec![Vec::new(); n];
    for (idx, e) in view.instance.edges.iter().enumerate() {
        if !view.active_edge[idx] || view.removed_vertex[e.u] || view.removed_vertex[e.v] {
            continue;
        }
        if (e.u == s && e.v == t) || (!view.instance.directed && e.u == t && e.v == s) {
            continue;
        }
        adj[e.u].push(e.v);
        if !view.instance.directed {
            adj[e.v].push(e.u);
        }
    }
    let mut seen = vec![false; n];
    let mut queue = std::collections::VecDeque::new();
    seen[s] = true;
    queue.push_back(s);
    while let Some(u) = queue.pop_front() {
        if u == t {
            return false;
        }
        for &v in &adj[u] {
            if !seen[v] && !blocked[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    true
}

const INF_CAP: u32 = u32::MAX / 4;

struct Dinic {
    n: usize,
    to: Vec<usize>,
    cap: Vec<u32>,
    adj: Vec<Vec<usize>>,
    level: Vec<u32>,
    iter: Vec<usize>,
}

impl Dinic {
    fn new(n: usize) -> Self {
        Dinic {
            n,
            to: Vec::new(),
            cap: Vec::new(),
            adj: vec![Vec::new(); n],
            level: vec![0; n],
            iter: vec![0; n],
        }
    }

    fn add_arc(&mut self, u: usize, v: usize, cap: u32) -> usize {
        let id = self.to.len();
        self.to.push(v);
        self.cap.push(cap);
        self.adj[u].push(id);
        self.to.push(u);
        self.cap.push(0);
        self.adj[v].push(id + 1);
        id
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = u32::MAX);
        let mut queue = std::collections::VecDeque::new();
        self.level[s] = 0;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            for &id in &self.adj[u] {
                let v = self.to[id];
                if self.cap[id] > 0 && self.level[v] == u32::MAX {
                    self.level[v] = self.level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        self.level[t] != u32::MAX
    }

    fn dfs(&mut self, u: usize, t: usize, limit: u32) -> u32 {
        if u == t {
            return limit;
        }
        while self.iter[u] < self.adj[u].len() {
            let id = self.adj[u][self.iter[u]];
            let v = self.to[id];
            if self.cap[id] > 0 && self.level[v] == self.level[u] + 1 {
                let pushed = self.dfs(v, t, limit.min(self.cap[id]));
                if pushed > 0 {
                    self.cap[id] -= pushed;
                    self.cap[id ^ 1] += pushed;
                    return pushed;
                }
            }
            self.iter[u] += 1;
        }
        0
    }

    /// Max flow, stopping early once `limit` units have been pushed.
    fn max_flow(&mut self, s: usize, t: usize, limit: u32) -> u32 {
        let mut flow = 0;
        while flow < limit && self.bfs(s, t) {
            self.iter.iter_mut().for_each(|i| *i = 0);
            loop {
                let pushed = self.dfs(s, t, limit - flow);
                if pushed == 0 {
                    break;
                }
                flow += pushed;
                if flow >= limit {
                    break;
                }
            }
        }
        flow
    }

    fn residual_reachable(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.n];
        let mut queue = std::collections::VecDeque::new();
        seen[s] = true;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            for &id in &self.adj[u] {
                let v = self.to[id];
                if self.cap[id] > 0 && !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen
    }
}

struct SplitGraph {
    dinic: Dinic,
    /// Arc id of each vertex's internal in->out arc (absent for endpoints).
    internal: Vec<Option<usize>>,
    /// (arc id, original edge, u, v) per emitted edge arc.
    edge_arcs: Vec<(usize, usize, usize, usize)>,
    s_out: usize,
    t_in: usize,
}

fn build_split(view: &SubgraphView, s: usize, t: usize) -> SplitGraph {
    let n = view.instance.vertex_count();
    let v_in = |v: usize| 2 * v;
    let v_out = |v: usize| 2 * v + 1;
    let mut dinic = Dinic::new(2 * n);
    let mut internal = vec![None; n];
    for v in 0..n {
        if view.removed_vertex[v] {
            continue;
        }
        let cap = if v == s || v == t { INF_CAP } else { 1 };
        internal[v] = Some(dinic.add_arc(v_in(v), v_out(v), cap));
    }
    let mut edge_arcs = Vec::new();
    for (idx, e) in view.instance.edges.iter().enumerate() {
        if !view.active_edge[idx] || view.removed_vertex[e.u] || view.removed_vertex[e.v] {
            continue;
        }
        let id = dinic.add_arc(v_out(e.u), v_in(e.v), e.mult);
        edge_arcs.push((id, idx, e.u, e.v));
        if !view.instance.directed {
            let id = dinic.add_arc(v_out(e.v), v_in(e.u), e.mult);
            edge_arcs.push((id, idx, e.v, e.u));
        }
    }
    SplitGraph { dinic, internal, edge_arcs, s_out: v_out(s), t_in: v_in(t) }
}

/// True when at least `target` openly disjoint s-t paths exist in the view.
pub fn flow_at_least(view: &SubgraphView, s: usize, t: usize, target: u32) -> Result<bool, OracleError> {
    if s == t {
        return Err(OracleError::SameEndpoints(s));
    }
    check_endpoints(view, s, t)?;
    if target == 0 {
        return Ok(true);
    }
    let mut split = build_split(view, s, t);
    Ok(split.dinic.max_flow(split.s_out, split.t_in, target) >= target)
}

fn check_endpoints(view: &SubgraphView, s: usize, t: usize) -> Result<(), OracleError> {
    let n = view.instance.vertex_count();
    if s >= n || t >= n {
        return Err(OracleError::UnknownVertex(s.max(t)));
    }
    Ok(())
}

/// Exact openly disjoint path count with witness paths and a cut witness.
pub fn opcount(view: &SubgraphView, s: usize, t: usize) -> Result<FlowCertificate, OracleError> {
    if s == t {
        return Err(OracleError::SameEndpoints(s));
    }
    check_endpoints(view, s, t)?;
    let mut split = build_split(view, s, t);
    let value = split.dinic.max_flow(split.s_out, split.t_in, INF_CAP);

    // per-arc flow for decomposition, in emission order for determinism
    let mut flow_on: std::collections::BTreeMap<usize, u32> = std::collections::BTreeMap::new();
    let mut out_arcs: Vec<Vec<usize>> = vec![Vec::new(); split.dinic.n];
    for &(id, _, u, _) in &split.edge_arcs {
        let f = split.dinic.cap[id ^ 1];
        if f > 0 {
            flow_on.insert(id, f);
            out_arcs[2 * u + 1].push(id);
        }
    }
    for (v, arc) in split.internal.iter().enumerate() {
        if let Some(id) = arc {
            let f = split.dinic.cap[id ^ 1];
            if f > 0 {
                flow_on.insert(*id, f);
                out_arcs[2 * v].push(*id);
            }
        }
    }

    // Walk each unit of flow from the source. Unit vertex capacities keep
    // the walks acyclic; cycles of leftover flow never touch path vertices.
    let mut witness_paths = Vec::new();
    for _ in 0..value {
        let mut path = vec![s];
        let mut node = split.s_out;
        let mut hops = 0usize;
        loop {
            let &edge_arc = out_arcs[node]
                .iter()
                .find(|&&id| flow_on.get(&id).copied().unwrap_or(0) > 0)
                .expect("flow conservation yields an outgoing edge arc");
            *flow_on.get_mut(&edge_arc).unwrap() -= 1;
            node = split.dinic.to[edge_arc];
            if node == split.t_in {
                path.push(t);
                break;
            }
            path.push(node / 2);
            let &internal_arc = out_arcs[node]
                .iter()
                .find(|&&id| flow_on.get(&id).copied().unwrap_or(0) > 0)
                .expect("interior vertex passes flow through");
            *flow_on.get_mut(&internal_arc).unwrap() -= 1;
            node = split.dinic.to[internal_arc];
            hops += 1;
            assert!(hops <= split.dinic.n, "flow decomposition walked a cycle");
        }
        witness_paths.push(path);
    }

    // Residual cut: crossing saturated internal arcs give cut vertices
    // directly. A crossing edge arc is saturated at multiplicity 1 and has
    // an endpoint at s or t (interior throughput is 1), so its interior
    // endpoint substitutes for it; direct s->t arcs account for the rest.
    let reach = split.dinic.residual_reachable(split.s_out);
    let mut cut_vertex_set = std::collections::BTreeSet::new();
    for (v, arc) in split.internal.iter().enumerate() {
        if arc.is_some() && v != s && v != t && reach[2 * v] && !reach[2 * v + 1] {
            cut_vertex_set.insert(v);
        }
    }
    let mut cut_direct_mult = 0;
    for &(id, edge, u, v) in &split.edge_arcs {
        if reach[2 * u + 1] && !reach[2 * v] && split.dinic.cap[id] == 0 {
            if u == s && v == t {
                cut_direct_mult += view.instance.edges[edge].mult;
            } else if u == s {
                cut_vertex_set.insert(v);
            } else if v == t {
                cut_vertex_set.insert(u);
            } else {
                debug_assert!(false, "crossing edge arc between interior vertices {u}->{v}");
            }
        }
    }
    let cut_vertices: Vec<usize> = cut_vertex_set.into_iter().collect();

    Ok(FlowCertificate {
        s,
        t,
        path_count: value,
        witness_paths,
        cut_vertices,
        cut_direct_mult,
    })
}
