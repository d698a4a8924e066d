//! Maximum subgraph density `max |e(H)| / |v(H)|` and a densest subgraph.
//!
//! Both are solved exactly with the Goldberg min-cut construction: for a
//! candidate density `a/b` the network
//! `source -(b)-> edge -(inf)-> endpoints -(a)-> sink`
//! has minimum cut `b|E| - max_S (b|E(S)| - a|S|)`. Dinkelbach iteration on
//! the maximiser converges to the optimum in a handful of cuts and never
//! leaves exact integer arithmetic.

use num_rational::Ratio;

use super::Graph;
use crate::error::{Error, Result};

/// Exact edge density `|e| / |v|`.
pub type Density = Ratio<u64>;

/// A vertex subset of a host graph together with the subgraph it induces
/// (vertices relabelled to `0..k` in increasing host id order).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgraph {
    pub vertices: Vec<usize>,
    pub graph: Graph,
}

pub fn max_subgraph_density(g: &Graph) -> Result<Density> {
    if g.edge_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    let mut net = DensityNetwork::new(g);
    let mut best = Density::new(g.edge_count() as u64, non_isolated(g) as u64);
    loop {
        let (gain, set) = net.best_set(best, None);
        if gain == 0 {
            return Ok(best);
        }
        best = Density::new(induced_edges(g, &set) as u64, set.len() as u64);
    }
}

/// Densest subgraph with the fewest vertices; among those, the one whose
/// sorted vertex list is lexicographically smallest.
pub fn densest_subgraph(g: &Graph) -> Result<Subgraph> {
    let mu = max_subgraph_density(g)?;
    let mut net = DensityNetwork::new(g);
    // Maximisers of |E(S)| - mu|S| are closed under intersection, so the
    // smallest one containing v is unique, and every minimum-size densest set
    // is the smallest maximiser of each of its members.
    let mut best: Option<Vec<usize>> = None;
    for v in 0..g.vertex_count() {
        if g.degree(v) == 0 {
            continue;
        }
        let (gain, set) = net.best_set(mu, Some(v));
        if gain != 0 {
            continue;
        }
        let better = match &best {
            None => true,
            Some(b) => (set.len(), &set) < (b.len(), b),
        };
        if better {
            best = Some(set);
        }
    }
    let vertices = best.expect("a densest subgraph exists");
    let graph = g.induced(&vertices);
    Ok(Subgraph { vertices, graph })
}

/// Exhaustive oracle over all vertex subsets, for graphs with at most 20
/// vertices.
pub fn max_subgraph_density_exhaustive(g: &Graph) -> Result<Density> {
    let n = g.vertex_count();
    if g.edge_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    if n > 20 {
        return Err(Error::budget("exhaustive density vertices", n as u128, 20u128));
    }
    let masks: Vec<(u32, u32)> = g
        .edges()
        .iter()
        .map(|&(u, v)| (1u32 << u, 1u32 << v))
        .collect();
    let mut best = Density::new(0, 1);
    for set in 1u32..(1u32 << n) {
        let e = masks
            .iter()
            .filter(|&&(a, b)| set & a != 0 && set & b != 0)
            .count() as u64;
        let d = Density::new(e, set.count_ones() as u64);
        if d > best {
            best = d;
        }
    }
    Ok(best)
}

fn non_isolated(g: &Graph) -> usize {
    (0..g.vertex_count()).filter(|&v| g.degree(v) > 0).count()
}

fn induced_edges(g: &Graph, sorted: &[usize]) -> usize {
    g.edges()
        .iter()
        .filter(|(u, v)| sorted.binary_search(u).is_ok() && sorted.binary_search(v).is_ok())
        .count()
}

const INF: i64 = i64::MAX / 4;

struct DensityNetwork<'a> {
    g: &'a Graph,
    flow: Dinic,
    source: usize,
    sink: usize,
}

impl<'a> DensityNetwork<'a> {
    fn new(g: &'a Graph) -> Self {
        let m = g.edge_count();
        let n = g.vertex_count();
        let source = 0;
        let sink = m + n + 1;
        Self {
            g,
            flow: Dinic::new(m + n + 2),
            source,
            sink,
        }
    }

    fn vertex_node(&self, v: usize) -> usize {
        1 + self.g.edge_count() + v
    }

    /// Maximises `b|E(S)| - a|S|` for `density = a/b`, optionally forcing a
    /// vertex into `S`. Returns the optimum and the smallest maximiser.
    fn best_set(&mut self, density: Density, forced: Option<usize>) -> (i64, Vec<usize>) {
        let a = *density.numer() as i64;
        let b = *density.denom() as i64;
        self.flow.clear();
        for (i, &(u, v)) in self.g.edges().iter().enumerate() {
            let e = 1 + i;
            self.flow.add_edge(self.source, e, b);
            let (nu, nv) = (self.vertex_node(u), self.vertex_node(v));
            self.flow.add_edge(e, nu, INF);
            self.flow.add_edge(e, nv, INF);
        }
        for v in 0..self.g.vertex_count() {
            let node = self.vertex_node(v);
            self.flow.add_edge(node, self.sink, a);
        }
        if let Some(v) = forced {
            let node = self.vertex_node(v);
            self.flow.add_edge(self.source, node, INF);
        }
        let cut = self.flow.max_flow(self.source, self.sink);
        let reach = self.flow.reachable(self.source);
        let set: Vec<usize> = (0..self.g.vertex_count())
            .filter(|&v| reach[self.vertex_node(v)])
            .collect();
        // The forced arc has infinite capacity and never enters a minimum cut.
        (b * self.g.edge_count() as i64 - cut, set)
    }
}

struct Arc {
    to: usize,
    cap: i64,
}

/// Dinic's maximum flow on an adjacency list of arc indices; arc `i ^ 1` is
/// the reverse of arc `i`.
struct Dinic {
    arcs: Vec<Arc>,
    out: Vec<Vec<usize>>,
    level: Vec<i32>,
    next: Vec<usize>,
}

impl Dinic {
    fn new(nodes: usize) -> Self {
        Self {
            arcs: Vec::new(),
            out: vec![Vec::new(); nodes],
            level: vec![0; nodes],
            next: vec![0; nodes],
        }
    }

    fn clear(&mut self) {
        self.arcs.clear();
        self.out.iter_mut().for_each(Vec::clear);
    }

    fn add_edge(&mut self, from: usize, to: usize, cap: i64) {
        self.out[from].push(self.arcs.len());
        self.arcs.push(Arc { to, cap });
        self.out[to].push(self.arcs.len());
        self.arcs.push(Arc { to: from, cap: 0 });
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = -1);
        self.level[s] = 0;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &id in &self.out[u] {
                let arc = &self.arcs[id];
                if arc.cap > 0 && self.level[arc.to] < 0 {
                    self.level[arc.to] = self.level[u] + 1;
                    queue.push_back(arc.to);
                }
            }
        }
        self.level[t] >= 0
    }

    fn dfs(&mut self, u: usize, t: usize, pushed: i64) -> i64 {
        if u == t {
            return pushed;
        }
        while self.next[u] < self.out[u].len() {
            let id = self.out[u][self.next[u]];
            let (to, cap) = (self.arcs[id].to, self.arcs[id].cap);
            if cap > 0 && self.level[to] == self.level[u] + 1 {
                let got = self.dfs(to, t, pushed.min(cap));
                if got > 0 {
                    self.arcs[id].cap -= got;
                    self.arcs[id ^ 1].cap += got;
                    return got;
                }
            }
            self.next[u] += 1;
        }
        0
    }

    fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let mut total = 0;
        while self.bfs(s, t) {
            self.next.iter_mut().for_each(|x| *x = 0);
            loop {
                let f = self.dfs(s, t, INF);
                if f == 0 {
                    break;
                }
                total += f;
            }
        }
        total
    }

    /// Nodes reachable from `s` in the residual network.
    fn reachable(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.out.len()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &id in &self.out[u] {
                let arc = &self.arcs[id];
                if arc.cap > 0 && !seen[arc.to] {
                    seen[arc.to] = true;
                    stack.push(arc.to);
                }
            }
        }
        seen
    }
}
