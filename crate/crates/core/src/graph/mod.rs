//! Immutable simple undirected graphs and exact graph statistics.
//!
//! Vertices are `0..vertex_count`. Edges are stored once, as `(u, v)` with
//! `u < v`, sorted lexicographically, so the edge index of a pair is stable
//! and two graphs built from the same edge set compare equal.

mod aut;
mod connected;
mod cover;
mod density;
mod family;
mod iso;
mod spanning;
mod stats;

use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::error::{Error, Result};

pub use connected::connected_sets_count;
pub use cover::{
    maximal_matching_cover_bound, vertex_cover_brute_force, vertex_cover_number,
    vertex_cover_number_with,
};
pub use density::{
    densest_subgraph, max_subgraph_density, max_subgraph_density_exhaustive, Density, Subgraph,
};
pub use family::{make_family, unbalanced_stars_invariants, FamilySpec, StarForestInvariants};
pub use iso::{
    are_isomorphic, automorphism_count, automorphism_count_with, containment_probability,
    containment_probability_with, copies_in_complete, copies_in_complete_with, count_copies,
    count_copies_with, count_embeddings, enumerate_copies, next_combination, pair_index, placements, CopyMask,
};
pub use spanning::spanning_tree_count;
pub use stats::{graph_stats, graph_stats_with, GraphStats};

/// Explicit limits for the exact combinatorial routines.
///
/// Every routine that enumerates returns [`Error::BudgetExceeded`] rather than
/// approximating when it would pass one of these limits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budgets {
    /// Largest connected component (after degree-0/1 reductions) handed to the
    /// vertex-cover branch and bound.
    pub cover_kernel_vertices: usize,
    /// Partial assignments explored by one embedding / automorphism search.
    pub search_nodes: u64,
    /// Connected sets visited by [`connected_sets_count`].
    pub connected_sets: u64,
    /// Vertex limit for [`spanning_tree_count`].
    pub spanning_vertices: usize,
}

impl Default for Budgets {
    fn default() -> Self {
        Self {
            cover_kernel_vertices: 40,
            search_nodes: 50_000_000,
            connected_sets: 10_000_000,
            spanning_vertices: 20,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph, rejecting self-loops, repeated pairs (in either
    /// orientation) and out-of-range endpoints.
    pub fn from_edge_list(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut edges = Vec::with_capacity(pairs.len());
        for &(a, b) in pairs {
            for v in [a, b] {
                if v >= n {
                    return Err(Error::VertexOutOfRange { vertex: v, n });
                }
            }
            if a == b {
                return Err(Error::SelfLoop(a));
            }
            edges.push((a.min(b), a.max(b)));
        }
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateEdge(w[0].0, w[0].1));
        }
        Ok(Self::from_sorted_unchecked(n, edges))
    }

    /// `edges` must already be canonical, sorted and duplicate free.
    pub(crate) fn from_sorted_unchecked(n: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for row in &mut adjacency {
            row.sort_unstable();
        }
        Self {
            vertex_count: n,
            edges,
            adjacency,
        }
    }

    /// Builds a graph from arbitrary canonical pairs over arbitrary vertex ids,
    /// relabelling the touched vertices to `0..k` in increasing id order.
    /// Returns the graph and the original id of each new vertex.
    pub fn from_edges_compact(pairs: &[(usize, usize)]) -> (Self, Vec<usize>) {
        let mut ids: Vec<usize> = pairs.iter().flat_map(|&(u, v)| [u, v]).collect();
        ids.sort_unstable();
        ids.dedup();
        let index = |x: usize| ids.binary_search(&x).expect("vertex present");
        let mut edges: Vec<(usize, usize)> = pairs
            .iter()
            .map(|&(u, v)| {
                let (a, b) = (index(u), index(v));
                (a.min(b), a.max(b))
            })
            .collect();
        edges.sort_unstable();
        edges.dedup();
        (Self::from_sorted_unchecked(ids.len(), edges), ids)
    }

    pub fn empty(n: usize) -> Self {
        Self::from_sorted_unchecked(n, Vec::new())
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        Self::from_sorted_unchecked(n, edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.vertex_count && self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Index of the pair in [`Graph::edges`], if it is an edge.
    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        self.edges.binary_search(&(u.min(v), u.max(v))).ok()
    }

    /// True when every vertex lies on at least one edge (the requirement for
    /// planted patterns).
    pub fn is_pattern(&self) -> bool {
        self.vertex_count > 0 && self.adjacency.iter().all(|row| !row.is_empty())
    }

    pub(crate) fn require_pattern(&self) -> Result<()> {
        if self.edges.is_empty() {
            return Err(Error::EmptyGraph);
        }
        if let Some(v) = self.adjacency.iter().position(Vec::is_empty) {
            return Err(Error::InvalidParams(format!(
                "pattern graph has isolated vertex {v}"
            )));
        }
        Ok(())
    }

    /// Connected components as sorted vertex lists, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.vertex_count];
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for start in 0..self.vertex_count {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            queue.push_back(start);
            let mut comp = Vec::new();
            while let Some(u) = queue.pop_front() {
                comp.push(u);
                for &w in &self.adjacency[u] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn component_count(&self) -> usize {
        self.components().len()
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count <= 1 || self.component_count() == 1
    }

    /// Subgraph induced by `vertices` (sorted, distinct), relabelled in order.
    pub fn induced(&self, vertices: &[usize]) -> Self {
        let mut pos = vec![usize::MAX; self.vertex_count];
        for (i, &v) in vertices.iter().enumerate() {
            pos[v] = i;
        }
        let mut edges = Vec::new();
        for &(u, v) in &self.edges {
            if pos[u] != usize::MAX && pos[v] != usize::MAX {
                let (a, b) = (pos[u], pos[v]);
                edges.push((a.min(b), a.max(b)));
            }
        }
        edges.sort_unstable();
        Self::from_sorted_unchecked(vertices.len(), edges)
    }

    /// Subgraph formed by the edges with the given indices, with isolated
    /// vertices dropped. Returns the graph and the original vertex ids.
    pub fn edge_subgraph(&self, edge_indices: &[usize]) -> (Self, Vec<usize>) {
        let pairs: Vec<(usize, usize)> = edge_indices.iter().map(|&i| self.edges[i]).collect();
        Self::from_edges_compact(&pairs)
    }

    /// The graph with its isolated vertices removed.
    pub fn without_isolated(&self) -> Self {
        Self::from_edges_compact(&self.edges).0
    }

    /// Vertex-disjoint union, with `other` shifted past `self`.
    pub fn disjoint_union(&self, other: &Graph) -> Self {
        let shift = self.vertex_count;
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|&(u, v)| (u + shift, v + shift)));
        Self::from_sorted_unchecked(shift + other.vertex_count, edges)
    }

    /// Parses the edge-list text format: a header line `n <count>`, then one
    /// `u v` pair per line. `#` starts a comment; blank lines are ignored.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut n = None;
        let mut pairs = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut tokens = line.split_whitespace();
            let first = tokens.next().unwrap_or_default();
            let second = tokens.next();
            if tokens.next().is_some() {
                return Err(parse_err(line_no, "expected two fields"));
            }
            match n {
                None => {
                    if first != "n" {
                        return Err(parse_err(line_no, "expected header `n <vertex_count>`"));
                    }
                    let count = second
                        .ok_or_else(|| parse_err(line_no, "missing vertex count"))?
                        .parse::<usize>()
                        .map_err(|e| parse_err(line_no, &e.to_string()))?;
                    n = Some(count);
                }
                Some(_) => {
                    let u = first
                        .parse::<usize>()
                        .map_err(|e| parse_err(line_no, &e.to_string()))?;
                    let v = second
                        .ok_or_else(|| parse_err(line_no, "missing second endpoint"))?
                        .parse::<usize>()
                        .map_err(|e| parse_err(line_no, &e.to_string()))?;
                    pairs.push((u, v));
                }
            }
        }
        let n = n.ok_or_else(|| parse_err(1, "missing header `n <vertex_count>`"))?;
        Self::from_edge_list(n, &pairs)
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = format!("n {}\n", self.vertex_count);
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }
}

fn parse_err(line: usize, msg: &str) -> Error {
    Error::Parse {
        line,
        msg: msg.to_string(),
    }
}
