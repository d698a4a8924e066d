use num_bigint::BigUint;

use super::{
    automorphism_count_with, max_subgraph_density, vertex_cover_number_with, Budgets, Density,
    Graph,
};
use crate::error::{Error, Result};

/// Every graph invariant the detection thresholds consume.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphStats {
    pub num_vertices: usize,
    pub num_edges: usize,
    pub max_degree: usize,
    /// `|e| / |v|`.
    pub density: Density,
    /// `max |e(H)| / |v(H)|` over non-empty subgraphs.
    pub max_subgraph_density: Density,
    pub vertex_cover_number: usize,
    pub num_components: usize,
    pub automorphism_count: BigUint,
}

pub fn graph_stats(g: &Graph) -> Result<GraphStats> {
    graph_stats_with(g, &Budgets::default())
}

pub fn graph_stats_with(g: &Graph, budgets: &Budgets) -> Result<GraphStats> {
    if g.vertex_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    Ok(GraphStats {
        num_vertices: g.vertex_count(),
        num_edges: g.edge_count(),
        max_degree: g.max_degree(),
        density: Density::new(g.edge_count() as u64, g.vertex_count() as u64),
        max_subgraph_density: max_subgraph_density(g)?,
        vertex_cover_number: vertex_cover_number_with(g, budgets)?,
        num_components: g.component_count(),
        automorphism_count: automorphism_count_with(g, budgets)?,
    })
}

impl GraphStats {
    pub fn mu(&self) -> f64 {
        ratio_f64(self.max_subgraph_density)
    }
}

pub(crate) fn ratio_f64(r: Density) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}
