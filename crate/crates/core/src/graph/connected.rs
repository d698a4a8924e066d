//! Enumeration of connected vertex sets through a fixed anchor.

use super::{Budgets, Graph};
use crate::error::{Error, Result};

/// Number of connected vertex sets of size `size` that contain `anchor`.
///
/// Each set is produced once: the search keeps a frontier of candidates
/// and, after branching on a candidate, forbids it in the sibling branches.
pub fn connected_sets_count(g: &Graph, size: usize, anchor: usize) -> Result<u64> {
    let n = g.vertex_count();
    if anchor >= n {
        return Err(Error::VertexOutOfRange { vertex: anchor, n });
    }
    if size == 0 || size > n {
        return Ok(0);
    }
    let mut search = Search {
        g,
        size,
        blocked: vec![false; n],
        visited: 0,
        limit: Budgets::default().connected_sets,
    };
    search.blocked[anchor] = true;
    let frontier: Vec<usize> = g.neighbors(anchor).to_vec();
    for &w in &frontier {
        search.blocked[w] = true;
    }
    search.grow(1, frontier)
}

struct Search<'a> {
    g: &'a Graph,
    size: usize,
    /// Vertices that are in the set, on the frontier, or excluded.
    blocked: Vec<bool>,
    visited: u64,
    limit: u64,
}

impl Search<'_> {
    fn grow(&mut self, len: usize, mut frontier: Vec<usize>) -> Result<u64> {
        self.visited += 1;
        if self.visited > self.limit {
            return Err(Error::budget(
                "connected set enumeration",
                self.visited as u128,
                self.limit as u128,
            ));
        }
        if len == self.size {
            return Ok(1);
        }
        let mut total = 0;
        while let Some(w) = frontier.pop() {
            let fresh: Vec<usize> = self
                .g
                .neighbors(w)
                .iter()
                .copied()
                .filter(|&x| !self.blocked[x])
                .collect();
            for &x in &fresh {
                self.blocked[x] = true;
            }
            let mut next = frontier.clone();
            next.extend_from_slice(&fresh);
            total += self.grow(len + 1, next)?;
            for &x in &fresh {
                self.blocked[x] = false;
            }
            // `w` stays blocked: it is excluded from the remaining branches.
        }
        Ok(total)
    }
}
