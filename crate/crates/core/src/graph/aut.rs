//! Automorphism group order of a graph. Twin classes (vertices with equal
//! open or equal closed neighbourhoods) are permuted freely and contracted
//! first; the coloured quotient is handled by a stabiliser chain,
//! `|Aut| = Π_i |orbit of v_i under the pointwise stabiliser of
//! v_1..v_{i-1}|`, where orbit membership is decided by colour refinement
//! followed by a colour-respecting search for one automorphism. The group
//! is never enumerated.

use std::collections::HashMap;

use num_bigint::BigUint;

use super::Graph;
use crate::error::{Error, Result};

pub(crate) fn automorphism_order(g: &Graph, node_limit: u64) -> Result<BigUint> {
    let mut total = BigUint::from(1u8);
    let mut graph = g.clone();
    let mut base = vec![0u32; g.vertex_count()];
    while let Some((quotient, colours, factor)) = contract_twins(&graph, &base) {
        total *= factor;
        graph = quotient;
        base = colours;
    }
    Ok(total * stabiliser_chain(&graph, &base, node_limit)?)
}

/// One round of twin contraction, or `None` when no two vertices of equal
/// colour are twins. Returns the quotient, its colours and `Π |class|!`.
fn contract_twins(g: &Graph, base: &[u32]) -> Option<(Graph, Vec<u32>, BigUint)> {
    let n = g.vertex_count();
    let mut class = vec![usize::MAX; n];
    let mut kinds: Vec<(u32, usize, u8)> = Vec::new();
    let mut any = false;
    for closed in [false, true] {
        let mut groups: HashMap<(u32, Vec<usize>), Vec<usize>> = HashMap::new();
        for v in (0..n).filter(|&v| class[v] == usize::MAX) {
            let mut key = g.neighbors(v).to_vec();
            if closed {
                key.push(v);
                key.sort_unstable();
            }
            groups.entry((base[v], key)).or_default().push(v);
        }
        let mut groups: Vec<Vec<usize>> = groups.into_values().filter(|m| m.len() > 1).collect();
        groups.sort();
        for members in groups {
            any = true;
            for &v in &members {
                class[v] = kinds.len();
            }
            kinds.push((base[members[0]], members.len(), closed as u8 + 1));
        }
    }
    if !any {
        return None;
    }
    for v in 0..n {
        if class[v] == usize::MAX {
            class[v] = kinds.len();
            kinds.push((base[v], 1, 0));
        }
    }
    let factor = kinds
        .iter()
        .map(|&(_, size, _)| (1..=size as u64).map(BigUint::from).product::<BigUint>())
        .product();
    let mut pairs: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .map(|&(u, v)| (class[u].min(class[v]), class[u].max(class[v])))
        .filter(|&(a, b)| a != b)
        .collect();
    pairs.sort_unstable();
    pairs.dedup();
    let quotient = Graph::from_sorted_unchecked(kinds.len(), pairs);
    let mut distinct = kinds.clone();
    distinct.sort_unstable();
    distinct.dedup();
    let colours = kinds
        .iter()
        .map(|k| distinct.binary_search(k).expect("listed kind") as u32)
        .collect();
    Some((quotient, colours, factor))
}

fn stabiliser_chain(g: &Graph, base: &[u32], node_limit: u64) -> Result<BigUint> {
    let n = g.vertex_count();
    let mut search = OrbitSearch {
        g,
        base,
        nodes: 0,
        limit: node_limit,
    };
    let mut fixed: Vec<usize> = Vec::new();
    let mut total = BigUint::from(1u8);
    for v in 0..n {
        if fixed.len() + 1 >= n {
            break;
        }
        let mut orbit = 1u64;
        for w in 0..n {
            if w != v
                && !fixed.contains(&w)
                && base[w] == base[v]
                && g.degree(w) == g.degree(v)
                && search.maps(&fixed, v, w)?
            {
                orbit += 1;
            }
        }
        total *= orbit;
        fixed.push(v);
    }
    Ok(total)
}

struct OrbitSearch<'a> {
    g: &'a Graph,
    base: &'a [u32],
    nodes: u64,
    limit: u64,
}

impl OrbitSearch<'_> {
    /// Whether some automorphism fixes every vertex of `fixed` and sends `v`
    /// to `w`.
    fn maps(&mut self, fixed: &[usize], v: usize, w: usize) -> Result<bool> {
        let n = self.g.vertex_count();
        // Two copies of the graph, side A with `v` and side B with `w`
        // individualised, refined together so colours are comparable.
        let offset = self.base.iter().max().map_or(0, |&c| c + 1);
        let mut colour: Vec<u32> = self.base.iter().chain(self.base).copied().collect();
        for (i, &f) in fixed.iter().enumerate() {
            colour[f] = offset + i as u32;
            colour[n + f] = offset + i as u32;
        }
        let special = offset + fixed.len() as u32;
        colour[v] = special;
        colour[n + w] = special;
        refine(self.g, &mut colour);
        let (a, b) = colour.split_at(n);
        let mut ha = a.to_vec();
        let mut hb = b.to_vec();
        ha.sort_unstable();
        hb.sort_unstable();
        if ha != hb {
            return Ok(false);
        }
        let order = search_order(self.g, a);
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        self.extend(&order, 0, a, b, &mut map, &mut used)
    }

    fn extend(
        &mut self,
        order: &[usize],
        depth: usize,
        a: &[u32],
        b: &[u32],
        map: &mut [usize],
        used: &mut [bool],
    ) -> Result<bool> {
        if depth == order.len() {
            return Ok(true);
        }
        self.nodes += 1;
        if self.nodes > self.limit {
            return Err(Error::budget(
                "automorphism search nodes",
                self.nodes as u128,
                self.limit as u128,
            ));
        }
        let u = order[depth];
        for c in 0..b.len() {
            if used[c] || b[c] != a[u] {
                continue;
            }
            let consistent = order[..depth]
                .iter()
                .all(|&x| self.g.has_edge(u, x) == self.g.has_edge(c, map[x]));
            if !consistent {
                continue;
            }
            map[u] = c;
            used[c] = true;
            if self.extend(order, depth + 1, a, b, map, used)? {
                return Ok(true);
            }
            map[u] = usize::MAX;
            used[c] = false;
        }
        Ok(false)
    }
}

/// Stable colour refinement of two side-by-side copies of `g`.
fn refine(g: &Graph, colour: &mut [u32]) {
    let n = g.vertex_count();
    let classes = |c: &[u32]| {
        let mut s = c.to_vec();
        s.sort_unstable();
        s.dedup();
        s.len()
    };
    let mut count = classes(colour);
    loop {
        let signatures: Vec<(u32, Vec<u32>)> = (0..2 * n)
            .map(|x| {
                let base = if x < n { 0 } else { n };
                let mut around: Vec<u32> = g
                    .neighbors(x - base)
                    .iter()
                    .map(|&y| colour[base + y])
                    .collect();
                around.sort_unstable();
                (colour[x], around)
            })
            .collect();
        let mut distinct: Vec<&(u32, Vec<u32>)> = signatures.iter().collect();
        distinct.sort();
        distinct.dedup();
        let index: HashMap<&(u32, Vec<u32>), u32> = distinct
            .into_iter()
            .enumerate()
            .map(|(i, s)| (s, i as u32))
            .collect();
        for (x, s) in signatures.iter().enumerate() {
            colour[x] = index[s];
        }
        let next = classes(colour);
        if next == count {
            return;
        }
        count = next;
    }
}

/// Rarest colours first, then vertices adjacent to already ordered ones.
fn search_order(g: &Graph, colour: &[u32]) -> Vec<usize> {
    let n = g.vertex_count();
    let mut size: HashMap<u32, usize> = HashMap::new();
    for &c in colour {
        *size.entry(c).or_default() += 1;
    }
    let mut placed = vec![false; n];
    let mut links = vec![0usize; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let next = (0..n)
            .filter(|&x| !placed[x])
            .min_by_key(|&x| (size[&colour[x]], std::cmp::Reverse(links[x]), x))
            .expect("unplaced vertex");
        placed[next] = true;
        order.push(next);
        for &y in g.neighbors(next) {
            links[y] += 1;
        }
    }
    order
}
