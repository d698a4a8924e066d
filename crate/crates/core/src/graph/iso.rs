//! Backtracking subgraph embeddings and everything counted with them:
//! automorphisms, copies of a pattern in a host graph or in `K_n`, and the
//! containment probability of a random copy.

use std::collections::HashSet;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use super::{Budgets, Graph};
use crate::error::{Error, Result};

/// Edge set of a copy inside `K_n`, one bit per vertex pair (see
/// [`pair_index`]). Only used for `n <= 11`.
pub type CopyMask = u64;

/// Bit position of the pair `{u, v}` in the row-major upper triangle of an
/// `n x n` adjacency matrix.
pub fn pair_index(n: usize, u: usize, v: usize) -> usize {
    let (a, b) = (u.min(v), u.max(v));
    a * n - a * (a + 1) / 2 + (b - a - 1)
}

/// Number of injective maps `V(pattern) -> V(host)` sending every pattern
/// edge onto a host edge.
pub fn count_embeddings(pattern: &Graph, host: &Graph, budgets: &Budgets) -> Result<u128> {
    let mut count: u128 = 0;
    Matcher::new(pattern, host, budgets.search_nodes).run(&mut |_| {
        count += 1;
        true
    })?;
    Ok(count)
}

/// Number of distinct subgraphs of `host` isomorphic to `pattern`.
pub fn count_copies(pattern: &Graph, host: &Graph) -> Result<BigUint> {
    count_copies_with(pattern, host, &Budgets::default())
}

pub fn count_copies_with(pattern: &Graph, host: &Graph, budgets: &Budgets) -> Result<BigUint> {
    pattern.require_pattern()?;
    if pattern.vertex_count() > host.vertex_count() {
        return Ok(BigUint::default());
    }
    let emb = count_embeddings(pattern, host, budgets)?;
    let aut = automorphism_count_with(pattern, budgets)?;
    let emb = BigUint::from(emb);
    debug_assert!((&emb % &aut) == BigUint::default());
    Ok(emb / aut)
}

pub fn automorphism_count(g: &Graph) -> Result<BigUint> {
    automorphism_count_with(g, &Budgets::default())
}

/// `|Aut(G)|`, as a product over isomorphism classes of components:
/// `prod |Aut(C)|^m * m!`.
pub fn automorphism_count_with(g: &Graph, budgets: &Budgets) -> Result<BigUint> {
    let mut classes: Vec<(Graph, usize)> = Vec::new();
    let mut isolated = 0usize;
    for comp in g.components() {
        if comp.len() == 1 {
            isolated += 1;
            continue;
        }
        let c = g.induced(&comp);
        let mut class = None;
        for (i, (rep, _)) in classes.iter().enumerate() {
            if iso_nonempty(rep, &c, budgets)? {
                class = Some(i);
                break;
            }
        }
        match class {
            Some(i) => classes[i].1 += 1,
            None => classes.push((c, 1)),
        }
    }
    let mut total = factorial(isolated);
    for (rep, m) in &classes {
        let per = super::aut::automorphism_order(rep, budgets.search_nodes)?;
        total *= per.pow(*m as u32) * factorial(*m);
    }
    Ok(total)
}

/// Exact isomorphism test.
pub fn are_isomorphic(a: &Graph, b: &Graph) -> Result<bool> {
    if a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count() {
        return Ok(false);
    }
    let mut da = a.degrees();
    let mut db = b.degrees();
    da.sort_unstable();
    db.sort_unstable();
    if da != db {
        return Ok(false);
    }
    let budgets = Budgets::default();
    let (a, b) = (a.without_isolated(), b.without_isolated());
    if a.edge_count() == 0 {
        return Ok(true);
    }
    let mut found = false;
    Matcher::new(&a, &b, budgets.search_nodes).run(&mut |_| {
        found = true;
        false
    })?;
    Ok(found)
}

fn iso_nonempty(a: &Graph, b: &Graph, budgets: &Budgets) -> Result<bool> {
    if a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count() {
        return Ok(false);
    }
    let mut da = a.degrees();
    let mut db = b.degrees();
    da.sort_unstable();
    db.sort_unstable();
    if da != db {
        return Ok(false);
    }
    let mut found = false;
    Matcher::new(a, b, budgets.search_nodes).run(&mut |_| {
        found = true;
        false
    })?;
    Ok(found)
}

/// `|S_H| = n! / (n - |v(H)|)! / |Aut(H)|`, the number of copies of `H` in `K_n`.
pub fn copies_in_complete(pattern: &Graph, n: usize) -> Result<BigUint> {
    copies_in_complete_with(pattern, n, &Budgets::default())
}

pub fn copies_in_complete_with(pattern: &Graph, n: usize, budgets: &Budgets) -> Result<BigUint> {
    pattern.require_pattern()?;
    let k = pattern.vertex_count();
    if k > n {
        return Err(Error::PatternTooLarge { pattern: k, n });
    }
    let falling = ((n - k + 1)..=n).fold(BigUint::one(), |acc, x| acc * BigUint::from(x));
    Ok(falling / automorphism_count_with(pattern, budgets)?)
}

/// `P[H ⊆ Γ']` for a uniform random copy `H` of `pattern` in `K_n` and a
/// fixed copy `Γ'` of `host`: `N(pattern, host) / |S_pattern|`.
pub fn containment_probability(pattern: &Graph, host: &Graph, n: usize) -> Result<BigRational> {
    containment_probability_with(pattern, host, n, &Budgets::default())
}

pub fn containment_probability_with(
    pattern: &Graph,
    host: &Graph,
    n: usize,
    budgets: &Budgets,
) -> Result<BigRational> {
    host.require_pattern()?;
    if host.vertex_count() > n {
        return Err(Error::PatternTooLarge {
            pattern: host.vertex_count(),
            n,
        });
    }
    let copies = count_copies_with(pattern, host, budgets)?;
    let total = copies_in_complete_with(pattern, n, budgets)?;
    Ok(BigRational::new(copies.into(), total.into()))
}

/// Distinct edge sets of `pattern` on the vertex set `0..k`, `k = |v(pattern)|`.
/// There are `k! / |Aut(pattern)|` of them.
pub fn placements(pattern: &Graph, budgets: &Budgets) -> Result<Vec<Vec<(usize, usize)>>> {
    pattern.require_pattern()?;
    let k = pattern.vertex_count();
    if k > 11 {
        return Err(Error::budget("placement pattern vertices", k as u128, 11u128));
    }
    let complete = Graph::complete(k);
    let mut seen: HashSet<u64> = HashSet::new();
    let mut out = Vec::new();
    Matcher::new(pattern, &complete, budgets.search_nodes).run(&mut |map| {
        let mask = pattern
            .edges()
            .iter()
            .fold(0u64, |m, &(u, v)| m | 1u64 << pair_index(k, map[u], map[v]));
        if seen.insert(mask) {
            let mut edges: Vec<(usize, usize)> = pattern
                .edges()
                .iter()
                .map(|&(u, v)| (map[u].min(map[v]), map[u].max(map[v])))
                .collect();
            edges.sort_unstable();
            out.push(edges);
        }
        true
    })?;
    out.sort();
    Ok(out)
}

/// Every copy of `pattern` in `K_n` as a pair mask, in deterministic order
/// (vertex subsets in lexicographic order, then placements). Needs `n <= 11`
/// and at most `max_copies` copies.
pub fn enumerate_copies(pattern: &Graph, n: usize, max_copies: u128) -> Result<Vec<CopyMask>> {
    let k = pattern.vertex_count();
    if k > n {
        return Err(Error::PatternTooLarge { pattern: k, n });
    }
    if n > 11 {
        return Err(Error::budget("copy enumeration host vertices", n as u128, 11u128));
    }
    let total = copies_in_complete(pattern, n)?;
    let total = total.to_u128().unwrap_or(u128::MAX);
    if total > max_copies {
        return Err(Error::budget("copies in K_n", total, max_copies));
    }
    let places = placements(pattern, &Budgets::default())?;
    let mut out = Vec::with_capacity(total as usize);
    let mut subset: Vec<usize> = (0..k).collect();
    loop {
        for place in &places {
            let mask = place.iter().fold(0u64, |m, &(a, b)| {
                m | 1u64 << pair_index(n, subset[a], subset[b])
            });
            out.push(mask);
        }
        if !next_combination(&mut subset, n) {
            break;
        }
    }
    Ok(out)
}

/// Advances a sorted k-subset of `0..n` to the next one in lexicographic order.
pub fn next_combination(subset: &mut [usize], n: usize) -> bool {
    let k = subset.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if subset[i] < n - k + i {
            subset[i] += 1;
            for j in i + 1..k {
                subset[j] = subset[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

pub(crate) fn factorial(m: usize) -> BigUint {
    (1..=m).fold(BigUint::one(), |acc, x| acc * BigUint::from(x))
}

/// Embedding search. Pattern vertices are matched in an order where every
/// vertex after the first of its component has an already-matched
/// neighbour, so candidates come from that neighbour's image adjacency.
struct Matcher<'a> {
    pattern: &'a Graph,
    host: &'a Graph,
    order: Vec<usize>,
    anchor: Vec<Option<usize>>,
    earlier: Vec<Vec<usize>>,
    map: Vec<usize>,
    used: Vec<bool>,
    nodes: u64,
    limit: u64,
}

impl<'a> Matcher<'a> {
    fn new(pattern: &'a Graph, host: &'a Graph, limit: u64) -> Self {
        let k = pattern.vertex_count();
        let mut placed = vec![false; k];
        let mut order = Vec::with_capacity(k);
        while order.len() < k {
            // Seed a component with its highest-degree unplaced vertex.
            let seed = (0..k)
                .filter(|&v| !placed[v])
                .max_by_key(|&v| (pattern.degree(v), std::cmp::Reverse(v)))
                .expect("unplaced vertex");
            placed[seed] = true;
            order.push(seed);
            loop {
                let next = (0..k)
                    .filter(|&v| !placed[v])
                    .map(|v| {
                        let links = pattern.neighbors(v).iter().filter(|&&w| placed[w]).count();
                        (v, links)
                    })
                    .filter(|&(_, links)| links > 0)
                    .max_by_key(|&(v, links)| (links, pattern.degree(v), std::cmp::Reverse(v)));
                match next {
                    Some((v, _)) => {
                        placed[v] = true;
                        order.push(v);
                    }
                    None => break,
                }
            }
        }
        let mut position = vec![0; k];
        for (i, &v) in order.iter().enumerate() {
            position[v] = i;
        }
        let earlier: Vec<Vec<usize>> = order
            .iter()
            .map(|&v| {
                pattern
                    .neighbors(v)
                    .iter()
                    .copied()
                    .filter(|&w| position[w] < position[v])
                    .collect()
            })
            .collect();
        let anchor = earlier.iter().map(|e| e.first().copied()).collect();
        Self {
            pattern,
            host,
            order,
            anchor,
            earlier,
            map: vec![usize::MAX; k],
            used: vec![false; host.vertex_count()],
            nodes: 0,
            limit,
        }
    }

    /// Calls `visit` with each embedding (indexed by pattern vertex) until it
    /// returns `false`.
    fn run(&mut self, visit: &mut dyn FnMut(&[usize]) -> bool) -> Result<()> {
        if self.pattern.vertex_count() > self.host.vertex_count() {
            return Ok(());
        }
        self.step(0, visit).map(|_| ())
    }

    fn step(&mut self, depth: usize, visit: &mut dyn FnMut(&[usize]) -> bool) -> Result<bool> {
        if depth == self.order.len() {
            return Ok(visit(&self.map));
        }
        self.nodes += 1;
        if self.nodes > self.limit {
            return Err(Error::budget(
                "embedding search nodes",
                self.nodes as u128,
                self.limit as u128,
            ));
        }
        let v = self.order[depth];
        let need = self.pattern.degree(v);
        let candidates: Vec<usize> = match self.anchor[depth] {
            Some(a) => self.host.neighbors(self.map[a]).to_vec(),
            None => (0..self.host.vertex_count()).collect(),
        };
        for c in candidates {
            if self.used[c] || self.host.degree(c) < need {
                continue;
            }
            if !self.earlier[depth]
                .iter()
                .all(|&w| self.host.has_edge(self.map[w], c))
            {
                continue;
            }
            self.used[c] = true;
            self.map[v] = c;
            let keep_going = self.step(depth + 1, visit)?;
            self.used[c] = false;
            self.map[v] = usize::MAX;
            if !keep_going {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
