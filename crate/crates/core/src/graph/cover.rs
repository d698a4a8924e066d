//! Minimum vertex cover: degree-0/1 reductions, component splitting and a
//! bitmask branch and bound on what remains.

use super::{Budgets, Graph};
use crate::error::{Error, Result};

pub fn vertex_cover_number(g: &Graph) -> Result<usize> {
    vertex_cover_number_with(g, &Budgets::default())
}

pub fn vertex_cover_number_with(g: &Graph, budgets: &Budgets) -> Result<usize> {
    let n = g.vertex_count();
    let mut alive = vec![true; n];
    let mut degree = g.degrees();
    let mut cover = 0;

    let mut stack: Vec<usize> = (0..n).filter(|&v| degree[v] <= 1).collect();
    let remove = |v: usize, alive: &mut Vec<bool>, degree: &mut Vec<usize>, stack: &mut Vec<usize>| {
        alive[v] = false;
        for &w in g.neighbors(v) {
            if alive[w] {
                degree[w] -= 1;
                if degree[w] <= 1 {
                    stack.push(w);
                }
            }
        }
    };
    while let Some(v) = stack.pop() {
        if !alive[v] {
            continue;
        }
        match degree[v] {
            0 => alive[v] = false,
            1 => {
                let w = *g
                    .neighbors(v)
                    .iter()
                    .find(|&&w| alive[w])
                    .expect("live neighbour");
                cover += 1;
                remove(w, &mut alive, &mut degree, &mut stack);
                alive[v] = false;
            }
            _ => {}
        }
    }

    let kernel: Vec<usize> = (0..n).filter(|&v| alive[v]).collect();
    let limit = budgets.cover_kernel_vertices.min(64);
    for comp in g.induced(&kernel).components() {
        if comp.len() > limit {
            return Err(Error::budget(
                "vertex cover kernel component",
                comp.len() as u128,
                limit as u128,
            ));
        }
        let ids: Vec<usize> = comp.iter().map(|&i| kernel[i]).collect();
        let sub = g.induced(&ids);
        cover += exact_small(&sub);
    }
    Ok(cover)
}

/// Bounds from a greedy maximal matching `M`: `|M| <= tau <= 2|M|`.
pub fn maximal_matching_cover_bound(g: &Graph) -> (usize, usize) {
    let mut used = vec![false; g.vertex_count()];
    let mut size = 0;
    for &(u, v) in g.edges() {
        if !used[u] && !used[v] {
            used[u] = true;
            used[v] = true;
            size += 1;
        }
    }
    (size, 2 * size)
}

/// Brute force over all vertex subsets; oracle for at most 24 vertices.
pub fn vertex_cover_brute_force(g: &Graph) -> Result<usize> {
    let n = g.vertex_count();
    if n > 24 {
        return Err(Error::budget("brute-force cover vertices", n as u128, 24u128));
    }
    let edges: Vec<u32> = g
        .edges()
        .iter()
        .map(|&(u, v)| (1u32 << u) | (1u32 << v))
        .collect();
    (0u32..(1u32 << n))
        .filter(|&s| edges.iter().all(|&e| e & s != 0))
        .map(|s| s.count_ones() as usize)
        .min()
        .ok_or(Error::EmptyGraph)
}

fn exact_small(g: &Graph) -> usize {
    let adj: Vec<u64> = (0..g.vertex_count())
        .map(|v| g.neighbors(v).iter().fold(0u64, |m, &w| m | (1 << w)))
        .collect();
    let all = if g.vertex_count() == 64 {
        u64::MAX
    } else {
        (1u64 << g.vertex_count()) - 1
    };
    let (_, upper) = maximal_matching_cover_bound(g);
    let mut best = upper;
    branch(&adj, all, 0, &mut best);
    best
}

fn branch(adj: &[u64], mut alive: u64, mut taken: usize, best: &mut usize) {
    // Reductions inside the branch.
    loop {
        let mut changed = false;
        let mut rest = alive;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if alive & (1 << v) == 0 {
                continue;
            }
            let nb = adj[v] & alive;
            match nb.count_ones() {
                0 => {
                    alive &= !(1 << v);
                    changed = true;
                }
                1 => {
                    alive &= !(nb | (1 << v));
                    taken += 1;
                    changed = true;
                }
                _ => {}
            }
        }
        if !changed {
            break;
        }
    }
    if taken >= *best {
        return;
    }
    if alive == 0 {
        *best = taken;
        return;
    }
    if taken + matching_lower_bound(adj, alive) >= *best {
        return;
    }
    let mut pivot = 0;
    let mut pivot_deg = 0;
    let mut rest = alive;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let d = (adj[v] & alive).count_ones();
        if d > pivot_deg {
            pivot = v;
            pivot_deg = d;
        }
    }
    let nb = adj[pivot] & alive;
    branch(adj, alive & !(1 << pivot), taken + 1, best);
    branch(adj, alive & !(nb | (1 << pivot)), taken + nb.count_ones() as usize, best);
}

fn matching_lower_bound(adj: &[u64], alive: u64) -> usize {
    let mut free = alive;
    let mut size = 0;
    while free != 0 {
        let v = free.trailing_zeros() as usize;
        free &= free - 1;
        let nb = adj[v] & free;
        if nb != 0 {
            free &= !(1 << nb.trailing_zeros());
            size += 1;
        }
    }
    size
}
