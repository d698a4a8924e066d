//! Built-in pattern families.
//!
//! Vertex numbering is part of the contract:
//! - `clique:k`: vertices `0..k`.
//! - `path:k`: `0 - 1 - ... - k` (k edges).
//! - `star:d`: centre `0`, leaves `1..=d`.
//! - `complete_bipartite:a,b`: sides `0..a` and `a..a+b`.
//! - `regular_tree:D,depth`: breadth-first numbering from root `0`; the
//!   root has `D` children and every other internal vertex `D - 1`, so all
//!   internal degrees equal `D`.
//! - `matching:m`: edges `(2i, 2i+1)`.
//! - `disjoint_triangles:t`: triangles on `3i, 3i+1, 3i+2`.
//! - `unbalanced_stars:k`: `k` stars of degree `floor(k^(1/4))` followed by
//!   one star of degree `floor(k^(3/4))`; each star is numbered centre first.

use std::fmt;
use std::str::FromStr;

use super::Graph;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilySpec {
    Clique(usize),
    Path(usize),
    Star(usize),
    CompleteBipartite(usize, usize),
    RegularTree { branching: usize, depth: usize },
    Matching(usize),
    DisjointTriangles(usize),
    UnbalancedStars(usize),
}

impl FamilySpec {
    /// Family name as used in spec strings.
    pub fn name(&self) -> &'static str {
        match self {
            FamilySpec::Clique(_) => "clique",
            FamilySpec::Path(_) => "path",
            FamilySpec::Star(_) => "star",
            FamilySpec::CompleteBipartite(..) => "complete_bipartite",
            FamilySpec::RegularTree { .. } => "regular_tree",
            FamilySpec::Matching(_) => "matching",
            FamilySpec::DisjointTriangles(_) => "disjoint_triangles",
            FamilySpec::UnbalancedStars(_) => "unbalanced_stars",
        }
    }

    /// Rebuilds a single-parameter family with a new size; two-parameter
    /// families scale their first parameter.
    pub fn with_size(&self, size: usize) -> FamilySpec {
        match *self {
            FamilySpec::Clique(_) => FamilySpec::Clique(size),
            FamilySpec::Path(_) => FamilySpec::Path(size),
            FamilySpec::Star(_) => FamilySpec::Star(size),
            FamilySpec::CompleteBipartite(_, b) => FamilySpec::CompleteBipartite(size, b),
            FamilySpec::RegularTree { depth, .. } => FamilySpec::RegularTree {
                branching: size,
                depth,
            },
            FamilySpec::Matching(_) => FamilySpec::Matching(size),
            FamilySpec::DisjointTriangles(_) => FamilySpec::DisjointTriangles(size),
            FamilySpec::UnbalancedStars(_) => FamilySpec::UnbalancedStars(size),
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidSpec(format!("{self}: {msg}")));
        match *self {
            FamilySpec::Clique(k) if k < 2 => bad("a clique needs at least 2 vertices"),
            FamilySpec::Path(0)
            | FamilySpec::Star(0)
            | FamilySpec::Matching(0)
            | FamilySpec::DisjointTriangles(0)
            | FamilySpec::UnbalancedStars(0) => bad("size must be at least 1"),
            FamilySpec::CompleteBipartite(a, b) if a == 0 || b == 0 => {
                bad("both sides must be non-empty")
            }
            FamilySpec::RegularTree { branching, depth } if branching == 0 || depth == 0 => {
                bad("branching and depth must be at least 1")
            }
            FamilySpec::RegularTree { branching: 1, depth } if depth > 1 => {
                bad("branching 1 only admits depth 1")
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            FamilySpec::Clique(k)
            | FamilySpec::Path(k)
            | FamilySpec::Star(k)
            | FamilySpec::Matching(k)
            | FamilySpec::DisjointTriangles(k)
            | FamilySpec::UnbalancedStars(k) => write!(f, "{}:{k}", self.name()),
            FamilySpec::CompleteBipartite(a, b) => write!(f, "{}:{a},{b}", self.name()),
            FamilySpec::RegularTree { branching, depth } => {
                write!(f, "{}:{branching},{depth}", self.name())
            }
        }
    }
}

impl FromStr for FamilySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let invalid = || Error::InvalidSpec(s.to_string());
        let (name, args) = s.trim().split_once(':').ok_or_else(invalid)?;
        let nums: Vec<usize> = args
            .split(',')
            .map(|a| a.trim().parse::<usize>().map_err(|_| invalid()))
            .collect::<Result<_>>()?;
        let spec = match (name.trim(), nums.as_slice()) {
            ("clique", [k]) => FamilySpec::Clique(*k),
            ("path", [k]) => FamilySpec::Path(*k),
            ("star", [d]) => FamilySpec::Star(*d),
            ("complete_bipartite", [a, b]) => FamilySpec::CompleteBipartite(*a, *b),
            ("regular_tree", [b, d]) => FamilySpec::RegularTree {
                branching: *b,
                depth: *d,
            },
            ("matching", [m]) => FamilySpec::Matching(*m),
            ("disjoint_triangles", [t]) => FamilySpec::DisjointTriangles(*t),
            ("unbalanced_stars", [k]) => FamilySpec::UnbalancedStars(*k),
            _ => return Err(invalid()),
        };
        spec.validate()?;
        Ok(spec)
    }
}

pub fn make_family(spec: &FamilySpec) -> Result<Graph> {
    spec.validate()?;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let n = match *spec {
        FamilySpec::Clique(k) => return Ok(Graph::complete(k)),
        FamilySpec::Path(k) => {
            edges.extend((0..k).map(|i| (i, i + 1)));
            k + 1
        }
        FamilySpec::Star(d) => {
            edges.extend((1..=d).map(|leaf| (0, leaf)));
            d + 1
        }
        FamilySpec::CompleteBipartite(a, b) => {
            edges.extend((0..a).flat_map(|u| (a..a + b).map(move |v| (u, v))));
            a + b
        }
        FamilySpec::RegularTree { branching, depth } => {
            let mut level = vec![0usize];
            let mut next_id = 1;
            for d in 0..depth {
                let children = if d == 0 { branching } else { branching - 1 };
                let mut next_level = Vec::with_capacity(level.len() * children);
                for &parent in &level {
                    for _ in 0..children {
                        edges.push((parent, next_id));
                        next_level.push(next_id);
                        next_id += 1;
                    }
                }
                level = next_level;
            }
            next_id
        }
        FamilySpec::Matching(m) => {
            edges.extend((0..m).map(|i| (2 * i, 2 * i + 1)));
            2 * m
        }
        FamilySpec::DisjointTriangles(t) => {
            for i in 0..t {
                let b = 3 * i;
                edges.extend([(b, b + 1), (b, b + 2), (b + 1, b + 2)]);
            }
            3 * t
        }
        FamilySpec::UnbalancedStars(k) => {
            let small = integer_root(k as u128, 4) as usize;
            let large = integer_root((k as u128).pow(3), 4) as usize;
            let mut next = 0;
            for degree in std::iter::repeat_n(small, k).chain([large]) {
                let centre = next;
                edges.extend((1..=degree).map(|j| (centre, centre + j)));
                next += degree + 1;
            }
            next
        }
    };
    edges.sort_unstable();
    Ok(Graph::from_sorted_unchecked(n, edges))
}

/// Closed-form invariants of `unbalanced_stars:k`, valid without building
/// the graph (`1 <= k < 2^42`, so that `k^3` fits in 128 bits).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StarForestInvariants {
    pub vertices: u128,
    pub edges: u128,
    pub max_degree: u128,
    pub vertex_cover: u128,
}

pub fn unbalanced_stars_invariants(k: u64) -> StarForestInvariants {
    assert!(k < 1 << 42, "k = {k} is too large for exact invariants");
    let k = k as u128;
    let small = integer_root(k, 4);
    let large = integer_root(k * k * k, 4);
    StarForestInvariants {
        vertices: k * (small + 1) + large + 1,
        edges: k * small + large,
        max_degree: small.max(large),
        vertex_cover: k + 1,
    }
}

/// Largest `r` with `r^e <= x`.
fn integer_root(x: u128, e: u32) -> u128 {
    let mut r = (x as f64).powf(1.0 / e as f64) as u128;
    while r > 0 && r.checked_pow(e).is_none_or(|p| p > x) {
        r -= 1;
    }
    while (r + 1).checked_pow(e).is_some_and(|p| p <= x) {
        r += 1;
    }
    r
}
