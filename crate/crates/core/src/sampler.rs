//! Seeded null and planted observations.
//!
//! Trial `i` of hypothesis `h` draws from the ChaCha8 stream
//! `2 * i + h` of the generator seeded with `seed`, so every trial is
//! reproducible on its own and independent of execution order.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Generator for stream `stream` of `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Generator for trial `index` under hypothesis `hypothesis` (0 or 1).
pub fn trial_rng(seed: u64, hypothesis: u8, index: u64) -> ChaCha8Rng {
    debug_assert!(hypothesis < 2);
    stream_rng(seed, 2 * index + hypothesis as u64)
}

/// A hypothesis-testing instance: `G(n, q)` against `G(n, q)` with a uniform
/// copy of `pattern` whose edges appear with probability `p`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    pub n: usize,
    pub p: f64,
    pub q: f64,
    pub pattern: Graph,
}

impl ModelParams {
    /// Requires `0 < q < 1`, `q <= p <= 1`, a pattern without isolated
    /// vertices and `|v(pattern)| <= n`. `p == q` is accepted as the
    /// degenerate instance where both hypotheses coincide.
    pub fn new(n: usize, p: f64, q: f64, pattern: Graph) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::DegenerateQ(q));
        }
        if !(p >= q && p <= 1.0) {
            return Err(Error::InvalidParams(format!(
                "need q <= p <= 1 (p = {p}, q = {q})"
            )));
        }
        pattern.require_pattern()?;
        if pattern.vertex_count() > n {
            return Err(Error::PatternTooLarge {
                pattern: pattern.vertex_count(),
                n,
            });
        }
        Ok(Self { n, p, q, pattern })
    }
}

/// Dense symmetric adjacency over `n` labelled vertices, one bitset row
/// per vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Observation {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl Observation {
    pub fn empty(n: usize) -> Self {
        let words = n.div_ceil(64);
        Self {
            n,
            words,
            bits: vec![0; n * words],
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut obs = Self::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                obs.insert(u, v);
            }
        }
        obs
    }

    pub fn from_graph(g: &Graph) -> Self {
        let mut obs = Self::empty(g.vertex_count());
        for &(u, v) in g.edges() {
            obs.insert(u, v);
        }
        obs
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn row(&self, v: usize) -> &[u64] {
        &self.bits[v * self.words..(v + 1) * self.words]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.bits[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    /// Adds `{u, v}`; self-loops are ignored.
    pub fn insert(&mut self, u: usize, v: usize) {
        self.set(u, v, true);
    }

    pub fn remove(&mut self, u: usize, v: usize) {
        self.set(u, v, false);
    }

    pub fn set(&mut self, u: usize, v: usize, present: bool) {
        if u == v {
            return;
        }
        for (a, b) in [(u, v), (v, u)] {
            let word = &mut self.bits[a * self.words + b / 64];
            if present {
                *word |= 1 << (b % 64);
            } else {
                *word &= !(1 << (b % 64));
            }
        }
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn edge_count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum::<usize>() / 2
    }

    /// Present pairs `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for (w, &word) in self.row(u).iter().enumerate() {
                let mut rest = word;
                while rest != 0 {
                    let v = w * 64 + rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    if v > u {
                        out.push((u, v));
                    }
                }
            }
        }
        out
    }

    pub fn to_graph(&self) -> Graph {
        Graph::from_edge_list(self.n, &self.edges()).expect("observation is a simple graph")
    }

    /// Same text format as [`Graph::to_edge_list`].
    pub fn to_edge_list(&self) -> String {
        self.to_graph().to_edge_list()
    }

    pub fn parse_edge_list(text: &str) -> Result<Self> {
        Graph::parse_edge_list(text).map(|g| Self::from_graph(&g))
    }
}

/// An injective placement of a pattern in `K_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddedCopy {
    /// `vertex_map[i]` is the host vertex of pattern vertex `i`.
    pub vertex_map: Vec<usize>,
    /// Image of the pattern edges, canonical and sorted.
    pub edges: Vec<(usize, usize)>,
}

impl EmbeddedCopy {
    fn new(pattern: &Graph, vertex_map: Vec<usize>) -> Self {
        let mut edges: Vec<(usize, usize)> = pattern
            .edges()
            .iter()
            .map(|&(u, v)| {
                let (a, b) = (vertex_map[u], vertex_map[v]);
                (a.min(b), a.max(b))
            })
            .collect();
        edges.sort_unstable();
        Self { vertex_map, edges }
    }
}

/// `G(n, q)`. Accepts `q` anywhere in `[0, 1]`.
pub fn sample_null<R: Rng + ?Sized>(n: usize, q: f64, rng: &mut R) -> Observation {
    let mut obs = Observation::empty(n);
    if n < 2 || q <= 0.0 {
        return obs;
    }
    if q >= 1.0 {
        return Observation::complete(n);
    }
    // Geometric skips over the row-major upper triangle.
    let log_miss = (1.0 - q).ln();
    let (mut u, mut v) = (0usize, 0usize);
    loop {
        let r: f64 = rng.gen();
        let skip = ((1.0 - r).ln() / log_miss).floor();
        if !skip.is_finite() || skip > (n * n) as f64 {
            return obs;
        }
        v += skip as usize + 1;
        while v >= n {
            let overflow = v - n;
            u += 1;
            if u + 1 >= n {
                return obs;
            }
            v = u + 1 + overflow;
        }
        obs.insert(u, v);
    }
}

/// Uniform copy of `pattern` in `K_n`: a uniform injective vertex map, each
/// copy being hit by exactly `|Aut(pattern)|` maps.
pub fn sample_uniform_copy<R: Rng + ?Sized>(
    pattern: &Graph,
    n: usize,
    rng: &mut R,
) -> Result<EmbeddedCopy> {
    let k = pattern.vertex_count();
    if k > n {
        return Err(Error::PatternTooLarge { pattern: k, n });
    }
    let map = index::sample(rng, n, k).into_vec();
    Ok(EmbeddedCopy::new(pattern, map))
}

/// One draw from the planted ensemble, together with the planted copy.
pub fn sample_planted<R: Rng + ?Sized>(
    params: &ModelParams,
    rng: &mut R,
) -> (Observation, EmbeddedCopy) {
    let copy = sample_uniform_copy(&params.pattern, params.n, rng)
        .expect("validated parameters fit the pattern");
    let mut obs = sample_null(params.n, params.q, rng);
    for &(u, v) in &copy.edges {
        let keep = rng.gen_bool(params.p);
        obs.set(u, v, keep);
    }
    (obs, copy)
}
