//! Count, degree and scan tests, and the exact likelihood-ratio test.
//!
//! Every test rejects the null when its statistic reaches the threshold
//! (ties reject).

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::graph::{
    copies_in_complete, densest_subgraph, enumerate_copies, pair_index, placements, Budgets,
    CopyMask, Graph,
};
use crate::sampler::{ModelParams, Observation};

/// How the degree-test threshold is set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DegreeThreshold {
    /// `(n - 1) q + d_max (p - q) / c` with `c = degree_threshold_constant`.
    Standard,
    /// `(n - 1) q + t`, where `t` is the smallest shift at which Bernstein's
    /// inequality plus a union bound over the `n` rows gives a type I bound
    /// of 1. Capped at the standard shift `d_max (p - q) / c`.
    Optimized,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetectorConfig {
    /// `ε` in `κ = ε q + (1 - ε) p`.
    pub scan_kappa_weight: f64,
    /// Largest `|S_{Γ_max}|` the scan will enumerate.
    pub scan_copy_budget: u128,
    pub degree_threshold_constant: f64,
    pub degree_threshold: DegreeThreshold,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        Self {
            scan_kappa_weight: 0.5,
            scan_copy_budget: 50_000_000,
            degree_threshold_constant: 2.0,
            degree_threshold: DegreeThreshold::Standard,
        }
    }
}

impl DetectorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.scan_kappa_weight > 0.0 && self.scan_kappa_weight < 1.0) {
            return Err(Error::InvalidParams(format!(
                "scan kappa weight must lie in (0, 1), got {}",
                self.scan_kappa_weight
            )));
        }
        if self.scan_copy_budget == 0 {
            return Err(Error::InvalidParams("scan copy budget must be at least 1".into()));
        }
        if !(self.degree_threshold_constant > 0.0) {
            return Err(Error::InvalidParams(
                "degree threshold constant must be positive".into(),
            ));
        }
        Ok(())
    }

    pub fn kappa(&self, p: f64, q: f64) -> f64 {
        self.scan_kappa_weight * q + (1.0 - self.scan_kappa_weight) * p
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Verdict {
    pub decision: bool,
    pub statistic: f64,
    pub threshold: f64,
}

impl Verdict {
    fn new(statistic: f64, threshold: f64) -> Self {
        Self {
            decision: statistic >= threshold,
            statistic,
            threshold,
        }
    }
}

pub fn count_threshold(params: &ModelParams) -> f64 {
    let pairs = (params.n * params.n.saturating_sub(1) / 2) as f64;
    pairs * params.q + params.pattern.edge_count() as f64 * (params.p - params.q) / 2.0
}

/// Total number of observed edges.
pub fn count_test(obs: &Observation, params: &ModelParams) -> Verdict {
    Verdict::new(obs.edge_count() as f64, count_threshold(params))
}

pub fn degree_threshold(params: &ModelParams, cfg: &DetectorConfig) -> f64 {
    let n = params.n as f64;
    let base = (n - 1.0) * params.q;
    let shift = params.pattern.max_degree() as f64 * (params.p - params.q)
        / cfg.degree_threshold_constant;
    match cfg.degree_threshold {
        DegreeThreshold::Standard => base + shift,
        DegreeThreshold::Optimized => {
            let log_n = n.max(2.0).ln();
            let var = (n - 1.0) * params.q * (1.0 - params.q);
            let t = log_n / 3.0 + ((log_n / 3.0).powi(2) + 2.0 * var * log_n).sqrt();
            base + t.min(shift)
        }
    }
}

/// Largest observed degree.
pub fn degree_test(obs: &Observation, params: &ModelParams) -> Verdict {
    degree_test_with(obs, params, &DetectorConfig::default())
}

pub fn degree_test_with(obs: &Observation, params: &ModelParams, cfg: &DetectorConfig) -> Verdict {
    Verdict::new(obs.max_degree() as f64, degree_threshold(params, cfg))
}

/// Largest number of observed edges inside one copy of `Γ_max`.
pub fn scan_test(obs: &Observation, params: &ModelParams, cfg: &DetectorConfig) -> Result<Verdict> {
    Ok(ScanTest::new(params, cfg)?.run(obs))
}

/// A scan with its copy enumeration plan prepared once, for repeated use on
/// observations of the same size.
#[derive(Debug, Clone)]
pub struct ScanTest {
    target: Graph,
    n: usize,
    /// Distinct edge masks of the target on positions `0..k`.
    placements: Vec<u64>,
    threshold: f64,
}

impl ScanTest {
    /// Scan over copies of the densest subgraph of the pattern.
    pub fn new(params: &ModelParams, cfg: &DetectorConfig) -> Result<Self> {
        let target = densest_subgraph(&params.pattern)?.graph;
        Self::with_target(params, cfg, target)
    }

    /// Scan over copies of an arbitrary target, with threshold
    /// `κ |e(target)|`.
    pub fn with_target(params: &ModelParams, cfg: &DetectorConfig, target: Graph) -> Result<Self> {
        cfg.validate()?;
        let copies = copies_in_complete(&target, params.n)?;
        let copies = copies.to_u128().unwrap_or(u128::MAX);
        if copies > cfg.scan_copy_budget {
            return Err(Error::ScanBudgetExceeded {
                copies,
                limit: cfg.scan_copy_budget,
            });
        }
        let k = target.vertex_count();
        let placements = placements(&target, &Budgets::default())?
            .iter()
            .map(|edges| {
                edges
                    .iter()
                    .fold(0u64, |m, &(a, b)| m | 1 << pair_index(k, a, b))
            })
            .collect();
        let threshold = cfg.kappa(params.p, params.q) * target.edge_count() as f64;
        Ok(Self {
            target,
            n: params.n,
            placements,
            threshold,
        })
    }

    pub fn target(&self) -> &Graph {
        &self.target
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn statistic(&self, obs: &Observation) -> usize {
        assert_eq!(obs.n(), self.n, "observation size differs from the model");
        let k = self.target.vertex_count();
        let mut search = Search {
            obs,
            k,
            placements: &self.placements,
            full: self.target.edge_count(),
            chosen: Vec::with_capacity(k),
            best: 0,
        };
        search.extend(0, 0);
        search.best
    }

    pub fn run(&self, obs: &Observation) -> Verdict {
        Verdict::new(self.statistic(obs) as f64, self.threshold)
    }
}

struct Search<'a> {
    obs: &'a Observation,
    k: usize,
    placements: &'a [u64],
    full: usize,
    chosen: Vec<usize>,
    best: usize,
}

impl Search<'_> {
    /// Depth-first walk over increasing vertex subsets; `mask` holds the
    /// observed pairs among the chosen positions.
    fn extend(&mut self, start: usize, mask: u64) {
        let i = self.chosen.len();
        if i == self.k {
            let hit = self
                .placements
                .iter()
                .map(|&p| (p & mask).count_ones() as usize)
                .max()
                .unwrap_or(0);
            self.best = self.best.max(hit);
            return;
        }
        // Pairs still undecided bound what this branch can add.
        let open = self.k * (self.k - 1) / 2 - i * i.saturating_sub(1) / 2;
        if mask.count_ones() as usize + open.min(self.full) <= self.best {
            return;
        }
        let n = self.obs.n();
        for v in start..=n - (self.k - i) {
            let mut next = mask;
            for (j, &u) in self.chosen.iter().enumerate() {
                if self.obs.has_edge(u, v) {
                    next |= 1 << pair_index(self.k, j, i);
                }
            }
            self.chosen.push(v);
            self.extend(v + 1, next);
            self.chosen.pop();
            if self.best == self.full {
                return;
            }
        }
    }
}

/// Largest `n` for the exact likelihood-ratio test.
pub const LRT_MAX_VERTICES: usize = 10;
/// Largest `|S_Γ|` for the exact likelihood-ratio test.
pub const LRT_MAX_COPIES: u128 = 1_000_000;

/// Exact likelihood ratio `L(G) = |S_Γ|^{-1} Σ_copies Π_{planted} ratio`.
pub fn likelihood_ratio_test(obs: &Observation, params: &ModelParams) -> Result<Verdict> {
    Ok(LikelihoodRatioTest::new(params)?.run(obs))
}

#[derive(Debug, Clone)]
pub struct LikelihoodRatioTest {
    n: usize,
    copies: Vec<CopyMask>,
    /// `ratio[j]` is the product over a copy with `j` observed planted edges.
    ratio: Vec<f64>,
}

impl LikelihoodRatioTest {
    pub fn new(params: &ModelParams) -> Result<Self> {
        if params.n > LRT_MAX_VERTICES {
            return Err(Error::budget(
                "likelihood ratio host vertices",
                params.n as u128,
                LRT_MAX_VERTICES as u128,
            ));
        }
        let copies = enumerate_copies(&params.pattern, params.n, LRT_MAX_COPIES)?;
        let m = params.pattern.edge_count() as i32;
        let present = params.p / params.q;
        let absent = (1.0 - params.p) / (1.0 - params.q);
        let ratio = (0..=m)
            .map(|j| present.powi(j) * absent.powi(m - j))
            .collect();
        Ok(Self {
            n: params.n,
            copies,
            ratio,
        })
    }

    pub fn statistic(&self, obs: &Observation) -> f64 {
        let mask = observation_mask(obs);
        self.statistic_for_mask(mask)
    }

    /// Same as [`Self::statistic`] for an observation given as a pair mask.
    pub fn statistic_for_mask(&self, mask: CopyMask) -> f64 {
        let total: f64 = self
            .copies
            .iter()
            .map(|&c| self.ratio[(c & mask).count_ones() as usize])
            .sum();
        total / self.copies.len() as f64
    }

    pub fn run(&self, obs: &Observation) -> Verdict {
        assert_eq!(obs.n(), self.n, "observation size differs from the model");
        Verdict::new(self.statistic(obs), 1.0)
    }
}

/// Observation as a pair mask in [`pair_index`] order. Needs `n <= 11`.
pub fn observation_mask(obs: &Observation) -> CopyMask {
    let n = obs.n();
    assert!(n <= 11, "pair masks need at most 11 vertices");
    obs.edges()
        .into_iter()
        .fold(0, |m, (u, v)| m | 1 << pair_index(n, u, v))
}
