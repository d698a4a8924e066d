//! Balanced edge decomposition and the closed-form regime thresholds.
//!
//! Logarithms are natural throughout.

use std::fmt;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::graph::{vertex_cover_number, Graph, GraphStats};

/// Edge-disjoint parts `Γ_1, ..., Γ_M` of a graph. Each part lives on the
/// full vertex set of the original graph; `cover_sets[i]` is the vertex set
/// `S_i` that covers `parts[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub parts: Vec<Graph>,
    pub cover_sets: Vec<Vec<usize>>,
}

impl Decomposition {
    pub fn m(&self) -> usize {
        self.parts.len()
    }
}

/// Splits `g` into `m` parts by degree layers. Vertices are sorted by degree
/// (descending, ties by id); layer `i` takes the vertices of degree at least
/// `d_max^{(m-i)/m}` not yet taken, and part `i` takes the remaining edges
/// touching that layer. Every part then satisfies
/// `τ(Γ_i) d_max(Γ_i) <= 2 |e| d_max^{1/m}`.
pub fn vcd_decompose(g: &Graph, m: usize) -> Result<Decomposition> {
    if g.edge_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    if m == 0 {
        return Err(Error::InvalidParams("M must be at least 1".into()));
    }
    let n = g.vertex_count();
    let d = BigUint::from(g.max_degree());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));

    let mut edge_taken = vec![false; g.edge_count()];
    let mut parts = Vec::with_capacity(m);
    let mut cover_sets = Vec::with_capacity(m);
    let mut prev = 0;
    for i in 1..=m {
        // ℓ_i: number of leading vertices with deg^m >= d^(m-i).
        let bound = d.pow((m - i) as u32);
        let mut ell = order
            .iter()
            .take_while(|&&v| BigUint::from(g.degree(v)).pow(m as u32) >= bound)
            .count();
        ell = ell.max(prev);
        let layer: Vec<usize> = order[prev..ell].to_vec();
        let mut in_layer = vec![false; n];
        layer.iter().for_each(|&v| in_layer[v] = true);
        let mut edges = Vec::new();
        for (idx, &(u, v)) in g.edges().iter().enumerate() {
            if !edge_taken[idx] && (in_layer[u] || in_layer[v]) {
                edge_taken[idx] = true;
                edges.push((u, v));
            }
        }
        parts.push(Graph::from_edge_list(n, &edges)?);
        let mut layer = layer;
        layer.sort_unstable();
        cover_sets.push(layer);
        prev = ell;
    }
    debug_assert!(edge_taken.iter().all(|&t| t));
    Ok(Decomposition { parts, cover_sets })
}

/// `log(τ d_max) / log |e|`.
pub fn vcd_balance_ratio(g: &Graph) -> Result<f64> {
    if g.edge_count() < 2 {
        return Err(Error::TooFewEdges);
    }
    let tau = vertex_cover_number(g)?;
    Ok(balance_ratio_from(
        tau as u128,
        g.max_degree() as u128,
        g.edge_count() as u128,
    ))
}

/// Balance ratio from precomputed `τ`, `d_max` and `|e| >= 2`.
pub fn balance_ratio_from(tau: u128, max_degree: u128, edges: u128) -> f64 {
    ((tau as f64).ln() + (max_degree as f64).ln()) / (edges as f64).ln()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Impossible,
    Hard,
    Easy,
    Indeterminate,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::Impossible => "impossible",
            Verdict::Hard => "hard",
            Verdict::Easy => "easy",
            Verdict::Indeterminate => "indeterminate",
        };
        f.write_str(s)
    }
}

/// Classification of one instance. `margin` is the gap, in units of
/// `log n` unless stated otherwise by the boundary, between the instance and
/// the boundary that decided it; it is positive inside the reported region
/// and, for `Indeterminate`, minus the distance to the nearest decisive
/// boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct RegimeVerdict {
    pub verdict: Verdict,
    pub binding_boundary: &'static str,
    pub margin: f64,
}

impl RegimeVerdict {
    fn new(verdict: Verdict, binding_boundary: &'static str, margin: f64) -> Self {
        Self {
            verdict,
            binding_boundary,
            margin,
        }
    }
}

/// Slack `f(n) = log_n(17 log n)` used by the dense possibility boundary.
pub fn default_slack(n: f64) -> f64 {
    (17.0 * n.ln()).ln() / n.ln()
}

/// Constants of the dense regime (`χ² = Θ(1)`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DenseConstants {
    /// Impossible when `μ <= c_lower log n` (super-logarithmic density).
    pub c_lower: f64,
    /// The scan succeeds when `μ >= c_upper log n`.
    pub c_upper: f64,
    /// Margin `ε` in `n^{1-ε}`.
    pub epsilon: f64,
    /// Densities with `μ >= log_density_floor * log |v|` count as
    /// super-logarithmic.
    pub log_density_floor: f64,
}

impl DenseConstants {
    /// `c_lower = (1-ε) a / (2 + a log(1+λ²))` with `a = μ / log |v|`, and
    /// `c_upper = (1+ε) / d_KL(p‖q)`.
    pub fn from_model(stats: &GraphStats, p: f64, q: f64, epsilon: f64) -> Result<Self> {
        let lambda_sq = crate::moments::chi_square_bernoulli(p, q)?;
        let a = stats.mu() / (stats.num_vertices as f64).ln();
        Ok(Self {
            c_lower: (1.0 - epsilon) * a / (2.0 + a * (1.0 + lambda_sq).ln()),
            c_upper: (1.0 + epsilon) / kl_bernoulli(p, q),
            epsilon,
            log_density_floor: 0.25,
        })
    }
}

/// `d_KL(p‖q)` between Bernoulli laws.
pub fn kl_bernoulli(p: f64, q: f64) -> f64 {
    let term = |a: f64, b: f64| if a == 0.0 { 0.0 } else { a * (a / b).ln() };
    term(p, q) + term(1.0 - p, 1.0 - q)
}

/// Dense regime classification from the graph invariants, `n` and the
/// constants. `Easy` means strong detection is possible by some test in
/// the family (the scan included); `Hard` means the scan is the only
/// candidate and the low-degree bound rules out polynomial time.
pub fn classify_dense(stats: &GraphStats, n: usize, c: &DenseConstants) -> RegimeVerdict {
    let ln_n = (n as f64).ln();
    let mu = stats.mu();
    let e = stats.num_edges as f64;
    let d = stats.max_degree as f64;
    let x = e.max(d * d);
    let x_exp = x.ln() / ln_n;
    let easy_exp = 1.0 + default_slack(n as f64);
    let hard_exp = 1.0 - c.epsilon;

    if x_exp >= easy_exp {
        return RegimeVerdict::new(Verdict::Easy, "count/degree", x_exp - easy_exp);
    }
    let super_log = mu >= c.log_density_floor * (stats.num_vertices as f64).ln();
    if super_log {
        let scaled = mu / ln_n;
        if scaled <= c.c_lower {
            return RegimeVerdict::new(Verdict::Impossible, "density lower", c.c_lower - scaled);
        }
        if scaled >= c.c_upper {
            return RegimeVerdict::new(Verdict::Easy, "scan", scaled - c.c_upper);
        }
        if x_exp <= hard_exp {
            return RegimeVerdict::new(Verdict::Hard, "low-degree", hard_exp - x_exp);
        }
        let gap = (scaled - c.c_lower)
            .min(c.c_upper - scaled)
            .min(easy_exp - x_exp);
        return RegimeVerdict::new(Verdict::Indeterminate, "density gap", -gap);
    }
    if x_exp <= hard_exp {
        return RegimeVerdict::new(Verdict::Impossible, "edges/degree lower", hard_exp - x_exp);
    }
    RegimeVerdict::new(
        Verdict::Indeterminate,
        "edges/degree gap",
        -(x_exp - hard_exp).min(easy_exp - x_exp),
    )
}

/// Exponents of a polynomial family: `χ² = Θ(n^{-α})`, `|v| = Θ(n^β)`,
/// `|e| = |v|^ε`, `d_max = |v|^δ`, `μ = |v|^ζ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolyFamilyExponents {
    pub alpha: f64,
    pub beta: f64,
    pub epsilon: f64,
    pub delta: f64,
    pub zeta: f64,
}

impl PolyFamilyExponents {
    /// Consistency issues (`ζ <= δ <= 1 <= ε <= 2`, ranges of `α`, `β`);
    /// reported, not enforced.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !(0.0..=2.0).contains(&self.alpha) {
            out.push(format!("alpha = {} outside [0, 2]", self.alpha));
        }
        if !(self.beta > 0.0 && self.beta < 1.0) {
            out.push(format!("beta = {} outside (0, 1)", self.beta));
        }
        if self.zeta > self.delta {
            out.push(format!("zeta = {} exceeds delta = {}", self.zeta, self.delta));
        }
        if self.delta > 1.0 {
            out.push(format!("delta = {} exceeds 1", self.delta));
        }
        if !(1.0..=2.0).contains(&self.epsilon) {
            out.push(format!("epsilon = {} outside [1, 2]", self.epsilon));
        }
        out
    }
}

/// Thresholds on `β` for a polynomial family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SparseThresholds {
    /// Weak detection impossible below.
    pub stat_lower: f64,
    /// Strong detection possible above.
    pub stat_upper: f64,
    /// Polynomial-time strong detection impossible below.
    pub comp_lower: f64,
}

/// `x / a` with `x / 0 = ∞`.
fn ratio_or_inf(x: f64, a: f64) -> f64 {
    if a == 0.0 {
        f64::INFINITY
    } else {
        x / a
    }
}

pub fn sparse_thresholds(exp: &PolyFamilyExponents) -> SparseThresholds {
    let PolyFamilyExponents {
        alpha,
        epsilon,
        delta,
        zeta,
        ..
    } = *exp;
    let scan = ratio_or_inf(alpha, zeta);
    let degree = ratio_or_inf(1.0 + alpha, 2.0 * delta);
    let count = ratio_or_inf(2.0 + alpha, 2.0 * epsilon);
    SparseThresholds {
        stat_lower: scan
            .min(ratio_or_inf(1.0 + alpha, 2.0 * delta + zeta))
            .min(count),
        stat_upper: scan.min(degree).min(count),
        comp_lower: degree.min(count),
    }
}

/// Places `β` relative to the sparse thresholds: impossible below
/// `stat_lower`, easy (count or degree) above `comp_lower`, hard between
/// `stat_upper` and `comp_lower`, indeterminate in the statistical gap.
pub fn classify_sparse(exp: &PolyFamilyExponents) -> RegimeVerdict {
    let t = sparse_thresholds(exp);
    let b = exp.beta;
    if b < t.stat_lower {
        RegimeVerdict::new(Verdict::Impossible, "statistical lower", t.stat_lower - b)
    } else if b > t.comp_lower {
        RegimeVerdict::new(Verdict::Easy, "count/degree", b - t.comp_lower)
    } else if b > t.stat_upper {
        RegimeVerdict::new(
            Verdict::Hard,
            "low-degree",
            (b - t.stat_upper).min(t.comp_lower - b),
        )
    } else {
        RegimeVerdict::new(
            Verdict::Indeterminate,
            "statistical gap",
            -(b - t.stat_lower).min(t.stat_upper - b),
        )
    }
}

/// `β`-threshold `min(α, α/4 + 1/2)` for super-dense families.
pub fn superdense_threshold(alpha: f64) -> f64 {
    alpha.min(alpha / 4.0 + 0.5)
}

/// `g_μ(α) = 1 - α/2` for `α <= 1` and `(1 - μα) / (2(1 - μ))` for
/// `1 <= α < 1/μ`; needs `0 < μ < 1`.
pub fn g_mu(alpha: f64, mu: f64) -> Result<f64> {
    if !(mu > 0.0 && mu < 1.0) || !(alpha >= 0.0 && alpha < 1.0 / mu) {
        return Err(Error::AlphaOutOfRange { alpha, mu });
    }
    Ok(if alpha <= 1.0 {
        1.0 - alpha / 2.0
    } else {
        (1.0 - mu * alpha) / (2.0 * (1.0 - mu))
    })
}

/// Inputs of the critical regime (`p = 1 - o(1)`, `q = Θ(n^{-α})`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalInputs {
    pub alpha: f64,
    /// `q = σ / n`; required when `α = 1`.
    pub sigma: Option<f64>,
    /// Set when `d_max = Ω(|v|^β)`; selects the polynomial-degree case at
    /// `α = 1`.
    pub beta_degree: Option<f64>,
    pub epsilon: f64,
}

impl CriticalInputs {
    pub fn new(alpha: f64) -> Self {
        Self {
            alpha,
            sigma: None,
            beta_degree: None,
            epsilon: 0.05,
        }
    }
}

const ALPHA_ONE_TOL: f64 = 1e-9;

/// Critical regime classification.
pub fn critical_classify(stats: &GraphStats, n: usize, input: &CriticalInputs) -> Result<RegimeVerdict> {
    let alpha = input.alpha;
    if !(alpha > 0.0 && alpha < 2.0) {
        return Err(Error::InvalidParams(format!("alpha = {alpha} outside (0, 2)")));
    }
    let eps = input.epsilon;
    let ln_n = (n as f64).ln();
    let log_n = |x: f64| x.ln() / ln_n;
    let mu = stats.mu();
    let e = log_n(stats.num_edges as f64);
    let d_raw = stats.max_degree as f64;
    let d = log_n(d_raw);
    let v = stats.num_vertices as f64;

    if alpha * mu > 1.0 {
        return Ok(RegimeVerdict::new(Verdict::Easy, "scan (alpha mu > 1)", alpha * mu - 1.0));
    }

    // Polynomial boundaries shared by several cases: count and degree tests.
    let edges_and_degree = |e_lo: f64, d_lo: f64, e_hi: f64, d_hi: f64, label_lo, label_hi| {
        if e <= e_lo && d <= d_lo {
            RegimeVerdict::new(Verdict::Impossible, label_lo, (e_lo - e).min(d_lo - d))
        } else if e >= e_hi || d >= d_hi {
            RegimeVerdict::new(Verdict::Easy, label_hi, (e - e_hi).max(d - d_hi))
        } else {
            let to_lo = (e - e_lo).max(d - d_lo);
            let to_hi = (e_hi - e).min(d_hi - d);
            RegimeVerdict::new(Verdict::Indeterminate, "gap", -to_lo.min(to_hi))
        }
    };

    if mu >= 1.0 {
        let x = e.max(2.0 * d);
        let lo = 1.0 - alpha * mu - eps;
        if x <= lo {
            return Ok(RegimeVerdict::new(Verdict::Impossible, "max(|e|, d^2) lower", lo - x));
        }
        let e_hi = 1.0 - alpha / 2.0 + eps;
        let d_hi = ((1.0 - alpha) / 2.0 + eps).max(log_n((16.0 + eps) * ln_n));
        if e >= e_hi {
            return Ok(RegimeVerdict::new(Verdict::Easy, "count", e - e_hi));
        }
        if d >= d_hi {
            return Ok(RegimeVerdict::new(Verdict::Easy, "degree", d - d_hi));
        }
        let gap = (x - lo).min(e_hi - e).min(d_hi - d);
        return Ok(RegimeVerdict::new(Verdict::Indeterminate, "gap", -gap));
    }

    if (alpha - 1.0).abs() < ALPHA_ONE_TOL {
        let sigma = input.sigma.ok_or(Error::MissingSigma)?;
        if let Some(beta) = input.beta_degree {
            // Polynomial maximum degree.
            let lhs = d_raw.powf(1.0 / beta) * d_raw.ln();
            let rhs = (1.0 - eps) / 2.0 * ln_n;
            let e_lo = 0.5 - eps;
            let e_hi = 0.5 + eps;
            let d_hi = (16.0 + eps) * ln_n;
            if e <= e_lo && lhs <= rhs {
                return Ok(RegimeVerdict::new(
                    Verdict::Impossible,
                    "edges and degree (polynomial degree)",
                    (e_lo - e).min((rhs - lhs) / ln_n),
                ));
            }
            if e >= e_hi {
                return Ok(RegimeVerdict::new(Verdict::Easy, "count", e - e_hi));
            }
            if d_raw >= d_hi {
                return Ok(RegimeVerdict::new(Verdict::Easy, "degree", log_n(d_raw / d_hi)));
            }
            let gap = (e_hi - e).min(log_n(d_hi / d_raw));
            return Ok(RegimeVerdict::new(Verdict::Indeterminate, "gap", -gap));
        }
        let sigma_hi = 2.0 * std::f64::consts::E * d_raw * d_raw;
        if sigma > sigma_hi {
            return Ok(edges_and_degree(
                0.5 - eps,
                f64::INFINITY,
                0.5 + eps,
                f64::INFINITY,
                "edges (sigma > 2e d^2)",
                "count",
            ));
        }
        if sigma < 1.0 {
            // Largest β <= 1 with μ >= 1 - |v|^{-β}.
            let beta_star = (-(1.0 - mu).ln() / v.ln()).min(1.0);
            let v_lo = (std::f64::consts::E * d_raw * d_raw / sigma).ln() / (1.0 + eps) * ln_n;
            if v <= v_lo {
                return Ok(RegimeVerdict::new(
                    Verdict::Impossible,
                    "vertices (sigma < 1)",
                    (v_lo / v).ln() / ln_n,
                ));
            }
            if beta_star > 0.0 {
                let v_hi = (1.0 + eps) * ln_n.powf(1.0 / beta_star);
                if v >= v_hi {
                    return Ok(RegimeVerdict::new(
                        Verdict::Easy,
                        "scan (sigma < 1)",
                        (v / v_hi).ln() / ln_n,
                    ));
                }
                return Ok(RegimeVerdict::new(
                    Verdict::Indeterminate,
                    "gap",
                    -((v / v_lo).ln().min((v_hi / v).ln()) / ln_n),
                ));
            }
            return Ok(RegimeVerdict::new(Verdict::Indeterminate, "gap", 0.0));
        }
        return Ok(RegimeVerdict::new(Verdict::Indeterminate, "sigma between 1 and 2e d^2", 0.0));
    }

    if alpha < 1.0 {
        return Ok(edges_and_degree(
            1.0 - alpha / 2.0 - eps,
            (1.0 - alpha) / 2.0 - eps,
            1.0 - alpha / 2.0 + eps,
            (1.0 - alpha) / 2.0 + eps,
            "edges and degree",
            "count/degree",
        ));
    }

    // 1 < α < 1/μ with μ < 1.
    let g = g_mu(alpha, mu)?;
    let k = log_n(v);
    let lo = g - eps;
    let hi = 1.0 - alpha / 2.0 + eps;
    if k <= lo {
        return Ok(RegimeVerdict::new(Verdict::Impossible, "vertices (g_mu)", lo - k));
    }
    if k >= hi {
        return Ok(RegimeVerdict::new(Verdict::Easy, "count", k - hi));
    }
    Ok(RegimeVerdict::new(
        Verdict::Indeterminate,
        "gap",
        -(k - lo).min(hi - k),
    ))
}
