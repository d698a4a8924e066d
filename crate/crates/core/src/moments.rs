//! Second moment of the planted likelihood ratio and its low-degree
//! truncation.
//!
//! With `λ² = χ²(p‖q)` and `Γ'` a fixed copy of the pattern,
//!
//! ```text
//! E[L²] = Σ_{H ⊆ Γ'} λ^{2|e(H)|} P[H ⊆ Γ] = E[(1 + λ²)^{|e(Γ ∩ Γ')|}]
//! ```
//!
//! where `Γ` is a uniform copy and the sum runs over edge subsets of `Γ'`.
//! Keeping only subsets with at most `D` edges gives `‖L_{≤D}‖²`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{
    are_isomorphic, containment_probability, enumerate_copies, next_combination, pair_index,
    Graph,
};
use crate::sampler::{sample_uniform_copy, stream_rng};

/// Largest pattern edge count for full subset enumeration.
pub const MAX_SUBSET_EDGES: usize = 20;
/// Largest number of edge subsets the low-degree norm will visit.
pub const MAX_LDP_SUBSETS: u128 = 1 << 22;
/// Largest `|S_Γ|` for the pair enumeration.
pub const MAX_PAIR_COPIES: u128 = 5_000_000;

/// `χ²(p‖q) = (p - q)² / (q (1 - q))`.
pub fn chi_square_bernoulli(p: f64, q: f64) -> Result<f64> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::DegenerateQ(q));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParams(format!("p must lie in [0, 1], got {p}")));
    }
    Ok((p - q).powi(2) / (q * (1.0 - q)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentParams {
    pub n: usize,
    /// `λ²`, kept exact so the enumerations return exact rationals.
    pub lambda_sq: BigRational,
    pub pattern: Graph,
}

impl MomentParams {
    pub fn new(n: usize, lambda_sq: BigRational, pattern: Graph) -> Result<Self> {
        if lambda_sq < BigRational::zero() {
            return Err(Error::InvalidParams("lambda^2 must be nonnegative".into()));
        }
        pattern.require_pattern()?;
        if pattern.vertex_count() > n {
            return Err(Error::PatternTooLarge {
                pattern: pattern.vertex_count(),
                n,
            });
        }
        Ok(Self {
            n,
            lambda_sq,
            pattern,
        })
    }

    /// `λ²` given as a float is converted exactly (binary expansion).
    pub fn from_f64(n: usize, lambda_sq: f64, pattern: Graph) -> Result<Self> {
        let exact = BigRational::from_float(lambda_sq)
            .ok_or_else(|| Error::InvalidParams(format!("lambda^2 = {lambda_sq}")))?;
        Self::new(n, exact, pattern)
    }

    pub fn lambda_sq_f64(&self) -> f64 {
        self.lambda_sq.to_f64().unwrap_or(f64::INFINITY)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LdpConfig {
    pub degree: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentMethod {
    ExactSubgraphSum,
    ExactIntersectionMgf,
    MonteCarlo,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MomentValue {
    Exact(BigRational),
    Approx(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentResult {
    pub value: MomentValue,
    pub method: MomentMethod,
    pub std_error: Option<f64>,
}

impl MomentResult {
    pub fn to_f64(&self) -> f64 {
        match &self.value {
            MomentValue::Exact(r) => r.to_f64().unwrap_or(f64::INFINITY),
            MomentValue::Approx(x) => *x,
        }
    }

    pub fn exact(&self) -> Option<&BigRational> {
        match &self.value {
            MomentValue::Exact(r) => Some(r),
            MomentValue::Approx(_) => None,
        }
    }
}

/// Empirical law of `|e(Γ ∩ Γ')|`; `counts[j]` is the number of trials with
/// intersection size `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram {
    pub counts: Vec<u64>,
    pub trials: u64,
}

impl Histogram {
    pub fn frequencies(&self) -> Vec<f64> {
        self.counts
            .iter()
            .map(|&c| c as f64 / self.trials.max(1) as f64)
            .collect()
    }
}

/// Samples the intersection size between the canonical copy of `pattern`
/// (its own labels inside `0..n`) and a uniform random copy.
pub fn intersection_distribution<R: Rng + ?Sized>(
    pattern: &Graph,
    n: usize,
    trials: u64,
    rng: &mut R,
) -> Result<Histogram> {
    pattern.require_pattern()?;
    let mut counts = vec![0u64; pattern.edge_count() + 1];
    for _ in 0..trials {
        let copy = sample_uniform_copy(pattern, n, rng)?;
        counts[intersection_with_canonical(pattern, &copy.edges)] += 1;
    }
    Ok(Histogram { counts, trials })
}

fn intersection_with_canonical(pattern: &Graph, edges: &[(usize, usize)]) -> usize {
    let k = pattern.vertex_count();
    edges
        .iter()
        .filter(|&&(u, v)| u < k && v < k && pattern.has_edge(u, v))
        .count()
}

/// `E[L²]` as the sum over all edge subsets of the fixed copy, grouping
/// isomorphic subsets.
pub fn second_moment_exact(mp: &MomentParams) -> Result<MomentResult> {
    let m = mp.pattern.edge_count();
    if m > MAX_SUBSET_EDGES {
        return Err(Error::budget(
            "edge subsets of the pattern",
            m as u128,
            MAX_SUBSET_EDGES as u128,
        ));
    }
    let value = subgraph_sum(mp, m)?;
    Ok(MomentResult {
        value: MomentValue::Exact(value),
        method: MomentMethod::ExactSubgraphSum,
        std_error: None,
    })
}

/// `‖L_{≤D}‖²`: the subgraph sum restricted to subsets with at most `D` edges.
pub fn ldp_norm_sq(mp: &MomentParams, cfg: &LdpConfig) -> Result<MomentResult> {
    let m = mp.pattern.edge_count();
    let d = cfg.degree.min(m);
    let subsets: u128 = (0..=d).map(|j| binomial(m, j)).sum();
    if subsets > MAX_LDP_SUBSETS {
        return Err(Error::budget("low-degree edge subsets", subsets, MAX_LDP_SUBSETS));
    }
    let value = subgraph_sum(mp, d)?;
    Ok(MomentResult {
        value: MomentValue::Exact(value),
        method: MomentMethod::ExactSubgraphSum,
        std_error: None,
    })
}

/// `E[(1 + λ²)^{|e(Γ ∩ Γ')|}]` by enumerating every copy of the pattern in
/// `K_n` against the canonical one (`n <= 11`).
pub fn second_moment_intersection_exact(mp: &MomentParams) -> Result<MomentResult> {
    let n = mp.n;
    let copies = enumerate_copies(&mp.pattern, n, MAX_PAIR_COPIES)?;
    let fixed = mp
        .pattern
        .edges()
        .iter()
        .fold(0u64, |acc, &(u, v)| acc | 1 << pair_index(n, u, v));
    let mut hist = vec![0u64; mp.pattern.edge_count() + 1];
    for &c in &copies {
        hist[(c & fixed).count_ones() as usize] += 1;
    }
    let base = BigRational::one() + &mp.lambda_sq;
    let mut power = BigRational::one();
    let mut total = BigRational::zero();
    for &count in &hist {
        total += &power * BigRational::from_integer(BigInt::from(count));
        power *= &base;
    }
    let value = total / BigRational::from_integer(BigInt::from(copies.len()));
    Ok(MomentResult {
        value: MomentValue::Exact(value),
        method: MomentMethod::ExactIntersectionMgf,
        std_error: None,
    })
}

/// Monte-Carlo estimate of `E[(1 + λ²)^{|e(Γ ∩ Γ')|}]`. Trial `i` uses
/// stream `i` of `seed`; trials run in parallel and are summed in index
/// order, so the result does not depend on the thread count.
pub fn second_moment_mc(mp: &MomentParams, trials: u64, seed: u64) -> Result<MomentResult> {
    if trials == 0 {
        return Err(Error::InvalidParams("trials must be at least 1".into()));
    }
    let base = 1.0 + mp.lambda_sq_f64();
    let values: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i);
            let copy = sample_uniform_copy(&mp.pattern, mp.n, &mut rng)
                .expect("pattern fits by construction");
            base.powi(intersection_with_canonical(&mp.pattern, &copy.edges) as i32)
        })
        .collect();
    let t = trials as f64;
    let mean = values.iter().sum::<f64>() / t;
    let var = if trials > 1 {
        values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (t - 1.0)
    } else {
        0.0
    };
    Ok(MomentResult {
        value: MomentValue::Approx(mean),
        method: MomentMethod::MonteCarlo,
        std_error: Some((var / t).sqrt()),
    })
}

/// Lower bounds on the optimal risk: `max(1 - √(E[L²] - 1)/2, 1/(2 E[L²]))`
/// from the second moment, and `max(0, 1 - |p - q| |e(Γ)|)` from the planted
/// edges alone.
pub fn risk_lower_bounds(
    second_moment: f64,
    p: f64,
    q: f64,
    num_planted_edges: usize,
) -> Result<(f64, f64)> {
    if !(second_moment >= 1.0) {
        return Err(Error::InvalidMoment(second_moment));
    }
    let sm = (1.0 - 0.5 * (second_moment - 1.0).sqrt()).max(0.5 / second_moment);
    let tv = (1.0 - (p - q).abs() * num_planted_edges as f64).max(0.0);
    Ok((sm, tv))
}

/// `Σ_{H ⊆ Γ', 1 ≤ |e(H)| ≤ max_edges} λ^{2|e(H)|} P[H ⊆ Γ]`, plus 1 for the
/// empty subgraph.
fn subgraph_sum(mp: &MomentParams, max_edges: usize) -> Result<BigRational> {
    let m = mp.pattern.edge_count();
    // Classes keyed by (|v|, |e|, degree sequence); within a key, one entry
    // per isomorphism class with its number of subsets.
    let mut classes: HashMap<(usize, usize, Vec<usize>), Vec<(Graph, u64)>> = HashMap::new();
    for size in 1..=max_edges {
        let mut subset: Vec<usize> = (0..size).collect();
        loop {
            let (h, _) = mp.pattern.edge_subgraph(&subset);
            let mut degrees = h.degrees();
            degrees.sort_unstable();
            let bucket = classes
                .entry((h.vertex_count(), h.edge_count(), degrees))
                .or_default();
            let mut placed = false;
            for (rep, count) in bucket.iter_mut() {
                if are_isomorphic(rep, &h)? {
                    *count += 1;
                    placed = true;
                    break;
                }
            }
            if !placed {
                bucket.push((h, 1));
            }
            if !next_combination(&mut subset, m) {
                break;
            }
        }
    }
    let mut total = BigRational::one();
    let mut keys: Vec<_> = classes.into_iter().collect();
    keys.sort_by(|a, b| a.0.cmp(&b.0));
    for ((_, e, _), reps) in keys {
        let weight = num_traits::pow(mp.lambda_sq.clone(), e);
        for (rep, count) in reps {
            // Every subset of a class has the same containment probability.
            let prob = containment_probability(&rep, &mp.pattern, mp.n)?;
            total += &weight * prob * BigRational::from_integer(BigInt::from(count));
        }
    }
    Ok(total)
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_family, FamilySpec};

    fn rat(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    fn mp(spec: FamilySpec, n: usize, l: BigRational) -> MomentParams {
        MomentParams::new(n, l, make_family(&spec).unwrap()).unwrap()
    }

    #[test]
    fn chi_square_values() {
        assert_eq!(chi_square_bernoulli(0.5, 0.5).unwrap(), 0.0);
        assert!((chi_square_bernoulli(0.5, 0.25).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!((chi_square_bernoulli(1.0, 0.5).unwrap() - 1.0).abs() < 1e-15);
        assert!(matches!(chi_square_bernoulli(0.5, 0.0), Err(Error::DegenerateQ(_))));
        assert!(chi_square_bernoulli(0.5, 1.0).is_err());
    }

    #[test]
    fn zero_signal_gives_one() {
        let m = mp(FamilySpec::Clique(3), 6, rat(0, 1));
        let exact = second_moment_exact(&m).unwrap();
        assert_eq!(exact.exact().unwrap(), &rat(1, 1));
        let mc = second_moment_mc(&m, 100, 3).unwrap();
        assert_eq!(mc.to_f64(), 1.0);
        assert_eq!(mc.std_error, Some(0.0));
    }

    #[test]
    fn single_edge_closed_form() {
        let m = mp(FamilySpec::Clique(2), 3, rat(3, 1));
        assert_eq!(second_moment_exact(&m).unwrap().exact().unwrap(), &rat(2, 1));
        assert_eq!(
            second_moment_intersection_exact(&m).unwrap().exact().unwrap(),
            &rat(2, 1)
        );
    }

    #[test]
    fn ldp_truncation() {
        let l = rat(1, 2);
        let m = mp(FamilySpec::Path(3), 7, l.clone());
        let d0 = ldp_norm_sq(&m, &LdpConfig { degree: 0 }).unwrap();
        assert_eq!(d0.exact().unwrap(), &rat(1, 1));
        // Degree one: 1 + λ² |e|² / C(n, 2).
        let d1 = ldp_norm_sq(&m, &LdpConfig { degree: 1 }).unwrap();
        assert_eq!(d1.exact().unwrap(), &(rat(1, 1) + l * rat(9, 21)));
        let full = ldp_norm_sq(&m, &LdpConfig { degree: 50 }).unwrap();
        assert_eq!(full.exact(), second_moment_exact(&m).unwrap().exact());
    }

    #[test]
    fn lower_bounds() {
        assert_eq!(risk_lower_bounds(1.0, 0.5, 0.4, 3).unwrap().0, 1.0);
        assert_eq!(risk_lower_bounds(2.0, 0.5, 0.4, 3).unwrap().0, 0.5);
        assert!((risk_lower_bounds(2.0, 0.5, 0.4, 3).unwrap().1 - 0.7).abs() < 1e-12);
        assert_eq!(risk_lower_bounds(2.0, 0.9, 0.1, 3).unwrap().1, 0.0);
        assert!(matches!(
            risk_lower_bounds(0.5, 0.5, 0.4, 1),
            Err(Error::InvalidMoment(_))
        ));
    }

    #[test]
    fn complete_pattern_filling_the_host() {
        let g = Graph::complete(4);
        let hist = intersection_distribution(&g, 4, 50, &mut stream_rng(0, 0)).unwrap();
        assert_eq!(hist.counts[6], 50);
    }
}
