use std::collections::HashMap;

use plantlab_core::graph::{copies_in_complete, make_family, FamilySpec, Graph};
use plantlab_core::sampler::{
    sample_null, sample_planted, sample_uniform_copy, stream_rng, ModelParams, Observation,
};
use proptest::prelude::*;

/// Upper 10⁻³ quantile of the chi-square distribution (Wilson-Hilferty).
fn chi2_critical(df: usize) -> f64 {
    let k = df as f64;
    let z = 3.090_232;
    k * (1.0 - 2.0 / (9.0 * k) + z * (2.0 / (9.0 * k)).sqrt()).powi(3)
}

fn copy_frequencies(pattern: &Graph, n: usize, draws: usize, seed: u64) -> HashMap<Vec<(usize, usize)>, usize> {
    let mut rng = stream_rng(seed, 0);
    let mut freq = HashMap::new();
    for _ in 0..draws {
        let copy = sample_uniform_copy(pattern, n, &mut rng).unwrap();
        *freq.entry(copy.edges).or_insert(0) += 1;
    }
    freq
}

fn chi_square_uniform(pattern: &Graph, n: usize, draws: usize, seed: u64) -> (f64, usize) {
    let cells = copies_in_complete(pattern, n).unwrap().try_into().unwrap();
    let freq = copy_frequencies(pattern, n, draws, seed);
    assert_eq!(freq.len(), cells, "every copy should be hit");
    let expected = draws as f64 / cells as f64;
    let stat = freq.values().map(|&o| (o as f64 - expected).powi(2) / expected).sum();
    (stat, cells - 1)
}

#[test]
fn null_edge_count_mean() {
    let (n, q, samples) = (100usize, 0.3, 10_000);
    let mut rng = stream_rng(11, 0);
    let total: usize = (0..samples).map(|_| sample_null(n, q, &mut rng).edge_count()).sum();
    let pairs = (n * (n - 1) / 2) as f64;
    let mean = total as f64 / samples as f64;
    let sigma = (pairs * q * (1.0 - q) / samples as f64).sqrt();
    assert!((mean - pairs * q).abs() <= 3.0 * sigma, "mean {mean}");
}

#[test]
fn null_extremes() {
    let mut rng = stream_rng(0, 0);
    assert_eq!(sample_null(4, 0.0, &mut rng), Observation::empty(4));
    assert_eq!(sample_null(4, 1.0, &mut rng), Observation::complete(4));
}

#[test]
fn triangle_copies_in_k4_are_uniform() {
    let tri = Graph::complete(3);
    let freq = copy_frequencies(&tri, 4, 40_000, 3);
    assert_eq!(freq.len(), 4);
    for &count in freq.values() {
        assert!((count as f64 / 40_000.0 - 0.25).abs() <= 0.01);
    }
    let (stat, df) = chi_square_uniform(&tri, 4, 40_000, 4);
    assert!(stat < chi2_critical(df), "chi2 = {stat}");
}

#[test]
fn triangle_in_k3_is_unique() {
    let freq = copy_frequencies(&Graph::complete(3), 3, 100, 1);
    assert_eq!(freq.len(), 1);
}

#[test]
fn copy_uniformity_chi_square() {
    let cases = [
        (Graph::complete(2), 3usize),
        (make_family(&FamilySpec::Path(2)).unwrap(), 5),
        (make_family(&FamilySpec::Matching(2)).unwrap(), 5),
        (make_family(&FamilySpec::Star(3)).unwrap(), 4),
    ];
    for (i, (pattern, n)) in cases.iter().enumerate() {
        assert!(copies_in_complete(pattern, *n).unwrap() <= 30u32.into());
        let (stat, df) = chi_square_uniform(pattern, *n, 60_000, 100 + i as u64);
        assert!(stat < chi2_critical(df), "case {i}: chi2 = {stat}, df = {df}");
    }
}

#[test]
fn planted_edge_marginal() {
    // P[edge present] = q + (p - q) P[edge in copy] = 0.1 + 0.8 * 3/15.
    let params = ModelParams::new(6, 0.9, 0.1, Graph::complete(3)).unwrap();
    let samples = 100_000;
    let mut rng = stream_rng(21, 0);
    let hits = (0..samples)
        .filter(|_| sample_planted(&params, &mut rng).0.has_edge(0, 1))
        .count();
    let expected = 0.26;
    let sigma = (expected * (1.0 - expected) / samples as f64).sqrt();
    let freq = hits as f64 / samples as f64;
    assert!((freq - expected).abs() <= 3.0 * sigma, "frequency {freq}");
}

#[test]
fn degenerate_plant_matches_null_marginal() {
    let params = ModelParams::new(8, 0.4, 0.4, Graph::complete(4)).unwrap();
    let samples = 20_000;
    let mut rng = stream_rng(5, 0);
    let total: usize = (0..samples)
        .map(|_| sample_planted(&params, &mut rng).0.edge_count())
        .sum();
    let pairs = 28.0;
    let mean = total as f64 / samples as f64;
    let sigma = (pairs * 0.4 * 0.6 / samples as f64).sqrt();
    assert!((mean - pairs * 0.4).abs() <= 3.0 * sigma, "mean {mean}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn same_seed_same_observations(seed in any::<u64>(), stream in 0u64..1000, n in 2usize..60, q in 0.01f64..0.99) {
        let a = sample_null(n, q, &mut stream_rng(seed, stream));
        let b = sample_null(n, q, &mut stream_rng(seed, stream));
        prop_assert_eq!(a, b);
    }

    #[test]
    fn full_signal_keeps_every_planted_edge(seed in any::<u64>(), k in 2usize..7, extra in 0usize..10, q in 0.01f64..0.5) {
        let params = ModelParams::new(k + extra, 1.0, q, Graph::complete(k)).unwrap();
        let (obs, copy) = sample_planted(&params, &mut stream_rng(seed, 0));
        prop_assert!(copy.edges.iter().all(|&(u, v)| obs.has_edge(u, v)));
        let mut seen = copy.vertex_map.clone();
        seen.sort_unstable();
        seen.dedup();
        prop_assert_eq!(seen.len(), k);
    }

    #[test]
    fn observations_are_symmetric(seed in any::<u64>(), n in 2usize..40, q in 0.0f64..1.0) {
        let obs = sample_null(n, q, &mut stream_rng(seed, 1));
        for u in 0..n {
            prop_assert!(!obs.has_edge(u, u));
            for v in 0..n {
                prop_assert_eq!(obs.has_edge(u, v), obs.has_edge(v, u));
            }
        }
        prop_assert_eq!(Observation::parse_edge_list(&obs.to_edge_list()).unwrap(), obs);
    }
}
