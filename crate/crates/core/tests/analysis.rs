use num_bigint::BigUint;
use plantlab_core::analysis::{
    balance_ratio_from, classify_dense, classify_sparse, critical_classify, g_mu,
    sparse_thresholds, superdense_threshold, vcd_balance_ratio, vcd_decompose, CriticalInputs,
    DenseConstants, PolyFamilyExponents, Verdict,
};
use plantlab_core::graph::{
    graph_stats, make_family, unbalanced_stars_invariants, vertex_cover_number, FamilySpec, Graph,
};
use plantlab_core::Error;
use proptest::prelude::*;

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n)
        .prop_flat_map(|n| (Just(n), prop::collection::vec(0.0f64..1.0, n * (n - 1) / 2), 0.05f64..0.9))
        .prop_filter_map("needs an edge", |(n, coins, density)| {
            let mut pairs = Vec::new();
            let mut i = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if coins[i] < density {
                        pairs.push((u, v));
                    }
                    i += 1;
                }
            }
            (!pairs.is_empty()).then(|| Graph::from_edge_list(n, &pairs).unwrap())
        })
}

fn pow(x: usize, e: usize) -> BigUint {
    num_traits::pow(BigUint::from(x), e)
}

/// Checks the decomposition guarantee and returns nothing on success.
fn check_decomposition(g: &Graph, m: usize) {
    let dec = vcd_decompose(g, m).unwrap();
    assert_eq!(dec.m(), m);
    let d = g.max_degree();
    let e = g.edge_count() as f64;

    let mut edges: Vec<(usize, usize)> = dec.parts.iter().flat_map(|p| p.edges().to_vec()).collect();
    edges.sort_unstable();
    assert_eq!(edges, g.edges().to_vec(), "parts must partition the edges");
    assert!(dec.parts[0].edge_count() > 0);

    for (i, part) in dec.parts.iter().enumerate() {
        let tau = vertex_cover_number(part).unwrap();
        let di = part.max_degree();
        let lhs = (tau * di) as f64;
        let rhs = 2.0 * e * (d as f64).powf(1.0 / m as f64);
        assert!(lhs <= rhs * (1.0 + 1e-12), "part {i}: {lhs} > {rhs}");
        // d_max(Γ_i) <= d^{(M-i+1)/M} with 1-based i, compared exactly.
        assert!(pow(di, m) <= pow(d, m - i), "part {i}: degree {di}");
    }
}

#[test]
fn single_part_is_whole_graph() {
    let g = make_family(&FamilySpec::CompleteBipartite(2, 3)).unwrap();
    let dec = vcd_decompose(&g, 1).unwrap();
    assert_eq!(dec.parts, vec![g]);
}

#[test]
fn star_stays_in_first_part() {
    let g = make_family(&FamilySpec::Star(9)).unwrap();
    for m in 1..=4 {
        let dec = vcd_decompose(&g, m).unwrap();
        assert_eq!(dec.parts[0], g);
        assert!(dec.parts[1..].iter().all(|p| p.edge_count() == 0));
    }
}

#[test]
fn unbalanced_stars_decomposition() {
    let g = make_family(&FamilySpec::UnbalancedStars(256)).unwrap();
    for m in 1..=4 {
        check_decomposition(&g, m);
    }
}

#[test]
fn decomposition_errors() {
    assert_eq!(vcd_decompose(&Graph::empty(3), 2), Err(Error::EmptyGraph));
    assert!(vcd_decompose(&Graph::complete(3), 0).is_err());
}

#[test]
fn balance_ratio_examples() {
    let star = make_family(&FamilySpec::Star(7)).unwrap();
    assert!((vcd_balance_ratio(&star).unwrap() - 1.0).abs() < 1e-12);
    let k4 = vcd_balance_ratio(&Graph::complete(4)).unwrap();
    assert!((k4 - 9f64.ln() / 6f64.ln()).abs() < 1e-12);
    assert_eq!(vcd_balance_ratio(&Graph::complete(2)), Err(Error::TooFewEdges));
}

#[test]
fn unbalanced_stars_ratio_tends_to_seven_fifths() {
    let small = graph_stats(&make_family(&FamilySpec::UnbalancedStars(81)).unwrap()).unwrap();
    let inv = unbalanced_stars_invariants(81);
    assert_eq!(inv.edges, small.num_edges as u128);
    assert_eq!(inv.max_degree, small.max_degree as u128);
    assert_eq!(inv.vertex_cover, small.vertex_cover_number as u128);

    for (k, tol) in [(1_000_000u64, 0.02), (1 << 30, 1e-3), (1 << 41, 1e-3)] {
        let inv = unbalanced_stars_invariants(k);
        let r = balance_ratio_from(inv.vertex_cover, inv.max_degree, inv.edges);
        assert!((r - 1.4).abs() < tol, "k = {k}: {r}");
    }
}

#[test]
fn sparse_examples() {
    let t = sparse_thresholds(&PolyFamilyExponents { alpha: 1.0, beta: 0.5, epsilon: 2.0, delta: 1.0, zeta: 1.0 });
    assert!((t.stat_lower - 2.0 / 3.0).abs() < 1e-15);
    assert!((t.stat_upper - 0.75).abs() < 1e-15);
    assert!((t.comp_lower - 0.75).abs() < 1e-15);

    let t = sparse_thresholds(&PolyFamilyExponents { alpha: 0.7, beta: 0.5, epsilon: 1.2, delta: 0.6, zeta: 0.0 });
    assert_eq!(t.stat_lower, t.stat_upper);
    assert_eq!(t.stat_lower, (1.7f64 / 1.2).min(2.7 / 2.4));

    // ε > 2δ + ζ/2: the degree terms never bind.
    let exp = PolyFamilyExponents { alpha: 0.5, beta: 0.5, epsilon: 1.8, delta: 0.3, zeta: 0.2 };
    let t = sparse_thresholds(&exp);
    assert_eq!(t.stat_lower, t.stat_upper);
    assert_eq!(t.stat_lower, (0.5f64 / 0.2).min(2.5 / 3.6));
}

#[test]
fn sparse_classification_follows_thresholds() {
    let base = PolyFamilyExponents { alpha: 1.0, beta: 0.5, epsilon: 2.0, delta: 1.0, zeta: 1.0 };
    let at = |beta| classify_sparse(&PolyFamilyExponents { beta, ..base }).verdict;
    assert_eq!(at(0.5), Verdict::Impossible);
    assert_eq!(at(0.7), Verdict::Indeterminate);
    assert_eq!(at(0.9), Verdict::Easy);
}

#[test]
fn superdense_examples() {
    assert_eq!(superdense_threshold(1.0), 0.75);
    assert!((superdense_threshold(2.0 / 3.0) - 2.0 / 3.0).abs() < 1e-15);
    assert_eq!(superdense_threshold(0.1), 0.1);
}

#[test]
fn g_mu_examples() {
    assert_eq!(g_mu(0.5, 0.5).unwrap(), 0.75);
    assert_eq!(g_mu(1.0, 0.5).unwrap(), 0.5);
    assert_eq!(g_mu(1.5, 0.5).unwrap(), 0.25);
    assert!(matches!(g_mu(2.0, 0.5), Err(Error::AlphaOutOfRange { .. })));
    assert!(g_mu(0.5, 1.0).is_err());
}

#[test]
fn g_mu_vanishes_at_the_trivial_end() {
    for mu in [0.1, 0.4, 0.7, 0.95] {
        let v = g_mu(1.0 / mu - 1e-9, mu).unwrap();
        assert!(v.abs() < 1e-7, "mu = {mu}: {v}");
    }
}

fn dense_constants(c_lower: f64, c_upper: f64) -> DenseConstants {
    DenseConstants { c_lower, c_upper, epsilon: 0.1, log_density_floor: 0.25 }
}

#[test]
fn dense_examples() {
    let n = 1000usize;
    let ln_n = (n as f64).ln();
    let clique = |k| graph_stats(&Graph::complete(k)).unwrap();

    // μ = 14 >= 2 * 1 * ... with C̄ = 14 / (2 ln n).
    let s = clique(29);
    let c_upper = s.mu() / (2.0 * ln_n);
    let v = classify_dense(&s, n, &dense_constants(0.01, c_upper));
    assert_eq!((v.verdict, v.binding_boundary), (Verdict::Easy, "scan"));

    // μ = 3 <= C̲ log n / 2.
    let s = clique(7);
    let c_lower = 2.0 * s.mu() / ln_n;
    let v = classify_dense(&s, n, &dense_constants(c_lower, 10.0));
    assert_eq!(v.verdict, Verdict::Impossible);

    // C̲ log n < μ = 5 < C̄ log n, |e| ∨ d² = 100 <= n^{0.9}.
    let s = clique(11);
    let v = classify_dense(&s, n, &dense_constants(0.1, 1.0));
    assert_eq!((v.verdict, v.binding_boundary), (Verdict::Hard, "low-degree"));

    // A huge star is found by the degree test.
    let s = graph_stats(&make_family(&FamilySpec::Star(5000)).unwrap()).unwrap();
    assert_eq!(classify_dense(&s, 6000, &dense_constants(0.1, 1.0)).verdict, Verdict::Easy);
}

#[test]
fn critical_examples() {
    // α = 0.5 with |e| = n^0.9: count boundary n^{0.75+ε}.
    let g = make_family(&FamilySpec::Matching(500)).unwrap();
    let s = graph_stats(&g).unwrap();
    let n = (500f64).powf(1.0 / 0.9).round() as usize;
    let v = critical_classify(&s, n, &CriticalInputs::new(0.5)).unwrap();
    assert_eq!((v.verdict, v.binding_boundary), (Verdict::Easy, "count/degree"));

    // α = 1, bounded degree, σ = 4e d², |e| <= n^0.4.
    let g = make_family(&FamilySpec::Matching(10)).unwrap();
    let s = graph_stats(&g).unwrap();
    let input = CriticalInputs {
        sigma: Some(4.0 * std::f64::consts::E),
        ..CriticalInputs::new(1.0)
    };
    assert_eq!(critical_classify(&s, 1_000_000, &input).unwrap().verdict, Verdict::Impossible);

    // α = 1, σ = 1/2, a long path: μ = 1 - 1/|v|, |v| well above log n.
    let s = graph_stats(&make_family(&FamilySpec::Path(49)).unwrap()).unwrap();
    let input = CriticalInputs { sigma: Some(0.5), ..CriticalInputs::new(1.0) };
    let v = critical_classify(&s, 1000, &input).unwrap();
    assert_eq!((v.verdict, v.binding_boundary), (Verdict::Easy, "scan (sigma < 1)"));

    assert_eq!(critical_classify(&s, 1000, &CriticalInputs::new(1.0)), Err(Error::MissingSigma));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(80))]

    #[test]
    fn decomposition_guarantee(g in graph_strategy(14), m in 1usize..=4) {
        check_decomposition(&g, m);
    }

    #[test]
    fn sparse_threshold_order(alpha in 0.0f64..=2.0, eps in 1.0f64..=2.0, delta in 0.0f64..=1.0, frac in 0.0f64..=1.0) {
        let exp = PolyFamilyExponents { alpha, beta: 0.5, epsilon: eps, delta, zeta: delta * frac };
        let t = sparse_thresholds(&exp);
        prop_assert!(t.stat_lower <= t.stat_upper);
        prop_assert!(t.stat_upper <= t.comp_lower);
    }

    #[test]
    fn g_mu_continuous_at_one(mu in 0.01f64..0.99) {
        let left = g_mu(1.0, mu).unwrap();
        let right = (1.0 - mu) / (2.0 * (1.0 - mu));
        prop_assert!((left - right).abs() < 1e-12);
        let near = g_mu(1.0 + 1e-12, mu).unwrap();
        prop_assert!((left - near).abs() < 1e-10);
    }
}
