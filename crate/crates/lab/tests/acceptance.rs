//! End-to-end acceptance checks. Prints one `PASS`/`FAIL` line per check and
//! exits non-zero if any check outside `KNOWN_FAILURES` fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use plantlab::harness::{estimate_risk, DetectorKind};
use plantlab_core::analysis::{
    balance_ratio_from, g_mu, sparse_thresholds, superdense_threshold, vcd_decompose,
    PolyFamilyExponents,
};
use plantlab_core::detectors::{
    count_test, degree_test, DetectorConfig, LikelihoodRatioTest, ScanTest,
};
use plantlab_core::graph::{
    connected_sets_count, containment_probability, make_family, max_subgraph_density,
    max_subgraph_density_exhaustive, spanning_tree_count, unbalanced_stars_invariants,
    vertex_cover_brute_force, vertex_cover_number, FamilySpec, Graph,
};
use plantlab_core::moments::{
    chi_square_bernoulli, intersection_distribution, ldp_norm_sq, risk_lower_bounds,
    second_moment_exact, LdpConfig, MomentParams,
};
use plantlab_core::sampler::{stream_rng, ModelParams, Observation};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
/// Name, check, runtime budget in seconds.
type Check = (&'static str, fn() -> Outcome, u64);

/// Checks that fail with the default configuration. They still print `FAIL`.
/// A5: at n = 40 the default scan threshold (κ = (p + q)/2, 5.25 of 10 edges)
/// is crossed under the null in about a third of draws.
const KNOWN_FAILURES: &[&str] = &["A5"];

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn family(spec: FamilySpec) -> Graph {
    make_family(&spec).unwrap()
}

fn rat(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

/// Every injective map of the pattern's vertices into `0..n`, as edge lists.
fn injective_images(pattern: &Graph, n: usize) -> Vec<Vec<(usize, usize)>> {
    fn go(p: &Graph, n: usize, map: &mut Vec<usize>, out: &mut Vec<Vec<(usize, usize)>>) {
        if map.len() == p.vertex_count() {
            out.push(
                p.edges()
                    .iter()
                    .map(|&(u, v)| (map[u].min(map[v]), map[u].max(map[v])))
                    .collect(),
            );
            return;
        }
        for v in 0..n {
            if !map.contains(&v) {
                map.push(v);
                go(p, n, map, out);
                map.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(pattern, n, &mut Vec::new(), &mut out);
    out
}

fn random_graph(rng: &mut ChaCha8Rng, n: usize, density: f64) -> Graph {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|_| rng.gen_bool(density))
        .collect();
    Graph::from_edge_list(n, &pairs).unwrap()
}

fn random_connected(rng: &mut ChaCha8Rng, n: usize) -> Graph {
    let mut pairs: Vec<(usize, usize)> = (1..n).map(|v| (rng.gen_range(0..v), v)).collect();
    let extra = rng.gen_range(0.0..0.5);
    for u in 0..n {
        for v in u + 1..n {
            if !pairs.contains(&(u, v)) && rng.gen_bool(extra) {
                pairs.push((u, v));
            }
        }
    }
    Graph::from_edge_list(n, &pairs).unwrap()
}

fn a1() -> Outcome {
    let patterns = [
        ("edge", family(FamilySpec::Clique(2))),
        ("path-2", family(FamilySpec::Path(2))),
        ("triangle", family(FamilySpec::Clique(3))),
        ("matching-2", family(FamilySpec::Matching(2))),
        ("star-3", family(FamilySpec::Star(3))),
    ];
    let mut cases = 0;
    for (name, g) in &patterns {
        for n in [6usize, 8] {
            let images = injective_images(g, n);
            for lambda_sq in [rat(1, 2), rat(1, 1), rat(3, 1)] {
                // Uniform copy = uniform injective map; the fixed copy is `g` itself.
                let base = BigRational::one() + &lambda_sq;
                let total: BigRational = images
                    .iter()
                    .map(|e| num_traits::pow(base.clone(), e.iter().filter(|&&(u, v)| g.has_edge(u, v)).count()))
                    .sum();
                let oracle = total / BigRational::from_integer(images.len().into());
                let mp = MomentParams::new(n, lambda_sq.clone(), g.clone()).unwrap();
                let sub = second_moment_exact(&mp).unwrap().exact().unwrap().clone();
                let ldp = ldp_norm_sq(&mp, &LdpConfig { degree: g.edge_count() }).unwrap();
                let ldp = ldp.exact().unwrap().clone();
                if sub != oracle || ldp != oracle {
                    return Err(format!("{name} n={n} lambda^2={lambda_sq}: {sub} / {ldp} vs {oracle}"));
                }
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} cases agree exactly"))
}

fn a2() -> Outcome {
    let (n, k, trials) = (8u64, 3u64, 100_000u64);
    let hist = intersection_distribution(&Graph::complete(3), 8, trials, &mut stream_rng(2, 0)).unwrap();
    let binom = |a: u64, b: u64| (0..b).fold(1u64, |acc, i| acc * (a - i) / (i + 1));
    let mut law = vec![0.0; 4];
    for h in 0..=k {
        let w = (binom(k, h) * binom(n - k, k - h)) as f64 / binom(n, k) as f64;
        law[(h * h.saturating_sub(1) / 2) as usize] += w;
    }
    let tv = 0.5 * hist.frequencies().iter().zip(&law).map(|(a, b)| (a - b).abs()).sum::<f64>();
    ensure(tv < 0.01, format!("tv={tv:.5}"))
}

fn risk_check(kind: DetectorKind, n: usize, p: f64, q: f64, pattern: Graph, trials: u64, bound: f64) -> Outcome {
    let params = ModelParams::new(n, p, q, pattern).unwrap();
    let detector = kind.build(&params, &DetectorConfig::default()).unwrap();
    let r = estimate_risk(detector.as_ref(), &params, trials, 7).unwrap();
    ensure(
        r.risk < bound,
        format!("risk={} (type1={} type2={} ci={:.4})", r.risk, r.type1, r.type2, r.ci_halfwidth),
    )
}

fn a3() -> Outcome {
    risk_check(DetectorKind::Count, 1000, 0.8, 0.2, Graph::complete(200), 200, 0.05)
}

fn a4() -> Outcome {
    risk_check(DetectorKind::Degree, 2000, 0.9, 0.2, family(FamilySpec::Star(300)), 200, 0.1)
}

fn a5() -> Outcome {
    risk_check(DetectorKind::Scan, 40, 1.0, 0.05, Graph::complete(5), 100, 0.05)
}

fn a6() -> Outcome {
    let (n, p, q) = (6usize, 0.9, 0.3);
    let triangle = Graph::complete(3);
    let params = ModelParams::new(n, p, q, triangle.clone()).unwrap();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let mut copies: Vec<u32> = injective_images(&triangle, n)
        .iter()
        .map(|e| e.iter().map(|pr| 1u32 << pairs.iter().position(|x| x == pr).unwrap()).sum())
        .collect();
    copies.sort_unstable();
    copies.dedup();

    let cfg = DetectorConfig::default();
    let scan = ScanTest::new(&params, &cfg).unwrap();
    let lrt = LikelihoodRatioTest::new(&params).unwrap();
    // Risks of count, degree, scan, LRT.
    let mut risk = [0.0f64; 4];
    let mut tv = 0.0;
    for bits in 0u32..1 << pairs.len() {
        let mut obs = Observation::empty(n);
        for (i, &(u, v)) in pairs.iter().enumerate() {
            if bits >> i & 1 == 1 {
                obs.insert(u, v);
            }
        }
        let prob = |r: f64, mask: u32| {
            (0..pairs.len())
                .map(|i| {
                    let r = if mask >> i & 1 == 1 { r } else { q };
                    if bits >> i & 1 == 1 { r } else { 1.0 - r }
                })
                .product::<f64>()
        };
        let p0 = prob(q, 0);
        let p1 = copies.iter().map(|&c| prob(p, c)).sum::<f64>() / copies.len() as f64;
        tv += 0.5 * (p0 - p1).abs();
        let decisions = [
            count_test(&obs, &params).decision,
            degree_test(&obs, &params).decision,
            scan.run(&obs).decision,
            lrt.run(&obs).decision,
        ];
        for (r, reject) in risk.iter_mut().zip(decisions) {
            *r += if reject { p0 } else { p1 };
        }
    }
    let lambda_sq = chi_square_bernoulli(p, q).unwrap();
    let mp = MomentParams::from_f64(n, lambda_sq, triangle.clone()).unwrap();
    let sm = second_moment_exact(&mp).unwrap().to_f64();
    let (sm_bound, tv_bound) = risk_lower_bounds(sm, p, q, triangle.edge_count()).unwrap();
    let detail = format!(
        "count={:.6} degree={:.6} scan={:.6} lrt={:.6} 1-tv={:.6} bounds=({sm_bound:.6}, {tv_bound:.6})",
        risk[0], risk[1], risk[2], risk[3], 1.0 - tv
    );
    let lrt_risk = risk[3];
    ensure(
        risk[..3].iter().all(|&r| lrt_risk <= r + 1e-12)
            && (lrt_risk - (1.0 - tv)).abs() < 1e-12
            && lrt_risk >= sm_bound
            && lrt_risk >= tv_bound,
        detail,
    )
}

fn decomposition_holds(g: &Graph, m: usize) -> Result<(), String> {
    let dec = vcd_decompose(g, m).map_err(|e| e.to_string())?;
    let mut edges: Vec<(usize, usize)> = dec.parts.iter().flat_map(|p| p.edges().to_vec()).collect();
    edges.sort_unstable();
    if edges != g.edges() {
        return Err(format!("M={m}: parts do not partition the edges"));
    }
    let rhs = 2.0 * g.edge_count() as f64 * (g.max_degree() as f64).powf(1.0 / m as f64);
    for (i, part) in dec.parts.iter().enumerate() {
        let lhs = (vertex_cover_number(part).unwrap() * part.max_degree()) as f64;
        if lhs > rhs * (1.0 + 1e-12) {
            return Err(format!("M={m} part {}: {lhs} > {rhs}", i + 1));
        }
    }
    Ok(())
}

fn a7() -> Outcome {
    let mut rng = stream_rng(7, 0);
    let mut graphs = vec![family(FamilySpec::UnbalancedStars(256))];
    while graphs.len() < 51 {
        let n = rng.gen_range(2..=30);
        let density = rng.gen_range(0.05..0.8);
        let g = random_graph(&mut rng, n, density);
        if g.edge_count() > 0 {
            graphs.push(g);
        }
    }
    for g in &graphs {
        for m in [2, 3, 4] {
            decomposition_holds(g, m)?;
        }
    }
    Ok(format!("{} graphs x 3 values of M", graphs.len()))
}

fn a8() -> Outcome {
    let mut rng = stream_rng(8, 0);
    let (mut spanning, mut connected, mut containment) = (0, 0, 0);
    for _ in 0..100 {
        let k = rng.gen_range(2..=9);
        let g = random_connected(&mut rng, k);

        let t = spanning_tree_count(&g).unwrap().to_f64().unwrap();
        let mu = max_subgraph_density(&g).unwrap();
        let mu = *mu.numer() as f64 / *mu.denom() as f64;
        let bound = std::f64::consts::E * (2.0 * mu).powi(k as i32 - 2);
        if t > bound * (1.0 + 1e-12) {
            return Err(format!("spanning trees {t} > {bound} on {:?}", g.edges()));
        }
        spanning += 1;

        let d = g.max_degree();
        if d >= 3 {
            for size in 1..=k {
                let anchor = rng.gen_range(0..k);
                let c = connected_sets_count(&g, size, anchor).unwrap() as f64;
                let bound = (std::f64::consts::E * (d - 1) as f64).powi(size as i32 - 1);
                if c > bound {
                    return Err(format!("connected sets {c} > {bound} on {:?}", g.edges()));
                }
                connected += 1;
            }
        }

        // A random nonempty edge subset H of Γ, placed in K_n with n = 2|v(Γ)|.
        let mut chosen: Vec<(usize, usize)> = g.edges().iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
        if chosen.is_empty() {
            chosen.push(g.edges()[0]);
        }
        let (h, _) = Graph::from_edges_compact(&chosen);
        let n = 2 * k;
        let prob = containment_probability(&h, &g, n).unwrap();
        let tau = BigInt::from(vertex_cover_number(&g).unwrap());
        let (l, m) = (h.vertex_count(), h.component_count());
        let bound = BigRational::new(
            num_traits::pow(BigInt::from(2) * tau, m) * num_traits::pow(BigInt::from(d), l - m),
            num_traits::pow(BigInt::from(n - k), l),
        );
        if prob > bound {
            return Err(format!("containment {prob} > {bound} on {:?}", g.edges()));
        }
        containment += 1;
    }
    Ok(format!("{spanning} spanning, {connected} connected-set, {containment} containment checks"))
}

fn a9() -> Outcome {
    let mut rng = stream_rng(9, 0);
    let mut checked = 0;
    while checked < 100 {
        let n = rng.gen_range(2..=12);
        let density = rng.gen_range(0.1..0.9);
        let g = random_graph(&mut rng, n, density);
        if g.edge_count() == 0 {
            continue;
        }
        let (mu, mu_brute) = (max_subgraph_density(&g).unwrap(), max_subgraph_density_exhaustive(&g).unwrap());
        let (tau, tau_brute) = (vertex_cover_number(&g).unwrap(), vertex_cover_brute_force(&g).unwrap());
        if mu != mu_brute || tau != tau_brute {
            return Err(format!("mu {mu}/{mu_brute} tau {tau}/{tau_brute} on {:?}", g.edges()));
        }
        checked += 1;
    }
    Ok(format!("{checked} graphs"))
}

fn a10() -> Outcome {
    let t = sparse_thresholds(&PolyFamilyExponents { alpha: 1.0, beta: 0.5, epsilon: 2.0, delta: 1.0, zeta: 1.0 });
    let close = |a: f64, b: f64| (a - b).abs() < 1e-12;
    if !(close(t.stat_lower, 2.0 / 3.0) && close(t.stat_upper, 0.75) && close(t.comp_lower, 0.75)) {
        return Err(format!("sparse thresholds {t:?}"));
    }
    let sd = superdense_threshold(1.0);
    if !close(sd, 0.75) {
        return Err(format!("superdense {sd}"));
    }
    // Ten μ values times ten offsets straddling α = 1.
    let mut worst = 0.0f64;
    for i in 0..10 {
        let mu = 0.05 + 0.09 * i as f64;
        for j in 0..10 {
            let h = 1e-15 * (1 << j) as f64;
            let left = g_mu(1.0 - h * 1e-3, mu).unwrap();
            let right = g_mu(1.0 + h * 1e-3, mu).unwrap();
            worst = worst.max((left - right).abs());
        }
    }
    if worst >= 1e-12 {
        return Err(format!("g_mu jump {worst:e}"));
    }
    let inv = unbalanced_stars_invariants(1_000_000);
    let ratio = balance_ratio_from(inv.vertex_cover, inv.max_degree, inv.edges);
    ensure(
        (ratio - 1.4).abs() < 0.02,
        format!("sparse={:?} superdense={sd} g_mu jump={worst:.1e} ratio(10^6)={ratio:.5}", (t.stat_lower, t.stat_upper, t.comp_lower)),
    )
}

fn main() {
    let checks: [Check; 10] = [
        ("A1", a1, 60),
        ("A2", a2, 10),
        ("A3", a3, 120),
        ("A4", a4, 120),
        ("A5", a5, 180),
        ("A6", a6, 60),
        ("A7", a7, 30),
        ("A8", a8, 60),
        ("A9", a9, 60),
        ("A10", a10, 5),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut unexpected = 0;
    for (name, check, limit) in checks {
        if !filter.is_empty() && !filter.iter().any(|f| f == name) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(d) if elapsed > Duration::from_secs(limit) => Err(format!("{d}; over the {limit} s budget")),
            other => other,
        };
        let (status, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) if KNOWN_FAILURES.contains(&name) => ("FAIL", format!("{d} (known failure)")),
            Err(d) => {
                unexpected += 1;
                ("FAIL", d)
            }
        };
        println!("{name} {status} [{:.2} s] {detail}", elapsed.as_secs_f64());
    }
    if unexpected > 0 {
        std::process::exit(1);
    }
}

