//! Command-line interface. [`run_command`] does all the work and returns the
//! exit code with the text meant for stdout; `main` only prints it.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use plantlab_core::analysis::{
    classify_dense, classify_sparse, critical_classify, sparse_thresholds, superdense_threshold,
    vcd_balance_ratio, vcd_decompose, CriticalInputs, DenseConstants, PolyFamilyExponents,
    RegimeVerdict,
};
use plantlab_core::detectors::{
    count_test, degree_test_with, likelihood_ratio_test, scan_test, DegreeThreshold,
    DetectorConfig,
};
use plantlab_core::graph::{graph_stats, make_family, FamilySpec, Graph};
use plantlab_core::moments::{
    ldp_norm_sq, second_moment_exact, second_moment_intersection_exact, second_moment_mc,
    LdpConfig, MomentParams, MomentResult, MomentValue,
};
use plantlab_core::sampler::{
    sample_null, sample_planted, stream_rng, ModelParams, Observation,
};
use plantlab_core::Error;

use crate::harness::{estimate_risk, DetectorKind};
use crate::sweep::{sig6, sweep_grid, write_csv, SweepRow, SweepSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "plantlab", version, about = "Planted subgraph detection laboratory")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    /// Seed for every random stream.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Pattern graph in edge-list format.
    #[arg(long, global = true, conflicts_with = "family")]
    graph: Option<PathBuf>,
    /// Built-in pattern family, e.g. `clique:4` or `unbalanced_stars:16`.
    #[arg(long, global = true)]
    family: Option<String>,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Monte-Carlo trials (per hypothesis for risk estimates).
    #[arg(long, global = true, default_value_t = 100)]
    trials: u64,
    /// Worker threads; defaults to all cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Debug, Args)]
struct Model {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    p: f64,
    #[arg(long)]
    q: f64,
}

#[derive(Debug, Args)]
struct DetectorOpts {
    #[arg(long, value_enum)]
    detector: DetectorArg,
    /// `ε` in the scan threshold `κ = ε q + (1 - ε) p`.
    #[arg(long, default_value_t = 0.5)]
    kappa_weight: f64,
    #[arg(long, default_value_t = 50_000_000)]
    scan_budget: u128,
    /// Use the Bernstein-calibrated degree threshold.
    #[arg(long)]
    optimized_degree: bool,
}

impl DetectorOpts {
    fn config(&self) -> DetectorConfig {
        DetectorConfig {
            scan_kappa_weight: self.kappa_weight,
            scan_copy_budget: self.scan_budget,
            degree_threshold: if self.optimized_degree {
                DegreeThreshold::Optimized
            } else {
                DegreeThreshold::Standard
            },
            ..DetectorConfig::default()
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DetectorArg {
    Count,
    Degree,
    Scan,
    Lrt,
}

impl From<DetectorArg> for DetectorKind {
    fn from(d: DetectorArg) -> Self {
        match d {
            DetectorArg::Count => DetectorKind::Count,
            DetectorArg::Degree => DetectorKind::Degree,
            DetectorArg::Scan => DetectorKind::Scan,
            DetectorArg::Lrt => DetectorKind::Lrt,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Hypothesis {
    Null,
    Planted,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MomentMethodArg {
    Exact,
    Intersection,
    Mc,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Regime {
    Dense,
    Sparse,
    Superdense,
    Critical,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Graph invariants of the pattern.
    Stats,
    /// Print the pattern as an edge list.
    Gen,
    /// Draw one observation.
    Sample {
        #[command(flatten)]
        model: Model,
        #[arg(long, value_enum, default_value = "planted")]
        hypothesis: Hypothesis,
        /// Trial index (selects the random stream).
        #[arg(long, default_value_t = 0)]
        index: u64,
    },
    /// Run one test on an observation file.
    Detect {
        #[command(flatten)]
        model: Model,
        #[command(flatten)]
        opts: DetectorOpts,
        /// Observation in edge-list format.
        #[arg(long)]
        obs: PathBuf,
    },
    /// Monte-Carlo risk of one test.
    Risk {
        #[command(flatten)]
        model: Model,
        #[command(flatten)]
        opts: DetectorOpts,
    },
    /// Risk over a grid; CSV output.
    Sweep {
        #[command(flatten)]
        opts: DetectorOpts,
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<f64>,
        #[arg(long, value_delimiter = ',', required = true)]
        q: Vec<f64>,
        /// Family sizes to sweep (replaces the size of `--family`).
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<usize>,
        /// Record wall time in `elapsed_ms`.
        #[arg(long)]
        timing: bool,
    },
    /// Second moment of the likelihood ratio.
    Moment {
        #[arg(long)]
        n: usize,
        /// `λ²` as a fraction (`1/2`) or decimal.
        #[arg(long)]
        lambda_sq: String,
        #[arg(long, value_enum, default_value = "exact")]
        method: MomentMethodArg,
    },
    /// Low-degree norm `‖L_{≤D}‖²`.
    Ldp {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        lambda_sq: String,
        #[arg(long)]
        degree: usize,
    },
    /// Balanced edge decomposition into `M` parts.
    Decompose {
        #[arg(long)]
        m: usize,
    },
    /// Regime classification.
    Classify {
        #[arg(long, value_enum)]
        regime: Regime,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        q: Option<f64>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        beta: Option<f64>,
        /// Exponents `ε δ ζ` of a polynomial family.
        #[arg(long, num_args = 3, value_names = ["EPS", "DELTA", "ZETA"])]
        exponents: Vec<f64>,
        #[arg(long)]
        sigma: Option<f64>,
        #[arg(long)]
        beta_degree: Option<f64>,
        #[arg(long, default_value_t = 0.05)]
        epsilon: f64,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Core(Error),
    Io(std::io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses and runs one invocation (`argv[0]` is the program name).
pub fn run_command<I, T>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            return (code, e.render().to_string());
        }
    };
    let result = match cli.global.threads {
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(|| dispatch(&cli)),
            Err(e) => Err(CliError::Usage(e.to_string())),
        },
        None => dispatch(&cli),
    };
    match result {
        Ok(text) => (EXIT_OK, text),
        Err(CliError::Usage(msg)) => (EXIT_USAGE, format!("error: {msg}\n")),
        Err(CliError::Core(e)) if e.is_budget() => (EXIT_BUDGET, format!("error: {e}\n")),
        Err(CliError::Core(e @ (Error::InvalidSpec(_) | Error::MissingSigma))) => {
            (EXIT_USAGE, format!("error: {e}\n"))
        }
        Err(CliError::Core(e)) => (EXIT_FAILURE, format!("error: {e}\n")),
        Err(CliError::Io(e)) => (EXIT_FAILURE, format!("error: {e}\n")),
    }
}

fn dispatch(cli: &Cli) -> CliResult<String> {
    let g = &cli.global;
    let text = match &cli.command {
        Command::Stats => stats(&pattern(g)?)?,
        Command::Gen => pattern(g)?.to_edge_list(),
        Command::Sample {
            model,
            hypothesis,
            index,
        } => {
            let params = model_params(g, model)?;
            let mut rng = stream_rng(g.seed, 2 * index + matches!(hypothesis, Hypothesis::Planted) as u64);
            let obs = match hypothesis {
                Hypothesis::Null => sample_null(params.n, params.q, &mut rng),
                Hypothesis::Planted => sample_planted(&params, &mut rng).0,
            };
            obs.to_edge_list()
        }
        Command::Detect { model, opts, obs } => {
            let params = model_params(g, model)?;
            let obs = Observation::parse_edge_list(&std::fs::read_to_string(obs)?)?;
            if obs.n() != params.n {
                return Err(CliError::Usage(format!(
                    "observation has {} vertices, --n is {}",
                    obs.n(),
                    params.n
                )));
            }
            let cfg = opts.config();
            let v = match opts.detector {
                DetectorArg::Count => count_test(&obs, &params),
                DetectorArg::Degree => degree_test_with(&obs, &params, &cfg),
                DetectorArg::Scan => scan_test(&obs, &params, &cfg)?,
                DetectorArg::Lrt => likelihood_ratio_test(&obs, &params)?,
            };
            format!(
                "decision={} statistic={} threshold={}\n",
                v.decision as u8,
                sig6(v.statistic),
                sig6(v.threshold)
            )
        }
        Command::Risk { model, opts } => {
            let params = model_params(g, model)?;
            let kind = DetectorKind::from(opts.detector);
            let detector = kind.build(&params, &opts.config())?;
            let est = estimate_risk(detector.as_ref(), &params, g.trials, g.seed)?;
            format!(
                "type1={} type2={} risk={} ci={} trials={}\n",
                sig6(est.type1),
                sig6(est.type2),
                sig6(est.risk),
                sig6(est.ci_halfwidth),
                est.trials_per_hypothesis
            )
        }
        Command::Sweep {
            opts,
            n,
            p,
            q,
            sizes,
            timing,
        } => {
            let family = family_spec(g)?;
            let grid = n
                .iter()
                .flat_map(|&n| p.iter().flat_map(move |&p| q.iter().map(move |&q| (n, p, q))))
                .collect();
            let spec = SweepSpec {
                detector: opts.detector.into(),
                family,
                sizes: sizes.clone(),
                grid,
                trials: g.trials,
                seed: g.seed,
                config: opts.config(),
                timing: *timing,
            };
            let rows = sweep_grid(&spec)?;
            csv_text(&rows)?
        }
        Command::Moment {
            n,
            lambda_sq,
            method,
        } => {
            let mp = MomentParams::new(*n, parse_rational(lambda_sq)?, pattern(g)?)?;
            let result = match method {
                MomentMethodArg::Exact => second_moment_exact(&mp)?,
                MomentMethodArg::Intersection => second_moment_intersection_exact(&mp)?,
                MomentMethodArg::Mc => second_moment_mc(&mp, g.trials, g.seed)?,
            };
            moment_line(&result)
        }
        Command::Ldp {
            n,
            lambda_sq,
            degree,
        } => {
            let mp = MomentParams::new(*n, parse_rational(lambda_sq)?, pattern(g)?)?;
            moment_line(&ldp_norm_sq(&mp, &LdpConfig { degree: *degree })?)
        }
        Command::Decompose { m } => {
            let graph = pattern(g)?;
            let dec = vcd_decompose(&graph, *m)?;
            let mut out = String::new();
            for (i, (part, cover)) in dec.parts.iter().zip(&dec.cover_sets).enumerate() {
                let edges: Vec<String> =
                    part.edges().iter().map(|(u, v)| format!("{u}-{v}")).collect();
                let _ = writeln!(
                    out,
                    "part {}: edges={} d_max={} cover={:?} [{}]",
                    i + 1,
                    part.edge_count(),
                    part.max_degree(),
                    cover,
                    edges.join(" ")
                );
            }
            if graph.edge_count() >= 2 {
                let _ = writeln!(out, "balance_ratio={}", sig6(vcd_balance_ratio(&graph)?));
            }
            out
        }
        Command::Classify {
            regime,
            n,
            p,
            q,
            alpha,
            beta,
            exponents,
            sigma,
            beta_degree,
            epsilon,
        } => {
            let need = |name: &str| CliError::Usage(format!("--{name} is required for this regime"));
            match regime {
                Regime::Dense => {
                    let stats = graph_stats(&pattern(g)?)?;
                    let n = n.ok_or_else(|| need("n"))?;
                    let (p, q) = (p.ok_or_else(|| need("p"))?, q.ok_or_else(|| need("q"))?);
                    let c = DenseConstants::from_model(&stats, p, q, *epsilon)?;
                    verdict_line(&classify_dense(&stats, n, &c))
                }
                Regime::Sparse => {
                    let alpha = alpha.ok_or_else(|| need("alpha"))?;
                    let beta = beta.ok_or_else(|| need("beta"))?;
                    if exponents.len() != 3 {
                        return Err(need("exponents"));
                    }
                    let exp = PolyFamilyExponents {
                        alpha,
                        beta,
                        epsilon: exponents[0],
                        delta: exponents[1],
                        zeta: exponents[2],
                    };
                    let t = sparse_thresholds(&exp);
                    let mut out = format!(
                        "stat_lower={} stat_upper={} comp_lower={}\n",
                        sig6(t.stat_lower),
                        sig6(t.stat_upper),
                        sig6(t.comp_lower)
                    );
                    for w in exp.warnings() {
                        let _ = writeln!(out, "warning: {w}");
                    }
                    out + &verdict_line(&classify_sparse(&exp))
                }
                Regime::Superdense => {
                    let alpha = alpha.ok_or_else(|| need("alpha"))?;
                    format!("threshold={}\n", sig6(superdense_threshold(alpha)))
                }
                Regime::Critical => {
                    let stats = graph_stats(&pattern(g)?)?;
                    let n = n.ok_or_else(|| need("n"))?;
                    let input = CriticalInputs {
                        alpha: alpha.ok_or_else(|| need("alpha"))?,
                        sigma: *sigma,
                        beta_degree: *beta_degree,
                        epsilon: *epsilon,
                    };
                    verdict_line(&critical_classify(&stats, n, &input)?)
                }
            }
        }
    };
    match &g.out {
        Some(path) => {
            std::fs::write(path, &text)?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn family_spec(g: &Global) -> CliResult<FamilySpec> {
    match &g.family {
        Some(s) => Ok(s.parse()?),
        None => Err(CliError::Usage("--family is required".into())),
    }
}

fn pattern(g: &Global) -> CliResult<Graph> {
    match (&g.graph, &g.family) {
        (Some(path), _) => Ok(Graph::parse_edge_list(&std::fs::read_to_string(path)?)?),
        (None, Some(_)) => Ok(make_family(&family_spec(g)?)?),
        (None, None) => Err(CliError::Usage("one of --graph or --family is required".into())),
    }
}

fn model_params(g: &Global, m: &Model) -> CliResult<ModelParams> {
    Ok(ModelParams::new(m.n, m.p, m.q, pattern(g)?)?)
}

fn stats(graph: &Graph) -> CliResult<String> {
    let s = graph_stats(graph)?;
    Ok(format!(
        "|v|={} |e|={} d_max={} mu={} tau={} aut={} components={} density={}\n",
        s.num_vertices,
        s.num_edges,
        s.max_degree,
        s.max_subgraph_density,
        s.vertex_cover_number,
        s.automorphism_count,
        s.num_components,
        s.density
    ))
}

fn csv_text(rows: &[SweepRow]) -> CliResult<String> {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is UTF-8"))
}

fn moment_line(r: &MomentResult) -> String {
    match &r.value {
        MomentValue::Exact(v) => format!("value={v} ({})\n", sig6(r.to_f64())),
        MomentValue::Approx(v) => format!(
            "value={} std_error={}\n",
            sig6(*v),
            sig6(r.std_error.unwrap_or(0.0))
        ),
    }
}

fn verdict_line(v: &RegimeVerdict) -> String {
    format!(
        "verdict={} boundary={} margin={}\n",
        v.verdict,
        v.binding_boundary,
        sig6(v.margin)
    )
}

/// Parses `a/b`, an integer or a plain decimal into an exact rational.
fn parse_rational(s: &str) -> CliResult<BigRational> {
    let bad = || CliError::Usage(format!("cannot parse `{s}` as a rational"));
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let a: BigInt = a.trim().parse().map_err(|_| bad())?;
        let b: BigInt = b.trim().parse().map_err(|_| bad())?;
        if b == BigInt::from(0) {
            return Err(bad());
        }
        return Ok(BigRational::new(a, b));
    }
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if frac.chars().any(|c| !c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
    let scale = num_traits::pow(BigInt::from(10), frac.len());
    let r = BigRational::new(digits, scale);
    if r.to_f64().is_none() {
        return Err(bad());
    }
    Ok(r)
}
