//! Parameter grids and their CSV rows.

use std::io::Write;
use std::time::Instant;

use plantlab_core::detectors::DetectorConfig;
use plantlab_core::graph::{make_family, FamilySpec};
use plantlab_core::sampler::ModelParams;
use plantlab_core::Result;

use crate::harness::{estimate_risk, DetectorKind, RiskEstimate};

pub const CSV_HEADER: [&str; 13] = [
    "detector", "family", "n", "p", "q", "trials", "seed", "type1", "type2", "risk", "ci",
    "elapsed_ms", "error",
];

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub detector: DetectorKind,
    /// Template family; every entry of `sizes` replaces its size parameter.
    pub family: FamilySpec,
    /// Swept family sizes; empty keeps the template as is.
    pub sizes: Vec<usize>,
    /// `(n, p, q)` points.
    pub grid: Vec<(usize, f64, f64)>,
    pub trials: u64,
    pub seed: u64,
    pub config: DetectorConfig,
    /// Record wall time; off by default so identical runs give identical
    /// bytes.
    pub timing: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub detector: DetectorKind,
    pub family: FamilySpec,
    pub n: usize,
    pub p: f64,
    pub q: f64,
    pub trials: u64,
    pub seed: u64,
    pub estimate: Option<RiskEstimate>,
    pub elapsed_ms: u128,
    pub error: Option<String>,
}

impl SweepRow {
    pub fn record(&self) -> Vec<String> {
        let num = |f: fn(&RiskEstimate) -> f64| {
            self.estimate.as_ref().map(|e| sig6(f(e))).unwrap_or_default()
        };
        vec![
            self.detector.to_string(),
            self.family.to_string(),
            self.n.to_string(),
            sig6(self.p),
            sig6(self.q),
            self.trials.to_string(),
            self.seed.to_string(),
            num(|e| e.type1),
            num(|e| e.type2),
            num(|e| e.risk),
            num(|e| e.ci_halfwidth),
            self.elapsed_ms.to_string(),
            self.error.clone().unwrap_or_default(),
        ]
    }
}

/// `x` rounded to 6 significant digits, in shortest decimal form.
pub fn sig6(x: f64) -> String {
    let rounded: f64 = format!("{x:.5e}").parse().unwrap_or(x);
    format!("{rounded}")
}

/// One row per grid point, sizes outermost, in the given order. Errors of
/// a single point are recorded in its row and the sweep continues.
pub fn sweep_grid(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    if spec.grid.is_empty() {
        return Err(plantlab_core::Error::InvalidParams("empty sweep grid".into()));
    }
    if spec.trials == 0 {
        return Err(plantlab_core::Error::InvalidParams("trials must be at least 1".into()));
    }
    let families: Vec<FamilySpec> = if spec.sizes.is_empty() {
        vec![spec.family]
    } else {
        spec.sizes.iter().map(|&s| spec.family.with_size(s)).collect()
    };
    let mut rows = Vec::new();
    for family in families {
        for &(n, p, q) in &spec.grid {
            let start = Instant::now();
            let outcome = run_point(spec, &family, n, p, q);
            let elapsed_ms = if spec.timing {
                start.elapsed().as_millis()
            } else {
                0
            };
            let (estimate, error) = match outcome {
                Ok(e) => (Some(e), None),
                Err(e) => (None, Some(e.to_string())),
            };
            rows.push(SweepRow {
                detector: spec.detector,
                family,
                n,
                p,
                q,
                trials: spec.trials,
                seed: spec.seed,
                estimate,
                elapsed_ms,
                error,
            });
        }
    }
    Ok(rows)
}

fn run_point(spec: &SweepSpec, family: &FamilySpec, n: usize, p: f64, q: f64) -> Result<RiskEstimate> {
    let pattern = make_family(family)?;
    let params = ModelParams::new(n, p, q, pattern)?;
    let detector = spec.detector.build(&params, &spec.config)?;
    estimate_risk(detector.as_ref(), &params, spec.trials, spec.seed)
}

pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for row in rows {
        w.write_record(row.record())?;
    }
    w.flush()
}
