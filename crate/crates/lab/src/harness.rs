//! Monte-Carlo estimation of the Type I + Type II risk of a test.

use std::fmt;
use std::str::FromStr;

use plantlab_core::detectors::{
    count_test, degree_test_with, DetectorConfig, LikelihoodRatioTest, ScanTest,
};
use plantlab_core::sampler::{sample_null, sample_planted, trial_rng, ModelParams, Observation};
use plantlab_core::{Error, Result};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Two-sided normal quantile for a 0.99 Wilson interval.
pub const Z_99: f64 = 2.575_829_303_549;

/// A test `φ(G) ∈ {0, 1}`; `true` rejects the null. The generator is the
/// trial's own stream, positioned after the observation was drawn, for
/// randomised tests.
pub trait Detector: Sync {
    fn decide(&self, obs: &Observation, rng: &mut ChaCha8Rng) -> Result<bool>;
}

impl<F> Detector for F
where
    F: Fn(&Observation, &mut ChaCha8Rng) -> Result<bool> + Sync,
{
    fn decide(&self, obs: &Observation, rng: &mut ChaCha8Rng) -> Result<bool> {
        self(obs, rng)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DetectorKind {
    Count,
    Degree,
    Scan,
    Lrt,
}

impl DetectorKind {
    pub const ALL: [DetectorKind; 4] = [
        DetectorKind::Count,
        DetectorKind::Degree,
        DetectorKind::Scan,
        DetectorKind::Lrt,
    ];

    /// Prepares the test for repeated use on one model.
    pub fn build(self, params: &ModelParams, cfg: &DetectorConfig) -> Result<Box<dyn Detector>> {
        cfg.validate()?;
        Ok(match self {
            DetectorKind::Count => {
                let params = params.clone();
                Box::new(move |obs: &Observation, _: &mut ChaCha8Rng| {
                    Ok(count_test(obs, &params).decision)
                })
            }
            DetectorKind::Degree => {
                let params = params.clone();
                let cfg = cfg.clone();
                Box::new(move |obs: &Observation, _: &mut ChaCha8Rng| {
                    Ok(degree_test_with(obs, &params, &cfg).decision)
                })
            }
            DetectorKind::Scan => {
                let scan = ScanTest::new(params, cfg)?;
                Box::new(move |obs: &Observation, _: &mut ChaCha8Rng| Ok(scan.run(obs).decision))
            }
            DetectorKind::Lrt => {
                let lrt = LikelihoodRatioTest::new(params)?;
                Box::new(move |obs: &Observation, _: &mut ChaCha8Rng| Ok(lrt.run(obs).decision))
            }
        })
    }
}

impl fmt::Display for DetectorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DetectorKind::Count => "count",
            DetectorKind::Degree => "degree",
            DetectorKind::Scan => "scan",
            DetectorKind::Lrt => "lrt",
        })
    }
}

impl FromStr for DetectorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "count" => Ok(DetectorKind::Count),
            "degree" => Ok(DetectorKind::Degree),
            "scan" => Ok(DetectorKind::Scan),
            "lrt" => Ok(DetectorKind::Lrt),
            other => Err(Error::InvalidParams(format!("unknown detector `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiskEstimate {
    pub type1: f64,
    pub type2: f64,
    pub risk: f64,
    pub trials_per_hypothesis: u64,
    /// Sum of the 0.99 Wilson half-widths of the two error rates.
    pub ci_halfwidth: f64,
}

impl RiskEstimate {
    pub fn from_counts(false_alarms: u64, misses: u64, trials: u64) -> Self {
        let t = trials as f64;
        let type1 = false_alarms as f64 / t;
        let type2 = misses as f64 / t;
        Self {
            type1,
            type2,
            risk: type1 + type2,
            trials_per_hypothesis: trials,
            ci_halfwidth: wilson_halfwidth(false_alarms, trials, Z_99)
                + wilson_halfwidth(misses, trials, Z_99),
        }
    }
}

/// Half-width of the Wilson score interval for `k` successes in `t` trials.
pub fn wilson_halfwidth(k: u64, t: u64, z: f64) -> f64 {
    let t = t as f64;
    let p = k as f64 / t;
    let z2 = z * z;
    z / (1.0 + z2 / t) * (p * (1.0 - p) / t + z2 / (4.0 * t * t)).sqrt()
}

/// Runs `trials` null and `trials` planted samples. Trial `i` under
/// hypothesis `h` uses [`trial_rng`]`(seed, h, i)`, so the estimate does not
/// depend on scheduling.
pub fn estimate_risk<D: Detector + ?Sized>(
    detector: &D,
    params: &ModelParams,
    trials: u64,
    seed: u64,
) -> Result<RiskEstimate> {
    if trials == 0 {
        return Err(Error::InvalidParams("trials must be at least 1".into()));
    }
    let outcomes: Vec<(bool, bool)> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, 0, i);
            let obs = sample_null(params.n, params.q, &mut rng);
            let alarm = detector.decide(&obs, &mut rng)?;
            let mut rng = trial_rng(seed, 1, i);
            let (obs, _) = sample_planted(params, &mut rng);
            let miss = !detector.decide(&obs, &mut rng)?;
            Ok((alarm, miss))
        })
        .collect::<Result<_>>()?;
    let alarms = outcomes.iter().filter(|o| o.0).count() as u64;
    let misses = outcomes.iter().filter(|o| o.1).count() as u64;
    Ok(RiskEstimate::from_counts(alarms, misses, trials))
}
