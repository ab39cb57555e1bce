//! Monte Carlo generation of censored S-N datasets under known truth and
//! coverage comparison of LR versus Wald intervals.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{SNDataset, SNObservation};
use crate::dist::std_quantile_raw;
use crate::error::{Error, Result};
use crate::interval::{lr_interval, wald_interval};
use crate::likelihood::{fit_ml, FitOptions};
use crate::model::{ModelSpec, Orientation, ParamVector};
use crate::target::ScalarTarget;

/// Units allocated to one stress level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StressAllocation {
    pub stress: f64,
    pub count: usize,
}

/// Design of a simulation study: true parameters, test layout, censoring
/// time, replicate count, and seed.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimDesign {
    pub theta_true: ParamVector,
    pub spec: ModelSpec,
    pub stress_levels: Vec<StressAllocation>,
    pub censor_time: f64,
    pub n_replicates: usize,
    pub seed: u64,
}

impl SimDesign {
    pub fn validate(&self) -> Result<()> {
        self.spec.validate_theta(&self.theta_true)?;
        if self.stress_levels.is_empty() {
            return Err(Error::InvalidDesign("no stress levels".into()));
        }
        for a in &self.stress_levels {
            if a.count == 0 {
                return Err(Error::InvalidDesign(format!(
                    "stress level {} has zero allocation",
                    a.stress
                )));
            }
            if !self.spec.domain.stress.contains(a.stress) {
                return Err(Error::InvalidDesign(format!(
                    "stress level {} outside the working domain",
                    a.stress
                )));
            }
        }
        if !(self.censor_time.is_finite() && self.censor_time > 0.0) {
            return Err(Error::InvalidDesign(format!(
                "censor time must be positive, got {}",
                self.censor_time
            )));
        }
        if self.n_replicates == 0 {
            return Err(Error::InvalidDesign("n_replicates must be >= 1".into()));
        }
        Ok(())
    }

    pub fn n_per_replicate(&self) -> usize {
        self.stress_levels.iter().map(|a| a.count).sum()
    }
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Counter-based per-replicate stream: the key is expanded from
/// (seed, replicate) so parallel execution reproduces exactly.
fn replicate_rng(seed: u64, replicate: u64) -> ChaCha8Rng {
    let mut state = seed ^ replicate.wrapping_mul(0xA076_1D64_78BD_642F);
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}

/// Draw one censored dataset from the design's true model. Deterministic in
/// (seed, replicate_index).
pub fn simulate_dataset(design: &SimDesign, replicate_index: usize) -> Result<SNDataset> {
    design.validate()?;
    let mut rng = replicate_rng(design.seed, replicate_index as u64);
    let spec = &design.spec;
    let theta = &design.theta_true;
    let mut observations = Vec::with_capacity(design.n_per_replicate());
    for level in &design.stress_levels {
        for _ in 0..level.count {
            let u = loop {
                let u: f64 = rng.gen();
                if u > 0.0 && u < 1.0 {
                    break u;
                }
            };
            let eps = std_quantile_raw(spec.error_family, u);
            let life = match spec.orientation {
                Orientation::LifeSpecified => {
                    (spec.curve.eval_log(&theta.beta, level.stress.ln()) + theta.sigma * eps).exp()
                }
                Orientation::StrengthSpecified => crate::curve::invert_curve(
                    spec.curve,
                    &theta.beta,
                    level.stress.ln() - theta.sigma * eps,
                    spec.domain.cycles,
                )
                .map_err(|e| {
                    Error::InvalidDesign(format!(
                        "simulated life escapes the cycles domain at stress {}: {e}",
                        level.stress
                    ))
                })?,
            };
            observations.push(if life > design.censor_time {
                SNObservation::runout(level.stress, design.censor_time)
            } else {
                SNObservation::failure(level.stress, life)
            });
        }
    }
    SNDataset::new(observations, format!("sim-rep{replicate_index}"))
}

/// One replicate's outcome in a coverage study.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReplicateRecord {
    pub replicate: usize,
    pub fit_ok: bool,
    pub lr_covered: Option<bool>,
    pub wald_covered: Option<bool>,
    pub lr_lower: Option<f64>,
    pub lr_upper: Option<f64>,
}

/// Aggregate coverage of LR and Wald intervals against the design truth.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoverageReport {
    pub target: ScalarTarget,
    pub xi_true: f64,
    /// Nominal confidence level 1 - alpha.
    pub nominal: f64,
    pub lr_coverage: f64,
    pub wald_coverage: f64,
    pub replicate_failures: usize,
    pub n_effective: usize,
    /// sqrt(c (1-c) / n_effective) at the LR coverage estimate.
    pub mc_stderr: f64,
    #[serde(skip)]
    pub records: Vec<ReplicateRecord>,
}

/// Run the coverage study: per replicate simulate, fit, and record whether
/// each interval covers the true target value. Replicates whose fit fails are
/// excluded and counted; more than 10% failures aborts the study.
pub fn coverage_study(
    design: &SimDesign,
    target: &ScalarTarget,
    alpha: f64,
) -> Result<CoverageReport> {
    coverage_study_with_progress(design, target, alpha, None)
}

/// [`coverage_study`] with an optional completion callback, invoked with the
/// number of finished replicates as they complete.
pub fn coverage_study_with_progress(
    design: &SimDesign,
    target: &ScalarTarget,
    alpha: f64,
    progress: Option<&(dyn Fn(usize) + Sync)>,
) -> Result<CoverageReport> {
    design.validate()?;
    target.validate(&design.spec)?;
    let xi_true = target.evaluate(&design.spec, &design.theta_true)?;
    let fit_options = FitOptions::default();
    let completed = std::sync::atomic::AtomicUsize::new(0);

    let records: Vec<ReplicateRecord> = (0..design.n_replicates)
        .into_par_iter()
        .map(|rep| {
            let run = || -> Option<ReplicateRecord> {
                let data = simulate_dataset(design, rep).ok()?;
                let fitted = fit_ml(&design.spec, &data, &fit_options)
                    .ok()
                    .filter(|f| f.converged)?;
                let lr = lr_interval(&fitted, &data, target, alpha).ok()?;
                let wald = wald_interval(&fitted, target, alpha).ok()?;
                Some(ReplicateRecord {
                    replicate: rep,
                    fit_ok: true,
                    lr_covered: Some(lr.contains(xi_true)),
                    wald_covered: Some(wald.contains(xi_true)),
                    lr_lower: Some(lr.lower.value()),
                    lr_upper: Some(lr.upper.value()),
                })
            };
            let record = run().unwrap_or(ReplicateRecord {
                replicate: rep,
                fit_ok: false,
                lr_covered: None,
                wald_covered: None,
                lr_lower: None,
                lr_upper: None,
            });
            if let Some(cb) = progress {
                cb(completed.fetch_add(1, std::sync::atomic::Ordering::Relaxed) + 1);
            }
            record
        })
        .collect();

    let failures = records.iter().filter(|r| !r.fit_ok).count();
    if 10 * failures > design.n_replicates {
        return Err(Error::TooManyFitFailures {
            failures,
            total: design.n_replicates,
        });
    }
    let n_effective = design.n_replicates - failures;
    let mean = |pick: fn(&ReplicateRecord) -> Option<bool>| {
        let covered = records.iter().filter(|r| pick(r) == Some(true)).count();
        covered as f64 / n_effective as f64
    };
    let lr_coverage = mean(|r| r.lr_covered);
    let wald_coverage = mean(|r| r.wald_covered);
    Ok(CoverageReport {
        target: *target,
        xi_true,
        nominal: 1.0 - alpha,
        lr_coverage,
        wald_coverage,
        replicate_failures: failures,
        n_effective,
        mc_stderr: (lr_coverage * (1.0 - lr_coverage) / n_effective as f64).sqrt(),
        records,
    })
}

/// Per-replicate indicator CSV: `replicate,fit_ok,lr_covered,wald_covered`.
pub fn records_to_csv(records: &[ReplicateRecord]) -> String {
    let mut out = String::from("replicate,fit_ok,lr_covered,wald_covered\n");
    for r in records {
        let flag = |o: Option<bool>| match o {
            Some(true) => "1",
            Some(false) => "0",
            None => "",
        };
        out.push_str(&format!(
            "{},{},{},{}\n",
            r.replicate,
            if r.fit_ok { 1 } else { 0 },
            flag(r.lr_covered),
            flag(r.wald_covered),
        ));
    }
    out
}
