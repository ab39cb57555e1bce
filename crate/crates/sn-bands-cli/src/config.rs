//! Analysis configuration: the JSON document driving every subcommand, plus
//! command-line overrides.

use std::path::PathBuf;

use serde::Deserialize;
use sn_bands::{
    BandFamily, Method, ModelSpec, ParamVector, ScalarTarget, SimDesign, StressAllocation,
};

/// Which interval method(s) a run produces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum MethodChoice {
    Lr,
    Wald,
    Both,
}

impl MethodChoice {
    pub fn methods(self) -> Vec<Method> {
        match self {
            MethodChoice::Lr => vec![Method::Lr],
            MethodChoice::Wald => vec![Method::Wald],
            MethodChoice::Both => vec![Method::Lr, Method::Wald],
        }
    }
}

fn default_alpha() -> f64 {
    0.10
}

fn default_method() -> MethodChoice {
    MethodChoice::Lr
}

/// Explicit grid override for one band request.
#[derive(Debug, Clone, Deserialize)]
pub struct GridSpec {
    pub lo: Option<f64>,
    pub hi: Option<f64>,
    pub n: Option<usize>,
}

/// One requested band: the family plus an optional grid override.
#[derive(Debug, Clone, Deserialize)]
pub struct BandRequest {
    #[serde(flatten)]
    pub family: BandFamily,
    #[serde(default)]
    pub grid: Option<GridSpec>,
}

/// Safe-stress query: stress whose upper cdf bound at `n_e` cycles equals `p`.
#[derive(Debug, Clone, Copy, Deserialize)]
pub struct SafeStressQuery {
    pub p: f64,
    pub n_e: f64,
}

/// Settings for the `equiv` command; every field has a sensible default.
#[derive(Debug, Clone, Deserialize, Default)]
pub struct EquivConfig {
    pub s_e: Option<f64>,
    pub n_e: Option<f64>,
    pub p: Option<f64>,
    pub tol: Option<f64>,
    /// Grid size for the R1 band transposition check.
    pub r1_points: Option<usize>,
    pub grid_p: Option<Vec<f64>>,
    pub grid_s: Option<Vec<f64>>,
}

/// Simulation section for the `simulate` command.
#[derive(Debug, Clone, Deserialize)]
pub struct SimConfig {
    pub theta_true: ParamVector,
    pub stress_levels: Vec<StressAllocation>,
    pub censor_time: f64,
    pub n_replicates: usize,
    pub seed: u64,
    pub target: ScalarTarget,
}

impl SimConfig {
    pub fn design(&self, spec: &ModelSpec, seed_override: Option<u64>) -> SimDesign {
        SimDesign {
            theta_true: self.theta_true.clone(),
            spec: spec.clone(),
            stress_levels: self.stress_levels.clone(),
            censor_time: self.censor_time,
            n_replicates: self.n_replicates,
            seed: seed_override.unwrap_or(self.seed),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
pub struct AnalysisConfig {
    pub model: ModelSpec,
    pub data_path: Option<PathBuf>,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_method")]
    pub method: MethodChoice,
    pub output_dir: Option<PathBuf>,
    #[serde(default)]
    pub targets: Vec<ScalarTarget>,
    #[serde(default)]
    pub bands: Vec<BandRequest>,
    pub safe_stress: Option<SafeStressQuery>,
    #[serde(default)]
    pub equiv: EquivConfig,
    pub sim: Option<SimConfig>,
}

impl AnalysisConfig {
    pub fn load(path: &std::path::Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        let config: AnalysisConfig =
            serde_json::from_str(&text).map_err(|e| format!("invalid config JSON: {e}"))?;
        if !(config.alpha > 0.0 && config.alpha < 1.0) {
            return Err(format!("alpha must be in (0,1), got {}", config.alpha));
        }
        Ok(config)
    }
}
