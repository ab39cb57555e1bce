//! Pointwise confidence bands: per-grid-point intervals for the four target
//! families, with CSV/JSON serialization.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::{lr_interval, wald_interval, Bound};
use crate::likelihood::FittedModel;
use crate::model::ModelSpec;
use crate::target::ScalarTarget;
use crate::SNDataset;

/// Interval construction used for a band.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Lr,
    Wald,
}

/// Which curve the band traces and what its abscissa is.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum BandFamily {
    /// F_N(t; S_e) over a cycles grid at fixed stress.
    LifeCdf { s_e: f64 },
    /// t_p(S_e) over a probability grid at fixed stress.
    LifeQf { s_e: f64 },
    /// t_p(S_e) over a stress grid at fixed p.
    LifeQfVsStress { p: f64 },
    /// F_X(x; N_e) over a stress grid at fixed cycles.
    StrengthCdf { n_e: f64 },
    /// x_p(N_e) over a probability grid at fixed cycles.
    StrengthQf { n_e: f64 },
    /// x_p(N_e) over a cycles grid at fixed p.
    StrengthQfVsCycles { p: f64 },
}

impl BandFamily {
    pub fn name(&self) -> &'static str {
        match self {
            BandFamily::LifeCdf { .. } => "life-cdf",
            BandFamily::LifeQf { .. } => "life-qf",
            BandFamily::LifeQfVsStress { .. } => "life-qf-vs-stress",
            BandFamily::StrengthCdf { .. } => "strength-cdf",
            BandFamily::StrengthQf { .. } => "strength-qf",
            BandFamily::StrengthQfVsCycles { .. } => "strength-qf-vs-cycles",
        }
    }

    /// The scalar target this band evaluates at abscissa `a`.
    pub fn target_at(&self, a: f64) -> ScalarTarget {
        match *self {
            BandFamily::LifeCdf { s_e } => ScalarTarget::LifeCdf { t: a, s_e },
            BandFamily::LifeQf { s_e } => ScalarTarget::LifeQuantile { p: a, s_e },
            BandFamily::LifeQfVsStress { p } => ScalarTarget::LifeQuantile { p, s_e: a },
            BandFamily::StrengthCdf { n_e } => ScalarTarget::StrengthCdf { x: a, n_e },
            BandFamily::StrengthQf { n_e } => ScalarTarget::StrengthQuantile { p: a, n_e },
            BandFamily::StrengthQfVsCycles { p } => ScalarTarget::StrengthQuantile { p, n_e: a },
        }
    }
}

/// Per-point band value: a solved bound, a boundary marker, or a recorded
/// per-point failure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", content = "value", rename_all = "kebab-case")]
pub enum PointBound {
    Finite(f64),
    AtBoundary(f64),
    Failed,
}

impl PointBound {
    pub fn finite(&self) -> Option<f64> {
        match self {
            PointBound::Finite(v) => Some(*v),
            _ => None,
        }
    }

    fn from_bound(b: Bound) -> Self {
        match b {
            Bound::Finite(v) => PointBound::Finite(v),
            Bound::AtBoundary(v) => PointBound::AtBoundary(v),
        }
    }
}

/// A pointwise confidence band over an ordered grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConfidenceBand {
    pub family: BandFamily,
    pub grid: Vec<f64>,
    pub estimates: Vec<f64>,
    pub lowers: Vec<PointBound>,
    pub uppers: Vec<PointBound>,
    /// Confidence level 1 - alpha.
    pub level: f64,
    pub method: Method,
    /// Count of grid points whose interval computation failed.
    pub failures: usize,
}

/// Compute the band: one interval per grid point.
pub fn band(
    fitted: &FittedModel,
    data: &SNDataset,
    family: BandFamily,
    grid: &[f64],
    alpha: f64,
    method: Method,
) -> Result<ConfidenceBand> {
    if grid.is_empty() {
        return Err(Error::Precondition("band grid is empty".into()));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Precondition(
            "band grid must be strictly increasing".into(),
        ));
    }
    for &a in grid {
        family.target_at(a).validate(&fitted.spec)?;
    }
    let points: Vec<(f64, PointBound, PointBound)> = grid
        .par_iter()
        .map(|&a| {
            let target = family.target_at(a);
            let estimate = target
                .evaluate(&fitted.spec, &fitted.theta_hat)
                .unwrap_or(f64::NAN);
            match method {
                Method::Lr => match lr_interval(fitted, data, &target, alpha) {
                    Ok(iv) => (
                        estimate,
                        PointBound::from_bound(iv.lower),
                        PointBound::from_bound(iv.upper),
                    ),
                    Err(_) => (estimate, PointBound::Failed, PointBound::Failed),
                },
                Method::Wald => match wald_interval(fitted, &target, alpha) {
                    Ok(iv) => (
                        estimate,
                        PointBound::Finite(iv.lower),
                        PointBound::Finite(iv.upper),
                    ),
                    Err(_) => (estimate, PointBound::Failed, PointBound::Failed),
                },
            }
        })
        .collect();

    let failures = points
        .iter()
        .filter(|(_, lo, up)| *lo == PointBound::Failed || *up == PointBound::Failed)
        .count();
    Ok(ConfidenceBand {
        family,
        grid: grid.to_vec(),
        estimates: points.iter().map(|p| p.0).collect(),
        lowers: points.iter().map(|p| p.1).collect(),
        uppers: points.iter().map(|p| p.2).collect(),
        level: 1.0 - alpha,
        method,
        failures,
    })
}

/// Safe-stress query: the stress level whose one-sided upper LR bound on the
/// fatigue-life cdf at `n_e` cycles equals `p`. By the band-transposition
/// equivalences this is the lower LR bound on the fatigue-strength p quantile
/// at `n_e`, so it reads a strength bound off fatigue-life software output.
pub fn safe_stress_query(
    fitted: &FittedModel,
    data: &SNDataset,
    p: f64,
    n_e: f64,
    alpha: f64,
) -> Result<f64> {
    use crate::interval::{lr_bound, Side};
    let dom = fitted.spec.domain.stress;
    let f_up = |s: f64| -> Result<f64> {
        let target = ScalarTarget::LifeCdf { t: n_e, s_e: s };
        Ok(lr_bound(fitted, data, &target, alpha, Side::Upper)?.value())
    };
    // the upper cdf bound increases in stress; log-bisect the crossing
    let mut lo = dom.lo * (1.0 + 1e-9);
    let mut hi = dom.hi * (1.0 - 1e-9);
    let (flo, fhi) = (f_up(lo)?, f_up(hi)?);
    if !(flo <= p && p <= fhi) {
        return Err(Error::Precondition(format!(
            "upper cdf bound spans [{flo:.4}, {fhi:.4}] over the stress domain and never crosses {p}"
        )));
    }
    for _ in 0..40 {
        if hi / lo - 1.0 <= 1e-6 {
            break;
        }
        let mid = (lo * hi).sqrt();
        if f_up(mid)? < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo * hi).sqrt())
}

/// Probability grid equispaced on the probit scale over [0.01, 0.99].
pub fn probability_grid(n: usize) -> Vec<f64> {
    assert!(n >= 2);
    let zlo = crate::dist::std_quantile_raw(crate::dist::ErrorFamily::Normal, 0.01);
    let zhi = -zlo;
    (0..n)
        .map(|i| {
            let z = zlo + (zhi - zlo) * i as f64 / (n - 1) as f64;
            crate::dist::std_cdf_raw(crate::dist::ErrorFamily::Normal, z)
        })
        .collect()
}

/// Grid equispaced on the log scale over [lo, hi].
pub fn log_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2 && lo > 0.0 && lo < hi);
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Format with 9 significant digits; used for all numeric text output.
pub fn format_sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    format!("{}", round_sig9(x))
}

/// Round to 9 significant decimal digits.
pub fn round_sig9(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let exp = x.abs().log10().floor() as i32;
    let scale = 10f64.powi(8 - exp);
    (x * scale).round() / scale
}

/// Band CSV: `abscissa,estimate,lower,upper`; non-finite bounds are empty
/// cells and carried in the JSON document instead.
pub fn band_to_csv(band: &ConfidenceBand) -> String {
    let mut out = String::from("abscissa,estimate,lower,upper\n");
    for i in 0..band.grid.len() {
        let cell = |b: &PointBound| match b {
            PointBound::Finite(v) => format_sig9(*v),
            _ => String::new(),
        };
        out.push_str(&format!(
            "{},{},{},{}\n",
            format_sig9(band.grid[i]),
            format_sig9(band.estimates[i]),
            cell(&band.lowers[i]),
            cell(&band.uppers[i]),
        ));
    }
    out
}

/// 64-bit FNV-1a over the canonical model JSON; identifies the model a band
/// belongs to.
pub fn model_hash(spec: &ModelSpec) -> String {
    let json = serde_json::to_string(spec).unwrap_or_default();
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in json.as_bytes() {
        h ^= *b as u64;
        h = h.wrapping_mul(0x1_0000_0000_01b3);
    }
    format!("{h:016x}")
}

/// Band JSON document with metadata.
pub fn band_to_json(band: &ConfidenceBand, spec: &ModelSpec) -> serde_json::Value {
    let rounded: Vec<serde_json::Value> = (0..band.grid.len())
        .map(|i| {
            let bound_json = |b: &PointBound| match b {
                PointBound::Finite(v) => serde_json::json!({"status": "finite", "value": round_sig9(*v)}),
                PointBound::AtBoundary(v) => {
                    serde_json::json!({"status": "at-boundary", "value": round_sig9(*v)})
                }
                PointBound::Failed => serde_json::json!({"status": "failed"}),
            };
            serde_json::json!({
                "abscissa": round_sig9(band.grid[i]),
                "estimate": round_sig9(band.estimates[i]),
                "lower": bound_json(&band.lowers[i]),
                "upper": bound_json(&band.uppers[i]),
            })
        })
        .collect();
    serde_json::json!({
        "family": serde_json::to_value(band.family).unwrap(),
        "level": band.level,
        "method": serde_json::to_value(band.method).unwrap(),
        "model_hash": model_hash(spec),
        "failures": band.failures,
        "points": rounded,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn probability_grid_is_probit_equispaced() {
        let g = probability_grid(25);
        assert_eq!(g.len(), 25);
        assert!((g[0] - 0.01).abs() < 1e-12);
        assert!((g[24] - 0.99).abs() < 1e-12);
        assert!((g[12] - 0.5).abs() < 1e-12);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn log_spaced_endpoints() {
        let g = log_spaced(10.0, 1000.0, 3);
        assert!((g[0] - 10.0).abs() < 1e-9);
        assert!((g[1] - 100.0).abs() < 1e-9);
        assert!((g[2] - 1000.0).abs() < 1e-9);
    }

    #[test]
    fn sig9_formatting() {
        assert_eq!(format_sig9(1234.56789012), "1234.56789");
        assert_eq!(format_sig9(0.000123456789012), "0.000123456789");
        assert_eq!(format_sig9(-2.0), "-2");
        assert_eq!(format_sig9(0.0), "0");
    }
}
