//! Likelihood-ratio and Wald confidence intervals for scalar targets, plus
//! profile-likelihood tracing.

use serde::{Deserialize, Serialize};

use crate::dist::{chisq1_quantile, std_quantile, ErrorFamily};
use crate::error::{Error, Result};
use crate::levelset::{endpoint_search, LevelSetConfig, LevelSetFns, ProfilePoint, SideOutcome};
pub use crate::levelset::Side;
use crate::likelihood::{theta_to_free, FittedModel, PreparedData};
use crate::model::ParamVector;
use crate::optim::{nelder_mead_polished, NmOptions};
use crate::target::ScalarTarget;
use crate::SNDataset;

/// One interval endpoint: either a solved level-set crossing or a marker that
/// the search hit the parameter-space / working-domain boundary first (the
/// interval extends at least to the recorded value).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", content = "value", rename_all = "kebab-case")]
pub enum Bound {
    Finite(f64),
    AtBoundary(f64),
}

impl Bound {
    pub fn value(&self) -> f64 {
        match *self {
            Bound::Finite(v) | Bound::AtBoundary(v) => v,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Bound::Finite(_))
    }

    /// Endpoint value for coverage arithmetic: a boundary marker acts as an
    /// open side.
    pub fn coverage_value(&self, side: Side) -> f64 {
        match (self, side) {
            (Bound::Finite(v), _) => *v,
            (Bound::AtBoundary(_), Side::Lower) => f64::NEG_INFINITY,
            (Bound::AtBoundary(_), Side::Upper) => f64::INFINITY,
        }
    }
}

/// Endpoint-level diagnostics of an LR interval.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IntervalDiagnostics {
    pub loglik_at_lower: Option<f64>,
    pub loglik_at_upper: Option<f64>,
    /// |loglik - k| at each solved endpoint.
    pub residual_lower: Option<f64>,
    pub residual_upper: Option<f64>,
    /// False when a profile trace was observed non-monotone.
    pub profile_monotone: bool,
}

/// Likelihood-ratio confidence interval for a scalar target.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LRInterval {
    pub lower: Bound,
    pub upper: Bound,
    pub estimate: f64,
    /// Confidence level 1 - alpha.
    pub level: f64,
    /// Log-likelihood level defining the interval.
    pub cutoff_k: f64,
    pub diagnostics: IntervalDiagnostics,
}

impl LRInterval {
    pub fn contains(&self, v: f64) -> bool {
        v >= self.lower.coverage_value(Side::Lower) && v <= self.upper.coverage_value(Side::Upper)
    }
}

/// Wald (normal-approximation) interval on the target's transformed scale.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WaldInterval {
    pub lower: f64,
    pub upper: f64,
    pub estimate: f64,
    pub level: f64,
}

impl WaldInterval {
    pub fn contains(&self, v: f64) -> bool {
        v >= self.lower && v <= self.upper
    }
}

fn require_converged(fitted: &FittedModel) -> Result<()> {
    if fitted.converged {
        Ok(())
    } else {
        Err(Error::Precondition(
            "fitted model did not converge; refusing interval computation".into(),
        ))
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidProbability {
            p: alpha,
            constraint: "0 < alpha < 1",
        })
    }
}

struct SideSummary {
    bound: Bound,
    ell: Option<f64>,
    residual: Option<f64>,
    monotone: bool,
}

fn run_side(
    fitted: &FittedModel,
    prepared: &PreparedData,
    target: &ScalarTarget,
    k: f64,
    side: Side,
) -> Result<SideSummary> {
    let spec = &fitted.spec;
    let x_hat = theta_to_free(&fitted.theta_hat);
    let loglik_fn = |x: &[f64]| {
        let ls = x[x.len() - 1];
        if ls.abs() > 30.0 {
            return f64::NEG_INFINITY;
        }
        let (beta, _) = x.split_at(x.len() - 1);
        let theta = ParamVector::new(beta.to_vec(), ls.exp());
        crate::likelihood::loglik_value(spec, prepared, &theta)
    };
    let eta_fn = |x: &[f64]| {
        let (beta, ls) = x.split_at(x.len() - 1);
        let theta = ParamVector::new(beta.to_vec(), ls[0].exp());
        target.eta_of_theta(spec, &theta)
    };
    let fns = LevelSetFns {
        loglik: &loglik_fn,
        eta: &eta_fn,
    };
    let eta_hat = eta_fn(&x_hat);
    if !eta_hat.is_finite() {
        return Err(Error::Optimization {
            msg: format!("target {} not evaluable at the estimate", target.describe()),
        });
    }
    let cfg = LevelSetConfig::new(k, target.eta_caps(spec, eta_hat));
    let result = endpoint_search(&fns, &x_hat, fitted.loglik_hat, side, &cfg);
    let summary = |p: &ProfilePoint, boundary: bool| {
        let v = target.value_of_eta(spec, p.eta);
        SideSummary {
            bound: if boundary {
                Bound::AtBoundary(v)
            } else {
                Bound::Finite(v)
            },
            ell: Some(p.ell),
            residual: Some((p.ell - k).abs()),
            monotone: result.monotone,
        }
    };
    match &result.outcome {
        SideOutcome::Degenerate => Ok(SideSummary {
            bound: Bound::Finite(target.evaluate(spec, &fitted.theta_hat)?),
            ell: Some(fitted.loglik_hat),
            residual: Some(0.0),
            monotone: true,
        }),
        SideOutcome::Crossed(p) => Ok(summary(p, false)),
        SideOutcome::AtBoundary(p) => Ok(summary(p, true)),
        SideOutcome::Failed(msg) => Err(Error::Optimization {
            msg: format!(
                "level-set search failed for {} ({side:?}): {msg}; trace: {:?}",
                target.describe(),
                result.trace
            ),
        }),
    }
}

/// One-sided LR bound; the building block for bands and equivalence checks.
pub fn lr_bound(
    fitted: &FittedModel,
    data: &SNDataset,
    target: &ScalarTarget,
    alpha: f64,
    side: Side,
) -> Result<Bound> {
    require_converged(fitted)?;
    check_alpha(alpha)?;
    target.validate(&fitted.spec)?;
    let prepared = PreparedData::new(&fitted.spec, data)?;
    let k = fitted.loglik_hat - 0.5 * chisq1_quantile(1.0 - alpha)?;
    let estimate = target.evaluate(&fitted.spec, &fitted.theta_hat)?;
    let s = run_side(fitted, &prepared, target, k, side)?;
    Ok(clamp_bound(s.bound, estimate, side))
}

fn clamp_bound(bound: Bound, estimate: f64, side: Side) -> Bound {
    let fix = |v: f64| match side {
        Side::Lower => v.min(estimate),
        Side::Upper => v.max(estimate),
    };
    match bound {
        Bound::Finite(v) => Bound::Finite(fix(v)),
        Bound::AtBoundary(v) => Bound::AtBoundary(fix(v)),
    }
}

/// Two-sided likelihood-ratio confidence interval for `target` at level
/// 1 - alpha, computed as the extremes of the target on the log-likelihood
/// level curve.
pub fn lr_interval(
    fitted: &FittedModel,
    data: &SNDataset,
    target: &ScalarTarget,
    alpha: f64,
) -> Result<LRInterval> {
    require_converged(fitted)?;
    check_alpha(alpha)?;
    target.validate(&fitted.spec)?;
    let prepared = PreparedData::new(&fitted.spec, data)?;
    let cutoff = 0.5 * chisq1_quantile(1.0 - alpha)?;
    let k = fitted.loglik_hat - cutoff;
    let estimate = target.evaluate(&fitted.spec, &fitted.theta_hat)?;

    let lo = run_side(fitted, &prepared, target, k, Side::Lower)?;
    let hi = run_side(fitted, &prepared, target, k, Side::Upper)?;

    Ok(LRInterval {
        lower: clamp_bound(lo.bound, estimate, Side::Lower),
        upper: clamp_bound(hi.bound, estimate, Side::Upper),
        estimate,
        level: 1.0 - alpha,
        cutoff_k: k,
        diagnostics: IntervalDiagnostics {
            loglik_at_lower: lo.ell,
            loglik_at_upper: hi.ell,
            residual_lower: lo.residual,
            residual_upper: hi.residual,
            profile_monotone: lo.monotone && hi.monotone,
        },
    })
}

/// Profile relative likelihood curve R(theta_i) over `grid`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProfileCurve {
    pub param_index: usize,
    pub grid: Vec<f64>,
    /// R values in (0, 1]; None where the nuisance maximization failed.
    pub relative: Vec<Option<f64>>,
}

/// Maximize the log-likelihood over all parameters except `param_index`,
/// which is fixed at `value` (internally on the log scale for sigma).
/// Returns the achieved log-likelihood and the full free vector.
fn reduced_profile(
    fitted: &FittedModel,
    prepared: &PreparedData,
    param_index: usize,
    fixed_internal: f64,
    warm_free: &[f64],
) -> Option<(f64, Vec<f64>)> {
    let spec = &fitted.spec;
    let dim = spec.n_params();
    let reduced_dim = dim - 1;
    let assemble = |nuisance: &[f64]| {
        let mut full = Vec::with_capacity(dim);
        let mut it = nuisance.iter();
        for j in 0..dim {
            if j == param_index {
                full.push(fixed_internal);
            } else {
                full.push(*it.next().unwrap());
            }
        }
        full
    };
    let obj = |nuisance: &[f64]| {
        let full = assemble(nuisance);
        let ls = full[dim - 1];
        if ls.abs() > 30.0 {
            return f64::INFINITY;
        }
        let (beta, _) = full.split_at(dim - 1);
        let theta = ParamVector::new(beta.to_vec(), ls.exp());
        -crate::likelihood::loglik_value(spec, prepared, &theta)
    };
    let x0: Vec<f64> = (0..dim)
        .filter(|&j| j != param_index)
        .map(|j| warm_free[j])
        .collect();
    let steps: Vec<f64> = x0.iter().map(|v| (0.05 * v.abs()).max(0.05)).collect();
    let nm = NmOptions {
        max_iter: 2000,
        ftol: 1e-11,
        xtol: 1e-10,
    };
    let run = nelder_mead_polished(obj, &x0, &steps, &nm, 1);
    if !run.fx.is_finite() {
        return None;
    }
    if reduced_dim == 0 {
        return Some((-obj(&[]), assemble(&[])));
    }
    Some((-run.fx, assemble(&run.x)))
}

fn internal_of_value(fitted: &FittedModel, param_index: usize, v: f64) -> f64 {
    if param_index == fitted.spec.n_params() - 1 {
        v.ln()
    } else {
        v
    }
}

fn value_of_internal(fitted: &FittedModel, param_index: usize, v: f64) -> f64 {
    if param_index == fitted.spec.n_params() - 1 {
        v.exp()
    } else {
        v
    }
}

/// Profile relative likelihood R(theta_i) = sup over nuisances of
/// exp(loglik - loglik_hat), traced over `grid`.
pub fn profile_relative(
    fitted: &FittedModel,
    data: &SNDataset,
    param_index: usize,
    grid: &[f64],
) -> Result<ProfileCurve> {
    require_converged(fitted)?;
    if param_index >= fitted.spec.n_params() {
        return Err(Error::Precondition(format!(
            "parameter index {param_index} out of range"
        )));
    }
    let prepared = PreparedData::new(&fitted.spec, data)?;
    let x_hat = theta_to_free(&fitted.theta_hat);
    let hat_value = ScalarTarget::RawParameter { index: param_index }
        .evaluate(&fitted.spec, &fitted.theta_hat)?;

    let mut relative = vec![None; grid.len()];
    // march outward from the estimate on each side so warm starts stay close
    let mut order: Vec<usize> = (0..grid.len()).collect();
    order.sort_by(|&a, &b| {
        (grid[a] - hat_value)
            .abs()
            .partial_cmp(&(grid[b] - hat_value).abs())
            .unwrap()
    });
    let mut warm_lo = x_hat.clone();
    let mut warm_hi = x_hat.clone();
    for idx in order {
        let v = grid[idx];
        if param_index == fitted.spec.n_params() - 1 && v <= 0.0 {
            continue;
        }
        let internal = internal_of_value(fitted, param_index, v);
        let warm = if v <= hat_value { &warm_lo } else { &warm_hi };
        if let Some((ell, full)) = reduced_profile(fitted, &prepared, param_index, internal, warm) {
            let r = (ell - fitted.loglik_hat).exp().min(1.0);
            if r > 0.0 {
                relative[idx] = Some(r);
            }
            if v <= hat_value {
                warm_lo = full;
            } else {
                warm_hi = full;
            }
        }
    }
    Ok(ProfileCurve {
        param_index,
        grid: grid.to_vec(),
        relative,
    })
}

/// Raw-parameter interval from the profile-crossing formulation: bisection of
/// the reduced-space profile log-likelihood against the cutoff. Independent
/// of the level-set machinery used by [`lr_interval`].
pub fn profile_crossing_interval(
    fitted: &FittedModel,
    data: &SNDataset,
    param_index: usize,
    alpha: f64,
) -> Result<(f64, f64)> {
    require_converged(fitted)?;
    check_alpha(alpha)?;
    if param_index >= fitted.spec.n_params() {
        return Err(Error::Precondition(format!(
            "parameter index {param_index} out of range"
        )));
    }
    let prepared = PreparedData::new(&fitted.spec, data)?;
    let k = fitted.loglik_hat - 0.5 * chisq1_quantile(1.0 - alpha)?;
    let x_hat = theta_to_free(&fitted.theta_hat);
    let hat_internal = x_hat[param_index];

    let profile = |internal: f64, warm: &[f64]| {
        reduced_profile(fitted, &prepared, param_index, internal, warm)
    };

    let mut endpoints = [0.0f64; 2];
    for (slot, sign) in [(0usize, -1.0f64), (1usize, 1.0f64)] {
        let mut inside = (hat_internal, x_hat.clone(), fitted.loglik_hat);
        let mut step = 0.25;
        let mut outside: Option<f64> = None;
        for _ in 0..120 {
            let cand = inside.0 + sign * step;
            if cand.abs() > 1e6 {
                break;
            }
            match profile(cand, &inside.1) {
                Some((ell, full)) if ell >= k => {
                    inside = (cand, full, ell);
                    step *= 2.0;
                }
                _ => {
                    outside = Some(cand);
                    break;
                }
            }
        }
        let mut outside = outside.ok_or_else(|| Error::Optimization {
            msg: format!("profile of parameter {param_index} never crossed the cutoff"),
        })?;
        for _ in 0..200 {
            let mid = 0.5 * (inside.0 + outside);
            match profile(mid, &inside.1) {
                Some((ell, full)) => {
                    if (ell - k).abs() <= 5e-7 {
                        inside = (mid, full, ell);
                        break;
                    }
                    if ell >= k {
                        inside = (mid, full, ell);
                    } else {
                        outside = mid;
                    }
                }
                None => outside = mid,
            }
            if (outside - inside.0).abs() <= 1e-12 * (1.0 + inside.0.abs()) {
                break;
            }
        }
        endpoints[slot] = value_of_internal(fitted, param_index, inside.0);
    }
    Ok((endpoints[0], endpoints[1]))
}

/// Wald interval by the delta method on the target's transformed scale
/// (log for quantiles and sigma, the standardized-quantile scale for cdf
/// probabilities), back-transformed to the original scale.
pub fn wald_interval(
    fitted: &FittedModel,
    target: &ScalarTarget,
    alpha: f64,
) -> Result<WaldInterval> {
    require_converged(fitted)?;
    check_alpha(alpha)?;
    target.validate(&fitted.spec)?;
    let cov = fitted.wald_cov()?;
    let spec = &fitted.spec;
    let estimate = target.evaluate(spec, &fitted.theta_hat)?;
    let eta_hat = target.eta_of_value(spec, estimate);

    let flat = fitted.theta_hat.flat();
    let dim = flat.len();
    let mut grad = vec![0.0; dim];
    for j in 0..dim {
        let h = (1e-5 * flat[j].abs()).max(1e-5);
        let mut xp = flat.clone();
        xp[j] += h;
        let mut xm = flat.clone();
        xm[j] -= h;
        let ep = target.eta_of_theta(spec, &ParamVector::from_flat(&xp));
        let em = target.eta_of_theta(spec, &ParamVector::from_flat(&xm));
        if !(ep.is_finite() && em.is_finite()) {
            return Err(Error::Optimization {
                msg: format!(
                    "delta-method gradient of {} not evaluable near the estimate",
                    target.describe()
                ),
            });
        }
        grad[j] = (ep - em) / (2.0 * h);
    }
    let var = cov.quadratic_form(&grad);
    let se = var.max(0.0).sqrt();
    let z = std_quantile(ErrorFamily::Normal, 1.0 - alpha / 2.0)?;
    let lower = target.value_of_eta(spec, eta_hat - z * se);
    let upper = target.value_of_eta(spec, eta_hat + z * se);
    Ok(WaldInterval {
        lower: lower.min(estimate),
        upper: upper.max(estimate),
        estimate,
        level: 1.0 - alpha,
    })
}
