//! Censored log-likelihood evaluation, maximum likelihood fitting, and the
//! Wald covariance from the numeric observed information.

use serde::{Deserialize, Serialize};

use crate::data::SNDataset;
use crate::error::{Error, Result};
use crate::linalg::SymMatrix;
use crate::model::{ModelSpec, Orientation, ParamVector};
use crate::optim::{nelder_mead_polished, NmOptions};

/// Dataset columns pre-transformed for one model spec: `u` is the log of the
/// curve argument (log stress when life is specified, log cycles otherwise),
/// `y` is the log of the response.
#[derive(Debug, Clone)]
pub(crate) struct PreparedData {
    pub stress: Vec<f64>,
    pub cycles: Vec<f64>,
    pub failure: Vec<bool>,
}

impl PreparedData {
    pub(crate) fn new(spec: &ModelSpec, data: &SNDataset) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::EmptyDataset);
        }
        for (i, obs) in data.observations.iter().enumerate() {
            let row = i + 1;
            if !spec.domain.stress.contains(obs.stress) {
                return Err(Error::OutsideDomain {
                    what: format!("row {row} stress"),
                    value: obs.stress,
                    lo: spec.domain.stress.lo,
                    hi: spec.domain.stress.hi,
                });
            }
            if spec.orientation == Orientation::StrengthSpecified
                && !spec.domain.cycles.contains(obs.cycles)
            {
                return Err(Error::OutsideDomain {
                    what: format!("row {row} cycles"),
                    value: obs.cycles,
                    lo: spec.domain.cycles.lo,
                    hi: spec.domain.cycles.hi,
                });
            }
        }
        Ok(PreparedData {
            stress: data.observations.iter().map(|o| o.stress).collect(),
            cycles: data.observations.iter().map(|o| o.cycles).collect(),
            failure: data.observations.iter().map(|o| o.is_failure()).collect(),
        })
    }

    pub(crate) fn len(&self) -> usize {
        self.stress.len()
    }
}

/// Log-likelihood value for admissible theta; -inf for inadmissible trial
/// points so optimizers can roam freely.
pub(crate) fn loglik_value(spec: &ModelSpec, prepared: &PreparedData, theta: &ParamVector) -> f64 {
    if !spec.theta_admissible(&theta.beta, theta.sigma) {
        return f64::NEG_INFINITY;
    }
    let mut acc = 0.0;
    for i in 0..prepared.len() {
        let term = if prepared.failure[i] {
            spec.life_log_pdf_raw(theta, prepared.cycles[i], prepared.stress[i])
        } else {
            spec.life_log_survival_raw(theta, prepared.cycles[i], prepared.stress[i])
        };
        acc += term;
    }
    if acc.is_nan() {
        f64::NEG_INFINITY
    } else {
        acc
    }
}

/// Censored log-likelihood of the dataset under `theta`.
pub fn loglik(spec: &ModelSpec, theta: &ParamVector, data: &SNDataset) -> Result<f64> {
    spec.validate_theta(theta)?;
    let prepared = PreparedData::new(spec, data)?;
    Ok(loglik_value(spec, &prepared, theta))
}

/// Per-start record kept for fit diagnostics.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StartDiagnostic {
    pub start: usize,
    pub x0: Vec<f64>,
    pub loglik: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Options for [`fit_ml`].
#[derive(Debug, Clone)]
pub struct FitOptions {
    pub starts: usize,
    pub max_iter: usize,
    pub tol: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            starts: 8,
            max_iter: 4000,
            tol: 1e-10,
        }
    }
}

/// A fitted model: the ML estimate, its log-likelihood, and the Wald
/// covariance (inverse observed information), when positive definite.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FittedModel {
    pub spec: ModelSpec,
    pub theta_hat: ParamVector,
    pub loglik_hat: f64,
    pub wald_cov: Option<SymMatrix>,
    pub converged: bool,
    pub iterations: usize,
    pub starts: Vec<StartDiagnostic>,
}

impl FittedModel {
    pub fn wald_cov(&self) -> Result<&SymMatrix> {
        self.wald_cov.as_ref().ok_or(Error::SingularInformation)
    }
}

/// Least-squares start treating runouts as failures, sigma inflated by 1.5.
fn least_squares_start(spec: &ModelSpec, prepared: &PreparedData) -> ParamVector {
    let n = prepared.len();
    let p = spec.curve.coefficient_count();
    let (u, y): (Vec<f64>, Vec<f64>) = match spec.orientation {
        Orientation::LifeSpecified => (
            prepared.stress.iter().map(|s| s.ln()).collect(),
            prepared.cycles.iter().map(|t| t.ln()).collect(),
        ),
        Orientation::StrengthSpecified => (
            prepared.cycles.iter().map(|t| t.ln()).collect(),
            prepared.stress.iter().map(|s| s.ln()).collect(),
        ),
    };
    // normal equations for y ~ 1 + u (+ u^2)
    let mut xtx = SymMatrix::zeros(p);
    let mut xty = vec![0.0; p];
    for i in 0..n {
        let row = [1.0, u[i], u[i] * u[i]];
        for a in 0..p {
            for b in a..p {
                xtx.set(a, b, xtx.get(a, b) + row[a] * row[b]);
            }
            xty[a] += row[a] * y[i];
        }
    }
    let beta = match xtx.cholesky_inverse() {
        Some(inv) => {
            let mut b = vec![0.0; p];
            for a in 0..p {
                for c in 0..p {
                    b[a] += inv.get(a, c) * xty[c];
                }
            }
            b
        }
        None => {
            // degenerate design (single stress level); fall back to a flat-ish
            // decreasing curve through the response mean
            let ybar = y.iter().sum::<f64>() / n as f64;
            let ubar = u.iter().sum::<f64>() / n as f64;
            let mut b = vec![0.0; p];
            b[1] = -0.5;
            b[0] = ybar + 0.5 * ubar;
            b
        }
    };
    let mut beta = beta;
    if !spec.theta_admissible(&beta, 1.0) {
        // force a decreasing slope; keep the fitted level at the mean
        let ybar = y.iter().sum::<f64>() / n as f64;
        let ubar = u.iter().sum::<f64>() / n as f64;
        beta = vec![0.0; p];
        beta[1] = -0.5;
        beta[0] = ybar + 0.5 * ubar;
    }
    let mut rss = 0.0;
    for i in 0..n {
        let fit = spec.curve.eval_log(&beta, u[i]);
        rss += (y[i] - fit) * (y[i] - fit);
    }
    let sigma = ((rss / n as f64).sqrt() * 1.5).max(1e-8);
    ParamVector::new(beta, sigma)
}

/// Deterministic start jitter (xorshift on a fixed seed).
fn jitter_factors(start: usize, count: usize) -> Vec<f64> {
    let mut state = 0x9E37_79B9_7F4A_7C15u64 ^ (start as u64).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        // uniform in [-1, 1]
        out.push((state >> 11) as f64 / (1u64 << 52) as f64 * 2.0 - 1.0);
    }
    out
}

const SIGMA_LOG_BOUND: f64 = 30.0;

fn free_to_theta(x: &[f64]) -> ParamVector {
    let (beta, ls) = x.split_at(x.len() - 1);
    ParamVector::new(beta.to_vec(), ls[0].exp())
}

pub(crate) fn theta_to_free(theta: &ParamVector) -> Vec<f64> {
    let mut x = theta.beta.clone();
    x.push(theta.sigma.ln());
    x
}

/// Objective on the (beta, log sigma) parameterization; +inf outside the
/// log-sigma box so the scale cannot collapse or explode.
pub(crate) fn neg_loglik_free(spec: &ModelSpec, prepared: &PreparedData, x: &[f64]) -> f64 {
    let ls = x[x.len() - 1];
    if ls.abs() > SIGMA_LOG_BOUND {
        return f64::INFINITY;
    }
    -loglik_value(spec, prepared, &free_to_theta(x))
}

/// Local-maximizer verification: no coordinate perturbation of relative size
/// `rel` may improve the log-likelihood by more than `gain`.
pub(crate) fn is_local_max(
    spec: &ModelSpec,
    prepared: &PreparedData,
    theta: &ParamVector,
    rel: f64,
    gain: f64,
) -> bool {
    let base = loglik_value(spec, prepared, theta);
    let flat = theta.flat();
    for j in 0..flat.len() {
        for sign in [-1.0, 1.0] {
            let mut pert = flat.clone();
            let step = rel * pert[j].abs().max(rel);
            pert[j] += sign * step;
            let cand = ParamVector::from_flat(&pert);
            if cand.sigma <= 0.0 {
                continue;
            }
            if loglik_value(spec, prepared, &cand) > base + gain {
                return false;
            }
        }
    }
    true
}

/// Maximum likelihood fit with multi-start Nelder-Mead on (beta, log sigma).
pub fn fit_ml(spec: &ModelSpec, data: &SNDataset, options: &FitOptions) -> Result<FittedModel> {
    let prepared = PreparedData::new(spec, data)?;
    if data.n_failures() == 0 {
        return Err(Error::NoFailures);
    }
    let base = least_squares_start(spec, &prepared);
    let sigma_mults: [f64; 8] = [1.0, 0.5, 2.0, 1.0, 4.0, 0.25, 1.0, 8.0];

    let nm = NmOptions {
        max_iter: options.max_iter,
        ftol: options.tol,
        xtol: 1e-10,
    };

    let mut diagnostics = Vec::with_capacity(options.starts);
    let mut best: Option<(Vec<f64>, f64, usize, bool)> = None;

    for s in 0..options.starts.max(1) {
        let mut x0 = theta_to_free(&base);
        let dim = x0.len();
        if s > 0 {
            let jitter = jitter_factors(s, dim);
            for (j, x) in x0.iter_mut().enumerate().take(dim - 1) {
                *x += jitter[j] * (0.25 * x.abs()).max(0.25);
            }
            x0[dim - 1] += sigma_mults[s % sigma_mults.len()].ln() + 0.1 * jitter[dim - 1];
        }
        let steps: Vec<f64> = x0.iter().map(|v| (0.1 * v.abs()).max(0.1)).collect();
        let run = nelder_mead_polished(
            |x| neg_loglik_free(spec, &prepared, x),
            &x0,
            &steps,
            &nm,
            2,
        );
        let ll = -run.fx;
        diagnostics.push(StartDiagnostic {
            start: s,
            x0,
            loglik: ll,
            iterations: run.iterations,
            converged: run.converged && ll.is_finite(),
        });
        let better = match &best {
            None => ll.is_finite(),
            Some((_, incumbent, _, _)) => ll > *incumbent,
        };
        if better {
            best = Some((run.x, ll, run.iterations, run.converged));
        }
    }

    let (x_best, ll_best, iterations, nm_converged) = best.ok_or(Error::NotConverged {
        diagnostics: diagnostics.clone(),
    })?;
    let theta_hat = free_to_theta(&x_best);
    let converged = nm_converged && is_local_max(spec, &prepared, &theta_hat, 1e-4, 1e-6);
    let wald_cov = wald_covariance(spec, &theta_hat, data).ok();

    Ok(FittedModel {
        spec: spec.clone(),
        theta_hat,
        loglik_hat: ll_best,
        wald_cov,
        converged,
        iterations,
        starts: diagnostics,
    })
}

/// Inverse of the negative central-difference Hessian of the log-likelihood
/// at `theta_hat`, on the (beta, sigma) scale.
pub fn wald_covariance(
    spec: &ModelSpec,
    theta_hat: &ParamVector,
    data: &SNDataset,
) -> Result<SymMatrix> {
    spec.validate_theta(theta_hat)?;
    let prepared = PreparedData::new(spec, data)?;
    let flat = theta_hat.flat();
    let dim = flat.len();
    let f = |x: &[f64]| {
        let theta = ParamVector::from_flat(x);
        loglik_value(spec, &prepared, &theta)
    };
    let h: Vec<f64> = flat.iter().map(|v| (1e-5 * v.abs()).max(1e-5)).collect();
    let f0 = f(&flat);
    let mut hess = SymMatrix::zeros(dim);
    for i in 0..dim {
        for j in i..dim {
            let val = if i == j {
                let mut xp = flat.clone();
                xp[i] += h[i];
                let mut xm = flat.clone();
                xm[i] -= h[i];
                (f(&xp) - 2.0 * f0 + f(&xm)) / (h[i] * h[i])
            } else {
                let mut xpp = flat.clone();
                xpp[i] += h[i];
                xpp[j] += h[j];
                let mut xpm = flat.clone();
                xpm[i] += h[i];
                xpm[j] -= h[j];
                let mut xmp = flat.clone();
                xmp[i] -= h[i];
                xmp[j] += h[j];
                let mut xmm = flat.clone();
                xmm[i] -= h[i];
                xmm[j] -= h[j];
                (f(&xpp) - f(&xpm) - f(&xmp) + f(&xmm)) / (4.0 * h[i] * h[j])
            };
            if !val.is_finite() {
                return Err(Error::SingularInformation);
            }
            hess.set(i, j, val);
        }
    }
    let mut info = SymMatrix::zeros(dim);
    for i in 0..dim {
        for j in i..dim {
            info.set(i, j, -hess.get(i, j));
        }
    }
    info.cholesky_inverse().ok_or(Error::SingularInformation)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::CurveFamily;
    use crate::data::SNObservation;
    use crate::dist::ErrorFamily;
    use crate::model::{Domain, Span};

    fn spec() -> ModelSpec {
        ModelSpec::new(
            Orientation::LifeSpecified,
            ErrorFamily::Normal,
            CurveFamily::Loglinear,
            Domain {
                stress: Span { lo: 1.0, hi: 200.0 },
                cycles: Span { lo: 1e-3, hi: 1e12 },
            },
        )
        .unwrap()
    }

    /// Independent naive term-by-term reimplementation: normal cdf by Simpson
    /// integration, density from the textbook formula.
    fn naive_loglik(theta: &ParamVector, data: &SNDataset) -> f64 {
        let normal_cdf = |z: f64| {
            let lo = -14.0f64;
            let n = 40_000usize;
            let h = (z - lo) / n as f64;
            let pdf = |t: f64| (-(t * t) / 2.0).exp() / (2.0 * std::f64::consts::PI).sqrt();
            let mut acc = pdf(lo) + pdf(z);
            for i in 1..n {
                acc += pdf(lo + h * i as f64) * if i % 2 == 0 { 2.0 } else { 4.0 };
            }
            acc * h / 3.0
        };
        let mut total = 0.0;
        for obs in &data.observations {
            let mu = theta.beta[0] + theta.beta[1] * obs.stress.ln();
            let z = (obs.cycles.ln() - mu) / theta.sigma;
            if obs.is_failure() {
                let phi = (-(z * z) / 2.0).exp() / (2.0 * std::f64::consts::PI).sqrt();
                total += (phi / (theta.sigma * obs.cycles)).ln();
            } else {
                total += (1.0 - normal_cdf(z)).ln();
            }
        }
        total
    }

    #[test]
    fn single_failure_at_median() {
        let theta = ParamVector::new(vec![10.0, -2.0], 0.5);
        let t = 8.0f64.exp();
        let data = SNDataset::new(
            vec![SNObservation::failure(std::f64::consts::E, t)],
            "one",
        )
        .unwrap();
        let got = loglik(&spec(), &theta, &data).unwrap();
        let want = (0.3989422804014327f64).ln() - 0.5f64.ln() - t.ln();
        assert!((got - want).abs() < 1e-9, "{got} vs {want}");
    }

    #[test]
    fn single_runout_at_median() {
        let theta = ParamVector::new(vec![10.0, -2.0], 0.5);
        let data = SNDataset::new(
            vec![SNObservation::runout(std::f64::consts::E, 8.0f64.exp())],
            "one",
        )
        .unwrap();
        let got = loglik(&spec(), &theta, &data).unwrap();
        assert!((got - 0.5f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn five_observations_match_naive_reimplementation() {
        let theta = ParamVector::new(vec![9.0, -1.6], 0.7);
        let data = SNDataset::new(
            vec![
                SNObservation::failure(20.0, 900.0),
                SNObservation::failure(30.0, 200.0),
                SNObservation::runout(20.0, 200.0),
                SNObservation::failure(45.0, 75.0),
                SNObservation::runout(45.0, 60.0),
            ],
            "five",
        )
        .unwrap();
        let got = loglik(&spec(), &theta, &data).unwrap();
        let want = naive_loglik(&theta, &data);
        assert!((got - want).abs() < 1e-10, "{got} vs {want}");
    }

    #[test]
    fn loglik_rejects_bad_sigma_and_out_of_domain_rows() {
        let data = SNDataset::new(vec![SNObservation::failure(20.0, 900.0)], "d").unwrap();
        let bad = ParamVector::new(vec![9.0, -1.6], -0.1);
        assert!(matches!(
            loglik(&spec(), &bad, &data),
            Err(Error::NonPositiveSigma(_))
        ));
        let far = SNDataset::new(vec![SNObservation::failure(5000.0, 900.0)], "d").unwrap();
        let theta = ParamVector::new(vec![9.0, -1.6], 0.5);
        match loglik(&spec(), &theta, &far) {
            Err(Error::OutsideDomain { what, .. }) => assert!(what.contains("row 1")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn loglik_order_invariant() {
        let theta = ParamVector::new(vec![9.0, -1.6], 0.7);
        let mut obs = vec![
            SNObservation::failure(20.0, 900.0),
            SNObservation::runout(30.0, 2500.0),
            SNObservation::failure(45.0, 75.0),
            SNObservation::failure(25.0, 333.0),
        ];
        let a = loglik(&spec(), &theta, &SNDataset::new(obs.clone(), "a").unwrap()).unwrap();
        obs.reverse();
        obs.swap(0, 2);
        let b = loglik(&spec(), &theta, &SNDataset::new(obs, "b").unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn early_runout_carries_no_information() {
        let theta = ParamVector::new(vec![9.0, -1.6], 0.7);
        let base = vec![
            SNObservation::failure(20.0, 900.0),
            SNObservation::failure(45.0, 75.0),
        ];
        let min_cycles = 75.0;
        let a = loglik(&spec(), &theta, &SNDataset::new(base.clone(), "a").unwrap()).unwrap();
        let mut with_runout = base;
        with_runout.push(SNObservation::runout(30.0, 1e-9 * min_cycles));
        let b = loglik(&spec(), &theta, &SNDataset::new(with_runout, "b").unwrap()).unwrap();
        assert!((a - b).abs() <= 1e-6, "delta {}", (a - b).abs());
    }

    /// Closed-form ML for the uncensored Gaussian linear model.
    fn ols_oracle(data: &SNDataset) -> (Vec<f64>, f64) {
        let n = data.len() as f64;
        let u: Vec<f64> = data.observations.iter().map(|o| o.stress.ln()).collect();
        let y: Vec<f64> = data.observations.iter().map(|o| o.cycles.ln()).collect();
        let (su, sy) = (u.iter().sum::<f64>(), y.iter().sum::<f64>());
        let suu = u.iter().map(|v| v * v).sum::<f64>();
        let suy = u.iter().zip(&y).map(|(a, b)| a * b).sum::<f64>();
        let slope = (n * suy - su * sy) / (n * suu - su * su);
        let intercept = (sy - slope * su) / n;
        let rss: f64 = u
            .iter()
            .zip(&y)
            .map(|(ui, yi)| {
                let r = yi - intercept - slope * ui;
                r * r
            })
            .sum();
        (vec![intercept, slope], (rss / n).sqrt())
    }

    fn synthetic_complete_dataset() -> SNDataset {
        // deterministic pseudo-noise, uncensored
        let mut obs = Vec::new();
        let mut state = 0x1234_5678_9ABC_DEF0u64;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 52) as f64
        };
        for level in [20.0f64, 40.0, 80.0] {
            for _ in 0..20 {
                // sum of 12 uniforms minus 6: approximately standard normal
                let z: f64 = (0..12).map(|_| next()).sum::<f64>() - 6.0;
                let mu = 11.0 - 1.8 * level.ln();
                obs.push(SNObservation::failure(level, (mu + 0.5 * z).exp()));
            }
        }
        SNDataset::new(obs, "complete").unwrap()
    }

    #[test]
    fn complete_data_fit_matches_closed_form() {
        let data = synthetic_complete_dataset();
        let fitted = fit_ml(&spec(), &data, &FitOptions::default()).unwrap();
        assert!(fitted.converged);
        let (beta, sigma) = ols_oracle(&data);
        assert!(
            (fitted.theta_hat.beta[0] - beta[0]).abs() < 1e-4,
            "b0 {} vs {}",
            fitted.theta_hat.beta[0],
            beta[0]
        );
        assert!((fitted.theta_hat.beta[1] - beta[1]).abs() < 1e-4);
        assert!((fitted.theta_hat.sigma - sigma).abs() < 1e-4);
        // loglik_hat consistency with a fresh evaluation
        let ll = loglik(&spec(), &fitted.theta_hat, &data).unwrap();
        assert!((ll - fitted.loglik_hat).abs() < 1e-9);
    }

    #[test]
    fn all_runouts_is_degenerate() {
        let data = SNDataset::new(
            vec![
                SNObservation::runout(20.0, 900.0),
                SNObservation::runout(30.0, 900.0),
            ],
            "runouts",
        )
        .unwrap();
        assert!(matches!(
            fit_ml(&spec(), &data, &FitOptions::default()),
            Err(Error::NoFailures)
        ));
    }

    #[test]
    fn indefinite_hessian_is_a_singular_information_error() {
        // far from any maximum the curvature is not negative definite
        let data = synthetic_complete_dataset();
        let bad = ParamVector::new(vec![25.0, -6.0], 80.0);
        assert!(matches!(
            wald_covariance(&spec(), &bad, &data),
            Err(Error::SingularInformation)
        ));
    }

    #[test]
    fn quadrupling_n_quarters_the_wald_variances() {
        // Monte Carlo scaling check on the same design
        let spec = spec();
        let make = |per_level: usize, seed: u64| {
            let design = crate::sim::SimDesign {
                theta_true: ParamVector::new(vec![11.0, -1.8], 0.5),
                spec: spec.clone(),
                stress_levels: vec![
                    crate::sim::StressAllocation {
                        stress: 20.0,
                        count: per_level,
                    },
                    crate::sim::StressAllocation {
                        stress: 40.0,
                        count: per_level,
                    },
                    crate::sim::StressAllocation {
                        stress: 80.0,
                        count: per_level,
                    },
                ],
                censor_time: 1e9,
                n_replicates: 1,
                seed,
            };
            crate::sim::simulate_dataset(&design, 0).unwrap()
        };
        let small = fit_ml(&spec, &make(200, 4), &FitOptions::default()).unwrap();
        let large = fit_ml(&spec, &make(800, 4), &FitOptions::default()).unwrap();
        let cs = small.wald_cov().unwrap();
        let cl = large.wald_cov().unwrap();
        for i in 0..3 {
            let ratio = cs.get(i, i) / cl.get(i, i);
            assert!(
                (ratio / 4.0 - 1.0).abs() < 0.2,
                "variance ratio for component {i}: {ratio}"
            );
        }
    }

    #[test]
    fn wald_covariance_matches_linear_model_information() {
        let data = synthetic_complete_dataset();
        let fitted = fit_ml(&spec(), &data, &FitOptions::default()).unwrap();
        let cov = fitted.wald_cov().unwrap();
        // oracle: Gaussian linear model information inverse
        let n = data.len() as f64;
        let sigma2 = fitted.theta_hat.sigma * fitted.theta_hat.sigma;
        let u: Vec<f64> = data.observations.iter().map(|o| o.stress.ln()).collect();
        let (su, suu) = (
            u.iter().sum::<f64>(),
            u.iter().map(|v| v * v).sum::<f64>(),
        );
        let det = n * suu - su * su;
        let want00 = sigma2 * suu / det;
        let want01 = -sigma2 * su / det;
        let want11 = sigma2 * n / det;
        let want22 = sigma2 / (2.0 * n);
        assert!((cov.get(0, 0) / want00 - 1.0).abs() < 0.02);
        assert!((cov.get(0, 1) / want01 - 1.0).abs() < 0.02);
        assert!((cov.get(1, 1) / want11 - 1.0).abs() < 0.02);
        assert!((cov.get(2, 2) / want22 - 1.0).abs() < 0.02);
        // beta-sigma cross terms are zero in the oracle
        let scale = (cov.get(0, 0) * cov.get(2, 2)).sqrt();
        assert!(cov.get(0, 2).abs() < 0.02 * scale);
        for i in 0..3 {
            assert!(cov.get(i, i) > 0.0);
        }
    }
}
