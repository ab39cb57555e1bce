//! Level-set endpoint search: finds the extremes of a scalar function on the
//! log-likelihood level curve `loglik(theta) = k`.
//!
//! The search bisects candidate target values against the profile
//! log-likelihood. Each profile evaluation maximizes the log-likelihood
//! subject to the target-equality constraint, imposed through an escalating
//! quadratic penalty and warm-started from the previous witness.

use crate::optim::{nelder_mead_polished, NmOptions};

/// The two closures the search needs, both over the free parameter vector.
/// `eta` is the target on its monotone search scale and must return NaN where
/// the target is not evaluable.
pub struct LevelSetFns<'a> {
    pub loglik: &'a (dyn Fn(&[f64]) -> f64 + Sync),
    pub eta: &'a (dyn Fn(&[f64]) -> f64 + Sync),
}

#[derive(Debug, Clone)]
pub struct LevelSetConfig {
    /// Log-likelihood level defining the constraint.
    pub k: f64,
    /// Search box for eta; hitting it yields a boundary outcome.
    pub eta_caps: (f64, f64),
    /// Endpoint acceptance: |profile loglik - k| below this.
    pub tol_ell: f64,
    /// Constraint residual |eta - target| the penalty must reach.
    pub constraint_tol: f64,
    /// First expansion step on the eta scale.
    pub init_step: f64,
    pub nm: NmOptions,
}

impl LevelSetConfig {
    pub fn new(k: f64, eta_caps: (f64, f64)) -> Self {
        LevelSetConfig {
            k,
            eta_caps,
            tol_ell: 5e-7,
            constraint_tol: 1e-9,
            init_step: 0.25,
            nm: NmOptions {
                max_iter: 2000,
                ftol: 1e-11,
                xtol: 1e-10,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Lower,
    Upper,
}

impl Side {
    fn sign(self) -> f64 {
        match self {
            Side::Lower => -1.0,
            Side::Upper => 1.0,
        }
    }
}

/// A feasible point produced by one profile evaluation.
#[derive(Debug, Clone)]
pub struct ProfilePoint {
    pub x: Vec<f64>,
    pub ell: f64,
    pub eta: f64,
}

/// Result of one one-sided endpoint search.
#[derive(Debug, Clone)]
pub enum SideOutcome {
    /// Cutoff is (numerically) zero: the endpoint is the estimate itself.
    Degenerate,
    /// The profile crossed k at this witness.
    Crossed(ProfilePoint),
    /// The eta box was reached with the profile still above k.
    AtBoundary(ProfilePoint),
    /// The search could not be completed.
    Failed(String),
}

#[derive(Debug, Clone)]
pub struct SideResult {
    pub outcome: SideOutcome,
    /// Profile values seen, as (eta, profile loglik); diagnostic.
    pub trace: Vec<(f64, f64)>,
    /// False when the profile was observed non-monotone along the search.
    pub monotone: bool,
}

const PENALTY_W0: f64 = 1e4;
const PENALTY_GROWTH: f64 = 1e3;
const PENALTY_WMAX: f64 = 1e13;

/// Maximize loglik subject to eta(x) = target via escalating quadratic
/// penalty. Returns the witness with its achieved eta and loglik; None when
/// no finite-objective point was found.
pub fn profile_max(
    fns: &LevelSetFns,
    x_start: &[f64],
    target: f64,
    cfg: &LevelSetConfig,
) -> Option<ProfilePoint> {
    let mut x = x_start.to_vec();
    let mut w = PENALTY_W0;
    let mut best: Option<ProfilePoint> = None;
    while w <= PENALTY_WMAX {
        let obj = |x: &[f64]| {
            let ll = (fns.loglik)(x);
            if !ll.is_finite() {
                return f64::INFINITY;
            }
            let e = (fns.eta)(x);
            if !e.is_finite() {
                return f64::INFINITY;
            }
            let r = e - target;
            -ll + w * r * r
        };
        // the penalty valley narrows like 1/sqrt(w)
        let shrink = (PENALTY_W0 / w).sqrt();
        let steps: Vec<f64> = x
            .iter()
            .map(|v| ((0.05 * v.abs()).max(0.05) * shrink).max(1e-8))
            .collect();
        let run = nelder_mead_polished(obj, &x, &steps, &cfg.nm, 1);
        if !run.fx.is_finite() {
            return best;
        }
        x = run.x.clone();
        let ell = (fns.loglik)(&x);
        let eta = (fns.eta)(&x);
        if ell.is_finite() && eta.is_finite() {
            best = Some(ProfilePoint { x: x.clone(), ell, eta });
            if (eta - target).abs() <= cfg.constraint_tol {
                break;
            }
        }
        w *= PENALTY_GROWTH;
    }
    best
}

/// Search one endpoint of {eta : profile loglik >= k} starting from the
/// unconstrained maximizer.
pub fn endpoint_search(
    fns: &LevelSetFns,
    x_hat: &[f64],
    ell_hat: f64,
    side: Side,
    cfg: &LevelSetConfig,
) -> SideResult {
    let eta_hat = (fns.eta)(x_hat);
    if !eta_hat.is_finite() {
        return SideResult {
            outcome: SideOutcome::Failed("target not evaluable at the estimate".into()),
            trace: Vec::new(),
            monotone: true,
        };
    }
    if ell_hat - cfg.k <= cfg.tol_ell {
        return SideResult {
            outcome: SideOutcome::Degenerate,
            trace: vec![(eta_hat, ell_hat)],
            monotone: true,
        };
    }

    let sign = side.sign();
    let cap = match side {
        Side::Lower => cfg.eta_caps.0,
        Side::Upper => cfg.eta_caps.1,
    };
    if sign * (cap - eta_hat) <= 0.0 {
        // estimate already sits at or past the box edge
        return SideResult {
            outcome: SideOutcome::AtBoundary(ProfilePoint {
                x: x_hat.to_vec(),
                ell: ell_hat,
                eta: eta_hat,
            }),
            trace: vec![(eta_hat, ell_hat)],
            monotone: true,
        };
    }

    let mut trace = vec![(eta_hat, ell_hat)];
    let mut inside = ProfilePoint {
        x: x_hat.to_vec(),
        ell: ell_hat,
        eta: eta_hat,
    };

    // expansion: march outward until the profile drops below k or the box ends
    let mut step = cfg.init_step;
    let mut outside_eta: Option<f64> = None;
    for _ in 0..200 {
        let mut cand = inside.eta + sign * step;
        let mut at_cap = false;
        if sign * (cand - cap) >= 0.0 {
            cand = cap;
            at_cap = true;
        }
        match profile_max(fns, &inside.x, cand, cfg) {
            Some(p) => {
                trace.push((p.eta, p.ell));
                if p.ell >= cfg.k {
                    inside = p;
                    if at_cap {
                        return finish(SideOutcome::AtBoundary(inside), trace, eta_hat);
                    }
                } else {
                    outside_eta = Some(p.eta);
                    break;
                }
            }
            None => {
                // target unreachable: the feasible set ended before cand
                outside_eta = Some(cand);
                break;
            }
        }
        step *= 2.0;
    }
    let mut outside_eta = match outside_eta {
        Some(e) => e,
        None => {
            return finish(
                SideOutcome::Failed("expansion failed to bracket the level crossing".into()),
                trace,
                eta_hat,
            )
        }
    };

    // bisection on eta against the profile value
    for _ in 0..300 {
        let mid = 0.5 * (inside.eta + outside_eta);
        if (outside_eta - inside.eta).abs() <= 1e-12 * (1.0 + inside.eta.abs()) {
            break;
        }
        match profile_max(fns, &inside.x, mid, cfg) {
            Some(p) => {
                trace.push((p.eta, p.ell));
                if (p.ell - cfg.k).abs() <= cfg.tol_ell {
                    return finish(SideOutcome::Crossed(p), trace, eta_hat);
                }
                if p.ell >= cfg.k {
                    inside = p;
                } else {
                    outside_eta = mid;
                }
            }
            None => outside_eta = mid,
        }
    }
    // the bracket collapsed without meeting tol_ell; report the best feasible
    // witness (its ell-residual is recorded in the trace)
    finish(SideOutcome::Crossed(inside), trace, eta_hat)
}

fn finish(outcome: SideOutcome, trace: Vec<(f64, f64)>, eta_hat: f64) -> SideResult {
    let monotone = check_monotone(&trace, eta_hat);
    SideResult {
        outcome,
        trace,
        monotone,
    }
}

/// Profile values should not increase as eta moves away from the estimate.
fn check_monotone(trace: &[(f64, f64)], eta_hat: f64) -> bool {
    let mut pts: Vec<(f64, f64)> = trace
        .iter()
        .map(|&(e, l)| ((e - eta_hat).abs(), l))
        .collect();
    pts.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let slack = 1e-6;
    pts.windows(2).all(|w| w[1].1 <= w[0].1 + slack)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Gaussian intercept-only log-likelihood with known sigma: quadratic in
    /// the single parameter, so the level set is an exact interval.
    fn quad_loglik(n: f64, ybar: f64, sigma: f64) -> impl Fn(&[f64]) -> f64 {
        move |x: &[f64]| -0.5 * n * (x[0] - ybar) * (x[0] - ybar) / (sigma * sigma)
    }

    #[test]
    fn one_parameter_interval_is_exact() {
        let (n, ybar, sigma) = (25.0, 3.0, 2.0);
        let ll = quad_loglik(n, ybar, sigma);
        let eta = |x: &[f64]| x[0];
        let fns = LevelSetFns {
            loglik: &ll,
            eta: &eta,
        };
        // k = -1.92073 (the 95% cutoff); crossing at ybar +/- sqrt(2*1.92073/n)*sigma
        let half = 1.9207293f64;
        let cfg = LevelSetConfig::new(-half, (ybar - 100.0, ybar + 100.0));
        let want = (2.0 * half / n).sqrt() * sigma;
        for side in [Side::Lower, Side::Upper] {
            let r = endpoint_search(&fns, &[ybar], 0.0, side, &cfg);
            match r.outcome {
                SideOutcome::Crossed(p) => {
                    let dist = (p.eta - ybar).abs();
                    assert!(
                        (dist - want).abs() < 1e-4,
                        "{side:?}: dist {dist} want {want}"
                    );
                    assert!((p.ell + half).abs() <= 5e-7);
                }
                other => panic!("unexpected outcome {other:?}"),
            }
            assert!(r.monotone);
        }
    }

    #[test]
    fn degenerate_cutoff_collapses_to_estimate() {
        let ll = quad_loglik(10.0, 1.0, 1.0);
        let eta = |x: &[f64]| x[0];
        let fns = LevelSetFns {
            loglik: &ll,
            eta: &eta,
        };
        let cfg = LevelSetConfig::new(-1e-9, (-100.0, 100.0));
        let r = endpoint_search(&fns, &[1.0], 0.0, Side::Upper, &cfg);
        assert!(matches!(r.outcome, SideOutcome::Degenerate));
    }

    #[test]
    fn boundary_is_reported_when_profile_never_crosses() {
        // flat likelihood: profile never drops below k
        let ll = |_: &[f64]| 0.0;
        let eta = |x: &[f64]| x[0];
        let fns = LevelSetFns {
            loglik: &ll,
            eta: &eta,
        };
        let cfg = LevelSetConfig::new(-2.0, (-4.0, 4.0));
        let r = endpoint_search(&fns, &[0.0], 0.0, Side::Upper, &cfg);
        match r.outcome {
            SideOutcome::AtBoundary(p) => assert!((p.eta - 4.0).abs() < 1e-6),
            other => panic!("unexpected outcome {other:?}"),
        }
    }

    #[test]
    fn two_parameter_profile_against_dense_grid() {
        // loglik over (mu, log sigma) for a tiny sample; target = mu
        let ys = [0.4f64, 1.3, 2.2, 0.9, 1.7, 1.1];
        let ll = move |x: &[f64]| {
            let (mu, ls) = (x[0], x[1]);
            if ls.abs() > 30.0 {
                return f64::NEG_INFINITY;
            }
            let s = ls.exp();
            ys.iter()
                .map(|y| {
                    let z = (y - mu) / s;
                    -0.5 * z * z - ls - 0.9189385332046727
                })
                .sum()
        };
        let eta = |x: &[f64]| x[0];
        // locate the maximum
        let n = ys.len() as f64;
        let mu_hat = ys.iter().sum::<f64>() / n;
        let var = ys.iter().map(|y| (y - mu_hat) * (y - mu_hat)).sum::<f64>() / n;
        let x_hat = vec![mu_hat, var.sqrt().ln()];
        let ell_hat = ll(&x_hat);
        let half = 0.5 * 2.7055435;
        let fns = LevelSetFns {
            loglik: &ll,
            eta: &eta,
        };
        let cfg = LevelSetConfig::new(ell_hat - half, (mu_hat - 50.0, mu_hat + 50.0));

        // dense-grid oracle over (mu, log sigma)
        let (mut lo_or, mut hi_or) = (f64::INFINITY, f64::NEG_INFINITY);
        for i in 0..2500 {
            let mu = mu_hat - 2.5 + 5.0 * i as f64 / 2500.0;
            for j in 0..2500 {
                let ls = x_hat[1] - 2.0 + 4.0 * j as f64 / 2500.0;
                if ll(&[mu, ls]) >= ell_hat - half {
                    lo_or = lo_or.min(mu);
                    hi_or = hi_or.max(mu);
                }
            }
        }
        for (side, want) in [(Side::Lower, lo_or), (Side::Upper, hi_or)] {
            let r = endpoint_search(&fns, &x_hat, ell_hat, side, &cfg);
            match r.outcome {
                SideOutcome::Crossed(p) => {
                    assert!(
                        (p.eta - want).abs() < 3e-3,
                        "{side:?}: got {} want {want}",
                        p.eta
                    );
                }
                other => panic!("unexpected outcome {other:?}"),
            }
        }
    }
}
