//! Scalar functions of the model parameters that intervals and bands are
//! computed for.

use serde::{Deserialize, Serialize};

use crate::dist::{std_cdf_raw, std_quantile_raw};
use crate::error::{Error, Result};
use crate::model::{ModelSpec, Orientation, ParamVector};

/// A scalar function xi(theta): one of the four target functions at fixed
/// arguments, or a raw parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ScalarTarget {
    /// F_N(t; S_e): fatigue-life cdf at `t` cycles under stress `s_e`.
    LifeCdf { t: f64, s_e: f64 },
    /// t_p(S_e): fatigue-life quantile.
    LifeQuantile { p: f64, s_e: f64 },
    /// F_X(x; N_e): fatigue-strength cdf at stress `x` and `n_e` cycles.
    StrengthCdf { x: f64, n_e: f64 },
    /// x_p(N_e): fatigue-strength quantile.
    StrengthQuantile { p: f64, n_e: f64 },
    /// theta[index] on the flat (beta..., sigma) layout.
    RawParameter { index: usize },
}

/// Monotone reporting scale the interval search runs on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum EtaScale {
    /// std_quantile of a probability in (0,1).
    Probability,
    /// natural log of a positive quantity.
    Log,
    /// untransformed.
    Identity,
}

impl ScalarTarget {
    pub fn validate(&self, spec: &ModelSpec) -> Result<()> {
        let check_p = |p: f64| {
            if p > 0.0 && p < 1.0 {
                Ok(())
            } else {
                Err(Error::InvalidProbability {
                    p,
                    constraint: "0 < p < 1",
                })
            }
        };
        let check_stress = |s: f64, what: &str| {
            if s.is_finite() && spec.domain.stress.contains(s) {
                Ok(())
            } else {
                Err(Error::OutsideDomain {
                    what: what.to_string(),
                    value: s,
                    lo: spec.domain.stress.lo,
                    hi: spec.domain.stress.hi,
                })
            }
        };
        let check_cycles = |t: f64, what: &str| {
            let ok = t.is_finite()
                && t > 0.0
                && (spec.orientation == Orientation::LifeSpecified
                    || spec.domain.cycles.contains(t));
            if ok {
                Ok(())
            } else {
                Err(Error::OutsideDomain {
                    what: what.to_string(),
                    value: t,
                    lo: spec.domain.cycles.lo,
                    hi: spec.domain.cycles.hi,
                })
            }
        };
        match *self {
            ScalarTarget::LifeCdf { t, s_e } => {
                check_cycles(t, "t")?;
                check_stress(s_e, "S_e")
            }
            ScalarTarget::LifeQuantile { p, s_e } => {
                check_p(p)?;
                check_stress(s_e, "S_e")
            }
            ScalarTarget::StrengthCdf { x, n_e } => {
                check_stress(x, "x")?;
                check_cycles(n_e, "N_e")
            }
            ScalarTarget::StrengthQuantile { p, n_e } => {
                check_p(p)?;
                check_cycles(n_e, "N_e")
            }
            ScalarTarget::RawParameter { index } => {
                if index < spec.n_params() {
                    Ok(())
                } else {
                    Err(Error::Precondition(format!(
                        "parameter index {index} out of range for a {}-parameter model",
                        spec.n_params()
                    )))
                }
            }
        }
    }

    /// Evaluate xi(theta).
    pub fn evaluate(&self, spec: &ModelSpec, theta: &ParamVector) -> Result<f64> {
        match *self {
            ScalarTarget::LifeCdf { t, s_e } => spec.life_cdf(theta, t, s_e),
            ScalarTarget::LifeQuantile { p, s_e } => spec.life_quantile(theta, p, s_e),
            ScalarTarget::StrengthCdf { x, n_e } => spec.strength_cdf(theta, x, n_e),
            ScalarTarget::StrengthQuantile { p, n_e } => spec.strength_quantile(theta, p, n_e),
            ScalarTarget::RawParameter { index } => {
                if index < theta.beta.len() {
                    Ok(theta.beta[index])
                } else if index == theta.beta.len() {
                    Ok(theta.sigma)
                } else {
                    Err(Error::Precondition(format!(
                        "parameter index {index} out of range"
                    )))
                }
            }
        }
    }

    pub(crate) fn eta_scale(&self, spec: &ModelSpec) -> EtaScale {
        match *self {
            ScalarTarget::LifeCdf { .. } | ScalarTarget::StrengthCdf { .. } => {
                EtaScale::Probability
            }
            ScalarTarget::LifeQuantile { .. } | ScalarTarget::StrengthQuantile { .. } => {
                EtaScale::Log
            }
            ScalarTarget::RawParameter { index } => {
                if index == spec.n_params() - 1 {
                    EtaScale::Log // sigma
                } else {
                    EtaScale::Identity
                }
            }
        }
    }

    pub(crate) fn eta_of_value(&self, spec: &ModelSpec, v: f64) -> f64 {
        match self.eta_scale(spec) {
            EtaScale::Probability => {
                if v > 0.0 && v < 1.0 {
                    std_quantile_raw(spec.error_family, v)
                } else {
                    f64::NAN
                }
            }
            EtaScale::Log => {
                if v > 0.0 {
                    v.ln()
                } else {
                    f64::NAN
                }
            }
            EtaScale::Identity => v,
        }
    }

    pub(crate) fn value_of_eta(&self, spec: &ModelSpec, eta: f64) -> f64 {
        match self.eta_scale(spec) {
            EtaScale::Probability => std_cdf_raw(spec.error_family, eta),
            EtaScale::Log => eta.exp(),
            EtaScale::Identity => eta,
        }
    }

    /// Transformed target value at theta; NaN when not evaluable there.
    pub(crate) fn eta_of_theta(&self, spec: &ModelSpec, theta: &ParamVector) -> f64 {
        match self.evaluate(spec, theta) {
            Ok(v) => self.eta_of_value(spec, v),
            Err(_) => f64::NAN,
        }
    }

    /// Search box on the eta scale; endpoints past it become boundary
    /// markers. The box reflects the parameter-space and working-domain
    /// boundaries the target value cannot escape.
    pub(crate) fn eta_caps(&self, spec: &ModelSpec, eta_hat: f64) -> (f64, f64) {
        const P_LO: f64 = 1e-300;
        const P_HI: f64 = 1.0 - 1e-16;
        match *self {
            ScalarTarget::LifeCdf { .. } | ScalarTarget::StrengthCdf { .. } => (
                std_quantile_raw(spec.error_family, P_LO),
                std_quantile_raw(spec.error_family, P_HI),
            ),
            ScalarTarget::LifeQuantile { .. } => match spec.orientation {
                Orientation::LifeSpecified => ((eta_hat - 400.0).max(-690.0), (eta_hat + 400.0).min(690.0)),
                Orientation::StrengthSpecified => {
                    (spec.domain.cycles.lo.ln(), spec.domain.cycles.hi.ln())
                }
            },
            ScalarTarget::StrengthQuantile { .. } => match spec.orientation {
                Orientation::LifeSpecified => {
                    (spec.domain.stress.lo.ln(), spec.domain.stress.hi.ln())
                }
                Orientation::StrengthSpecified => ((eta_hat - 400.0).max(-690.0), (eta_hat + 400.0).min(690.0)),
            },
            ScalarTarget::RawParameter { index } => {
                if index == spec.n_params() - 1 {
                    (-30.0, 30.0) // log sigma box
                } else {
                    (eta_hat - 1.0e4, eta_hat + 1.0e4)
                }
            }
        }
    }

    pub fn describe(&self) -> String {
        match *self {
            ScalarTarget::LifeCdf { t, s_e } => format!("F_N({t}; {s_e})"),
            ScalarTarget::LifeQuantile { p, s_e } => format!("t_{p}({s_e})"),
            ScalarTarget::StrengthCdf { x, n_e } => format!("F_X({x}; {n_e})"),
            ScalarTarget::StrengthQuantile { p, n_e } => format!("x_{p}({n_e})"),
            ScalarTarget::RawParameter { index } => format!("theta[{index}]"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::CurveFamily;
    use crate::dist::ErrorFamily;
    use crate::model::{Domain, Span};

    fn spec() -> ModelSpec {
        ModelSpec::new(
            Orientation::LifeSpecified,
            ErrorFamily::Normal,
            CurveFamily::Loglinear,
            Domain {
                stress: Span { lo: 1.0, hi: 100.0 },
                cycles: Span { lo: 1.0, hi: 1e9 },
            },
        )
        .unwrap()
    }

    #[test]
    fn validation_catches_bad_fixed_args() {
        let s = spec();
        assert!(ScalarTarget::LifeQuantile { p: 0.0, s_e: 10.0 }.validate(&s).is_err());
        assert!(ScalarTarget::LifeQuantile { p: 0.5, s_e: 500.0 }.validate(&s).is_err());
        assert!(ScalarTarget::LifeCdf { t: -1.0, s_e: 10.0 }.validate(&s).is_err());
        assert!(ScalarTarget::RawParameter { index: 3 }.validate(&s).is_err());
        assert!(ScalarTarget::RawParameter { index: 2 }.validate(&s).is_ok());
    }

    #[test]
    fn eta_round_trip() {
        let s = spec();
        let theta = ParamVector::new(vec![10.0, -2.0], 0.5);
        for target in [
            ScalarTarget::LifeCdf { t: 2000.0, s_e: 10.0 },
            ScalarTarget::LifeQuantile { p: 0.1, s_e: 10.0 },
            ScalarTarget::StrengthCdf { x: 10.0, n_e: 2000.0 },
            ScalarTarget::StrengthQuantile { p: 0.1, n_e: 2000.0 },
            ScalarTarget::RawParameter { index: 1 },
            ScalarTarget::RawParameter { index: 2 },
        ] {
            let v = target.evaluate(&s, &theta).unwrap();
            let eta = target.eta_of_value(&s, v);
            let back = target.value_of_eta(&s, eta);
            assert!(
                (back - v).abs() <= 1e-10 * v.abs().max(1.0),
                "{target:?}: {v} vs {back}"
            );
            assert!((target.eta_of_theta(&s, &theta) - eta).abs() < 1e-12);
        }
    }

    #[test]
    fn serde_shape() {
        let t = ScalarTarget::LifeQuantile { p: 0.1, s_e: 20.0 };
        let v = serde_json::to_value(t).unwrap();
        assert_eq!(v["kind"], "life-quantile");
        assert_eq!(v["p"], 0.1);
        assert_eq!(v["s_e"], 20.0);
        let back: ScalarTarget = serde_json::from_value(v).unwrap();
        assert_eq!(back, t);
    }
}
