//! The two modeling orientations and their four target functions.
//!
//! Life-specified: log(N) = log g(S; beta) + sigma_N * eps, so fatigue life at
//! stress S_e is log-location-scale and the fatigue-strength distribution at
//! N_e cycles is induced through the curve inverse.
//!
//! Strength-specified: log(X) = log h(N_e; beta) + sigma_X * eps, so fatigue
//! strength is log-location-scale and the fatigue-life distribution is
//! induced. The induced cdf is not log-location-scale unless the curve is
//! loglinear.

use serde::{Deserialize, Serialize};

use crate::curve::{invert_curve, CurveFamily};
use crate::dist::{
    std_cdf_raw, std_log_pdf, std_log_survival, std_quantile_raw, ErrorFamily,
};
use crate::error::{Error, Result};

/// Closed positive interval, serialized as `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "(f64, f64)", into = "(f64, f64)")]
pub struct Span {
    pub lo: f64,
    pub hi: f64,
}

impl From<(f64, f64)> for Span {
    fn from((lo, hi): (f64, f64)) -> Self {
        Span { lo, hi }
    }
}

impl From<Span> for (f64, f64) {
    fn from(s: Span) -> Self {
        (s.lo, s.hi)
    }
}

impl Span {
    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }

    fn validate(&self, what: &str) -> Result<()> {
        if !(self.lo.is_finite() && self.hi.is_finite() && self.lo > 0.0 && self.lo < self.hi) {
            return Err(Error::InvalidSpec(format!(
                "{what} domain must satisfy 0 < lo < hi, got [{}, {}]",
                self.lo, self.hi
            )));
        }
        Ok(())
    }
}

/// Working domain of the model: evaluations outside it are errors, never
/// extrapolations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    pub stress: Span,
    pub cycles: Span,
}

/// Which random variable the regression model describes directly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Orientation {
    LifeSpecified,
    StrengthSpecified,
}

/// Full model specification: orientation, error family, curve family, and
/// working domain. The parameter vector lives separately in [`ParamVector`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub orientation: Orientation,
    pub error_family: ErrorFamily,
    pub curve: CurveFamily,
    pub domain: Domain,
}

/// Regression coefficients plus the positive scale parameter; the flat layout
/// is (beta..., sigma).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamVector {
    pub beta: Vec<f64>,
    pub sigma: f64,
}

impl ParamVector {
    pub fn new(beta: Vec<f64>, sigma: f64) -> Self {
        ParamVector { beta, sigma }
    }

    pub fn dim(&self) -> usize {
        self.beta.len() + 1
    }

    pub fn flat(&self) -> Vec<f64> {
        let mut v = self.beta.clone();
        v.push(self.sigma);
        v
    }

    pub fn from_flat(flat: &[f64]) -> Self {
        let (beta, sigma) = flat.split_at(flat.len() - 1);
        ParamVector {
            beta: beta.to_vec(),
            sigma: sigma[0],
        }
    }
}

impl ModelSpec {
    pub fn new(
        orientation: Orientation,
        error_family: ErrorFamily,
        curve: CurveFamily,
        domain: Domain,
    ) -> Result<Self> {
        domain.stress.validate("stress")?;
        domain.cycles.validate("cycles")?;
        Ok(ModelSpec {
            orientation,
            error_family,
            curve,
            domain,
        })
    }

    /// Number of parameters: curve coefficients plus sigma.
    pub fn n_params(&self) -> usize {
        self.curve.coefficient_count() + 1
    }

    /// Working domain of the curve argument: stress for a life-specified
    /// model, cycles for a strength-specified one.
    pub fn regressor_domain(&self) -> Span {
        match self.orientation {
            Orientation::LifeSpecified => self.domain.stress,
            Orientation::StrengthSpecified => self.domain.cycles,
        }
    }

    /// Full admissibility of a parameter vector: dimension, positive finite
    /// sigma, and a strictly decreasing curve over the working domain.
    pub fn validate_theta(&self, theta: &ParamVector) -> Result<()> {
        if theta.beta.len() != self.curve.coefficient_count() {
            return Err(Error::ParamLength {
                got: theta.beta.len(),
                want: self.curve.coefficient_count(),
            });
        }
        if !(theta.sigma.is_finite() && theta.sigma > 0.0) {
            return Err(Error::NonPositiveSigma(theta.sigma));
        }
        if theta.beta.iter().any(|b| !b.is_finite()) {
            return Err(Error::NonFinite {
                what: "beta",
                value: f64::NAN,
            });
        }
        if !self.curve.is_decreasing_on(&theta.beta, self.regressor_domain()) {
            return Err(Error::NotMonotone);
        }
        Ok(())
    }

    /// Non-erroring admissibility probe used on optimizer trial points.
    pub(crate) fn theta_admissible(&self, beta: &[f64], sigma: f64) -> bool {
        sigma.is_finite()
            && sigma > 0.0
            && beta.len() == self.curve.coefficient_count()
            && beta.iter().all(|b| b.is_finite())
            && self.curve.is_decreasing_on(beta, self.regressor_domain())
    }

    fn check_stress(&self, s: f64, what: &str) -> Result<()> {
        if !s.is_finite() || !self.domain.stress.contains(s) {
            return Err(Error::OutsideDomain {
                what: what.to_string(),
                value: s,
                lo: self.domain.stress.lo,
                hi: self.domain.stress.hi,
            });
        }
        Ok(())
    }

    fn check_cycles_positive(t: f64) -> Result<()> {
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::OutsideDomain {
                what: "cycles".to_string(),
                value: t,
                lo: 0.0,
                hi: f64::INFINITY,
            });
        }
        Ok(())
    }

    /// Cycles values a strength-specified model can evaluate its curve at.
    fn check_cycles_domain(&self, t: f64, what: &str) -> Result<()> {
        Self::check_cycles_positive(t)?;
        if self.orientation == Orientation::StrengthSpecified && !self.domain.cycles.contains(t) {
            return Err(Error::OutsideDomain {
                what: what.to_string(),
                value: t,
                lo: self.domain.cycles.lo,
                hi: self.domain.cycles.hi,
            });
        }
        Ok(())
    }

    fn check_probability(p: f64) -> Result<()> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::InvalidProbability {
                p,
                constraint: "0 < p < 1",
            });
        }
        Ok(())
    }

    /// Location of log fatigue life at stress `s_e`: log g(S_e; beta) for a
    /// life-specified model, the log cycles level solving the strength curve
    /// at `s_e` for a strength-specified one.
    pub fn life_location(&self, theta: &ParamVector, s_e: f64) -> Result<f64> {
        self.validate_theta(theta)?;
        self.check_stress(s_e, "S_e")?;
        match self.orientation {
            Orientation::LifeSpecified => Ok(self.curve.eval_log(&theta.beta, s_e.ln())),
            Orientation::StrengthSpecified => {
                let t = invert_curve(self.curve, &theta.beta, s_e.ln(), self.domain.cycles)?;
                Ok(t.ln())
            }
        }
    }

    /// Standardized score of the fatigue-life cdf at (t, s_e).
    #[inline]
    pub(crate) fn life_z(&self, theta: &ParamVector, t: f64, s_e: f64) -> f64 {
        match self.orientation {
            Orientation::LifeSpecified => {
                (t.ln() - self.curve.eval_log(&theta.beta, s_e.ln())) / theta.sigma
            }
            Orientation::StrengthSpecified => {
                (s_e.ln() - self.curve.eval_log(&theta.beta, t.ln())) / theta.sigma
            }
        }
    }

    /// Fatigue-life cdf F_N(t; S_e).
    pub fn life_cdf(&self, theta: &ParamVector, t: f64, s_e: f64) -> Result<f64> {
        self.validate_theta(theta)?;
        self.check_stress(s_e, "S_e")?;
        self.check_cycles_domain(t, "t")?;
        Ok(std_cdf_raw(self.error_family, self.life_z(theta, t, s_e)))
    }

    /// Fatigue-life quantile t_p(S_e).
    pub fn life_quantile(&self, theta: &ParamVector, p: f64, s_e: f64) -> Result<f64> {
        self.validate_theta(theta)?;
        Self::check_probability(p)?;
        self.check_stress(s_e, "S_e")?;
        let zp = std_quantile_raw(self.error_family, p);
        match self.orientation {
            Orientation::LifeSpecified => {
                Ok((self.curve.eval_log(&theta.beta, s_e.ln()) + zp * theta.sigma).exp())
            }
            Orientation::StrengthSpecified => {
                // t solves log h(t) = log S_e - z_p * sigma_X
                invert_curve(
                    self.curve,
                    &theta.beta,
                    s_e.ln() - zp * theta.sigma,
                    self.domain.cycles,
                )
            }
        }
    }

    /// Fatigue-life density f_N(t; S_e).
    pub fn life_pdf(&self, theta: &ParamVector, t: f64, s_e: f64) -> Result<f64> {
        self.validate_theta(theta)?;
        self.check_stress(s_e, "S_e")?;
        self.check_cycles_domain(t, "t")?;
        Ok(self.life_log_pdf_raw(theta, t, s_e).exp())
    }

    /// log f_N(t; S_e); -inf when the density is zero.
    #[inline]
    pub(crate) fn life_log_pdf_raw(&self, theta: &ParamVector, t: f64, s_e: f64) -> f64 {
        let z = self.life_z(theta, t, s_e);
        match self.orientation {
            Orientation::LifeSpecified => {
                std_log_pdf(self.error_family, z) - theta.sigma.ln() - t.ln()
            }
            Orientation::StrengthSpecified => {
                // dF/dt = pdf(z) * (-dlog h/du) / (sigma_X * t)
                let slope = self.curve.slope_log(&theta.beta, t.ln());
                std_log_pdf(self.error_family, z) + (-slope).ln() - theta.sigma.ln() - t.ln()
            }
        }
    }

    /// log survival of fatigue life at (t, s_e); the censored-likelihood term.
    #[inline]
    pub(crate) fn life_log_survival_raw(&self, theta: &ParamVector, t: f64, s_e: f64) -> f64 {
        std_log_survival(self.error_family, self.life_z(theta, t, s_e))
    }

    /// Fatigue-strength cdf F_X(x; N_e).
    pub fn strength_cdf(&self, theta: &ParamVector, x: f64, n_e: f64) -> Result<f64> {
        self.validate_theta(theta)?;
        self.check_stress(x, "x")?;
        self.check_cycles_domain(n_e, "N_e")?;
        let z = match self.orientation {
            Orientation::LifeSpecified => {
                (n_e.ln() - self.curve.eval_log(&theta.beta, x.ln())) / theta.sigma
            }
            Orientation::StrengthSpecified => {
                (x.ln() - self.curve.eval_log(&theta.beta, n_e.ln())) / theta.sigma
            }
        };
        Ok(std_cdf_raw(self.error_family, z))
    }

    /// Fatigue-strength quantile x_p(N_e).
    pub fn strength_quantile(&self, theta: &ParamVector, p: f64, n_e: f64) -> Result<f64> {
        self.validate_theta(theta)?;
        Self::check_probability(p)?;
        self.check_cycles_domain(n_e, "N_e")?;
        let zp = std_quantile_raw(self.error_family, p);
        match self.orientation {
            Orientation::LifeSpecified => {
                // x solves log g(x) = log N_e - z_p * sigma_N
                invert_curve(
                    self.curve,
                    &theta.beta,
                    n_e.ln() - zp * theta.sigma,
                    self.domain.stress,
                )
            }
            Orientation::StrengthSpecified => {
                Ok((self.curve.eval_log(&theta.beta, n_e.ln()) + zp * theta.sigma).exp())
            }
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let spec: ModelSpec = serde_json::from_str(s)?;
        spec.domain.stress.validate("stress")?;
        spec.domain.cycles.validate("cycles")?;
        Ok(spec)
    }
}

/// Map a loglinear life-specified parameterization onto the strength-specified
/// parameterization describing the same joint model: log h(t) = (b0 - log t)/
/// (-b1) and sigma_X = sigma_N / |b1|. Exact only for loglinear curves.
pub fn map_life_to_strength_loglinear(theta: &ParamVector) -> ParamVector {
    let b0 = theta.beta[0];
    let b1 = theta.beta[1];
    ParamVector::new(vec![-b0 / b1, 1.0 / b1], -theta.sigma / b1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    fn life_spec(fam: ErrorFamily, curve: CurveFamily) -> ModelSpec {
        ModelSpec::new(
            Orientation::LifeSpecified,
            fam,
            curve,
            Domain {
                stress: Span { lo: 0.5, hi: 50.0 },
                cycles: Span {
                    lo: 1.0,
                    hi: 1.0e9,
                },
            },
        )
        .unwrap()
    }

    fn strength_spec(fam: ErrorFamily, curve: CurveFamily) -> ModelSpec {
        ModelSpec::new(
            Orientation::StrengthSpecified,
            fam,
            curve,
            Domain {
                stress: Span { lo: 0.5, hi: 50.0 },
                cycles: Span {
                    lo: 1.0,
                    hi: 1.0e9,
                },
            },
        )
        .unwrap()
    }

    #[test]
    fn life_location_loglinear_and_logquadratic() {
        let spec = life_spec(ErrorFamily::Normal, CurveFamily::Loglinear);
        let theta = ParamVector::new(vec![10.0, -2.0], 0.5);
        assert!((spec.life_location(&theta, E).unwrap() - 8.0).abs() < 1e-12);
        assert!((spec.life_location(&theta, 1.0).unwrap() - 10.0).abs() < 1e-12);

        let spec = life_spec(ErrorFamily::Normal, CurveFamily::Logquadratic);
        let theta = ParamVector::new(vec![10.0, -2.0, -0.1], 0.5);
        assert!((spec.life_location(&theta, E).unwrap() - 7.9).abs() < 1e-12);
    }

    #[test]
    fn life_location_rejects_out_of_domain_stress() {
        let spec = life_spec(ErrorFamily::Normal, CurveFamily::Loglinear);
        let theta = ParamVector::new(vec![10.0, -2.0], 0.5);
        assert!(matches!(
            spec.life_location(&theta, 100.0),
            Err(Error::OutsideDomain { .. })
        ));
    }

    #[test]
    fn life_cdf_lognormal_cases() {
        let spec = life_spec(ErrorFamily::Normal, CurveFamily::Loglinear);
        let theta = ParamVector::new(vec![10.0, -2.0], 0.5);
        let median = spec.life_cdf(&theta, 8.0f64.exp(), E).unwrap();
        assert!((median - 0.5).abs() < 1e-12);
        let one_sigma = spec.life_cdf(&theta, 8.5f64.exp(), E).unwrap();
        assert!((one_sigma - 0.8413447).abs() < 1e-7);
        assert!(spec.life_cdf(&theta, -1.0, E).is_err());
    }

    #[test]
    fn life_cdf_strength_specified_median_case() {
        let spec = strength_spec(ErrorFamily::Normal, CurveFamily::Loglinear);
        let theta = ParamVector::new(vec![15.0, -3.0], 0.2);
        // log h(t) = 1 at t = exp(14/3); S_e = e puts the score at zero
        let t = (14.0f64 / 3.0).exp();
        assert!((spec.life_cdf(&theta, t, E).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn life_quantile_cases() {
        let spec = life_spec(ErrorFamily::Normal, CurveFamily::Loglinear);
        let theta = ParamVector::new(vec![10.0, -2.0], 0.5);
        let med = spec.life_quantile(&theta, 0.5, E).unwrap();
        assert!((med / 8.0f64.exp() - 1.0).abs() < 1e-3);
        let q = spec.life_quantile(&theta, 0.8413447, E).unwrap();
        assert!((q / 8.5f64.exp() - 1.0).abs() < 1e-3);

        let spec = life_spec(ErrorFamily::SmallestExtremeValue, CurveFamily::Loglinear);
        let q = spec.life_quantile(&theta, 0.6321206, E).unwrap();
        assert!((q / 8.0f64.exp() - 1.0).abs() < 1e-3);
    }

    #[test]
    fn strength_cdf_induced_cases() {
        let spec = life_spec(ErrorFamily::Normal, CurveFamily::Loglinear);
        let theta = ParamVector::new(vec![15.0, -3.0], 0.6);
        let n_e = 12.0f64.exp();
        assert!((spec.strength_cdf(&theta, E, n_e).unwrap() - 0.5).abs() < 1e-12);
        let p = spec.strength_cdf(&theta, 0.8f64.exp(), n_e).unwrap();
        assert!((p - 0.1586553).abs() < 1e-7);
    }

    #[test]
    fn strength_cdf_strength_specified_location_case() {
        let spec = strength_spec(ErrorFamily::Normal, CurveFamily::Loglinear);
        let theta = ParamVector::new(vec![2.0, -0.25], 0.1);
        let n_e = 100.0f64;
        let x = (2.0 - 0.25 * n_e.ln()).exp();
        assert!((spec.strength_cdf(&theta, x, n_e).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn strength_quantile_induced_cases() {
        let spec = life_spec(ErrorFamily::Normal, CurveFamily::Loglinear);
        let theta = ParamVector::new(vec![15.0, -3.0], 0.6);
        let n_e = 12.0f64.exp();
        let med = spec.strength_quantile(&theta, 0.5, n_e).unwrap();
        assert!((med - E).abs() < 1e-6);
        let q = spec.strength_quantile(&theta, 0.1586553, n_e).unwrap();
        assert!((q - 0.8f64.exp()).abs() < 1e-5);
    }

    #[test]
    fn strength_quantile_matches_bisection_of_strength_cdf() {
        // oracle: bisection on strength_cdf over the stress domain
        let spec = life_spec(ErrorFamily::Normal, CurveFamily::Loglinear);
        let theta = ParamVector::new(vec![15.0, -3.0], 0.6);
        let n_e = 12.0f64.exp();
        for &p in &[0.05, 0.3, 0.7, 0.95] {
            let want = {
                let (mut lo, mut hi) = (spec.domain.stress.lo, spec.domain.stress.hi);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if spec.strength_cdf(&theta, mid, n_e).unwrap() < p {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                0.5 * (lo + hi)
            };
            let got = spec.strength_quantile(&theta, p, n_e).unwrap();
            assert!((got / want - 1.0).abs() < 1e-8, "p={p}: {got} vs {want}");
            // closed form for the loglinear induced quantile
            let zp = std_quantile_raw(ErrorFamily::Normal, p);
            let closed = ((15.0 - n_e.ln() + zp * 0.6) / 3.0).exp();
            assert!((got / closed - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn life_pdf_standard_mode_case_and_quadrature() {
        let spec = life_spec(ErrorFamily::Normal, CurveFamily::Loglinear);
        let theta = ParamVector::new(vec![10.0, -2.0], 0.5);
        let t = 8.0f64.exp();
        let got = spec.life_pdf(&theta, t, E).unwrap();
        assert!((got - 0.3989423 / (0.5 * t)).abs() < 1e-7 * got);

        // quadrature oracle: integral of the pdf up to t_q recovers q
        let q = 0.9;
        let tq = spec.life_quantile(&theta, q, E).unwrap();
        let lo = spec.life_quantile(&theta, 1e-9, E).unwrap();
        let n = 20_000;
        let (a, b) = (lo.ln(), tq.ln());
        let h = (b - a) / n as f64;
        let f = |u: f64| {
            let t = u.exp();
            spec.life_pdf(&theta, t, E).unwrap() * t
        };
        let mut acc = f(a) + f(b);
        for i in 1..n {
            acc += f(a + h * i as f64) * if i % 2 == 0 { 2.0 } else { 4.0 };
        }
        let integral = acc * h / 3.0;
        assert!((integral - q).abs() < 1e-6, "integral {integral}");
    }

    #[test]
    fn life_pdf_matches_finite_difference_strength_specified() {
        let spec = strength_spec(ErrorFamily::Normal, CurveFamily::Loglinear);
        let theta = ParamVector::new(vec![2.0, -0.25], 0.1);
        let t = 10.0f64.exp();
        let s_e = (-0.3f64).exp();
        let h = t * 1e-6;
        let fd = (spec.life_cdf(&theta, t + h, s_e).unwrap()
            - spec.life_cdf(&theta, t - h, s_e).unwrap())
            / (2.0 * h);
        let pdf = spec.life_pdf(&theta, t, s_e).unwrap();
        assert!((pdf / fd - 1.0).abs() < 1e-6, "pdf {pdf} fd {fd}");
    }

    #[test]
    fn round_trip_all_families_and_orientations() {
        for fam in ErrorFamily::ALL {
            for curve in [CurveFamily::Loglinear, CurveFamily::Logquadratic] {
                let beta = match curve {
                    CurveFamily::Loglinear => vec![10.0, -2.0],
                    CurveFamily::Logquadratic => vec![10.0, -2.0, -0.1],
                };
                let theta = ParamVector::new(beta, 0.4);
                let spec = life_spec(fam, curve);
                for i in 1..10 {
                    let p = i as f64 / 10.0;
                    let t = spec.life_quantile(&theta, p, 2.0).unwrap();
                    assert!((spec.life_cdf(&theta, t, 2.0).unwrap() - p).abs() < 1e-8);
                    let n_e = 2000.0;
                    if let Ok(x) = spec.strength_quantile(&theta, p, n_e) {
                        assert!((spec.strength_cdf(&theta, x, n_e).unwrap() - p).abs() < 1e-8);
                    }
                }
                let spec = strength_spec(fam, curve);
                let theta = ParamVector::new(
                    match curve {
                        CurveFamily::Loglinear => vec![4.0, -0.4],
                        CurveFamily::Logquadratic => vec![4.0, -0.3, -0.005],
                    },
                    0.1,
                );
                for i in 1..10 {
                    let p = i as f64 / 10.0;
                    let n_e = 5000.0;
                    let x = spec.strength_quantile(&theta, p, n_e).unwrap();
                    assert!((spec.strength_cdf(&theta, x, n_e).unwrap() - p).abs() < 1e-8);
                    let s_e = 1.5;
                    if let Ok(t) = spec.life_quantile(&theta, p, s_e) {
                        assert!((spec.life_cdf(&theta, t, s_e).unwrap() - p).abs() < 1e-8);
                    }
                }
            }
        }
    }

    #[test]
    fn orientation_equivalence_loglinear() {
        // a loglinear life model and its mapped strength model agree pointwise
        for fam in ErrorFamily::ALL {
            let life = life_spec(fam, CurveFamily::Loglinear);
            let strength = strength_spec(fam, CurveFamily::Loglinear);
            let theta_n = ParamVector::new(vec![10.0, -2.0], 0.5);
            let theta_x = map_life_to_strength_loglinear(&theta_n);
            for &(t, s) in &[(2000.0, 2.0), (500.0, 4.0), (8000.0, 1.2)] {
                let a = life.life_cdf(&theta_n, t, s).unwrap();
                let b = strength.life_cdf(&theta_x, t, s).unwrap();
                assert!((a - b).abs() < 1e-10, "{fam:?} cdf {a} vs {b}");
            }
            for &p in &[0.05, 0.5, 0.9] {
                let a = life.life_quantile(&theta_n, p, 2.0).unwrap();
                let b = strength.life_quantile(&theta_x, p, 2.0).unwrap();
                assert!((a / b - 1.0).abs() < 1e-8, "{fam:?} qf {a} vs {b}");
                let a = life.strength_quantile(&theta_n, p, 3000.0).unwrap();
                let b = strength.strength_quantile(&theta_x, p, 3000.0).unwrap();
                assert!((a / b - 1.0).abs() < 1e-8, "{fam:?} xqf {a} vs {b}");
                let a = life.strength_cdf(&theta_n, 2.5, 3000.0).unwrap();
                let b = strength.strength_cdf(&theta_x, 2.5, 3000.0).unwrap();
                assert!((a - b).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn quantile_curves_coincide_across_random_variables() {
        // (S_e, t_p(S_e)) lies on the strength p-quantile curve
        for fam in ErrorFamily::ALL {
            for (curve, beta) in [
                (CurveFamily::Loglinear, vec![10.0, -2.0]),
                (CurveFamily::Logquadratic, vec![10.0, -2.0, -0.1]),
            ] {
                let spec = life_spec(fam, curve);
                let theta = ParamVector::new(beta, 0.4);
                for &p in &[0.01, 0.1, 0.5, 0.9] {
                    for i in 0..8 {
                        let s_e = 1.0 + i as f64 * 2.0;
                        let t_p = spec.life_quantile(&theta, p, s_e).unwrap();
                        let back = spec.strength_quantile(&theta, p, t_p).unwrap();
                        assert!(
                            (back / s_e - 1.0).abs() < 1e-8,
                            "{fam:?} {curve:?} p={p} S={s_e}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn loglinear_induced_strength_matches_closed_form_shape() {
        let spec = life_spec(ErrorFamily::Normal, CurveFamily::Loglinear);
        let theta = ParamVector::new(vec![12.0, -2.5], 0.5);
        let shape = 0.5 / 2.5;
        let n_e = 900.0f64;
        let mu_x = (n_e.ln() - 12.0) / -2.5;
        for i in 1..20 {
            let p = i as f64 / 20.0;
            let zp = std_quantile_raw(ErrorFamily::Normal, p);
            let closed = (mu_x + zp * shape).exp();
            let got = spec.strength_quantile(&theta, p, n_e).unwrap();
            assert!((got / closed - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn spec_json_round_trip() {
        let spec = life_spec(ErrorFamily::SmallestExtremeValue, CurveFamily::Logquadratic);
        let json = spec.to_json().unwrap();
        let back = ModelSpec::from_json(&json).unwrap();
        assert_eq!(spec, back);
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["orientation"], "life-specified");
        assert_eq!(v["error_family"], "smallest-extreme-value");
        assert_eq!(v["curve"]["kind"], "logquadratic");
        assert_eq!(v["curve"]["beta_len"], 3);
        assert_eq!(v["domain"]["stress"][0], 0.5);
    }
}
