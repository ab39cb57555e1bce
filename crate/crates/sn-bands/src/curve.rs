//! S-N relationship families: strictly decreasing curves evaluated on the
//! log scale, with closed-form or safeguarded numeric inversion.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Span;

/// Parametric family of the (decreasing) relationship between the regressor
/// and the log response level. Both families are polynomials in the log of
/// the argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveFamily {
    /// log level = b0 + b1 * ln(arg), b1 < 0.
    Loglinear,
    /// log level = b0 + b1 * ln(arg) + b2 * ln(arg)^2, decreasing over the
    /// working domain.
    Logquadratic,
}

#[derive(Serialize, Deserialize)]
struct CurveJson {
    kind: String,
    beta_len: usize,
}

impl Serialize for CurveFamily {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CurveJson {
            kind: self.name().to_string(),
            beta_len: self.coefficient_count(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CurveFamily {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = CurveJson::deserialize(d)?;
        let fam = match raw.kind.as_str() {
            "loglinear" => CurveFamily::Loglinear,
            "logquadratic" => CurveFamily::Logquadratic,
            other => {
                return Err(serde::de::Error::custom(format!(
                    "unknown curve kind `{other}`"
                )))
            }
        };
        if raw.beta_len != fam.coefficient_count() {
            return Err(serde::de::Error::custom(format!(
                "curve `{}` needs beta_len {}, got {}",
                raw.kind,
                fam.coefficient_count(),
                raw.beta_len
            )));
        }
        Ok(fam)
    }
}

impl CurveFamily {
    pub fn coefficient_count(self) -> usize {
        match self {
            CurveFamily::Loglinear => 2,
            CurveFamily::Logquadratic => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CurveFamily::Loglinear => "loglinear",
            CurveFamily::Logquadratic => "logquadratic",
        }
    }

    /// Log level at log-argument `u`.
    #[inline]
    pub(crate) fn eval_log(self, beta: &[f64], u: f64) -> f64 {
        match self {
            CurveFamily::Loglinear => beta[0] + beta[1] * u,
            CurveFamily::Logquadratic => beta[0] + (beta[1] + beta[2] * u) * u,
        }
    }

    /// d(log level)/du at log-argument `u`.
    #[inline]
    pub(crate) fn slope_log(self, beta: &[f64], u: f64) -> f64 {
        match self {
            CurveFamily::Loglinear => beta[1],
            CurveFamily::Logquadratic => beta[1] + 2.0 * beta[2] * u,
        }
    }

    /// Strict monotone decrease over the working domain. The slope in u is
    /// linear for both families, so checking the two domain endpoints is
    /// exact.
    pub(crate) fn is_decreasing_on(self, beta: &[f64], domain: Span) -> bool {
        let (ulo, uhi) = (domain.lo.ln(), domain.hi.ln());
        self.slope_log(beta, ulo) < 0.0 && self.slope_log(beta, uhi) < 0.0
    }

    /// Attainable log-range over the working domain: (at hi, at lo) since the
    /// curve decreases.
    pub(crate) fn log_range_on(self, beta: &[f64], domain: Span) -> (f64, f64) {
        (
            self.eval_log(beta, domain.hi.ln()),
            self.eval_log(beta, domain.lo.ln()),
        )
    }
}

/// Solve log-curve(x) = target for x within the working domain. Loglinear in
/// closed form; logquadratic by bisection with Newton polish to 1e-10 in the
/// log level.
pub fn invert_curve(curve: CurveFamily, beta: &[f64], target: f64, domain: Span) -> Result<f64> {
    let (range_lo, range_hi) = curve.log_range_on(beta, domain);
    // tiny slack so round-tripped endpoints do not bounce
    let slack = 1e-12 * (1.0 + target.abs());
    if target < range_lo - slack || target > range_hi + slack {
        return Err(Error::OutsideRange {
            target,
            lo: range_lo,
            hi: range_hi,
        });
    }
    let (ulo, uhi) = (domain.lo.ln(), domain.hi.ln());
    let u = match curve {
        CurveFamily::Loglinear => ((target - beta[0]) / beta[1]).clamp(ulo, uhi),
        CurveFamily::Logquadratic => {
            // decreasing in u: f(ulo) = range_hi >= target >= range_lo = f(uhi)
            let mut a = ulo;
            let mut b = uhi;
            let mut u = 0.5 * (a + b);
            for _ in 0..200 {
                let f = curve.eval_log(beta, u) - target;
                if f.abs() <= 1e-10 {
                    break;
                }
                if f > 0.0 {
                    a = u;
                } else {
                    b = u;
                }
                let slope = curve.slope_log(beta, u);
                let newton = u - f / slope;
                u = if newton > a && newton < b {
                    newton
                } else {
                    0.5 * (a + b)
                };
            }
            u
        }
    };
    Ok(u.exp())
}
