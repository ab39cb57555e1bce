//! Standardized location-scale error distributions and the chi-square(1)
//! quantile that sets the likelihood-ratio cutoff.
//!
//! All three families are standardized to location 0 and scale 1. Tail
//! quantities are evaluated in log space so that runout-heavy likelihoods
//! never underflow.

// coefficient tables are kept verbatim at their published precision
#![allow(clippy::excessive_precision)]

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_7;
const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;
const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Standardized error distribution of the regression model. The log-life
/// (or log-strength) response is location + scale * epsilon with epsilon
/// drawn from one of these.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ErrorFamily {
    /// Gaussian errors; the response itself is lognormal.
    Normal,
    /// Smallest-extreme-value (Gumbel minimum) errors; the response is Weibull.
    SmallestExtremeValue,
    /// Logistic errors; the response is loglogistic.
    Logistic,
}

impl ErrorFamily {
    pub const ALL: [ErrorFamily; 3] = [
        ErrorFamily::Normal,
        ErrorFamily::SmallestExtremeValue,
        ErrorFamily::Logistic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ErrorFamily::Normal => "normal",
            ErrorFamily::SmallestExtremeValue => "smallest-extreme-value",
            ErrorFamily::Logistic => "logistic",
        }
    }
}

fn check_finite(what: &'static str, z: f64) -> Result<()> {
    if z.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite { what, value: z })
    }
}

fn check_open_unit(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidProbability {
            p,
            constraint: "0 < p < 1",
        })
    }
}

/// Standardized cdf.
pub fn std_cdf(family: ErrorFamily, z: f64) -> Result<f64> {
    check_finite("z", z)?;
    Ok(std_cdf_raw(family, z))
}

pub(crate) fn std_cdf_raw(family: ErrorFamily, z: f64) -> f64 {
    match family {
        ErrorFamily::Normal => normal_cdf(z),
        // 1 - exp(-exp(z)), computed as -expm1(-e^z) to keep small-p accuracy.
        ErrorFamily::SmallestExtremeValue => -f64::exp_m1(-z.exp()),
        ErrorFamily::Logistic => {
            if z >= 0.0 {
                1.0 / (1.0 + (-z).exp())
            } else {
                let e = z.exp();
                e / (1.0 + e)
            }
        }
    }
}

/// Standardized quantile (inverse cdf).
pub fn std_quantile(family: ErrorFamily, p: f64) -> Result<f64> {
    check_open_unit(p)?;
    Ok(std_quantile_raw(family, p))
}

pub(crate) fn std_quantile_raw(family: ErrorFamily, p: f64) -> f64 {
    match family {
        ErrorFamily::Normal => normal_quantile(p),
        // ln(-ln(1-p)); -ln(1-p) via ln_1p for small p, 1-p exact for p >= 0.5.
        ErrorFamily::SmallestExtremeValue => (-f64::ln_1p(-p)).ln(),
        ErrorFamily::Logistic => p.ln() - f64::ln_1p(-p),
    }
}

/// Standardized density.
pub fn std_pdf(family: ErrorFamily, z: f64) -> Result<f64> {
    check_finite("z", z)?;
    Ok(std_log_pdf(family, z).exp())
}

/// Log of the standardized density; safe deep into both tails.
pub fn std_log_pdf(family: ErrorFamily, z: f64) -> f64 {
    match family {
        ErrorFamily::Normal => -0.5 * z * z - LN_SQRT_2PI,
        ErrorFamily::SmallestExtremeValue => z - z.exp(),
        // symmetric: log pdf = -|z| - 2 ln(1 + e^{-|z|})
        ErrorFamily::Logistic => {
            let a = z.abs();
            -a - 2.0 * f64::ln_1p((-a).exp())
        }
    }
}

/// Log of the standardized survival function 1 - cdf; the censored-likelihood
/// primitive. Evaluated without cancellation for any finite z.
pub fn std_log_survival(family: ErrorFamily, z: f64) -> f64 {
    match family {
        ErrorFamily::Normal => normal_log_survival(z),
        ErrorFamily::SmallestExtremeValue => -z.exp(),
        ErrorFamily::Logistic => {
            // -ln(1 + e^z)
            if z <= 0.0 {
                -f64::ln_1p(z.exp())
            } else {
                -z - f64::ln_1p((-z).exp())
            }
        }
    }
}

/// Quantile of the chi-square distribution with one degree of freedom,
/// computed as the square of a standard-normal quantile.
pub fn chisq1_quantile(p: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&p) {
        return Err(Error::InvalidProbability {
            p,
            constraint: "0 <= p < 1",
        });
    }
    if p == 0.0 {
        return Ok(0.0);
    }
    // quantile((1+p)/2) = -quantile((1-p)/2); (1-p)/2 is exact for p in [0,1].
    let z = normal_quantile((1.0 - p) / 2.0);
    Ok(z * z)
}

// ---------------------------------------------------------------------------
// Gaussian kernel: Cody-style rational erf/erfc with a scaled (erfcx) variant,
// and the Acklam quantile refined by one Newton step.
// ---------------------------------------------------------------------------

const ERF_A: [f64; 5] = [
    3.16112374387056560e0,
    1.13864154151050156e2,
    3.77485237685302021e2,
    3.20937758913846947e3,
    1.85777706184603153e-1,
];
const ERF_B: [f64; 4] = [
    2.36012909523441209e1,
    2.44024637934444173e2,
    1.28261652607737228e3,
    2.84423683343917062e3,
];
const ERF_C: [f64; 9] = [
    5.64188496988670089e-1,
    8.88314979438837594e0,
    6.61191906371416295e1,
    2.98635138197400131e2,
    8.81952221241769090e2,
    1.71204761263407058e3,
    2.05107837782607147e3,
    1.23033935479799725e3,
    2.15311535474403846e-8,
];
const ERF_D: [f64; 8] = [
    1.57449261107098347e1,
    1.17693950891312499e2,
    5.37181101862009858e2,
    1.62138957456669019e3,
    3.29079923573345963e3,
    4.36261909014324716e3,
    3.43936767414372164e3,
    1.23033935480374942e3,
];
const ERF_P: [f64; 6] = [
    3.05326634961232344e-1,
    3.60344899949804439e-1,
    1.25781726111229246e-1,
    1.60837851487422766e-2,
    6.58749161529837803e-4,
    1.63153871373020978e-2,
];
const ERF_Q: [f64; 5] = [
    2.56852019228982242e0,
    1.87295284992346047e0,
    5.27905102951428412e-1,
    6.05183413124413191e-2,
    2.33520497626869185e-3,
];
const INV_SQRT_PI: f64 = 5.64189583547756287e-1;

/// erf(x) for |x| <= 0.46875.
fn erf_small(x: f64) -> f64 {
    let z = x * x;
    let mut num = ERF_A[4] * z;
    let mut den = z;
    for i in 0..3 {
        num = (num + ERF_A[i]) * z;
        den = (den + ERF_B[i]) * z;
    }
    x * (num + ERF_A[3]) / (den + ERF_B[3])
}

/// exp(x^2) * erfc(x) for x >= 0.46875; multiply by exp(-x^2) to get erfc.
fn erfcx_large(x: f64) -> f64 {
    if x <= 4.0 {
        let mut num = ERF_C[8] * x;
        let mut den = x;
        for i in 0..7 {
            num = (num + ERF_C[i]) * x;
            den = (den + ERF_D[i]) * x;
        }
        (num + ERF_C[7]) / (den + ERF_D[7])
    } else {
        let z = 1.0 / (x * x);
        let mut num = ERF_P[5] * z;
        let mut den = z;
        for i in 0..4 {
            num = (num + ERF_P[i]) * z;
            den = (den + ERF_Q[i]) * z;
        }
        let r = z * (num + ERF_P[4]) / (den + ERF_Q[4]);
        (INV_SQRT_PI - r) / x
    }
}

fn erfc(x: f64) -> f64 {
    if x < 0.0 {
        2.0 - erfc(-x)
    } else if x <= 0.46875 {
        1.0 - erf_small(x)
    } else {
        // split exp(-x^2) to avoid premature rounding of the exponent
        let xsq = (x * 16.0).trunc() / 16.0;
        let del = (x - xsq) * (x + xsq);
        (-xsq * xsq).exp() * (-del).exp() * erfcx_large(x)
    }
}

pub(crate) fn normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z * FRAC_1_SQRT_2)
}

fn normal_log_survival(z: f64) -> f64 {
    if z <= 8.0 {
        // survival >= erfc(8/sqrt2)/2 ~ 6e-16; direct evaluation is exact enough
        let s = 0.5 * erfc(z * FRAC_1_SQRT_2);
        s.ln()
    } else {
        // log(erfc(x)/2) = -x^2 + log(erfcx(x)/2): no underflow for any z
        let x = z * FRAC_1_SQRT_2;
        -x * x + (0.5 * erfcx_large(x)).ln()
    }
}

const NQ_A: [f64; 6] = [
    -3.969683028665376e+01,
    2.209460984245205e+02,
    -2.759285104469687e+02,
    1.383577518672690e+02,
    -3.066479806614716e+01,
    2.506628277459239e+00,
];
const NQ_B: [f64; 5] = [
    -5.447609879822406e+01,
    1.615858368580409e+02,
    -1.556989798598866e+02,
    6.680131188771972e+01,
    -1.328068155288572e+01,
];
const NQ_C: [f64; 6] = [
    -7.784894002430293e-03,
    -3.223964580411365e-01,
    -2.400758277161838e+00,
    -2.549732539343734e+00,
    4.374664141464968e+00,
    2.938163982698783e+00,
];
const NQ_D: [f64; 4] = [
    7.784695709041462e-03,
    3.224671290700398e-01,
    2.445134137142996e+00,
    3.754408661907416e+00,
];

/// Standard-normal quantile: rational approximation plus one Newton step
/// against the erfc-based cdf.
pub(crate) fn normal_quantile(p: f64) -> f64 {
    if p == 0.5 {
        return 0.0;
    }
    if p > 0.5 {
        // 1-p is exact for p >= 0.5; keeps the refinement in the lower tail
        return -normal_quantile(1.0 - p);
    }
    let mut x = if p < 0.02425 {
        let q = (-2.0 * p.ln()).sqrt();
        (((((NQ_C[0] * q + NQ_C[1]) * q + NQ_C[2]) * q + NQ_C[3]) * q + NQ_C[4]) * q + NQ_C[5])
            / ((((NQ_D[0] * q + NQ_D[1]) * q + NQ_D[2]) * q + NQ_D[3]) * q + 1.0)
    } else {
        let q = p - 0.5;
        let r = q * q;
        (((((NQ_A[0] * r + NQ_A[1]) * r + NQ_A[2]) * r + NQ_A[3]) * r + NQ_A[4]) * r + NQ_A[5]) * q
            / (((((NQ_B[0] * r + NQ_B[1]) * r + NQ_B[2]) * r + NQ_B[3]) * r + NQ_B[4]) * r + 1.0)
    };
    // One Newton step; skipped in the far tail where the cdf underflows.
    if p > 1e-290 {
        let err = normal_cdf(x) - p;
        let pdf = INV_SQRT_2PI * (-0.5 * x * x).exp();
        if pdf > 0.0 {
            x -= err / pdf;
        }
    }
    x
}
