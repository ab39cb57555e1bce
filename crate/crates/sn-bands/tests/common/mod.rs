//! Shared fixtures for the integration and acceptance suites.
//!
//! The committed dataset `fixtures/fixture30.csv` is drawn from a curved
//! (logquadratic) lognormal life model at three stress levels with a common
//! censoring time, chosen so that every (error family x curve family x
//! orientation) combination fits cleanly in the interior of its parameter
//! space.

#![allow(dead_code)]

use std::path::PathBuf;

use sn_bands::{
    CurveFamily, Domain, ErrorFamily, FitOptions, FittedModel, ModelSpec, Orientation,
    ParamVector, SNDataset, SimDesign, Span, StressAllocation,
};

pub const FIXTURE_SEED: u64 = 5;

pub fn fixture_domain() -> Domain {
    Domain {
        stress: Span { lo: 22.0, hi: 135.0 },
        cycles: Span {
            lo: 80.0,
            hi: 12_000.0,
        },
    }
}

pub fn fixture_spec(
    fam: ErrorFamily,
    curve: CurveFamily,
    orientation: Orientation,
) -> ModelSpec {
    ModelSpec::new(orientation, fam, curve, fixture_domain()).unwrap()
}

/// The data-generating truth behind the fixture.
pub fn fixture_truth() -> (ModelSpec, ParamVector) {
    let spec = fixture_spec(
        ErrorFamily::Normal,
        CurveFamily::Logquadratic,
        Orientation::LifeSpecified,
    );
    (spec, ParamVector::new(vec![1.5, 5.5, -1.0], 0.35))
}

pub fn fixture_design(seed: u64) -> SimDesign {
    let (spec, theta_true) = fixture_truth();
    SimDesign {
        theta_true,
        spec,
        stress_levels: vec![
            StressAllocation {
                stress: 30.0,
                count: 10,
            },
            StressAllocation {
                stress: 55.0,
                count: 10,
            },
            StressAllocation {
                stress: 100.0,
                count: 10,
            },
        ],
        censor_time: 5600.0,
        n_replicates: 1,
        seed,
    }
}

pub fn fixture_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("fixtures")
        .join("fixture30.csv")
}

pub fn fixture_dataset() -> SNDataset {
    SNDataset::from_csv_path(fixture_path()).expect("fixture30.csv must parse")
}

/// The eight model combinations the equivalence suite runs over.
pub fn all_combos() -> Vec<ModelSpec> {
    let mut specs = Vec::new();
    for fam in [ErrorFamily::Normal, ErrorFamily::SmallestExtremeValue] {
        for curve in [CurveFamily::Loglinear, CurveFamily::Logquadratic] {
            for orientation in [Orientation::LifeSpecified, Orientation::StrengthSpecified] {
                specs.push(fixture_spec(fam, curve, orientation));
            }
        }
    }
    specs
}

pub fn fit_fixture(spec: &ModelSpec, data: &SNDataset) -> FittedModel {
    sn_bands::fit_ml(spec, data, &FitOptions::default()).expect("fixture fit must succeed")
}

/// Interior-fit sanity: converged, information invertible, and the fitted
/// curve decreasing with margin at the working-domain edges.
pub fn fit_is_interior(fitted: &FittedModel) -> bool {
    if !fitted.converged || fitted.wald_cov.is_none() {
        return false;
    }
    let spec = &fitted.spec;
    let dom = match spec.orientation {
        Orientation::LifeSpecified => spec.domain.stress,
        Orientation::StrengthSpecified => spec.domain.cycles,
    };
    let slope_at = |u: f64| match spec.curve {
        CurveFamily::Loglinear => fitted.theta_hat.beta[1],
        CurveFamily::Logquadratic => {
            fitted.theta_hat.beta[1] + 2.0 * fitted.theta_hat.beta[2] * u
        }
    };
    slope_at(dom.lo.ln()) <= -0.02 && slope_at(dom.hi.ln()) <= -0.02
}
