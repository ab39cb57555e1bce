//! Mechanical verification of the band-equivalence results: transposing a
//! pointwise LR band of a monotone function yields the band of its inverse,
//! so cdf/qf bands coincide and the life-qf and strength-qf bands coincide.
//!
//! Result ids: R1 is the general inverse-function transpose; R2/R3 are its
//! cdf-qf and life-strength instances under a life-specified model; R4/R5/R6
//! are the strength-specified counterparts.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::band::{BandFamily, ConfidenceBand, Method};
use crate::dist::ErrorFamily;
use crate::error::{Error, Result};
use crate::interval::{lr_bound, Bound, Side};
use crate::likelihood::FittedModel;
use crate::model::Orientation;
use crate::target::ScalarTarget;
use crate::SNDataset;

/// Which equivalence result a report refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ResultId {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
}

/// Outcome of one equivalence check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub result_id: ResultId,
    pub max_discrepancy: f64,
    pub grid_used: Vec<f64>,
    pub tolerance: f64,
    pub pass: bool,
    pub checked_points: usize,
    pub skipped_points: usize,
}

impl EquivalenceReport {
    fn from_deviations(
        result_id: ResultId,
        grid: &[f64],
        tolerance: f64,
        deviations: Vec<Option<f64>>,
    ) -> Self {
        let checked = deviations.iter().flatten().count();
        let skipped = deviations.len() - checked;
        let max = deviations
            .iter()
            .flatten()
            .fold(f64::NEG_INFINITY, |a, &b| a.max(b));
        let max_discrepancy = if checked == 0 { f64::NAN } else { max };
        EquivalenceReport {
            result_id,
            max_discrepancy,
            grid_used: grid.to_vec(),
            tolerance,
            pass: checked > 0 && max_discrepancy <= tolerance,
            checked_points: checked,
            skipped_points: skipped,
        }
    }
}

/// Anchor of a cdf/qf pair: a fatigue-life pair at fixed stress or a
/// fatigue-strength pair at fixed cycles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "at", content = "value", rename_all = "kebab-case")]
pub enum CdfAnchor {
    /// Life cdf/qf pair at this stress level.
    LifeAt(f64),
    /// Strength cdf/qf pair at this cycle count.
    StrengthAt(f64),
}

fn require_lr(method: Method) -> Result<()> {
    if method == Method::Lr {
        Ok(())
    } else {
        Err(Error::Unsupported(
            "equivalence is exact only for likelihood-ratio bands; Wald bands are approximate"
                .into(),
        ))
    }
}

/// cdf/qf band equivalence at a fixed anchor: for each p, the upper cdf band
/// evaluated at the qf lower endpoint must return p, and symmetrically.
pub fn check_cdf_qf_equivalence(
    fitted: &FittedModel,
    data: &SNDataset,
    anchor: CdfAnchor,
    alpha: f64,
    grid_p: &[f64],
    tol: f64,
    method: Method,
) -> Result<EquivalenceReport> {
    require_lr(method)?;
    let result_id = match (fitted.spec.orientation, anchor) {
        (Orientation::LifeSpecified, _) => ResultId::R2,
        (Orientation::StrengthSpecified, CdfAnchor::StrengthAt(_)) => ResultId::R4,
        (Orientation::StrengthSpecified, CdfAnchor::LifeAt(_)) => ResultId::R5,
    };
    let qf_target = |p: f64| match anchor {
        CdfAnchor::LifeAt(s_e) => ScalarTarget::LifeQuantile { p, s_e },
        CdfAnchor::StrengthAt(n_e) => ScalarTarget::StrengthQuantile { p, n_e },
    };
    let cdf_target = |v: f64| match anchor {
        CdfAnchor::LifeAt(s_e) => ScalarTarget::LifeCdf { t: v, s_e },
        CdfAnchor::StrengthAt(n_e) => ScalarTarget::StrengthCdf { x: v, n_e },
    };

    let deviations: Vec<Option<f64>> = grid_p
        .par_iter()
        .map(|&p| {
            let mut worst: Option<f64> = None;
            // qf lower endpoint transposes onto the upper cdf band
            for (qf_side, cdf_side) in [(Side::Lower, Side::Upper), (Side::Upper, Side::Lower)] {
                let q = match lr_bound(fitted, data, &qf_target(p), alpha, qf_side) {
                    Ok(Bound::Finite(v)) => v,
                    _ => continue,
                };
                let f = match lr_bound(fitted, data, &cdf_target(q), alpha, cdf_side) {
                    Ok(Bound::Finite(v)) => v,
                    _ => continue,
                };
                let dev = (f - p).abs();
                worst = Some(worst.map_or(dev, |w: f64| w.max(dev)));
            }
            worst
        })
        .collect();
    Ok(EquivalenceReport::from_deviations(
        result_id, grid_p, tol, deviations,
    ))
}

/// Life-qf / strength-qf band equivalence at fixed p: the strength-qf lower
/// band evaluated at N_e = (life-qf lower bound at S_e) must return S_e, and
/// symmetrically for the upper bounds.
pub fn check_life_strength_qf_equivalence(
    fitted: &FittedModel,
    data: &SNDataset,
    p: f64,
    alpha: f64,
    grid_s: &[f64],
    tol: f64,
    method: Method,
) -> Result<EquivalenceReport> {
    require_lr(method)?;
    let result_id = match fitted.spec.orientation {
        Orientation::LifeSpecified => ResultId::R3,
        Orientation::StrengthSpecified => ResultId::R6,
    };
    let deviations: Vec<Option<f64>> = grid_s
        .par_iter()
        .map(|&s_e| {
            let mut worst: Option<f64> = None;
            for side in [Side::Lower, Side::Upper] {
                let t = match lr_bound(
                    fitted,
                    data,
                    &ScalarTarget::LifeQuantile { p, s_e },
                    alpha,
                    side,
                ) {
                    Ok(Bound::Finite(v)) => v,
                    _ => continue,
                };
                let x = match lr_bound(
                    fitted,
                    data,
                    &ScalarTarget::StrengthQuantile { p, n_e: t },
                    alpha,
                    side,
                ) {
                    Ok(Bound::Finite(v)) => v,
                    _ => continue,
                };
                let dev = (x / s_e - 1.0).abs();
                worst = Some(worst.map_or(dev, |w: f64| w.max(dev)));
            }
            worst
        })
        .collect();
    Ok(EquivalenceReport::from_deviations(
        result_id, grid_s, tol, deviations,
    ))
}

/// Monotone piecewise-linear interpolation after sorting by abscissa; None
/// outside the covered range.
struct MonotoneCurve {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl MonotoneCurve {
    fn new(points: Vec<(f64, f64)>) -> Self {
        let mut pts = points;
        pts.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        pts.dedup_by(|a, b| a.0 == b.0);
        MonotoneCurve {
            xs: pts.iter().map(|p| p.0).collect(),
            ys: pts.iter().map(|p| p.1).collect(),
        }
    }

    fn eval(&self, x: f64) -> Option<f64> {
        if self.xs.len() < 2 || x < self.xs[0] || x > *self.xs.last().unwrap() {
            return None;
        }
        let idx = match self
            .xs
            .binary_search_by(|v| v.partial_cmp(&x).unwrap())
        {
            Ok(i) => return Some(self.ys[i]),
            Err(i) => i,
        };
        let (x0, x1) = (self.xs[idx - 1], self.xs[idx]);
        let (y0, y1) = (self.ys[idx - 1], self.ys[idx]);
        Some(y0 + (y1 - y0) * (x - x0) / (x1 - x0))
    }
}

fn probit(p: f64) -> f64 {
    crate::dist::std_quantile_raw(ErrorFamily::Normal, p)
}

fn inv_probit(z: f64) -> f64 {
    crate::dist::std_cdf_raw(ErrorFamily::Normal, z)
}

enum PairKind {
    /// cdf band first, qf band second; deviations on the probability scale.
    CdfQf,
    /// life-qf-vs-stress first, strength-qf-vs-cycles second; relative
    /// deviations.
    QfQf,
}

fn classify_pair(a: &ConfidenceBand, b: &ConfidenceBand) -> Result<(PairKind, bool)> {
    // returns (kind, swapped) with the canonical order described on PairKind
    let anchors_equal = |x: f64, y: f64| x == y;
    let pair = |va: &BandFamily, vb: &BandFamily| -> Option<PairKind> {
        match (va, vb) {
            (BandFamily::LifeCdf { s_e: a }, BandFamily::LifeQf { s_e: b })
                if anchors_equal(*a, *b) =>
            {
                Some(PairKind::CdfQf)
            }
            (BandFamily::StrengthCdf { n_e: a }, BandFamily::StrengthQf { n_e: b })
                if anchors_equal(*a, *b) =>
            {
                Some(PairKind::CdfQf)
            }
            (BandFamily::LifeQfVsStress { p: a }, BandFamily::StrengthQfVsCycles { p: b })
                if anchors_equal(*a, *b) =>
            {
                Some(PairKind::QfQf)
            }
            _ => None,
        }
    };
    if a.level != b.level || a.method != b.method {
        return Err(Error::Precondition(
            "bands must share level and method to be transposed".into(),
        ));
    }
    if let Some(kind) = pair(&a.family, &b.family) {
        Ok((kind, false))
    } else if let Some(kind) = pair(&b.family, &a.family) {
        Ok((kind, true))
    } else {
        Err(Error::Precondition(format!(
            "band families {} and {} are not mutually inverse",
            a.family.name(),
            b.family.name()
        )))
    }
}

fn curve_points(
    band: &ConfidenceBand,
    pick: impl Fn(usize) -> Option<f64>,
    fx: impl Fn(f64) -> f64,
    fy: impl Fn(f64) -> f64,
) -> Vec<(f64, f64)> {
    (0..band.grid.len())
        .filter_map(|i| pick(i).map(|v| (fx(v), fy(band.grid[i]))))
        .collect()
}

/// General inverse-function transpose check between two bands whose families
/// are mutually inverse. Deviations are measured on the probability scale for
/// cdf/qf pairs and on the relative scale for stress/cycles pairs.
pub fn check_inverse_band_transpose(
    band_v: &ConfidenceBand,
    band_w: &ConfidenceBand,
    tol: f64,
) -> Result<EquivalenceReport> {
    let (kind, swapped) = classify_pair(band_v, band_w)?;
    let (cdf_band, qf_band) = if swapped {
        (band_w, band_v)
    } else {
        (band_v, band_w)
    };
    let lower_of = |b: &ConfidenceBand, i: usize| b.lowers[i].finite();
    let upper_of = |b: &ConfidenceBand, i: usize| b.uppers[i].finite();

    let mut deviations: Vec<Option<f64>> = Vec::new();
    match kind {
        PairKind::CdfQf => {
            // curves as (ln value, probit p), both increasing
            let qf_lower = MonotoneCurve::new(curve_points(
                qf_band,
                |i| lower_of(qf_band, i),
                |t| t.ln(),
                probit,
            ));
            let qf_upper = MonotoneCurve::new(curve_points(
                qf_band,
                |i| upper_of(qf_band, i),
                |t| t.ln(),
                probit,
            ));
            // cdf curves as (ln t, probit F)
            let cdf_low_pts: Vec<(f64, f64)> = (0..cdf_band.grid.len())
                .filter_map(|i| {
                    lower_of(cdf_band, i).map(|f| (cdf_band.grid[i].ln(), probit(f)))
                })
                .collect();
            let cdf_up_pts: Vec<(f64, f64)> = (0..cdf_band.grid.len())
                .filter_map(|i| {
                    upper_of(cdf_band, i).map(|f| (cdf_band.grid[i].ln(), probit(f)))
                })
                .collect();
            let cdf_lower = MonotoneCurve::new(cdf_low_pts);
            let cdf_upper = MonotoneCurve::new(cdf_up_pts);

            // cdf band points into the qf envelope: upper cdf <-> lower qf
            for i in 0..cdf_band.grid.len() {
                let t = cdf_band.grid[i];
                let mut worst: Option<f64> = None;
                for (bound, curve) in [
                    (upper_of(cdf_band, i), &qf_lower),
                    (lower_of(cdf_band, i), &qf_upper),
                ] {
                    if let Some(f) = bound {
                        if let Some(z) = curve.eval(t.ln()) {
                            let dev = (inv_probit(z) - f).abs();
                            worst = Some(worst.map_or(dev, |w: f64| w.max(dev)));
                        }
                    }
                }
                deviations.push(worst);
            }
            // qf band points into the cdf envelope: lower qf <-> upper cdf
            for j in 0..qf_band.grid.len() {
                let p = qf_band.grid[j];
                let mut worst: Option<f64> = None;
                for (bound, curve) in [
                    (lower_of(qf_band, j), &cdf_upper),
                    (upper_of(qf_band, j), &cdf_lower),
                ] {
                    if let Some(t) = bound {
                        if let Some(z) = curve.eval(t.ln()) {
                            let dev = (inv_probit(z) - p).abs();
                            worst = Some(worst.map_or(dev, |w: f64| w.max(dev)));
                        }
                    }
                }
                deviations.push(worst);
            }
        }
        PairKind::QfQf => {
            let (life_band, strength_band) = (cdf_band, qf_band);
            // envelopes as maps from the log abscissa to the log bound:
            // strength curves (ln N_e -> ln x), life curves (ln S_e -> ln t)
            let envelope = |b: &ConfidenceBand, upper: bool| {
                let pts: Vec<(f64, f64)> = (0..b.grid.len())
                    .filter_map(|i| {
                        let bound = if upper { upper_of(b, i) } else { lower_of(b, i) };
                        bound.map(|v| (b.grid[i].ln(), v.ln()))
                    })
                    .collect();
                MonotoneCurve::new(pts)
            };
            let s_lower = envelope(strength_band, false);
            let s_upper = envelope(strength_band, true);
            let l_lower = envelope(life_band, false);
            let l_upper = envelope(life_band, true);

            // life point (S, t_lo) onto the strength lower envelope, etc.
            for i in 0..life_band.grid.len() {
                let s = life_band.grid[i];
                let mut worst: Option<f64> = None;
                for (bound, curve) in [
                    (lower_of(life_band, i), &s_lower),
                    (upper_of(life_band, i), &s_upper),
                ] {
                    if let Some(t) = bound {
                        if let Some(lx) = curve.eval(t.ln()) {
                            let dev = (lx.exp() / s - 1.0).abs();
                            worst = Some(worst.map_or(dev, |w: f64| w.max(dev)));
                        }
                    }
                }
                deviations.push(worst);
            }
            for j in 0..strength_band.grid.len() {
                let n = strength_band.grid[j];
                let mut worst: Option<f64> = None;
                for (bound, curve) in [
                    (lower_of(strength_band, j), &l_lower),
                    (upper_of(strength_band, j), &l_upper),
                ] {
                    if let Some(x) = bound {
                        if let Some(lt) = curve.eval(x.ln()) {
                            let dev = (lt.exp() / n - 1.0).abs();
                            worst = Some(worst.map_or(dev, |w: f64| w.max(dev)));
                        }
                    }
                }
                deviations.push(worst);
            }
        }
    }
    let grid: Vec<f64> = band_v
        .grid
        .iter()
        .chain(band_w.grid.iter())
        .copied()
        .collect();
    Ok(EquivalenceReport::from_deviations(
        ResultId::R1,
        &grid,
        tol,
        deviations,
    ))
}
