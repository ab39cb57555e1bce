//! Minimal SVG rendering of a confidence band: solid estimate curve, dashed
//! pointwise band, and a data rug with runouts marked.

use sn_bands::{BandFamily, ConfidenceBand, PointBound, SNDataset};

const W: f64 = 720.0;
const H: f64 = 480.0;
const ML: f64 = 70.0;
const MR: f64 = 20.0;
const MT: f64 = 36.0;
const MB: f64 = 56.0;

#[derive(Clone, Copy)]
enum Scale {
    Log,
    Probit,
}

fn probit(p: f64) -> f64 {
    sn_bands::std_quantile(sn_bands::ErrorFamily::Normal, p.clamp(1e-12, 1.0 - 1e-12)).unwrap()
}

impl Scale {
    fn map(self, v: f64) -> f64 {
        match self {
            Scale::Log => v.ln(),
            Scale::Probit => probit(v),
        }
    }
}

/// Axis scales per band family: probability axes are probit, stress and
/// cycles axes are logarithmic.
fn scales(family: &BandFamily) -> (Scale, Scale, &'static str, &'static str) {
    match family {
        BandFamily::LifeCdf { .. } => (Scale::Log, Scale::Probit, "cycles", "fraction failing"),
        BandFamily::LifeQf { .. } => (Scale::Probit, Scale::Log, "probability", "cycles"),
        BandFamily::LifeQfVsStress { .. } => (Scale::Log, Scale::Log, "stress", "cycles"),
        BandFamily::StrengthCdf { .. } => {
            (Scale::Log, Scale::Probit, "stress", "fraction failing")
        }
        BandFamily::StrengthQf { .. } => (Scale::Probit, Scale::Log, "probability", "stress"),
        BandFamily::StrengthQfVsCycles { .. } => (Scale::Log, Scale::Log, "cycles", "stress"),
    }
}

/// Data-rug values along the x axis, when the abscissa is a data coordinate.
fn rug_values(family: &BandFamily, data: &SNDataset) -> Vec<(f64, bool)> {
    match family {
        BandFamily::LifeCdf { .. } | BandFamily::StrengthQfVsCycles { .. } => data
            .observations
            .iter()
            .map(|o| (o.cycles, o.is_failure()))
            .collect(),
        BandFamily::LifeQfVsStress { .. } | BandFamily::StrengthCdf { .. } => data
            .observations
            .iter()
            .map(|o| (o.stress, o.is_failure()))
            .collect(),
        _ => Vec::new(),
    }
}

fn path_from(points: &[(f64, f64)]) -> String {
    let mut d = String::new();
    let mut pen_up = true;
    for &(x, y) in points {
        if !(x.is_finite() && y.is_finite()) {
            pen_up = true;
            continue;
        }
        if pen_up {
            d.push_str(&format!("M{x:.2},{y:.2} "));
            pen_up = false;
        } else {
            d.push_str(&format!("L{x:.2},{y:.2} "));
        }
    }
    d.trim_end().to_string()
}

/// Render the band as a standalone SVG document.
pub fn render_band(band: &ConfidenceBand, data: &SNDataset, title: &str) -> String {
    let (sx, sy, xlabel, ylabel) = scales(&band.family);

    let mut tx: Vec<f64> = band.grid.iter().map(|&v| sx.map(v)).collect();
    let mut ty: Vec<f64> = Vec::new();
    for i in 0..band.grid.len() {
        ty.push(sy.map(band.estimates[i]));
        for b in [&band.lowers[i], &band.uppers[i]] {
            if let PointBound::Finite(v) = b {
                ty.push(sy.map(*v));
            }
        }
    }
    let rug = rug_values(&band.family, data);
    tx.extend(rug.iter().map(|&(v, _)| sx.map(v)));

    let finite = |vs: &[f64]| {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &v in vs.iter().filter(|v| v.is_finite()) {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if lo >= hi {
            (lo - 1.0, lo + 1.0)
        } else {
            let pad = 0.05 * (hi - lo);
            (lo - pad, hi + pad)
        }
    };
    let (xlo, xhi) = finite(&tx);
    let (ylo, yhi) = finite(&ty);
    let px = |v: f64| ML + (sx.map(v) - xlo) / (xhi - xlo) * (W - ML - MR);
    let py = |v: f64| H - MB - (sy.map(v) - ylo) / (yhi - ylo) * (H - MT - MB);

    let curve = |pick: &dyn Fn(usize) -> Option<f64>| -> String {
        let pts: Vec<(f64, f64)> = (0..band.grid.len())
            .map(|i| match pick(i) {
                Some(v) => (px(band.grid[i]), py(v)),
                None => (f64::NAN, f64::NAN),
            })
            .collect();
        path_from(&pts)
    };
    let est = curve(&|i| Some(band.estimates[i]));
    let low = curve(&|i| band.lowers[i].finite());
    let up = curve(&|i| band.uppers[i].finite());

    let mut rug_svg = String::new();
    for (v, failure) in &rug {
        let x = px(*v);
        let y = H - MB;
        if *failure {
            rug_svg.push_str(&format!(
                "  <circle cx=\"{x:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"#333\"/>\n",
                y + 10.0
            ));
        } else {
            rug_svg.push_str(&format!(
                "  <path d=\"M{:.2},{:.2} L{:.2},{:.2} L{:.2},{:.2} Z\" fill=\"none\" stroke=\"#333\"/>\n",
                x - 3.5, y + 13.0, x + 3.5, y + 13.0, x, y + 6.5
            ));
        }
    }

    format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
<!-- snbands {} -->\n\
<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">\n\
  <rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>\n\
  <text x=\"{:.0}\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">{}</text>\n\
  <rect x=\"{ML}\" y=\"{MT}\" width=\"{:.0}\" height=\"{:.0}\" fill=\"none\" stroke=\"#999\"/>\n\
  <text x=\"{:.0}\" y=\"{:.0}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">{} ({})</text>\n\
  <text x=\"14\" y=\"{:.0}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 14 {:.0})\">{} ({})</text>\n\
  <path d=\"{est}\" fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.8\"/>\n\
  <path d=\"{low}\" fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.2\" stroke-dasharray=\"6 4\"/>\n\
  <path d=\"{up}\" fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.2\" stroke-dasharray=\"6 4\"/>\n\
{rug_svg}</svg>\n",
        env!("CARGO_PKG_VERSION"),
        (ML + W - MR) / 2.0,
        title,
        W - ML - MR,
        H - MT - MB,
        (ML + W - MR) / 2.0,
        H - 14.0,
        xlabel,
        scale_name(sx),
        (MT + H - MB) / 2.0,
        (MT + H - MB) / 2.0,
        ylabel,
        scale_name(sy),
    )
}

fn scale_name(s: Scale) -> &'static str {
    match s {
        Scale::Log => "log scale",
        Scale::Probit => "probit scale",
    }
}
