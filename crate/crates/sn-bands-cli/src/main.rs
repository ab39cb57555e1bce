//! `snbands`: fit censored S-N fatigue models and compute likelihood-ratio
//! confidence bands for fatigue-life and fatigue-strength distributions.

mod config;
mod svg;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use config::{AnalysisConfig, MethodChoice};
use sn_bands::band::round_sig9;
use sn_bands::{
    band, band_to_csv, band_to_json, check_cdf_qf_equivalence, check_inverse_band_transpose,
    check_life_strength_qf_equivalence, coverage_study_with_progress, fit_ml, log_spaced,
    lr_bound, lr_interval, model_hash, probability_grid, records_to_csv, safe_stress_query,
    wald_interval, BandFamily, CdfAnchor, ConfidenceBand, Error, FitOptions, FittedModel, Method,
    Orientation, SNDataset, ScalarTarget, Side,
};

#[derive(Parser)]
#[command(
    name = "snbands",
    version,
    about = "Censored S-N fatigue regression with likelihood-ratio confidence bands"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Analysis configuration (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Dataset CSV; overrides the config's data_path.
    #[arg(long)]
    data: Option<PathBuf>,
    /// Output directory; overrides the config's output_dir.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Two-sided significance level; overrides the config's alpha.
    #[arg(long)]
    alpha: Option<f64>,
    /// Interval method; overrides the config's method.
    #[arg(long, value_enum)]
    method: Option<MethodChoice>,
    /// Simulation seed; overrides the config's seed.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Fit the model by maximum likelihood and write the fit report.
    Fit(CommonArgs),
    /// Compute the configured confidence bands (CSV + JSON + SVG).
    Bands(CommonArgs),
    /// Run the band-equivalence checks applicable to the model orientation.
    Equiv(CommonArgs),
    /// Run the Monte Carlo coverage study from the config's sim section.
    Simulate(CommonArgs),
}

const EXIT_INPUT: i32 = 2;
const EXIT_NOCONVERGE: i32 = 3;
const EXIT_UNSUPPORTED: i32 = 4;

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::NotConverged { .. }
        | Error::Optimization { .. }
        | Error::SingularInformation
        | Error::NoFailures
        | Error::TooManyFitFailures { .. } => EXIT_NOCONVERGE,
        Error::Unsupported(_) => EXIT_UNSUPPORTED,
        _ => EXIT_INPUT,
    }
}

fn main() {
    let cli = Cli::parse();
    let code = match &cli.command {
        Command::Fit(args) => run(args, cmd_fit),
        Command::Bands(args) => run(args, cmd_bands),
        Command::Equiv(args) => run(args, cmd_equiv),
        Command::Simulate(args) => run(args, cmd_simulate),
    };
    std::process::exit(code);
}

struct Session {
    config: AnalysisConfig,
    out_dir: PathBuf,
    alpha: f64,
    method: MethodChoice,
    seed: Option<u64>,
    data_path: PathBuf,
}

fn run(args: &CommonArgs, cmd: fn(&Session) -> Result<i32, (i32, String)>) -> i32 {
    let session = match prepare(args) {
        Ok(s) => s,
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            return code;
        }
    };
    match cmd(&session) {
        Ok(code) => code,
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            code
        }
    }
}

fn prepare(args: &CommonArgs) -> Result<Session, (i32, String)> {
    let config = AnalysisConfig::load(&args.config).map_err(|e| (EXIT_INPUT, e))?;
    let data_path = args
        .data
        .clone()
        .or_else(|| config.data_path.clone())
        .ok_or((
            EXIT_INPUT,
            "no dataset: pass --data or set data_path in the config".to_string(),
        ))?;
    let out_dir = args
        .out
        .clone()
        .or_else(|| config.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("."));
    let alpha = args.alpha.unwrap_or(config.alpha);
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err((EXIT_INPUT, format!("alpha must be in (0,1), got {alpha}")));
    }
    std::fs::create_dir_all(&out_dir)
        .map_err(|e| (EXIT_INPUT, format!("cannot create output dir: {e}")))?;
    Ok(Session {
        method: args.method.unwrap_or(config.method),
        seed: args.seed,
        alpha,
        out_dir,
        data_path,
        config,
    })
}

fn load_data(session: &Session) -> Result<SNDataset, (i32, String)> {
    SNDataset::from_csv_path(&session.data_path)
        .map_err(|e| (exit_code_for(&e), format!("{}: {e}", session.data_path.display())))
}

fn fit_session(session: &Session, data: &SNDataset) -> Result<FittedModel, (i32, String)> {
    let fitted = fit_ml(&session.config.model, data, &FitOptions::default())
        .map_err(|e| (exit_code_for(&e), e.to_string()))?;
    if !fitted.converged {
        return Err((
            EXIT_NOCONVERGE,
            "fit did not converge to a verified local maximum".to_string(),
        ));
    }
    Ok(fitted)
}

fn write_json(path: &Path, value: &serde_json::Value) -> Result<(), (i32, String)> {
    let text = serde_json::to_string_pretty(value).expect("json serialization");
    std::fs::write(path, text + "\n")
        .map_err(|e| (EXIT_INPUT, format!("cannot write {}: {e}", path.display())))
}

fn sig9_vec(v: &[f64]) -> Vec<f64> {
    v.iter().map(|&x| round_sig9(x)).collect()
}

// ---------------------------------------------------------------------------
// fit
// ---------------------------------------------------------------------------

fn fit_report(session: &Session, fitted: &FittedModel, data: &SNDataset) -> serde_json::Value {
    let cov = fitted.wald_cov.as_ref().map(|c| {
        c.rows()
            .into_iter()
            .map(|row| sig9_vec(&row))
            .collect::<Vec<_>>()
    });
    let se: Option<Vec<f64>> = fitted
        .wald_cov
        .as_ref()
        .map(|c| (0..c.dim()).map(|i| round_sig9(c.get(i, i).sqrt())).collect());
    let mut targets = Vec::new();
    for target in &session.config.targets {
        let estimate = target
            .evaluate(&fitted.spec, &fitted.theta_hat)
            .map(round_sig9);
        let mut entry = json!({
            "target": target,
            "estimate": estimate.as_ref().ok().copied(),
        });
        if estimate.is_ok() {
            for method in session.method.methods() {
                let key = match method {
                    Method::Lr => "lr",
                    Method::Wald => "wald",
                };
                let value = match method {
                    Method::Lr => lr_interval(fitted, data, target, session.alpha).ok().map(|iv| {
                        json!({
                            "lower": round_sig9(iv.lower.value()),
                            "upper": round_sig9(iv.upper.value()),
                            "lower_at_boundary": !iv.lower.is_finite(),
                            "upper_at_boundary": !iv.upper.is_finite(),
                        })
                    }),
                    Method::Wald => wald_interval(fitted, target, session.alpha).ok().map(|iv| {
                        json!({
                            "lower": round_sig9(iv.lower),
                            "upper": round_sig9(iv.upper),
                        })
                    }),
                };
                entry[key] = value.unwrap_or(serde_json::Value::Null);
            }
        }
        targets.push(entry);
    }
    json!({
        "model": fitted.spec,
        "model_hash": model_hash(&fitted.spec),
        "data": {
            "path": session.data_path.display().to_string(),
            "label": data.label,
            "n": data.len(),
            "failures": data.n_failures(),
            "runouts": data.n_runouts(),
        },
        "theta_hat": {
            "beta": sig9_vec(&fitted.theta_hat.beta),
            "sigma": round_sig9(fitted.theta_hat.sigma),
        },
        "loglik": round_sig9(fitted.loglik_hat),
        "converged": fitted.converged,
        "iterations": fitted.iterations,
        "wald_cov": cov,
        "wald_se": se,
        "starts": fitted.starts.iter().map(|s| json!({
            "start": s.start,
            "loglik": round_sig9(s.loglik),
            "iterations": s.iterations,
            "converged": s.converged,
        })).collect::<Vec<_>>(),
        "alpha": session.alpha,
        "targets": targets,
    })
}

fn cmd_fit(session: &Session) -> Result<i32, (i32, String)> {
    let data = load_data(session)?;
    let fitted = fit_session(session, &data)?;
    let report = fit_report(session, &fitted, &data);
    let path = session.out_dir.join("fit.json");
    write_json(&path, &report)?;
    println!(
        "fit: loglik {} at theta_hat {:?} sigma {} -> {}",
        round_sig9(fitted.loglik_hat),
        sig9_vec(&fitted.theta_hat.beta),
        round_sig9(fitted.theta_hat.sigma),
        path.display()
    );
    Ok(0)
}

// ---------------------------------------------------------------------------
// bands
// ---------------------------------------------------------------------------

fn default_grid(
    session: &Session,
    family: &BandFamily,
    data: &SNDataset,
    n: usize,
) -> Vec<f64> {
    match family {
        BandFamily::LifeQf { .. } | BandFamily::StrengthQf { .. } => probability_grid(n),
        BandFamily::LifeCdf { .. } | BandFamily::StrengthQfVsCycles { .. } => {
            let (lo, hi) = data.cycles_range();
            let dom = session.config.model.domain.cycles;
            let lo = lo.max(dom.lo);
            let hi = hi.min(dom.hi);
            log_spaced(lo, hi, n)
        }
        BandFamily::LifeQfVsStress { .. } | BandFamily::StrengthCdf { .. } => {
            let (lo, hi) = data.stress_range();
            log_spaced(lo, hi, n)
        }
    }
}

fn band_grid(session: &Session, request: &config::BandRequest, data: &SNDataset) -> Vec<f64> {
    let n = request.grid.as_ref().and_then(|g| g.n).unwrap_or(25);
    match request.grid.as_ref().and_then(|g| g.lo.zip(g.hi)) {
        Some((lo, hi)) => match request.family {
            BandFamily::LifeQf { .. } | BandFamily::StrengthQf { .. } => {
                // probability abscissa: equispaced
                (0..n)
                    .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
                    .collect()
            }
            _ => log_spaced(lo, hi, n),
        },
        None => default_grid(session, &request.family, data, n),
    }
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Lr => "lr",
        Method::Wald => "wald",
    }
}

fn cmd_bands(session: &Session) -> Result<i32, (i32, String)> {
    let data = load_data(session)?;
    let fitted = fit_session(session, &data)?;
    if session.config.bands.is_empty() && session.config.safe_stress.is_none() {
        return Err((EXIT_INPUT, "config requests no bands".to_string()));
    }
    let mut summary = Vec::new();
    for (i, request) in session.config.bands.iter().enumerate() {
        let grid = band_grid(session, request, &data);
        for method in session.method.methods() {
            let computed: ConfidenceBand =
                band(&fitted, &data, request.family, &grid, session.alpha, method)
                    .map_err(|e| (exit_code_for(&e), e.to_string()))?;
            let stem = format!("band_{i}_{}_{}", computed.family.name(), method_name(method));
            let csv_path = session.out_dir.join(format!("{stem}.csv"));
            std::fs::write(&csv_path, band_to_csv(&computed))
                .map_err(|e| (EXIT_INPUT, e.to_string()))?;
            write_json(
                &session.out_dir.join(format!("{stem}.json")),
                &band_to_json(&computed, &fitted.spec),
            )?;
            let title = format!(
                "{} band, level {:.0}%, {}",
                computed.family.name(),
                100.0 * computed.level,
                method_name(method)
            );
            std::fs::write(
                session.out_dir.join(format!("{stem}.svg")),
                svg::render_band(&computed, &data, &title),
            )
            .map_err(|e| (EXIT_INPUT, e.to_string()))?;
            if computed.failures > 0 {
                eprintln!(
                    "warning: {} grid points failed in {stem}",
                    computed.failures
                );
            }
            summary.push(json!({
                "stem": stem,
                "family": computed.family,
                "method": method_name(method),
                "points": computed.grid.len(),
                "failures": computed.failures,
            }));
            println!("bands: wrote {}", csv_path.display());
        }
    }

    let mut safe_stress_json = serde_json::Value::Null;
    if let Some(q) = session.config.safe_stress {
        let crossing = safe_stress_query(&fitted, &data, q.p, q.n_e, session.alpha)
            .map_err(|e| (exit_code_for(&e), e.to_string()))?;
        let direct = lr_bound(
            &fitted,
            &data,
            &ScalarTarget::StrengthQuantile { p: q.p, n_e: q.n_e },
            session.alpha,
            Side::Lower,
        )
        .map_err(|e| (exit_code_for(&e), e.to_string()))?;
        println!(
            "safe stress: upper cdf bound crosses p={} at stress {} (strength-quantile lower bound {})",
            q.p,
            round_sig9(crossing),
            round_sig9(direct.value()),
        );
        safe_stress_json = json!({
            "p": q.p,
            "n_e": q.n_e,
            "crossing_stress": round_sig9(crossing),
            "strength_quantile_lower": round_sig9(direct.value()),
        });
    }
    write_json(
        &session.out_dir.join("bands_summary.json"),
        &json!({
            "model_hash": model_hash(&fitted.spec),
            "alpha": session.alpha,
            "bands": summary,
            "safe_stress": safe_stress_json,
        }),
    )?;
    Ok(0)
}

// ---------------------------------------------------------------------------
// equiv
// ---------------------------------------------------------------------------

fn cmd_equiv(session: &Session) -> Result<i32, (i32, String)> {
    if session.method == MethodChoice::Wald {
        return Err((
            EXIT_UNSUPPORTED,
            "the equivalence results are exact only for likelihood-ratio bands; \
             rerun with --method lr"
                .to_string(),
        ));
    }
    let data = load_data(session)?;
    let fitted = fit_session(session, &data)?;
    let cfg = &session.config.equiv;
    let tol = cfg.tol.unwrap_or(1e-3);
    let alpha = session.alpha;

    let (s_lo, s_hi) = data.stress_range();
    let s_e = cfg.s_e.unwrap_or((s_lo * s_hi).sqrt());
    let med = fitted
        .spec
        .life_quantile(&fitted.theta_hat, 0.5, s_e)
        .map_err(|e| (exit_code_for(&e), e.to_string()))?;
    let n_e = cfg.n_e.unwrap_or(med);
    let p = cfg.p.unwrap_or(0.10);
    let grid_p = cfg
        .grid_p
        .clone()
        .unwrap_or_else(|| vec![0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 0.95]);
    let grid_s = cfg.grid_s.clone().unwrap_or_else(|| {
        log_spaced(s_lo * 1.05, s_hi * 0.95, 5)
    });
    let r1_points = cfg.r1_points.unwrap_or(61);

    let mut checks = Vec::new();
    let mut reports = Vec::new();
    for anchor in [CdfAnchor::LifeAt(s_e), CdfAnchor::StrengthAt(n_e)] {
        let report =
            check_cdf_qf_equivalence(&fitted, &data, anchor, alpha, &grid_p, tol, Method::Lr)
                .map_err(|e| (exit_code_for(&e), e.to_string()))?;
        reports.push(report);
    }
    let report =
        check_life_strength_qf_equivalence(&fitted, &data, p, alpha, &grid_s, tol, Method::Lr)
            .map_err(|e| (exit_code_for(&e), e.to_string()))?;
    reports.push(report);

    // R1 transposition on the life cdf/qf pair
    let q = |pp: f64| fitted.spec.life_quantile(&fitted.theta_hat, pp, s_e);
    let (t_lo, t_hi) = (
        q(0.01).map_err(|e| (exit_code_for(&e), e.to_string()))?,
        q(0.99).map_err(|e| (exit_code_for(&e), e.to_string()))?,
    );
    let cdf_band = band(
        &fitted,
        &data,
        BandFamily::LifeCdf { s_e },
        &log_spaced(t_lo, t_hi, r1_points),
        alpha,
        Method::Lr,
    )
    .map_err(|e| (exit_code_for(&e), e.to_string()))?;
    let qf_band = band(
        &fitted,
        &data,
        BandFamily::LifeQf { s_e },
        &probability_grid(r1_points),
        alpha,
        Method::Lr,
    )
    .map_err(|e| (exit_code_for(&e), e.to_string()))?;
    let report = check_inverse_band_transpose(&cdf_band, &qf_band, tol)
        .map_err(|e| (exit_code_for(&e), e.to_string()))?;
    reports.push(report);

    let mut all_pass = true;
    for report in &reports {
        all_pass &= report.pass;
        println!(
            "equiv {:?}: {} (max discrepancy {:.3e}, tol {:.1e}, {} points, {} skipped)",
            report.result_id,
            if report.pass { "PASS" } else { "FAIL" },
            report.max_discrepancy,
            report.tolerance,
            report.checked_points,
            report.skipped_points,
        );
        checks.push(json!({
            "result_id": report.result_id,
            "pass": report.pass,
            "max_discrepancy": round_sig9(report.max_discrepancy),
            "tolerance": report.tolerance,
            "checked_points": report.checked_points,
            "skipped_points": report.skipped_points,
        }));
    }
    write_json(
        &session.out_dir.join("equiv.json"),
        &json!({
            "model_hash": model_hash(&fitted.spec),
            "orientation": match fitted.spec.orientation {
                Orientation::LifeSpecified => "life-specified",
                Orientation::StrengthSpecified => "strength-specified",
            },
            "alpha": alpha,
            "anchors": {"s_e": s_e, "n_e": round_sig9(n_e), "p": p},
            "checks": checks,
            "all_pass": all_pass,
        }),
    )?;
    Ok(if all_pass { 0 } else { 1 })
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

fn cmd_simulate(session: &Session) -> Result<i32, (i32, String)> {
    let sim = session.config.sim.as_ref().ok_or((
        EXIT_INPUT,
        "config has no `sim` section".to_string(),
    ))?;
    let design = sim.design(&session.config.model, session.seed);
    let progress = |done: usize| {
        if done % 100 == 0 {
            eprintln!("simulate: {done}/{} replicates", design.n_replicates);
        }
    };
    let report =
        coverage_study_with_progress(&design, &sim.target, session.alpha, Some(&progress))
            .map_err(|e| (exit_code_for(&e), e.to_string()))?;
    std::fs::write(
        session.out_dir.join("replicates.csv"),
        records_to_csv(&report.records),
    )
    .map_err(|e| (EXIT_INPUT, e.to_string()))?;
    let path = session.out_dir.join("coverage.json");
    write_json(
        &path,
        &json!({
            "target": report.target,
            "xi_true": round_sig9(report.xi_true),
            "nominal": report.nominal,
            "lr_coverage": round_sig9(report.lr_coverage),
            "wald_coverage": round_sig9(report.wald_coverage),
            "replicate_failures": report.replicate_failures,
            "n_effective": report.n_effective,
            "mc_stderr": round_sig9(report.mc_stderr),
            "seed": design.seed,
            "n_replicates": design.n_replicates,
        }),
    )?;
    println!(
        "simulate: LR coverage {} vs Wald {} (nominal {}) -> {}",
        round_sig9(report.lr_coverage),
        round_sig9(report.wald_coverage),
        report.nominal,
        path.display()
    );
    Ok(0)
}
