//! Study dispatch: builds problems from the config, runs the core
//! experiment, and emits artifacts (series CSVs, summary.json, manifest).
//!
//! Validation happens up front; nothing is written until the study inputs
//! are fully constructed, and the manifest is always the last file out.

use std::path::Path;
use std::time::Instant;

use serde_json::json;

use sgflab_core::operators::{check_hms, validate_forward_backward, CocoerciveOperator};
use sgflab_core::potentials::{
    check_error_bound, check_lojasiewicz, validate_prox, validate_smooth, CompositeProblem,
    NonsmoothTerm, SmoothPotential,
};
use sgflab_core::rates::{
    bound_cocoercive, bound_ergodic_convex, bound_pointwise_beta, bound_strongly_convex,
    check_bound, conjecture_study, estimate, fit_rate, strong_order_study, theta_sweep,
    BoundReport, EstimateConfig, GapSeries, Quantity, RateFit, RateModel,
};
use sgflab_core::sde::{simulate, BrownianPath, Problem, VolatilitySchedule};
use sgflab_core::smoothing::{validate_envelope, CompositeSmoothed, MoreauEnvelope};
use sgflab_core::BooleanReport;

use crate::config::Config;
use crate::output::{
    series_csv, trajectory_csv, write_atomic, write_manifest, ArtifactRecord,
};
use crate::CliError;

pub const STUDIES: &[&str] = &[
    "simulate",
    "estimate",
    "order",
    "theta-sweep",
    "coco",
    "conjecture",
    "check",
];

struct StudyOutput {
    artifacts: Vec<ArtifactRecord>,
    summary: serde_json::Value,
    console: String,
    /// Set when invariant checks failed: artifacts are still written, but
    /// the run exits with a numeric failure.
    failure: Option<String>,
}

/// Runs the configured study and writes its artifacts under `out_dir`.
pub fn run_study(config: &Config, out_dir: &Path) -> Result<String, CliError> {
    let started = Instant::now();
    let study = config.str_or("study", "");
    if study.is_empty() {
        return Err(CliError::Validation(format!(
            "missing 'study'; valid studies: {}",
            STUDIES.join(", ")
        )));
    }
    let seed = config.seed()?;

    let mut out = match study {
        "simulate" => study_simulate(config, seed, out_dir)?,
        "estimate" => study_estimate(config, seed, out_dir)?,
        "order" => study_order(config, seed, out_dir)?,
        "theta-sweep" => study_theta_sweep(config, seed, out_dir)?,
        "coco" => study_coco(config, seed, out_dir)?,
        "conjecture" => study_conjecture(config, seed, out_dir)?,
        "check" => study_check(config, seed, out_dir)?,
        other => {
            return Err(CliError::Validation(format!(
                "unknown study '{other}'; valid studies: {}",
                STUDIES.join(", ")
            )))
        }
    };

    // resolved config echo (seed folded in) for summary and manifest
    let mut echo = config.entries().clone();
    echo.insert("seed".into(), seed.to_string());
    echo.insert("study".into(), study.to_string());

    let summary = json!({
        "study": study,
        "seed": seed,
        "config": echo,
        "result": out.summary,
    });
    let summary_json = serde_json::to_string_pretty(&summary)
        .map_err(|e| CliError::Io(format!("serializing summary: {e}")))?;
    out.artifacts
        .push(write_atomic(out_dir, "summary.json", summary_json.as_bytes())?);

    let manifest = write_manifest(
        out_dir,
        study,
        seed,
        &echo,
        &out.artifacts,
        started.elapsed().as_millis(),
    )?;

    let mut console = out.console;
    console.push_str(&format!(
        "wrote {} artifact(s) to {}\n",
        out.artifacts.len() + 1,
        out_dir.display()
    ));
    let _ = manifest;

    match out.failure {
        Some(msg) => Err(CliError::Numeric(msg)),
        None => Ok(console),
    }
}

// ---------------------------------------------------------------- builders

fn build_smooth(config: &Config) -> Result<SmoothPotential, CliError> {
    match config.str_or("problem.name", "quadratic") {
        "quadratic" => {
            let eigs = config
                .f64_list("problem.eigenvalues")?
                .unwrap_or_else(|| vec![1.0]);
            let center = config
                .f64_list("problem.center")?
                .unwrap_or_else(|| vec![0.0; eigs.len()]);
            Ok(SmoothPotential::quadratic(&eigs, &center)?)
        }
        "power" => {
            let r = config.f64_or("problem.r", 4.0)?;
            let dim = config.usize_or("problem.dim", 1)?;
            Ok(SmoothPotential::power_norm(dim, r)?)
        }
        other => Err(CliError::Validation(format!(
            "problem '{other}' is not a smooth catalog entry; valid: quadratic, power \
             (composite problems run through the theta-sweep and coco studies)"
        ))),
    }
}

fn build_composite(config: &Config) -> Result<CompositeProblem, CliError> {
    let name = config.str_or("problem.name", "composite");
    if name != "composite" {
        return Err(CliError::Validation(format!(
            "this study needs problem.name = composite, got '{name}'"
        )));
    }
    let eigs = config
        .f64_list("problem.eigenvalues")?
        .unwrap_or_else(|| vec![1.0]);
    let center = config
        .f64_list("problem.center")?
        .unwrap_or_else(|| vec![1.0; eigs.len()]);
    match config.str_or("problem.g", "l1") {
        "l1" => {
            let w = config.f64_or("problem.l1_weight", 1.0)?;
            Ok(CompositeProblem::quadratic_plus_l1(&eigs, &center, w)?)
        }
        "box" => {
            let lo = config
                .f64_list("problem.box_lo")?
                .unwrap_or_else(|| vec![-1.0; eigs.len()]);
            let hi = config
                .f64_list("problem.box_hi")?
                .unwrap_or_else(|| vec![1.0; eigs.len()]);
            Ok(CompositeProblem::quadratic_plus_box(&eigs, &center, &lo, &hi)?)
        }
        other => Err(CliError::Validation(format!(
            "unknown nonsmooth term '{other}'; valid: l1, box"
        ))),
    }
}

fn build_vol(config: &Config, dim: usize) -> Result<VolatilitySchedule, CliError> {
    let sigma0 = config.f64_or("vol.sigma0", 0.5)?;
    let alpha = config.f64_or("vol.alpha", 0.0)?;
    let kind = config.str_or("vol.kind", "auto");
    let vol = match kind {
        "zero" => VolatilitySchedule::zero(dim),
        "constant" => VolatilitySchedule::constant(dim, sigma0)?,
        "decreasing" => VolatilitySchedule::decreasing(dim, sigma0, alpha)?,
        "multiplicative" => VolatilitySchedule::multiplicative(dim, sigma0, alpha)?,
        "auto" => {
            if sigma0 == 0.0 {
                VolatilitySchedule::zero(dim)
            } else if alpha > 0.0 {
                VolatilitySchedule::decreasing(dim, sigma0, alpha)?
            } else {
                VolatilitySchedule::constant(dim, sigma0)?
            }
        }
        other => {
            return Err(CliError::Validation(format!(
                "unknown vol.kind '{other}'; valid: auto, zero, constant, decreasing, multiplicative"
            )))
        }
    };
    Ok(vol)
}

struct RunParams {
    x0: Vec<f64>,
    horizon: f64,
    level: u32,
    n_paths: usize,
    stride: usize,
}

fn run_params(config: &Config, dim: usize, default_paths: usize) -> Result<RunParams, CliError> {
    let horizon = config.f64_or("T", 10.0)?;
    if !(horizon > 0.0) {
        return Err(CliError::Validation(format!("T must be positive, got {horizon}")));
    }
    let level = config.u32_or("level", 9)?;
    if level > 30 {
        return Err(CliError::Validation(format!("level {level} too deep (max 30)")));
    }
    let n_paths = config.usize_or("paths", default_paths)?;
    let stride = config.usize_or("stride", 8)?;
    if stride == 0 {
        return Err(CliError::Validation("stride must be >= 1".into()));
    }
    let x0 = config.f64_list("x0")?.unwrap_or_else(|| vec![1.0; dim]);
    if x0.len() != dim {
        return Err(CliError::Validation(format!(
            "x0 has {} entries but the problem dimension is {dim}",
            x0.len()
        )));
    }
    Ok(RunParams {
        x0,
        horizon,
        level,
        n_paths,
        stride,
    })
}

fn fit_from_config(
    config: &Config,
    series: &GapSeries,
    horizon: f64,
) -> Result<Option<RateFit>, CliError> {
    let model = match config.str_or("fit.model", "none") {
        "none" => return Ok(None),
        "power" => RateModel::Power,
        "exp" => RateModel::Exponential,
        other => {
            return Err(CliError::Validation(format!(
                "unknown fit.model '{other}'; valid: none, power, exp"
            )))
        }
    };
    // the default window skips the transient; fit.floor additionally drops
    // times where the mean has sunk into a known noise floor
    let lo = config.f64_or("fit.lo", 0.1 * horizon)?;
    let hi = config.f64_or("fit.hi", horizon)?;
    let floor = config.f64_or("fit.floor", 0.0)?;
    if floor > 0.0 {
        let mut filtered = series.clone();
        for (m, keep) in filtered
            .mean
            .iter_mut()
            .zip(series.mean.iter().map(|&m| m >= 3.0 * floor))
        {
            if !keep {
                *m = 0.0; // nonpositive means are excluded from fits
            }
        }
        return Ok(Some(fit_rate(&filtered, model, (lo, hi))?));
    }
    Ok(Some(fit_rate(series, model, (lo, hi))?))
}

// ----------------------------------------------------------------- studies

fn study_simulate(config: &Config, seed: u64, out: &Path) -> Result<StudyOutput, CliError> {
    let problem = match config.str_or("problem.name", "quadratic") {
        "composite" => {
            let pair = build_composite(config)?;
            let theta = config.f64_or("sim.theta", 0.1)?;
            let env = MoreauEnvelope::new(pair.g.clone(), theta)?;
            Problem::Composite(CompositeSmoothed::new(pair.f.clone(), env)?)
        }
        _ => Problem::Smooth(build_smooth(config)?),
    };
    let dim = problem.dim();
    let p = run_params(config, dim, 1)?;
    let vol = build_vol(config, dim)?;

    let mut artifacts = Vec::new();
    let mut final_states = Vec::new();
    for i in 0..p.n_paths {
        let path = BrownianPath::sample(seed, i as u64, p.horizon, p.level, dim)?;
        let traj = simulate(&problem, &vol, &p.x0, p.horizon, p.level, &path, p.stride)?;
        let csv = trajectory_csv(&traj);
        artifacts.push(write_atomic(out, &format!("path_{i:04}.csv"), csv.as_bytes())?);
        final_states.push(traj.state(traj.len() - 1).to_vec());
    }
    let console = format!(
        "simulate: {} path(s), T={}, h={}\n",
        p.n_paths,
        p.horizon,
        p.horizon / (1u64 << p.level) as f64
    );
    Ok(StudyOutput {
        artifacts,
        summary: json!({ "paths": p.n_paths, "final_states": final_states }),
        console,
        failure: None,
    })
}

fn parse_quantity(s: &str) -> Result<Quantity, CliError> {
    Ok(match s {
        "gap" => Quantity::ObjectiveGap,
        "ergodic-gap" => Quantity::ErgodicObjectiveGap,
        "dist2" => Quantity::SqDistance,
        "opnorm2" => Quantity::OperatorNormSq,
        "ergodic-opnorm2" => Quantity::ErgodicOperatorNormSq,
        other => {
            return Err(CliError::Validation(format!(
                "unknown quantity '{other}'; valid: gap, ergodic-gap, dist2, opnorm2, ergodic-opnorm2"
            )))
        }
    })
}

#[allow(clippy::type_complexity)]
fn resolve_bound(
    config: &Config,
    f: &SmoothPotential,
    vol: &VolatilitySchedule,
    dist0_sq: f64,
    quantity: Quantity,
) -> Result<Option<(String, Box<dyn Fn(f64) -> f64>)>, CliError> {
    let requested = config.str_or("estimate.bound", "auto");
    let name = match requested {
        "none" => return Ok(None),
        "auto" => match quantity {
            Quantity::ErgodicObjectiveGap => "ergodic-convex",
            Quantity::SqDistance if f.strong_mu.is_some() => {
                if vol.is_decreasing() && vol.alpha > 0.0 {
                    "strongly-convex-split"
                } else {
                    "strongly-convex"
                }
            }
            Quantity::ObjectiveGap if vol.beta_certificate().is_some() => "pointwise-beta",
            _ => return Ok(None),
        },
        other => other,
    };
    let sigma_star_sq = vol.sigma_star_sq();
    let bound: Box<dyn Fn(f64) -> f64> = match name {
        "ergodic-convex" => {
            Box::new(move |t| bound_ergodic_convex(dist0_sq, sigma_star_sq, t).unwrap())
        }
        "strongly-convex" => {
            let mu = f.strong_mu.ok_or_else(|| {
                CliError::Validation("strongly-convex bound needs a strongly convex problem".into())
            })?;
            Box::new(move |t| {
                bound_strongly_convex(dist0_sq, mu, sigma_star_sq, t, None, None).unwrap()
            })
        }
        "strongly-convex-split" => {
            let mu = f.strong_mu.ok_or_else(|| {
                CliError::Validation("strongly-convex bound needs a strongly convex problem".into())
            })?;
            let lambda = config.f64_or("bound.lambda", 0.5)?;
            if !(0.0 < lambda && lambda < 1.0) {
                return Err(CliError::Validation(format!(
                    "bound.lambda must lie in (0,1), got {lambda}"
                )));
            }
            if !vol.is_decreasing() {
                return Err(CliError::Validation(
                    "split bound needs a decreasing noise envelope".into(),
                ));
            }
            let v = vol.clone();
            Box::new(move |t| {
                let sig = |s: f64| v.sigma_inf_sq(s);
                bound_strongly_convex(dist0_sq, mu, sigma_star_sq, t, Some(lambda), Some(&sig))
                    .unwrap()
            })
        }
        "pointwise-beta" => {
            let (k, beta) = vol.beta_certificate().ok_or_else(|| {
                CliError::Validation(
                    "pointwise-beta bound needs a square-integrable decreasing envelope".into(),
                )
            })?;
            let l = f.lipschitz_l;
            Box::new(move |t| bound_pointwise_beta(dist0_sq, k, beta, l, t).unwrap())
        }
        other => {
            return Err(CliError::Validation(format!(
                "unknown bound '{other}'; valid: none, auto, ergodic-convex, strongly-convex, \
                 strongly-convex-split, pointwise-beta"
            )))
        }
    };
    Ok(Some((name.to_string(), bound)))
}

fn study_estimate(config: &Config, seed: u64, out: &Path) -> Result<StudyOutput, CliError> {
    let f = build_smooth(config)?;
    let dim = f.dim;
    let p = run_params(config, dim, 1000)?;
    if p.n_paths < 2 {
        return Err(CliError::Validation("estimate needs paths >= 2".into()));
    }
    let vol = build_vol(config, dim)?;
    let quantity = parse_quantity(config.str_or("estimate.quantity", "ergodic-gap"))?;
    if matches!(quantity, Quantity::OperatorNormSq | Quantity::ErgodicOperatorNormSq) {
        return Err(CliError::Validation(
            "operator quantities run through the coco study".into(),
        ));
    }
    let dist0_sq = f.dist_to_argmin(&p.x0).powi(2);
    let bound = resolve_bound(config, &f, &vol, dist0_sq, quantity)?;

    let series = estimate(
        &EstimateConfig {
            problem: Problem::Smooth(f),
            vol,
            x0: p.x0.clone(),
            horizon: p.horizon,
            level: p.level,
            n_paths: p.n_paths,
            seed,
            record_stride: p.stride,
        },
        quantity,
    )?;

    let report: Option<BoundReport> = bound
        .as_ref()
        .map(|(name, b)| check_bound(&series, name.clone(), format!("dist0_sq={dist0_sq}"), b));
    let fit = fit_from_config(config, &series, p.horizon)?;

    let csv = series_csv(
        &series.times,
        &series.mean,
        &series.ci_halfwidth,
        report.as_ref().map(|r| r.bound_values.as_slice()),
    );
    let artifacts = vec![write_atomic(out, "series.csv", csv.as_bytes())?];

    let mut console = format!(
        "estimate[{}]: {} paths, final mean {} (ci {})\n",
        quantity.label(),
        series.n_paths,
        series.mean.last().unwrap(),
        series.ci_halfwidth.last().unwrap()
    );
    if let Some(r) = &report {
        console.push_str(&format!(
            "bound {}: {} violation(s) over {} times\n",
            r.bound_name,
            r.violations,
            r.times.len()
        ));
    }
    if let Some(ft) = &fit {
        console.push_str(&format!(
            "fit {:?}: exponent {:.4}, r2 {:.4}\n",
            ft.model, ft.exponent, ft.r2
        ));
    }
    Ok(StudyOutput {
        artifacts,
        summary: json!({
            "quantity": quantity.label(),
            "n_paths": series.n_paths,
            "dist0_sq": dist0_sq,
            "final_mean": series.mean.last(),
            "final_ci": series.ci_halfwidth.last(),
            "bound": report.as_ref().map(|r| json!({
                "name": r.bound_name,
                "violations": r.violations,
            })),
            "fit": fit,
        }),
        console,
        failure: None,
    })
}

fn study_order(config: &Config, seed: u64, out: &Path) -> Result<StudyOutput, CliError> {
    let f = build_smooth(config)?;
    let dim = f.dim;
    let p = run_params(config, dim, 2000)?;
    let vol = build_vol(config, dim)?;
    let levels = config
        .u32_list("order.levels")?
        .unwrap_or_else(|| vec![6, 7, 8, 9, 10, 13]);
    let res = strong_order_study(
        &Problem::Smooth(f),
        &vol,
        &p.x0,
        p.horizon,
        &levels,
        p.n_paths,
        seed,
    )?;

    let mut csv = String::from("level,h,state_err_sq,gap_err\n");
    for row in &res.rows {
        csv.push_str(&format!(
            "{},{},{},{}\n",
            row.level,
            crate::output::fmt_f64(row.h),
            crate::output::fmt_f64(row.mean_sup_state_err_sq),
            crate::output::fmt_f64(row.mean_abs_gap_diff)
        ));
    }
    let artifacts = vec![write_atomic(out, "order.csv", csv.as_bytes())?];
    let console = format!(
        "order: state order {:.3} (r2 {:.3}), gap slope {:.3}, gap monotone: {}\n",
        res.state_order, res.state_r2, res.gap_order, res.gap_monotone
    );
    Ok(StudyOutput {
        artifacts,
        summary: serde_json::to_value(&res).map_err(|e| CliError::Io(e.to_string()))?,
        console,
        failure: None,
    })
}

fn study_theta_sweep(config: &Config, seed: u64, out: &Path) -> Result<StudyOutput, CliError> {
    let pair = build_composite(config)?;
    let dim = pair.dim();
    let p = run_params(config, dim, 2000)?;
    let vol = build_vol(config, dim)?;
    let thetas = config
        .f64_list("sweep.thetas")?
        .unwrap_or_else(|| vec![0.5, 0.1, 0.02]);
    let epsilon = config.f64_or("sweep.epsilon", 0.01)?;
    let res = theta_sweep(
        &pair, &vol, &p.x0, p.horizon, p.level, &thetas, p.n_paths, seed, p.stride, epsilon,
    )?;

    let mut artifacts = Vec::new();
    let mut table = String::from("theta,final_gap,final_bound,violations\n");
    for (i, row) in res.rows.iter().enumerate() {
        let csv = series_csv(&row.times, &row.mean_gap, &row.ci_halfwidth, Some(&row.bound));
        artifacts.push(write_atomic(
            out,
            &format!("sweep_theta_{i}.csv"),
            csv.as_bytes(),
        )?);
        table.push_str(&format!(
            "{},{},{},{}\n",
            crate::output::fmt_f64(row.theta),
            crate::output::fmt_f64(row.final_gap),
            crate::output::fmt_f64(*row.bound.last().unwrap()),
            row.violations
        ));
    }
    artifacts.push(write_atomic(out, "sweep.csv", table.as_bytes())?);

    let total_violations: usize = res.rows.iter().map(|r| r.violations).sum();
    let console = format!(
        "theta-sweep: C0 = {:.4}, recommended theta = {:.6} (t >= {:.2}), total violations {}\n",
        res.c0, res.recommended_theta, res.recommended_t_min, total_violations
    );
    Ok(StudyOutput {
        artifacts,
        summary: serde_json::to_value(&res).map_err(|e| CliError::Io(e.to_string()))?,
        console,
        failure: None,
    })
}

fn study_coco(config: &Config, seed: u64, out: &Path) -> Result<StudyOutput, CliError> {
    let pair = build_composite(config)?;
    let dim = pair.dim();
    let p = run_params(config, dim, 1000)?;
    if p.n_paths < 2 {
        return Err(CliError::Validation("coco needs paths >= 2".into()));
    }
    let vol = build_vol(config, dim)?;
    let mu = config.f64_or("coco.mu", 1.0)?;
    let op = CocoerciveOperator::forward_backward(&pair, mu)?;
    let rho = op.rho;
    let dist0_sq: f64 = p
        .x0
        .iter()
        .zip(&pair.minimizer)
        .map(|(a, b)| (a - b) * (a - b))
        .sum();

    let quantity = parse_quantity(config.str_or("estimate.quantity", "ergodic-opnorm2"))?;
    if !matches!(quantity, Quantity::OperatorNormSq | Quantity::ErgodicOperatorNormSq) {
        return Err(CliError::Validation(
            "coco tracks opnorm2 or ergodic-opnorm2".into(),
        ));
    }
    let series = estimate(
        &EstimateConfig {
            problem: Problem::Operator(op),
            vol: vol.clone(),
            x0: p.x0.clone(),
            horizon: p.horizon,
            level: p.level,
            n_paths: p.n_paths,
            seed,
            record_stride: p.stride,
        },
        quantity,
    )?;

    // the ergodic guarantee covers the time-averaged series
    let sigma_star_sq = vol.sigma_star_sq();
    let report = if quantity == Quantity::ErgodicOperatorNormSq {
        Some(check_bound(
            &series,
            "cocoercive-ergodic",
            format!("rho={rho}, dist0_sq={dist0_sq}"),
            |t| bound_cocoercive(dist0_sq, rho, sigma_star_sq, t, true, None).unwrap(),
        ))
    } else {
        None
    };

    let csv = series_csv(
        &series.times,
        &series.mean,
        &series.ci_halfwidth,
        report.as_ref().map(|r| r.bound_values.as_slice()),
    );
    let artifacts = vec![write_atomic(out, "series.csv", csv.as_bytes())?];
    let mut console = format!(
        "coco[mu={mu}]: rho = {rho}, final mean {}\n",
        series.mean.last().unwrap()
    );
    if let Some(r) = &report {
        console.push_str(&format!("bound {}: {} violation(s)\n", r.bound_name, r.violations));
    }
    Ok(StudyOutput {
        artifacts,
        summary: json!({
            "mu": mu,
            "rho": rho,
            "dist0_sq": dist0_sq,
            "quantity": quantity.label(),
            "final_mean": series.mean.last(),
            "violations": report.as_ref().map(|r| r.violations),
        }),
        console,
        failure: None,
    })
}

fn study_conjecture(config: &Config, seed: u64, out: &Path) -> Result<StudyOutput, CliError> {
    let r = config.f64_or("problem.r", 4.0)?;
    let sigma0 = config.f64_or("vol.sigma0", 0.3)?;
    let horizon = config.f64_or("T", 200.0)?;
    let level = config.u32_or("level", 12)?;
    let n_paths = config.usize_or("paths", 200)?;
    let stride = config.usize_or("stride", 64)?;
    let x0 = config.f64_list("x0")?.unwrap_or_else(|| vec![0.8]);
    let window = match (config.get("fit.lo"), config.get("fit.hi")) {
        (Some(_), Some(_)) => Some((config.f64_or("fit.lo", 0.0)?, config.f64_or("fit.hi", 0.0)?)),
        _ => None,
    };
    let res = conjecture_study(r, sigma0, &x0, horizon, level, n_paths, seed, stride, window)?;

    let csv = series_csv(
        &res.series.times,
        &res.series.mean,
        &res.series.ci_halfwidth,
        None,
    );
    let artifacts = vec![write_atomic(out, "series.csv", csv.as_bytes())?];

    let console = format!(
        "EXPLORATORY conjecture[r={r}]: fitted exponent {:.4} (r2 {:.3}){}\n",
        res.fit.exponent,
        res.fit.r2,
        match (res.conjectured_exponent, res.distance_to_conjecture) {
            (Some(c), Some(d)) => format!(", conjectured {c:.4}, distance {d:.4}"),
            _ => ", exponential branch (r = 2)".to_string(),
        }
    );
    let mut summary = serde_json::to_value(&res).map_err(|e| CliError::Io(e.to_string()))?;
    summary["label"] = json!("EXPLORATORY");
    Ok(StudyOutput {
        artifacts,
        summary,
        console,
        failure: None,
    })
}

fn study_check(config: &Config, seed: u64, out: &Path) -> Result<StudyOutput, CliError> {
    let samples = config.usize_or("check.samples", 1000)?;
    let radius = config.f64_or("check.radius", 1.0)?;
    let f = build_smooth(config)?;
    let dim = f.dim;

    let mut reports: Vec<BooleanReport> = Vec::new();
    reports.extend(validate_smooth(&f, samples, seed));
    let check_radius = f.eb_radius.unwrap_or(radius.max(1.0) * 3.0);
    if f.loja_q.is_some() {
        reports.push(check_lojasiewicz(&f, check_radius, samples, seed)?);
    }
    if let (Some(_), Some(gamma)) = (f.eb_exponent_p, f.eb_gamma) {
        reports.push(check_error_bound(&f, check_radius, samples, gamma, seed)?);
    }

    // prox and envelope suites on the standard terms at this dimension
    let l1 = NonsmoothTerm::abs_l1(dim)?;
    let quad_term = NonsmoothTerm::quadratic_term(dim, 1.0)?;
    let boxed = NonsmoothTerm::indicator_box(&vec![-1.0; dim], &vec![1.0; dim])?;
    for term in [&l1, &quad_term, &boxed] {
        reports.push(validate_prox(term, samples.min(500), seed));
    }
    reports.extend(validate_envelope(&l1, samples.min(300), seed));
    reports.extend(validate_envelope(&quad_term, samples.min(300), seed));

    // operator layer on the matching composite pair (quadratic f only)
    if config.str_or("problem.name", "quadratic") == "quadratic" {
        let eigs = config
            .f64_list("problem.eigenvalues")?
            .unwrap_or_else(|| vec![1.0]);
        let center = config
            .f64_list("problem.center")?
            .unwrap_or_else(|| vec![0.0; eigs.len()]);
        let pair = CompositeProblem::quadratic_plus_l1(&eigs, &center, 1.0)?;
        let lambda = 1.0 / pair.f.lipschitz_l;
        let mus = [0.5 * lambda, lambda, 1.5 * lambda];
        reports.extend(validate_forward_backward(&pair, &mus, 10_000, seed)?);
        // subregularity of the gradient operator around the minimizer
        let grad_op = CocoerciveOperator::from_gradient(&f)?;
        reports.push(check_hms(&grad_op, radius, 10_000, seed)?);
    }

    let mut console = String::from("invariant checks:\n");
    let mut failures = 0usize;
    for rep in &reports {
        console.push_str(&format!("  {rep}\n"));
        if !rep.pass {
            failures += 1;
        }
    }
    console.push_str(&format!(
        "{} of {} checks passed\n",
        reports.len() - failures,
        reports.len()
    ));

    let json_body = serde_json::to_string_pretty(&reports)
        .map_err(|e| CliError::Io(format!("serializing checks: {e}")))?;
    let artifacts = vec![write_atomic(out, "check.json", json_body.as_bytes())?];

    Ok(StudyOutput {
        artifacts,
        summary: json!({
            "checks": reports.len(),
            "failures": failures,
        }),
        console,
        failure: if failures > 0 {
            Some(format!("{failures} invariant check(s) failed"))
        } else {
            None
        },
    })
}
