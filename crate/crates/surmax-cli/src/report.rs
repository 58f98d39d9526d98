//! The `fit` subcommand: estimate, inference, JSON report.

use std::path::PathBuf;
use std::process::ExitCode;

use serde::Serialize;
use surmax::{
    bootstrap_studentized, ci_normal, fit, fit_maxscore_2d, load_csv, sandwich, CiReport, Dataset,
    FitOptions, FitResult, LossKind, LossSpec, MaxScoreFit, SandwichEstimate, Target,
};

use crate::FitArgs;

#[derive(Serialize)]
struct DataInfo {
    path: PathBuf,
    n: usize,
    d: usize,
}

#[derive(Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
enum MethodInfo {
    Maxscore,
    Surrogate { loss: String, a: f64 },
}

#[derive(Serialize)]
struct AngleInference {
    target: &'static str,
    estimate: f64,
    se: f64,
    ci_normal: CiReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    ci_boot: Option<CiReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    boot_rejections: Option<usize>,
    sandwich: SandwichEstimate,
}

#[derive(Serialize)]
struct CoordinateInference {
    coordinate: usize,
    ci_normal: CiReport,
}

#[derive(Serialize)]
struct FitReport {
    schema_version: u32,
    command: &'static str,
    data: DataInfo,
    method: MethodInfo,
    #[serde(skip_serializing_if = "Option::is_none")]
    fit: Option<FitResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    maxscore: Option<MaxScoreFit>,
    #[serde(skip_serializing_if = "Option::is_none")]
    inference: Option<AngleInference>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    per_coordinate: Vec<CoordinateInference>,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

pub fn run_fit(args: FitArgs) -> surmax::Result<ExitCode> {
    if args.loss == "maxscore" {
        if args.boot > 0 {
            return Ok(crate::exit_usage(
                "maxscore has no standard inference; --boot is not applicable",
            ));
        }
        let ds = load_csv(&args.data)?;
        let ms = fit_maxscore_2d(&ds)?;
        let report = FitReport {
            schema_version: 1,
            command: "fit",
            data: data_info(&args.data, &ds),
            method: MethodInfo::Maxscore,
            fit: None,
            maxscore: Some(ms),
            inference: None,
            per_coordinate: Vec::new(),
            note: Some(
                "conventional maximum score: cube-root asymptotics, no standard errors".into(),
            ),
        };
        return emit(&report, &args.out);
    }

    let kind = match LossKind::parse(&args.loss) {
        Ok(k) => k,
        Err(e) => return Ok(crate::exit_usage(e)),
    };
    let spec = match LossSpec::new(kind, args.a.unwrap_or_else(|| kind.default_scale())) {
        Ok(s) => s,
        Err(e) => return Ok(crate::exit_usage(e)),
    };
    if args.boot > 0 && args.boot < 99 {
        return Ok(crate::exit_usage("--boot must be at least 99 (or 0 to disable)"));
    }
    if !(0.0 < args.level && args.level < 1.0) {
        return Ok(crate::exit_usage("--level must be in (0,1)"));
    }

    let ds = load_csv(&args.data)?;
    if args.boot > 0 && ds.dim() != 2 {
        return Ok(crate::exit_usage(
            "--boot targets the 2-D angle; it is unavailable for d != 2",
        ));
    }
    let opts = FitOptions {
        radius: args.radius,
        grad_tol: args.tol,
        ..FitOptions::default()
    };
    let fit_res = fit(&ds, &spec, &opts)?;

    let (inference, per_coordinate, note) = if fit_res.on_boundary {
        (
            None,
            Vec::new(),
            Some(
                "maximizer on the ball boundary (possible perfect separation); \
                 sandwich inference is not valid there"
                    .into(),
            ),
        )
    } else if ds.dim() == 2 {
        let sw = sandwich(&ds, &spec, &fit_res.b_hat)?;
        let ci = ci_normal(&fit_res, &sw, &Target::Angle, args.level)?;
        let ci_boot = if args.boot > 0 {
            Some(bootstrap_studentized(
                &ds,
                &spec,
                &opts,
                &Target::Angle,
                args.boot,
                args.level,
                args.seed,
            )?)
        } else {
            None
        };
        let boot_rejections = ci_boot.as_ref().and_then(|c| c.boot_rejections);
        (
            Some(AngleInference {
                target: "angle",
                estimate: ci.estimate,
                se: ci.se,
                ci_normal: ci,
                ci_boot,
                boot_rejections,
                sandwich: sw,
            }),
            Vec::new(),
            None,
        )
    } else {
        let sw = sandwich(&ds, &spec, &fit_res.b_hat)?;
        let mut per = Vec::new();
        for j in 0..ds.dim() {
            let mut a = vec![0.0; ds.dim()];
            a[j] = 1.0;
            per.push(CoordinateInference {
                coordinate: j + 1,
                ci_normal: ci_normal(&fit_res, &sw, &Target::Linear(a), args.level)?,
            });
        }
        (None, per, Some("d != 2: reporting per-coordinate contrasts".into()))
    };

    let report = FitReport {
        schema_version: 1,
        command: "fit",
        data: data_info(&args.data, &ds),
        method: MethodInfo::Surrogate {
            loss: kind.name().into(),
            a: spec.scale(),
        },
        fit: Some(fit_res),
        maxscore: None,
        inference,
        per_coordinate,
        note,
    };
    emit(&report, &args.out)
}

fn data_info(path: &PathBuf, ds: &Dataset) -> DataInfo {
    DataInfo {
        path: path.clone(),
        n: ds.n(),
        d: ds.dim(),
    }
}

fn emit(report: &FitReport, out: &Option<PathBuf>) -> surmax::Result<ExitCode> {
    let json =
        serde_json::to_string_pretty(report).map_err(|e| surmax::Error::Io(e.to_string()))?;
    match out {
        Some(path) => {
            std::fs::write(path, json + "\n")?;
            println!("{}", human_summary(report));
        }
        None => println!("{json}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn human_summary(report: &FitReport) -> String {
    let mut s = String::new();
    if let Some(ms) = &report.maxscore {
        s.push_str(&format!(
            "maxscore: theta_hat = {:.6}, score = {:.4}, arc = [{:.6}, {:.6}]",
            ms.theta_hat, ms.score, ms.argmax_interval.0, ms.argmax_interval.1
        ));
        return s;
    }
    if let Some(f) = &report.fit {
        s.push_str(&format!(
            "b_hat = {:?}, objective = {:.6}, iterations = {}",
            f.b_hat, f.objective, f.iterations
        ));
        if let Some(w) = &f.warning {
            s.push_str(&format!("\nwarning: {w}"));
        }
    }
    if let Some(inf) = &report.inference {
        s.push_str(&format!(
            "\ntheta_hat = {:.6}, se = {:.6}, {:.0}% normal CI = [{:.6}, {:.6}]",
            inf.estimate,
            inf.se,
            inf.ci_normal.level * 100.0,
            inf.ci_normal.lo,
            inf.ci_normal.hi
        ));
        if let Some(cb) = &inf.ci_boot {
            s.push_str(&format!(
                "\nbootstrap CI = [{:.6}, {:.6}] ({} draws, {} rejections)",
                cb.lo,
                cb.hi,
                cb.boot_draws.unwrap_or(0),
                cb.boot_rejections.unwrap_or(0)
            ));
        }
    }
    s
}
