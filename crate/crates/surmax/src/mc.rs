//! Reproducible Monte Carlo experiments: RMSE scaling, confidence-interval
//! coverage, and sampling-distribution exports.
//!
//! Replications are embarrassingly parallel. Every replication derives its
//! dataset seed as `mix(master, REP, [design, n, rep, attempt])` and every
//! bootstrap stream gets its own child seed, so reports are bit-identical
//! across runs and across worker counts; aggregation walks results in
//! replication order after collection.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::ContinuousCDF;

use crate::baseline::fit_maxscore_2d;
use crate::dgp::{gen_dataset, SimDesign};
use crate::error::{Error, Result};
use crate::estimate::fit_angle;
use crate::infer::{angle_sandwich, bootstrap_studentized_angle, ci_normal_angle};
use crate::loss::{LossKind, LossSpec};
use crate::seed::{self, tag};

/// True angle of the simulation designs.
pub fn theta0() -> f64 {
    SimDesign::theta0()
}

/// Estimation method entering a Monte Carlo run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    MaxScore,
    Surrogate(LossSpec),
}

impl Method {
    /// The four methods of the RMSE table: the conventional baseline plus the
    /// three surrogate losses at their study scales.
    pub fn full_roster() -> Vec<Method> {
        let mut out = vec![Method::MaxScore];
        out.extend(Self::surrogate_roster());
        out
    }

    /// The three surrogate methods (the only ones with standard inference).
    pub fn surrogate_roster() -> Vec<Method> {
        [LossKind::Logistic, LossKind::PseudoHuber, LossKind::Probit]
            .into_iter()
            .map(|k| Method::Surrogate(LossSpec::with_default_scale(k)))
            .collect()
    }

    pub fn parse(name: &str, scale: Option<f64>) -> Result<Method> {
        if name == "maxscore" {
            return Ok(Method::MaxScore);
        }
        let kind = LossKind::parse(name)?;
        let spec = match scale {
            Some(a) => LossSpec::new(kind, a)?,
            None => LossSpec::with_default_scale(kind),
        };
        Ok(Method::Surrogate(spec))
    }

    pub fn label(&self) -> String {
        match self {
            Method::MaxScore => "maxscore".into(),
            Method::Surrogate(spec) => spec.kind.name().into(),
        }
    }

    fn seed_id(&self) -> u64 {
        match self {
            Method::MaxScore => 0,
            Method::Surrogate(spec) => {
                let k = match spec.kind {
                    LossKind::Logistic => 1u64,
                    LossKind::PseudoHuber => 2,
                    LossKind::Probit => 3,
                };
                k ^ spec.scale().to_bits().rotate_left(17)
            }
        }
    }
}

/// Configuration of a Monte Carlo run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct McConfig {
    pub designs: Vec<SimDesign>,
    pub methods: Vec<Method>,
    pub sample_sizes: Vec<usize>,
    pub reps: usize,
    /// Bootstrap resamples per replication (coverage runs only).
    pub boot_s: usize,
    pub level: f64,
    pub master_seed: u64,
    /// Worker threads; 0 means the rayon default. Not part of the report
    /// payload: results are identical for any worker count.
    #[serde(skip)]
    pub workers: usize,
}

impl McConfig {
    /// RMSE-table configuration: all designs, all four methods,
    /// n in {250, 1000}.
    pub fn rmse_table(reps: usize, master_seed: u64) -> Self {
        McConfig {
            designs: SimDesign::ALL.to_vec(),
            methods: Method::full_roster(),
            sample_sizes: vec![250, 1000],
            reps,
            boot_s: 0,
            level: 0.95,
            master_seed,
            workers: 0,
        }
    }

    /// Coverage-table configuration: all designs, surrogate methods,
    /// n in {250, 1000}.
    pub fn coverage_table(reps: usize, boot_s: usize, master_seed: u64) -> Self {
        McConfig {
            designs: SimDesign::ALL.to_vec(),
            methods: Method::surrogate_roster(),
            sample_sizes: vec![250, 1000],
            reps,
            boot_s,
            level: 0.95,
            master_seed,
            workers: 0,
        }
    }

    /// Distribution-export configuration at a single sample size.
    pub fn distribution(reps: usize, n: usize, master_seed: u64) -> Self {
        McConfig {
            designs: SimDesign::ALL.to_vec(),
            methods: Method::surrogate_roster(),
            sample_sizes: vec![n],
            reps,
            boot_s: 0,
            level: 0.95,
            master_seed,
            workers: 0,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.reps == 0 {
            return Err(Error::Config("reps must be at least 1".into()));
        }
        if self.sample_sizes.is_empty() {
            return Err(Error::Config("sample_sizes must be nonempty".into()));
        }
        if self.designs.is_empty() {
            return Err(Error::Config("designs must be nonempty".into()));
        }
        if self.methods.is_empty() {
            return Err(Error::Config("methods must be nonempty".into()));
        }
        if !(0.0 < self.level && self.level < 1.0) {
            return Err(Error::Config(format!(
                "level must be in (0,1), got {}",
                self.level
            )));
        }
        Ok(())
    }
}

/// Per-(design, method, n) summary.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct McCell {
    pub design: String,
    pub method: String,
    pub n: usize,
    pub reps: usize,
    pub rmse: f64,
    pub theta_mean: f64,
    pub theta_sd: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coverage_analytic: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coverage_boot: Option<f64>,
    /// Angle draws (wrapped around pi/4), present in distribution runs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta_draws: Option<Vec<f64>>,
    /// Per-replication analytic standard errors, present in distribution runs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub se_draws: Option<Vec<f64>>,
    /// (matched normal quantile, empirical quantile) pairs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub qq: Option<Vec<[f64; 2]>>,
    /// (theta, pdf) grid of the matched normal reference density.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub density_ref: Option<Vec<[f64; 2]>>,
}

/// RMSE(n_large) / RMSE(n_small) for one design and method.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct McRatio {
    pub design: String,
    pub method: String,
    pub n_small: usize,
    pub n_large: usize,
    pub ratio: f64,
}

/// Full report of one Monte Carlo run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct McReport {
    pub schema_version: u32,
    /// "rmse", "coverage", or "distribution".
    pub kind: String,
    pub config: McConfig,
    pub cells: Vec<McCell>,
    pub ratios: Vec<McRatio>,
    /// Total replication redraws across all cells.
    pub redraws: usize,
    /// Wall-clock seconds; excluded from serialized reports so fixed-seed
    /// outputs stay byte-identical.
    #[serde(skip)]
    pub wall_time_secs: f64,
}

pub const SCHEMA_VERSION: u32 = 1;

/// Wrap an angle to its representative nearest the true value pi/4.
pub fn wrap_theta(theta: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    theta - tau * ((theta - theta0()) / tau).round()
}

#[derive(Clone, Copy, PartialEq)]
enum Mode {
    Rmse,
    Coverage,
    Distribution,
}

struct RepOut {
    cell: usize,
    rep: usize,
    thetas: Vec<f64>,
    covers: Vec<Option<(bool, bool)>>,
    ses: Vec<Option<f64>>,
    redraws: usize,
}

const MAX_REP_ATTEMPTS: u64 = 100;

/// Run the RMSE experiment: fit every configured method on shared
/// per-replication datasets and aggregate the angle errors.
pub fn run_rmse(config: &McConfig) -> Result<McReport> {
    run(config, Mode::Rmse)
}

/// Run the coverage experiment: per replication, an analytic normal interval
/// and a studentized bootstrap interval for the angle; coverage is the
/// fraction of replications whose interval contains pi/4.
pub fn run_coverage(config: &McConfig) -> Result<McReport> {
    for m in &config.methods {
        if matches!(m, Method::MaxScore) {
            return Err(Error::Config(
                "coverage runs need surrogate methods; maxscore has no standard inference".into(),
            ));
        }
    }
    if config.boot_s < 99 {
        return Err(Error::Config(format!(
            "coverage runs need boot_s >= 99, got {}",
            config.boot_s
        )));
    }
    run(config, Mode::Coverage)
}

/// Run the distribution experiment: angle draws plus matched-normal QQ pairs
/// and a reference density grid per cell.
pub fn run_distribution(config: &McConfig) -> Result<McReport> {
    run(config, Mode::Distribution)
}

fn run(config: &McConfig, mode: Mode) -> Result<McReport> {
    config.validate()?;
    let start = std::time::Instant::now();

    let cells: Vec<(SimDesign, usize)> = config
        .designs
        .iter()
        .flat_map(|&d| config.sample_sizes.iter().map(move |&n| (d, n)))
        .collect();
    let total = cells.len() * config.reps;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::Config(format!("worker pool: {e}")))?;

    let outs: Result<Vec<RepOut>> = pool.install(|| {
        (0..total)
            .into_par_iter()
            .map(|t| {
                let cell = t / config.reps;
                let rep = t % config.reps;
                let (design, n) = cells[cell];
                run_rep(config, mode, cell, design, n, rep)
            })
            .collect()
    });
    let outs = outs?;

    let redraws: usize = outs.iter().map(|o| o.redraws).sum();
    if redraws * 100 > total {
        return Err(Error::ExperimentError {
            redraws,
            reps: total,
        });
    }

    // Deterministic aggregation in replication order.
    let n_methods = config.methods.len();
    let mut thetas = vec![vec![vec![0.0f64; config.reps]; n_methods]; cells.len()];
    let mut covers = vec![vec![vec![None; config.reps]; n_methods]; cells.len()];
    let mut ses = vec![vec![vec![None; config.reps]; n_methods]; cells.len()];
    for o in outs {
        for (m, &th) in o.thetas.iter().enumerate() {
            thetas[o.cell][m][o.rep] = th;
            covers[o.cell][m][o.rep] = o.covers[m];
            ses[o.cell][m][o.rep] = o.ses[m];
        }
    }

    let mut out_cells = Vec::new();
    for (ci, &(design, n)) in cells.iter().enumerate() {
        for (mi, method) in config.methods.iter().enumerate() {
            let draws = &thetas[ci][mi];
            let (mean, sd) = mean_sd(draws);
            let rmse = (draws
                .iter()
                .map(|&t| (t - theta0()) * (t - theta0()))
                .sum::<f64>()
                / draws.len() as f64)
                .sqrt();
            let (coverage_analytic, coverage_boot) = if mode == Mode::Coverage {
                let hits_a = covers[ci][mi]
                    .iter()
                    .filter(|c| matches!(c, Some((true, _))))
                    .count();
                let hits_b = covers[ci][mi]
                    .iter()
                    .filter(|c| matches!(c, Some((_, true))))
                    .count();
                (
                    Some(hits_a as f64 / config.reps as f64),
                    Some(hits_b as f64 / config.reps as f64),
                )
            } else {
                (None, None)
            };
            let (theta_draws, se_draws, qq, density_ref) = if mode == Mode::Distribution {
                let mut sorted = draws.clone();
                sorted.sort_by(f64::total_cmp);
                let se_vec: Option<Vec<f64>> = ses[ci][mi].iter().copied().collect();
                (
                    Some(draws.clone()),
                    se_vec,
                    Some(qq_pairs(&sorted, mean, sd)),
                    Some(density_grid(mean, sd)),
                )
            } else {
                (None, None, None, None)
            };
            out_cells.push(McCell {
                design: design.name().into(),
                method: method.label(),
                n,
                reps: config.reps,
                rmse,
                theta_mean: mean,
                theta_sd: sd,
                coverage_analytic,
                coverage_boot,
                theta_draws,
                se_draws,
                qq,
                density_ref,
            });
        }
    }

    let ratios = compute_ratios(config, &out_cells);

    Ok(McReport {
        schema_version: SCHEMA_VERSION,
        kind: match mode {
            Mode::Rmse => "rmse".into(),
            Mode::Coverage => "coverage".into(),
            Mode::Distribution => "distribution".into(),
        },
        config: config.clone(),
        cells: out_cells,
        ratios,
        redraws,
        wall_time_secs: start.elapsed().as_secs_f64(),
    })
}

fn run_rep(
    config: &McConfig,
    mode: Mode,
    cell: usize,
    design: SimDesign,
    n: usize,
    rep: usize,
) -> Result<RepOut> {
    for attempt in 0..MAX_REP_ATTEMPTS {
        let ds_seed = seed::mix(
            config.master_seed,
            tag::REP,
            &[design.seed_id(), n as u64, rep as u64, attempt],
        );
        let ds = gen_dataset(design, n, ds_seed);
        let mut thetas = Vec::with_capacity(config.methods.len());
        let mut covers = Vec::with_capacity(config.methods.len());
        let mut ses = Vec::with_capacity(config.methods.len());
        let mut failed = false;
        for method in &config.methods {
            match eval_method(config, mode, &ds, design, n, rep, method) {
                Ok((theta, cover, se)) => {
                    thetas.push(theta);
                    covers.push(cover);
                    ses.push(se);
                }
                Err(_) => {
                    failed = true;
                    break;
                }
            }
        }
        if !failed {
            return Ok(RepOut {
                cell,
                rep,
                thetas,
                covers,
                ses,
                redraws: attempt as usize,
            });
        }
    }
    Err(Error::ExperimentError {
        redraws: MAX_REP_ATTEMPTS as usize,
        reps: 1,
    })
}

#[allow(clippy::too_many_arguments)]
fn eval_method(
    config: &McConfig,
    mode: Mode,
    ds: &crate::dgp::Dataset,
    design: SimDesign,
    n: usize,
    rep: usize,
    method: &Method,
) -> Result<(f64, Option<(bool, bool)>, Option<f64>)> {
    match method {
        Method::MaxScore => {
            let f = fit_maxscore_2d(ds)?;
            Ok((wrap_theta(f.theta_hat), None, None))
        }
        Method::Surrogate(spec) => {
            let f = fit_angle(ds, spec)?;
            let theta = wrap_theta(f.theta_hat);
            match mode {
                Mode::Rmse => Ok((theta, None, None)),
                Mode::Distribution => {
                    let sw = angle_sandwich(ds, spec, f.theta_hat)?;
                    Ok((theta, None, Some(sw.se)))
                }
                Mode::Coverage => {
                    let shift = theta - f.theta_hat;
                    let sw = angle_sandwich(ds, spec, f.theta_hat)?;
                    let ci_a = ci_normal_angle(f.theta_hat, &sw, config.level)?;
                    let cover_a = ci_a.lo + shift <= theta0() && theta0() <= ci_a.hi + shift;
                    let boot_seed = seed::mix(
                        config.master_seed,
                        tag::BOOT,
                        &[design.seed_id(), n as u64, rep as u64, method.seed_id()],
                    );
                    let ci_b = bootstrap_studentized_angle(
                        ds,
                        spec,
                        f.theta_hat,
                        config.boot_s,
                        config.level,
                        boot_seed,
                    )?;
                    let cover_b = ci_b.lo + shift <= theta0() && theta0() <= ci_b.hi + shift;
                    Ok((theta, Some((cover_a, cover_b)), Some(sw.se)))
                }
            }
        }
    }
}

fn compute_ratios(config: &McConfig, cells: &[McCell]) -> Vec<McRatio> {
    if config.sample_sizes.len() != 2 {
        return Vec::new();
    }
    let n_small = *config.sample_sizes.iter().min().unwrap();
    let n_large = *config.sample_sizes.iter().max().unwrap();
    if n_small == n_large {
        return Vec::new();
    }
    let mut out = Vec::new();
    for design in &config.designs {
        for method in &config.methods {
            let find = |n: usize| {
                cells
                    .iter()
                    .find(|c| c.design == design.name() && c.method == method.label() && c.n == n)
                    .map(|c| c.rmse)
            };
            if let (Some(small), Some(large)) = (find(n_small), find(n_large)) {
                out.push(McRatio {
                    design: design.name().into(),
                    method: method.label(),
                    n_small,
                    n_large,
                    ratio: large / small,
                });
            }
        }
    }
    out
}

/// Mean and (population) standard deviation.
pub fn mean_sd(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Sample skewness (standardized third moment).
pub fn skewness(xs: &[f64]) -> f64 {
    let (mean, sd) = mean_sd(xs);
    let n = xs.len() as f64;
    xs.iter().map(|x| ((x - mean) / sd).powi(3)).sum::<f64>() / n
}

/// Excess kurtosis (standardized fourth moment minus 3).
pub fn excess_kurtosis(xs: &[f64]) -> f64 {
    let (mean, sd) = mean_sd(xs);
    let n = xs.len() as f64;
    xs.iter().map(|x| ((x - mean) / sd).powi(4)).sum::<f64>() / n - 3.0
}

/// Pearson correlation.
pub fn pearson_corr(xs: &[f64], ys: &[f64]) -> f64 {
    let (mx, sx) = mean_sd(xs);
    let (my, sy) = mean_sd(ys);
    let n = xs.len() as f64;
    xs.iter()
        .zip(ys)
        .map(|(x, y)| (x - mx) * (y - my))
        .sum::<f64>()
        / (n * sx * sy)
}

/// Correlation of sorted draws against matched normal quantiles — the QQ
/// linearity statistic behind the Q-Q plots.
pub fn normal_qq_correlation(draws: &[f64]) -> f64 {
    let mut sorted = draws.to_vec();
    sorted.sort_by(f64::total_cmp);
    let normal = statrs::distribution::Normal::new(0.0, 1.0).expect("unit normal");
    let n = sorted.len();
    let zs: Vec<f64> = (0..n)
        .map(|i| normal.inverse_cdf((i as f64 + 0.5) / n as f64))
        .collect();
    pearson_corr(&zs, &sorted)
}

fn qq_pairs(sorted: &[f64], mean: f64, sd: f64) -> Vec<[f64; 2]> {
    let normal = statrs::distribution::Normal::new(0.0, 1.0).expect("unit normal");
    let n = sorted.len();
    (0..n)
        .map(|i| {
            let z = normal.inverse_cdf((i as f64 + 0.5) / n as f64);
            [mean + sd * z, sorted[i]]
        })
        .collect()
}

const DENSITY_GRID_POINTS: usize = 401;
const DENSITY_GRID_HALF_WIDTH_SDS: f64 = 5.0;

fn density_grid(mean: f64, sd: f64) -> Vec<[f64; 2]> {
    let norm = 1.0 / (sd * (std::f64::consts::TAU).sqrt());
    (0..DENSITY_GRID_POINTS)
        .map(|i| {
            let z = -DENSITY_GRID_HALF_WIDTH_SDS
                + 2.0 * DENSITY_GRID_HALF_WIDTH_SDS * i as f64 / (DENSITY_GRID_POINTS - 1) as f64;
            let t = mean + sd * z;
            [t, norm * (-0.5 * z * z).exp()]
        })
        .collect()
}
