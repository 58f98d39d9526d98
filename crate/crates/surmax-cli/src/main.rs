//! `surmax` — surrogate maximum score estimation from the command line.
//!
//! Exit codes: 0 success, 1 data/numeric error (structured message on
//! stderr), 2 usage error. All randomness flows from `--seed`; fixed-seed
//! runs are byte-identical, including across worker counts.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use surmax::{mc, McConfig, McReport, Method, SimDesign};

mod report;
mod tables;

#[derive(Parser)]
#[command(name = "surmax", version, about = "Surrogate maximum score estimation for binary choice models", max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit one dataset from CSV and report estimates with inference.
    Fit(FitArgs),
    /// Monte Carlo run for a single design/method/sample-size cell.
    Simulate(SimulateArgs),
    /// RMSE table across designs and methods (n = 250 vs n = 1000).
    Table1(Table1Args),
    /// Coverage table for analytic and bootstrap confidence intervals.
    Table2(Table2Args),
    /// Export sampling-distribution arrays (draws, QQ pairs, densities) as CSV.
    Figures(FiguresArgs),
}

#[derive(Args)]
struct FitArgs {
    /// CSV file with header y,x1,...,xd.
    #[arg(long)]
    data: PathBuf,
    /// Loss: logistic, huber, probit, or maxscore.
    #[arg(long)]
    loss: String,
    /// Scale parameter of the surrogate loss (defaults per loss).
    #[arg(long)]
    a: Option<f64>,
    /// Radius of the coefficient ball.
    #[arg(long, default_value_t = 100.0)]
    radius: f64,
    /// Gradient tolerance of the optimizer.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Bootstrap resamples for a studentized interval (0 = no bootstrap).
    #[arg(long, default_value_t = 0)]
    boot: usize,
    /// Confidence level.
    #[arg(long, default_value_t = 0.95)]
    level: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    /// Design: normal, t5, or laplace.
    #[arg(long)]
    design: String,
    /// Method: maxscore, logistic, huber, or probit.
    #[arg(long)]
    method: String,
    /// Scale parameter override for surrogate methods.
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    reps: usize,
    /// What to compute: rmse, coverage, or distribution.
    #[arg(long, default_value = "rmse")]
    mode: String,
    /// Bootstrap resamples per replication (coverage mode).
    #[arg(long, default_value_t = 399)]
    boot: usize,
    #[arg(long, default_value_t = 0.95)]
    level: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads (0 = all cores); SURMAX_WORKERS overrides.
    #[arg(long, default_value_t = 0)]
    workers: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Table1Args {
    #[arg(long, default_value_t = 10_000)]
    reps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    workers: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Table2Args {
    #[arg(long, default_value_t = 10_000)]
    reps: usize,
    #[arg(long, default_value_t = 999)]
    boot: usize,
    #[arg(long, default_value_t = 0.95)]
    level: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    workers: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FiguresArgs {
    #[arg(long, default_value_t = 10_000)]
    reps: usize,
    #[arg(long, default_value_t = 1000)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Directory for the emitted CSV files.
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

fn worker_override(flag: usize) -> usize {
    match std::env::var("SURMAX_WORKERS") {
        Ok(v) => v.parse().unwrap_or(flag),
        Err(_) => flag,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Fit(args) => report::run_fit(args),
        Command::Simulate(args) => run_simulate(args),
        Command::Table1(args) => run_table1(args),
        Command::Table2(args) => run_table2(args),
        Command::Figures(args) => run_figures(args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

/// Usage-level validation failure: message plus exit code 2.
fn usage(msg: impl std::fmt::Display) -> surmax::Error {
    // Printed and mapped to exit 2 by the caller through this marker.
    surmax::Error::Config(format!("usage: {msg}"))
}

fn exit_usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {}", usage(msg));
    ExitCode::from(2)
}

fn write_report(report: &McReport, out: &Option<PathBuf>) -> surmax::Result<()> {
    if let Some(path) = out {
        let json = serde_json::to_string_pretty(report)
            .map_err(|e| surmax::Error::Io(e.to_string()))?;
        std::fs::write(path, json + "\n")?;
    }
    Ok(())
}

fn run_simulate(args: SimulateArgs) -> surmax::Result<ExitCode> {
    let design = match SimDesign::parse(&args.design) {
        Ok(d) => d,
        Err(e) => return Ok(exit_usage(e)),
    };
    let method = match Method::parse(&args.method, args.a) {
        Ok(m) => m,
        Err(e) => return Ok(exit_usage(e)),
    };
    let config = McConfig {
        designs: vec![design],
        methods: vec![method],
        sample_sizes: vec![args.n],
        reps: args.reps,
        boot_s: args.boot,
        level: args.level,
        master_seed: args.seed,
        workers: worker_override(args.workers),
    };
    let report = match args.mode.as_str() {
        "rmse" => mc::run_rmse(&config)?,
        "coverage" => mc::run_coverage(&config)?,
        "distribution" => mc::run_distribution(&config)?,
        other => return Ok(exit_usage(format!("unknown mode '{other}'; use rmse, coverage, or distribution"))),
    };
    eprintln!("simulate finished in {:.1}s", report.wall_time_secs);
    match &args.out {
        Some(_) => {
            write_report(&report, &args.out)?;
            println!("{}", tables::cell_summary(&report));
        }
        None => println!(
            "{}",
            serde_json::to_string_pretty(&report).map_err(|e| surmax::Error::Io(e.to_string()))?
        ),
    }
    Ok(ExitCode::SUCCESS)
}

fn run_table1(args: Table1Args) -> surmax::Result<ExitCode> {
    let mut config = McConfig::rmse_table(args.reps, args.seed);
    config.workers = worker_override(args.workers);
    let report = mc::run_rmse(&config)?;
    eprintln!("table1 finished in {:.1}s", report.wall_time_secs);
    print!("{}", tables::render_table1(&report));
    write_report(&report, &args.out)?;
    Ok(ExitCode::SUCCESS)
}

fn run_table2(args: Table2Args) -> surmax::Result<ExitCode> {
    let mut config = McConfig::coverage_table(args.reps, args.boot, args.seed);
    config.level = args.level;
    config.workers = worker_override(args.workers);
    let report = mc::run_coverage(&config)?;
    eprintln!("table2 finished in {:.1}s", report.wall_time_secs);
    print!("{}", tables::render_table2(&report));
    write_report(&report, &args.out)?;
    Ok(ExitCode::SUCCESS)
}

fn run_figures(args: FiguresArgs) -> surmax::Result<ExitCode> {
    let mut config = McConfig::distribution(args.reps, args.n, args.seed);
    config.workers = worker_override(args.workers);
    let report = mc::run_distribution(&config)?;
    eprintln!("figures finished in {:.1}s", report.wall_time_secs);
    std::fs::create_dir_all(&args.out_dir)?;

    let mut draws = String::from("design,method,n,rep,theta,se\n");
    let mut qq = String::from("design,method,n,normal_quantile,empirical_quantile\n");
    let mut density = String::from("design,method,n,theta,ref_pdf\n");
    for cell in &report.cells {
        let key = |s: &mut String| {
            s.push_str(&cell.design);
            s.push(',');
            s.push_str(&cell.method);
            s.push(',');
            s.push_str(&cell.n.to_string());
            s.push(',');
        };
        if let (Some(th), Some(se)) = (&cell.theta_draws, &cell.se_draws) {
            for (r, (t, s)) in th.iter().zip(se).enumerate() {
                key(&mut draws);
                draws.push_str(&format!("{r},{t},{s}\n"));
            }
        }
        if let Some(pairs) = &cell.qq {
            for p in pairs {
                key(&mut qq);
                qq.push_str(&format!("{},{}\n", p[0], p[1]));
            }
        }
        if let Some(grid) = &cell.density_ref {
            for p in grid {
                key(&mut density);
                density.push_str(&format!("{},{}\n", p[0], p[1]));
            }
        }
    }
    std::fs::write(args.out_dir.join("figures_draws.csv"), draws)?;
    std::fs::write(args.out_dir.join("figures_qq.csv"), qq)?;
    std::fs::write(args.out_dir.join("figures_density.csv"), density)?;
    println!(
        "wrote figures_draws.csv, figures_qq.csv, figures_density.csv to {}",
        args.out_dir.display()
    );
    Ok(ExitCode::SUCCESS)
}
