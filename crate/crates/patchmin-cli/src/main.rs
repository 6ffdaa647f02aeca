use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use patchmin_cli::config::{resolve, FileConfig, FlagOverrides, RunConfig};
use patchmin_cli::output::{emit_csv, emit_json, emit_svg};
use patchmin_cli::runner::{cmd_analyze, cmd_sweep_hemi, cmd_sweep_ruled, SweepRecord};
use patchmin_cli::{svg, CliError};

/// Variational area reduction for surfaces spanning fixed boundary curves.
#[derive(Parser)]
#[command(name = "patchmin", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline on a single surface and write a JSON report.
    Analyze(CommonArgs),
    /// Sweep the corner scale r of a ruled configuration; writes CSV.
    SweepRuled(CommonArgs),
    /// Sweep the half-cap semi-axes over a (b, c) grid; writes CSV.
    SweepHemi(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Surface family: ruled1, ruled2, hemiellipsoid or bilinear.
    #[arg(long)]
    surface: Option<String>,
    /// Corner scale for the ruled families.
    #[arg(long, allow_negative_numbers = true)]
    r: Option<f64>,
    /// Depth scale for the ruled families.
    #[arg(long, allow_negative_numbers = true)]
    d: Option<f64>,
    /// First semi-axis of the half cap.
    #[arg(long, allow_negative_numbers = true)]
    b: Option<f64>,
    /// Height of the half cap.
    #[arg(long, allow_negative_numbers = true)]
    c: Option<f64>,
    /// Twelve comma-separated numbers: four corners, x,y,z each.
    #[arg(long)]
    corners: Option<String>,
    /// Sweep start value.
    #[arg(long, allow_negative_numbers = true)]
    start: Option<f64>,
    /// Sweep stop value (inclusive).
    #[arg(long, allow_negative_numbers = true)]
    stop: Option<f64>,
    /// Sweep step (must be positive).
    #[arg(long, allow_negative_numbers = true)]
    step: Option<f64>,
    /// Tensor quadrature order for the fixed grids.
    #[arg(long)]
    quad_order: Option<usize>,
    /// Relative tolerance for adaptive integrals.
    #[arg(long, allow_negative_numbers = true)]
    quad_tol: Option<f64>,
    /// Objective: 'mu2' (curvature polynomial) or 'area' (direct search).
    #[arg(long)]
    minimize: Option<String>,
    /// Output path (JSON for analyze, CSV for sweeps).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write SVG plots next to the CSV.
    #[arg(long)]
    plot: bool,
    /// JSON config file; command-line flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
}

fn load_config(args: &CommonArgs, default_surface: Option<&str>) -> Result<RunConfig, CliError> {
    let file = match &args.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let flags = FlagOverrides {
        surface: args.surface.clone(),
        r: args.r,
        d: args.d,
        b: args.b,
        c: args.c,
        corners: args.corners.clone(),
        start: args.start,
        stop: args.stop,
        step: args.step,
        quad_order: args.quad_order,
        quad_tol: args.quad_tol,
        minimize: args.minimize.clone(),
        out: args.out.clone(),
        plot: args.plot,
    };
    resolve(file, flags, default_surface)
}

fn plot_stem(path: &std::path::Path) -> PathBuf {
    path.with_extension("")
}

fn write_ruled_plots(records: &[SweepRecord], csv_path: &std::path::Path) -> Result<(), CliError> {
    let stem = plot_stem(csv_path);
    let tmin: Vec<(f64, f64)> = records.iter().map(|r| (r.param1, r.t_min)).collect();
    let dec: Vec<(f64, f64)> = records
        .iter()
        .map(|r| (r.param1, r.decrease_percent))
        .collect();
    emit_svg(
        &svg::line_plot(&tmin, "Minimizing parameter t(r)", "r", "t_min"),
        &stem.with_extension("tmin.svg"),
    )?;
    emit_svg(
        &svg::line_plot(&dec, "Area decrease (%) vs r", "r", "decrease_percent"),
        &stem.with_extension("decrease.svg"),
    )
}

fn write_hemi_plots(records: &[SweepRecord], csv_path: &std::path::Path) -> Result<(), CliError> {
    let stem = plot_stem(csv_path);
    let mut bs: Vec<f64> = records.iter().map(|r| r.param1).collect();
    let mut cs: Vec<f64> = records.iter().map(|r| r.param2).collect();
    bs.dedup();
    cs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cs.dedup();
    // records arrive b-major and sorted, matching the heatmap layout
    let tmin: Vec<f64> = records.iter().map(|r| r.t_min).collect();
    let dec: Vec<f64> = records.iter().map(|r| r.decrease_percent).collect();
    emit_svg(
        &svg::heatmap(&bs, &cs, &tmin, "Minimizing parameter t(b, c)", "b", "c"),
        &stem.with_extension("tmin.svg"),
    )?;
    emit_svg(
        &svg::heatmap(&bs, &cs, &dec, "Area decrease (%) over (b, c)", "b", "c"),
        &stem.with_extension("decrease.svg"),
    )
}

fn run() -> Result<(), CliError> {
    let cli = Cli::parse();
    match cli.command {
        Command::Analyze(args) => {
            let cfg = load_config(&args, None)?;
            let report = cmd_analyze(&cfg)?;
            let out = cfg.out.clone().unwrap_or_else(|| "analysis.json".into());
            emit_json(&report, &out)?;
            println!(
                "{}: t_min={:.8} A0={:.8} A1={:.8} decrease={:.6}%",
                report.surface, report.t_min, report.a0, report.a1, report.decrease_percent
            );
            println!("report written to {}", out.display());
            Ok(())
        }
        Command::SweepRuled(args) => {
            let cfg = load_config(&args, Some("ruled1"))?;
            let records = cmd_sweep_ruled(&cfg)?;
            let out = cfg.out.clone().unwrap_or_else(|| "sweep_ruled.csv".into());
            emit_csv(&records, &out)?;
            if cfg.plot {
                write_ruled_plots(&records, &out)?;
            }
            println!("{} rows written to {}", records.len(), out.display());
            Ok(())
        }
        Command::SweepHemi(args) => {
            let cfg = load_config(&args, Some("hemiellipsoid"))?;
            let records = cmd_sweep_hemi(&cfg)?;
            let out = cfg.out.clone().unwrap_or_else(|| "sweep_hemi.csv".into());
            emit_csv(&records, &out)?;
            if cfg.plot {
                write_hemi_plots(&records, &out)?;
            }
            println!("{} rows written to {}", records.len(), out.display());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
