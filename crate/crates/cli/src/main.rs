//! `scatter`: cross-section sweeps, bound reports, semigroup-lab runs and a
//! self-test, all emitting CSV or JSON.

mod bounds;
mod config;
mod lab;
mod parse;
mod selftest;
mod sweep;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use config::ConfigFile;
use num_complex::Complex64;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "scatter", version, about = "Forward scattering by a dielectric sphere")]
struct Cli {
    /// JSON configuration file; command-line flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Normalized cross-sections over a size-parameter or phase-shift axis.
    Sweep(SweepArgs),
    /// Born-series norm bounds and validity criteria for real chi.
    Bounds(BoundsArgs),
    /// Semigroup laboratory on a voxelized ball.
    Lab(LabArgs),
    /// Oracle-agreement and invariant checks with a JSON summary.
    Selftest(SelftestArgs),
}

#[derive(clap::Args)]
struct SweepArgs {
    /// fig5-1, fig5-2 or fig5-3; other flags override the preset.
    #[arg(long)]
    preset: Option<String>,
    /// Refractive indices: comma-separated numbers or start:stop:step.
    #[arg(long)]
    n: Option<String>,
    /// Size parameter range start:stop:step or comma list.
    #[arg(long, conflicts_with = "rho")]
    kr: Option<String>,
    /// Phase-shift axis rho = 2 (n - 1) kR as start:stop:step or comma list.
    #[arg(long)]
    rho: Option<String>,
    /// Comma list from mie, rayleigh_gans (rg), semigroup (sg), vdh, evans_fournier (ef), rayleigh_quartic.
    #[arg(long)]
    methods: Option<String>,
    /// Mie orders: `auto` or a fixed count.
    #[arg(long)]
    truncation: Option<String>,
    /// Output CSV path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct BoundsArgs {
    /// Real susceptibility.
    #[arg(long, allow_hyphen_values = true)]
    chi: Option<String>,
    /// Size parameters: number, comma list or start:stop:step.
    #[arg(long)]
    kr: Option<String>,
    /// Relative-error threshold of the small-sphere criterion.
    #[arg(long)]
    threshold: Option<f64>,
    /// Emit JSON instead of CSV.
    #[arg(long)]
    json: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct LabArgs {
    /// Voxels across the diameter.
    #[arg(long)]
    voxels: Option<usize>,
    #[arg(long)]
    kr: Option<f64>,
    /// Susceptibilities for the resolvent comparison, Im chi < 0.
    #[arg(long, allow_hyphen_values = true)]
    chi: Option<String>,
    /// Final evolution time; defaults to 50 / ||G||.
    #[arg(long)]
    tau_max: Option<f64>,
    /// Magnitudes |chi| for the interior probe.
    #[arg(long)]
    skin: Option<String>,
    /// Probe support radius as a fraction of R.
    #[arg(long)]
    rho_f: Option<f64>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(clap::Args)]
struct SelftestArgs {
    #[arg(long, hide = true, value_enum)]
    inject_fault: Option<selftest::Fault>,
}

fn configure_threads(file: &ConfigFile) -> Result<()> {
    let threads = match std::env::var("SCATTER_THREADS") {
        Ok(v) => Some(
            v.trim()
                .parse::<usize>()
                .with_context(|| format!("SCATTER_THREADS must be a positive integer, got `{v}`"))?,
        ),
        Err(_) => file.threads,
    };
    if let Some(t) = threads {
        if t == 0 {
            bail!("thread count must be positive");
        }
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global().context("configuring the thread pool")?;
    }
    Ok(())
}

fn emit(out: Option<&Path>, body: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, body).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(body.as_bytes())?;
            Ok(stdout.flush()?)
        }
    }
}

fn cmd_sweep(a: SweepArgs, file: config::SweepFile) -> Result<()> {
    let preset_name = a.preset.or(file.preset);
    let mut spec = match preset_name.as_deref() {
        Some(p) => sweep::preset(p)?,
        None => sweep::SweepSpec {
            methods: sweep::parse_methods("mie,rayleigh_gans,semigroup")?,
            n: Vec::new(),
            axis: sweep::Axis::SizeParameter(Vec::new()),
            truncation: Default::default(),
        },
    };
    if let Some(m) = a.methods.or(file.methods) {
        spec.methods = sweep::parse_methods(&m)?;
    }
    if let Some(n) = a.n.or(file.n) {
        spec.n = parse::real_list(&n)?;
    }
    // a flag on either axis replaces both axis settings from the file
    let (kr, rho) = if a.kr.is_some() || a.rho.is_some() { (a.kr, a.rho) } else { (file.kr, file.rho) };
    match (kr, rho) {
        (Some(_), Some(_)) => bail!("give either a kR or a rho axis, not both"),
        (Some(k), None) => spec.axis = sweep::Axis::SizeParameter(parse::real_list(&k)?),
        (None, Some(r)) => spec.axis = sweep::Axis::PhaseShift(parse::real_list(&r)?),
        (None, None) => {}
    }
    if let Some(t) = a.truncation.or(file.truncation) {
        spec.truncation = sweep::parse_truncation(&t)?;
    }
    if spec.n.is_empty() {
        bail!("no refractive index given (use --n or --preset)");
    }
    let rows = sweep::run(&spec)?;
    emit(a.out.or(file.out.map(PathBuf::from)).as_deref(), &sweep::to_csv(&rows))
}

fn cmd_bounds(a: BoundsArgs, file: config::BoundsFile) -> Result<()> {
    let chi = parse::complex(&a.chi.or(file.chi).context("--chi is required")?)?;
    let krs = parse::real_list(&a.kr.or(file.kr).unwrap_or_else(|| "1".into()))?;
    let rows = bounds::run(chi, &krs, a.threshold.or(file.threshold).unwrap_or(0.1))?;
    let body = if a.json { serde_json::to_string_pretty(&rows)? + "\n" } else { bounds::to_csv(&rows) };
    emit(a.out.or(file.out.map(PathBuf::from)).as_deref(), &body)
}

fn cmd_lab(a: LabArgs, file: config::LabFile) -> Result<()> {
    let chi = match a.chi.or(file.chi) {
        Some(c) => parse::complex_list(&c)?,
        None => vec![Complex64::new(0.0, -0.5)],
    };
    let skin = match a.skin.or(file.skin) {
        Some(s) => parse::real_list(&s)?,
        None => vec![10.0, 100.0, 1000.0],
    };
    let spec = lab::LabSpec {
        voxels_per_diameter: a.voxels.or(file.voxels).unwrap_or(6),
        kr: a.kr.or(file.kr).unwrap_or(1.0),
        chi,
        tau_max: a.tau_max.or(file.tau_max),
        skin,
        rho_f: a.rho_f.or(file.rho_f).unwrap_or(0.5),
        out_dir: a.out_dir.or(file.out_dir.map(PathBuf::from)).unwrap_or_else(|| PathBuf::from("lab")),
    };
    let out = lab::run(&spec)?;
    lab::write(&out, &spec.out_dir)?;
    eprintln!("lab: {} voxels, files written to {}", out.voxels, spec.out_dir.display());
    Ok(())
}

fn run() -> Result<ExitCode> {
    let cli = Cli::parse();
    let file = ConfigFile::load(cli.config.as_deref())?;
    configure_threads(&file)?;
    match cli.command {
        Command::Sweep(a) => cmd_sweep(a, file.sweep)?,
        Command::Bounds(a) => cmd_bounds(a, file.bounds)?,
        Command::Lab(a) => cmd_lab(a, file.lab)?,
        Command::Selftest(a) => {
            let summary = selftest::run(a.inject_fault)?;
            println!("{}", serde_json::to_string_pretty(&summary)?);
            return Ok(if summary.passed { ExitCode::SUCCESS } else { ExitCode::FAILURE });
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
