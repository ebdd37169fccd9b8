use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use esfp::harness::config::parse_window;
use esfp::harness::plot::{gnuplot_script, histogram_csv, write_text};
use esfp::harness::{analyze, analyze_records, run_with, write_csv, Preset, SimConfig};
use esfp::{compute_moments, eigenvalues_cardan, select_nu, Execution, NoiseStream};

#[derive(Parser)]
#[command(
    name = "esfp",
    version,
    about = "Homogeneous ES-Fokker-Planck particle solver"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a simulation and write its time series as CSV.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Override the seed from the config file.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the output path from the config file.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write a gnuplot script and a final-state velocity histogram.
        #[arg(long)]
        gnuplot: bool,
        /// Worker threads (default: all cores).
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Fit the log-decay of |q| and |T_kk - T| and report the Prandtl number.
    Analyze {
        #[arg(long = "in")]
        input: PathBuf,
        /// Restrict the fit to t0:t1.
        #[arg(long, value_parser = parse_window)]
        window: Option<(f64, f64)>,
        /// Diagonal entry of the temperature tensor to track (1, 2 or 3).
        #[arg(long, default_value_t = 1)]
        component: usize,
    },
    /// Print the moments of a preset's initial ensemble.
    Sample {
        #[arg(long, value_enum)]
        preset: PresetArg,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum PresetArg {
    Case1,
    Case2,
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run {
            config,
            seed,
            out,
            gnuplot,
            threads,
        } => with_threads(threads, || run_cmd(&config, seed, out, gnuplot)),
        Command::Analyze {
            input,
            window,
            component,
        } => {
            let report = analyze(&input, window, component)?;
            println!("{report}");
            Ok(())
        }
        Command::Sample { preset, n, seed } => sample_cmd(preset, n, seed),
    }
}

#[cfg(feature = "parallel")]
fn with_threads(threads: Option<usize>, f: impl FnOnce() -> Result<()> + Send) -> Result<()> {
    match threads {
        None => f(),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .context("building thread pool")?
            .install(f),
    }
}

#[cfg(not(feature = "parallel"))]
fn with_threads(threads: Option<usize>, f: impl FnOnce() -> Result<()>) -> Result<()> {
    if threads.is_some_and(|n| n > 1) {
        bail!("built without the `parallel` feature; --threads must be 1");
    }
    f()
}

fn run_cmd(
    config_path: &Path,
    seed: Option<u64>,
    out: Option<PathBuf>,
    gnuplot: bool,
) -> Result<()> {
    let text = fs::read_to_string(config_path)
        .with_context(|| format!("reading {}", config_path.display()))?;
    let mut config =
        SimConfig::parse(&text).with_context(|| format!("{}", config_path.display()))?;
    if let Some(seed) = seed {
        config.seed = seed;
    }
    if let Some(out) = out {
        config.output_path = out;
    }

    let output = run_with(&config, Execution::default())?;
    write_csv(&output.records, &config.output_path)?;
    let last = output
        .records
        .last()
        .expect("a run records at least one row");
    println!(
        "wrote {} records to {} (t = {}, nu = {}, Pr = {})",
        output.records.len(),
        config.output_path.display(),
        last.t,
        last.nu,
        last.pr
    );

    match analyze_records(&output.records, config.fit_window, config.tracked_component) {
        Ok(report) => println!("{report}"),
        Err(e) => println!("fit skipped: {e}"),
    }

    if gnuplot {
        let hist = config.output_path.with_extension("hist.csv");
        write_text(&hist, &histogram_csv(&output.final_ensemble, 0, 100))?;
        let script = config.output_path.with_extension("gp");
        write_text(&script, &gnuplot_script(&config.output_path, Some(&hist)))?;
        println!("plot script: {}", script.display());
    }
    Ok(())
}

fn sample_cmd(preset: PresetArg, n: usize, seed: u64) -> Result<()> {
    if n < 2 {
        bail!("--n must be at least 2");
    }
    let preset = match preset {
        PresetArg::Case1 => Preset::Case1,
        PresetArg::Case2 => Preset::Case2,
    };
    let exec = Execution::default();
    let ens = preset.sample(n, &NoiseStream::new(seed), exec)?;
    let m = compute_moments(&ens, exec)?;
    let [l1, l2, l3] = eigenvalues_cardan(&m.theta);
    let th = m.theta;
    println!("preset {} n {n} seed {seed}", preset.name());
    println!("u     = {:.6e} {:.6e} {:.6e}", m.u.x, m.u.y, m.u.z);
    println!("T     = {:.6e}", m.temperature);
    println!("Theta = diag {:.6e} {:.6e} {:.6e}", th.xx, th.yy, th.zz);
    println!("        off  {:.6e} {:.6e} {:.6e}", th.xy, th.xz, th.yz);
    println!(
        "q     = {:.6e} {:.6e} {:.6e}",
        m.heat_flux.x, m.heat_flux.y, m.heat_flux.z
    );
    println!(
        "eig   = {l1:.6e} {l2:.6e} {l3:.6e} (lambda_max/T = {:.4})",
        l3 / m.temperature
    );
    println!("nu    = {}", select_nu(m.temperature, l3));
    Ok(())
}
