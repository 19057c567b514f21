use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use nsm_harness::config::{ExperimentConfig, Mode};
use nsm_harness::criteria;
use nsm_harness::fit::{fit_decay_window, FitModel};
use nsm_harness::run::{execute, resolve_mode, Outcome};
use nsm_harness::{HarnessError, Result};

#[derive(Parser)]
#[command(name = "nsmlab", version, about = "Decay experiments for the Navier-Stokes-Maxwell system")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Experiment configuration (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for CSV tables and the markdown summary.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for random states.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Print only failures and errors.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Decay exponents of the linearized flow by radial quadrature.
    LinearDecay,
    /// A nonlinear run (trajectory or consistency study).
    NonlinearRun,
    /// Empirical symbol bounds and decay rates.
    BoundCheck,
    /// Dissipation monitor over an amplitude sweep.
    EnergyMonitor,
    /// Fit a decay exponent to a CSV series.
    Fit(FitArgs),
    /// Run acceptance rows (all of them by default).
    Accept {
        #[arg(long)]
        row: Option<usize>,
    },
}

#[derive(Args)]
struct FitArgs {
    /// CSV with columns `t` and `value`; extra columns are ignored.
    input: PathBuf,
    #[arg(long, default_value = "power")]
    model: String,
    /// Keep only rows whose `component` column equals this.
    #[arg(long)]
    component: Option<String>,
    #[arg(long, num_args = 2, value_names = ["START", "END"])]
    window: Option<Vec<f64>>,
}

fn print_outcome(o: &Outcome, quiet: bool) {
    for c in &o.checks {
        if !quiet || !c.pass {
            println!("{}", c.line());
        }
    }
    if !quiet {
        for n in &o.notes {
            println!("  {n}");
        }
        for f in &o.files {
            println!("wrote {}", f.display());
        }
    }
}

fn run_mode(mode: Mode, common: &Common) -> Result<bool> {
    let cfg = match &common.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::defaults(mode),
    };
    let mode = resolve_mode(&cfg, mode)?;
    let out = common.out.clone().or_else(|| cfg.output.clone());
    let o = execute(&cfg, mode, out.as_deref(), common.seed)?;
    print_outcome(&o, common.quiet);
    Ok(o.all_pass())
}

fn read_series(path: &Path, component: Option<&str>) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut rdr = csv::Reader::from_path(path)?;
    let headers = rdr.headers()?.clone();
    let col = |name: &str| headers.iter().position(|h| h == name);
    let (ti, vi) = match (col("t"), col("value")) {
        (Some(t), Some(v)) => (t, v),
        _ => return Err(HarnessError::Config(format!("{} needs columns 't' and 'value'", path.display()))),
    };
    let ci = col("component");
    let mut times = Vec::new();
    let mut values = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        if let (Some(want), Some(ci)) = (component, ci) {
            if rec.get(ci) != Some(want) {
                continue;
            }
        }
        let parse = |i: usize| -> Result<f64> {
            rec.get(i)
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| HarnessError::Config(format!("bad number in {}", path.display())))
        };
        times.push(parse(ti)?);
        values.push(parse(vi)?);
    }
    Ok((times, values))
}

fn run_fit(args: &FitArgs, quiet: bool) -> Result<bool> {
    let model = FitModel::parse(&args.model)
        .ok_or_else(|| HarnessError::Config(format!("unknown fit model '{}'", args.model)))?;
    let (t, v) = read_series(&args.input, args.component.as_deref())?;
    let window = match &args.window {
        Some(w) => (w[0], w[1]),
        None => (t.first().copied().unwrap_or(0.0), t.last().copied().unwrap_or(0.0)),
    };
    let f = fit_decay_window(&t, &v, model, window)?;
    if !quiet {
        println!(
            "p = {:.6} amplitude = {:.6e} residual = {:.3e} model = {} window = [{}, {}] points = {}",
            f.exponent,
            f.amplitude,
            f.residual,
            f.model.name(),
            f.window.0,
            f.window.1,
            f.points
        );
    }
    Ok(true)
}

fn run_accept(row: Option<usize>, common: &Common) -> Result<bool> {
    let rows: Vec<usize> = match row {
        Some(r) if criteria::ROWS.contains(&r) => vec![r],
        Some(r) => return Err(HarnessError::Config(format!("no acceptance row {r}"))),
        None => criteria::ROWS.collect(),
    };
    let mut ok = true;
    for r in rows {
        if !common.quiet {
            println!("row {r}: {}", criteria::title(r));
        }
        let out = common.out.as_ref().map(|d| d.join(format!("row{r}")));
        let o = criteria::run_row(r, out.as_deref(), common.seed)?;
        print_outcome(&o, common.quiet);
        ok &= o.all_pass();
    }
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = if cli.common.quiet { "warn" } else { "info" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    let result = match &cli.command {
        Command::LinearDecay => run_mode(Mode::LinearDecay, &cli.common),
        Command::NonlinearRun => run_mode(Mode::NonlinearRun, &cli.common),
        Command::BoundCheck => run_mode(Mode::BoundCheck, &cli.common),
        Command::EnergyMonitor => run_mode(Mode::EnergyMonitor, &cli.common),
        Command::Fit(args) => run_fit(args, cli.common.quiet),
        Command::Accept { row } => run_accept(*row, &cli.common),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
