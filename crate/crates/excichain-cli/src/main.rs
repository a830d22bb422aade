//! `excichain`: propagate phase-directed exciton transport on 1D chains,
//! sweep parameters, and print the matching closed-form predictions.

mod config;
mod output;
mod presets;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use excichain::analytics;
use excichain::couplings::{focusing_profile, CouplingModel};
use excichain::dynamics::propagate;
use excichain::ChainError;

use config::{ConfigError, RunConfig, SweepConfig};
use output::{sig15, SummaryRow, SweepRow};
use presets::Preset;

#[derive(Parser)]
#[command(
    name = "excichain",
    about = "Phase-directed single-exciton transport on 1D chains",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Config file (`key = value` lines under [section] headers)
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Named parameter set: fig1a, fig1c, fig1f, fig2 (sweep), fig3
    #[arg(long, global = true, value_name = "NAME")]
    preset: Option<String>,

    /// Directory for generated files (created if missing)
    #[arg(long, global = true, value_name = "DIR", default_value = ".")]
    out_dir: PathBuf,

    /// Worker threads for sweeps (default: one per core)
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Propagate a single configuration; write trajectory and summary CSVs
    Run,
    /// Run every point of a theta or gamma grid; write one summary row per point
    Sweep,
    /// Print the closed-form predictions for a configuration
    Analytic {
        /// Also tabulate the closed-form mean at these times
        #[arg(long, value_name = "T,T,...", value_delimiter = ',')]
        mean_at: Vec<f64>,
        /// Write the k-resolved table to a CSV file
        #[arg(long, value_name = "PATH")]
        csv: Option<PathBuf>,
    },
    /// Dump a nearest-neighbor coupling profile, one bond per line
    Couplings {
        /// Build a profile directly: `nearest_neighbor` or `focusing`
        #[arg(long, value_name = "KIND")]
        model: Option<String>,
        /// Chain length for --model
        #[arg(long, value_name = "N")]
        n_sites: Option<usize>,
        /// Bond strength for --model nearest_neighbor
        #[arg(long, value_name = "V", default_value_t = 1.0)]
        strength: f64,
        /// Peak strength for --model focusing
        #[arg(long, value_name = "V", default_value_t = 1.0)]
        peak: f64,
        /// Output file (stdout when omitted)
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
}

/// Exit code classes: 2 for configuration problems, 3 for numerical ones.
enum CliError {
    Config(String),
    Numerical(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Numerical(m) => m,
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(err: ConfigError) -> Self {
        CliError::Config(err.to_string())
    }
}

impl From<ChainError> for CliError {
    fn from(err: ChainError) -> Self {
        match err {
            ChainError::NumericalAbort { .. } => CliError::Numerical(err.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Config(err.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("excichain: {}", err.message());
            ExitCode::from(err.code())
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| CliError::Config(format!("cannot size worker pool: {e}")))?;
    }
    std::fs::create_dir_all(&cli.out_dir)?;

    match &cli.command {
        Command::Run => cmd_run(&cli),
        Command::Sweep => cmd_sweep(&cli),
        Command::Analytic { mean_at, csv } => cmd_analytic(&cli, mean_at, csv.as_deref()),
        Command::Couplings { model, n_sites, strength, peak, out } => {
            cmd_couplings(&cli, model.as_deref(), *n_sites, *strength, *peak, out.as_deref())
        }
    }
}

fn run_config(cli: &Cli) -> Result<RunConfig, CliError> {
    match (&cli.config, &cli.preset) {
        (Some(_), Some(_)) => {
            Err(CliError::Config("give either --config or --preset, not both".into()))
        }
        (Some(path), None) => Ok(RunConfig::from_file(path)?),
        (None, Some(name)) => match presets::lookup(name)? {
            Preset::Run(run) => Ok(run),
            Preset::Sweep(_) => Err(CliError::Config(format!(
                "`{name}` is a sweep preset; use `excichain sweep --preset {name}`"
            ))),
        },
        (None, None) => Err(CliError::Config("need --config <path> or --preset <name>".into())),
    }
}

fn sweep_config(cli: &Cli) -> Result<SweepConfig, CliError> {
    match (&cli.config, &cli.preset) {
        (Some(_), Some(_)) => {
            Err(CliError::Config("give either --config or --preset, not both".into()))
        }
        (Some(path), None) => Ok(SweepConfig::from_file(path)?),
        (None, Some(name)) => match presets::lookup(name)? {
            Preset::Sweep(sweep) => Ok(sweep),
            Preset::Run(_) => Err(CliError::Config(format!(
                "`{name}` is a single-run preset; use `excichain run --preset {name}`"
            ))),
        },
        (None, None) => Err(CliError::Config("need --config <path> or --preset <name>".into())),
    }
}

fn resolve_out(out_dir: &Path, file: &Path) -> PathBuf {
    if file.is_absolute() {
        file.to_path_buf()
    } else {
        out_dir.join(file)
    }
}

fn cmd_run(cli: &Cli) -> Result<(), CliError> {
    let run = run_config(cli)?;
    let traj = propagate(&run.chain, &run.initial, &run.propagation)?;

    let trajectory_path = resolve_out(&cli.out_dir, &run.trajectory_csv);
    let summary_path = resolve_out(&cli.out_dir, &run.summary_csv);
    output::write_trajectory(&trajectory_path, &traj)?;
    let summary = SummaryRow::compute(&run, &traj);
    output::write_summary(&summary_path, &summary)?;

    println!(
        "t = {:.3}: M = {:.6}, P_L = {:.6}, P_R = {:.6}",
        summary.t, summary.mean, summary.p_left, summary.p_right
    );
    println!("wrote {}", trajectory_path.display());
    println!("wrote {}", summary_path.display());
    Ok(())
}

fn cmd_sweep(cli: &Cli) -> Result<(), CliError> {
    use rayon::prelude::*;

    let sweep = sweep_config(cli)?;
    let results: Vec<(f64, Result<SweepRow, CliError>)> = sweep
        .values
        .par_iter()
        .map(|&value| {
            let outcome = (|| -> Result<SweepRow, CliError> {
                let point = sweep.point(value)?;
                let traj = propagate(&point.chain, &point.initial, &point.propagation)?;
                Ok(SweepRow::compute(value, &point, &traj))
            })();
            (value, outcome)
        })
        .collect();

    let mut rows = Vec::with_capacity(results.len());
    let mut failures = Vec::new();
    for (value, outcome) in results {
        match outcome {
            Ok(row) => rows.push(row),
            Err(err) => failures.push((value, err)),
        }
    }
    if !failures.is_empty() {
        for (value, err) in &failures {
            eprintln!("excichain: sweep point {value}: {}", err.message());
        }
        let failed = failures.len();
        let any_numerical =
            failures.iter().any(|(_, e)| matches!(e, CliError::Numerical(_)));
        let (value, first) = failures.into_iter().next().unwrap();
        let message =
            format!("{failed} sweep point(s) failed, first at {value}: {}", first.message());
        return Err(if any_numerical {
            CliError::Numerical(message)
        } else {
            CliError::Config(message)
        });
    }

    let sweep_path = resolve_out(&cli.out_dir, &sweep.sweep_csv);
    output::write_sweep(&sweep_path, &rows)?;
    println!("{} points, wrote {}", rows.len(), sweep_path.display());
    Ok(())
}

fn cmd_analytic(cli: &Cli, mean_at: &[f64], csv: Option<&Path>) -> Result<(), CliError> {
    let run = run_config(cli)?;
    let n = run.chain.n_sites();
    let gamma = run.chain.dephasing_rate();
    let v = run.nominal_strength();
    let report = analytics::AnalyticReport::new(
        n,
        run.chain.epsilon(),
        v.unwrap_or(f64::NAN),
        gamma,
        &run.initial,
    );

    println!("n_sites = {n}");
    println!("theta = {}", sig15(run.initial.theta()));
    println!("coherence = {}", sig15(run.initial.coherence()));
    println!("gamma = {}", sig15(gamma));
    match v {
        Some(v) => println!("v = {}", sig15(v)),
        None => println!("v = NaN  # custom profile has no single coupling scale"),
    }
    println!("phi0 = {}", sig15(report.phi0));
    println!("v_initial = {}", sig15(report.v_initial));
    println!("p_k_positive_limit = {}", sig15(report.p_k_positive_limit));
    match report.p_k_positive_finite {
        Some(value) => println!("p_k_positive = {}", sig15(value)),
        None => eprintln!("excichain: odd or too-small chain: k-space fields omitted"),
    }
    println!("m0 = {}", sig15(report.mean.m0));
    match report.long_time_mean.as_f64() {
        Some(value) => println!("long_time_mean = {}", sig15(value)),
        None => println!("long_time_mean = unbounded"),
    }
    for &t in mean_at {
        println!("mean_at t={} -> {}", t, sig15(report.mean.eval(t)));
    }

    if let (Some(spectrum), Some(p_k)) = (&report.k_spectrum, &report.p_k) {
        println!("k,E_k,v_k,P_k");
        for i in 0..spectrum.len() {
            println!(
                "{},{},{},{}",
                sig15(spectrum.k_values[i]),
                sig15(spectrum.energies[i]),
                sig15(spectrum.velocities[i]),
                sig15(p_k[i])
            );
        }
    }

    if let Some(csv_path) = csv {
        let path = resolve_out(&cli.out_dir, csv_path);
        let mut text = String::new();
        text.push_str(&format!("# n_sites = {n}\n"));
        text.push_str(&format!("# theta = {}\n", sig15(run.initial.theta())));
        text.push_str(&format!("# gamma = {}\n", sig15(gamma)));
        text.push_str(&format!("# phi0 = {}\n", sig15(report.phi0)));
        text.push_str(&format!(
            "# p_k_positive_limit = {}\n",
            sig15(report.p_k_positive_limit)
        ));
        text.push_str("k,E_k,v_k,P_k\n");
        if let (Some(spectrum), Some(p_k)) = (&report.k_spectrum, &report.p_k) {
            for i in 0..spectrum.len() {
                text.push_str(&format!(
                    "{},{},{},{}\n",
                    sig15(spectrum.k_values[i]),
                    sig15(spectrum.energies[i]),
                    sig15(spectrum.velocities[i]),
                    sig15(p_k[i])
                ));
            }
        }
        std::fs::write(&path, text)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn cmd_couplings(
    cli: &Cli,
    model: Option<&str>,
    n_sites: Option<usize>,
    strength: f64,
    peak: f64,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let bonds: Vec<f64> = match model {
        Some(kind) => {
            let n = n_sites.ok_or_else(|| {
                CliError::Config("--model needs --n-sites".into())
            })?;
            if n < 2 {
                return Err(CliError::Config(format!("--n-sites must be at least 2, got {n}")));
            }
            match kind {
                "nearest_neighbor" => vec![strength; n - 1],
                "focusing" => match focusing_profile(n, peak)? {
                    CouplingModel::Custom(bonds) => bonds,
                    _ => unreachable!("focusing profile is always custom"),
                },
                other => {
                    return Err(CliError::Config(format!(
                        "unknown --model `{other}` (nearest_neighbor or focusing; use --config for custom profiles)"
                    )))
                }
            }
        }
        None => {
            let run = run_config(cli)?;
            match run.chain.coupling() {
                CouplingModel::NearestNeighbor { strength } => {
                    vec![*strength; run.chain.n_sites() - 1]
                }
                CouplingModel::Custom(bonds) => bonds.clone(),
                CouplingModel::PowerLaw { .. } => {
                    return Err(CliError::Config(
                        "power-law coupling has no single-column bond profile".into(),
                    ))
                }
            }
        }
    };

    let mut text = String::new();
    for bond in &bonds {
        text.push_str(&sig15(*bond));
        text.push('\n');
    }
    match out {
        Some(path) => {
            let path = resolve_out(&cli.out_dir, path);
            std::fs::write(&path, text)?;
            println!("wrote {} ({} bonds)", path.display(), bonds.len());
        }
        None => print!("{text}"),
    }
    Ok(())
}
