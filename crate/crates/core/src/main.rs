use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use gyropoisson::cli::{self, EXIT_CONFIG, EXIT_OK};
use gyropoisson::error::Error;

#[derive(Parser)]
#[command(
    name = "gyropoisson",
    about = "Poisson-structure verification and conservation monitoring for rigid bodies under gyroscopic torques",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArgs {
    /// Scenario configuration (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Unlock the unverified raw-matrix affine torque (negative control).
    #[arg(long, default_value_t = false)]
    negative_control: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run the residual suite over seeded random states.
    Verify {
        #[command(flatten)]
        common: ConfigArgs,
        /// Override verify.samples.
        #[arg(long)]
        samples: Option<usize>,
        /// Override verify.seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override every check threshold at once.
        #[arg(long)]
        tolerance: Option<f64>,
    },
    /// Integrate the scenario and write a CSV trajectory.
    Simulate {
        #[command(flatten)]
        common: ConfigArgs,
        /// CSV output path.
        #[arg(long)]
        output: PathBuf,
        /// Override run.dt.
        #[arg(long)]
        dt: Option<f64>,
        /// Override run.t_end.
        #[arg(long, name = "t-end")]
        t_end: Option<f64>,
    },
    /// Fit conservation-drift orders across a step-size ladder.
    Convergence {
        #[command(flatten)]
        common: ConfigArgs,
        /// Comma-separated decreasing step sizes.
        #[arg(long, name = "dt-list", value_delimiter = ',', default_values_t = [2e-3, 1e-3, 5e-4])]
        dt_list: Vec<f64>,
        /// Optional CSV output path for the order table.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Print the torque catalog: cases, parameters, singular sets, invariants.
    ListCases,
}

fn exit_for(err: &Error) -> u8 {
    // Everything that stops a command before producing results is a
    // config/domain/i-o failure.
    let _ = err;
    EXIT_CONFIG as u8
}

fn load(common: &ConfigArgs) -> Result<(cli::ScenarioConfig, gyropoisson::Scenario), Error> {
    let text = fs::read_to_string(&common.config)?;
    let cfg = cli::parse_config(&text)?;
    let scenario = cli::build_scenario(&cfg, common.negative_control)?;
    for w in scenario.inertia.triangle_warnings() {
        eprintln!("warning: {w}");
    }
    Ok((cfg, scenario))
}

fn run() -> Result<u8, Error> {
    match Cli::parse().command {
        Command::Verify {
            common,
            samples,
            seed,
            tolerance,
        } => {
            let (mut cfg, scenario) = load(&common)?;
            if let Some(s) = samples {
                cfg.verify.samples = s;
            }
            if let Some(s) = seed {
                cfg.verify.seed = s;
            }
            if let Some(t) = tolerance {
                cfg.verify.tolerance = Some(t);
            }
            let outcome = cli::cmd_verify(&cfg, &scenario)?;
            print!("{}", outcome.report);
            Ok(outcome.exit_code() as u8)
        }
        Command::Simulate {
            common,
            output,
            dt,
            t_end,
        } => {
            let (mut cfg, scenario) = load(&common)?;
            if let Some(v) = dt {
                cfg.run.dt = v;
            }
            if let Some(v) = t_end {
                cfg.run.t_end = v;
            }
            let x0 = cli::initial_state(&cfg);
            let outcome = cli::cmd_simulate(&cfg, &scenario, x0)?;
            fs::write(&output, &outcome.csv)?;
            print!("{}", outcome.summary);
            Ok(outcome.exit_code() as u8)
        }
        Command::Convergence {
            common,
            dt_list,
            output,
        } => {
            let (cfg, scenario) = load(&common)?;
            let x0 = cli::initial_state(&cfg);
            let outcome = cli::cmd_convergence(&cfg, &scenario, x0, &dt_list)?;
            if let Some(path) = output {
                fs::write(path, &outcome.csv)?;
            }
            print!("{}", outcome.table);
            Ok(EXIT_OK as u8)
        }
        Command::ListCases => {
            print!("{}", cli::cmd_list_cases());
            Ok(EXIT_OK as u8)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_for(&e))
        }
    }
}
