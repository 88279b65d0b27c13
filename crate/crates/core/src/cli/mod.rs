//! Command-line surface: configuration schema, scenario construction,
//! verification/simulation/convergence commands, report and CSV emission.

pub mod commands;
pub mod config;

pub use commands::{
    cmd_convergence, cmd_list_cases, cmd_simulate, cmd_verify, ConvergenceOutcome,
    SimulateOutcome, VerifyOutcome, EXIT_CONFIG, EXIT_OK, EXIT_SINGULAR, EXIT_VERIFY_FAILED,
};
pub use config::{build_scenario, initial_state, parse_config, ScenarioConfig};
