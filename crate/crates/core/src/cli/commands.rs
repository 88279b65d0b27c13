//! The four commands behind the binary. Each returns its rendered output
//! plus the exit code so the binary and the test suite share one path.

use std::fmt::Write as _;

use crate::algebra::State;
use crate::catalog::{Scenario, CASE_INFOS};
use crate::cli::config::ScenarioConfig;
use crate::dynamics::{convergence_study, integrate, ConvergenceFlag, TrajectoryStatus};
use crate::error::Result;
use crate::poisson::{
    casimir_condition_residual, casimir_pde_residual, jacobi_condition_residual, lift_casimir,
    m_dependence_residual, PoissonStructure,
};
use crate::sample::StateSampler;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_SINGULAR: i32 = 3;

/// Default thresholds per residual family. A config/flag tolerance overrides
/// all of them at once.
pub mod thresholds {
    pub const JACOBI_IDENTITY: f64 = 1e-7;
    pub const JACOBI_CONDITION: f64 = 1e-9;
    pub const M_DEPENDENCE: f64 = 1e-8;
    pub const CASIMIR_CONDITION: f64 = 1e-8;
    pub const CASIMIR_PDE: f64 = 1e-8;
}

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: String,
    pub max_residual: f64,
    pub threshold: f64,
    pub pass: bool,
    pub argmax_state: Option<State>,
}

#[derive(Debug, Clone)]
pub struct VerifyOutcome {
    pub report: String,
    pub all_passed: bool,
}

impl VerifyOutcome {
    pub fn exit_code(&self) -> i32 {
        if self.all_passed {
            EXIT_OK
        } else {
            EXIT_VERIFY_FAILED
        }
    }
}

/// Run the residual suite over seeded random states: the Jacobi identity on
/// the assembled matrix, the reduced Jacobi condition, the M-dependence
/// check, and both Casimir checks for C1 and every selected Casimir.
pub fn cmd_verify(cfg: &ScenarioConfig, scenario: &Scenario) -> Result<VerifyOutcome> {
    let v = &cfg.verify;
    let domain = scenario.domain();
    let mut sampler = StateSampler::new(v.seed).with_clearance(v.clearance);
    let states = sampler.sample_n(v.samples, &domain)?;
    let structure = PoissonStructure::new(scenario.torque.clone());

    let tol = |default: f64| v.tolerance.unwrap_or(default);
    let mut checks: Vec<CheckResult> = Vec::new();
    let sweep = |name: String,
                     threshold: f64,
                     eval: &mut dyn FnMut(&State) -> Result<f64>|
     -> Result<CheckResult> {
        let mut max_residual = 0.0;
        let mut argmax_state = None;
        for x in &states {
            let r = eval(x)?;
            if r >= max_residual {
                max_residual = r;
                argmax_state = Some(*x);
            }
        }
        Ok(CheckResult {
            name,
            max_residual,
            threshold,
            pass: max_residual <= threshold,
            argmax_state,
        })
    };

    checks.push(sweep(
        "jacobi_identity".into(),
        tol(thresholds::JACOBI_IDENTITY),
        &mut |x| structure.jacobi_identity_residual(x, PoissonStructure::default_fd_step(x)),
    )?);
    checks.push(sweep(
        "jacobi_condition".into(),
        tol(thresholds::JACOBI_CONDITION),
        &mut |x| jacobi_condition_residual(&scenario.torque, x.gamma, x.s()),
    )?);
    checks.push(sweep(
        "m_dependence".into(),
        tol(thresholds::M_DEPENDENCE),
        &mut |x| {
            // rounding-limited check: scale the step with the state
            let h = 1e-5 * x.norm().max(1.0);
            m_dependence_residual(|y| scenario.torque.eval(y.gamma, y.s()), x, h)
        },
    )?);

    // C1 stays a Casimir for every generator, negative controls included.
    let c1 = crate::fields::ScalarField::new("C1", |g: crate::algebra::Vec3, _| {
        0.5 * g.norm_squared()
    })
    .with_grad(|g, _| g)
    .with_d4(|_, _| 0.0);
    checks.push(sweep(
        "casimir_condition[C1]".into(),
        tol(thresholds::CASIMIR_CONDITION),
        &mut |x| casimir_condition_residual(&c1, &scenario.torque, x.gamma, x.s()),
    )?);
    let c1_full = crate::fields::ScalarField6::c1();
    checks.push(sweep(
        "casimir_pde[C1]".into(),
        tol(thresholds::CASIMIR_PDE),
        &mut |x| casimir_pde_residual(&c1_full, &structure, x),
    )?);

    let selected: Vec<&crate::catalog::NamedCasimir> = match &v.casimirs {
        Some(names) => {
            let mut picked = Vec::new();
            for n in names {
                let found = scenario.casimirs.iter().find(|c| &c.field.name == n);
                match found {
                    Some(c) => picked.push(c),
                    None => {
                        return Err(crate::error::Error::Config(format!(
                            "verify.casimirs names unknown Casimir '{n}' (shipped: {})",
                            scenario
                                .casimirs
                                .iter()
                                .map(|c| c.field.name.as_str())
                                .collect::<Vec<_>>()
                                .join(", ")
                        )))
                    }
                }
            }
            picked
        }
        None => scenario.conserved_casimirs().collect(),
    };
    for cas in selected {
        checks.push(sweep(
            format!("casimir_condition[{}]", cas.field.name),
            tol(thresholds::CASIMIR_CONDITION),
            &mut |x| casimir_condition_residual(&cas.field, &scenario.torque, x.gamma, x.s()),
        )?);
        let lifted = lift_casimir(&cas.field);
        checks.push(sweep(
            format!("casimir_pde[{}]", cas.field.name),
            tol(thresholds::CASIMIR_PDE),
            &mut |x| casimir_pde_residual(&lifted, &structure, x),
        )?);
    }

    let all_passed = checks.iter().all(|c| c.pass);
    let mut report = String::new();
    let _ = writeln!(report, "# gyropoisson verify report");
    let _ = writeln!(
        report,
        "# case: {}  seed: {}  samples: {}  clearance: {}",
        scenario.name, v.seed, v.samples, v.clearance
    );
    let _ = writeln!(report, "# torque: {}", scenario.torque.label);
    for note in &scenario.notes {
        let _ = writeln!(report, "# note: {note}");
    }
    for c in &checks {
        let _ = writeln!(
            report,
            "{} {:e} {:e} {}",
            c.name,
            c.max_residual,
            c.threshold,
            if c.pass { "PASS" } else { "FAIL" }
        );
        if let Some(x) = &c.argmax_state {
            let _ = writeln!(report, "#   argmax state: {x}");
        }
    }
    let _ = writeln!(
        report,
        "# overall: {}",
        if all_passed { "PASS" } else { "FAIL" }
    );
    Ok(VerifyOutcome {
        report,
        all_passed,
    })
}

#[derive(Debug, Clone)]
pub struct SimulateOutcome {
    pub csv: String,
    pub summary: String,
    pub status: TrajectoryStatus,
}

impl SimulateOutcome {
    pub fn exit_code(&self) -> i32 {
        match self.status {
            TrajectoryStatus::Completed => EXIT_OK,
            TrajectoryStatus::TerminatedAtSingularity { .. } => EXIT_SINGULAR,
        }
    }
}

/// Integrate and render the trajectory as CSV plus a drift summary.
/// CSV columns: t, M1..M3, g1..g3, H, C1, C2, one per Casimir, then one
/// drift column per observable. Numbers use the shortest round-trip form.
pub fn cmd_simulate(cfg: &ScenarioConfig, scenario: &Scenario, x0: State) -> Result<SimulateOutcome> {
    let run = &cfg.run;
    let traj = integrate(scenario, x0, run.t_end, run.dt, run.record_every)?;

    let mut csv = String::new();
    let mut header: Vec<String> = ["t", "M1", "M2", "M3", "g1", "g2", "g3"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    header.extend(traj.observable_names.iter().cloned());
    header.extend(traj.observable_names.iter().map(|n| format!("drift_{n}")));
    let _ = writeln!(csv, "{}", header.join(","));
    for (i, t) in traj.times.iter().enumerate() {
        let x = traj.states[i].to_array();
        let mut row: Vec<String> = Vec::with_capacity(header.len());
        row.push(format!("{t}"));
        row.extend(x.iter().map(|v| format!("{v}")));
        row.extend(traj.observables[i].iter().map(|v| format!("{v}")));
        row.extend(traj.drifts[i].iter().map(|v| format!("{v}")));
        let _ = writeln!(csv, "{}", row.join(","));
    }

    let mut summary = String::new();
    let _ = writeln!(summary, "# gyropoisson simulate summary");
    let _ = writeln!(
        summary,
        "# case: {}  t_end: {}  dt: {}  record_every: {}",
        scenario.name, run.t_end, run.dt, run.record_every
    );
    for note in &scenario.notes {
        let _ = writeln!(summary, "# note: {note}");
    }
    for w in scenario.inertia.triangle_warnings() {
        let _ = writeln!(summary, "# warning: {w}");
    }
    match &traj.status {
        TrajectoryStatus::Completed => {
            let _ = writeln!(summary, "status completed");
        }
        TrajectoryStatus::TerminatedAtSingularity { t, reason } => {
            let _ = writeln!(summary, "status terminated-at-singularity t={t} ({reason})");
        }
    }
    let _ = writeln!(summary, "rows {}", traj.times.len());
    for name in &traj.observable_names {
        let d = traj.max_abs_drift(name).unwrap_or(f64::NAN);
        let _ = writeln!(summary, "max_abs_drift {name} {d:e}");
    }
    Ok(SimulateOutcome {
        csv,
        summary,
        status: traj.status,
    })
}

#[derive(Debug, Clone)]
pub struct ConvergenceOutcome {
    pub table: String,
    pub csv: String,
}

/// Fit the drift order of every observable across a step-size ladder.
pub fn cmd_convergence(
    cfg: &ScenarioConfig,
    scenario: &Scenario,
    x0: State,
    dt_list: &[f64],
) -> Result<ConvergenceOutcome> {
    let rows = convergence_study(scenario, x0, cfg.run.t_end, dt_list)?;
    let mut table = String::new();
    let _ = writeln!(table, "# gyropoisson convergence study");
    let _ = writeln!(
        table,
        "# case: {}  t_end: {}  dt_list: {}",
        scenario.name,
        cfg.run.t_end,
        dt_list
            .iter()
            .map(|d| format!("{d}"))
            .collect::<Vec<_>>()
            .join(",")
    );
    let mut csv = String::new();
    let _ = writeln!(csv, "observable,order,flag,{}", {
        dt_list
            .iter()
            .map(|d| format!("drift_dt_{d}"))
            .collect::<Vec<_>>()
            .join(",")
    });
    for r in &rows {
        let flag = match r.flag {
            ConvergenceFlag::Fitted => "",
            ConvergenceFlag::Floor => " [floor]",
            ConvergenceFlag::NotConserved => " [not conserved]",
        };
        let drifts = r
            .drifts
            .iter()
            .map(|d| format!("{d:e}"))
            .collect::<Vec<_>>()
            .join(" ");
        let _ = writeln!(table, "{} order {:.3}{} drifts {}", r.name, r.order, flag, drifts);
        let _ = writeln!(
            csv,
            "{},{},{},{}",
            r.name,
            r.order,
            match r.flag {
                ConvergenceFlag::Fitted => "fitted",
                ConvergenceFlag::Floor => "floor",
                ConvergenceFlag::NotConserved => "not_conserved",
            },
            r.drifts
                .iter()
                .map(|d| format!("{d}"))
                .collect::<Vec<_>>()
                .join(",")
        );
    }
    Ok(ConvergenceOutcome { table, csv })
}

/// Human-readable catalog dump.
pub fn cmd_list_cases() -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# gyropoisson torque catalog ({} cases)", CASE_INFOS.len());
    for info in CASE_INFOS {
        let _ = writeln!(out, "\ncase {}", info.name);
        let _ = writeln!(out, "  {}", info.summary);
        if !info.variants.is_empty() {
            let _ = writeln!(out, "  variants: {}", info.variants.join(", "));
        }
        let _ = writeln!(out, "  singular set: {}", info.singular_set);
        for (name, default) in info.params {
            let _ = writeln!(out, "  param {name}: {default}");
        }
        for (name, provenance) in info.casimirs {
            let _ = writeln!(out, "  casimir {name}: {provenance}");
        }
    }
    out
}
