//! Mechanical right-hand sides, fixed-step integration, and the conservation
//! monitor that ties trajectories back to the structure-level predictions.
//!
//! The integrator is deliberately a plain 4th-order Runge–Kutta: conservation
//! drift at a controlled order is the observable here, and an adaptive or
//! structure-preserving scheme would confound its attribution.

use crate::algebra::{InertiaTensor, State, Vec3};
use crate::catalog::Scenario;
use crate::error::{Error, Result};
use crate::fields::ScalarField;
use crate::poisson::lift_casimir;
use crate::torque::TorqueModel;

/// Time derivative of the phase point: Ṁ = −I⁻¹M × (M + μ) + γ × ∇U,
/// γ̇ = γ × I⁻¹M, with μ evaluated at (γ, s = M·γ).
pub fn rhs_general(
    x: &State,
    inertia: &InertiaTensor,
    mu: &TorqueModel,
    potential: &ScalarField,
) -> Result<(Vec3, Vec3)> {
    let s = x.s();
    let omega = inertia.omega(x.m);
    let muv = mu.eval(x.gamma, s)?;
    let grad_u = potential.grad_gamma(x.gamma, s)?;
    let mdot = -omega.cross(x.m + muv) + x.gamma.cross(grad_u);
    let gdot = x.gamma.cross(omega);
    Ok((mdot, gdot))
}

/// Instantaneous rate of change of M·γ: γ · (μ × I⁻¹M).
pub fn c2_drift_rate(x: &State, inertia: &InertiaTensor, mu: &TorqueModel) -> Result<f64> {
    let muv = mu.eval(x.gamma, x.s())?;
    Ok(x.gamma.dot(muv.cross(inertia.omega(x.m))))
}

/// Classical 4th-order Runge–Kutta step. Any stage failure (typically a
/// singular-clearance violation) aborts the step.
pub fn rk4_step<F>(x: &State, dt: f64, rhs: F) -> Result<State>
where
    F: Fn(&State) -> Result<(Vec3, Vec3)>,
{
    if dt.is_nan() || dt <= 0.0 {
        return Err(Error::InvalidParam(format!(
            "time step must be positive, got {dt}"
        )));
    }
    let add = |x: &State, k: &(Vec3, Vec3), c: f64| State {
        m: x.m + k.0 * c,
        gamma: x.gamma + k.1 * c,
    };
    let k1 = rhs(x)?;
    let k2 = rhs(&add(x, &k1, 0.5 * dt))?;
    let k3 = rhs(&add(x, &k2, 0.5 * dt))?;
    let k4 = rhs(&add(x, &k3, dt))?;
    Ok(State {
        m: x.m + (k1.0 + (k2.0 + k3.0) * 2.0 + k4.0) * (dt / 6.0),
        gamma: x.gamma + (k1.1 + (k2.1 + k3.1) * 2.0 + k4.1) * (dt / 6.0),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum TrajectoryStatus {
    Completed,
    TerminatedAtSingularity { t: f64, reason: String },
}

/// A recorded trajectory with per-time observables and drift columns.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<State>,
    /// H, C1, C2, then one entry per scenario Casimir.
    pub observable_names: Vec<String>,
    /// Row per recorded time, column per observable name.
    pub observables: Vec<Vec<f64>>,
    /// Drift per observable: absolute when |obs(0)| < 1e-12, relative otherwise.
    pub drifts: Vec<Vec<f64>>,
    pub status: TrajectoryStatus,
}

impl Trajectory {
    pub fn completed(&self) -> bool {
        self.status == TrajectoryStatus::Completed
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.observable_names.iter().position(|n| n == name)?;
        Some(self.observables.iter().map(|row| row[idx]).collect())
    }

    pub fn drift_column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.observable_names.iter().position(|n| n == name)?;
        Some(self.drifts.iter().map(|row| row[idx]).collect())
    }

    /// Largest |drift| of one observable over the recorded window.
    pub fn max_abs_drift(&self, name: &str) -> Option<f64> {
        self.drift_column(name)
            .map(|col| col.iter().fold(0.0f64, |acc, v| acc.max(v.abs())))
    }
}

/// Threshold below which an initial observable value counts as zero and its
/// drift column stays absolute.
const RELATIVE_DRIFT_FLOOR: f64 = 1e-12;

type ObservableEval = Box<dyn Fn(&State) -> Result<f64>>;

struct ObservableSet {
    names: Vec<String>,
    evals: Vec<ObservableEval>,
}

fn observable_set(scenario: &Scenario) -> ObservableSet {
    let mut names = vec!["H".to_string(), "C1".to_string(), "C2".to_string()];
    let h = scenario.hamiltonian.clone();
    let mut evals: Vec<ObservableEval> = vec![
        Box::new(move |x: &State| h.eval(x)),
        Box::new(|x: &State| Ok(0.5 * x.gamma.norm_squared())),
        Box::new(|x: &State| Ok(x.s())),
    ];
    for cas in &scenario.casimirs {
        names.push(cas.field.name.clone());
        let lifted = lift_casimir(&cas.field);
        evals.push(Box::new(move |x: &State| lifted.eval(x)));
    }
    ObservableSet { names, evals }
}

/// Integrate a scenario with fixed-step RK4, recording every `record_every`
/// steps (plus the initial and final points). A singular-clearance violation
/// terminates the run with a partial trajectory and a flagged status.
pub fn integrate(
    scenario: &Scenario,
    x0: State,
    t_end: f64,
    dt: f64,
    record_every: usize,
) -> Result<Trajectory> {
    if t_end.is_nan() || t_end <= 0.0 || dt.is_nan() || dt <= 0.0 {
        return Err(Error::InvalidParam(format!(
            "need positive t_end and dt, got t_end={t_end}, dt={dt}"
        )));
    }
    if record_every == 0 {
        return Err(Error::InvalidParam("record_every must be >= 1".into()));
    }
    if !x0.is_finite() {
        return Err(Error::InvalidParam(format!(
            "initial state must be finite, got {x0}"
        )));
    }
    let n_steps = (t_end / dt).round().max(1.0) as usize;
    let obs = observable_set(scenario);
    let domain = scenario.domain();
    let rhs = |x: &State| rhs_general(x, &scenario.inertia, &scenario.torque, &scenario.potential);

    let mut traj = Trajectory {
        times: Vec::new(),
        states: Vec::new(),
        observable_names: obs.names.clone(),
        observables: Vec::new(),
        drifts: Vec::new(),
        status: TrajectoryStatus::Completed,
    };
    let mut baseline: Option<Vec<f64>> = None;

    let record =
        |traj: &mut Trajectory, baseline: &mut Option<Vec<f64>>, t: f64, x: &State| -> Result<()> {
            domain.check(x.gamma, x.s())?;
            let mut row = Vec::with_capacity(obs.evals.len());
            for e in &obs.evals {
                row.push(e(x)?);
            }
            let base = baseline.get_or_insert_with(|| row.clone());
            let drift_row = row
                .iter()
                .zip(base.iter())
                .map(|(v, b)| {
                    if b.abs() < RELATIVE_DRIFT_FLOOR {
                        v - b
                    } else {
                        (v - b) / b.abs()
                    }
                })
                .collect();
            traj.times.push(t);
            traj.states.push(*x);
            traj.observables.push(row);
            traj.drifts.push(drift_row);
            Ok(())
        };

    let mut x = x0;
    if let Err(e) = record(&mut traj, &mut baseline, 0.0, &x) {
        traj.status = TrajectoryStatus::TerminatedAtSingularity {
            t: 0.0,
            reason: e.to_string(),
        };
        return Ok(traj);
    }
    for step in 1..=n_steps {
        let t = step as f64 * dt;
        match rk4_step(&x, dt, rhs) {
            Ok(next) => x = next,
            Err(e) => {
                traj.status = TrajectoryStatus::TerminatedAtSingularity {
                    t,
                    reason: e.to_string(),
                };
                return Ok(traj);
            }
        }
        if step % record_every == 0 || step == n_steps {
            if let Err(e) = record(&mut traj, &mut baseline, t, &x) {
                traj.status = TrajectoryStatus::TerminatedAtSingularity {
                    t,
                    reason: e.to_string(),
                };
                return Ok(traj);
            }
        }
    }
    Ok(traj)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConvergenceFlag {
    /// Clean power-law fit.
    Fitted,
    /// Drift already at the rounding floor; the fitted exponent is meaningless.
    Floor,
    /// Fitted order near zero with drift far above floor.
    NotConserved,
}

#[derive(Debug, Clone)]
pub struct ConvergenceRow {
    pub name: String,
    /// max |drift| per step size, in the order of `dt_list`.
    pub drifts: Vec<f64>,
    /// Least-squares slope of log(drift) against log(dt).
    pub order: f64,
    pub flag: ConvergenceFlag,
}

/// Measure drift order per observable across a list of decreasing step sizes.
pub fn convergence_study(
    scenario: &Scenario,
    x0: State,
    t_end: f64,
    dt_list: &[f64],
) -> Result<Vec<ConvergenceRow>> {
    if dt_list.len() < 3 {
        return Err(Error::InvalidParam(
            "convergence study needs at least 3 step sizes".into(),
        ));
    }
    if dt_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidParam(
            "step sizes must be strictly decreasing".into(),
        ));
    }
    let mut per_obs: Vec<Vec<f64>> = Vec::new();
    let mut names: Vec<String> = Vec::new();
    for (i, &dt) in dt_list.iter().enumerate() {
        let traj = integrate(scenario, x0, t_end, dt, 10)?;
        if !traj.completed() {
            return Err(Error::Domain(format!(
                "trajectory for dt={dt} terminated early: {:?}",
                traj.status
            )));
        }
        if i == 0 {
            names = traj.observable_names.clone();
            per_obs = vec![Vec::new(); names.len()];
        }
        for (j, name) in names.iter().enumerate() {
            per_obs[j].push(traj.max_abs_drift(name).expect("column exists"));
        }
    }

    const FLOOR: f64 = 1e-12;
    let rows = names
        .into_iter()
        .zip(per_obs)
        .map(|(name, drifts)| {
            let order = fit_loglog_slope(dt_list, &drifts);
            let all_tiny = drifts.iter().all(|d| *d < FLOOR);
            // shrinking dt must not grow the drift if truncation dominates
            let monotone = drifts.windows(2).all(|w| w[1] <= w[0] * 1.5);
            let flag = if all_tiny || !monotone {
                ConvergenceFlag::Floor
            } else if order < 0.5 && drifts.iter().any(|d| *d > 1e-6) {
                ConvergenceFlag::NotConserved
            } else {
                ConvergenceFlag::Fitted
            };
            ConvergenceRow {
                name,
                drifts,
                order,
                flag,
            }
        })
        .collect();
    Ok(rows)
}

fn fit_loglog_slope(dts: &[f64], drifts: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = dts
        .iter()
        .zip(drifts)
        .filter(|(_, d)| **d > 0.0)
        .map(|(dt, d)| (dt.ln(), d.ln()))
        .collect();
    if pts.len() < 2 {
        return 0.0;
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

/// 4th-order centered derivative of a uniformly sampled series; endpoints are
/// skipped. Returns (index, derivative) pairs aligned with the input grid.
pub fn centered_series_derivative(values: &[f64], dt: f64) -> Vec<(usize, f64)> {
    let n = values.len();
    let mut out = Vec::new();
    if n < 5 {
        return out;
    }
    for i in 2..n - 2 {
        let d = (-values[i + 2] + 8.0 * values[i + 1] - 8.0 * values[i - 1] + values[i - 2])
            / (12.0 * dt);
        out.push((i, d));
    }
    out
}
