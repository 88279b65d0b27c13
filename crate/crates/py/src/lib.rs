//! Python bindings: scenario construction from the same TOML schema the CLI
//! uses, the structure residuals, and fixed-step integration with the
//! conservation monitor.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use gyropoisson::algebra::State;
use gyropoisson::cli::{build_scenario, parse_config};
use gyropoisson::dynamics::{self, TrajectoryStatus};
use gyropoisson::poisson::{
    casimir_condition_residual, casimir_pde_residual, jacobi_condition_residual, lift_casimir,
    m_dependence_residual, PoissonStructure,
};
use gyropoisson::sample::StateSampler;

struct PyGpError(gyropoisson::Error);

impl From<PyGpError> for PyErr {
    fn from(e: PyGpError) -> Self {
        PyValueError::new_err(e.0.to_string())
    }
}

impl From<gyropoisson::Error> for PyGpError {
    fn from(e: gyropoisson::Error) -> Self {
        PyGpError(e)
    }
}

type GpResult<T> = Result<T, PyGpError>;

fn state_from(x: [f64; 6]) -> State {
    State::from_array(x)
}

/// A recorded trajectory with per-time observables and drift columns.
#[pyclass(name = "Trajectory")]
struct PyTrajectory {
    inner: dynamics::Trajectory,
}

#[pymethods]
impl PyTrajectory {
    #[getter]
    fn times(&self) -> Vec<f64> {
        self.inner.times.clone()
    }

    #[getter]
    fn states(&self) -> Vec<[f64; 6]> {
        self.inner.states.iter().map(|s| s.to_array()).collect()
    }

    #[getter]
    fn observable_names(&self) -> Vec<String> {
        self.inner.observable_names.clone()
    }

    #[getter]
    fn status(&self) -> String {
        match &self.inner.status {
            TrajectoryStatus::Completed => "completed".to_string(),
            TrajectoryStatus::TerminatedAtSingularity { t, reason } => {
                format!("terminated-at-singularity t={t} ({reason})")
            }
        }
    }

    fn completed(&self) -> bool {
        self.inner.completed()
    }

    fn column(&self, name: &str) -> PyResult<Vec<f64>> {
        self.inner
            .column(name)
            .ok_or_else(|| PyValueError::new_err(format!("no observable named '{name}'")))
    }

    fn drift(&self, name: &str) -> PyResult<Vec<f64>> {
        self.inner
            .drift_column(name)
            .ok_or_else(|| PyValueError::new_err(format!("no observable named '{name}'")))
    }

    fn max_abs_drift(&self, name: &str) -> PyResult<f64> {
        self.inner
            .max_abs_drift(name)
            .ok_or_else(|| PyValueError::new_err(format!("no observable named '{name}'")))
    }

    fn __len__(&self) -> usize {
        self.inner.times.len()
    }
}

/// A torque scenario: catalog case + inertia + potential + invariants.
#[pyclass(name = "Scenario")]
struct PyScenario {
    inner: gyropoisson::Scenario,
}

#[pymethods]
impl PyScenario {
    /// Build from the same TOML text the CLI consumes.
    #[staticmethod]
    #[pyo3(signature = (text, negative_control = false))]
    fn from_toml(text: &str, negative_control: bool) -> GpResult<Self> {
        let cfg = parse_config(text)?;
        Ok(PyScenario {
            inner: build_scenario(&cfg, negative_control)?,
        })
    }

    /// Catalog case under its default parameters.
    #[staticmethod]
    fn case(name: &str) -> GpResult<Self> {
        let variant_line = if name == "yehia_b" {
            "variant = \"original\"\n"
        } else {
            ""
        };
        PyScenario::from_toml(&format!("case = \"{name}\"\n{variant_line}"), false)
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name.clone()
    }

    #[getter]
    fn torque_label(&self) -> String {
        self.inner.torque.label.clone()
    }

    fn casimir_names(&self) -> Vec<String> {
        self.inner
            .casimirs
            .iter()
            .map(|c| c.field.name.clone())
            .collect()
    }

    /// μ(γ, s) at a phase point [M1, M2, M3, g1, g2, g3].
    fn torque(&self, x: [f64; 6]) -> GpResult<[f64; 3]> {
        let x = state_from(x);
        Ok(self.inner.torque.eval(x.gamma, x.s())?.to_array())
    }

    /// The 6×6 Poisson matrix at a phase point, as rows.
    fn poisson_matrix(&self, x: [f64; 6]) -> GpResult<[[f64; 6]; 6]> {
        let p = PoissonStructure::new(self.inner.torque.clone());
        Ok(p.matrix(&state_from(x))?.to_rows())
    }

    fn hamiltonian(&self, x: [f64; 6]) -> GpResult<f64> {
        Ok(self.inner.hamiltonian.eval(&state_from(x))?)
    }

    /// Time derivative (Ṁ, γ̇) of the equations of motion.
    fn rhs(&self, x: [f64; 6]) -> GpResult<[f64; 6]> {
        let x = state_from(x);
        let (mdot, gdot) =
            dynamics::rhs_general(&x, &self.inner.inertia, &self.inner.torque, &self.inner.potential)?;
        Ok([mdot.x, mdot.y, mdot.z, gdot.x, gdot.y, gdot.z])
    }

    #[pyo3(signature = (x, h = None))]
    fn jacobi_identity_residual(&self, x: [f64; 6], h: Option<f64>) -> GpResult<f64> {
        let x = state_from(x);
        let p = PoissonStructure::new(self.inner.torque.clone());
        let h = h.unwrap_or_else(|| PoissonStructure::default_fd_step(&x));
        Ok(p.jacobi_identity_residual(&x, h)?)
    }

    fn jacobi_condition_residual(&self, x: [f64; 6]) -> GpResult<f64> {
        let x = state_from(x);
        Ok(jacobi_condition_residual(&self.inner.torque, x.gamma, x.s())?)
    }

    fn casimir_condition_residual(&self, name: &str, x: [f64; 6]) -> PyResult<f64> {
        let x = state_from(x);
        let cas = self.find_casimir(name)?;
        casimir_condition_residual(&cas, &self.inner.torque, x.gamma, x.s())
            .map_err(|e| PyGpError(e).into())
    }

    fn casimir_pde_residual(&self, name: &str, x: [f64; 6]) -> PyResult<f64> {
        let x = state_from(x);
        let cas = self.find_casimir(name)?;
        let p = PoissonStructure::new(self.inner.torque.clone());
        casimir_pde_residual(&lift_casimir(&cas), &p, &x).map_err(|e| PyGpError(e).into())
    }

    /// Max residual per structure check over seeded random states.
    #[pyo3(signature = (samples = 100, seed = 42, clearance = 0.01))]
    fn verify<'py>(
        &self,
        py: Python<'py>,
        samples: usize,
        seed: u64,
        clearance: f64,
    ) -> PyResult<Bound<'py, PyDict>> {
        let domain = self.inner.domain();
        let mut sampler = StateSampler::new(seed).with_clearance(clearance);
        let states = sampler.sample_n(samples, &domain).map_err(PyGpError)?;
        let p = PoissonStructure::new(self.inner.torque.clone());

        let out = PyDict::new(py);
        let max_of = |name: &str, f: &mut dyn FnMut(&State) -> GpResult<f64>| -> PyResult<()> {
            let mut worst = 0.0_f64;
            for x in &states {
                worst = worst.max(f(x)?);
            }
            out.set_item(name, worst)?;
            Ok(())
        };
        max_of("jacobi_identity", &mut |x| {
            Ok(p.jacobi_identity_residual(x, PoissonStructure::default_fd_step(x))?)
        })?;
        max_of("jacobi_condition", &mut |x| {
            Ok(jacobi_condition_residual(&self.inner.torque, x.gamma, x.s())?)
        })?;
        max_of("m_dependence", &mut |x| {
            let h = 1e-5 * x.norm().max(1.0);
            Ok(m_dependence_residual(
                |y| self.inner.torque.eval(y.gamma, y.s()),
                x,
                h,
            )?)
        })?;
        for cas in self.inner.conserved_casimirs() {
            let lifted = lift_casimir(&cas.field);
            max_of(&format!("casimir_condition[{}]", cas.field.name), &mut |x| {
                Ok(casimir_condition_residual(
                    &cas.field,
                    &self.inner.torque,
                    x.gamma,
                    x.s(),
                )?)
            })?;
            max_of(&format!("casimir_pde[{}]", cas.field.name), &mut |x| {
                Ok(casimir_pde_residual(&lifted, &p, x)?)
            })?;
        }
        Ok(out)
    }

    /// Fixed-step integration with the conservation monitor.
    #[pyo3(signature = (x0, t_end = 10.0, dt = 1e-3, record_every = 10))]
    fn integrate(
        &self,
        x0: [f64; 6],
        t_end: f64,
        dt: f64,
        record_every: usize,
    ) -> GpResult<PyTrajectory> {
        Ok(PyTrajectory {
            inner: dynamics::integrate(&self.inner, state_from(x0), t_end, dt, record_every)?,
        })
    }

    fn __repr__(&self) -> String {
        format!("Scenario({})", self.inner.name)
    }
}

impl PyScenario {
    fn find_casimir(&self, name: &str) -> PyResult<gyropoisson::ScalarField> {
        self.inner
            .casimirs
            .iter()
            .find(|c| c.field.name == name)
            .map(|c| c.field.clone())
            .ok_or_else(|| {
                PyValueError::new_err(format!(
                    "no Casimir named '{name}' (shipped: {})",
                    self.inner
                        .casimirs
                        .iter()
                        .map(|c| c.field.name.as_str())
                        .collect::<Vec<_>>()
                        .join(", ")
                ))
            })
    }
}

/// Catalog case names in catalog order.
#[pyfunction]
fn list_cases() -> Vec<String> {
    gyropoisson::catalog::CASE_INFOS
        .iter()
        .map(|c| c.name.to_string())
        .collect()
}

/// The default phase point used by the shipped demos.
#[pyfunction]
fn default_initial_state() -> [f64; 6] {
    gyropoisson::cli::config::DEFAULT_INITIAL_STATE
}

#[pymodule]
fn gyropoisson_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyScenario>()?;
    m.add_class::<PyTrajectory>()?;
    m.add_function(wrap_pyfunction!(list_cases, m)?)?;
    m.add_function(wrap_pyfunction!(default_initial_state, m)?)?;
    Ok(())
}
