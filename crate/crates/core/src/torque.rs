//! Gyroscopic torque generators μ(γ, s) in the four-variable chart.
//!
//! The applied torque itself is −ω × μ; everything here works with the
//! generator μ, its s-derivative and its γ-curl. Catalog models carry those
//! derivatives in closed form; user-supplied models fall back to central
//! differences.

use std::sync::Arc;

use crate::algebra::{fd_curl_gamma, fd_default_step, Vec3};
use crate::error::Result;
use crate::fields::Domain;

type VecField = Arc<dyn Fn(Vec3, f64) -> Vec3 + Send + Sync>;

#[derive(Clone)]
pub struct TorqueModel {
    /// Catalog identity plus parameters, e.g. `gyrostatic(mu0=(0, 0, 1))`.
    pub label: String,
    eval: VecField,
    d4: Option<VecField>,
    curl_gamma: Option<VecField>,
    pub domain: Domain,
}

impl TorqueModel {
    pub fn new<F>(label: impl Into<String>, eval: F) -> Self
    where
        F: Fn(Vec3, f64) -> Vec3 + Send + Sync + 'static,
    {
        TorqueModel {
            label: label.into(),
            eval: Arc::new(eval),
            d4: None,
            curl_gamma: None,
            domain: Domain::none(),
        }
    }

    pub fn zero() -> Self {
        TorqueModel::new("zero", |_, _| Vec3::ZERO)
            .with_d4(|_, _| Vec3::ZERO)
            .with_curl(|_, _| Vec3::ZERO)
    }

    pub fn with_d4<F>(mut self, d4: F) -> Self
    where
        F: Fn(Vec3, f64) -> Vec3 + Send + Sync + 'static,
    {
        self.d4 = Some(Arc::new(d4));
        self
    }

    pub fn with_curl<F>(mut self, curl: F) -> Self
    where
        F: Fn(Vec3, f64) -> Vec3 + Send + Sync + 'static,
    {
        self.curl_gamma = Some(Arc::new(curl));
        self
    }

    pub fn with_domain(mut self, domain: Domain) -> Self {
        self.domain = domain;
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn eval(&self, gamma: Vec3, s: f64) -> Result<Vec3> {
        self.domain.check(gamma, s)?;
        Ok((self.eval)(gamma, s))
    }

    pub fn has_analytic_d4(&self) -> bool {
        self.d4.is_some()
    }

    pub fn has_analytic_curl(&self) -> bool {
        self.curl_gamma.is_some()
    }

    /// ∂μ/∂s at fixed γ.
    pub fn d4(&self, gamma: Vec3, s: f64) -> Result<Vec3> {
        self.domain.check(gamma, s)?;
        match &self.d4 {
            Some(d) => Ok(d(gamma, s)),
            None => self.fd_d4(gamma, s, fd_default_step(s)),
        }
    }

    pub fn fd_d4(&self, gamma: Vec3, s: f64, h: f64) -> Result<Vec3> {
        let fp = self.eval(gamma, s + h)?;
        let fm = self.eval(gamma, s - h)?;
        Ok((fp - fm) * (1.0 / (2.0 * h)))
    }

    /// curl in γ at fixed s.
    pub fn curl_gamma(&self, gamma: Vec3, s: f64) -> Result<Vec3> {
        self.domain.check(gamma, s)?;
        match &self.curl_gamma {
            Some(c) => Ok(c(gamma, s)),
            None => self.fd_curl_gamma(gamma, s, fd_default_step(gamma.norm())),
        }
    }

    pub fn fd_curl_gamma(&self, gamma: Vec3, s: f64, h: f64) -> Result<Vec3> {
        fd_curl_gamma(|g, t| self.eval(g, t), gamma, s, h)
    }
}

impl std::fmt::Debug for TorqueModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TorqueModel")
            .field("label", &self.label)
            .field("analytic_d4", &self.d4.is_some())
            .field("analytic_curl", &self.curl_gamma.is_some())
            .finish()
    }
}
