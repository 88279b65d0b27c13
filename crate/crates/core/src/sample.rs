//! Seeded random phase-space sampling for the verification suites.
//!
//! M components are uniform in [−2, 2]; γ is drawn uniformly on the unit
//! sphere and then scaled uniformly in [0.5, 2] so that off-leaf behaviour is
//! exercised too. Samples landing inside a configured clearance of a model's
//! singular set are rejected and redrawn.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{State, Vec3};
use crate::error::{Error, Result};
use crate::fields::Domain;

/// Minimum sampling distance from singular sets; intentionally wider than the
/// evaluation clearance so finite-difference stencils stay clear as well.
pub const DEFAULT_SAMPLING_CLEARANCE: f64 = 1e-2;

#[derive(Debug, Clone)]
pub struct StateSampler {
    rng: ChaCha8Rng,
    pub m_amplitude: f64,
    pub scale_gamma: bool,
    pub clearance: f64,
}

impl StateSampler {
    pub fn new(seed: u64) -> Self {
        StateSampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            m_amplitude: 2.0,
            scale_gamma: true,
            clearance: DEFAULT_SAMPLING_CLEARANCE,
        }
    }

    pub fn with_clearance(mut self, clearance: f64) -> Self {
        self.clearance = clearance.max(DEFAULT_SAMPLING_CLEARANCE);
        self
    }

    fn raw_state(&mut self) -> State {
        let m = Vec3::new(
            self.rng.random_range(-self.m_amplitude..=self.m_amplitude),
            self.rng.random_range(-self.m_amplitude..=self.m_amplitude),
            self.rng.random_range(-self.m_amplitude..=self.m_amplitude),
        );
        // uniform on the sphere: z uniform, azimuth uniform
        let z: f64 = self.rng.random_range(-1.0..=1.0);
        let phi: f64 = self.rng.random_range(0.0..std::f64::consts::TAU);
        let r = (1.0 - z * z).max(0.0).sqrt();
        let mut gamma = Vec3::new(r * phi.cos(), r * phi.sin(), z);
        if self.scale_gamma {
            gamma = gamma * self.rng.random_range(0.5..=2.0);
        }
        State::new(m, gamma)
    }

    /// Draw one state clear of the domain's singular sets.
    pub fn sample(&mut self, domain: &Domain) -> Result<State> {
        for _ in 0..10_000 {
            let x = self.raw_state();
            if domain.distance(x.gamma, x.s()) >= self.clearance {
                return Ok(x);
            }
        }
        Err(Error::Domain(format!(
            "sampler failed to clear the singular set at clearance {} after 10000 draws",
            self.clearance
        )))
    }

    pub fn sample_n(&mut self, n: usize, domain: &Domain) -> Result<Vec<State>> {
        (0..n).map(|_| self.sample(domain)).collect()
    }
}
