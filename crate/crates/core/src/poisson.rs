//! The modified Poisson matrix Π_μ, its bracket, and the residuals that
//! certify (or refute) its structure: the Jacobi identity on the full
//! matrix, the reduced Jacobi condition for μ, the M-dependence check, and
//! the two Casimir checks.
//!
//! Coordinates are ordered (M1, M2, M3, γ1, γ2, γ3) throughout. The matrix
//! blocks are hat(M+μ) and hat(γ) with a zero γγ block, where hat(v)w = v×w.

use crate::algebra::{fd_default_step, State, Vec3};
use crate::error::{Error, Result};
use crate::fields::{ScalarField, ScalarField6};
use crate::torque::TorqueModel;

/// Skew 6×6 matrix stored as its 15 upper-triangle entries (row-major).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix6Skew {
    upper: [f64; 15],
}

fn upper_index(i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < 6);
    // offset of row i into the packed upper triangle
    i * (11 - i) / 2 + (j - i - 1)
}

impl Matrix6Skew {
    pub fn from_upper(upper: [f64; 15]) -> Self {
        Matrix6Skew { upper }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        use std::cmp::Ordering;
        match i.cmp(&j) {
            Ordering::Equal => 0.0,
            Ordering::Less => self.upper[upper_index(i, j)],
            Ordering::Greater => -self.upper[upper_index(j, i)],
        }
    }

    pub fn to_rows(&self) -> [[f64; 6]; 6] {
        let mut m = [[0.0; 6]; 6];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = self.get(i, j);
            }
        }
        m
    }

    /// Matrix-vector product Π v.
    pub fn apply(&self, v: [f64; 6]) -> [f64; 6] {
        let mut out = [0.0; 6];
        for (i, o) in out.iter_mut().enumerate() {
            for (j, vj) in v.iter().enumerate() {
                *o += self.get(i, j) * vj;
            }
        }
        out
    }
}

/// Largest residual of the cyclic Jacobi sum together with the witnessing
/// index triple, for diagnostics.
#[derive(Debug, Clone, Copy)]
pub struct JacobiIdentityReport {
    pub max_residual: f64,
    pub argmax_triple: (usize, usize, usize),
}

/// A state-dependent Poisson candidate built from a torque generator.
/// The zero torque reproduces the unmodified Lie-Poisson matrix.
#[derive(Debug, Clone)]
pub struct PoissonStructure {
    pub mu: TorqueModel,
}

impl PoissonStructure {
    pub fn new(mu: TorqueModel) -> Self {
        PoissonStructure { mu }
    }

    /// The unmodified structure (μ ≡ 0).
    pub fn kks() -> Self {
        PoissonStructure::new(TorqueModel::zero())
    }

    /// Assemble Π_μ at a state. Only the upper triangle is computed, so the
    /// result is skew by construction.
    pub fn matrix(&self, x: &State) -> Result<Matrix6Skew> {
        let g = x.gamma;
        let k = x.m + self.mu.eval(g, x.s())?;
        Ok(Matrix6Skew::from_upper([
            // row 0: (0,1) (0,2) (0,3) (0,4) (0,5)
            -k.z, k.y, 0.0, -g.z, g.y,
            // row 1: (1,2) (1,3) (1,4) (1,5)
            -k.x, g.z, 0.0, -g.x,
            // row 2: (2,3) (2,4) (2,5)
            -g.y, g.x, 0.0,
            // rows 3,4: γγ block
            0.0, 0.0, 0.0,
        ]))
    }

    /// Poisson bracket {F, G}(x) = ∇F · Π_μ ∇G.
    pub fn bracket(&self, f: &ScalarField6, g: &ScalarField6, x: &State) -> Result<f64> {
        let pi = self.matrix(x)?;
        let gf = f.grad(x)?;
        let gg = g.grad(x)?;
        let pg = pi.apply(gg);
        Ok(gf.iter().zip(pg.iter()).map(|(a, b)| a * b).sum())
    }

    /// Hamiltonian vector field Π_μ ∇H, split as (Ṁ, γ̇).
    pub fn hamiltonian_vector_field(&self, h: &ScalarField6, x: &State) -> Result<(Vec3, Vec3)> {
        let pi = self.matrix(x)?;
        let out = pi.apply(h.grad(x)?);
        Ok((
            Vec3::new(out[0], out[1], out[2]),
            Vec3::new(out[3], out[4], out[5]),
        ))
    }

    /// Max over index triples i<j<k of the cyclic sum
    /// |Π^{li} ∂_l Π^{jk} + Π^{lj} ∂_l Π^{ki} + Π^{lk} ∂_l Π^{ij}|,
    /// with entry derivatives taken by central differences of step `h`.
    pub fn jacobi_identity_residual(&self, x: &State, h: f64) -> Result<f64> {
        Ok(self.jacobi_identity_report(x, h)?.max_residual)
    }

    pub fn jacobi_identity_report(&self, x: &State, h: f64) -> Result<JacobiIdentityReport> {
        if h.is_nan() || h <= 0.0 {
            return Err(Error::InvalidParam(format!(
                "fd step must be positive, got {h}"
            )));
        }
        let pi = self.matrix(x)?.to_rows();
        // dpi[l][i][j] = ∂Π^{ij}/∂x_l
        let mut dpi = [[[0.0; 6]; 6]; 6];
        for (l, slot) in dpi.iter_mut().enumerate() {
            let pp = self.matrix(&x.perturbed(l, h))?.to_rows();
            let pm = self.matrix(&x.perturbed(l, -h))?.to_rows();
            for i in 0..6 {
                for j in 0..6 {
                    slot[i][j] = (pp[i][j] - pm[i][j]) / (2.0 * h);
                }
            }
        }
        let mut report = JacobiIdentityReport {
            max_residual: 0.0,
            argmax_triple: (0, 1, 2),
        };
        for i in 0..6 {
            for j in (i + 1)..6 {
                for k in (j + 1)..6 {
                    let mut sum = 0.0;
                    for l in 0..6 {
                        sum += pi[l][i] * dpi[l][j][k]
                            + pi[l][j] * dpi[l][k][i]
                            + pi[l][k] * dpi[l][i][j];
                    }
                    if sum.abs() > report.max_residual {
                        report.max_residual = sum.abs();
                        report.argmax_triple = (i, j, k);
                    }
                }
            }
        }
        Ok(report)
    }

    /// Default step for FD entry derivatives at this state.
    pub fn default_fd_step(x: &State) -> f64 {
        fd_default_step(x.norm())
    }
}

/// Scalar residual of the reduced Jacobi condition
/// γ·curl_γ μ + μ·(γ × ∂₄μ), using analytic derivatives when the model
/// carries them. Zero (to tolerance) certifies that Π_μ is Poisson.
pub fn jacobi_condition_residual(mu: &TorqueModel, gamma: Vec3, s: f64) -> Result<f64> {
    let curl = mu.curl_gamma(gamma, s)?;
    let d4 = mu.d4(gamma, s)?;
    let m = mu.eval(gamma, s)?;
    Ok((gamma.dot(curl) + m.dot(gamma.cross(d4))).abs())
}

/// Max over components k of |γ × ∇_M μ_k| for a torque given on the full
/// phase space. Zero certifies that μ factors through (γ, s = M·γ) locally.
pub fn m_dependence_residual<F>(mu_full: F, x: &State, h: f64) -> Result<f64>
where
    F: Fn(&State) -> Result<Vec3>,
{
    if h.is_nan() || h <= 0.0 {
        return Err(Error::InvalidParam(format!(
            "fd step must be positive, got {h}"
        )));
    }
    // grad_m[k] = ∇_M μ_k by central differences in the three M coordinates
    let mut grad_m = [Vec3::ZERO; 3];
    for i in 0..3 {
        let fp = mu_full(&x.perturbed(i, h))?;
        let fm = mu_full(&x.perturbed(i, -h))?;
        let d = (fp - fm) * (1.0 / (2.0 * h));
        grad_m[0] = grad_m[0].with_component(i, d.x);
        grad_m[1] = grad_m[1].with_component(i, d.y);
        grad_m[2] = grad_m[2].with_component(i, d.z);
    }
    Ok(grad_m
        .iter()
        .map(|g| x.gamma.cross(*g).norm())
        .fold(0.0, f64::max))
}

/// Residual |γ × ((∂₄C) μ − ∇_γ C)| of the reduced Casimir condition for a
/// candidate C in the (γ, s) chart.
pub fn casimir_condition_residual(
    c: &ScalarField,
    mu: &TorqueModel,
    gamma: Vec3,
    s: f64,
) -> Result<f64> {
    let d4 = c.d4(gamma, s)?;
    let grad = c.grad_gamma(gamma, s)?;
    let m = mu.eval(gamma, s)?;
    Ok(gamma.cross(m * d4 - grad).norm())
}

/// Residual of the full six-equation Casimir system for a candidate on the
/// whole phase space: max of |γ × ∇_M C| and |(M+μ) × ∇_M C + γ × ∇_γ C|.
pub fn casimir_pde_residual(c: &ScalarField6, p: &PoissonStructure, x: &State) -> Result<f64> {
    let grad = c.grad(x)?;
    let gm = Vec3::new(grad[0], grad[1], grad[2]);
    let gg = Vec3::new(grad[3], grad[4], grad[5]);
    let k = x.m + p.mu.eval(x.gamma, x.s())?;
    let r1 = x.gamma.cross(gm).norm();
    let r2 = (k.cross(gm) + x.gamma.cross(gg)).norm();
    Ok(r1.max(r2))
}

/// Lift a chart Casimir C(γ, s) to the full phase space via s = M·γ.
/// The 6-gradient is assembled from the chart derivatives:
/// ∇_M = (∂₄C) γ and ∇_γ = ∇_γC + (∂₄C) M.
pub fn lift_casimir(c: &ScalarField) -> ScalarField6 {
    let name = c.name.clone();
    let domain = c.domain.clone();
    let c_eval = c.clone();
    let c_grad = c.clone();
    let mut out = ScalarField6::new(name, move |x: &State| {
        // domain already checked by the wrapper
        c_eval
            .eval(x.gamma, x.s())
            .expect("domain checked before lifted eval")
    });
    if c.has_analytic_grad() && c.has_analytic_d4() {
        out = out.with_grad(move |x: &State| {
            let s = x.s();
            let d4 = c_grad
                .d4(x.gamma, s)
                .expect("domain checked before lifted grad");
            let gg = c_grad
                .grad_gamma(x.gamma, s)
                .expect("domain checked before lifted grad");
            let gm = x.gamma * d4;
            let gfull = gg + x.m * d4;
            [gm.x, gm.y, gm.z, gfull.x, gfull.y, gfull.z]
        });
    }
    out.with_domain(domain)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::SymMatrix3;

    fn state(m: [f64; 3], g: [f64; 3]) -> State {
        State::new(Vec3::from(m), Vec3::from(g))
    }

    #[test]
    fn upper_index_covers_triangle() {
        let mut seen = [false; 15];
        for i in 0..6 {
            for j in (i + 1)..6 {
                let k = upper_index(i, j);
                assert!(!seen[k]);
                seen[k] = true;
            }
        }
        assert!(seen.iter().all(|&b| b));
    }

    #[test]
    fn kks_matrix_read_off() {
        let p = PoissonStructure::kks();
        let x = state([1.0, 2.0, 3.0], [4.0, 5.0, 6.0]);
        let pi = p.matrix(&x).unwrap();
        // 1-indexed entries from the block layout
        assert_eq!(pi.get(0, 1), -3.0); // −M3
        assert_eq!(pi.get(0, 4), -6.0); // −γ3
        assert_eq!(pi.get(3, 4), 0.0);
        assert_eq!(pi.get(1, 0), 3.0);
        assert_eq!(pi.get(2, 3), -5.0); // −γ2
        assert_eq!(pi.get(2, 4), 4.0); // γ1
    }

    #[test]
    fn gyrostatic_matrix_shifts_mm_block_only() {
        let mu0 = Vec3::new(0.0, 0.0, 5.0);
        let mu = TorqueModel::new("gyro", move |_, _| mu0)
            .with_d4(|_, _| Vec3::ZERO)
            .with_curl(|_, _| Vec3::ZERO);
        let p = PoissonStructure::new(mu);
        let x = state([1.0, 2.0, 3.0], [4.0, 5.0, 6.0]);
        let pi = p.matrix(&x).unwrap();
        assert_eq!(pi.get(0, 1), -8.0); // −(M3 + 5)
        assert_eq!(pi.get(0, 4), -6.0); // γ blocks unchanged
        assert_eq!(pi.get(1, 3), 6.0);
    }

    #[test]
    fn matrix_plus_transpose_is_zero_exactly() {
        let p = PoissonStructure::kks();
        let x = state([0.3, -0.7, 1.9], [0.5, 0.1, -0.8]);
        let rows = p.matrix(&x).unwrap().to_rows();
        for (i, row) in rows.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                assert_eq!(v + rows[j][i], 0.0);
            }
        }
    }

    #[test]
    fn bracket_of_field_with_itself_vanishes() {
        let p = PoissonStructure::kks();
        let f = ScalarField6::new("f", |x: &State| x.m.x * x.gamma.z + x.m.y.powi(2));
        let x = state([0.4, 1.1, -0.6], [0.7, -0.2, 0.5]);
        let v = p.bracket(&f, &f, &x).unwrap();
        assert!(v.abs() < 1e-12);
    }

    #[test]
    fn c2_is_kks_casimir_under_bracket() {
        let p = PoissonStructure::kks();
        let c2 = ScalarField6::c2();
        let x = state([1.3, -0.4, 0.9], [0.2, 0.8, -0.5]);
        for g in [
            ScalarField6::new("g1", |x: &State| x.m.norm_squared()),
            ScalarField6::new("g2", |x: &State| x.gamma.x * x.m.z),
            ScalarField6::new("g3", |x: &State| (x.m.y + x.gamma.y).powi(3)),
        ] {
            let v = p.bracket(&c2, &g, &x).unwrap();
            assert!(v.abs() < 1e-8, "{{C2, {}}} = {v}", g.name);
        }
    }

    #[test]
    fn hvf_free_identity_tensor() {
        // μ ≡ 0, U ≡ 0, I = identity: Ṁ = 0, γ̇ = γ × M.
        let p = PoissonStructure::kks();
        let h = ScalarField6::new("H", |x: &State| 0.5 * x.m.norm_squared()).with_grad(
            |x: &State| [x.m.x, x.m.y, x.m.z, 0.0, 0.0, 0.0],
        );
        let x = state([0.0, 0.0, 1.0], [1.0, 0.0, 0.0]);
        let (mdot, gdot) = p.hamiltonian_vector_field(&h, &x).unwrap();
        assert!(mdot.norm() < 1e-15);
        assert!((gdot - Vec3::new(0.0, -1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn hvf_of_c1_vanishes_for_any_torque() {
        let mu = TorqueModel::new("aff", |g: Vec3, s: f64| {
            Vec3::new(g.y + s, g.x * g.x, s * s - g.z)
        });
        let p = PoissonStructure::new(mu);
        let c1 = ScalarField6::c1();
        let x = state([1.0, -2.0, 0.5], [0.3, 0.9, -0.4]);
        let (mdot, gdot) = p.hamiltonian_vector_field(&c1, &x).unwrap();
        assert!(mdot.norm() < 1e-15 && gdot.norm() < 1e-15);
    }

    #[test]
    fn kks_satisfies_jacobi_identity() {
        let p = PoissonStructure::kks();
        for (m, g) in [
            ([1.2, -0.3, 0.8], [0.5, 0.7, -0.1]),
            ([0.1, 0.9, -1.4], [-0.6, 0.2, 0.9]),
        ] {
            let x = state(m, g);
            let r = p
                .jacobi_identity_residual(&x, PoissonStructure::default_fd_step(&x))
                .unwrap();
            assert!(r < 1e-10, "residual {r}");
        }
    }

    #[test]
    fn shear_torque_violates_jacobi_identity() {
        // μ = (γ2, 0, 0): γ·curl_γ μ = −γ3 ≠ 0 generically.
        let mu = TorqueModel::new("shear", |g: Vec3, _| Vec3::new(g.y, 0.0, 0.0));
        let p = PoissonStructure::new(mu.clone());
        let x = state([0.4, -1.1, 0.7], [0.3, 0.5, 0.8]);
        let r = p
            .jacobi_identity_residual(&x, PoissonStructure::default_fd_step(&x))
            .unwrap();
        assert!(r > 1e-3, "residual {r}");
        let rc = jacobi_condition_residual(&mu, x.gamma, x.s()).unwrap();
        assert!((rc - x.gamma.z.abs()).abs() < 1e-7);
    }

    #[test]
    fn affine_symmetry_decides_jacobi() {
        let a = SymMatrix3::from_six([1.0, 0.7, 1.3, 0.2, -0.4, 0.1]);
        let sym = TorqueModel::new("sym", move |g: Vec3, _| a.apply(g));
        let x = state([0.9, 0.2, -0.5], [0.4, -0.7, 0.6]);
        let r = PoissonStructure::new(sym)
            .jacobi_identity_residual(&x, PoissonStructure::default_fd_step(&x))
            .unwrap();
        assert!(r < 1e-8, "symmetric affine residual {r}");

        // antisymmetric part hat(w) with |w| = 1/sqrt(2) gives unit-norm A − Aᵀ
        let w = Vec3::new(0.0, 0.0, 1.0 / 2.0f64.sqrt());
        let skew = TorqueModel::new("skew", move |g: Vec3, _| a.apply(g) + w.cross(g));
        let r = PoissonStructure::new(skew)
            .jacobi_identity_residual(&x, PoissonStructure::default_fd_step(&x))
            .unwrap();
        assert!(r > 1e-3, "non-symmetric affine residual {r}");
    }

    #[test]
    fn m_dependence_detects_chart_violation() {
        // factors through s = M·γ
        let good = |x: &State| Ok(x.gamma * (x.s().sin() + 1.0));
        let x = state([0.8, -0.3, 1.1], [0.4, 0.6, -0.2]);
        assert!(m_dependence_residual(good, &x, 1e-6).unwrap() < 1e-8);
        // genuine M1 dependence
        let bad = |x: &State| Ok(Vec3::new(x.m.x, 0.0, 0.0));
        assert!(m_dependence_residual(bad, &x, 1e-6).unwrap() > 1e-3);
    }

    #[test]
    fn c1_chart_form_is_exact_casimir() {
        let c1 = ScalarField::new("C1", |g: Vec3, _| 0.5 * g.norm_squared())
            .with_grad(|g, _| g)
            .with_d4(|_, _| 0.0);
        let mu = TorqueModel::new("any", |g: Vec3, s: f64| Vec3::new(s, g.x, g.y * s));
        let x = state([1.0, 0.3, -0.6], [0.2, -0.9, 0.5]);
        let r = casimir_condition_residual(&c1, &mu, x.gamma, x.s()).unwrap();
        assert_eq!(r, 0.0);
    }

    #[test]
    fn c2_pde_residual_zero_for_kks_positive_for_gyrostatic() {
        let c2 = ScalarField6::c2();
        let x = state([1.2, -0.5, 0.3], [0.4, 0.8, -0.3]);
        let r = casimir_pde_residual(&c2, &PoissonStructure::kks(), &x).unwrap();
        assert!(r < 1e-12, "KKS residual {r}");
        let mu0 = Vec3::new(0.7, 0.0, 0.0); // not parallel to γ
        let p = PoissonStructure::new(TorqueModel::new("g", move |_, _| mu0));
        let r = casimir_pde_residual(&c2, &p, &x).unwrap();
        assert!(r > 1e-3, "gyrostatic residual {r}");
    }

    #[test]
    fn lifted_casimir_gradient_matches_fd() {
        let c = ScalarField::new("c", |g: Vec3, s: f64| s * g.z + g.x * g.x * s.sin())
            .with_grad(|g, s| Vec3::new(2.0 * g.x * s.sin(), 0.0, s))
            .with_d4(|g, s| g.z + g.x * g.x * s.cos());
        let c6 = lift_casimir(&c);
        let x = state([0.9, -0.2, 0.4], [0.3, 0.7, -0.5]);
        let analytic = c6.grad(&x).unwrap();
        let fd = c6.fd_grad(&x, 1e-6).unwrap();
        for (a, b) in analytic.iter().zip(fd.iter()) {
            assert!((a - b).abs() < 1e-7, "{a} vs {b}");
        }
    }

    #[test]
    fn bracket_against_flow_directional_derivative() {
        // dG/dt along the mechanical flow is {G, H}: contract rhs with ∇G
        use crate::algebra::InertiaTensor;
        use crate::dynamics::rhs_general;
        let inertia = InertiaTensor::new(1.0, 2.0, 3.0).unwrap();
        let u = ScalarField::constant("U0", 0.0);
        let h = ScalarField6::new("H", move |x: &State| 0.5 * x.m.dot(inertia.omega(x.m)))
            .with_grad(move |x: &State| {
                let w = inertia.omega(x.m);
                [w.x, w.y, w.z, 0.0, 0.0, 0.0]
            });
        let p = PoissonStructure::kks();
        let x = state([1.1, -0.7, 0.4], [0.5, 0.3, -0.8]);
        let (mdot, gdot) = rhs_general(&x, &inertia, &p.mu, &u).unwrap();
        for g in [
            ScalarField6::new("g1", |x: &State| x.m.x * x.gamma.y),
            ScalarField6::new("g2", |x: &State| x.m.norm_squared() + x.gamma.z.powi(3)),
        ] {
            let grads = g.grad(&x).unwrap();
            let flow_derivative = mdot.x * grads[0]
                + mdot.y * grads[1]
                + mdot.z * grads[2]
                + gdot.x * grads[3]
                + gdot.y * grads[4]
                + gdot.z * grads[5];
            let bracket = p.bracket(&g, &h, &x).unwrap();
            assert!(
                (bracket - flow_derivative).abs() < 1e-7 * (1.0 + bracket.abs()),
                "{}: {bracket} vs {flow_derivative}",
                g.name
            );
        }
    }

    #[test]
    fn bracket_antisymmetry_on_random_fields() {
        use proptest::prelude::*;
        let mut runner = proptest::test_runner::TestRunner::deterministic();
        let strat = proptest::collection::vec(-2.0..2.0f64, 12);
        runner
            .run(&strat, |v| {
                let x = state([v[0], v[1], v[2]], [v[3], v[4], v[5]]);
                let (a, b, c) = (v[6], v[7], v[8]);
                let (d, e, g) = (v[9], v[10], v[11]);
                let f1 = ScalarField6::new("f", move |x: &State| {
                    a * x.m.x * x.gamma.z + b * x.m.y.powi(2) + c * x.gamma.x
                });
                let f2 = ScalarField6::new("g", move |x: &State| {
                    d * x.m.z + e * x.gamma.y * x.m.x + g * x.gamma.z.powi(2)
                });
                let p = PoissonStructure::new(TorqueModel::new("t", |gm: Vec3, s: f64| {
                    Vec3::new(gm.y * s, -gm.x, s)
                }));
                let fg = p.bracket(&f1, &f2, &x).unwrap();
                let gf = p.bracket(&f2, &f1, &x).unwrap();
                let scale = fg.abs().max(gf.abs()).max(1.0);
                prop_assert!((fg + gf).abs() <= 1e-12 * scale, "{fg} vs {gf}");
                Ok(())
            })
            .unwrap();
    }

    #[test]
    fn leibniz_rule_via_matrix_bracket() {
        let p = PoissonStructure::new(TorqueModel::new("t", |g: Vec3, s: f64| {
            Vec3::new(g.z * s, -g.x, s)
        }));
        let f = ScalarField6::new("f", |x: &State| x.m.x + x.gamma.y.powi(2));
        let g = ScalarField6::new("g", |x: &State| x.m.z * x.gamma.x);
        let h = ScalarField6::new("h", |x: &State| x.m.y - x.gamma.z);
        let x = state([0.6, -0.8, 1.2], [0.5, 0.3, -0.7]);
        let fg = ScalarField6::new("fg", {
            let (fe, ge) = (f.clone(), g.clone());
            move |x: &State| fe.eval(x).unwrap() * ge.eval(x).unwrap()
        });
        let lhs = p.bracket(&fg, &h, &x).unwrap();
        let rhs = f.eval(&x).unwrap() * p.bracket(&g, &h, &x).unwrap()
            + g.eval(&x).unwrap() * p.bracket(&f, &h, &x).unwrap();
        assert!(
            (lhs - rhs).abs() < 1e-6 * (1.0 + lhs.abs()),
            "{lhs} vs {rhs}"
        );
    }
}
