//! Fixed-dimension vector/matrix algebra and central-difference operators.
//!
//! Everything downstream works with triples: angular momentum, the symmetry
//! axis, angular velocity, torques. One `Vec3` type covers all of those
//! roles; phase points pair two of them into a [`State`].

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// A real triple. Components must stay finite; operations do not check.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 {
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn dot(self, other: Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    /// Right-handed cross product.
    pub fn cross(self, other: Vec3) -> Vec3 {
        Vec3 {
            x: self.y * other.z - self.z * other.y,
            y: self.z * other.x - self.x * other.z,
            z: self.x * other.y - self.y * other.x,
        }
    }

    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn component(self, i: usize) -> f64 {
        match i {
            0 => self.x,
            1 => self.y,
            2 => self.z,
            _ => panic!("Vec3 component index {i} out of range"),
        }
    }

    pub fn with_component(mut self, i: usize, v: f64) -> Vec3 {
        match i {
            0 => self.x = v,
            1 => self.y = v,
            2 => self.z = v,
            _ => panic!("Vec3 component index {i} out of range"),
        }
        self
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

impl From<[f64; 3]> for Vec3 {
    fn from(a: [f64; 3]) -> Self {
        Vec3::new(a[0], a[1], a[2])
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Vec3 {
    fn add_assign(&mut self, o: Vec3) {
        *self = *self + o;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, k: f64) -> Vec3 {
        Vec3::new(self.x * k, self.y * k, self.z * k)
    }
}

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        v * self
    }
}

impl fmt::Display for Vec3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

/// Phase point: angular momentum and field axis, both in the body frame.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct State {
    pub m: Vec3,
    pub gamma: Vec3,
}

impl State {
    pub fn new(m: Vec3, gamma: Vec3) -> Self {
        State { m, gamma }
    }

    /// The chart coordinate s = M · γ.
    pub fn s(&self) -> f64 {
        self.m.dot(self.gamma)
    }

    pub fn is_finite(&self) -> bool {
        self.m.is_finite() && self.gamma.is_finite()
    }

    pub fn to_array(&self) -> [f64; 6] {
        [
            self.m.x,
            self.m.y,
            self.m.z,
            self.gamma.x,
            self.gamma.y,
            self.gamma.z,
        ]
    }

    pub fn from_array(a: [f64; 6]) -> Self {
        State {
            m: Vec3::new(a[0], a[1], a[2]),
            gamma: Vec3::new(a[3], a[4], a[5]),
        }
    }

    /// Euclidean norm of the 6-dimensional coordinate vector.
    pub fn norm(&self) -> f64 {
        (self.m.norm_squared() + self.gamma.norm_squared()).sqrt()
    }

    /// Shift coordinate `i` (0..3 = M components, 3..6 = γ components) by `h`.
    pub fn perturbed(&self, i: usize, h: f64) -> State {
        let mut a = self.to_array();
        a[i] += h;
        State::from_array(a)
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "M={} gamma={}", self.m, self.gamma)
    }
}

/// Principal moments of inertia, strictly positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InertiaTensor {
    i1: f64,
    i2: f64,
    i3: f64,
}

impl InertiaTensor {
    pub fn new(i1: f64, i2: f64, i3: f64) -> Result<Self> {
        for (name, v) in [("I1", i1), ("I2", i2), ("I3", i3)] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::InvalidParam(format!(
                    "principal moment {name} must be finite and positive, got {v}"
                )));
            }
        }
        Ok(InertiaTensor { i1, i2, i3 })
    }

    /// Moments (2·I3, 2·I3, I3): two equal transverse moments, twice the axial one.
    pub fn kovalevskaya(i3: f64) -> Result<Self> {
        InertiaTensor::new(2.0 * i3, 2.0 * i3, i3)
    }

    pub fn moments(&self) -> (f64, f64, f64) {
        (self.i1, self.i2, self.i3)
    }

    /// Angular velocity ω = I⁻¹ M (componentwise in the principal frame).
    pub fn omega(&self, m: Vec3) -> Vec3 {
        Vec3::new(m.x / self.i1, m.y / self.i2, m.z / self.i3)
    }

    /// Angular momentum I ω.
    pub fn apply(&self, w: Vec3) -> Vec3 {
        Vec3::new(w.x * self.i1, w.y * self.i2, w.z * self.i3)
    }

    pub fn inverse_diagonal(&self) -> Vec3 {
        Vec3::new(1.0 / self.i1, 1.0 / self.i2, 1.0 / self.i3)
    }

    /// Triangle-inequality diagnostics. Violations are reported, never fatal:
    /// the equations of motion stay well defined for any positive moments.
    pub fn triangle_warnings(&self) -> Vec<String> {
        let (a, b, c) = (self.i1, self.i2, self.i3);
        let mut out = Vec::new();
        for (lhs, rhs, label) in [
            (a, b + c, "I1 <= I2 + I3"),
            (b, c + a, "I2 <= I3 + I1"),
            (c, a + b, "I3 <= I1 + I2"),
        ] {
            if lhs > rhs {
                out.push(format!(
                    "inertia triangle inequality violated: {label} fails ({lhs} > {rhs})"
                ));
            }
        }
        out
    }
}

/// Symmetric 3×3 matrix stored as its six independent entries.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SymMatrix3 {
    pub xx: f64,
    pub yy: f64,
    pub zz: f64,
    pub xy: f64,
    pub xz: f64,
    pub yz: f64,
}

impl SymMatrix3 {
    pub fn diagonal(d: Vec3) -> Self {
        SymMatrix3 {
            xx: d.x,
            yy: d.y,
            zz: d.z,
            ..Default::default()
        }
    }

    /// Entries in the order [xx, yy, zz, xy, xz, yz].
    pub fn from_six(e: [f64; 6]) -> Self {
        SymMatrix3 {
            xx: e[0],
            yy: e[1],
            zz: e[2],
            xy: e[3],
            xz: e[4],
            yz: e[5],
        }
    }

    pub fn apply(&self, v: Vec3) -> Vec3 {
        Vec3::new(
            self.xx * v.x + self.xy * v.y + self.xz * v.z,
            self.xy * v.x + self.yy * v.y + self.yz * v.z,
            self.xz * v.x + self.yz * v.y + self.zz * v.z,
        )
    }

    /// Quadratic form v · A v.
    pub fn quadratic(&self, v: Vec3) -> f64 {
        v.dot(self.apply(v))
    }
}

/// General (not necessarily symmetric) 3×3 matrix, row-major. Used only for
/// negative-control torques where symmetry is deliberately broken.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat3(pub [[f64; 3]; 3]);

impl Mat3 {
    pub fn apply(&self, v: Vec3) -> Vec3 {
        let a = self.0;
        Vec3::new(
            a[0][0] * v.x + a[0][1] * v.y + a[0][2] * v.z,
            a[1][0] * v.x + a[1][1] * v.y + a[1][2] * v.z,
            a[2][0] * v.x + a[2][1] * v.y + a[2][2] * v.z,
        )
    }

    /// Axial vector w of the antisymmetric part: (A - Aᵀ)/2 = hat(w).
    pub fn antisymmetric_axial(&self) -> Vec3 {
        let a = self.0;
        Vec3::new(
            0.5 * (a[2][1] - a[1][2]),
            0.5 * (a[0][2] - a[2][0]),
            0.5 * (a[1][0] - a[0][1]),
        )
    }

    /// curl of the linear field γ ↦ Aγ equals twice the axial vector.
    pub fn linear_field_curl(&self) -> Vec3 {
        self.antisymmetric_axial() * 2.0
    }
}

/// Step size balancing truncation against rounding for central differences
/// at a point of the given magnitude.
pub fn fd_default_step(scale: f64) -> f64 {
    (1e-6 * scale.abs()).max(1e-6)
}

/// Central-difference gradient of a scalar function of a triple.
///
/// Error O(h²). Evaluation failure at any stencil point is surfaced as a
/// domain error naming that point.
pub fn fd_gradient<F>(f: F, p: Vec3, h: f64) -> Result<Vec3>
where
    F: Fn(Vec3) -> Result<f64>,
{
    if h.is_nan() || h <= 0.0 {
        return Err(Error::InvalidParam(format!("fd step must be positive, got {h}")));
    }
    let mut g = Vec3::ZERO;
    for i in 0..3 {
        let pp = p.with_component(i, p.component(i) + h);
        let pm = p.with_component(i, p.component(i) - h);
        let fp = f(pp).map_err(|e| stencil_error(e, &format!("{pp}")))?;
        let fm = f(pm).map_err(|e| stencil_error(e, &format!("{pm}")))?;
        g = g.with_component(i, (fp - fm) / (2.0 * h));
    }
    Ok(g)
}

/// Central difference of a scalar function of one real variable.
pub fn fd_derivative<F>(f: F, t: f64, h: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    if h.is_nan() || h <= 0.0 {
        return Err(Error::InvalidParam(format!("fd step must be positive, got {h}")));
    }
    let fp = f(t + h).map_err(|e| stencil_error(e, &format!("s={}", t + h)))?;
    let fm = f(t - h).map_err(|e| stencil_error(e, &format!("s={}", t - h)))?;
    Ok((fp - fm) / (2.0 * h))
}

/// Central-difference curl in γ of a triple-valued field of (γ, s), with the
/// chart coordinate s held fixed.
pub fn fd_curl_gamma<F>(f: F, gamma: Vec3, s: f64, h: f64) -> Result<Vec3>
where
    F: Fn(Vec3, f64) -> Result<Vec3>,
{
    if h.is_nan() || h <= 0.0 {
        return Err(Error::InvalidParam(format!("fd step must be positive, got {h}")));
    }
    // jac[j] = ∂μ/∂γ_j (a triple per direction)
    let mut jac = [Vec3::ZERO; 3];
    for (j, slot) in jac.iter_mut().enumerate() {
        let gp = gamma.with_component(j, gamma.component(j) + h);
        let gm = gamma.with_component(j, gamma.component(j) - h);
        let fp = f(gp, s).map_err(|e| stencil_error(e, &format!("gamma={gp}, s={s}")))?;
        let fm = f(gm, s).map_err(|e| stencil_error(e, &format!("gamma={gm}, s={s}")))?;
        *slot = (fp - fm) * (1.0 / (2.0 * h));
    }
    Ok(Vec3::new(
        jac[1].z - jac[2].y,
        jac[2].x - jac[0].z,
        jac[0].y - jac[1].x,
    ))
}

fn stencil_error(e: Error, point: &str) -> Error {
    match e {
        Error::Domain(msg) => Error::Domain(format!("{msg} (stencil point {point})")),
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ok<T>(v: T) -> Result<T> {
        Ok(v)
    }

    #[test]
    fn cross_basis_identity() {
        let e1 = Vec3::new(1.0, 0.0, 0.0);
        let e2 = Vec3::new(0.0, 1.0, 0.0);
        assert_eq!(e1.cross(e2), Vec3::new(0.0, 0.0, 1.0));
    }

    #[test]
    fn cross_direct_arithmetic() {
        let a = Vec3::new(1.0, 2.0, 3.0);
        let b = Vec3::new(4.0, 5.0, 6.0);
        assert_eq!(a.cross(b), Vec3::new(-3.0, 6.0, -3.0));
    }

    #[test]
    fn cross_self_vanishes() {
        let a = Vec3::new(0.3, -1.7, 2.9);
        assert_eq!(a.cross(a), Vec3::ZERO);
    }

    #[test]
    fn omega_componentwise_division() {
        let i = InertiaTensor::new(2.0, 2.0, 1.0).unwrap();
        assert_eq!(i.omega(Vec3::new(2.0, 2.0, 1.0)), Vec3::new(1.0, 1.0, 1.0));
        let i = InertiaTensor::new(2.0, 3.0, 4.0).unwrap();
        assert_eq!(i.omega(Vec3::new(2.0, 3.0, 4.0)), Vec3::new(1.0, 1.0, 1.0));
        let id = InertiaTensor::new(1.0, 1.0, 1.0).unwrap();
        let m = Vec3::new(0.4, -0.2, 5.0);
        assert_eq!(id.omega(m), m);
    }

    #[test]
    fn inertia_rejects_nonpositive_moments() {
        assert!(InertiaTensor::new(0.0, 1.0, 1.0).is_err());
        assert!(InertiaTensor::new(1.0, -2.0, 1.0).is_err());
        assert!(InertiaTensor::new(1.0, 1.0, f64::NAN).is_err());
    }

    #[test]
    fn triangle_violation_is_warning_not_error() {
        let i = InertiaTensor::new(10.0, 1.0, 1.0).unwrap();
        let w = i.triangle_warnings();
        assert_eq!(w.len(), 1);
        assert!(w[0].contains("I1 <= I2 + I3"));
        assert!(InertiaTensor::new(1.0, 1.3, 1.7)
            .unwrap()
            .triangle_warnings()
            .is_empty());
    }

    #[test]
    fn fd_gradient_quadratic_exact() {
        let f = |g: Vec3| ok(0.5 * g.dot(g));
        let p = Vec3::new(1.0, 2.0, 3.0);
        let grad = fd_gradient(f, p, fd_default_step(p.norm())).unwrap();
        assert!((grad - p).norm() < 1e-9, "grad={grad}");
    }

    #[test]
    fn fd_gradient_constant_is_zero() {
        let grad = fd_gradient(|_| ok(4.25), Vec3::new(0.2, -0.9, 1.4), 1e-6).unwrap();
        assert_eq!(grad, Vec3::ZERO);
    }

    #[test]
    fn fd_gradient_cubic_matches_symbolic() {
        // f = γ1 γ2 γ3, ∇f at (1,1,1) = (1,1,1)
        let f = |g: Vec3| ok(g.x * g.y * g.z);
        let grad = fd_gradient(f, Vec3::new(1.0, 1.0, 1.0), 1e-6).unwrap();
        assert!((grad - Vec3::new(1.0, 1.0, 1.0)).norm() < 1e-8);
    }

    #[test]
    fn fd_gradient_surfaces_stencil_point() {
        let f = |g: Vec3| {
            if g.x > 1.0 {
                Err(Error::Domain("field undefined".into()))
            } else {
                Ok(g.x)
            }
        };
        let err = fd_gradient(f, Vec3::new(1.0, 0.0, 0.0), 0.5).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("stencil point"), "{msg}");
        assert!(msg.contains("1.5"), "{msg}");
    }

    #[test]
    fn fd_curl_of_gradient_vanishes() {
        // μ = ∇(γ1² γ3 + γ2 γ3²) has zero curl.
        let mu = |g: Vec3, _s: f64| {
            ok(Vec3::new(
                2.0 * g.x * g.z,
                g.z * g.z,
                g.x * g.x + 2.0 * g.y * g.z,
            ))
        };
        let c = fd_curl_gamma(mu, Vec3::new(0.7, -0.4, 1.1), 0.0, 1e-6).unwrap();
        assert!(c.norm() < 1e-9, "curl={c}");
    }

    #[test]
    fn fd_curl_hand_value() {
        // μ = (γ2, 0, 0) has curl (0, 0, −1) for any s.
        let mu = |g: Vec3, _s: f64| ok(Vec3::new(g.y, 0.0, 0.0));
        let c = fd_curl_gamma(mu, Vec3::new(0.3, 0.8, -0.5), 2.0, 1e-6).unwrap();
        assert!((c - Vec3::new(0.0, 0.0, -1.0)).norm() < 1e-8, "curl={c}");
    }

    #[test]
    fn fd_curl_symmetric_linear_field_vanishes() {
        let a = SymMatrix3::from_six([1.0, 0.8, 1.2, 0.2, 0.1, 0.3]);
        let mu = |g: Vec3, _s: f64| ok(a.apply(g));
        let c = fd_curl_gamma(mu, Vec3::new(0.4, 1.3, -0.9), 0.0, 1e-5).unwrap();
        assert!(c.norm() < 1e-10, "curl={c}");
    }

    #[test]
    fn raw_matrix_curl_is_twice_axial() {
        let a = Mat3([[0.0, 1.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0]]);
        assert_eq!(a.linear_field_curl(), Vec3::new(0.0, 0.0, -1.0));
        let mu = |g: Vec3, _s: f64| ok(a.apply(g));
        let c = fd_curl_gamma(mu, Vec3::new(0.2, 0.5, 0.9), 0.0, 1e-6).unwrap();
        assert!((c - a.linear_field_curl()).norm() < 1e-10);
    }

    #[test]
    fn fd_gradient_halving_h_quarters_cubic_error() {
        // degree-3 polynomial: truncation is O(h²) with a nonzero constant
        let f = |g: Vec3| ok(g.x.powi(3) + 0.5 * g.y.powi(3) - g.z.powi(3));
        let p = Vec3::new(0.9, -0.7, 1.2);
        let exact = Vec3::new(3.0 * p.x * p.x, 1.5 * p.y * p.y, -3.0 * p.z * p.z);
        let e1 = (fd_gradient(f, p, 1e-3).unwrap() - exact).norm();
        let e2 = (fd_gradient(f, p, 5e-4).unwrap() - exact).norm();
        let ratio = e1 / e2;
        assert!(
            (3.5..=4.5).contains(&ratio),
            "expected O(h^2) ratio, got {ratio}"
        );
    }

    proptest! {
        #[test]
        fn cross_antisymmetric_and_jacobi(
            ax in -2.0..2.0f64, ay in -2.0..2.0f64, az in -2.0..2.0f64,
            bx in -2.0..2.0f64, by in -2.0..2.0f64, bz in -2.0..2.0f64,
            cx in -2.0..2.0f64, cy in -2.0..2.0f64, cz in -2.0..2.0f64,
        ) {
            let a = Vec3::new(ax, ay, az);
            let b = Vec3::new(bx, by, bz);
            let c = Vec3::new(cx, cy, cz);
            let scale = a.norm() * b.norm() + b.norm() * c.norm() + 1.0;
            prop_assert!((a.cross(b) + b.cross(a)).norm() <= 1e-12 * scale);
            let jac = a.cross(b.cross(c)) + b.cross(c.cross(a)) + c.cross(a.cross(b));
            prop_assert!(jac.norm() <= 1e-12 * scale * (a.norm() + b.norm() + c.norm() + 1.0));
        }

        #[test]
        fn scalar_triple_degeneracy(
            ax in -2.0..2.0f64, ay in -2.0..2.0f64, az in -2.0..2.0f64,
            bx in -2.0..2.0f64, by in -2.0..2.0f64, bz in -2.0..2.0f64,
        ) {
            let a = Vec3::new(ax, ay, az);
            let b = Vec3::new(bx, by, bz);
            let scale = a.norm_squared() * b.norm() + 1.0;
            prop_assert!(a.dot(a.cross(b)).abs() <= 1e-12 * scale);
        }

        #[test]
        fn omega_inverts_apply(
            mx in -3.0..3.0f64, my in -3.0..3.0f64, mz in -3.0..3.0f64,
            i1 in 0.1..5.0f64, i2 in 0.1..5.0f64, i3 in 0.1..5.0f64,
        ) {
            let i = InertiaTensor::new(i1, i2, i3).unwrap();
            let m = Vec3::new(mx, my, mz);
            let back = i.apply(i.omega(m));
            prop_assert!((back - m).norm() <= 1e-14 * (m.norm() + 1.0));
        }
    }
}
