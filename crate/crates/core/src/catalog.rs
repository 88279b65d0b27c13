//! The torque catalog: every concrete gyroscopic-torque family shipped by
//! this crate, each with closed-form derivatives, its potential where the
//! family fixes one, and the invariant that replaces M·γ once the torque is
//! switched on.
//!
//! The `yehia_b` family deliberately ships two first integrals: the published
//! cyclic integral `I2_uncorrected`, which fails the Casimir condition and is
//! kept as a permanent negative control, and `C_corrected`, the invariant
//! that actually survives. The `corrected_torque` variant instead adjusts the
//! third torque component so that I2 itself becomes the conserved quantity.

use std::sync::Arc;

use crate::algebra::{InertiaTensor, Mat3, State, SymMatrix3, Vec3};
use crate::error::{Error, Result};
use crate::fields::{
    adaptive_simpson, Domain, Fn1, PolyGamma, ScalarField, ScalarField6, SingularPart,
};
use crate::torque::TorqueModel;

/// A named Casimir candidate. `conserved: false` marks quantities shipped as
/// negative controls (they are monitored but expected to drift).
#[derive(Debug, Clone)]
pub struct NamedCasimir {
    pub field: ScalarField,
    pub conserved: bool,
}

/// A complete simulation/verification setup.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub inertia: InertiaTensor,
    pub torque: TorqueModel,
    pub potential: ScalarField,
    pub casimirs: Vec<NamedCasimir>,
    pub hamiltonian: ScalarField6,
    /// Decomposition μ = ψγ + ∇φ when the family provides one.
    pub psi_phi: Option<(ScalarField, ScalarField)>,
    /// Free-form reproducibility notes (antiderivative reference points etc.).
    pub notes: Vec<String>,
}

impl Scenario {
    pub fn assemble(
        name: impl Into<String>,
        inertia: InertiaTensor,
        torque: TorqueModel,
        potential: ScalarField,
        casimirs: Vec<NamedCasimir>,
    ) -> Scenario {
        let hamiltonian = assemble_hamiltonian(inertia, &potential);
        Scenario {
            name: name.into(),
            inertia,
            torque,
            potential,
            casimirs,
            hamiltonian,
            psi_phi: None,
            notes: Vec::new(),
        }
    }

    fn with_psi_phi(mut self, psi: ScalarField, phi: ScalarField) -> Scenario {
        self.psi_phi = Some((psi, phi));
        self
    }

    fn with_note(mut self, note: String) -> Scenario {
        self.notes.push(note);
        self
    }

    /// Union of every singular set touched by this scenario's formulas.
    pub fn domain(&self) -> Domain {
        let mut d = self.torque.domain.merged(&self.potential.domain);
        for c in &self.casimirs {
            d = d.merged(&c.field.domain);
        }
        d
    }

    /// Conserved Casimirs only (the shipped negative controls excluded).
    pub fn conserved_casimirs(&self) -> impl Iterator<Item = &NamedCasimir> {
        self.casimirs.iter().filter(|c| c.conserved)
    }
}

/// U = m·g·(ξ·γ), the classical linear potential of a heavy body.
pub fn make_classical_potential(m: f64, g: f64, xi: Vec3) -> ScalarField {
    let grad = xi * (m * g);
    ScalarField::new(
        format!("classical(m={m}, g={g}, xi={xi})"),
        move |gam: Vec3, _| grad.dot(gam),
    )
    .with_grad(move |_, _| grad)
    .with_d4(|_, _| 0.0)
}

/// H = ½ M·I⁻¹M + U(γ) with analytic 6-gradient (I⁻¹M, ∇U).
pub fn assemble_hamiltonian(inertia: InertiaTensor, potential: &ScalarField) -> ScalarField6 {
    let u_eval = potential.clone();
    let u_grad = potential.clone();
    ScalarField6::new("H", move |x: &State| {
        0.5 * x.m.dot(inertia.omega(x.m)) + u_eval.eval_raw(x.gamma, x.s())
    })
    .with_grad(move |x: &State| {
        let w = inertia.omega(x.m);
        let gu = u_grad.grad_gamma_raw(x.gamma, x.s());
        [w.x, w.y, w.z, gu.x, gu.y, gu.z]
    })
    .with_domain(potential.domain.clone())
}

/// Constant generator μ ≡ μ₀ with invariant (M + μ₀)·γ.
pub fn make_gyrostatic(mu0: Vec3) -> (TorqueModel, ScalarField) {
    let torque = TorqueModel::new(format!("gyrostatic(mu0={mu0})"), move |_, _| mu0)
        .with_d4(|_, _| Vec3::ZERO)
        .with_curl(|_, _| Vec3::ZERO);
    let casimir = ScalarField::new("C_gyro", move |g: Vec3, s: f64| s + mu0.dot(g))
        .with_grad(move |_, _| mu0)
        .with_d4(|_, _| 1.0);
    (torque, casimir)
}

/// Affine generator μ = Aγ + μ₀ with a symmetric matrix; invariant
/// ½γ·Aγ + (M+μ₀)·γ. Symmetry is structural here, so the Jacobi condition
/// holds by construction.
pub fn make_affine(a: SymMatrix3, mu0: Vec3) -> (TorqueModel, ScalarField) {
    let torque = TorqueModel::new(format!("affine(A={a:?}, mu0={mu0})"), move |g: Vec3, _| {
        a.apply(g) + mu0
    })
    .with_d4(|_, _| Vec3::ZERO)
    .with_curl(|_, _| Vec3::ZERO);
    let casimir = ScalarField::new("C_affine", move |g: Vec3, s: f64| {
        0.5 * a.quadratic(g) + s + mu0.dot(g)
    })
    .with_grad(move |g, _| a.apply(g) + mu0)
    .with_d4(|_, _| 1.0);
    (torque, casimir)
}

/// ψ–φ decomposition of the affine generator: ψ = 0, φ = ½γ·Aγ + μ₀·γ.
pub fn affine_psi_phi(a: SymMatrix3, mu0: Vec3) -> (ScalarField, ScalarField) {
    let psi = ScalarField::constant("psi_affine", 0.0);
    let phi = ScalarField::new("phi_affine", move |g: Vec3, _| {
        0.5 * a.quadratic(g) + mu0.dot(g)
    })
    .with_grad(move |g, _| a.apply(g) + mu0)
    .with_d4(|_, _| 0.0);
    (psi, phi)
}

/// Raw-matrix affine generator for negative controls. No invariant ships with
/// it: a non-symmetric A breaks the Jacobi condition, which is the point.
pub fn make_affine_raw(a: Mat3, mu0: Vec3) -> TorqueModel {
    let curl = a.linear_field_curl();
    TorqueModel::new(format!("affine_raw(A={:?}, mu0={mu0}) [unverified]", a.0), move |g: Vec3, _| {
        a.apply(g) + mu0
    })
    .with_d4(|_, _| Vec3::ZERO)
    .with_curl(move |_, _| curl)
}

/// μ = ψ(γ)γ + ∇φ(γ) with invariant M·γ + φ(γ).
pub fn make_psi_phi(psi: &ScalarField, phi: &ScalarField) -> (TorqueModel, ScalarField) {
    let domain = psi.domain.merged(&phi.domain);
    let (psi_e, phi_e) = (psi.clone(), phi.clone());
    let torque = TorqueModel::new(
        format!("psi_phi(psi={}, phi={})", psi.name, phi.name),
        move |g: Vec3, s: f64| g * psi_e.eval_raw(g, s) + phi_e.grad_gamma_raw(g, s),
    )
    .with_d4(|_, _| Vec3::ZERO)
    .with_domain(domain.clone());
    // curl(ψγ + ∇φ) = ∇ψ × γ
    let psi_g = psi.clone();
    let torque = torque.with_curl(move |g: Vec3, s: f64| psi_g.grad_gamma_raw(g, s).cross(g));
    let phi_c = phi.clone();
    let phi_cg = phi.clone();
    let casimir = ScalarField::new("C_psi_phi", move |g: Vec3, s: f64| {
        s + phi_c.eval_raw(g, s)
    })
    .with_grad(move |g, s| phi_cg.grad_gamma_raw(g, s))
    .with_d4(|_, _| 1.0)
    .with_domain(domain);
    (torque, casimir)
}

/// Yehia's vector-field form μ = −(div ℓ)γ + ∇(ℓ·γ) for a polynomial field ℓ.
/// Reduces to the ψ–φ form with ψ = −div ℓ, φ = ℓ·γ; the invariant is the
/// cyclic integral (M + ℓ)·γ.
pub fn make_yehia_l(l: [PolyGamma; 3]) -> (TorqueModel, ScalarField) {
    let div = l[0]
        .partial(0)
        .add(&l[1].partial(1))
        .add(&l[2].partial(2));
    let psi = ScalarField::from_poly("psi_l", div.scale(-1.0));
    let phi_poly = l[0]
        .mul_gamma(0)
        .add(&l[1].mul_gamma(1))
        .add(&l[2].mul_gamma(2));
    let phi = ScalarField::from_poly("phi_l", phi_poly);
    let (torque, casimir) = make_psi_phi(&psi, &phi);
    (torque.with_label("yehia_l"), casimir.renamed("C_cyclic"))
}

/// Parameters of the first Kovalevskaya-configuration family (polynomial
/// torque and potential).
#[derive(Debug, Clone, Copy)]
pub struct YehiaAParams {
    pub a1: f64,
    pub a2: f64,
    pub k: f64,
    pub n: f64,
    pub n1: f64,
    pub n2: f64,
    pub i3: f64,
}

impl Default for YehiaAParams {
    fn default() -> Self {
        YehiaAParams {
            a1: 1.0,
            a2: 0.5,
            k: 1.0,
            n: 0.3,
            n1: 0.2,
            n2: 0.1,
            i3: 1.0,
        }
    }
}

/// linear factor n + n1 γ1 + n2 γ2
fn linear_l(n: f64, n1: f64, n2: f64) -> PolyGamma {
    PolyGamma::from_terms(vec![([0, 0, 0], n), ([1, 0, 0], n1), ([0, 1, 0], n2)])
}

/// quadratic factor 2γ1² + 2γ2² + γ3²
fn quad_q() -> PolyGamma {
    PolyGamma::from_terms(vec![([2, 0, 0], 2.0), ([0, 2, 0], 2.0), ([0, 0, 2], 1.0)])
}

pub fn make_yehia_case_a(p: YehiaAParams) -> Result<Scenario> {
    let YehiaAParams {
        a1,
        a2,
        k,
        n,
        n1,
        n2,
        i3,
    } = p;
    let inertia = InertiaTensor::kovalevskaya(i3)?;

    let torque = TorqueModel::new(format!("yehia_a({p:?})"), move |g: Vec3, _| {
        Vec3::new(
            i3 * (-n * g.x - n1 * g.x * g.x + 2.0 * n1 * g.y * g.y + n1 * g.z * g.z
                - 3.0 * n2 * g.x * g.y),
            i3 * (-n * g.y + 2.0 * n2 * g.x * g.x - n2 * g.y * g.y + n2 * g.z * g.z
                - 3.0 * n1 * g.x * g.y),
            i3 * (k - 3.0 * n * g.z - 5.0 * n1 * g.x * g.z - 5.0 * n2 * g.y * g.z),
        )
    })
    .with_d4(|_, _| Vec3::ZERO)
    // ∇ψ is constant, so curl = ∇ψ × γ with ∇ψ = −I3 (7n1, 7n2, 0)
    .with_curl(move |g: Vec3, _| Vec3::new(-7.0 * i3 * n1, -7.0 * i3 * n2, 0.0).cross(g));

    // φ = I3 [k γ3 + L Q], ψ = −I3 (5n + 7n1 γ1 + 7n2 γ2)
    let l = linear_l(n, n1, n2);
    let phi_poly = PolyGamma::from_terms(vec![([0, 0, 1], k)])
        .add(&l.mul(&quad_q()))
        .scale(i3);
    let psi_poly = linear_l(5.0 * n, 7.0 * n1, 7.0 * n2).scale(-i3);
    let phi = ScalarField::from_poly("phi_a", phi_poly.clone());
    let psi = ScalarField::from_poly("psi_a", psi_poly);

    // U = I3 (a1 γ1 + a2 γ2) − I3 k γ3 L − ½ I3 L² Q
    let u_poly = PolyGamma::from_terms(vec![([1, 0, 0], a1), ([0, 1, 0], a2)])
        .scale(i3)
        .add(&l.mul_gamma(2).scale(-i3 * k))
        .add(&l.mul(&l).mul(&quad_q()).scale(-0.5 * i3));
    let potential = ScalarField::from_poly("U_yehia_a", u_poly);

    let cas_phi = phi_poly.clone();
    let cas_grad = phi_poly;
    let casimir = ScalarField::new("I2", move |g: Vec3, s: f64| s + cas_phi.eval(g))
        .with_grad(move |g, _| cas_grad.grad(g))
        .with_d4(|_, _| 1.0);

    Ok(Scenario::assemble(
        "yehia_a",
        inertia,
        torque,
        potential,
        vec![NamedCasimir {
            field: casimir,
            conserved: true,
        }],
    )
    .with_psi_phi(psi, phi))
}

/// Parameters of the second Kovalevskaya-configuration family, singular on
/// the axis γ1 = γ2 = 0.
#[derive(Debug, Clone, Copy)]
pub struct YehiaBParams {
    pub a1: f64,
    pub a2: f64,
    pub eps: f64,
    pub big_n: f64,
    pub n: f64,
    pub n1: f64,
    pub n2: f64,
    pub i3: f64,
}

impl Default for YehiaBParams {
    fn default() -> Self {
        YehiaBParams {
            a1: 1.0,
            a2: 0.5,
            eps: 0.1,
            big_n: 1.0,
            n: 0.3,
            n1: 0.2,
            n2: 0.1,
            i3: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseBVariant {
    /// Published torque; ships both the failing I2 and the corrected invariant.
    Original,
    /// Published torque with only the corrected invariant.
    CorrectedCasimir,
    /// Adjusted third torque component μ3′; I2 is then genuinely invariant.
    CorrectedTorque,
}

impl CaseBVariant {
    pub fn name(&self) -> &'static str {
        match self {
            CaseBVariant::Original => "original",
            CaseBVariant::CorrectedCasimir => "corrected_casimir",
            CaseBVariant::CorrectedTorque => "corrected_torque",
        }
    }
}

/// Polynomial part of the case-b torque (the k = 0 case-a expression).
fn case_b_mu_poly(p: &YehiaBParams, g: Vec3) -> Vec3 {
    let YehiaBParams {
        i3, n, n1, n2, ..
    } = *p;
    Vec3::new(
        i3 * (-n * g.x - n1 * g.x * g.x + 2.0 * n1 * g.y * g.y + n1 * g.z * g.z
            - 3.0 * n2 * g.x * g.y),
        i3 * (-n * g.y + 2.0 * n2 * g.x * g.x - n2 * g.y * g.y + n2 * g.z * g.z
            - 3.0 * n1 * g.x * g.y),
        -i3 * g.z * (3.0 * n + 5.0 * n1 * g.x + 5.0 * n2 * g.y),
    )
}

pub fn make_yehia_case_b(p: YehiaBParams, variant: CaseBVariant) -> Result<Scenario> {
    let YehiaBParams {
        a1,
        a2,
        eps,
        big_n,
        n,
        n1,
        n2,
        i3,
    } = p;
    let inertia = InertiaTensor::kovalevskaya(i3)?;
    let domain = Domain::of(SingularPart::TransverseAxis);

    let corrected = variant == CaseBVariant::CorrectedTorque;
    let pp = p;
    let torque = TorqueModel::new(
        format!("yehia_b[{}]({p:?})", variant.name()),
        move |g: Vec3, _| {
            let r2 = g.x * g.x + g.y * g.y;
            let r = r2.sqrt();
            let r3 = r2 * r;
            let mut mu = case_b_mu_poly(&pp, g);
            mu.x += i3 * big_n * g.x / r3;
            mu.y += i3 * big_n * g.y / r3;
            if corrected {
                mu.z += i3 * big_n * g.z * (g.z * g.z + 1.0) / r3;
            } else {
                mu.z += -i3 * big_n * g.z * g.z / r;
            }
            mu
        },
    )
    .with_d4(|_, _| Vec3::ZERO)
    .with_curl(move |g: Vec3, _| {
        let r2 = g.x * g.x + g.y * g.y;
        let r = r2.sqrt();
        let r3 = r2 * r;
        // polynomial part: ∇ψ0 × γ with ∇ψ0 = −I3 (7n1, 7n2, 0)
        let mut grad_psi = Vec3::new(-7.0 * i3 * n1, -7.0 * i3 * n2, 0.0);
        if corrected {
            // ψ gains −I3·N·(2r² − γ3² − 1)/r³; the whole field stays ψγ + ∇φ
            let dr = -2.0 / r2 + 3.0 * (g.z * g.z + 1.0) / (r2 * r2);
            grad_psi += Vec3::new(dr * g.x / r, dr * g.y / r, -2.0 * g.z / r3) * (-i3 * big_n);
            grad_psi.cross(g)
        } else {
            // gradient N-part is curl-free; the residual axial part contributes
            // I3·N·γ3²·(γ2, −γ1, 0)/r³
            grad_psi.cross(g)
                + Vec3::new(g.z * g.z * g.y / r3, -g.z * g.z * g.x / r3, 0.0) * (i3 * big_n)
        }
    })
    .with_domain(domain.clone());

    // U = I3(a1γ1 + a2γ2) + ε/r − ½ I3 (L + N/r)² (2r² + γ3²)
    let potential = ScalarField::new("U_yehia_b", move |g: Vec3, _| {
        let r2 = g.x * g.x + g.y * g.y;
        let r = r2.sqrt();
        let lr = n + n1 * g.x + n2 * g.y + big_n / r;
        i3 * (a1 * g.x + a2 * g.y) + eps / r - 0.5 * i3 * lr * lr * (2.0 * r2 + g.z * g.z)
    })
    .with_grad(move |g: Vec3, _| {
        let r2 = g.x * g.x + g.y * g.y;
        let r = r2.sqrt();
        let r3 = r2 * r;
        let lr = n + n1 * g.x + n2 * g.y + big_n / r;
        let q = 2.0 * r2 + g.z * g.z;
        Vec3::new(
            i3 * a1
                - eps * g.x / r3
                - 0.5 * i3 * (2.0 * lr * (n1 - big_n * g.x / r3) * q + lr * lr * 4.0 * g.x),
            i3 * a2
                - eps * g.y / r3
                - 0.5 * i3 * (2.0 * lr * (n2 - big_n * g.y / r3) * q + lr * lr * 4.0 * g.y),
            -i3 * lr * lr * g.z,
        )
    })
    .with_d4(|_, _| 0.0)
    .with_domain(domain.clone());

    // shared polynomial part φ0 = I3 L Q
    let phi0 = linear_l(n, n1, n2).mul(&quad_q()).scale(i3);

    // I2 = s + I3 (L + N/r) Q  — the published cyclic integral
    let (phi0_e, phi0_g) = (phi0.clone(), phi0.clone());
    let i2 = ScalarField::new("I2_uncorrected", move |g: Vec3, s: f64| {
        let r2 = g.x * g.x + g.y * g.y;
        let r = r2.sqrt();
        s + phi0_e.eval(g) + i3 * big_n * (2.0 * r2 + g.z * g.z) / r
    })
    .with_grad(move |g: Vec3, _| {
        let r2 = g.x * g.x + g.y * g.y;
        let r = r2.sqrt();
        let f = 2.0 - g.z * g.z / r2;
        phi0_g.grad(g)
            + Vec3::new(f * g.x / r, f * g.y / r, 2.0 * g.z / r) * (i3 * big_n)
    })
    .with_d4(|_, _| 1.0)
    .with_domain(domain.clone());

    // C = s + φ0 + ½ I3 N [ (γ3 r² − 2)/r − (r² + γ3²) arctan(γ3/r) ]
    let (phi0_e, phi0_g) = (phi0.clone(), phi0);
    let corrected_c = ScalarField::new("C_corrected", move |g: Vec3, s: f64| {
        let r2 = g.x * g.x + g.y * g.y;
        let r = r2.sqrt();
        let e = (g.z * r2 - 2.0) / r - (r2 + g.z * g.z) * (g.z / r).atan();
        s + phi0_e.eval(g) + 0.5 * i3 * big_n * e
    })
    .with_grad(move |g: Vec3, _| {
        let r2 = g.x * g.x + g.y * g.y;
        let r = r2.sqrt();
        let at = (g.z / r).atan();
        let er = 2.0 * g.z + 2.0 / r2 - 2.0 * r * at;
        phi0_g.grad(g)
            + Vec3::new(er * g.x / r, er * g.y / r, -2.0 * g.z * at) * (0.5 * i3 * big_n)
    })
    .with_d4(|_, _| 1.0)
    .with_domain(domain.clone());

    let casimirs = match variant {
        CaseBVariant::Original => vec![
            NamedCasimir {
                field: corrected_c,
                conserved: true,
            },
            NamedCasimir {
                field: i2,
                conserved: false,
            },
        ],
        CaseBVariant::CorrectedCasimir => vec![NamedCasimir {
            field: corrected_c,
            conserved: true,
        }],
        CaseBVariant::CorrectedTorque => vec![NamedCasimir {
            field: i2.renamed("I2"),
            conserved: true,
        }],
    };

    let mut scenario = Scenario::assemble(
        format!("yehia_b({})", variant.name()),
        inertia,
        torque,
        potential,
        casimirs,
    );

    if corrected {
        // ψ, φ of the adjusted torque
        let psi = ScalarField::new("psi_b", move |g: Vec3, _| {
            let r2 = g.x * g.x + g.y * g.y;
            let r3 = r2 * r2.sqrt();
            -i3 * (5.0 * n
                + 7.0 * n1 * g.x
                + 7.0 * n2 * g.y
                + big_n * (2.0 * r2 - g.z * g.z - 1.0) / r3)
        })
        .with_grad(move |g: Vec3, _| {
            let r2 = g.x * g.x + g.y * g.y;
            let r = r2.sqrt();
            let r3 = r2 * r;
            let dr = -2.0 / r2 + 3.0 * (g.z * g.z + 1.0) / (r2 * r2);
            Vec3::new(-7.0 * i3 * n1, -7.0 * i3 * n2, 0.0)
                + Vec3::new(dr * g.x / r, dr * g.y / r, -2.0 * g.z / r3) * (-i3 * big_n)
        })
        .with_d4(|_, _| 0.0)
        .with_domain(domain.clone());
        let phi = ScalarField::new("phi_b", {
            let phi0 = linear_l(n, n1, n2).mul(&quad_q()).scale(i3);
            move |g: Vec3, _| {
                let r2 = g.x * g.x + g.y * g.y;
                phi0.eval(g) + i3 * big_n * (2.0 * r2 + g.z * g.z) / r2.sqrt()
            }
        })
        .with_grad({
            let phi0 = linear_l(n, n1, n2).mul(&quad_q()).scale(i3);
            move |g: Vec3, _| {
                let r2 = g.x * g.x + g.y * g.y;
                let r = r2.sqrt();
                let f = 2.0 - g.z * g.z / r2;
                phi0.grad(g)
                    + Vec3::new(f * g.x / r, f * g.y / r, 2.0 * g.z / r) * (i3 * big_n)
            }
        })
        .with_d4(|_, _| 0.0)
        .with_domain(domain);
        scenario = scenario.with_psi_phi(psi, phi);
    }

    Ok(scenario)
}

/// Pick the antiderivative reference point: 0 when it sits inside a zero-free
/// interval of the coefficient, otherwise the midpoint of the widest window.
fn choose_s0(zeros: &[f64], lo: f64, hi: f64) -> f64 {
    if zeros.is_empty() {
        return 0.0;
    }
    let mut edges = vec![lo];
    edges.extend_from_slice(zeros);
    edges.push(hi);
    let contains_zero = |a: f64, b: f64| a < 0.0 && 0.0 < b;
    for w in edges.windows(2) {
        if contains_zero(w[0], w[1]) && (w[0].abs()).min(w[1].abs()) > 1e-3 {
            return 0.0;
        }
    }
    let widest = edges
        .windows(2)
        .max_by(|a, b| (a[1] - a[0]).total_cmp(&(b[1] - b[0])))
        .expect("at least one interval");
    0.5 * (widest[0] + widest[1])
}

/// Scan window for roots of s-coefficients. |s| = |M·γ| stays well inside
/// this for the sampling and integration ranges used here.
const S_WINDOW: f64 = 20.0;

/// Antiderivative of 1/f from s0: closed form when the registry kind has one,
/// adaptive Simpson (tolerance 1e-12) otherwise.
fn recip_antideriv_fn(f: &Fn1, s0: f64) -> Arc<dyn Fn(f64) -> f64 + Send + Sync> {
    match f.recip_antideriv() {
        Some(closed) => Arc::new(move |s| closed(s0, s)),
        None => {
            let f = f.clone();
            Arc::new(move |s| adaptive_simpson(&|t| 1.0 / f.eval(t), s0, s, 1e-12))
        }
    }
}

/// Separable generator μ = a(s)∇φ(γ) + b(γ, s)γ with b = b_γ(γ)·b_s(s).
/// The invariant is ∫1/a ds + φ(γ). Returns the parts plus the recorded
/// antiderivative reference point.
pub fn make_separable(
    a: Fn1,
    b_gamma: PolyGamma,
    b_s: Fn1,
    phi: PolyGamma,
    recip_a: Option<Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>>,
) -> Result<(TorqueModel, ScalarField, f64)> {
    let zeros = a.zeros_in(-S_WINDOW, S_WINDOW);
    if matches!(a, Fn1::Const(c) if c == 0.0) {
        return Err(Error::InvalidParam(
            "separable coefficient a(s) vanishes identically".into(),
        ));
    }
    let s0 = choose_s0(&zeros, -S_WINDOW, S_WINDOW);
    if a.eval(s0).abs() < 1e-9 {
        return Err(Error::InvalidParam(format!(
            "separable coefficient a(s) vanishes at the reference point s0={s0}"
        )));
    }
    let eval_domain = if zeros.is_empty() {
        Domain::none()
    } else {
        Domain::of(SingularPart::SZero {
            zeros: zeros.clone(),
        })
    };
    // The invariant's antiderivative must also not cross a zero of a.
    let cas_domain = if zeros.is_empty() {
        Domain::none()
    } else {
        Domain::of(SingularPart::SBarrier {
            zeros: zeros.clone(),
            s0,
        })
    };

    let (a_e, bg_e, bs_e, phi_e) = (a.clone(), b_gamma.clone(), b_s.clone(), phi.clone());
    let torque = TorqueModel::new(
        format!("separable(a={a:?}, b={b_gamma:?}*{b_s:?}, phi={phi:?})"),
        move |g: Vec3, s: f64| {
            phi_e.grad(g) * a_e.eval(s) + g * (bg_e.eval(g) * bs_e.eval(s))
        },
    )
    .with_d4({
        let (a_d, bg_d, bs_d, phi_d) = (a.clone(), b_gamma.clone(), b_s.clone(), phi.clone());
        move |g: Vec3, s: f64| {
            phi_d.grad(g) * a_d.deriv(s) + g * (bg_d.eval(g) * bs_d.deriv(s))
        }
    })
    .with_curl({
        // curl(a∇φ) = 0 at fixed s; curl(bγ) = ∇_γ b × γ
        let (bg_c, bs_c) = (b_gamma.clone(), b_s.clone());
        move |g: Vec3, s: f64| bg_c.grad(g).cross(g) * bs_c.eval(s)
    })
    .with_domain(eval_domain);

    let recip = match recip_a {
        Some(user) => Arc::new(move |s: f64| user(s0, s)) as Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        None => recip_antideriv_fn(&a, s0),
    };
    let (phi_c, phi_g, a_c) = (phi.clone(), phi, a);
    let casimir = ScalarField::new("C_sep", move |g: Vec3, s: f64| recip(s) + phi_c.eval(g))
        .with_grad(move |g, _| phi_g.grad(g))
        .with_d4(move |_, s| 1.0 / a_c.eval(s))
        .with_domain(cas_domain);
    Ok((torque, casimir, s0))
}

/// Single-axis generator μ = (0, 0, β(γ₃)δ(s)) with invariant
/// ∫1/δ ds + ∫β dγ₃.
pub fn make_axis_torque(beta: Fn1, delta: Fn1) -> Result<(TorqueModel, ScalarField, f64)> {
    let zeros = delta.zeros_in(-S_WINDOW, S_WINDOW);
    if matches!(delta, Fn1::Const(c) if c == 0.0) {
        return Err(Error::InvalidParam(
            "axis coefficient delta(s) vanishes identically".into(),
        ));
    }
    let s0 = choose_s0(&zeros, -S_WINDOW, S_WINDOW);
    if delta.eval(s0).abs() < 1e-9 {
        return Err(Error::InvalidParam(format!(
            "axis coefficient delta(s) vanishes at the reference point s0={s0}"
        )));
    }
    let eval_domain = if zeros.is_empty() {
        Domain::none()
    } else {
        Domain::of(SingularPart::SZero {
            zeros: zeros.clone(),
        })
    };
    let cas_domain = if zeros.is_empty() {
        Domain::none()
    } else {
        Domain::of(SingularPart::SBarrier {
            zeros: zeros.clone(),
            s0,
        })
    };

    let (beta_e, delta_e) = (beta.clone(), delta.clone());
    let torque = TorqueModel::new(
        format!("axis(beta={beta:?}, delta={delta:?})"),
        move |g: Vec3, s: f64| Vec3::new(0.0, 0.0, beta_e.eval(g.z) * delta_e.eval(s)),
    )
    .with_d4({
        let (beta_d, delta_d) = (beta.clone(), delta.clone());
        move |g: Vec3, s: f64| Vec3::new(0.0, 0.0, beta_d.eval(g.z) * delta_d.deriv(s))
    })
    .with_curl(|_, _| Vec3::ZERO)
    .with_domain(eval_domain);

    let recip = recip_antideriv_fn(&delta, s0);
    let (beta_c, beta_g, delta_c) = (beta.clone(), beta, delta);
    let casimir = ScalarField::new("C_axis", move |g: Vec3, s: f64| {
        recip(s) + beta_c.antideriv(g.z)
    })
    .with_grad(move |g, _| Vec3::new(0.0, 0.0, beta_g.eval(g.z)))
    .with_d4(move |_, s| 1.0 / delta_c.eval(s))
    .with_domain(cas_domain);
    Ok((torque, casimir, s0))
}

/// In-plane Jacobi residual γ1 ∂μ3/∂γ2 − γ2 ∂μ3/∂γ1 for single-axis torques,
/// by central differences. Zero means the third component factors through
/// (γ1² + γ2², γ3, s).
pub fn axis_plane_jacobi_residual(mu: &TorqueModel, gamma: Vec3, s: f64, h: f64) -> Result<f64> {
    let d1 = {
        let p = mu.eval(gamma.with_component(0, gamma.x + h), s)?;
        let m = mu.eval(gamma.with_component(0, gamma.x - h), s)?;
        (p.z - m.z) / (2.0 * h)
    };
    let d2 = {
        let p = mu.eval(gamma.with_component(1, gamma.y + h), s)?;
        let m = mu.eval(gamma.with_component(1, gamma.y - h), s)?;
        (p.z - m.z) / (2.0 * h)
    };
    Ok((gamma.x * d2 - gamma.y * d1).abs())
}

/// Chart residual μ3 ∂C/∂s − ∂C/∂γ3 + γ3 ∂C/∂r for invariants of single-axis
/// torques, with r = ½(γ1² + γ2²). ∂C/∂r is recovered from the in-plane
/// gradient components; it vanishes for the shipped families.
pub fn axis_casimir_chart_residual(
    c: &ScalarField,
    mu: &TorqueModel,
    gamma: Vec3,
    s: f64,
) -> Result<f64> {
    let mu3 = mu.eval(gamma, s)?.z;
    let d4 = c.d4(gamma, s)?;
    let grad = c.grad_gamma(gamma, s)?;
    let dc_dr = if gamma.x.abs() >= gamma.y.abs() && gamma.x.abs() > 1e-9 {
        grad.x / gamma.x
    } else if gamma.y.abs() > 1e-9 {
        grad.y / gamma.y
    } else {
        0.0
    };
    Ok((mu3 * d4 - grad.z + gamma.z * dc_dr).abs())
}

/// Kovalevskaya-configuration scenario with μ = (0, 0, s/γ₃),
/// U = α(γ1² − γ2²) and invariant γ₃·s.
pub fn make_borisov_mamaev(alpha: f64, i3: f64) -> Result<Scenario> {
    let inertia = InertiaTensor::kovalevskaya(i3)?;
    let domain = Domain::of(SingularPart::GammaPlane);
    let torque = TorqueModel::new(
        format!("borisov_mamaev(alpha={alpha}, I3={i3})"),
        |g: Vec3, s: f64| Vec3::new(0.0, 0.0, s / g.z),
    )
    .with_d4(|g: Vec3, _| Vec3::new(0.0, 0.0, 1.0 / g.z))
    .with_curl(|_, _| Vec3::ZERO)
    .with_domain(domain.clone());

    let u_poly = PolyGamma::from_terms(vec![([2, 0, 0], alpha), ([0, 2, 0], -alpha)]);
    let potential = ScalarField::from_poly("U_bm", u_poly);

    let casimir = ScalarField::new("C_bm", |g: Vec3, s: f64| g.z * s)
        .with_grad(|_, s: f64| Vec3::new(0.0, 0.0, s))
        .with_d4(|g: Vec3, _| g.z)
        .with_domain(domain);

    Ok(Scenario::assemble(
        "borisov_mamaev",
        inertia,
        torque,
        potential,
        vec![NamedCasimir {
            field: casimir,
            conserved: true,
        }],
    ))
}

/// Generic (non-Kovalevskaya) inertia used by the families that do not pin
/// their own: strongly asymmetric so free precession mixes all three axes,
/// still physically admissible.
pub fn default_generic_inertia() -> InertiaTensor {
    InertiaTensor::new(1.0, 2.1, 2.9).expect("static moments are valid")
}

/// Classical potential at laboratory gravity with a generic center-of-mass
/// offset; strong enough that nutation genuinely couples M and γ.
pub fn default_potential() -> ScalarField {
    make_classical_potential(1.0, 9.81, Vec3::new(0.25, 0.1, 1.0))
}

fn scenario_from_pair(
    name: &str,
    torque: TorqueModel,
    casimir: ScalarField,
) -> Scenario {
    Scenario::assemble(
        name,
        default_generic_inertia(),
        torque,
        default_potential(),
        vec![NamedCasimir {
            field: casimir,
            conserved: true,
        }],
    )
}

/// Default parameter choices for demos and the verification suite: generic
/// values with no accidental symmetry, all overridable through the CLI.
pub mod defaults {
    use super::*;

    pub fn gyrostatic_mu0() -> Vec3 {
        Vec3::new(0.3, -0.4, 0.5)
    }

    pub fn affine_matrix() -> SymMatrix3 {
        SymMatrix3::from_six([1.0, 0.8, 1.2, 0.3, -0.2, 0.4])
    }

    pub fn affine_mu0() -> Vec3 {
        Vec3::new(0.1, -0.2, 0.3)
    }

    pub fn psi_phi_fields() -> (ScalarField, ScalarField) {
        let psi = PolyGamma::from_terms(vec![
            ([0, 0, 0], 0.3),
            ([1, 0, 0], -0.2),
            ([0, 1, 1], 0.1),
        ]);
        let phi = PolyGamma::from_terms(vec![
            ([0, 0, 2], 0.5),
            ([1, 1, 0], 0.4),
            ([3, 0, 0], 0.2),
        ]);
        (
            ScalarField::from_poly("psi_default", psi),
            ScalarField::from_poly("phi_default", phi),
        )
    }

    pub fn yehia_l_field() -> [PolyGamma; 3] {
        [
            PolyGamma::from_terms(vec![([0, 1, 0], 0.3), ([2, 0, 0], 0.1)]),
            PolyGamma::from_terms(vec![([1, 0, 0], -0.2), ([0, 0, 2], 0.2)]),
            PolyGamma::from_terms(vec![([0, 0, 0], 0.4), ([1, 1, 0], 0.1)]),
        ]
    }

    pub fn separable_parts() -> (Fn1, PolyGamma, Fn1, PolyGamma) {
        (
            Fn1::ConstPlusSquare(1.0),
            PolyGamma::from_terms(vec![([1, 0, 0], 1.0)]),
            Fn1::Poly(vec![0.0, 1.0]),
            PolyGamma::from_terms(vec![([0, 0, 2], 1.0)]),
        )
    }

    pub fn axis_parts() -> (Fn1, Fn1) {
        (
            Fn1::Poly(vec![1.0, 0.5, 0.0, 0.3]),
            Fn1::ConstPlusSquare(1.0),
        )
    }

    pub const BM_ALPHA: f64 = 1.0;
    pub const BM_I3: f64 = 1.0;
}

/// All nine catalog scenarios with their default parameters.
pub fn all_default_scenarios() -> Vec<Scenario> {
    let (gyro_t, gyro_c) = make_gyrostatic(defaults::gyrostatic_mu0());
    let (aff_t, aff_c) = make_affine(defaults::affine_matrix(), defaults::affine_mu0());
    let (aff_psi, aff_phi) = affine_psi_phi(defaults::affine_matrix(), defaults::affine_mu0());
    let (psi, phi) = defaults::psi_phi_fields();
    let (pp_t, pp_c) = make_psi_phi(&psi, &phi);
    let (yl_t, yl_c) = make_yehia_l(defaults::yehia_l_field());
    let (a, bg, bs, sphi) = defaults::separable_parts();
    let (sep_t, sep_c, sep_s0) = make_separable(a, bg, bs, sphi, None).expect("default separable");
    let (beta, delta) = defaults::axis_parts();
    let (ax_t, ax_c, ax_s0) = make_axis_torque(beta, delta).expect("default axis");

    vec![
        scenario_from_pair("gyrostatic", gyro_t, gyro_c),
        scenario_from_pair("affine", aff_t, aff_c).with_psi_phi(aff_psi, aff_phi),
        scenario_from_pair("psi_phi", pp_t, pp_c).with_psi_phi(psi, phi),
        scenario_from_pair("yehia_l", yl_t, yl_c),
        make_yehia_case_a(YehiaAParams::default()).expect("default case a"),
        make_yehia_case_b(YehiaBParams::default(), CaseBVariant::Original)
            .expect("default case b"),
        scenario_from_pair("separable", sep_t, sep_c)
            .with_note(format!("antiderivative reference point s0={sep_s0}")),
        scenario_from_pair("axis", ax_t, ax_c)
            .with_note(format!("antiderivative reference point s0={ax_s0}")),
        make_borisov_mamaev(defaults::BM_ALPHA, defaults::BM_I3).expect("default bm"),
    ]
}

/// Catalog metadata for the `list-cases` command.
pub struct CaseInfo {
    pub name: &'static str,
    pub summary: &'static str,
    pub params: &'static [(&'static str, &'static str)],
    pub variants: &'static [&'static str],
    pub singular_set: &'static str,
    pub casimirs: &'static [(&'static str, &'static str)],
}

/// The one catalog entry gate: exactly these names, in this order.
pub const CASE_INFOS: &[CaseInfo] = &[
    CaseInfo {
        name: "gyrostatic",
        summary: "constant generator mu = mu0 (rotors, fluid-filled cavities)",
        params: &[("mu0", "3-vector, default [0.3, -0.4, 0.5]")],
        variants: &[],
        singular_set: "none",
        casimirs: &[("C_gyro", "(M + mu0).gamma, gyrostat momentum integral")],
    },
    CaseInfo {
        name: "affine",
        summary: "mu = A gamma + mu0 with symmetric A (Grioli's charged body, generalized)",
        params: &[
            ("a_sym", "6 entries [xx, yy, zz, xy, xz, yz]"),
            ("mu0", "3-vector, default [0.1, -0.2, 0.3]"),
            ("raw_a", "3x3 rows; negative control, needs --negative-control"),
        ],
        variants: &[],
        singular_set: "none",
        casimirs: &[(
            "C_affine",
            "gamma.A gamma/2 + (M + mu0).gamma, generalized Grioli integral",
        )],
    },
    CaseInfo {
        name: "psi_phi",
        summary: "mu = psi(gamma) gamma + grad phi(gamma)",
        params: &[
            ("psi", "gamma-polynomial, degree <= 3"),
            ("phi", "gamma-polynomial, degree <= 3"),
        ],
        variants: &[],
        singular_set: "none",
        casimirs: &[("C_psi_phi", "M.gamma + phi(gamma)")],
    },
    CaseInfo {
        name: "yehia_l",
        summary: "mu = -(div l) gamma + grad(l.gamma) for a polynomial vector field l",
        params: &[("l1/l2/l3", "gamma-polynomial components, degree <= 3")],
        variants: &[],
        singular_set: "none",
        casimirs: &[("C_cyclic", "(M + l).gamma, Yehia's cyclic integral")],
    },
    CaseInfo {
        name: "yehia_a",
        summary: "Kovalevskaya configuration (2I3, 2I3, I3), polynomial torque family",
        params: &[
            ("a1", "default 1"),
            ("a2", "default 0.5"),
            ("k", "default 1"),
            ("n", "default 0.3"),
            ("n1", "default 0.2"),
            ("n2", "default 0.1"),
            ("i3", "default 1"),
        ],
        variants: &[],
        singular_set: "none",
        casimirs: &[("I2", "Yehia's cyclic integral of motion")],
    },
    CaseInfo {
        name: "yehia_b",
        summary: "Kovalevskaya configuration with 1/sqrt(gamma1^2+gamma2^2) terms",
        params: &[
            ("a1", "default 1"),
            ("a2", "default 0.5"),
            ("eps", "default 0.1"),
            ("N", "default 1"),
            ("n", "default 0.3"),
            ("n1", "default 0.2"),
            ("n2", "default 0.1"),
            ("i3", "default 1"),
        ],
        variants: &["original", "corrected_casimir", "corrected_torque"],
        singular_set: "gamma1^2 + gamma2^2 = 0 (clearance 1e-3)",
        casimirs: &[
            (
                "I2_uncorrected",
                "published cyclic integral; fails the Casimir condition, kept as a negative control",
            ),
            (
                "C_corrected",
                "arctan-form invariant that actually satisfies the Casimir condition",
            ),
            ("I2", "conserved under the corrected_torque variant"),
        ],
    },
    CaseInfo {
        name: "separable",
        summary: "mu = a(s) grad phi + b(gamma, s) gamma",
        params: &[
            ("a", "s-function (const | poly1 | c_plus_s2 | trig)"),
            ("b", "product of a gamma-polynomial and an s-function"),
            ("phi", "gamma-polynomial, degree <= 3"),
        ],
        variants: &[],
        singular_set: "zeros of a(s)",
        casimirs: &[("C_sep", "integral of 1/a ds + phi(gamma)")],
    },
    CaseInfo {
        name: "axis",
        summary: "single-axis generator mu = (0, 0, beta(gamma3) delta(s))",
        params: &[
            ("beta", "gamma3-function (const | poly1 | c_plus_s2 | trig)"),
            ("delta", "s-function, nonvanishing on the working interval"),
        ],
        variants: &[],
        singular_set: "zeros of delta(s)",
        casimirs: &[("C_axis", "integral of 1/delta ds + integral of beta dgamma3")],
    },
    CaseInfo {
        name: "borisov_mamaev",
        summary: "Kovalevskaya configuration, mu3 = M.gamma/gamma3, U = alpha(gamma1^2-gamma2^2)",
        params: &[("alpha", "default 1"), ("i3", "default 1")],
        variants: &[],
        singular_set: "gamma3 = 0 (clearance 1e-3)",
        casimirs: &[("C_bm", "gamma3 (M.gamma), Borisov-Mamaev integral")],
    },
];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poisson::{casimir_condition_residual, jacobi_condition_residual};
    use crate::sample::StateSampler;

    fn sample(seed: u64, n: usize, domain: &Domain, clearance: f64) -> Vec<crate::algebra::State> {
        StateSampler::new(seed)
            .with_clearance(clearance)
            .sample_n(n, domain)
            .unwrap()
    }

    #[test]
    fn gyrostatic_casimir_values() {
        let (torque, casimir) = make_gyrostatic(Vec3::new(0.0, 0.0, 1.0));
        let gamma = Vec3::new(0.0, 0.0, 1.0);
        let s = Vec3::new(1.0, 0.0, 0.0).dot(gamma);
        assert_eq!(casimir.eval(gamma, s).unwrap(), 1.0);
        assert_eq!(torque.eval(gamma, s).unwrap(), Vec3::new(0.0, 0.0, 1.0));

        // zero rotor reduces the invariant to M·γ
        let (_, c0) = make_gyrostatic(Vec3::ZERO);
        let g = Vec3::new(0.3, -0.8, 0.5);
        assert_eq!(c0.eval(g, 1.7).unwrap(), 1.7);

        let (torque, casimir) = make_gyrostatic(Vec3::new(0.3, -0.4, 0.5));
        for x in sample(1, 100, &Domain::none(), 1e-2) {
            let r = casimir_condition_residual(&casimir, &torque, x.gamma, x.s()).unwrap();
            assert!(r < 1e-12, "residual {r}");
        }
    }

    #[test]
    fn affine_casimir_value_and_jacobi() {
        let a = SymMatrix3::diagonal(Vec3::new(1.0, 1.0, 1.0));
        let (_, casimir) = make_affine(a, Vec3::ZERO);
        assert_eq!(casimir.eval(Vec3::new(1.0, 0.0, 0.0), 0.0).unwrap(), 0.5);

        let a = defaults::affine_matrix();
        let (torque, casimir) = make_affine(a, defaults::affine_mu0());
        for x in sample(2, 100, &Domain::none(), 1e-2) {
            let r = jacobi_condition_residual(&torque, x.gamma, x.s()).unwrap();
            assert!(r < 1e-10, "jacobi residual {r}");
            let r = casimir_condition_residual(&casimir, &torque, x.gamma, x.s()).unwrap();
            assert!(r < 1e-12, "casimir residual {r}");
        }
    }

    #[test]
    fn affine_raw_curl_is_antisymmetric_part() {
        // curl(Aγ) is twice the axial vector of the antisymmetric part, so a
        // non-symmetric matrix breaks the Jacobi condition generically
        let raw = Mat3([[1.0, 0.7, 0.0], [0.1, 0.8, 0.0], [0.0, 0.0, 1.2]]);
        let torque = make_affine_raw(raw, Vec3::ZERO);
        let g = Vec3::new(0.4, 0.5, 0.8);
        let expected = (g.dot(raw.linear_field_curl())).abs();
        let r = jacobi_condition_residual(&torque, g, 0.3).unwrap();
        assert!((r - expected).abs() < 1e-12);
        assert!(r > 1e-3);
    }

    #[test]
    fn psi_phi_reduces_to_gyrostatic_for_linear_phi() {
        let mu0 = Vec3::new(0.3, -0.4, 0.5);
        let psi = ScalarField::constant("psi0", 0.0);
        let phi = ScalarField::from_poly(
            "phi_lin",
            PolyGamma::from_terms(vec![([1, 0, 0], mu0.x), ([0, 1, 0], mu0.y), ([0, 0, 1], mu0.z)]),
        );
        let (torque, casimir) = make_psi_phi(&psi, &phi);
        let (gt, gc) = make_gyrostatic(mu0);
        for x in sample(3, 50, &Domain::none(), 1e-2) {
            let (g, s) = (x.gamma, x.s());
            assert!((torque.eval(g, s).unwrap() - gt.eval(g, s).unwrap()).norm() < 1e-12);
            assert!((casimir.eval(g, s).unwrap() - gc.eval(g, s).unwrap()).abs() < 1e-12);
            assert!((torque.d4(g, s).unwrap() - gt.d4(g, s).unwrap()).norm() < 1e-12);
            assert!((torque.curl_gamma(g, s).unwrap() - gt.curl_gamma(g, s).unwrap()).norm() < 1e-12);
        }
    }

    #[test]
    fn psi_phi_satisfies_jacobi_condition_for_random_polynomials() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for trial in 0..10 {
            let mut rand_poly = || {
                let mut terms = Vec::new();
                for e in [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1], [2, 0, 0], [0, 1, 1], [1, 0, 2]]
                {
                    terms.push((e, rng.random_range(-0.5..0.5)));
                }
                PolyGamma::from_terms(terms)
            };
            let psi = ScalarField::from_poly("psi_r", rand_poly());
            let phi = ScalarField::from_poly("phi_r", rand_poly());
            let (torque, casimir) = make_psi_phi(&psi, &phi);
            for x in sample(100 + trial, 10, &Domain::none(), 1e-2) {
                let r = jacobi_condition_residual(&torque, x.gamma, x.s()).unwrap();
                assert!(r < 1e-9, "trial {trial}: jacobi residual {r}");
                let r = casimir_condition_residual(&casimir, &torque, x.gamma, x.s()).unwrap();
                assert!(r < 1e-9, "trial {trial}: casimir residual {r}");
            }
        }
    }

    #[test]
    fn yehia_l_special_cases() {
        // constant field: divergence-free, μ = ℓ itself
        let c = Vec3::new(0.4, -0.7, 0.2);
        let l = [
            PolyGamma::constant(c.x),
            PolyGamma::constant(c.y),
            PolyGamma::constant(c.z),
        ];
        let (torque, _) = make_yehia_l(l);
        let g = Vec3::new(0.3, 0.9, -0.5);
        assert!((torque.eval(g, 0.0).unwrap() - c).norm() < 1e-14);

        // ℓ = γ: div = 3, μ = −3γ + 2γ = −γ, invariant M·γ + |γ|²
        let l = [
            PolyGamma::from_terms(vec![([1, 0, 0], 1.0)]),
            PolyGamma::from_terms(vec![([0, 1, 0], 1.0)]),
            PolyGamma::from_terms(vec![([0, 0, 1], 1.0)]),
        ];
        let (torque, casimir) = make_yehia_l(l);
        assert!((torque.eval(g, 0.0).unwrap() + g).norm() < 1e-14);
        let s = 1.3;
        assert!((casimir.eval(g, s).unwrap() - (s + g.norm_squared())).abs() < 1e-14);
    }

    #[test]
    fn yehia_a_printed_values_and_decomposition() {
        let p = YehiaAParams::default();
        let scn = make_yehia_case_a(p).unwrap();
        // at γ = e3 the printed formulas collapse to I3·(n1, n2, k − 3n)
        let mu = scn.torque.eval(Vec3::new(0.0, 0.0, 1.0), 0.7).unwrap();
        let expect = Vec3::new(p.i3 * p.n1, p.i3 * p.n2, p.i3 * (p.k - 3.0 * p.n));
        assert!((mu - expect).norm() < 1e-14);

        // μ = ψγ + ∇φ componentwise
        let (psi, phi) = scn.psi_phi.as_ref().unwrap();
        for x in sample(4, 100, &Domain::none(), 1e-2) {
            let (g, s) = (x.gamma, x.s());
            let rebuilt = g * psi.eval(g, s).unwrap() + phi.grad_gamma(g, s).unwrap();
            let direct = scn.torque.eval(g, s).unwrap();
            assert!((rebuilt - direct).norm() < 1e-10, "at {g}");
            let c = &scn.casimirs[0].field;
            let r = casimir_condition_residual(c, &scn.torque, g, s).unwrap();
            assert!(r < 1e-9, "I2 residual {r}");
        }
    }

    #[test]
    fn yehia_b_variants_collapse_to_case_a_when_n_vanishes() {
        let pa = YehiaAParams {
            k: 0.0,
            ..YehiaAParams::default()
        };
        let a = make_yehia_case_a(pa).unwrap();
        let pb = YehiaBParams {
            big_n: 0.0,
            ..YehiaBParams::default()
        };
        let dom = Domain::of(SingularPart::TransverseAxis);
        for variant in [
            CaseBVariant::Original,
            CaseBVariant::CorrectedCasimir,
            CaseBVariant::CorrectedTorque,
        ] {
            let b = make_yehia_case_b(pb, variant).unwrap();
            for x in sample(5, 50, &dom, 1e-2) {
                let (g, s) = (x.gamma, x.s());
                let da = a.torque.eval(g, s).unwrap();
                let db = b.torque.eval(g, s).unwrap();
                assert!((da - db).norm() < 1e-12, "{variant:?} torque at {g}");
                let ca = a.casimirs[0].field.eval(g, s).unwrap();
                for cas in &b.casimirs {
                    let cb = cas.field.eval(g, s).unwrap();
                    assert!((ca - cb).abs() < 1e-12, "{variant:?} {} at {g}", cas.field.name);
                }
            }
        }
    }

    #[test]
    fn yehia_b_correction_statement() {
        let p = YehiaBParams::default();
        let dom = Domain::of(SingularPart::TransverseAxis);
        let states = sample(6, 100, &dom, 0.35);

        let original = make_yehia_case_b(p, CaseBVariant::Original).unwrap();
        let bad = original
            .casimirs
            .iter()
            .find(|c| c.field.name == "I2_uncorrected")
            .unwrap();
        assert!(!bad.conserved);
        let good = original
            .casimirs
            .iter()
            .find(|c| c.field.name == "C_corrected")
            .unwrap();
        let mut bad_fail = 0;
        for x in &states {
            let (g, s) = (x.gamma, x.s());
            let rb = casimir_condition_residual(&bad.field, &original.torque, g, s).unwrap();
            if rb > 1e-6 {
                bad_fail += 1;
            }
            let rg = casimir_condition_residual(&good.field, &original.torque, g, s).unwrap();
            assert!(rg < 1e-8, "corrected invariant residual {rg}");
        }
        assert!(bad_fail >= 95, "published I2 failed at only {bad_fail}/100 states");

        let fixed = make_yehia_case_b(p, CaseBVariant::CorrectedTorque).unwrap();
        let i2 = &fixed.casimirs[0].field;
        assert_eq!(i2.name, "I2");
        for x in &states {
            let r = casimir_condition_residual(i2, &fixed.torque, x.gamma, x.s()).unwrap();
            assert!(r < 1e-8, "I2 under corrected torque: residual {r}");
        }
        // the corrected torque is a genuine ψ–φ field
        let (psi, phi) = fixed.psi_phi.as_ref().unwrap();
        for x in &states {
            let (g, s) = (x.gamma, x.s());
            let rebuilt = g * psi.eval(g, s).unwrap() + phi.grad_gamma(g, s).unwrap();
            assert!((rebuilt - fixed.torque.eval(g, s).unwrap()).norm() < 1e-10);
        }
    }

    #[test]
    fn separable_quadrature_path_reduces_to_psi_phi() {
        // a ≡ 1 written as a quadratic so no closed form kicks in: the
        // invariant must still come out as s + φ through quadrature
        let a = Fn1::Poly(vec![1.0, 0.0, 0.0]);
        assert!(a.recip_antideriv().is_none());
        let b_gamma = PolyGamma::from_terms(vec![([0, 0, 0], 0.3), ([1, 0, 0], -0.2)]);
        let phi = PolyGamma::from_terms(vec![([0, 0, 2], 0.5), ([1, 1, 0], 0.4)]);
        let (torque, casimir, s0) =
            make_separable(a, b_gamma.clone(), Fn1::Const(1.0), phi.clone(), None).unwrap();
        assert_eq!(s0, 0.0);

        let psi = ScalarField::from_poly("psi", b_gamma);
        let phi_f = ScalarField::from_poly("phi", phi);
        let (pt, pc) = make_psi_phi(&psi, &phi_f);
        for x in sample(7, 50, &Domain::none(), 1e-2) {
            let (g, s) = (x.gamma, x.s());
            assert!((torque.eval(g, s).unwrap() - pt.eval(g, s).unwrap()).norm() < 1e-12);
            assert!((casimir.eval(g, s).unwrap() - pc.eval(g, s).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn separable_arctan_invariant_and_jacobi() {
        let (a, bg, bs, phi) = defaults::separable_parts();
        let (torque, casimir, _) = make_separable(a, bg, bs, phi.clone(), None).unwrap();
        for x in sample(8, 100, &Domain::none(), 1e-2) {
            let (g, s) = (x.gamma, x.s());
            let r = jacobi_condition_residual(&torque, g, s).unwrap();
            assert!(r < 1e-9, "jacobi residual {r}");
            // closed form: arctan(s) + φ(γ)
            let expect = s.atan() + phi.eval(g);
            assert!((casimir.eval(g, s).unwrap() - expect).abs() < 1e-11);
            let r = casimir_condition_residual(&casimir, &torque, g, s).unwrap();
            assert!(r < 1e-9, "casimir residual {r}");
        }
    }

    #[test]
    fn axis_unit_coefficients_match_gyrostatic_along_e3() {
        let (torque, casimir, _) =
            make_axis_torque(Fn1::Const(1.0), Fn1::Const(1.0)).unwrap();
        let (gt, gc) = make_gyrostatic(Vec3::new(0.0, 0.0, 1.0));
        for x in sample(9, 50, &Domain::none(), 1e-2) {
            let (g, s) = (x.gamma, x.s());
            assert!((torque.eval(g, s).unwrap() - gt.eval(g, s).unwrap()).norm() < 1e-12);
            assert!((casimir.eval(g, s).unwrap() - gc.eval(g, s).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn axis_diagnostics_vanish() {
        let (beta, delta) = defaults::axis_parts();
        let (torque, casimir, _) = make_axis_torque(beta, delta).unwrap();
        for x in sample(10, 50, &Domain::none(), 1e-2) {
            let (g, s) = (x.gamma, x.s());
            let r = axis_plane_jacobi_residual(&torque, g, s, 1e-5).unwrap();
            assert!(r < 1e-12, "plane residual {r}");
            let r = axis_casimir_chart_residual(&casimir, &torque, g, s).unwrap();
            assert!(r < 1e-10, "chart residual {r}");
        }
    }

    #[test]
    fn borisov_mamaev_printed_values() {
        let scn = make_borisov_mamaev(1.0, 1.0).unwrap();
        let g = Vec3::new(0.0, 0.0, 1.0);
        let m = Vec3::new(1.0, 1.0, 1.0);
        let s = m.dot(g);
        assert_eq!(scn.casimirs[0].field.eval(g, s).unwrap(), 1.0);
        assert_eq!(scn.torque.eval(g, s).unwrap(), Vec3::new(0.0, 0.0, 1.0));

        let dom = scn.domain();
        for x in sample(11, 100, &dom, 1e-2) {
            let (g, s) = (x.gamma, x.s());
            let r = jacobi_condition_residual(&scn.torque, g, s).unwrap();
            assert!(r < 1e-10, "jacobi residual {r}");
            let r = casimir_condition_residual(&scn.casimirs[0].field, &scn.torque, g, s).unwrap();
            assert!(r < 1e-10, "casimir residual {r}");
            let r = axis_casimir_chart_residual(&scn.casimirs[0].field, &scn.torque, g, s).unwrap();
            assert!(r < 1e-12, "chart residual {r}");
        }
    }

    #[test]
    fn classical_potential_values_and_gradient() {
        let u = make_classical_potential(1.0, 1.0, Vec3::new(0.0, 0.0, 1.0));
        let g = Vec3::new(0.3, -0.2, 0.7);
        assert_eq!(u.eval(g, 0.0).unwrap(), g.z);
        assert_eq!(u.grad_gamma(g, 0.0).unwrap(), Vec3::new(0.0, 0.0, 1.0));
        let fd = u.fd_grad_gamma(g, 0.0, 1e-6).unwrap();
        assert!((fd - Vec3::new(0.0, 0.0, 1.0)).norm() < 1e-10);

        // ξ = 0 leaves the momentum equation torque-free
        let u0 = make_classical_potential(1.0, 1.0, Vec3::ZERO);
        assert_eq!(u0.grad_gamma(g, 0.0).unwrap(), Vec3::ZERO);
    }

    #[test]
    fn hamiltonian_values_and_fd_gradient() {
        use crate::algebra::State;
        let i = InertiaTensor::new(1.0, 1.0, 1.0).unwrap();
        let h = assemble_hamiltonian(i, &ScalarField::constant("U0", 0.0));
        let x = State::new(Vec3::new(1.0, 2.0, 3.0), Vec3::new(0.1, 0.2, 0.3));
        assert_eq!(h.eval(&x).unwrap(), 7.0);

        let i = InertiaTensor::new(2.0, 2.0, 1.0).unwrap();
        let u = ScalarField::from_poly("U3", PolyGamma::from_terms(vec![([0, 0, 1], 1.0)]));
        let h = assemble_hamiltonian(i, &u);
        let x = State::new(Vec3::new(2.0, 2.0, 1.0), Vec3::new(0.0, 0.0, 1.0));
        assert_eq!(h.eval(&x).unwrap(), 3.5);

        let scn = make_yehia_case_b(YehiaBParams::default(), CaseBVariant::Original).unwrap();
        let dom = scn.domain();
        for x in sample(12, 100, &dom, 1e-2) {
            let analytic = scn.hamiltonian.grad(&x).unwrap();
            let fd = scn.hamiltonian.fd_grad(&x, 1e-6).unwrap();
            for (a, b) in analytic.iter().zip(fd.iter()) {
                assert!((a - b).abs() < 1e-6 * (1.0 + a.abs()), "{a} vs {b}");
            }
        }
    }

    #[test]
    fn casimirs_functionally_independent_of_c1() {
        use crate::poisson::lift_casimir;
        // smallest singular value of the stacked 2×6 gradient matrix via the
        // 2×2 Gram matrix
        for scn in all_default_scenarios() {
            let dom = scn.domain();
            let clearance = if dom.parts.is_empty() { 1e-2 } else { 0.3 };
            let states = sample(13, 100, &dom, clearance);
            for cas in scn.conserved_casimirs() {
                let lifted = lift_casimir(&cas.field);
                let mut ok = 0;
                for x in &states {
                    let a = lifted.grad(x).unwrap();
                    let mut b = [0.0; 6];
                    b[3] = x.gamma.x;
                    b[4] = x.gamma.y;
                    b[5] = x.gamma.z;
                    let (aa, ab, bb) = (
                        a.iter().map(|v| v * v).sum::<f64>(),
                        a.iter().zip(b.iter()).map(|(u, v)| u * v).sum::<f64>(),
                        b.iter().map(|v| v * v).sum::<f64>(),
                    );
                    let tr = aa + bb;
                    let det = aa * bb - ab * ab;
                    let lam_min = 0.5 * (tr - (tr * tr - 4.0 * det).max(0.0).sqrt());
                    if lam_min.max(0.0).sqrt() > 1e-6 {
                        ok += 1;
                    }
                }
                assert!(
                    ok >= 95,
                    "{}: {} independent at only {ok}/100 states",
                    scn.name,
                    cas.field.name
                );
            }
        }
    }

    #[test]
    fn catalog_metadata_is_consistent() {
        assert_eq!(CASE_INFOS.len(), 9);
        assert_eq!(all_default_scenarios().len(), 9);
        let b = CASE_INFOS.iter().find(|c| c.name == "yehia_b").unwrap();
        assert_eq!(b.variants.len(), 3);
        for info in CASE_INFOS {
            assert!(!info.casimirs.is_empty(), "{} lists no invariant", info.name);
        }
    }
}
