//! Scenario configuration: a strict TOML schema. Unknown keys are rejected
//! with the offending key named; every shipped example config round-trips.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::{InertiaTensor, Mat3, State, SymMatrix3, Vec3};
use crate::catalog::{self, CaseBVariant, NamedCasimir, Scenario, YehiaAParams, YehiaBParams};
use crate::error::{Error, Result};
use crate::fields::{Fn1, PolyGamma, ScalarField};
use crate::sample::DEFAULT_SAMPLING_CLEARANCE;

pub const DEFAULT_INITIAL_STATE: [f64; 6] = [3.0, 2.0, -2.5, 0.6, 0.48, 0.64];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub case: String,
    /// yehia_b only: original | corrected_casimir | corrected_torque.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variant: Option<String>,
    #[serde(default)]
    pub params: toml::Table,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inertia: Option<InertiaSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub initial_state: Option<[f64; 6]>,
    #[serde(default)]
    pub run: RunConfig,
    #[serde(default)]
    pub verify: VerifyConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum InertiaSpec {
    Principal([f64; 3]),
    Kovalevskaya { kovalevskaya: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_t_end")]
    pub t_end: f64,
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default = "default_record_every")]
    pub record_every: usize,
}

fn default_t_end() -> f64 {
    10.0
}
fn default_dt() -> f64 {
    1e-3
}
fn default_record_every() -> usize {
    10
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            t_end: default_t_end(),
            dt: default_dt(),
            record_every: default_record_every(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Optional override applied to every check; per-check defaults otherwise.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default = "default_clearance")]
    pub clearance: f64,
    /// Restrict the Casimir checks to these names; conserved ones otherwise.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub casimirs: Option<Vec<String>>,
}

fn default_samples() -> usize {
    100
}
fn default_seed() -> u64 {
    42
}
fn default_clearance() -> f64 {
    DEFAULT_SAMPLING_CLEARANCE
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            samples: default_samples(),
            seed: default_seed(),
            tolerance: None,
            clearance: default_clearance(),
            casimirs: None,
        }
    }
}

// ---------------------------------------------------------------------------
// registry specs
// ---------------------------------------------------------------------------

/// One-variable field from the documented registry menu.
#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Fn1Spec {
    Const(f64),
    /// ascending coefficients, degree <= 3
    Poly1(Vec<f64>),
    /// c + t^2
    CPlusS2(f64),
    Trig { a_sin: f64, a_cos: f64, k: f64 },
}

impl Fn1Spec {
    pub fn build(&self) -> Result<Fn1> {
        Ok(match self {
            Fn1Spec::Const(c) => Fn1::Const(*c),
            Fn1Spec::Poly1(c) => {
                if c.len() > 4 {
                    return Err(Error::Config(format!(
                        "poly1 takes at most 4 coefficients (degree 3), got {}",
                        c.len()
                    )));
                }
                Fn1::Poly(c.clone())
            }
            Fn1Spec::CPlusS2(c) => Fn1::ConstPlusSquare(*c),
            Fn1Spec::Trig { a_sin, a_cos, k } => Fn1::Trig {
                a_sin: *a_sin,
                a_cos: *a_cos,
                k: *k,
            },
        })
    }
}

/// Polynomial in γ given as a monomial → coefficient map, e.g.
/// `{ "1" = 0.3, "g1^2*g3" = -0.5 }`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GammaPolySpec {
    pub poly: BTreeMap<String, f64>,
}

impl GammaPolySpec {
    pub fn build(&self) -> Result<PolyGamma> {
        PolyGamma::parse(&self.poly)
    }
}

/// Product form b(γ, s) = p(γ)·q(s).
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductFieldSpec {
    pub gamma: GammaPolySpec,
    pub s: Fn1Spec,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum PotentialSpec {
    Classical { m: f64, g: f64, xi: [f64; 3] },
    Poly(BTreeMap<String, f64>),
}

impl PotentialSpec {
    pub fn build(&self) -> Result<ScalarField> {
        Ok(match self {
            PotentialSpec::Classical { m, g, xi } => {
                catalog::make_classical_potential(*m, *g, Vec3::from(*xi))
            }
            PotentialSpec::Poly(map) => {
                ScalarField::from_poly("U_poly", PolyGamma::parse(map)?)
            }
        })
    }
}

// ---------------------------------------------------------------------------
// per-case parameter tables
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct GyrostaticParams {
    mu0: Option<[f64; 3]>,
    potential: Option<PotentialSpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct AffineParams {
    /// Symmetric entries [xx, yy, zz, xy, xz, yz].
    a_sym: Option<[f64; 6]>,
    /// Raw rows; negative control, gated behind --negative-control.
    raw_a: Option<[[f64; 3]; 3]>,
    mu0: Option<[f64; 3]>,
    potential: Option<PotentialSpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct PsiPhiParams {
    psi: Option<GammaPolySpec>,
    phi: Option<GammaPolySpec>,
    potential: Option<PotentialSpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct YehiaLParams {
    l1: GammaPolySpec,
    l2: GammaPolySpec,
    l3: GammaPolySpec,
    potential: Option<PotentialSpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct YehiaACfg {
    #[serde(default = "d_a1")]
    a1: f64,
    #[serde(default = "d_a2")]
    a2: f64,
    #[serde(default = "d_k")]
    k: f64,
    #[serde(default = "d_n")]
    n: f64,
    #[serde(default = "d_n1")]
    n1: f64,
    #[serde(default = "d_n2")]
    n2: f64,
    #[serde(default = "d_i3")]
    i3: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct YehiaBCfg {
    #[serde(default = "d_a1")]
    a1: f64,
    #[serde(default = "d_a2")]
    a2: f64,
    #[serde(default = "d_eps")]
    eps: f64,
    #[serde(rename = "N", default = "d_big_n")]
    big_n: f64,
    #[serde(default = "d_n")]
    n: f64,
    #[serde(default = "d_n1")]
    n1: f64,
    #[serde(default = "d_n2")]
    n2: f64,
    #[serde(default = "d_i3")]
    i3: f64,
}

fn d_a1() -> f64 {
    1.0
}
fn d_a2() -> f64 {
    0.5
}
fn d_k() -> f64 {
    1.0
}
fn d_n() -> f64 {
    0.3
}
fn d_n1() -> f64 {
    0.2
}
fn d_n2() -> f64 {
    0.1
}
fn d_i3() -> f64 {
    1.0
}
fn d_eps() -> f64 {
    0.1
}
fn d_big_n() -> f64 {
    1.0
}
fn d_alpha() -> f64 {
    1.0
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct SeparableParams {
    a: Fn1Spec,
    b: ProductFieldSpec,
    phi: GammaPolySpec,
    potential: Option<PotentialSpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct AxisParams {
    beta: Fn1Spec,
    delta: Fn1Spec,
    potential: Option<PotentialSpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct BorisovMamaevParams {
    #[serde(default = "d_alpha")]
    alpha: f64,
    #[serde(default = "d_i3")]
    i3: f64,
}

// ---------------------------------------------------------------------------
// construction
// ---------------------------------------------------------------------------

pub fn parse_config(text: &str) -> Result<ScenarioConfig> {
    toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
}

fn case_params<T: serde::de::DeserializeOwned>(table: &toml::Table) -> Result<T> {
    toml::Value::Table(table.clone())
        .try_into()
        .map_err(|e| Error::Config(e.to_string()))
}

fn generic_inertia(spec: &Option<InertiaSpec>) -> Result<InertiaTensor> {
    match spec {
        None => Ok(catalog::default_generic_inertia()),
        Some(InertiaSpec::Principal(p)) => InertiaTensor::new(p[0], p[1], p[2]),
        Some(InertiaSpec::Kovalevskaya { kovalevskaya }) => {
            InertiaTensor::kovalevskaya(*kovalevskaya)
        }
    }
}

fn reject_inertia_override(cfg: &ScenarioConfig) -> Result<()> {
    if cfg.inertia.is_some() {
        return Err(Error::Config(format!(
            "case '{}' pins its inertia through params.i3; remove the top-level inertia key",
            cfg.case
        )));
    }
    Ok(())
}

fn potential_or_default(spec: &Option<PotentialSpec>) -> Result<ScalarField> {
    match spec {
        Some(p) => p.build(),
        None => Ok(catalog::default_potential()),
    }
}

/// Build the scenario a config describes. `negative_control` unlocks the
/// raw-matrix affine torque; everything else refuses it.
pub fn build_scenario(cfg: &ScenarioConfig, negative_control: bool) -> Result<Scenario> {
    if cfg.variant.is_some() && cfg.case != "yehia_b" {
        return Err(Error::Config(format!(
            "variant is only meaningful for case yehia_b, not '{}'",
            cfg.case
        )));
    }
    match cfg.case.as_str() {
        "gyrostatic" => {
            let p: GyrostaticParams = case_params(&cfg.params)?;
            let mu0 = p
                .mu0
                .map(Vec3::from)
                .unwrap_or_else(catalog::defaults::gyrostatic_mu0);
            let (torque, casimir) = catalog::make_gyrostatic(mu0);
            Ok(Scenario::assemble(
                "gyrostatic",
                generic_inertia(&cfg.inertia)?,
                torque,
                potential_or_default(&p.potential)?,
                vec![NamedCasimir {
                    field: casimir,
                    conserved: true,
                }],
            ))
        }
        "affine" => {
            let p: AffineParams = case_params(&cfg.params)?;
            if let Some(raw) = p.raw_a {
                if !negative_control {
                    return Err(Error::Config(
                        "params.raw_a is an unverified negative-control input; pass --negative-control to use it"
                            .into(),
                    ));
                }
                if p.a_sym.is_some() {
                    return Err(Error::Config(
                        "give either a_sym or raw_a, not both".into(),
                    ));
                }
                let mu0 = p.mu0.map(Vec3::from).unwrap_or(Vec3::ZERO);
                let torque = catalog::make_affine_raw(Mat3(raw), mu0);
                return Ok(Scenario::assemble(
                    "affine_raw",
                    generic_inertia(&cfg.inertia)?,
                    torque,
                    potential_or_default(&p.potential)?,
                    vec![],
                ));
            }
            let a = p
                .a_sym
                .map(SymMatrix3::from_six)
                .unwrap_or_else(catalog::defaults::affine_matrix);
            let mu0 = p
                .mu0
                .map(Vec3::from)
                .unwrap_or_else(catalog::defaults::affine_mu0);
            let (torque, casimir) = catalog::make_affine(a, mu0);
            let (psi, phi) = catalog::affine_psi_phi(a, mu0);
            let mut scn = Scenario::assemble(
                "affine",
                generic_inertia(&cfg.inertia)?,
                torque,
                potential_or_default(&p.potential)?,
                vec![NamedCasimir {
                    field: casimir,
                    conserved: true,
                }],
            );
            scn.psi_phi = Some((psi, phi));
            Ok(scn)
        }
        "psi_phi" => {
            let p: PsiPhiParams = case_params(&cfg.params)?;
            let (dpsi, dphi) = catalog::defaults::psi_phi_fields();
            let psi = match &p.psi {
                Some(s) => ScalarField::from_poly("psi", s.build()?),
                None => dpsi,
            };
            let phi = match &p.phi {
                Some(s) => ScalarField::from_poly("phi", s.build()?),
                None => dphi,
            };
            let (torque, casimir) = catalog::make_psi_phi(&psi, &phi);
            let mut scn = Scenario::assemble(
                "psi_phi",
                generic_inertia(&cfg.inertia)?,
                torque,
                potential_or_default(&p.potential)?,
                vec![NamedCasimir {
                    field: casimir,
                    conserved: true,
                }],
            );
            scn.psi_phi = Some((psi, phi));
            Ok(scn)
        }
        "yehia_l" => {
            let p: YehiaLParams = case_params(&cfg.params)?;
            let l = [p.l1.build()?, p.l2.build()?, p.l3.build()?];
            let (torque, casimir) = catalog::make_yehia_l(l);
            Ok(Scenario::assemble(
                "yehia_l",
                generic_inertia(&cfg.inertia)?,
                torque,
                potential_or_default(&p.potential)?,
                vec![NamedCasimir {
                    field: casimir,
                    conserved: true,
                }],
            ))
        }
        "yehia_a" => {
            reject_inertia_override(cfg)?;
            let p: YehiaACfg = case_params(&cfg.params)?;
            catalog::make_yehia_case_a(YehiaAParams {
                a1: p.a1,
                a2: p.a2,
                k: p.k,
                n: p.n,
                n1: p.n1,
                n2: p.n2,
                i3: p.i3,
            })
        }
        "yehia_b" => {
            reject_inertia_override(cfg)?;
            let p: YehiaBCfg = case_params(&cfg.params)?;
            let variant = match cfg.variant.as_deref().unwrap_or("original") {
                "original" => CaseBVariant::Original,
                "corrected_casimir" => CaseBVariant::CorrectedCasimir,
                "corrected_torque" => CaseBVariant::CorrectedTorque,
                other => {
                    return Err(Error::Config(format!(
                        "unknown yehia_b variant '{other}' (original | corrected_casimir | corrected_torque)"
                    )))
                }
            };
            catalog::make_yehia_case_b(
                YehiaBParams {
                    a1: p.a1,
                    a2: p.a2,
                    eps: p.eps,
                    big_n: p.big_n,
                    n: p.n,
                    n1: p.n1,
                    n2: p.n2,
                    i3: p.i3,
                },
                variant,
            )
        }
        "separable" => {
            let p: SeparableParams = case_params(&cfg.params)?;
            let (torque, casimir, s0) = catalog::make_separable(
                p.a.build()?,
                p.b.gamma.build()?,
                p.b.s.build()?,
                p.phi.build()?,
                None,
            )?;
            let mut scn = Scenario::assemble(
                "separable",
                generic_inertia(&cfg.inertia)?,
                torque,
                potential_or_default(&p.potential)?,
                vec![NamedCasimir {
                    field: casimir,
                    conserved: true,
                }],
            );
            scn.notes
                .push(format!("antiderivative reference point s0={s0}"));
            Ok(scn)
        }
        "axis" => {
            let p: AxisParams = case_params(&cfg.params)?;
            let (torque, casimir, s0) =
                catalog::make_axis_torque(p.beta.build()?, p.delta.build()?)?;
            let mut scn = Scenario::assemble(
                "axis",
                generic_inertia(&cfg.inertia)?,
                torque,
                potential_or_default(&p.potential)?,
                vec![NamedCasimir {
                    field: casimir,
                    conserved: true,
                }],
            );
            scn.notes
                .push(format!("antiderivative reference point s0={s0}"));
            Ok(scn)
        }
        "borisov_mamaev" => {
            reject_inertia_override(cfg)?;
            let p: BorisovMamaevParams = case_params(&cfg.params)?;
            catalog::make_borisov_mamaev(p.alpha, p.i3)
        }
        other => Err(Error::Config(format!(
            "unknown case '{other}'; run list-cases for the catalog"
        ))),
    }
}

pub fn initial_state(cfg: &ScenarioConfig) -> State {
    State::from_array(cfg.initial_state.unwrap_or(DEFAULT_INITIAL_STATE))
}
