//! Scalar fields on the chart (γ, s) and on the full phase space, the small
//! registry of one-variable building blocks used by the CLI, and singular-set
//! bookkeeping shared by every evaluator.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::{fd_default_step, fd_derivative, fd_gradient, State, Vec3};
use crate::error::{Error, Result};

/// Default clearance radius around singular sets.
pub const DEFAULT_CLEARANCE: f64 = 1e-3;

/// One connected piece of a singular set, with a cheap distance estimate.
#[derive(Debug, Clone)]
pub enum SingularPart {
    /// The axis γ1 = γ2 = 0; distance is sqrt(γ1² + γ2²).
    TransverseAxis,
    /// The plane γ3 = 0; distance is |γ3|.
    GammaPlane,
    /// Zero set of a function of s; distance is to the nearest listed root.
    SZero { zeros: Vec<f64> },
    /// Roots of an s-coefficient that an antiderivative must not cross:
    /// distance collapses to zero once a root lies between `s0` and s.
    SBarrier { zeros: Vec<f64>, s0: f64 },
}

impl SingularPart {
    fn distance(&self, gamma: Vec3, s: f64) -> f64 {
        match self {
            SingularPart::TransverseAxis => (gamma.x * gamma.x + gamma.y * gamma.y).sqrt(),
            SingularPart::GammaPlane => gamma.z.abs(),
            SingularPart::SZero { zeros } => zeros
                .iter()
                .map(|z| (s - z).abs())
                .fold(f64::INFINITY, f64::min),
            SingularPart::SBarrier { zeros, s0 } => {
                let (lo, hi) = (s.min(*s0), s.max(*s0));
                let mut d = f64::INFINITY;
                for z in zeros {
                    if (lo..=hi).contains(z) {
                        return 0.0;
                    }
                    d = d.min((s - z).abs());
                }
                d
            }
        }
    }

    fn describe(&self) -> &'static str {
        match self {
            SingularPart::TransverseAxis => "gamma1^2 + gamma2^2 = 0",
            SingularPart::GammaPlane => "gamma3 = 0",
            SingularPart::SZero { .. } => "zero of the s-coefficient",
            SingularPart::SBarrier { .. } => "zero of the s-coefficient (crossed by the antiderivative path)",
        }
    }
}

/// Where a model's formulas are defined: a list of singular parts plus the
/// clearance radius inside which evaluation is refused.
#[derive(Debug, Clone)]
pub struct Domain {
    pub parts: Vec<SingularPart>,
    pub clearance: f64,
}

impl Default for Domain {
    fn default() -> Self {
        Domain {
            parts: Vec::new(),
            clearance: DEFAULT_CLEARANCE,
        }
    }
}

impl Domain {
    pub fn none() -> Self {
        Domain::default()
    }

    pub fn of(part: SingularPart) -> Self {
        Domain {
            parts: vec![part],
            clearance: DEFAULT_CLEARANCE,
        }
    }

    pub fn with_clearance(mut self, clearance: f64) -> Self {
        self.clearance = clearance;
        self
    }

    /// Distance from (γ, s) to the nearest singular part; +∞ when none.
    pub fn distance(&self, gamma: Vec3, s: f64) -> f64 {
        self.parts
            .iter()
            .map(|p| p.distance(gamma, s))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn check(&self, gamma: Vec3, s: f64) -> Result<()> {
        if !gamma.is_finite() || !s.is_finite() {
            return Err(Error::Domain(format!(
                "non-finite evaluation point gamma={gamma}, s={s}"
            )));
        }
        for p in &self.parts {
            let d = p.distance(gamma, s);
            if d < self.clearance {
                return Err(Error::Domain(format!(
                    "point gamma={gamma}, s={s} is within clearance {} of the singular set {} (distance {d})",
                    self.clearance,
                    p.describe()
                )));
            }
        }
        Ok(())
    }

    /// Union of singular parts; the larger clearance wins.
    pub fn merged(&self, other: &Domain) -> Domain {
        let mut parts = self.parts.clone();
        parts.extend(other.parts.iter().cloned());
        Domain {
            parts,
            clearance: self.clearance.max(other.clearance),
        }
    }
}

/// Adaptive Simpson quadrature with absolute tolerance.
pub fn adaptive_simpson<F>(f: &F, a: f64, b: f64, tol: f64) -> f64
where
    F: Fn(f64) -> f64,
{
    fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn rec<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
                + rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
        }
    }
    if a == b {
        return 0.0;
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    rec(f, a, b, fa, fm, fb, simpson(fa, fm, fb, a, b), tol, 48)
}

/// One-variable field from the fixed registry menu. Serves as a(s), δ(s),
/// β(γ₃) and friends; every kind has an analytic derivative and antiderivative.
#[derive(Debug, Clone, PartialEq)]
pub enum Fn1 {
    Const(f64),
    /// Ascending coefficients: c₀ + c₁ t + c₂ t² + c₃ t³.
    Poly(Vec<f64>),
    /// c + t².
    ConstPlusSquare(f64),
    /// a·sin(k t) + b·cos(k t).
    Trig { a_sin: f64, a_cos: f64, k: f64 },
}

impl Fn1 {
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Fn1::Const(c) => *c,
            Fn1::Poly(c) => c.iter().rev().fold(0.0, |acc, ck| acc * t + ck),
            Fn1::ConstPlusSquare(c) => c + t * t,
            Fn1::Trig { a_sin, a_cos, k } => a_sin * (k * t).sin() + a_cos * (k * t).cos(),
        }
    }

    pub fn deriv(&self, t: f64) -> f64 {
        match self {
            Fn1::Const(_) => 0.0,
            Fn1::Poly(c) => {
                let mut acc = 0.0;
                for (p, ck) in c.iter().enumerate().skip(1).rev() {
                    acc = acc * t + p as f64 * ck;
                }
                acc
            }
            Fn1::ConstPlusSquare(_) => 2.0 * t,
            Fn1::Trig { a_sin, a_cos, k } => k * (a_sin * (k * t).cos() - a_cos * (k * t).sin()),
        }
    }

    /// Antiderivative with F(0) = 0.
    pub fn antideriv(&self, t: f64) -> f64 {
        match self {
            Fn1::Const(c) => c * t,
            Fn1::Poly(c) => {
                let mut acc = 0.0;
                for (p, ck) in c.iter().enumerate().rev() {
                    acc = acc * t + ck / (p as f64 + 1.0);
                }
                acc * t
            }
            Fn1::ConstPlusSquare(c) => c * t + t * t * t / 3.0,
            Fn1::Trig { a_sin, a_cos, k } => {
                (a_sin * (1.0 - (k * t).cos()) + a_cos * (k * t).sin()) / k
            }
        }
    }

    /// Closed-form antiderivative of 1/f from the reference point, when the
    /// kind admits one on a zero-free interval. `None` falls back to quadrature.
    pub fn recip_antideriv(&self) -> Option<Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>> {
        match self {
            Fn1::Const(c) => {
                let c = *c;
                Some(Arc::new(move |s0: f64, s: f64| (s - s0) / c))
            }
            Fn1::Poly(c) if c.len() <= 1 => {
                let c0 = c.first().copied().unwrap_or(0.0);
                Some(Arc::new(move |s0: f64, s: f64| (s - s0) / c0))
            }
            Fn1::Poly(c) if c.len() == 2 => {
                let (c0, c1) = (c[0], c[1]);
                if c1 == 0.0 {
                    Some(Arc::new(move |s0: f64, s: f64| (s - s0) / c0))
                } else {
                    Some(Arc::new(move |s0: f64, s: f64| {
                        ((c0 + c1 * s).abs().ln() - (c0 + c1 * s0).abs().ln()) / c1
                    }))
                }
            }
            Fn1::ConstPlusSquare(c) if *c > 0.0 => {
                let r = c.sqrt();
                Some(Arc::new(move |s0: f64, s: f64| {
                    ((s / r).atan() - (s0 / r).atan()) / r
                }))
            }
            _ => None,
        }
    }

    /// Roots inside [lo, hi], located by sign-change scan plus bisection.
    pub fn zeros_in(&self, lo: f64, hi: f64) -> Vec<f64> {
        match self {
            Fn1::Const(c) => {
                // A vanishing constant is singular everywhere; callers reject it.
                if *c == 0.0 {
                    vec![0.5 * (lo + hi)]
                } else {
                    vec![]
                }
            }
            Fn1::ConstPlusSquare(c) => {
                if *c > 0.0 {
                    vec![]
                } else {
                    let r = (-c).sqrt();
                    [-r, r].into_iter().filter(|z| (lo..=hi).contains(z)).collect()
                }
            }
            _ => {
                let n = 4000;
                let mut zeros = Vec::new();
                let mut prev_t = lo;
                let mut prev_v = self.eval(lo);
                for i in 1..=n {
                    let t = lo + (hi - lo) * i as f64 / n as f64;
                    let v = self.eval(t);
                    if prev_v == 0.0 {
                        zeros.push(prev_t);
                    } else if prev_v * v < 0.0 {
                        let (mut a, mut b) = (prev_t, t);
                        let mut fa = prev_v;
                        for _ in 0..80 {
                            let m = 0.5 * (a + b);
                            let fm = self.eval(m);
                            if fa * fm <= 0.0 {
                                b = m;
                            } else {
                                a = m;
                                fa = fm;
                            }
                        }
                        zeros.push(0.5 * (a + b));
                    }
                    prev_t = t;
                    prev_v = v;
                }
                if prev_v == 0.0 {
                    zeros.push(prev_t);
                }
                zeros
            }
        }
    }
}

/// Polynomial in (γ1, γ2, γ3) as a sparse list of monomials.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PolyGamma {
    terms: Vec<([u8; 3], f64)>,
}

impl PolyGamma {
    pub fn zero() -> Self {
        PolyGamma::default()
    }

    pub fn constant(c: f64) -> Self {
        PolyGamma::from_terms(vec![([0, 0, 0], c)])
    }

    pub fn from_terms(terms: Vec<([u8; 3], f64)>) -> Self {
        let mut map: BTreeMap<[u8; 3], f64> = BTreeMap::new();
        for (e, c) in terms {
            *map.entry(e).or_insert(0.0) += c;
        }
        PolyGamma {
            terms: map.into_iter().filter(|(_, c)| *c != 0.0).collect(),
        }
    }

    /// Parses a monomial → coefficient map. Keys look like `"1"`, `"g2"`,
    /// `"g1^2*g3"`. Total degree is capped at 3 (the registry contract).
    pub fn parse(map: &BTreeMap<String, f64>) -> Result<Self> {
        let mut terms = Vec::new();
        for (key, &coeff) in map {
            let mut e = [0u8; 3];
            let trimmed = key.trim();
            if trimmed != "1" {
                for factor in trimmed.split('*') {
                    let factor = factor.trim();
                    let (base, pow) = match factor.split_once('^') {
                        Some((b, p)) => {
                            let pow: u8 = p.trim().parse().map_err(|_| {
                                Error::Config(format!("bad exponent in monomial '{key}'"))
                            })?;
                            (b.trim(), pow)
                        }
                        None => (factor, 1),
                    };
                    let idx = match base {
                        "g1" => 0,
                        "g2" => 1,
                        "g3" => 2,
                        _ => {
                            return Err(Error::Config(format!(
                                "unknown variable '{base}' in monomial '{key}' (use g1, g2, g3)"
                            )))
                        }
                    };
                    e[idx] += pow;
                }
            }
            if e.iter().map(|&p| p as u32).sum::<u32>() > 3 {
                return Err(Error::Config(format!(
                    "monomial '{key}' exceeds the registry degree bound 3"
                )));
            }
            terms.push((e, coeff));
        }
        Ok(PolyGamma::from_terms(terms))
    }

    pub fn eval(&self, g: Vec3) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                c * g.x.powi(e[0] as i32) * g.y.powi(e[1] as i32) * g.z.powi(e[2] as i32)
            })
            .sum()
    }

    pub fn partial(&self, axis: usize) -> PolyGamma {
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e[axis] > 0)
            .map(|(e, c)| {
                let mut e2 = *e;
                e2[axis] -= 1;
                (e2, c * e[axis] as f64)
            })
            .collect();
        PolyGamma::from_terms(terms)
    }

    pub fn grad(&self, g: Vec3) -> Vec3 {
        Vec3::new(
            self.partial(0).eval(g),
            self.partial(1).eval(g),
            self.partial(2).eval(g),
        )
    }

    /// Multiplication by the coordinate γ_axis.
    pub fn mul_gamma(&self, axis: usize) -> PolyGamma {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut e2 = *e;
                e2[axis] += 1;
                (e2, *c)
            })
            .collect();
        PolyGamma::from_terms(terms)
    }

    pub fn add(&self, other: &PolyGamma) -> PolyGamma {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        PolyGamma::from_terms(terms)
    }

    pub fn mul(&self, other: &PolyGamma) -> PolyGamma {
        let mut terms = Vec::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                terms.push((
                    [e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]],
                    c1 * c2,
                ));
            }
        }
        PolyGamma::from_terms(terms)
    }

    pub fn scale(&self, k: f64) -> PolyGamma {
        PolyGamma::from_terms(self.terms.iter().map(|(e, c)| (*e, c * k)).collect())
    }

    pub fn degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|(e, _)| e.iter().map(|&p| p as u32).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

type EvalGs = Arc<dyn Fn(Vec3, f64) -> f64 + Send + Sync>;
type GradGs = Arc<dyn Fn(Vec3, f64) -> Vec3 + Send + Sync>;

/// Smooth function of (γ, s) with optional analytic derivatives. Used for
/// potentials U(γ), Casimir candidates C(γ, s), and the registry fields.
#[derive(Clone)]
pub struct ScalarField {
    pub name: String,
    eval: EvalGs,
    grad_gamma: Option<GradGs>,
    d4: Option<EvalGs>,
    pub domain: Domain,
}

impl ScalarField {
    pub fn new<F>(name: impl Into<String>, eval: F) -> Self
    where
        F: Fn(Vec3, f64) -> f64 + Send + Sync + 'static,
    {
        ScalarField {
            name: name.into(),
            eval: Arc::new(eval),
            grad_gamma: None,
            d4: None,
            domain: Domain::none(),
        }
    }

    pub fn with_grad<F>(mut self, grad: F) -> Self
    where
        F: Fn(Vec3, f64) -> Vec3 + Send + Sync + 'static,
    {
        self.grad_gamma = Some(Arc::new(grad));
        self
    }

    pub fn with_d4<F>(mut self, d4: F) -> Self
    where
        F: Fn(Vec3, f64) -> f64 + Send + Sync + 'static,
    {
        self.d4 = Some(Arc::new(d4));
        self
    }

    pub fn with_domain(mut self, domain: Domain) -> Self {
        self.domain = domain;
        self
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// γ-only field from a polynomial; gradient analytic, ∂₄ ≡ 0.
    pub fn from_poly(name: impl Into<String>, p: PolyGamma) -> Self {
        let p2 = p.clone();
        ScalarField::new(name, move |g, _s| p.eval(g))
            .with_grad(move |g, _s| p2.grad(g))
            .with_d4(|_, _| 0.0)
    }

    pub fn constant(name: impl Into<String>, c: f64) -> Self {
        ScalarField::new(name, move |_, _| c)
            .with_grad(|_, _| Vec3::ZERO)
            .with_d4(|_, _| 0.0)
    }

    pub fn eval(&self, gamma: Vec3, s: f64) -> Result<f64> {
        self.domain.check(gamma, s)?;
        Ok((self.eval)(gamma, s))
    }

    /// Evaluation without the singular-set check. For stencils inside model
    /// assembly where the caller has already cleared the center point.
    pub fn eval_raw(&self, gamma: Vec3, s: f64) -> f64 {
        (self.eval)(gamma, s)
    }

    /// Gradient without domain checks: analytic when present, otherwise
    /// central differences over `eval_raw`.
    pub fn grad_gamma_raw(&self, gamma: Vec3, s: f64) -> Vec3 {
        match &self.grad_gamma {
            Some(g) => g(gamma, s),
            None => {
                let h = fd_default_step(gamma.norm());
                let mut out = Vec3::ZERO;
                for i in 0..3 {
                    let gp = gamma.with_component(i, gamma.component(i) + h);
                    let gm = gamma.with_component(i, gamma.component(i) - h);
                    out = out
                        .with_component(i, (self.eval_raw(gp, s) - self.eval_raw(gm, s)) / (2.0 * h));
                }
                out
            }
        }
    }

    pub fn d4_raw(&self, gamma: Vec3, s: f64) -> f64 {
        match &self.d4 {
            Some(d) => d(gamma, s),
            None => {
                let h = fd_default_step(s);
                (self.eval_raw(gamma, s + h) - self.eval_raw(gamma, s - h)) / (2.0 * h)
            }
        }
    }

    pub fn has_analytic_grad(&self) -> bool {
        self.grad_gamma.is_some()
    }

    pub fn has_analytic_d4(&self) -> bool {
        self.d4.is_some()
    }

    /// ∇_γ with s held fixed: analytic when available, central differences otherwise.
    pub fn grad_gamma(&self, gamma: Vec3, s: f64) -> Result<Vec3> {
        self.domain.check(gamma, s)?;
        match &self.grad_gamma {
            Some(g) => Ok(g(gamma, s)),
            None => self.fd_grad_gamma(gamma, s, fd_default_step(gamma.norm())),
        }
    }

    pub fn fd_grad_gamma(&self, gamma: Vec3, s: f64, h: f64) -> Result<Vec3> {
        fd_gradient(|g| self.eval(g, s), gamma, h)
    }

    /// ∂/∂s with γ held fixed.
    pub fn d4(&self, gamma: Vec3, s: f64) -> Result<f64> {
        self.domain.check(gamma, s)?;
        match &self.d4 {
            Some(d) => Ok(d(gamma, s)),
            None => self.fd_d4(gamma, s, fd_default_step(s)),
        }
    }

    pub fn fd_d4(&self, gamma: Vec3, s: f64, h: f64) -> Result<f64> {
        fd_derivative(|t| self.eval(gamma, t), s, h)
    }
}

impl std::fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ScalarField")
            .field("name", &self.name)
            .field("analytic_grad", &self.grad_gamma.is_some())
            .field("analytic_d4", &self.d4.is_some())
            .finish()
    }
}

type Eval6 = Arc<dyn Fn(&State) -> f64 + Send + Sync>;
type Grad6 = Arc<dyn Fn(&State) -> [f64; 6] + Send + Sync>;

/// Smooth function on the full six-dimensional phase space.
#[derive(Clone)]
pub struct ScalarField6 {
    pub name: String,
    eval: Eval6,
    grad: Option<Grad6>,
    pub domain: Domain,
}

impl ScalarField6 {
    pub fn new<F>(name: impl Into<String>, eval: F) -> Self
    where
        F: Fn(&State) -> f64 + Send + Sync + 'static,
    {
        ScalarField6 {
            name: name.into(),
            eval: Arc::new(eval),
            grad: None,
            domain: Domain::none(),
        }
    }

    pub fn with_grad<F>(mut self, grad: F) -> Self
    where
        F: Fn(&State) -> [f64; 6] + Send + Sync + 'static,
    {
        self.grad = Some(Arc::new(grad));
        self
    }

    pub fn with_domain(mut self, domain: Domain) -> Self {
        self.domain = domain;
        self
    }

    pub fn eval(&self, x: &State) -> Result<f64> {
        self.domain.check(x.gamma, x.s())?;
        Ok((self.eval)(x))
    }

    pub fn has_analytic_grad(&self) -> bool {
        self.grad.is_some()
    }

    /// Full 6-gradient (∇_M, ∇_γ); analytic or central differences.
    pub fn grad(&self, x: &State) -> Result<[f64; 6]> {
        self.domain.check(x.gamma, x.s())?;
        match &self.grad {
            Some(g) => Ok(g(x)),
            None => self.fd_grad(x, fd_default_step(x.norm())),
        }
    }

    pub fn fd_grad(&self, x: &State, h: f64) -> Result<[f64; 6]> {
        let mut out = [0.0; 6];
        for (i, slot) in out.iter_mut().enumerate() {
            let fp = self.eval(&x.perturbed(i, h))?;
            let fm = self.eval(&x.perturbed(i, -h))?;
            *slot = (fp - fm) / (2.0 * h);
        }
        Ok(out)
    }

    /// ½|γ|², a Casimir of the unmodified and of every modified structure.
    pub fn c1() -> Self {
        ScalarField6::new("C1", |x: &State| 0.5 * x.gamma.norm_squared()).with_grad(|x: &State| {
            [0.0, 0.0, 0.0, x.gamma.x, x.gamma.y, x.gamma.z]
        })
    }

    /// M·γ, a Casimir of the unmodified structure only.
    pub fn c2() -> Self {
        ScalarField6::new("C2", |x: &State| x.s()).with_grad(|x: &State| {
            [x.gamma.x, x.gamma.y, x.gamma.z, x.m.x, x.m.y, x.m.z]
        })
    }
}

impl std::fmt::Debug for ScalarField6 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ScalarField6")
            .field("name", &self.name)
            .field("analytic_grad", &self.grad.is_some())
            .finish()
    }
}
