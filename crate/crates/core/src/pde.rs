//! Finite-difference checks of the mode functions against
//! (□ₓ + ρ₀⁻² □ᵥ) φ(x, v) = 0 and its separated parts.
//!
//! Only dimensionless contexts are accepted: with an SI-scale ρ₀ the
//! ρ₀⁻² □ᵥ term is numerically meaningless, and the identity is
//! scale-covariant anyway.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kinematics::{
    four_velocity, DeviceState, FourVector, ParticleKinematics, ThreeVector, METRIC,
};
use crate::modes::{phi1, phi2, phi_mode, Branch, ModeSpec};
use crate::units::{rho0, UnitContext, UnitMode};

/// Accepted range for the dimensionless ρ₀.
pub const RHO0_RANGE: (f64, f64) = (0.01, 10.0);
/// Smallest allowed support margin.
pub const MIN_SUPPORT_MARGIN: f64 = 0.1;

/// Name of the generator used for every seeded sweep.
pub const PRNG_NAME: &str = "ChaCha8Rng/seed_from_u64";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Scheme {
    /// Second-order central differences, 3 points per axis.
    Central2,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StencilConfig {
    pub h: f64,
    pub scheme: Scheme,
    /// Minimum |a·v/a| allowed at any stencil point.
    pub support_margin: f64,
}

impl StencilConfig {
    pub fn new(h: f64, support_margin: f64) -> Result<Self> {
        let cfg = Self {
            h,
            scheme: Scheme::Central2,
            support_margin,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.h.is_finite() && self.h > 0.0) {
            return Err(Error::invalid(
                "h",
                format!("must be positive, got {}", self.h),
            ));
        }
        if !(self.support_margin.is_finite() && self.support_margin >= MIN_SUPPORT_MARGIN) {
            return Err(Error::invalid(
                "margin",
                format!(
                    "must be at least {MIN_SUPPORT_MARGIN}, got {}",
                    self.support_margin
                ),
            ));
        }
        Ok(())
    }

    pub fn with_h(mut self, h: f64) -> Self {
        self.h = h;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub value: Complex64,
    pub support: bool,
}

/// Anything that can be evaluated on the 8-dimensional (x, v) space.
pub trait Field {
    fn sample(&self, x: FourVector, v: FourVector) -> Result<Sample>;
}

impl<F> Field for F
where
    F: Fn(FourVector, FourVector) -> Complex64,
{
    fn sample(&self, x: FourVector, v: FourVector) -> Result<Sample> {
        Ok(Sample {
            value: self(x, v),
            support: true,
        })
    }
}

/// Which factor of a separable mode to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Factor {
    Full,
    Spacetime,
    Velocity,
}

/// A mode function viewed as a sampled field.
#[derive(Debug, Clone, Copy)]
pub struct ModeField {
    pub spec: ModeSpec,
    pub factor: Factor,
}

impl ModeField {
    pub fn new(spec: ModeSpec) -> Self {
        Self {
            spec,
            factor: Factor::Full,
        }
    }
}

impl Field for ModeField {
    fn sample(&self, x: FourVector, v: FourVector) -> Result<Sample> {
        let amp = match self.factor {
            Factor::Full => phi_mode(&self.spec, x, v)?,
            Factor::Spacetime => phi1(&self.spec, x)?,
            Factor::Velocity => phi2(&self.spec, v)?,
        };
        Ok(Sample {
            value: amp.to_complex(),
            support: amp.support,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Space {
    X,
    V,
}

/// Σ_μ η_μμ Δ²_μ f / h², plus the largest |f| seen on the stencil.
fn wave_operator<F: Field + ?Sized>(
    f: &F,
    x: FourVector,
    v: FourVector,
    h: f64,
    space: Space,
) -> Result<(Complex64, f64)> {
    let centre = f.sample(x, v)?;
    let mut scale = centre.value.norm();
    let mut acc = Complex64::new(0.0, 0.0);
    for (axis, eta) in METRIC.iter().enumerate() {
        let step = FourVector::basis(axis) * h;
        let (plus, minus) = match space {
            Space::X => (f.sample(x + step, v)?, f.sample(x - step, v)?),
            Space::V => (f.sample(x, v + step)?, f.sample(x, v - step)?),
        };
        if plus.support != centre.support || minus.support != centre.support {
            return Err(Error::StencilCrossesSupport);
        }
        scale = scale.max(plus.value.norm()).max(minus.value.norm());
        acc += (plus.value - centre.value * 2.0 + minus.value) * *eta;
    }
    Ok((acc / (h * h), scale))
}

/// Central-difference □ₓ = ∂²/∂t² − ∇² at fixed v.
pub fn dalembertian_x<F: Field + ?Sized>(
    f: &F,
    x: FourVector,
    v: FourVector,
    cfg: &StencilConfig,
) -> Result<Complex64> {
    cfg.validate()?;
    Ok(wave_operator(f, x, v, cfg.h, Space::X)?.0)
}

/// Central-difference □ᵥ over the four velocity coordinates at fixed x.
pub fn dalembertian_v<F: Field + ?Sized>(
    f: &F,
    x: FourVector,
    v: FourVector,
    cfg: &StencilConfig,
) -> Result<Complex64> {
    cfg.validate()?;
    Ok(wave_operator(f, x, v, cfg.h, Space::V)?.0)
}

/// (□ₓ + ρ₀⁻² □ᵥ) f and an estimate of the round-off floor of that sum.
pub fn operator_8d<F: Field + ?Sized>(
    f: &F,
    rho0: f64,
    x: FourVector,
    v: FourVector,
    h: f64,
) -> Result<(Complex64, f64)> {
    let (bx, sx) = wave_operator(f, x, v, h, Space::X)?;
    let (bv, sv) = wave_operator(f, x, v, h, Space::V)?;
    let inv = 1.0 / (rho0 * rho0);
    // Each axis contributes about 4ε|f|/h² of cancellation error.
    let floor = 4.0 * f64::EPSILON * (4.0 * sx + 4.0 * inv * sv) / (h * h);
    Ok((bx + bv * inv, floor))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualReport {
    /// (x⁰..x³, v⁰..v³).
    pub point: [f64; 8],
    #[serde(skip)]
    pub residual: Complex64,
    pub abs_residual: f64,
    /// |residual| / |(mc/ħ)² φ|.
    pub relative_residual: f64,
    pub h: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ResidualOutcome {
    Evaluated(ResidualReport),
    /// The field vanishes at the centre (wrong-branch support).
    Skipped,
}

impl ResidualOutcome {
    pub fn report(&self) -> Option<&ResidualReport> {
        match self {
            ResidualOutcome::Evaluated(r) => Some(r),
            ResidualOutcome::Skipped => None,
        }
    }
}

fn dimensionless_rho0(ctx: &UnitContext) -> Result<f64> {
    if ctx.mode != UnitMode::Dimensionless {
        return Err(Error::RequiresDimensionless);
    }
    let r = rho0(ctx)?;
    if !(RHO0_RANGE.0..=RHO0_RANGE.1).contains(&r) {
        return Err(Error::invalid(
            "rho0",
            format!("must lie in [{}, {}], got {r}", RHO0_RANGE.0, RHO0_RANGE.1),
        ));
    }
    Ok(r)
}

/// Verifies |a·v/a| ≥ margin on every velocity the stencil touches.
fn check_margin(spec: &ModeSpec, v: FourVector, cfg: &StencilConfig) -> Result<()> {
    let mut points = vec![v];
    for axis in 0..4 {
        let step = FourVector::basis(axis) * cfg.h;
        points.push(v + step);
        points.push(v - step);
    }
    for p in points {
        let ratio = spec.accel_projection(p)?.abs();
        if ratio < cfg.support_margin {
            return Err(Error::MarginViolation {
                ratio,
                margin: cfg.support_margin,
            });
        }
    }
    Ok(())
}

fn point8(x: FourVector, v: FourVector) -> [f64; 8] {
    let (a, b) = (x.to_array(), v.to_array());
    [a[0], a[1], a[2], a[3], b[0], b[1], b[2], b[3]]
}

/// Finite-difference residual of the eight-dimensional field equation for
/// the mode at (x, v).
pub fn residual_8d(
    spec: &ModeSpec,
    x: FourVector,
    v: FourVector,
    cfg: &StencilConfig,
) -> Result<ResidualOutcome> {
    cfg.validate()?;
    let r0 = dimensionless_rho0(&spec.ctx)?;
    let field = ModeField::new(*spec);
    let centre = field.sample(x, v)?;
    if !centre.support {
        return Ok(ResidualOutcome::Skipped);
    }
    check_margin(spec, v, cfg)?;
    let (residual, _) = operator_8d(&field, r0, x, v, cfg.h)?;
    let k2 = (spec.part.mass * spec.ctx.c() / spec.ctx.hbar()).powi(2);
    let abs_residual = residual.norm();
    Ok(ResidualOutcome::Evaluated(ResidualReport {
        point: point8(x, v),
        residual,
        abs_residual,
        relative_residual: abs_residual / (k2 * centre.value.norm()),
        h: cfg.h,
    }))
}

/// (□ₓφ₁/φ₁, ρ₀⁻² □ᵥφ₂/φ₂), expected to approach (−(mc/ħ)², +(mc/ħ)²).
pub fn separation_check(
    spec: &ModeSpec,
    x: FourVector,
    v: FourVector,
    cfg: &StencilConfig,
) -> Result<(Complex64, Complex64)> {
    cfg.validate()?;
    let r0 = dimensionless_rho0(&spec.ctx)?;
    check_margin(spec, v, cfg)?;
    let spacetime = ModeField {
        spec: *spec,
        factor: Factor::Spacetime,
    };
    let velocity = ModeField {
        spec: *spec,
        factor: Factor::Velocity,
    };
    let f1 = spacetime.sample(x, v)?;
    let f2 = velocity.sample(x, v)?;
    if !f1.support || !f2.support || f1.value.norm() == 0.0 || f2.value.norm() == 0.0 {
        return Err(Error::VanishingField);
    }
    let lhs_x = dalembertian_x(&spacetime, x, v, cfg)? / f1.value;
    let lhs_v = dalembertian_v(&velocity, x, v, cfg)? / f2.value / (r0 * r0);
    Ok((lhs_x, lhs_v))
}

/// Least-squares slope of ln(residual) against ln(h).
pub fn fit_slope(hs: &[f64], residuals: &[f64]) -> f64 {
    let n = hs.len() as f64;
    let xs: Vec<f64> = hs.iter().map(|h| h.ln()).collect();
    let ys: Vec<f64> = residuals.iter().map(|r| r.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (x, y) in xs.iter().zip(&ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    sxy / sxx
}

fn validate_steps(hs: &[f64]) -> Result<()> {
    if hs.len() < 3 {
        return Err(Error::invalid("h_sequence", "need at least 3 step sizes"));
    }
    if hs.iter().any(|h| !(h.is_finite() && *h > 0.0)) || hs.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::invalid(
            "h_sequence",
            "step sizes must be positive and strictly decreasing",
        ));
    }
    Ok(())
}

/// Observed order of the 8-D residual of an arbitrary field.
///
/// Fails with [`Error::NoiseFloor`] when any residual is at round-off level.
pub fn convergence_order_field<F: Field + ?Sized>(
    f: &F,
    rho0: f64,
    x: FourVector,
    v: FourVector,
    hs: &[f64],
) -> Result<f64> {
    validate_steps(hs)?;
    let mut residuals = Vec::with_capacity(hs.len());
    for &h in hs {
        let (res, floor) = operator_8d(f, rho0, x, v, h)?;
        if res.norm() <= floor {
            return Err(Error::NoiseFloor);
        }
        residuals.push(res.norm());
    }
    Ok(fit_slope(hs, &residuals))
}

/// Observed order of [`residual_8d`] for the mode at (x, v).
pub fn convergence_order(spec: &ModeSpec, x: FourVector, v: FourVector, hs: &[f64]) -> Result<f64> {
    validate_steps(hs)?;
    let r0 = dimensionless_rho0(&spec.ctx)?;
    let cfg = StencilConfig::new(hs[0], MIN_SUPPORT_MARGIN)?;
    for &h in hs {
        check_margin(spec, v, &cfg.with_h(h))?;
    }
    convergence_order_field(&ModeField::new(*spec), r0, x, v, hs)
}

/// A random evaluation point together with the mode kinematics used there.
#[derive(Debug, Clone, Copy)]
pub struct InteriorPoint {
    pub spec: ModeSpec,
    pub x: FourVector,
    pub v: FourVector,
}

/// Draws points away from the support boundary: generic kinematics, x in
/// [−2, 2]⁴ and v a physical four-velocity (|u| < 0.7) perturbed by up to
/// 0.05 per component. Branches alternate; negative-branch points use −v so
/// that they sit on that branch's support.
pub fn random_interior_points(
    rng: &mut impl Rng,
    count: usize,
    mass: f64,
    rho0: f64,
    cfg: &StencilConfig,
) -> Result<Vec<InteriorPoint>> {
    let ctx = UnitContext::dimensionless(rho0);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mut sym = |r: f64| rng.random_range(-r..r);
        let proper_accel = 0.5 + 1.5 * sym(1.0).abs();
        let part = ParticleKinematics {
            mass,
            momentum3: ThreeVector::new(sym(0.5), sym(0.5), sym(0.5)),
            proper_accel,
            accel3: ThreeVector::new(sym(0.5), sym(0.5), sym(0.5)) * proper_accel,
        };
        let x = FourVector::new(sym(2.0), sym(2.0), sym(2.0), sym(2.0));
        let u = ThreeVector::new(sym(0.4), sym(0.4), sym(0.4));
        let jitter = FourVector::new(sym(0.05), sym(0.05), sym(0.05), sym(0.05));
        let v = four_velocity(&DeviceState::moving(u), 1.0)? + jitter;
        let branch = if out.len() % 2 == 0 {
            Branch::Positive
        } else {
            Branch::Negative
        };
        let v = if branch == Branch::Positive { v } else { -v };
        let spec = ModeSpec::new(ctx, part, branch);
        if check_margin(&spec, v, cfg).is_ok() {
            out.push(InteriorPoint { spec, x, v });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub mass: f64,
    pub rho0: f64,
    pub h: f64,
    pub points: usize,
    pub seed: u64,
    pub margin: f64,
    /// Step sequence for the convergence-slope estimate.
    pub h_sequence: Vec<f64>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            mass: 1.0,
            rho0: 0.1,
            h: 1e-3,
            points: 100,
            seed: 0,
            margin: MIN_SUPPORT_MARGIN,
            h_sequence: vec![1e-2, 5e-3, 2.5e-3],
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepSummary {
    pub points: usize,
    pub max_rel_residual: f64,
    /// Mean of the per-point slopes.
    pub convergence_slope: f64,
    pub slope_min: f64,
    pub slope_max: f64,
    pub h: f64,
    pub h_sequence: Vec<f64>,
    pub mass: f64,
    pub rho0: f64,
    pub seed: u64,
    pub prng: &'static str,
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub rows: Vec<ResidualReport>,
    pub summary: SweepSummary,
}

/// Residuals and convergence slopes over seeded random interior points.
/// Rows are sorted by point coordinates.
pub fn residual_sweep(sc: &SweepConfig) -> Result<SweepResult> {
    if !(sc.mass.is_finite() && sc.mass > 0.0) {
        return Err(Error::invalid(
            "m",
            format!("must be positive, got {}", sc.mass),
        ));
    }
    if sc.points == 0 {
        return Err(Error::invalid("points", "must be at least 1"));
    }
    dimensionless_rho0(&UnitContext::dimensionless(sc.rho0))?;
    validate_steps(&sc.h_sequence)?;
    let cfg = StencilConfig::new(sc.h, sc.margin)?;
    let widest = StencilConfig::new(sc.h.max(sc.h_sequence[0]), sc.margin)?;

    let mut rng = ChaCha8Rng::seed_from_u64(sc.seed);
    let points = random_interior_points(&mut rng, sc.points, sc.mass, sc.rho0, &widest)?;

    let mut rows = Vec::with_capacity(points.len());
    let mut slopes = Vec::with_capacity(points.len());
    for p in &points {
        if let ResidualOutcome::Evaluated(r) = residual_8d(&p.spec, p.x, p.v, &cfg)? {
            rows.push(r);
        }
        slopes.push(convergence_order(&p.spec, p.x, p.v, &sc.h_sequence)?);
    }
    rows.sort_by(|a, b| a.point.partial_cmp(&b.point).expect("finite coordinates"));

    let max_rel_residual = rows.iter().map(|r| r.relative_residual).fold(0.0, f64::max);
    let slope_min = slopes.iter().copied().fold(f64::INFINITY, f64::min);
    let slope_max = slopes.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let convergence_slope = slopes.iter().sum::<f64>() / slopes.len() as f64;
    Ok(SweepResult {
        summary: SweepSummary {
            points: rows.len(),
            max_rel_residual,
            convergence_slope,
            slope_min,
            slope_max,
            h: sc.h,
            h_sequence: sc.h_sequence.clone(),
            mass: sc.mass,
            rho0: sc.rho0,
            seed: sc.seed,
            prng: PRNG_NAME,
        },
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modes::{box_v_phi2_analytic, wave_vector_k};

    fn cfg(h: f64) -> StencilConfig {
        StencilConfig::new(h, MIN_SUPPORT_MARGIN).unwrap()
    }

    fn rest_spec(mass: f64, rho0: f64) -> ModeSpec {
        ModeSpec::new(
            UnitContext::dimensionless(rho0),
            ParticleKinematics::at_rest(mass),
            Branch::Positive,
        )
    }

    fn generic_spec(rho0: f64) -> ModeSpec {
        let part = ParticleKinematics {
            mass: 1.0,
            momentum3: ThreeVector::new(0.3, -0.2, 0.1),
            proper_accel: 1.2,
            accel3: ThreeVector::new(0.4, 0.2, -0.3),
        };
        ModeSpec::new(UnitContext::dimensionless(rho0), part, Branch::Positive)
    }

    const X0: FourVector = FourVector::new(0.4, -0.3, 1.1, 0.2);
    const V0: FourVector = FourVector::new(1.1, 0.2, -0.1, 0.3);

    #[test]
    fn config_validation() {
        assert!(StencilConfig::new(0.0, 0.1).is_err());
        assert!(StencilConfig::new(1e-3, 0.05).is_err());
        assert!(StencilConfig::new(1e-3, 0.1).is_ok());
    }

    #[test]
    fn constant_and_affine_fields_vanish() {
        let c = cfg(1e-3);
        let constant = |_: FourVector, _: FourVector| Complex64::new(2.5, -1.0);
        assert_eq!(
            dalembertian_x(&constant, X0, V0, &c).unwrap(),
            Complex64::new(0.0, 0.0)
        );
        assert_eq!(
            dalembertian_v(&constant, X0, V0, &c).unwrap(),
            Complex64::new(0.0, 0.0)
        );
        let affine = |x: FourVector, v: FourVector| {
            Complex64::new(1.0 + 2.0 * x.t - x.y + 0.5 * v.x, x.z - 3.0 * v.t)
        };
        assert!(dalembertian_x(&affine, X0, V0, &c).unwrap().norm() < 1e-8);
        assert!(dalembertian_v(&affine, X0, V0, &c).unwrap().norm() < 1e-8);
    }

    #[test]
    fn plane_wave_second_order() {
        // e^{ik·x} with k = (1, 0, 0, 0): □ₓ f = −f, truncation error k⁴h²/12.
        let f = |x: FourVector, _: FourVector| Complex64::from_polar(1.0, x.t);
        let exact = -f(X0, V0);
        let e1 = (dalembertian_x(&f, X0, V0, &cfg(1e-2)).unwrap() - exact).norm();
        let e2 = (dalembertian_x(&f, X0, V0, &cfg(5e-3)).unwrap() - exact).norm();
        assert!((e1 - 1e-4 / 12.0).abs() < 1e-8);
        assert!((e1 / e2 - 4.0).abs() < 0.01);
    }

    #[test]
    fn velocity_operator_against_closed_forms() {
        let spec = rest_spec(1.0, 1.0);
        let field = ModeField {
            spec,
            factor: Factor::Velocity,
        };
        let exact = box_v_phi2_analytic(&spec, V0).unwrap();
        let approx = dalembertian_v(&field, X0, V0, &cfg(1e-3)).unwrap();
        assert!((approx - exact).norm() < 1e-6 * exact.norm());

        // e^{−n·v} with n·n = 1 gives □ᵥ f = f.
        let n = FourVector::new(1.25, 0.75, 0.0, 0.0);
        let f = |_: FourVector, v: FourVector| Complex64::new((-n.dot(v)).exp(), 0.0);
        let approx = dalembertian_v(&f, X0, V0, &cfg(1e-3)).unwrap();
        assert!((approx - f(X0, V0)).norm() < 1e-5 * f(X0, V0).norm());
    }

    #[test]
    fn stencil_straddling_support_is_rejected() {
        let spec = rest_spec(1.0, 1.0);
        let field = ModeField::new(spec);
        // a·v/a = v⁰ here, so v⁰ = 0 is the support boundary.
        let v = FourVector::new(1e-4, 0.0, 0.0, 0.0);
        assert_eq!(
            dalembertian_v(&field, X0, v, &cfg(1e-3)),
            Err(Error::StencilCrossesSupport)
        );
    }

    #[test]
    fn residual_skips_wrong_branch() {
        let spec = rest_spec(1.0, 0.1).with_branch(Branch::Negative);
        assert_eq!(
            residual_8d(&spec, X0, V0, &cfg(1e-3)).unwrap(),
            ResidualOutcome::Skipped
        );
    }

    #[test]
    fn residual_margin_and_units() {
        let spec = rest_spec(1.0, 0.1);
        let near = FourVector::new(0.05, 0.0, 0.0, 0.0);
        assert!(matches!(
            residual_8d(&spec, X0, near, &cfg(1e-3)),
            Err(Error::MarginViolation { .. })
        ));
        let si = ModeSpec::new(
            UnitContext::default(),
            ParticleKinematics::at_rest(1.0),
            Branch::Positive,
        );
        assert_eq!(
            residual_8d(&si, X0, V0, &cfg(1e-3)),
            Err(Error::RequiresDimensionless)
        );
        assert!(residual_8d(&rest_spec(1.0, 20.0), X0, V0, &cfg(1e-3)).is_err());
    }

    #[test]
    fn residual_rest_kinematics() {
        let spec = rest_spec(1.0, 0.1);
        let v = four_velocity(&DeviceState::at_rest(), 1.0).unwrap();
        let r = residual_8d(&spec, X0, v, &cfg(1e-3)).unwrap();
        let r = r.report().unwrap();
        assert!(r.relative_residual < 1e-4, "{}", r.relative_residual);
        // Leading truncation (k₀⁴ + ρ₀²n₀⁴)h²/12 = (1 + 0.01)·1e-6/12.
        assert!((r.relative_residual - 1.01e-6 / 12.0).abs() < 1e-8);

        // ρ₀⁻² amplifies round-off near h = 1e-3, so compare coarser steps.
        let at = |h| {
            residual_8d(&spec, X0, v, &cfg(h))
                .unwrap()
                .report()
                .unwrap()
                .abs_residual
        };
        assert!((at(4e-3) / at(2e-3) - 4.0).abs() < 0.05);
    }

    #[test]
    fn separation_constants() {
        for mass in [1.0, 2.0] {
            let mut spec = generic_spec(0.5);
            spec.part.mass = mass;
            let (lx, lv) = separation_check(&spec, X0, V0, &cfg(1e-3)).unwrap();
            let m2 = mass * mass;
            let k = wave_vector_k(&spec).unwrap();
            let tol = (k.t.powi(4) + 1.0) * 1e-6;
            assert!((lx + m2).norm() < tol, "{lx}");
            assert!((lv - m2).norm() < tol, "{lv}");
            let single = (lx + m2).norm().max((lv - m2).norm());
            assert!((lx + lv).norm() <= 2.0 * single);
        }
        let neg = generic_spec(0.5).with_branch(Branch::Negative);
        assert_eq!(
            separation_check(&neg, X0, V0, &cfg(1e-3)),
            Err(Error::VanishingField)
        );
    }

    #[test]
    fn convergence_slope_generic_point() {
        let spec = generic_spec(0.7);
        let slope = convergence_order(&spec, X0, V0, &[1e-2, 5e-3, 2.5e-3]).unwrap();
        assert!((1.8..=2.2).contains(&slope), "{slope}");
    }

    #[test]
    fn convergence_flags_exact_fields() {
        let hs = [1e-2, 5e-3, 2.5e-3];
        let constant = |_: FourVector, _: FourVector| Complex64::new(1.0, 0.0);
        assert_eq!(
            convergence_order_field(&constant, 0.5, X0, V0, &hs),
            Err(Error::NoiseFloor)
        );
        // Harmonic quadratics: the stencil is exact and the operator vanishes.
        let quadratic = |x: FourVector, v: FourVector| {
            Complex64::new(x.t * x.t + x.y * x.y + v.t * v.x, 0.3 * x.y * x.z)
        };
        assert_eq!(
            convergence_order_field(&quadratic, 0.5, X0, V0, &hs),
            Err(Error::NoiseFloor)
        );
        assert!(convergence_order_field(&constant, 0.5, X0, V0, &[1e-2, 5e-3]).is_err());
        assert!(convergence_order_field(&constant, 0.5, X0, V0, &[1e-3, 5e-3, 2.5e-3]).is_err());
    }

    #[test]
    fn stencils_are_linear() {
        let f = |x: FourVector, v: FourVector| {
            Complex64::from_polar((-0.3 * v.t).exp(), x.t - 0.2 * x.x)
        };
        let g = |x: FourVector, v: FourVector| Complex64::new((x.y * v.x).sin(), (x.z + v.y).cos());
        let s = Complex64::new(0.7, -1.3);
        let combo = |x: FourVector, v: FourVector| f(x, v) * s + g(x, v);
        let c = cfg(1e-3);
        for op in [dalembertian_x::<dyn Field>, dalembertian_v::<dyn Field>] {
            let lhs = op(&combo, X0, V0, &c).unwrap();
            let rhs = op(&f, X0, V0, &c).unwrap() * s + op(&g, X0, V0, &c).unwrap();
            assert!((lhs - rhs).norm() < 1e-6);
        }
    }

    #[test]
    fn sweep_is_deterministic_and_sorted() {
        let sc = SweepConfig {
            points: 10,
            seed: 42,
            ..SweepConfig::default()
        };
        let a = residual_sweep(&sc).unwrap();
        let b = residual_sweep(&sc).unwrap();
        assert_eq!(a.rows, b.rows);
        assert_eq!(a.rows.len(), 10);
        assert!(a.rows.windows(2).all(|w| w[0].point <= w[1].point));
        assert!(a.summary.max_rel_residual < 1e-3);
    }
}
