//! Separable positive- and negative-frequency modes
//!
//! φ±(x, v) = φ₀ e^{±ip·x/ħ} e^{∓(ρ₀/λ₀)(a·v/a)} θ(±a·v/a),
//!
//! stored in log-domain form so that exponents far outside the f64 range
//! survive, and the suppression factor multiplying both branches.

use std::f64::consts::{PI, TAU};
use std::ops::Mul;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::Result;
use crate::kinematics::{
    four_acceleration, four_momentum, four_velocity, unit_acceleration, DeviceState, FourVector,
    ParticleKinematics,
};
use crate::units::{effective_planck_mass, rest_wavelength, rho0, UnitContext};

/// Reduces an angle to (−π, π].
pub fn wrap_phase(angle: f64) -> f64 {
    let r = angle.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Heaviside step with θ(0) = 1.
pub fn heaviside(x: f64) -> bool {
    x >= 0.0
}

/// A complex value held as (ln |z|, arg z, support).
///
/// `support == false` means the value is exactly zero whatever `log_mag`
/// holds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogAmplitude {
    pub log_mag: f64,
    pub phase: f64,
    pub support: bool,
}

impl LogAmplitude {
    pub fn new(log_mag: f64, phase: f64, support: bool) -> Self {
        Self {
            log_mag,
            phase: wrap_phase(phase),
            support,
        }
    }

    pub fn one() -> Self {
        Self::new(0.0, 0.0, true)
    }

    pub fn zero() -> Self {
        Self::new(f64::NEG_INFINITY, 0.0, false)
    }

    pub fn from_complex(z: Complex64) -> Self {
        Self::new(z.norm().ln(), z.arg(), true)
    }

    pub fn to_complex(&self) -> Complex64 {
        if self.support {
            Complex64::from_polar(self.log_mag.exp(), self.phase)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    /// ln |z|, −∞ off support.
    pub fn ln_magnitude(&self) -> f64 {
        if self.support {
            self.log_mag
        } else {
            f64::NEG_INFINITY
        }
    }

    pub fn log10_magnitude(&self) -> f64 {
        self.ln_magnitude() / std::f64::consts::LN_10
    }

    /// |z|; underflows to zero for very negative `log_mag`.
    pub fn magnitude(&self) -> f64 {
        self.ln_magnitude().exp()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.log_mag, -self.phase, self.support)
    }
}

impl Mul for LogAmplitude {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(
            self.log_mag + o.log_mag,
            self.phase + o.phase,
            self.support && o.support,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Positive,
    Negative,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Positive => 1.0,
            Branch::Negative => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeSpec {
    pub ctx: UnitContext,
    pub part: ParticleKinematics,
    pub branch: Branch,
    /// φ₀; carried by the spacetime factor (φ₁₀ = φ₀, φ₂₀ = 1).
    pub amplitude0: Complex64,
}

impl ModeSpec {
    pub fn new(ctx: UnitContext, part: ParticleKinematics, branch: Branch) -> Self {
        Self {
            ctx,
            part,
            branch,
            amplitude0: Complex64::new(1.0, 0.0),
        }
    }

    pub fn with_branch(mut self, branch: Branch) -> Self {
        self.branch = branch;
        self
    }

    /// ρ₀/λ₀ = ρ₀mc/ħ, the dimensionless decay rate in velocity space.
    pub fn rho0_over_lambda0(&self) -> Result<f64> {
        Ok(rho0(&self.ctx)? / rest_wavelength(&self.ctx, self.part.mass)?)
    }

    /// (a·v)/a for an arbitrary velocity-space point v.
    pub fn accel_projection(&self, v: FourVector) -> Result<f64> {
        Ok(four_acceleration(&self.part)?.dot(v) / self.part.proper_accel)
    }
}

/// k^μ = p^μ/ħ.
pub fn wave_vector_k(spec: &ModeSpec) -> Result<FourVector> {
    let p = four_momentum(&spec.part, spec.ctx.c())?;
    Ok(p * (1.0 / spec.ctx.hbar()))
}

/// q^μ = (ρ₀/λ₀) a^μ/a.
pub fn wave_vector_q(spec: &ModeSpec) -> Result<FourVector> {
    let n = unit_acceleration(&spec.part)?;
    Ok(n * spec.rho0_over_lambda0()?)
}

/// φ₁±(x) = φ₀ e^{±ik·x}.
pub fn phi1(spec: &ModeSpec, x: FourVector) -> Result<LogAmplitude> {
    let k = wave_vector_k(spec)?;
    let base = LogAmplitude::from_complex(spec.amplitude0);
    let wave = LogAmplitude::new(0.0, spec.branch.sign() * k.dot(x), true);
    Ok(base * wave)
}

/// φ₂±(v) = e^{∓(ρ₀/λ₀)(a·v/a)} θ(±a·v/a).
pub fn phi2(spec: &ModeSpec, v: FourVector) -> Result<LogAmplitude> {
    let sign = spec.branch.sign();
    let ratio = spec.accel_projection(v)?;
    let decay = spec.rho0_over_lambda0()?;
    Ok(LogAmplitude::new(
        -sign * decay * ratio,
        0.0,
        heaviside(sign * ratio),
    ))
}

/// φ±(x, v) = φ₁±(x) φ₂±(v).
pub fn phi_mode(spec: &ModeSpec, x: FourVector, v: FourVector) -> Result<LogAmplitude> {
    Ok(phi1(spec, x)? * phi2(spec, v)?)
}

/// The c-number kernel multiplying b (positive branch) or b† (negative
/// branch) in the field expansion:
/// e^{∓ip·x/ħ} e^{∓(ρ₀/λ₀)(a·v/a)} θ(±a·v/a), times φ₀.
///
/// Differs from [`phi_mode`] only by the sign of the plane-wave phase.
pub fn field_kernel(spec: &ModeSpec, x: FourVector, v: FourVector) -> Result<LogAmplitude> {
    let k = wave_vector_k(spec)?;
    let base = LogAmplitude::from_complex(spec.amplitude0);
    let wave = LogAmplitude::new(0.0, -spec.branch.sign() * k.dot(x), true);
    Ok(base * wave * phi2(spec, v)?)
}

/// □_v φ₂ from the analytic derivatives ∂φ₂/∂v^μ = ∓q_μ φ₂, summed
/// component-wise with the metric. Valid off the support boundary.
pub fn box_v_phi2_analytic(spec: &ModeSpec, v: FourVector) -> Result<Complex64> {
    let q = wave_vector_q(spec)?.to_array();
    let sign = spec.branch.sign();
    let phi = phi2(spec, v)?.to_complex();
    let lowered = [q[0], -q[1], -q[2], -q[3]];
    let laplacian: f64 = lowered
        .iter()
        .zip(crate::kinematics::METRIC)
        .map(|(q_mu, eta)| eta * (sign * q_mu) * (sign * q_mu))
        .sum();
    Ok(phi * laplacian)
}

/// The suppression exponent computed two ways.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExponentRoutes {
    /// −(ρ₀/λ₀)|a·v/a| with v the device four-velocity.
    pub via_ratio: f64,
    /// −(1/2πα)(γm/m_Pl)[(1 + (|a|/a)²)^{1/2} − (a/a)·(u/c)].
    pub via_planck: f64,
}

pub fn exponent_routes(spec: &ModeSpec, dev: &DeviceState) -> Result<ExponentRoutes> {
    let ctx = &spec.ctx;
    let part = &spec.part;
    part.validate()?;

    let v = four_velocity(dev, ctx.c())?;
    let via_ratio = -spec.rho0_over_lambda0()? * spec.accel_projection(v)?.abs();

    let gamma = dev.gamma(ctx.c())?;
    let ratio = part.accel_ratio();
    let tilt = part.accel3.dot(dev.velocity3) / (part.proper_accel * ctx.c());
    let bracket = ratio.hypot(1.0) - tilt;
    let m_pl = effective_planck_mass(ctx)?;
    let via_planck = -(gamma * part.mass / m_pl) * bracket / (TAU * ctx.alpha);

    Ok(ExponentRoutes {
        via_ratio,
        via_planck,
    })
}

/// Natural log of the suppression factor exp(−(ρ₀/λ₀)|a·v/a|), in the
/// Planck-mass form.
pub fn suppression_factor(spec: &ModeSpec, dev: &DeviceState) -> Result<f64> {
    Ok(exponent_routes(spec, dev)?.via_planck)
}
