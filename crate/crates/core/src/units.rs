//! Physical constants, the order-unity factor α and the scales derived from
//! them: the maximal proper acceleration, the length ρ₀ = c²/a_M, the
//! Planck mass and the reduced Compton wavelength.

use std::f64::consts::TAU;

use serde::Serialize;

use crate::error::{Error, Result};

/// Stored (not compile-time) constants in SI units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysicalConstants {
    /// Speed of light, m/s.
    pub c: f64,
    /// Reduced Planck constant, J·s.
    pub hbar: f64,
    /// Gravitational constant, m³/(kg·s²).
    #[serde(rename = "G")]
    pub g: f64,
    /// Avogadro's number, 1/mol.
    pub avogadro: f64,
    /// Nucleon mass, kg.
    pub nucleon_mass: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self {
            c: 2.998e8,
            hbar: 1.055e-34,
            g: 6.674e-11,
            avogadro: 6e23,
            nucleon_mass: 1.7e-27,
        }
    }
}

/// Planck mass used in the rounded macroscopic arithmetic, kg.
pub const ROUNDED_PLANCK_MASS: f64 = 2.2e-8;

impl PhysicalConstants {
    /// Defaults with the Planck mass pinned to the rounded 2.2e-8 kg.
    pub fn rounded() -> Self {
        Self::default().with_planck_mass(ROUNDED_PLANCK_MASS)
    }

    /// Replaces G by ħc/m_Pl² so that `(ħc/G)^{1/2}` reproduces `m_pl`.
    ///
    /// Every G-dependent scale (a_M, ρ₀) follows, so the context stays
    /// internally consistent.
    pub fn with_planck_mass(mut self, m_pl: f64) -> Self {
        self.g = self.hbar * self.c / (m_pl * m_pl);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("c", self.c),
            ("hbar", self.hbar),
            ("G", self.g),
            ("avogadro", self.avogadro),
            ("nucleon_mass", self.nucleon_mass),
        ];
        for (name, value) in fields {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::invalid(
                    name,
                    format!("must be positive, got {value}"),
                ));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum UnitMode {
    Si,
    /// c = ħ = 1 with ρ₀ supplied as a free parameter.
    Dimensionless,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitContext {
    pub constants: PhysicalConstants,
    pub alpha: f64,
    pub mode: UnitMode,
    pub rho0_override: Option<f64>,
}

impl Default for UnitContext {
    fn default() -> Self {
        Self::si(PhysicalConstants::default(), 1.0)
    }
}

impl UnitContext {
    pub fn si(constants: PhysicalConstants, alpha: f64) -> Self {
        Self {
            constants,
            alpha,
            mode: UnitMode::Si,
            rho0_override: None,
        }
    }

    pub fn dimensionless(rho0: f64) -> Self {
        Self {
            constants: PhysicalConstants::default(),
            alpha: 1.0,
            mode: UnitMode::Dimensionless,
            rho0_override: Some(rho0),
        }
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.constants.validate()?;
        if !(self.alpha.is_finite() && self.alpha > 0.0) {
            return Err(Error::invalid(
                "alpha",
                format!("must be positive, got {}", self.alpha),
            ));
        }
        if let Some(rho0) = self.rho0_override {
            if !(rho0.is_finite() && rho0 > 0.0) {
                return Err(Error::invalid(
                    "rho0",
                    format!("must be positive, got {rho0}"),
                ));
            }
        }
        Ok(())
    }

    pub fn is_si(&self) -> bool {
        self.mode == UnitMode::Si
    }

    /// Speed of light in the active unit system.
    pub fn c(&self) -> f64 {
        match self.mode {
            UnitMode::Si => self.constants.c,
            UnitMode::Dimensionless => 1.0,
        }
    }

    /// Reduced Planck constant in the active unit system.
    pub fn hbar(&self) -> f64 {
        match self.mode {
            UnitMode::Si => self.constants.hbar,
            UnitMode::Dimensionless => 1.0,
        }
    }

    fn require_si(&self) -> Result<()> {
        if self.is_si() {
            Ok(())
        } else {
            Err(Error::RequiresSi)
        }
    }
}

/// a_M = 2πα (c⁷/ħG)^{1/2}.
pub fn max_proper_acceleration(ctx: &UnitContext) -> Result<f64> {
    ctx.require_si()?;
    let k = &ctx.constants;
    Ok(TAU * ctx.alpha * (k.c.powi(7) / (k.hbar * k.g)).sqrt())
}

/// ρ₀ = c²/a_M in SI, or the supplied override in dimensionless mode.
pub fn rho0(ctx: &UnitContext) -> Result<f64> {
    match ctx.mode {
        UnitMode::Si => Ok(ctx.constants.c.powi(2) / max_proper_acceleration(ctx)?),
        UnitMode::Dimensionless => ctx.rho0_override.ok_or(Error::MissingRho0),
    }
}

/// m_Pl = (ħc/G)^{1/2}.
pub fn planck_mass(ctx: &UnitContext) -> Result<f64> {
    ctx.require_si()?;
    let k = &ctx.constants;
    Ok((k.hbar * k.c / k.g).sqrt())
}

/// The Planck mass implied by ρ₀ through ρ₀ = ħ/(2πα m_Pl c).
///
/// In SI this is the true Planck mass; in dimensionless mode it is the
/// value that keeps ρ₀/λ₀ = m/(2πα m_Pl).
pub fn effective_planck_mass(ctx: &UnitContext) -> Result<f64> {
    match ctx.mode {
        UnitMode::Si => planck_mass(ctx),
        UnitMode::Dimensionless => Ok(ctx.hbar() / (TAU * ctx.alpha * rho0(ctx)? * ctx.c())),
    }
}

/// Reduced Compton wavelength λ₀ = ħ/(mc).
pub fn rest_wavelength(ctx: &UnitContext, mass: f64) -> Result<f64> {
    if !(mass.is_finite() && mass > 0.0) {
        return Err(Error::invalid(
            "mass",
            format!("must be positive, got {mass}"),
        ));
    }
    Ok(ctx.hbar() / (mass * ctx.c()))
}

/// Derived scales reported by the `constants` command.
#[derive(Debug, Clone, Serialize)]
pub struct ConstantsReport {
    pub c: f64,
    pub hbar: f64,
    #[serde(rename = "G")]
    pub g: f64,
    pub avogadro: f64,
    pub nucleon_mass: f64,
    pub alpha: f64,
    pub a_max: f64,
    pub rho0: f64,
    pub planck_mass: f64,
}

impl ConstantsReport {
    pub fn new(ctx: &UnitContext) -> Result<Self> {
        ctx.validate()?;
        let k = ctx.constants;
        Ok(Self {
            c: k.c,
            hbar: k.hbar,
            g: k.g,
            avogadro: k.avogadro,
            nucleon_mass: k.nucleon_mass,
            alpha: ctx.alpha,
            a_max: max_proper_acceleration(ctx)?,
            rho0: rho0(ctx)?,
            planck_mass: planck_mass(ctx)?,
        })
    }
}
