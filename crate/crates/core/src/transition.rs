//! Macroscopic suppression: the many-body state of N uncorrelated nucleons
//! at rest is bounded by a product of N single-particle factors, so its log
//! magnitude scales linearly with N.
//!
//! Magnitudes are only ever stored as ln and log10; e^{-7379} underflows
//! every float format.

use std::f64::consts::{LN_10, TAU};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::units::{planck_mass, UnitContext};

/// ln|ψ| = −3 ln 10, i.e. |ψ| < 10⁻³.
pub const DEFAULT_LN_CUTOFF: f64 = -3.0 * LN_10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ObjectModel {
    pub n_nucleons: f64,
    pub nucleon_mass: f64,
    /// |a|/a of the object's constituents.
    pub accel_ratio: f64,
    pub alpha: f64,
}

impl ObjectModel {
    /// Template with the nucleon mass and α of the context, at rest.
    pub fn from_context(ctx: &UnitContext, n_nucleons: f64) -> Self {
        Self {
            n_nucleons,
            nucleon_mass: ctx.constants.nucleon_mass,
            accel_ratio: 0.0,
            alpha: ctx.alpha,
        }
    }

    pub fn mass(&self) -> f64 {
        self.n_nucleons * self.nucleon_mass
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.n_nucleons.is_finite() && self.n_nucleons >= 1.0) {
            return Err(Error::invalid(
                "n_nucleons",
                format!("must be at least 1, got {}", self.n_nucleons),
            ));
        }
        if !(self.nucleon_mass.is_finite() && self.nucleon_mass > 0.0) {
            return Err(Error::invalid(
                "nucleon_mass",
                format!("must be positive, got {}", self.nucleon_mass),
            ));
        }
        validate_shape(self.accel_ratio, self.alpha)
    }
}

fn validate_shape(accel_ratio: f64, alpha: f64) -> Result<()> {
    if !(accel_ratio.is_finite() && accel_ratio >= 0.0) {
        return Err(Error::invalid(
            "accel_ratio",
            format!("must be non-negative, got {accel_ratio}"),
        ));
    }
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::invalid(
            "alpha",
            format!("must be positive, got {alpha}"),
        ));
    }
    Ok(())
}

/// ln|ψ| = −(1/2πα)(m/m_Pl)(1 + (|a|/a)²)^{1/2} for a device at rest
/// relative to a particle of mass `mass`, with unit normalization. The
/// plane-wave phase has unit modulus and is not included.
pub fn rest_state_ln_magnitude(
    mass: f64,
    accel_ratio: f64,
    alpha: f64,
    ctx: &UnitContext,
) -> Result<f64> {
    if !(mass.is_finite() && mass > 0.0) {
        return Err(Error::invalid(
            "mass",
            format!("must be positive, got {mass}"),
        ));
    }
    validate_shape(accel_ratio, alpha)?;
    let m_pl = planck_mass(ctx)?;
    Ok(-(mass / m_pl) * accel_ratio.hypot(1.0) / (TAU * alpha))
}

/// ln of the many-body bound A′exp(−(1/2πα) N (m_n/m_Pl)(1 + (|a|/a)²)^{1/2})
/// with A′ = 1, computed as N times the single-nucleon exponent.
pub fn macro_state_ln_bound(obj: &ObjectModel, ctx: &UnitContext) -> Result<f64> {
    obj.validate()?;
    let per_nucleon = rest_state_ln_magnitude(obj.nucleon_mass, obj.accel_ratio, obj.alpha, ctx)?;
    Ok(obj.n_nucleons * per_nucleon)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    Log,
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveSample {
    pub n_nucleons: f64,
    pub mass_kg: f64,
    pub ln_magnitude: f64,
    pub log10_magnitude: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransitionCurve {
    pub samples: Vec<CurveSample>,
    pub alpha: f64,
    pub accel_ratio: f64,
}

fn grid(n_min: f64, n_max: f64, points: usize, spacing: Spacing) -> Vec<f64> {
    let last = (points - 1) as f64;
    let mut ns: Vec<f64> = (0..points)
        .map(|i| {
            let t = i as f64 / last;
            match spacing {
                Spacing::Linear => n_min + t * (n_max - n_min),
                Spacing::Log => {
                    let (lo, hi) = (n_min.log10(), n_max.log10());
                    10f64.powf(lo + t * (hi - lo))
                }
            }
        })
        .collect();
    ns[0] = n_min;
    ns[points - 1] = n_max;
    ns
}

/// Samples the many-body bound on an n-grid; the curve is strictly
/// decreasing in n.
pub fn transition_curve(
    n_min: f64,
    n_max: f64,
    points: usize,
    spacing: Spacing,
    template: &ObjectModel,
    ctx: &UnitContext,
) -> Result<TransitionCurve> {
    if !(n_min.is_finite() && n_max.is_finite() && 1.0 <= n_min && n_min < n_max) {
        return Err(Error::invalid(
            "n_range",
            format!("need 1 <= n_min < n_max, got [{n_min}, {n_max}]"),
        ));
    }
    if points < 2 {
        return Err(Error::invalid(
            "points",
            format!("need at least 2, got {points}"),
        ));
    }
    let ns = grid(n_min, n_max, points, spacing);
    if ns.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid(
            "points",
            "grid is too fine to be strictly increasing in f64",
        ));
    }
    let mut samples = Vec::with_capacity(points);
    for n in ns {
        let obj = ObjectModel {
            n_nucleons: n,
            ..*template
        };
        let ln = macro_state_ln_bound(&obj, ctx)?;
        samples.push(CurveSample {
            n_nucleons: n,
            mass_kg: obj.mass(),
            ln_magnitude: ln,
            log10_magnitude: ln / LN_10,
        });
    }
    Ok(TransitionCurve {
        samples,
        alpha: template.alpha,
        accel_ratio: template.accel_ratio,
    })
}

/// Nucleon count n* at which the bound reaches `ln_cutoff`:
/// n* = ln_cutoff / (per-nucleon exponent).
pub fn classicality_threshold(
    template: &ObjectModel,
    ctx: &UnitContext,
    ln_cutoff: f64,
) -> Result<f64> {
    if !(ln_cutoff.is_finite() && ln_cutoff < 0.0) {
        return Err(Error::invalid(
            "ln_cutoff",
            format!("must be negative, got {ln_cutoff}"),
        ));
    }
    let per_nucleon = rest_state_ln_magnitude(
        template.nucleon_mass,
        template.accel_ratio,
        template.alpha,
        ctx,
    )?;
    if per_nucleon == 0.0 {
        return Err(Error::invalid(
            "nucleon_mass",
            "per-nucleon exponent is zero",
        ));
    }
    Ok(ln_cutoff / per_nucleon)
}
