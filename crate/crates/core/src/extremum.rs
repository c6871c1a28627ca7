//! Lower bound on (a·v)/a: minimization of
//! F(x) = (1 + x²)^{1/2} − βx cosθ over x = |a|/a ≥ 0,
//! together with a brute-force grid oracle.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::kinematics::{DeviceState, ParticleKinematics, SUBLUMINAL_MARGIN};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundScenario {
    /// Device speed over c, in [0, 1).
    pub beta: f64,
    /// Angle between the spatial acceleration and the device velocity.
    pub theta: f64,
    /// |a|/a, non-negative.
    pub x: f64,
}

impl BoundScenario {
    pub fn new(beta: f64, theta: f64, x: f64) -> Result<Self> {
        validate_beta(beta)?;
        if !(x.is_finite() && x >= 0.0) {
            return Err(Error::invalid(
                "x",
                format!("must be non-negative, got {x}"),
            ));
        }
        Ok(Self { beta, theta, x })
    }

    /// Extracts (β, θ, |a|/a) from particle and device parameters.
    ///
    /// When either spatial vector vanishes the angle is immaterial and
    /// θ = π/2 is used.
    pub fn from_kinematics(part: &ParticleKinematics, dev: &DeviceState, c: f64) -> Result<Self> {
        part.validate()?;
        let beta = dev.beta(c)?;
        let a_norm = part.accel3.norm();
        let u_norm = dev.velocity3.norm();
        let theta = if a_norm > 0.0 && u_norm > 0.0 {
            (part.accel3.dot(dev.velocity3) / (a_norm * u_norm))
                .clamp(-1.0, 1.0)
                .acos()
        } else {
            std::f64::consts::FRAC_PI_2
        };
        Self::new(beta, theta, a_norm / part.proper_accel)
    }

    pub fn gamma(&self) -> f64 {
        1.0 / (1.0 - self.beta * self.beta).sqrt()
    }
}

fn validate_beta(beta: f64) -> Result<()> {
    if !(beta.is_finite() && (0.0..1.0).contains(&beta)) {
        return Err(Error::invalid(
            "beta",
            format!("must lie in [0, 1), got {beta}"),
        ));
    }
    Ok(())
}

/// F(x) evaluated at the scenario.
///
/// For cosθ > 0 the difference is rewritten as
/// (1 + x²(1 − β²cos²θ)) / ((1 + x²)^{1/2} + βx cosθ), which has no
/// cancellation near the minimum.
pub fn f_of_x(s: &BoundScenario) -> f64 {
    f_at(s.beta, s.theta, s.x)
}

pub(crate) fn f_at(beta: f64, theta: f64, x: f64) -> f64 {
    let bc = beta * theta.cos();
    let root = x.hypot(1.0);
    if bc > 0.0 {
        (1.0 + x * x * (1.0 - bc * bc)) / (root + bc * x)
    } else {
        root - bc * x
    }
}

/// Minimizer of F over x ≥ 0; the stationary point when cosθ > 0, else 0.
pub fn x_min(beta: f64, theta: f64) -> f64 {
    let bc = beta * theta.cos();
    if bc > 0.0 {
        bc / (1.0 - bc * bc).sqrt()
    } else {
        0.0
    }
}

/// min over x ≥ 0 of F: (1 − β²cos²θ)^{1/2} when cosθ > 0, else F(0) = 1.
pub fn f_min(beta: f64, theta: f64) -> f64 {
    let bc = beta * theta.cos();
    if bc > 0.0 {
        (1.0 - bc * bc).sqrt()
    } else {
        1.0
    }
}

/// ((1 − β²cos²θ)/(1 − β²))^{1/2}, never below 1.
///
/// Equal to γ·F_min when cosθ ≥ 0. For cosθ < 0 the true minimum γ·F(0) = γ
/// is larger, so the expression is still a valid lower bound.
pub fn ratio_lower_bound(beta: f64, theta: f64) -> f64 {
    let bc = beta * theta.cos();
    ((1.0 - bc * bc) / (1.0 - beta * beta)).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub x_hi: f64,
    pub points: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            x_hi: 10.0,
            points: 100_001,
        }
    }
}

impl GridSpec {
    pub fn spacing(&self) -> f64 {
        self.x_hi / (self.points - 1) as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridMinimum {
    pub x_at_min: f64,
    pub f_at_min: f64,
}

/// Scans F on `grid.points` equally spaced x in [0, x_hi] and returns the
/// smallest sample, ties going to the smaller x.
pub fn brute_force_min(beta: f64, theta: f64, grid: GridSpec) -> Result<GridMinimum> {
    validate_beta(beta)?;
    if !(grid.x_hi.is_finite() && grid.x_hi >= 10.0) {
        return Err(Error::invalid(
            "x_hi",
            format!("grid must reach x >= 10, got {}", grid.x_hi),
        ));
    }
    if grid.points < 100_000 {
        return Err(Error::invalid(
            "points",
            format!("need at least 1e5 grid points, got {}", grid.points),
        ));
    }
    let dx = grid.spacing();
    let mut best = GridMinimum {
        x_at_min: 0.0,
        f_at_min: f_at(beta, theta, 0.0),
    };
    for i in 1..grid.points {
        let x = i as f64 * dx;
        let f = f_at(beta, theta, x);
        if f < best.f_at_min {
            best = GridMinimum {
                x_at_min: x,
                f_at_min: f,
            };
        }
    }
    Ok(best)
}

/// One sample that failed the bound chain γF(x) ≥ bound ≥ 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation {
    pub scenario: BoundScenario,
    pub gamma_f: f64,
    pub bound: f64,
}

/// Checks γF(x) ≥ bound − tol·max(1, bound) and bound ≥ 1 − tol.
pub fn check_bound(s: &BoundScenario, tolerance: f64) -> Option<Violation> {
    let gamma_f = s.gamma() * f_of_x(s);
    let bound = ratio_lower_bound(s.beta, s.theta);
    let slack = tolerance * bound.max(1.0);
    if gamma_f < bound - slack || bound < 1.0 - tolerance {
        Some(Violation {
            scenario: *s,
            gamma_f,
            bound,
        })
    } else {
        None
    }
}

/// Upper end of the sampled |a|/a range.
pub const SCAN_X_MAX: f64 = 10.0;

#[derive(Debug, Clone, PartialEq)]
pub struct ScanResult {
    pub samples: usize,
    pub violations: Vec<Violation>,
}

/// Checks the bound chain on `samples` seeded draws of β ∈ [0, 1 − margin),
/// θ ∈ [0, π], x ∈ [0, 10). Violations keep draw order.
pub fn inequality_scan(samples: usize, seed: u64, tolerance: f64) -> Result<ScanResult> {
    if samples == 0 {
        return Err(Error::invalid("samples", "must be at least 1"));
    }
    if !(tolerance.is_finite() && tolerance >= 0.0) {
        return Err(Error::invalid(
            "tolerance",
            format!("must be non-negative, got {tolerance}"),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = Vec::new();
    for _ in 0..samples {
        let beta = rng.random_range(0.0..1.0 - SUBLUMINAL_MARGIN);
        let theta = rng.random_range(0.0..=std::f64::consts::PI);
        let x = rng.random_range(0.0..SCAN_X_MAX);
        if let Some(v) = check_bound(&BoundScenario::new(beta, theta, x)?, tolerance) {
            violations.push(v);
        }
    }
    Ok(ScanResult {
        samples,
        violations,
    })
}
