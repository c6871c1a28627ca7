//! Four-vectors under signature (+,−,−,−) and the kinematic quantities built
//! from device and particle parameters.

use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

use crate::error::{Error, Result};

/// Device speeds within this fraction of c are rejected.
pub const SUBLUMINAL_MARGIN: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct ThreeVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl ThreeVector {
    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn dot(self, other: Self) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn norm_sqr(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

impl From<[f64; 3]> for ThreeVector {
    fn from(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }
}

impl Add for ThreeVector {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for ThreeVector {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for ThreeVector {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self::new(self.x * s, self.y * s, self.z * s)
    }
}

/// A contravariant four-vector (t, x, y, z); the time component comes first.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct FourVector {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl FourVector {
    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0, 0.0);

    pub const fn new(t: f64, x: f64, y: f64, z: f64) -> Self {
        Self { t, x, y, z }
    }

    pub fn from_parts(t: f64, space: ThreeVector) -> Self {
        Self::new(t, space.x, space.y, space.z)
    }

    /// Unit vector along coordinate `axis` (0 = time).
    pub fn basis(axis: usize) -> Self {
        let mut c = [0.0; 4];
        c[axis] = 1.0;
        Self::from(c)
    }

    pub fn spatial(self) -> ThreeVector {
        ThreeVector::new(self.x, self.y, self.z)
    }

    pub fn dot(self, other: Self) -> f64 {
        minkowski_dot(self, other)
    }

    pub fn norm_sqr(self) -> f64 {
        self.dot(self)
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.t, self.x, self.y, self.z]
    }
}

impl From<[f64; 4]> for FourVector {
    fn from(a: [f64; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }
}

impl Add for FourVector {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.t + o.t, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for FourVector {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.t - o.t, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for FourVector {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.t, -self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for FourVector {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self::new(self.t * s, self.x * s, self.y * s, self.z * s)
    }
}

/// Diagonal of the metric, η = diag(+1, −1, −1, −1).
pub const METRIC: [f64; 4] = [1.0, -1.0, -1.0, -1.0];

pub fn minkowski_dot(u: FourVector, w: FourVector) -> f64 {
    u.t * w.t - u.x * w.x - u.y * w.y - u.z * w.z
}

/// Measuring device: spacetime position (t-component = ct) and the
/// ordinary velocity dx/dt relative to the particle.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DeviceState {
    pub position: FourVector,
    pub velocity3: ThreeVector,
}

impl DeviceState {
    pub fn at_rest() -> Self {
        Self::default()
    }

    pub fn moving(velocity3: ThreeVector) -> Self {
        Self {
            position: FourVector::ZERO,
            velocity3,
        }
    }

    /// β = |u|/c, rejecting speeds within [`SUBLUMINAL_MARGIN`] of c.
    pub fn beta(&self, c: f64) -> Result<f64> {
        let beta = self.velocity3.norm() / c;
        if !beta.is_finite() || beta >= 1.0 - SUBLUMINAL_MARGIN {
            return Err(Error::Superluminal { beta });
        }
        Ok(beta)
    }

    pub fn gamma(&self, c: f64) -> Result<f64> {
        let beta = self.beta(c)?;
        Ok(1.0 / (1.0 - beta * beta).sqrt())
    }
}

/// Particle parameters: the four-acceleration is given by its proper
/// magnitude and spatial part, with the time component derived.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParticleKinematics {
    pub mass: f64,
    pub momentum3: ThreeVector,
    pub proper_accel: f64,
    pub accel3: ThreeVector,
}

impl ParticleKinematics {
    pub fn at_rest(mass: f64) -> Self {
        Self {
            mass,
            momentum3: ThreeVector::ZERO,
            proper_accel: 1.0,
            accel3: ThreeVector::ZERO,
        }
    }

    fn validate_mass(&self) -> Result<()> {
        if !(self.mass.is_finite() && self.mass > 0.0) {
            return Err(Error::invalid(
                "mass",
                format!("must be positive, got {}", self.mass),
            ));
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.validate_mass()?;
        if !(self.proper_accel.is_finite() && self.proper_accel > 0.0) {
            return Err(Error::NonPositiveAcceleration(self.proper_accel));
        }
        Ok(())
    }

    /// |a|/a, the spatial-to-proper acceleration ratio.
    pub fn accel_ratio(&self) -> f64 {
        self.accel3.norm() / self.proper_accel
    }
}

/// v^μ = (γ, γu/c), dimensionless.
pub fn four_velocity(dev: &DeviceState, c: f64) -> Result<FourVector> {
    let gamma = dev.gamma(c)?;
    Ok(FourVector::from_parts(gamma, dev.velocity3 * (gamma / c)))
}

/// a^μ = ((a² + |a|²)^{1/2}, a).
pub fn four_acceleration(part: &ParticleKinematics) -> Result<FourVector> {
    let a = part.proper_accel;
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::NonPositiveAcceleration(a));
    }
    let a0 = a.hypot(part.accel3.norm());
    Ok(FourVector::from_parts(a0, part.accel3))
}

/// n^μ = a^μ/a.
pub fn unit_acceleration(part: &ParticleKinematics) -> Result<FourVector> {
    Ok(four_acceleration(part)? * (1.0 / part.proper_accel))
}

/// p^μ = ((m²c² + |p|²)^{1/2}, p).
pub fn four_momentum(part: &ParticleKinematics, c: f64) -> Result<FourVector> {
    part.validate_mass()?;
    let p0 = (part.mass * c).hypot(part.momentum3.norm());
    Ok(FourVector::from_parts(p0, part.momentum3))
}

/// (a·v)/a for the particle four-acceleration and device four-velocity,
/// evaluated as a Minkowski contraction. Bounded below by 1.
pub fn accel_velocity_ratio(part: &ParticleKinematics, dev: &DeviceState, c: f64) -> Result<f64> {
    let a = four_acceleration(part)?;
    let v = four_velocity(dev, c)?;
    Ok(a.dot(v) / part.proper_accel)
}

/// dσ² = dx·dx + ρ₀² dv·dv on the spacetime/four-velocity tangent bundle.
pub fn line_element_8d(dx: FourVector, dv: FourVector, rho0: f64) -> f64 {
    dx.norm_sqr() + rho0 * rho0 * dv.norm_sqr()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_unit(rng: &mut ChaCha8Rng) -> ThreeVector {
        let z: f64 = rng.random_range(-1.0..1.0);
        let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        let r = (1.0 - z * z).sqrt();
        ThreeVector::new(r * phi.cos(), r * phi.sin(), z)
    }

    #[test]
    fn dot_signature() {
        let e0 = FourVector::new(1.0, 0.0, 0.0, 0.0);
        let e1 = FourVector::new(0.0, 1.0, 0.0, 0.0);
        let null = FourVector::new(1.0, 1.0, 0.0, 0.0);
        assert_eq!(minkowski_dot(e0, e0), 1.0);
        assert_eq!(minkowski_dot(e1, e1), -1.0);
        assert_eq!(minkowski_dot(null, null), 0.0);
        for (mu, eta) in METRIC.iter().enumerate() {
            assert_eq!(FourVector::basis(mu).norm_sqr(), *eta);
        }
    }

    #[test]
    fn four_velocity_cases() {
        let c = 2.998e8;
        assert_eq!(
            four_velocity(&DeviceState::at_rest(), c).unwrap(),
            FourVector::new(1.0, 0.0, 0.0, 0.0)
        );
        let v = four_velocity(&DeviceState::moving(ThreeVector::new(0.6, 0.0, 0.0)), 1.0).unwrap();
        assert!((v.t - 1.25).abs() < 1e-15 && (v.x - 0.75).abs() < 1e-15);
        assert!(four_velocity(&DeviceState::moving(ThreeVector::new(1.0, 0.0, 0.0)), 1.0).is_err());
        assert!(four_velocity(
            &DeviceState::moving(ThreeVector::new(1.0 - 1e-13, 0.0, 0.0)),
            1.0
        )
        .is_err());
        assert!(
            four_velocity(&DeviceState::moving(ThreeVector::new(0.0, 2.0 * c, 0.0)), c).is_err()
        );
    }

    #[test]
    fn four_velocity_normalized() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let c = 2.998e8;
        for _ in 0..100_000 {
            let beta: f64 = rng.random_range(0.0..0.999);
            let dev = DeviceState::moving(random_unit(&mut rng) * (beta * c));
            let v = four_velocity(&dev, c).unwrap();
            assert!((v.norm_sqr() - 1.0).abs() < 1e-10, "{v:?}");
        }
    }

    #[test]
    fn four_acceleration_cases() {
        let rest = ParticleKinematics::at_rest(1.0);
        assert_eq!(
            four_acceleration(&rest).unwrap(),
            FourVector::new(1.0, 0.0, 0.0, 0.0)
        );
        let p = ParticleKinematics {
            accel3: ThreeVector::new(0.75, 0.0, 0.0),
            ..rest
        };
        assert_eq!(
            four_acceleration(&p).unwrap(),
            FourVector::new(1.25, 0.75, 0.0, 0.0)
        );
        let bad = ParticleKinematics {
            proper_accel: 0.0,
            ..rest
        };
        assert_eq!(
            four_acceleration(&bad),
            Err(Error::NonPositiveAcceleration(0.0))
        );
    }

    #[test]
    fn four_acceleration_shell() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..100_000 {
            let a: f64 = 10f64.powf(rng.random_range(-3.0..6.0));
            let ratio: f64 = rng.random_range(0.0..10.0);
            let part = ParticleKinematics {
                mass: 1.0,
                momentum3: ThreeVector::ZERO,
                proper_accel: a,
                accel3: random_unit(&mut rng) * (ratio * a),
            };
            let acc = four_acceleration(&part).unwrap();
            assert!(((acc.norm_sqr() - a * a) / (a * a)).abs() < 1e-10);
        }
    }

    #[test]
    fn four_momentum_cases() {
        let rest = ParticleKinematics::at_rest(2.0);
        assert_eq!(
            four_momentum(&rest, 3.0).unwrap(),
            FourVector::new(6.0, 0.0, 0.0, 0.0)
        );
        let p = ParticleKinematics {
            mass: 1.0,
            momentum3: ThreeVector::new(0.3, 0.0, 0.0),
            ..rest
        };
        let k = four_momentum(&p, 1.0).unwrap();
        assert!((k.t - 1.09f64.sqrt()).abs() < 1e-15);
        assert!((k.norm_sqr() - 1.0).abs() < 1e-15);
        assert!(four_momentum(&ParticleKinematics { mass: 0.0, ..p }, 1.0).is_err());
    }

    #[test]
    fn ratio_cases() {
        let rest = ParticleKinematics::at_rest(1.0);
        let dev = DeviceState::at_rest();
        assert_eq!(accel_velocity_ratio(&rest, &dev, 1.0).unwrap(), 1.0);
        let tilted = ParticleKinematics {
            accel3: ThreeVector::new(0.75, 0.0, 0.0),
            ..rest
        };
        assert!((accel_velocity_ratio(&tilted, &dev, 1.0).unwrap() - 1.25).abs() < 1e-15);

        // β = 0.6 aligned with a, |a|/a at the minimizer 0.75: γ·(1−β²)^{1/2} = 1.
        let moving = DeviceState::moving(ThreeVector::new(0.6, 0.0, 0.0));
        assert!((accel_velocity_ratio(&tilted, &moving, 1.0).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn ratio_bounded_below() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..100_000 {
            let part = ParticleKinematics {
                mass: 1.0,
                momentum3: ThreeVector::ZERO,
                proper_accel: rng.random_range(0.1..10.0),
                accel3: random_unit(&mut rng) * rng.random_range(0.0..20.0),
            };
            let dev = DeviceState::moving(random_unit(&mut rng) * rng.random_range(0.0..0.99));
            let r = accel_velocity_ratio(&part, &dev, 1.0).unwrap();
            assert!(r >= 1.0 - 1e-12, "{r}");
        }
    }

    #[test]
    fn line_element_limits() {
        let dx = FourVector::new(2.0, 1.0, 0.5, 0.0);
        assert_eq!(line_element_8d(dx, FourVector::ZERO, 0.3), dx.norm_sqr());
        assert_eq!(
            line_element_8d(FourVector::ZERO, FourVector::new(1.0, 0.0, 0.0, 0.0), 0.5),
            0.25
        );
    }

    /// Hyperbolic worldlines x = (sinh Aτ, cosh Aτ)/A (c = 1), differenced
    /// numerically; dσ² stays non-negative while A·ρ₀ < 1.
    #[test]
    fn line_element_nonnegative_on_accelerated_worldlines() {
        let rho0 = 0.5;
        let a_max = 1.0 / rho0;
        let worldline = |acc: f64, tau: f64| {
            let x = FourVector::new((acc * tau).sinh() / acc, (acc * tau).cosh() / acc, 0.0, 0.0);
            let v = FourVector::new((acc * tau).cosh(), (acc * tau).sinh(), 0.0, 0.0);
            (x, v)
        };
        let dtau = 1e-4;
        for i in 1..50 {
            let acc = a_max * i as f64 / 50.0;
            for j in 0..20 {
                let tau = -1.0 + 0.1 * j as f64;
                let (x0, v0) = worldline(acc, tau);
                let (x1, v1) = worldline(acc, tau + dtau);
                let ds2 = line_element_8d(x1 - x0, v1 - v0, rho0);
                assert!(ds2 >= 0.0, "A = {acc}, tau = {tau}: {ds2}");
                let expected = dtau * dtau * (1.0 - (acc * rho0).powi(2));
                assert!((ds2 - expected).abs() < 1e-3 * dtau * dtau + 1e-16);
            }
        }
        // Beyond a_M the interval turns negative.
        let (x0, v0) = worldline(1.2 * a_max, 0.0);
        let (x1, v1) = worldline(1.2 * a_max, dtau);
        assert!(line_element_8d(x1 - x0, v1 - v0, rho0) < 0.0);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn fv() -> impl Strategy<Value = FourVector> {
            prop::array::uniform4(-100.0f64..100.0).prop_map(FourVector::from)
        }

        proptest! {
            #[test]
            fn dot_symmetric_bilinear(u in fv(), w in fv(), z in fv(), s in -10.0f64..10.0) {
                prop_assert_eq!(minkowski_dot(u, w), minkowski_dot(w, u));
                let lhs = minkowski_dot(u * s + z, w);
                let rhs = s * minkowski_dot(u, w) + minkowski_dot(z, w);
                let scale = 1.0 + (s.abs() * u.to_array().iter().map(|c| c.abs()).sum::<f64>()
                    + z.to_array().iter().map(|c| c.abs()).sum::<f64>())
                    * w.to_array().iter().map(|c| c.abs()).sum::<f64>();
                prop_assert!((lhs - rhs).abs() <= 1e-13 * scale);
            }
        }
    }
}
