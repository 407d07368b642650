//! Uniform linear array geometry, near-field steering vectors, LoS channels
//! and the bounded additive CSI error model.
//!
//! The array lies on the y axis centered at the origin; element `n`
//! (1-based) sits at `y_n = (2n - N - 1) d / 2`. A point `(r, theta)` is at
//! distance `r_n = sqrt(r^2 + y_n^2 - 2 r y_n sin(theta))` from element `n`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type CVector = DVector<Complex64>;
pub type CMatrix = DMatrix<Complex64>;

#[derive(Debug, Clone, PartialEq)]
pub struct ArrayGeometry {
    antenna_count: usize,
    wavelength: f64,
    spacing: f64,
    pathloss_exponent: f64,
    reference_pathloss: f64,
}

impl ArrayGeometry {
    /// Half-wavelength ULA with pathloss exponent 2 and reference pathloss
    /// `lambda / (4 pi)`.
    pub fn new(antenna_count: usize, wavelength: f64) -> Result<Self> {
        let g = Self {
            antenna_count,
            wavelength,
            spacing: wavelength / 2.0,
            pathloss_exponent: 2.0,
            reference_pathloss: wavelength / (4.0 * PI),
        };
        g.validate()?;
        Ok(g)
    }

    pub fn from_frequency(antenna_count: usize, frequency_hz: f64) -> Result<Self> {
        if !(frequency_hz.is_finite() && frequency_hz > 0.0) {
            return Err(Error::invalid(format!("frequency must be positive, got {frequency_hz}")));
        }
        Self::new(antenna_count, crate::units::wavelength(frequency_hz))
    }

    pub fn with_spacing(mut self, spacing: f64) -> Result<Self> {
        self.spacing = spacing;
        self.validate()?;
        Ok(self)
    }

    pub fn with_pathloss_exponent(mut self, alpha: f64) -> Result<Self> {
        self.pathloss_exponent = alpha;
        self.validate()?;
        Ok(self)
    }

    /// Overrides the printed `lambda / (4 pi)` reference pathloss, e.g. with
    /// the free-space `(lambda / (4 pi))^2`.
    pub fn with_reference_pathloss(mut self, rho0: f64) -> Result<Self> {
        self.reference_pathloss = rho0;
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::invalid(format!("{name} must be positive, got {v}")))
            }
        };
        if self.antenna_count == 0 {
            return Err(Error::invalid("antenna count must be at least 1"));
        }
        positive("wavelength", self.wavelength)?;
        positive("spacing", self.spacing)?;
        positive("pathloss exponent", self.pathloss_exponent)?;
        positive("reference pathloss", self.reference_pathloss)
    }

    pub fn antenna_count(&self) -> usize {
        self.antenna_count
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn pathloss_exponent(&self) -> f64 {
        self.pathloss_exponent
    }

    pub fn reference_pathloss(&self) -> f64 {
        self.reference_pathloss
    }

    pub fn aperture(&self) -> f64 {
        (self.antenna_count - 1) as f64 * self.spacing
    }

    /// Large-scale amplitude `sqrt(rho0 r^-alpha)`.
    pub fn pathloss_amplitude(&self, range: f64) -> f64 {
        (self.reference_pathloss * range.powf(-self.pathloss_exponent)).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarPoint {
    pub range: f64,
    pub angle: f64,
}

impl PolarPoint {
    pub fn new(range: f64, angle: f64) -> Result<Self> {
        if !(range.is_finite() && range > 0.0) {
            return Err(Error::invalid(format!("range must be positive, got {range}")));
        }
        if !(angle.is_finite() && angle.abs() <= PI / 2.0) {
            return Err(Error::invalid(format!("angle must lie in [-pi/2, pi/2], got {angle}")));
        }
        Ok(Self { range, angle })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CsiEstimate {
    pub estimate: CVector,
    pub error_bound: f64,
}

impl CsiEstimate {
    pub fn new(estimate: CVector, error_bound: f64) -> Result<Self> {
        if !(error_bound.is_finite() && error_bound >= 0.0) {
            return Err(Error::invalid(format!("error bound must be nonnegative, got {error_bound}")));
        }
        Ok(Self { estimate, error_bound })
    }

    /// Perfectly known channel.
    pub fn exact(estimate: CVector) -> Self {
        Self {
            estimate,
            error_bound: 0.0,
        }
    }

    pub fn len(&self) -> usize {
        self.estimate.len()
    }

    pub fn is_empty(&self) -> bool {
        self.estimate.is_empty()
    }
}

/// Element coordinates along the array axis, meters.
pub fn element_positions(geom: &ArrayGeometry) -> Vec<f64> {
    let n = geom.antenna_count as f64;
    (1..=geom.antenna_count)
        .map(|i| (2.0 * i as f64 - n - 1.0) / 2.0 * geom.spacing)
        .collect()
}

/// Distance from element `n` (1-based) to `p`.
pub fn element_distance(geom: &ArrayGeometry, p: PolarPoint, n: usize) -> Result<f64> {
    if n == 0 || n > geom.antenna_count {
        return Err(Error::invalid(format!(
            "element index {n} outside 1..={}",
            geom.antenna_count
        )));
    }
    Ok(distance_unchecked(geom, p, n))
}

fn distance_unchecked(geom: &ArrayGeometry, p: PolarPoint, n: usize) -> f64 {
    let big_n = geom.antenna_count as f64;
    let m = -big_n - 1.0 + 2.0 * n as f64;
    let d = geom.spacing;
    let r = p.range;
    (r * r + m * m * d * d / 4.0 - m * r * d * p.angle.sin()).sqrt()
}

/// Near-field steering vector with entries `exp(-j 2 pi r_n / lambda)`.
pub fn steering_vector(geom: &ArrayGeometry, p: PolarPoint) -> CVector {
    let k = 2.0 * PI / geom.wavelength;
    CVector::from_iterator(
        geom.antenna_count,
        (1..=geom.antenna_count).map(|n| Complex64::from_polar(1.0, -k * distance_unchecked(geom, p, n))),
    )
}

/// Planar-wavefront steering vector with entries `exp(j 2 pi y_n sin(theta) / lambda)`.
pub fn far_field_steering(geom: &ArrayGeometry, angle: f64) -> CVector {
    let k = 2.0 * PI / geom.wavelength;
    let s = angle.sin();
    CVector::from_iterator(
        geom.antenna_count,
        element_positions(geom)
            .into_iter()
            .map(|y| Complex64::from_polar(1.0, k * y * s)),
    )
}

/// LoS channel `sqrt(rho0 r^-alpha) a(r, theta)`.
pub fn channel(geom: &ArrayGeometry, p: PolarPoint) -> CVector {
    steering_vector(geom, p) * Complex64::new(geom.pathloss_amplitude(p.range), 0.0)
}

/// Channel with the same pathloss but planar-wavefront phases.
pub fn far_field_channel(geom: &ArrayGeometry, p: PolarPoint) -> CVector {
    far_field_steering(geom, p.angle) * Complex64::new(geom.pathloss_amplitude(p.range), 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionBounds {
    pub fresnel: f64,
    pub rayleigh: f64,
}

impl RegionBounds {
    pub fn contains(&self, range: f64) -> bool {
        self.fresnel <= range && range <= self.rayleigh
    }
}

/// Fresnel `0.5 sqrt(D^3 / lambda)` and Rayleigh `2 D^2 / lambda` distances.
pub fn region_bounds(geom: &ArrayGeometry) -> RegionBounds {
    let d = geom.aperture();
    RegionBounds {
        fresnel: 0.5 * (d.powi(3) / geom.wavelength).sqrt(),
        rayleigh: 2.0 * d * d / geom.wavelength,
    }
}

/// Error bound from a normalized bound: `eta * |h_hat|`.
pub fn normalized_bound(estimate: &CVector, eta: f64) -> f64 {
    eta * estimate.norm()
}

fn unit_direction<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CVector {
    loop {
        let v = CVector::from_iterator(
            n,
            (0..n).map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))),
        );
        let norm = v.norm();
        if norm > 1e-300 {
            return v.unscale(norm);
        }
    }
}

fn clamp_norm(mut v: CVector, bound: f64) -> CVector {
    while v.norm() > bound {
        v *= Complex64::new(1.0 - f64::EPSILON, 0.0);
    }
    v
}

/// Error sample on the sphere of radius `radius_fraction * eps` (uniform
/// direction). `radius_fraction = 1` gives boundary samples, where robust
/// constraint violations concentrate.
pub fn sample_error<R: Rng + ?Sized>(n: usize, eps: f64, radius_fraction: f64, rng: &mut R) -> CVector {
    assert!(eps >= 0.0, "error bound must be nonnegative");
    assert!((0.0..=1.0).contains(&radius_fraction), "radius fraction must lie in [0, 1]");
    let dir = unit_direction(n, rng);
    if eps == 0.0 || radius_fraction == 0.0 {
        return CVector::zeros(n);
    }
    clamp_norm(dir * Complex64::new(eps * radius_fraction, 0.0), eps)
}

/// Error sample uniform in the ball of radius `eps` (complex dimension `n`,
/// real dimension `2n`).
pub fn sample_error_in_ball<R: Rng + ?Sized>(n: usize, eps: f64, rng: &mut R) -> CVector {
    let u: f64 = rng.random();
    sample_error(n, eps, u.powf(1.0 / (2 * n) as f64), rng)
}
