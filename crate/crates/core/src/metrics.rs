//! Nominal (fixed-channel) performance of a candidate design: transmit
//! power, SINRs and beampattern gain. Everything is computed from the
//! covariances so rank > 1 designs stay evaluable.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::geometry::{channel, ArrayGeometry, CMatrix, CVector, PolarPoint};

#[derive(Debug, Clone, PartialEq)]
pub struct BeamformingSolution {
    /// Communication covariances `W_k`.
    pub comm: Vec<CMatrix>,
    /// Beamformers `w_k` with `W_k ~ w_k w_k^H`, when extracted.
    pub vectors: Option<Vec<CVector>>,
    /// Dedicated sensing covariance `R0`.
    pub sensing: CMatrix,
    /// Achieved minimum beampattern gain, watts.
    pub objective: f64,
    /// S-procedure multipliers ordered users, then eavesdropper/user pairs
    /// (eavesdropper-major), then targets. Empty when not available.
    pub multipliers: Vec<f64>,
}

impl BeamformingSolution {
    pub fn zeros(n: usize, k: usize) -> Self {
        Self {
            comm: vec![CMatrix::zeros(n, n); k],
            vectors: None,
            sensing: CMatrix::zeros(n, n),
            objective: 0.0,
            multipliers: Vec::new(),
        }
    }

    pub fn antenna_count(&self) -> usize {
        self.sensing.nrows()
    }

    /// `sum_k W_k + R0`.
    pub fn total_covariance(&self) -> CMatrix {
        let mut psi = self.sensing.clone();
        for w in &self.comm {
            psi += w;
        }
        hermitian_part(&psi)
    }

    /// Interference-plus-sensing covariance seen by user `k`:
    /// `sum_{i != k} W_i + R0`.
    pub fn interference_covariance(&self, k: usize) -> CMatrix {
        let mut out = self.sensing.clone();
        for (i, w) in self.comm.iter().enumerate() {
            if i != k {
                out += w;
            }
        }
        hermitian_part(&out)
    }

    /// Scales every covariance (and the objective) by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        let s = num_complex::Complex64::new(c, 0.0);
        Self {
            comm: self.comm.iter().map(|w| w * s).collect(),
            vectors: self
                .vectors
                .as_ref()
                .map(|v| v.iter().map(|w| w * num_complex::Complex64::new(c.sqrt(), 0.0)).collect()),
            sensing: &self.sensing * s,
            objective: self.objective * c,
            multipliers: self.multipliers.clone(),
        }
    }
}

pub fn hermitian_part(a: &CMatrix) -> CMatrix {
    (a + a.adjoint()) * num_complex::Complex64::new(0.5, 0.0)
}

/// `Re(h^H A h)` after symmetrizing `A`.
pub fn quad_form(a: &CMatrix, h: &CVector) -> f64 {
    let sym = hermitian_part(a);
    h.dotc(&(sym * h)).re
}

pub fn total_power(sol: &BeamformingSolution) -> f64 {
    sol.comm.iter().map(|w| w.trace().re).sum::<f64>() + sol.sensing.trace().re
}

fn check_noise(noise: f64) -> Result<()> {
    if noise.is_finite() && noise > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("noise power must be positive, got {noise}")))
    }
}

fn sinr(sol: &BeamformingSolution, h: &CVector, k: usize, noise: f64) -> Result<f64> {
    check_noise(noise)?;
    if k >= sol.comm.len() {
        return Err(Error::invalid(format!("user index {k} out of range")));
    }
    if h.len() != sol.antenna_count() {
        return Err(Error::invalid("channel length does not match the array"));
    }
    let signal = quad_form(&sol.comm[k], h).max(0.0);
    let interference = quad_form(&sol.interference_covariance(k), h).max(0.0);
    Ok(signal / (interference + noise))
}

/// SINR of user `k` on channel `h`.
pub fn nominal_cu_sinr(sol: &BeamformingSolution, h: &CVector, k: usize, noise: f64) -> Result<f64> {
    sinr(sol, h, k, noise)
}

/// SINR an eavesdropper with channel `h` achieves on user `k`'s stream.
pub fn nominal_eve_sinr(sol: &BeamformingSolution, h: &CVector, k: usize, noise: f64) -> Result<f64> {
    sinr(sol, h, k, noise)
}

/// `h^H (sum_k W_k + R0) h`.
pub fn beampattern_gain(sol: &BeamformingSolution, h: &CVector) -> f64 {
    quad_form(&sol.total_covariance(), h).max(0.0)
}

/// Beampattern over a polar grid: rows follow `ranges`, columns `angles`.
pub fn beampattern_map(
    sol: &BeamformingSolution,
    geom: &ArrayGeometry,
    ranges: &[f64],
    angles: &[f64],
) -> Result<DMatrix<f64>> {
    if ranges.is_empty() || angles.is_empty() {
        return Err(Error::invalid("beampattern grid must be nonempty"));
    }
    let psi = sol.total_covariance();
    let mut out = DMatrix::zeros(ranges.len(), angles.len());
    for (i, &r) in ranges.iter().enumerate() {
        for (j, &a) in angles.iter().enumerate() {
            let h = channel(geom, PolarPoint::new(r, a)?);
            out[(i, j)] = h.dotc(&(&psi * &h)).re.max(0.0);
        }
    }
    Ok(out)
}

/// C-style `%.9e` formatting (two-digit minimum exponent with sign).
pub fn format_sci(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let s = format!("{x:.9e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent digits");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

/// Beampattern map as CSV: header row of angles (radians) after an `r_m\theta_rad`
/// corner cell, then one row per range with the range in the first column.
pub fn beampattern_csv(map: &DMatrix<f64>, ranges: &[f64], angles: &[f64]) -> String {
    let mut s = String::from("r_m\\theta_rad");
    for &a in angles {
        s.push(',');
        s.push_str(&format_sci(a));
    }
    s.push('\n');
    for (i, &r) in ranges.iter().enumerate() {
        s.push_str(&format_sci(r));
        for j in 0..angles.len() {
            s.push(',');
            s.push_str(&format_sci(map[(i, j)]));
        }
        s.push('\n');
    }
    s
}
