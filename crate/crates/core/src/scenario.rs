//! Problem instance: array, communication users, eavesdroppers, sensing
//! targets and the power budget. All powers are linear (watts, ratios).

use crate::error::{Error, Result};
use crate::geometry::{region_bounds, ArrayGeometry, CVector, CsiEstimate, PolarPoint};

#[derive(Debug, Clone, PartialEq)]
pub struct CommUser {
    pub position: PolarPoint,
    pub csi: CsiEstimate,
    pub noise_power: f64,
    pub sinr_threshold: f64,
    /// Channel the estimate was generated from, when known.
    pub truth: Option<CVector>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Eavesdropper {
    pub position: PolarPoint,
    pub csi: CsiEstimate,
    pub noise_power: f64,
    /// Maximum tolerated leakage SINR, one per communication user.
    pub leakage_thresholds: Vec<f64>,
    pub truth: Option<CVector>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Target {
    pub position: PolarPoint,
    pub csi: CsiEstimate,
    pub truth: Option<CVector>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub geometry: ArrayGeometry,
    pub users: Vec<CommUser>,
    pub eavesdroppers: Vec<Eavesdropper>,
    pub targets: Vec<Target>,
    pub power_budget: f64,
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("{name} must be positive, got {v}")))
    }
}

impl Scenario {
    pub fn new(
        geometry: ArrayGeometry,
        users: Vec<CommUser>,
        eavesdroppers: Vec<Eavesdropper>,
        targets: Vec<Target>,
        power_budget: f64,
    ) -> Result<Self> {
        let s = Self {
            geometry,
            users,
            eavesdroppers,
            targets,
            power_budget,
        };
        s.validate()?;
        for w in s.position_warnings() {
            log::warn!("{w}");
        }
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.geometry.antenna_count();
        if self.users.is_empty() {
            return Err(Error::invalid("at least one communication user is required"));
        }
        if self.targets.is_empty() {
            return Err(Error::invalid("at least one sensing target is required"));
        }
        positive("power budget", self.power_budget)?;
        let check_csi = |what: String, csi: &CsiEstimate| {
            if csi.len() != n {
                return Err(Error::invalid(format!("{what}: estimate has length {}, expected {n}", csi.len())));
            }
            if !(csi.error_bound.is_finite() && csi.error_bound >= 0.0) {
                return Err(Error::invalid(format!("{what}: error bound must be nonnegative")));
            }
            Ok(())
        };
        for (k, u) in self.users.iter().enumerate() {
            check_csi(format!("user {k}"), &u.csi)?;
            positive(&format!("user {k} noise power"), u.noise_power)?;
            positive(&format!("user {k} SINR threshold"), u.sinr_threshold)?;
        }
        for (l, e) in self.eavesdroppers.iter().enumerate() {
            check_csi(format!("eavesdropper {l}"), &e.csi)?;
            positive(&format!("eavesdropper {l} noise power"), e.noise_power)?;
            if e.leakage_thresholds.len() != self.users.len() {
                return Err(Error::invalid(format!(
                    "eavesdropper {l}: {} leakage thresholds for {} users",
                    e.leakage_thresholds.len(),
                    self.users.len()
                )));
            }
            for (k, &g) in e.leakage_thresholds.iter().enumerate() {
                positive(&format!("eavesdropper {l} leakage threshold for user {k}"), g)?;
            }
        }
        for (m, t) in self.targets.iter().enumerate() {
            check_csi(format!("target {m}"), &t.csi)?;
        }
        Ok(())
    }

    pub fn num_users(&self) -> usize {
        self.users.len()
    }

    pub fn num_eavesdroppers(&self) -> usize {
        self.eavesdroppers.len()
    }

    pub fn num_targets(&self) -> usize {
        self.targets.len()
    }

    pub fn antenna_count(&self) -> usize {
        self.geometry.antenna_count()
    }

    /// Messages for entities outside the `[d_F, d_R]` near-field region.
    pub fn position_warnings(&self) -> Vec<String> {
        let b = region_bounds(&self.geometry);
        let mut out = Vec::new();
        let mut check = |what: String, p: PolarPoint| {
            if !b.contains(p.range) {
                out.push(format!(
                    "{what} at range {:.4} m lies outside the near-field region [{:.4}, {:.4}] m",
                    p.range, b.fresnel, b.rayleigh
                ));
            }
        };
        for (k, u) in self.users.iter().enumerate() {
            check(format!("user {k}"), u.position);
        }
        for (l, e) in self.eavesdroppers.iter().enumerate() {
            check(format!("eavesdropper {l}"), e.position);
        }
        for (m, t) in self.targets.iter().enumerate() {
            check(format!("target {m}"), t.position);
        }
        out
    }

    /// Same scenario with every error bound set to zero.
    pub fn with_perfect_csi(&self) -> Self {
        let mut s = self.clone();
        for u in &mut s.users {
            u.csi.error_bound = 0.0;
        }
        for e in &mut s.eavesdroppers {
            e.csi.error_bound = 0.0;
        }
        for t in &mut s.targets {
            t.csi.error_bound = 0.0;
        }
        s
    }
}
