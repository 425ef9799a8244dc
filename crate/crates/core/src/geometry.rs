//! Differential geometry of the helicoid
//!
//! `x = ρ cos(ωz)`, `y = ρ sin(ωz)`, `z = z`
//!
//! with line element `ds² = dρ² + (1 + ω²ρ²) dz²`. Everything the spectrum
//! needs reduces to the dimensionless width `ξ_max = ω ρ_max`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite helicoid stripe: twist density `omega = 2πS` (S complete turns
/// per unit length), radial extent `rho_max` and axial height.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HelicoidGeometry {
    omega: f64,
    rho_max: f64,
    height: f64,
}

impl HelicoidGeometry {
    pub fn new(omega: f64, rho_max: f64, height: f64) -> Result<Self> {
        if !(omega.is_finite() && omega >= 0.0) {
            return Err(Error::Domain(format!("omega must be >= 0, got {omega}")));
        }
        if !(rho_max.is_finite() && rho_max > 0.0) {
            return Err(Error::Domain(format!("rho_max must be > 0, got {rho_max}")));
        }
        if !(height.is_finite() && height > 0.0) {
            return Err(Error::Domain(format!("height must be > 0, got {height}")));
        }
        Ok(Self { omega, rho_max, height })
    }

    /// Builds a geometry from the number of complete twists per unit length.
    pub fn from_twists(twists_per_length: f64, rho_max: f64, height: f64) -> Result<Self> {
        Self::new(2.0 * std::f64::consts::PI * twists_per_length, rho_max, height)
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn rho_max(&self) -> f64 {
        self.rho_max
    }

    pub fn height(&self) -> f64 {
        self.height
    }

    pub fn twists_per_length(&self) -> f64 {
        self.omega / (2.0 * std::f64::consts::PI)
    }

    /// `ξ_max = ω ρ_max`, the only geometric scalar the radial spectrum sees.
    pub fn xi_max(&self) -> f64 {
        self.omega * self.rho_max
    }

    /// `√g = √(1 + ω²ρ²)`.
    pub fn metric_sqrt_det(&self, rho: f64) -> f64 {
        (1.0 + self.omega * self.omega * rho * rho).sqrt()
    }

    fn check_rho(&self, rho: f64) -> Result<()> {
        if rho.is_finite() && (0.0..=self.rho_max).contains(&rho) {
            Ok(())
        } else {
            Err(Error::Domain(format!("rho = {rho} outside [0, {}]", self.rho_max)))
        }
    }
}

/// Curvatures at one point of a surface.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvatureSample {
    pub kappa1: f64,
    pub kappa2: f64,
    pub mean: f64,
    pub gaussian: f64,
}

impl CurvatureSample {
    pub fn from_principal(kappa1: f64, kappa2: f64) -> Self {
        Self {
            kappa1,
            kappa2,
            mean: 0.5 * (kappa1 + kappa2),
            gaussian: kappa1 * kappa2,
        }
    }
}

/// Principal curvatures `±ω/(1 + ω²ρ²)` at radius `rho`.
pub fn principal_curvatures(geometry: &HelicoidGeometry, rho: f64) -> Result<CurvatureSample> {
    geometry.check_rho(rho)?;
    let w = geometry.omega;
    let k = w / (1.0 + w * w * rho * rho);
    Ok(CurvatureSample::from_principal(k, -k))
}

/// Geometry-induced potential `-(ħ²/2m)(M² - K_G)` in units of `energy_unit = ħ²/2m`.
///
/// On the helicoid this is `-unit · ω²/(1 + ω²ρ²)²`, never positive.
pub fn geometric_potential(geometry: &HelicoidGeometry, rho: f64, energy_unit: f64) -> Result<f64> {
    geometry.check_rho(rho)?;
    if !(energy_unit.is_finite() && energy_unit > 0.0) {
        return Err(Error::Domain(format!("energy unit must be > 0, got {energy_unit}")));
    }
    let c = principal_curvatures(geometry, rho)?;
    Ok(-energy_unit * (c.mean * c.mean - c.gaussian))
}

/// The bracketed potential of the dimensionless radial equation
///
/// `l²/(1+ξ²) - (1 + ξ²/2) / (2(1+ξ²)²)`
///
/// i.e. the centrifugal term plus the geometric and metric-rescaling terms.
pub fn effective_potential_dimensionless(l: u32, xi: f64) -> f64 {
    let s = 1.0 + xi * xi;
    let l = f64::from(l);
    l * l / s - (1.0 + 0.5 * xi * xi) / (2.0 * s * s)
}

/// `A / (h R)` as a function of `x = ωR`; equals 1 for the flat strip.
fn area_shape_factor(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        (x * (1.0 + x * x).sqrt() + x.asinh()) / (2.0 * x)
    }
}

/// Area of the finite helicoid `∫₀ᴿ dρ ∫₀ʰ dz √(1 + ω²ρ²)`.
pub fn helicoid_area(geometry: &HelicoidGeometry) -> f64 {
    geometry.height * geometry.rho_max * area_shape_factor(geometry.xi_max())
}

/// Height at twist density `omega_to` giving the same area as a helicoid of
/// height `h_from` at `omega_from`, both with radial extent `r`.
pub fn height_for_constant_area(omega_from: f64, omega_to: f64, r: f64, h_from: f64) -> Result<f64> {
    for (name, v) in [("omega_from", omega_from), ("omega_to", omega_to)] {
        if !(v.is_finite() && v >= 0.0) {
            return Err(Error::Domain(format!("{name} must be >= 0, got {v}")));
        }
    }
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::Domain(format!("R must be > 0, got {r}")));
    }
    if !(h_from.is_finite() && h_from > 0.0) {
        return Err(Error::Domain(format!("h must be > 0, got {h_from}")));
    }
    if omega_from == omega_to {
        return Ok(h_from);
    }
    Ok(h_from * area_shape_factor(omega_from * r) / area_shape_factor(omega_to * r))
}
