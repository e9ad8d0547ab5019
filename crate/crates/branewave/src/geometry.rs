//! Brane geometry: constants derived from the slope alpha and the coordinate
//! maps between (t, z), (tau, rho), the Liouville variable y and x = cosh rho.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Geometric constants of a De Sitter brane z = alpha t in the AdS5 bulk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BraneGeometry {
    /// Brane slope, in (-1, 0).
    pub alpha: f64,
    /// Brane location in the rho coordinate: log((1+sqrt(1-a^2))/(-a)).
    pub rho0: f64,
    /// Liouville coordinate of the brane: y0 = log((e^rho0+1)/(e^rho0-1)).
    pub y0: f64,
    /// Graviton normalization: gamma^2 integral_0^rho0 sinh^2 = 1.
    pub gamma: f64,
    /// Scalar curvature of the induced metric: 12 a^2/(1-a^2).
    pub scalar_curvature: f64,
}

/// All derived constants for a slope alpha in (-1, 0).
pub fn geometry_from_alpha(alpha: f64) -> Result<BraneGeometry> {
    if !(-1.0 < alpha && alpha < 0.0) {
        return Err(Error::domain("geometry_from_alpha", format!("alpha {alpha} outside (-1, 0)")));
    }
    let root = (1.0 - alpha * alpha).sqrt();
    let rho0 = ((1.0 + root) / (-alpha)).ln();
    let e = rho0.exp();
    let y0 = ((e + 1.0) / (e - 1.0)).ln();
    let gamma = (2.0 / (rho0.sinh() * rho0.cosh() - rho0)).sqrt();
    let scalar_curvature = 12.0 * alpha * alpha / (1.0 - alpha * alpha);
    Ok(BraneGeometry { alpha, rho0, y0, gamma, scalar_curvature })
}

impl BraneGeometry {
    /// x-coordinate of the brane: cosh(rho0) = -1/alpha.
    pub fn x_boundary(&self) -> f64 {
        -1.0 / self.alpha
    }

    /// Hubble constant sqrt(3)|alpha|/sqrt(1-alpha^2).
    pub fn hubble(&self) -> f64 {
        3.0_f64.sqrt() * self.alpha.abs() / (1.0 - self.alpha * self.alpha).sqrt()
    }
}

/// y = log((e^rho + 1)/(e^rho - 1)) = log(coth(rho/2)); an involution, so the
/// same map inverts it.
pub fn rho_to_y(rho: f64) -> Result<f64> {
    if !(rho > 0.0) {
        return Err(Error::domain("rho_to_y", format!("rho {rho} must be positive")));
    }
    let e = rho.exp();
    Ok(((e + 1.0) / (e - 1.0)).ln())
}

pub fn y_to_rho(y: f64) -> Result<f64> {
    rho_to_y(y)
}

/// x = cosh rho, the Legendre argument; coth y in the Liouville variable.
pub fn rho_to_x(rho: f64) -> f64 {
    rho.cosh()
}

pub fn x_to_rho(x: f64) -> Result<f64> {
    if !(x > 1.0) {
        return Err(Error::domain("x_to_rho", format!("x {x} must exceed 1")));
    }
    Ok(x.acosh())
}

/// (t, z) -> (tau, rho) on the past causal domain t < -z < 0.
pub fn tz_to_tau_rho(t: f64, z: f64) -> Result<(f64, f64)> {
    if !(z > 0.0 && t < -z) {
        return Err(Error::domain("tz_to_tau_rho", format!("(t,z)=({t},{z}) not in t < -z < 0")));
    }
    let tau = -0.5 * (t * t - z * z).ln();
    let r = t / z;
    let rho = ((r * r - 1.0).sqrt() - r).ln();
    Ok((tau, rho))
}

/// (tau, rho) -> (t, z): t = -cosh(rho) e^{-tau}/sinh(rho), z = e^{-tau}/sinh(rho).
pub fn tau_rho_to_tz(tau: f64, rho: f64) -> Result<(f64, f64)> {
    if !(rho > 0.0) {
        return Err(Error::domain("tau_rho_to_tz", format!("rho {rho} must be positive")));
    }
    let s = rho.sinh();
    let em = (-tau).exp();
    Ok((-rho.cosh() / s * em, em / s))
}
