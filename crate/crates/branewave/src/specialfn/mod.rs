//! Special-function substrate: Bessel J/Y of real or purely imaginary order,
//! associated Legendre P and Olver Q on (1, inf) for real or purely imaginary
//! order, and the complex gamma function.
//!
//! Everything here is a pure function of its arguments; identical inputs give
//! bit-identical outputs, and there is no shared state of any kind.

pub mod bessel;
pub mod gamma;
pub mod hyper;
pub mod legendre;

use num_complex::Complex64;

pub use bessel::{bessel_jy, bessel_jy_imag};
pub use gamma::{gamma_real, recip_gamma};
pub use hyper::hyp2f1_reg;
pub use legendre::{legendre_p, legendre_p_xm1, olver_q, olver_q_xm1};

use crate::error::{Error, Result};

/// Joint evaluation of J_nu, Y_nu and their z-derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylinderEval {
    pub order: f64,
    pub argument: f64,
    pub j: f64,
    pub y: f64,
    pub j_prime: f64,
    pub y_prime: f64,
}

impl CylinderEval {
    /// J Y' - J' Y, which must equal 2/(pi z).
    pub fn wronskian(&self) -> f64 {
        self.j * self.y_prime - self.j_prime * self.y
    }
}

/// Bessel functions of the first and second kind, real order.
pub fn bessel_eval(order: f64, argument: f64) -> Result<CylinderEval> {
    let (j, y, j_prime, y_prime) = bessel_jy(order, argument)?;
    Ok(CylinderEval { order, argument, j, y, j_prime, y_prime })
}

/// Joint evaluation of P^{-mu}_nu, bold-Q^{mu}_nu and their x-derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LegendreEval {
    pub degree: f64,
    pub order: Complex64,
    pub argument: f64,
    pub p: Complex64,
    pub q: Complex64,
    pub p_prime: Complex64,
    pub q_prime: Complex64,
}

impl LegendreEval {
    /// P Q' - P' Q, which must equal -1/(Gamma(nu+mu+1)(x^2-1)).
    pub fn wronskian(&self) -> Complex64 {
        self.p * self.q_prime - self.p_prime * self.q
    }
}

/// Associated Legendre functions for x > 1.
///
/// `order` is the mu of P^{-mu}_nu and bold-Q^{mu}_nu; it may be real in
/// [0, 6] or purely imaginary i*s with |s| <= 50. The degree must lie in
/// [-1/2, 10].
pub fn legendre_eval(degree: f64, order: Complex64, x: f64) -> Result<LegendreEval> {
    if !(x > 1.0) || x > 1.0e3 {
        return Err(Error::domain("legendre_eval", format!("argument {x} outside (1, 1e3]")));
    }
    if !(-0.5..=10.0).contains(&degree) {
        return Err(Error::domain("legendre_eval", format!("degree {degree} outside [-1/2, 10]")));
    }
    let real_ok = order.im == 0.0 && (0.0..=6.0).contains(&order.re);
    let imag_ok = order.re == 0.0 && order.im.abs() <= 50.0;
    if !(real_ok || imag_ok) {
        return Err(Error::domain(
            "legendre_eval",
            format!("order {order} must be real in [0,6] or purely imaginary with |s| <= 50"),
        ));
    }
    let (p, p_prime) = legendre_p(degree, order, x)?;
    let (q, q_prime) = olver_q(degree, order, x)?;
    Ok(LegendreEval { degree, order, argument: x, p, q, p_prime, q_prime })
}

/// Gamma function of a complex argument (Lanczos with reflection).
pub fn gamma_complex(z: Complex64) -> Result<Complex64> {
    gamma::gamma(z)
}
