//! Associated Legendre functions on the cut (1, infinity).
//!
//! First kind, order -mu: with w = (x-1)/(x+1) and s = (x+1)/2,
//!
//!   P^{-mu}_nu(x) = w^{mu/2} s^{-(nu+1)} F_reg(nu+1, nu+mu+1; 1+mu; w),
//!
//! which is the hypergeometric representation at argument (1-x)/2 mapped by
//! the Pfaff transformation into w in [0, 1), so a single series covers the
//! whole axis. The second kind uses Olver's normalization (bold Q; the
//! classical second kind is Q^mu_nu = e^{mu pi i} Gamma(nu+mu+1) bold-Q).
//! Away from x = 1 it comes from the descending series
//!
//!   Q^{mu}_nu(x) = sqrt(pi) (x^2-1)^{mu/2} / (2^{nu+1} x^{nu+mu+1})
//!                  * F_reg((nu+mu)/2+1, (nu+mu+1)/2; nu+3/2; 1/x^2),
//!
//! which is regular in mu. Near x = 1 that series degenerates and the
//! connection formula
//!
//!   Q^{mu}_nu = pi / (2 sin(mu pi)) [ P^{mu}_nu / Gamma(nu+mu+1)
//!                                      - P^{-mu}_nu / Gamma(nu-mu+1) ]
//!
//! takes over; at real integer orders, where it degenerates in turn, the
//! value is recovered by averaging the analytic continuation over a small
//! circle of complex orders, which cancels the error terms below O(delta^4).

use num_complex::Complex64;

use super::gamma::recip_gamma;
use super::hyper::hyp2f1_reg;
use crate::error::Result;

const PI: f64 = std::f64::consts::PI;

/// Distance from a real integer order below which the connection formula is
/// replaced by the circle average.
const INTEGER_GUARD: f64 = 1.0e-3;

/// P^{-mu}_nu(x) and its x-derivative for x > 1, complex order mu.
pub fn legendre_p(nu: f64, mu: Complex64, x: f64) -> Result<(Complex64, Complex64)> {
    legendre_p_xm1(nu, mu, x - 1.0)
}

/// Same, parameterized by xm1 = x - 1. Callers that know x - 1 exactly
/// (e.g. coth(y) - 1 = 2 e^{-2y}/(1 - e^{-2y})) avoid the cancellation in
/// forming w near x = 1.
pub fn legendre_p_xm1(nu: f64, mu: Complex64, xm1: f64) -> Result<(Complex64, Complex64)> {
    let w = xm1 / (xm1 + 2.0);
    let s = 0.5 * (xm1 + 2.0);
    let a = Complex64::new(nu + 1.0, 0.0);
    let b = mu + (nu + 1.0);
    let c = mu + 1.0;

    let f = hyp2f1_reg(a, b, c, w)?;
    let fp = a * b * hyp2f1_reg(a + 1.0, b + 1.0, c + 1.0, w)?;

    // w^{mu/2} for w > 0; at w = 0 only mu = 0 keeps a finite derivative
    // factor, handled by the caller staying away from x = 1.
    let half_mu = 0.5 * mu;
    let wpow = (half_mu * w.ln()).exp();
    let spow = s.powf(-(nu + 1.0));
    let dw_dx = 0.5 / (s * s);

    let p = wpow * spow * f;
    let dp = wpow * spow * (half_mu / w * dw_dx * f - (nu + 1.0) / (2.0 * s) * f + fp * dw_dx);
    Ok((p, dp))
}

/// Crossover between the connection formula (near 1) and the descending
/// series. Real order switches at x = 1.2; the connection formula loses
/// accuracy like x^(2 nu + 1) as x grows, while the descending series for
/// imaginary order i s cancels like e^(s/x), so that side also waits for
/// x >= |s|/15.
fn use_descending(mu: Complex64, x: f64) -> bool {
    if mu.im == 0.0 {
        x >= 1.2
    } else {
        x >= (mu.im.abs() / 15.0).max(1.2)
    }
}

/// Olver's Q^{mu}_nu(x) and its x-derivative for x > 1, complex order mu.
pub fn olver_q(nu: f64, mu: Complex64, x: f64) -> Result<(Complex64, Complex64)> {
    olver_q_xm1(nu, mu, x - 1.0)
}

/// Same, parameterized by xm1 = x - 1 (see [`legendre_p_xm1`]).
pub fn olver_q_xm1(nu: f64, mu: Complex64, xm1: f64) -> Result<(Complex64, Complex64)> {
    if use_descending(mu, xm1 + 1.0) {
        return olver_q_descending(nu, mu, xm1 + 1.0);
    }
    if mu.im == 0.0 && (mu.re - mu.re.round()).abs() < INTEGER_GUARD {
        // Average over mu + delta*i^k: analytic in mu, so the O(delta),
        // O(delta^2), O(delta^3) contributions cancel.
        let delta = 1.0e-3;
        let offsets = [
            Complex64::new(delta, 0.0),
            Complex64::new(0.0, delta),
            Complex64::new(-delta, 0.0),
            Complex64::new(0.0, -delta),
        ];
        let mut q = Complex64::default();
        let mut dq = Complex64::default();
        for off in offsets {
            let (qi, dqi) = olver_q_regular(nu, mu + off, xm1)?;
            q += qi;
            dq += dqi;
        }
        return Ok((q / 4.0, dq / 4.0));
    }
    olver_q_regular(nu, mu, xm1)
}

fn olver_q_descending(nu: f64, mu: Complex64, x: f64) -> Result<(Complex64, Complex64)> {
    let u = 1.0 / (x * x);
    let a = 0.5 * (mu + nu) + 1.0;
    let b = 0.5 * (mu + nu) + 0.5;
    let c = Complex64::new(nu + 1.5, 0.0);
    let f = hyp2f1_reg(a, b, c, u)?;
    let fp_u = a * b * hyp2f1_reg(a + 1.0, b + 1.0, c + 1.0, u)?;

    let sqrt_pi = PI.sqrt();
    let x2m1 = x * x - 1.0;
    let xpow = (-(mu + (nu + 1.0)) * x.ln()).exp(); // x^{-(nu+mu+1)}
    let wing = (0.5 * mu * x2m1.ln()).exp(); // (x^2-1)^{mu/2}
    let scale = sqrt_pi / 2.0_f64.powf(nu + 1.0);

    let q = scale * wing * xpow * f;
    // d/dx: product rule over the three x-dependent factors; du/dx = -2/x^3.
    let dq = scale
        * wing
        * xpow
        * (mu * x / x2m1 * f - (mu + (nu + 1.0)) / x * f - 2.0 / (x * x * x) * fp_u);
    Ok((q, dq))
}

fn olver_q_regular(nu: f64, mu: Complex64, xm1: f64) -> Result<(Complex64, Complex64)> {
    let (pm, dpm) = legendre_p_xm1(nu, mu, xm1)?;
    // P^{+mu} = conj(P^{-mu}) when mu is purely imaginary (real nu, x).
    let (pp, dpp) = if mu.re == 0.0 && mu.im != 0.0 {
        (pm.conj(), dpm.conj())
    } else {
        legendre_p_xm1(nu, -mu, xm1)?
    };
    let gp = recip_gamma(mu + (nu + 1.0)); // 1/Gamma(nu+mu+1)
    let gm = recip_gamma(-mu + (nu + 1.0)); // 1/Gamma(nu-mu+1)
    let pref = PI / (2.0 * (mu * PI).sin());
    Ok((pref * (pp * gp - pm * gm), pref * (dpp * gp - dpm * gm)))
}
