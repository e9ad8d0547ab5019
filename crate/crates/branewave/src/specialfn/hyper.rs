//! Regularized Gauss hypergeometric series.
//!
//! F_reg(a,b;c;z) = sum_k (a)_k (b)_k z^k / (k! Gamma(c+k)), accumulated by
//! term recurrence. Only real arguments z in [0, 1) are needed here: the
//! Legendre evaluations map their argument into that range first, where the
//! series has no sign alternation for real parameters.

use num_complex::Complex64;

use super::gamma::recip_gamma;
use crate::error::{Error, Result};

/// Term cap for the series; at z ~ 0.998 convergence needs a few 10^4 terms.
const MAX_TERMS: usize = 1_000_000;

/// Regularized 2F1 at real z in [0, 1).
pub fn hyp2f1_reg(a: Complex64, b: Complex64, c: Complex64, z: f64) -> Result<Complex64> {
    if !(0.0..1.0).contains(&z) {
        return Err(Error::domain("hyp2f1_reg", format!("argument {z} outside [0, 1)")));
    }

    // When c sits at a nonpositive integer -n the first n+1 coefficients
    // 1/Gamma(c+k) vanish; start the recurrence just past them.
    let start = if c.im == 0.0 && c.re <= 0.5 && (c.re - c.re.round()).abs() < 1e-14 {
        (-c.re.round()) as usize + 1
    } else {
        0
    };

    let mut term = if start == 0 {
        recip_gamma(c)
    } else {
        let mut t = recip_gamma(c + start as f64);
        for j in 0..start {
            let jf = j as f64;
            t *= (a + jf) * (b + jf) / (jf + 1.0);
        }
        t * z.powi(start as i32)
    };
    let mut sum = term;
    for k in start..MAX_TERMS {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) * z / ((c + kf) * (kf + 1.0));
        sum += term;
        if term.norm() < 1e-16 * sum.norm() {
            return Ok(sum);
        }
    }
    Err(Error::convergence("hyp2f1_reg", format!("series did not reach tolerance at z={z}")))
}
