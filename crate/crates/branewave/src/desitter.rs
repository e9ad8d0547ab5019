//! A single Klein-Gordon mode of mass kappa on the Steady State Universe,
//! evolved exactly through the Fourier-multiplier representation.
//!
//! Writing v = e^{3 tau/2} u, each radial frequency obeys
//! v'' + (e^{-2 tau} xi^2 - nu^2) v = 0 with nu^2 = 9/4 - kappa, whose
//! fundamental system is the cylinder pair at argument z = xi e^{-tau}. The
//! multipliers (A, B) propagate (v, v') from tau_star to tau; A = 1, B = 0,
//! dA = 0, dB = 1 at tau = tau_star by the Wronskian. For kappa > 9/4 the
//! order is purely imaginary and the same cross products are formed from the
//! real imaginary-order pair, which leaves every multiplier real.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::RadialQuadrature;
use crate::specialfn::{bessel_jy, bessel_jy_imag};

/// Below this value of max(z, z_star) = |xi| e^{-min(tau, tau_star)} the
/// Bessel cross products are replaced by the exact zero-frequency solution;
/// the neglected term is O(z^2) ~ 1e-12.
const TINY_Z: f64 = 1.0e-6;

/// Bessel order attached to a mode mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BesselOrder {
    /// nu = sqrt(9/4 - kappa) >= 0 (kappa <= 9/4).
    Real(f64),
    /// nu = i sigma, sigma = sqrt(kappa - 9/4) > 0 (kappa > 9/4).
    Imaginary(f64),
}

/// Mass parameter of one Kaluza-Klein mode and its derived Bessel order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeParams {
    pub kappa: f64,
    pub order: BesselOrder,
}

impl ModeParams {
    pub fn new(kappa: f64) -> Self {
        let disc = 2.25 - kappa;
        // Within 1e-10 of the double root treat nu as exactly 0; the
        // multipliers are analytic in kappa so the error is O(|disc|).
        let order = if disc >= -1.0e-10 {
            BesselOrder::Real(disc.max(0.0).sqrt())
        } else {
            BesselOrder::Imaginary((-disc).sqrt())
        };
        ModeParams { kappa, order }
    }

    /// Real part of nu (zero for the imaginary branch).
    pub fn re_nu(&self) -> f64 {
        match self.order {
            BesselOrder::Real(nu) => nu,
            BesselOrder::Imaginary(_) => 0.0,
        }
    }
}

/// Fourier-space samples (u_hat, d_tau u_hat) on a radial grid at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    pub xi_grid: Vec<f64>,
    pub u_hat: Vec<Complex64>,
    pub ut_hat: Vec<Complex64>,
    pub tau: f64,
}

impl SpectralField {
    pub fn new(
        xi_grid: Vec<f64>,
        u_hat: Vec<Complex64>,
        ut_hat: Vec<Complex64>,
        tau: f64,
    ) -> Result<Self> {
        if u_hat.len() != xi_grid.len() || ut_hat.len() != xi_grid.len() {
            return Err(Error::GridMismatch("field arrays differ in length".into()));
        }
        if !xi_grid.windows(2).all(|w| w[0] < w[1]) || !xi_grid.iter().all(|x| x.is_finite()) {
            return Err(Error::GridMismatch("xi grid must be finite, strictly increasing".into()));
        }
        if !u_hat.iter().chain(&ut_hat).all(|c| c.re.is_finite() && c.im.is_finite()) {
            return Err(Error::GridMismatch("field samples must be finite".into()));
        }
        Ok(SpectralField { xi_grid, u_hat, ut_hat, tau })
    }

    pub fn zero(xi_grid: Vec<f64>, tau: f64) -> Self {
        let n = xi_grid.len();
        SpectralField {
            xi_grid,
            u_hat: vec![Complex64::default(); n],
            ut_hat: vec![Complex64::default(); n],
            tau,
        }
    }

    pub fn len(&self) -> usize {
        self.xi_grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xi_grid.is_empty()
    }
}

/// Multipliers (A, B, dA, dB) propagating (v, v') from tau_star to tau.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MultiplierSet {
    pub a: f64,
    pub b: f64,
    pub da: f64,
    pub db: f64,
}

/// Exact multipliers at radial frequency xi >= 0.
pub fn multipliers(mode: ModeParams, tau_star: f64, tau: f64, xi: f64) -> Result<MultiplierSet> {
    if !(xi >= 0.0) || !tau.is_finite() || !tau_star.is_finite() {
        return Err(Error::domain("multipliers", format!("bad arguments xi={xi}, tau={tau}")));
    }
    let z_max = xi * (-tau.min(tau_star)).exp();
    if z_max < TINY_Z {
        return Ok(multipliers_zero_frequency(mode, tau - tau_star));
    }
    let z_star = xi * (-tau_star).exp();
    let z = xi * (-tau).exp();
    let ((js, ys, jps, yps), (j, y, jp, yp)) = match mode.order {
        BesselOrder::Real(nu) => (bessel_jy(nu, z_star)?, bessel_jy(nu, z)?),
        BesselOrder::Imaginary(sigma) => {
            (bessel_jy_imag(sigma, z_star)?, bessel_jy_imag(sigma, z)?)
        }
    };
    let half_pi = 0.5 * std::f64::consts::PI;
    Ok(MultiplierSet {
        a: half_pi * z_star * (yps * j - jps * y),
        b: half_pi * (ys * j - js * y),
        da: -half_pi * z_star * z * (yps * jp - jps * yp),
        db: -half_pi * z * (ys * jp - js * yp),
    })
}

/// v'' = nu^2 v: the xi = 0 limit of the mode equation.
fn multipliers_zero_frequency(mode: ModeParams, dt: f64) -> MultiplierSet {
    match mode.order {
        BesselOrder::Real(nu) if nu > 0.0 => MultiplierSet {
            a: (nu * dt).cosh(),
            b: (nu * dt).sinh() / nu,
            da: nu * (nu * dt).sinh(),
            db: (nu * dt).cosh(),
        },
        BesselOrder::Real(_) => MultiplierSet { a: 1.0, b: dt, da: 0.0, db: 1.0 },
        BesselOrder::Imaginary(sigma) => MultiplierSet {
            a: (sigma * dt).cos(),
            b: (sigma * dt).sin() / sigma,
            da: -sigma * (sigma * dt).sin(),
            db: (sigma * dt).cos(),
        },
    }
}

/// Propagate a spectral field to time tau.
pub fn evolve(init: &SpectralField, mode: ModeParams, tau: f64) -> Result<SpectralField> {
    let dt = tau - init.tau;
    let damp = (-1.5 * dt).exp();
    let mut u = Vec::with_capacity(init.len());
    let mut ut = Vec::with_capacity(init.len());
    for (i, &xi) in init.xi_grid.iter().enumerate() {
        let m = multipliers(mode, init.tau, tau, xi)?;
        let (u0, u1) = (init.u_hat[i], init.ut_hat[i]);
        // u = e^{-3 tau/2} v with v_* = e^{3 tau_*/2} u0, v'_* = e^{3 tau_*/2}(u1 + 1.5 u0).
        u.push(damp * ((m.a + 1.5 * m.b) * u0 + m.b * u1));
        ut.push(
            damp * ((m.da - 1.5 * m.a + 1.5 * (m.db - 1.5 * m.b)) * u0 + (m.db - 1.5 * m.b) * u1),
        );
    }
    SpectralField::new(init.xi_grid.clone(), u, ut, tau)
}

/// Mode energy with an indefiniteness flag for kappa < 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeEnergy {
    pub value: f64,
    /// kappa < 0 makes the quadratic form indefinite.
    pub indefinite: bool,
}

/// E_kappa = integral |du|^2 + e^{-2 tau}|grad u|^2 + kappa |u|^2 dx via the
/// radial Plancherel quadrature; the grid must match the field samples.
pub fn energy(state: &SpectralField, mode: ModeParams, rad: &RadialQuadrature) -> Result<ModeEnergy> {
    if rad.xi_nodes != state.xi_grid {
        return Err(Error::GridMismatch("energy: quadrature grid differs from field grid".into()));
    }
    let e2t = (-2.0 * state.tau).exp();
    let mut acc = 0.0;
    for i in 0..state.len() {
        let xi = state.xi_grid[i];
        acc += rad.measure(i)
            * (state.ut_hat[i].norm_sqr()
                + e2t * xi * xi * state.u_hat[i].norm_sqr()
                + mode.kappa * state.u_hat[i].norm_sqr());
    }
    Ok(ModeEnergy { value: acc, indefinite: mode.kappa < 0.0 })
}

/// sin(z)/z with a series patch near zero.
pub(crate) fn sinc(z: f64) -> f64 {
    if z.abs() < 1.0e-4 {
        1.0 - z * z / 6.0
    } else {
        z.sin() / z
    }
}

/// (sin z / z - cos z)/z^2 -> 1/3 as z -> 0.
pub(crate) fn sinc1(z: f64) -> f64 {
    if z.abs() < 1.0e-3 {
        let z2 = z * z;
        1.0 / 3.0 - z2 / 30.0 + z2 * z2 / 840.0
    } else {
        (z.sin() / z - z.cos()) / (z * z)
    }
}

/// Asymptotic profile at tau = +infinity for the massless mode:
/// phi_hat(xi) = sinc(z*) u0 + sinc1(z*) u1 with z* = e^{-tau*} |xi|.
pub fn profile_phi(init: &SpectralField, mode: ModeParams) -> Result<SpectralField> {
    if mode.kappa != 0.0 {
        return Err(Error::domain("profile_phi", format!("kappa {} must be 0", mode.kappa)));
    }
    let scale = (-init.tau).exp();
    let mut phi = Vec::with_capacity(init.len());
    for (i, &xi) in init.xi_grid.iter().enumerate() {
        let z = scale * xi;
        phi.push(sinc(z) * init.u_hat[i] + sinc1(z) * init.ut_hat[i]);
    }
    let n = init.len();
    Ok(SpectralField {
        xi_grid: init.xi_grid.clone(),
        u_hat: phi,
        ut_hat: vec![Complex64::default(); n],
        tau: f64::INFINITY,
    })
}

/// Sobolev-scale norm pair ||u||_{H^s} + ||du||_{H^{s-1}}.
fn norm_pair(state: &SpectralField, rad: &RadialQuadrature, s: f64) -> f64 {
    let mut nu2 = 0.0;
    let mut nt2 = 0.0;
    for i in 0..state.len() {
        let xi = state.xi_grid[i];
        let w = rad.measure(i);
        let sob = (1.0 + xi * xi).powf(s);
        nu2 += w * sob * state.u_hat[i].norm_sqr();
        nt2 += w * sob / (1.0 + xi * xi) * state.ut_hat[i].norm_sqr();
    }
    nu2.sqrt() + nt2.sqrt()
}

/// Least-squares decay exponents over a tau window.
#[derive(Debug, Clone)]
pub struct DecayFit {
    /// Slope of log(||u||_{H^1} + ||du||_{H^0}) against tau.
    pub full_slope: f64,
    /// Slope on the half-derivative-weaker scale (H^{1/2}, H^{-1/2}).
    pub half_slope: f64,
    /// Whether the kappa = 9/4 logarithm correction log(N/tau) was applied.
    pub tau_corrected: bool,
    pub taus: Vec<f64>,
    pub full_norms: Vec<f64>,
    pub half_norms: Vec<f64>,
}

fn ls_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        num += (x - mx) * (y - my);
        den += (x - mx) * (x - mx);
    }
    num / den
}

/// Fit the decay exponent of a positive-mass mode over `window`.
pub fn decay_rate_fit(
    mode: ModeParams,
    init: &SpectralField,
    rad: &RadialQuadrature,
    window: (f64, f64),
    samples: usize,
) -> Result<DecayFit> {
    if !(mode.kappa > 0.0) {
        return Err(Error::domain("decay_rate_fit", format!("kappa {} must be > 0", mode.kappa)));
    }
    if samples < 4 || !(window.1 > window.0) {
        return Err(Error::domain("decay_rate_fit", "window too small".to_string()));
    }
    let tau_corrected = (mode.kappa - 2.25).abs() < 1.0e-12;
    let mut taus = Vec::with_capacity(samples);
    let mut full = Vec::with_capacity(samples);
    let mut half = Vec::with_capacity(samples);
    for k in 0..samples {
        let tau = window.0 + (window.1 - window.0) * k as f64 / (samples - 1) as f64;
        let state = evolve(init, mode, tau)?;
        taus.push(tau);
        full.push(norm_pair(&state, rad, 1.0));
        half.push(norm_pair(&state, rad, 0.5));
    }
    let log_of = |n: &f64, tau: &f64| {
        if tau_corrected {
            (n / tau).ln()
        } else {
            n.ln()
        }
    };
    let lf: Vec<f64> = full.iter().zip(&taus).map(|(n, t)| log_of(n, t)).collect();
    let lh: Vec<f64> = half.iter().zip(&taus).map(|(n, t)| log_of(n, t)).collect();
    Ok(DecayFit {
        full_slope: ls_slope(&taus, &lf),
        half_slope: ls_slope(&taus, &lh),
        tau_corrected,
        taus,
        full_norms: full,
        half_norms: half,
    })
}

/// Asymptotic blow-up coefficient for kappa < 0 and u0 = 0: (1/(2 nu)) u1.
pub fn blowup_amplitude(mode: ModeParams, u1_hat: &SpectralField) -> Result<Vec<Complex64>> {
    let nu = match mode.order {
        BesselOrder::Real(nu) if mode.kappa < 0.0 => nu,
        _ => {
            return Err(Error::domain(
                "blowup_amplitude",
                format!("kappa {} must be negative", mode.kappa),
            ))
        }
    };
    Ok(u1_hat.ut_hat.iter().map(|c| c / (2.0 * nu)).collect())
}
