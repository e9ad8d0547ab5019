//! The Kaluza-Klein tower: decompose bulk data into brane Klein-Gordon
//! modes, evolve each mode with its own mass, reconstruct, audit energies,
//! extract the massless graviton and measure the horizon energy growth.
//!
//! Modes never mix: the point eigenvalues evolve with kappa = lambda_j and
//! each continuous node with kappa = m^2, all per xi row.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::desitter::{self, evolve, profile_phi, ModeParams, SpectralField};
use crate::error::{Error, Result};
use crate::quadrature::RadialQuadrature;
use crate::spectrum::{spectral_forward, spectral_inverse, BoundaryCondition, Coefficients, SpectralBasis};

/// Bulk field samples on the (xi, rho) tensor mesh at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct BulkState {
    pub xi_grid: Vec<f64>,
    pub n_rho: usize,
    /// Row-major: u[xi_index * n_rho + rho_index].
    pub u: Vec<Complex64>,
    pub ut: Vec<Complex64>,
    pub tau: f64,
}

impl BulkState {
    pub fn new(
        xi_grid: Vec<f64>,
        n_rho: usize,
        u: Vec<Complex64>,
        ut: Vec<Complex64>,
        tau: f64,
    ) -> Result<Self> {
        if u.len() != xi_grid.len() * n_rho || ut.len() != u.len() {
            return Err(Error::GridMismatch("bulk state: array sizes".into()));
        }
        if !xi_grid.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::GridMismatch("bulk state: xi grid must increase".into()));
        }
        if !u.iter().chain(&ut).all(|c| c.re.is_finite() && c.im.is_finite()) {
            return Err(Error::GridMismatch("bulk state: samples must be finite".into()));
        }
        Ok(BulkState { xi_grid, n_rho, u, ut, tau })
    }

    pub fn zero(xi_grid: Vec<f64>, n_rho: usize, tau: f64) -> Self {
        let len = xi_grid.len() * n_rho;
        BulkState { xi_grid, n_rho, u: vec![Complex64::default(); len], ut: vec![Complex64::default(); len], tau }
    }

    pub fn row_u(&self, i: usize) -> &[Complex64] {
        &self.u[i * self.n_rho..(i + 1) * self.n_rho]
    }

    pub fn row_ut(&self, i: usize) -> &[Complex64] {
        &self.ut[i * self.n_rho..(i + 1) * self.n_rho]
    }

    /// Build from profile functions u0(xi, rho), u1(xi, rho).
    pub fn from_profiles(
        rad: &RadialQuadrature,
        basis: &SpectralBasis,
        tau: f64,
        u0: impl Fn(f64, f64) -> Complex64,
        u1: impl Fn(f64, f64) -> Complex64,
    ) -> Self {
        let nr = basis.quad.len();
        let mut u = Vec::with_capacity(rad.len() * nr);
        let mut ut = Vec::with_capacity(rad.len() * nr);
        for &xi in &rad.xi_nodes {
            for &rho in &basis.quad.rho_nodes {
                u.push(u0(xi, rho));
                ut.push(u1(xi, rho));
            }
        }
        BulkState { xi_grid: rad.xi_nodes.clone(), n_rho: nr, u, ut, tau }
    }

    /// ||u||_{X^0}^2 by (xi, rho) quadrature.
    pub fn x0_norm_sq(&self, rad: &RadialQuadrature, basis: &SpectralBasis) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.xi_grid.len() {
            acc += rad.measure(i) * basis.quad.norm_h_sq(self.row_u(i));
        }
        acc
    }
}

/// Tower coefficients: one spectral field per transverse mode.
#[derive(Debug, Clone)]
pub struct TowerCoefficients {
    /// u_{lambda_j}(tau, xi) per point eigenvalue.
    pub point: Vec<SpectralField>,
    /// u_{m^2}(tau, xi) per continuous quadrature node.
    pub continuous: Vec<SpectralField>,
    pub tau: f64,
}

impl TowerCoefficients {
    pub fn xi_grid(&self) -> Option<&[f64]> {
        self.point.first().or(self.continuous.first()).map(|f| f.xi_grid.as_slice())
    }
}

/// Apply the forward transverse transform to every xi row.
pub fn decompose(state: &BulkState, basis: &SpectralBasis) -> Result<TowerCoefficients> {
    if state.n_rho != basis.quad.len() {
        return Err(Error::GridMismatch("decompose: rho grid differs from basis".into()));
    }
    let rows: Vec<(Coefficients, Coefficients)> = (0..state.xi_grid.len())
        .into_par_iter()
        .map(|i| {
            let cu = spectral_forward(state.row_u(i), basis)?;
            let cut = spectral_forward(state.row_ut(i), basis)?;
            Ok((cu, cut))
        })
        .collect::<Result<_>>()?;

    let n_xi = state.xi_grid.len();
    let mut point = Vec::with_capacity(basis.n_point());
    for j in 0..basis.n_point() {
        let mut u_hat = Vec::with_capacity(n_xi);
        let mut ut_hat = Vec::with_capacity(n_xi);
        for (cu, cut) in &rows {
            u_hat.push(cu.point[j]);
            ut_hat.push(cut.point[j]);
        }
        point.push(SpectralField::new(state.xi_grid.clone(), u_hat, ut_hat, state.tau)?);
    }
    let mut continuous = Vec::with_capacity(basis.n_continuous());
    for k in 0..basis.n_continuous() {
        let mut u_hat = Vec::with_capacity(n_xi);
        let mut ut_hat = Vec::with_capacity(n_xi);
        for (cu, cut) in &rows {
            u_hat.push(cu.continuous[k]);
            ut_hat.push(cut.continuous[k]);
        }
        continuous.push(SpectralField::new(state.xi_grid.clone(), u_hat, ut_hat, state.tau)?);
    }
    Ok(TowerCoefficients { point, continuous, tau: state.tau })
}

/// Evolve every mode to time tau with its own mass.
pub fn evolve_tower(coeffs: &TowerCoefficients, basis: &SpectralBasis, tau: f64) -> Result<TowerCoefficients> {
    let point: Vec<SpectralField> = coeffs
        .point
        .par_iter()
        .zip(&basis.point.eigenvalues)
        .map(|(f, &l)| evolve(f, ModeParams::new(l), tau))
        .collect::<Result<_>>()?;
    let continuous: Vec<SpectralField> = coeffs
        .continuous
        .par_iter()
        .zip(&basis.continuous.m_nodes)
        .map(|(f, &m)| evolve(f, ModeParams::new(m * m), tau))
        .collect::<Result<_>>()?;
    Ok(TowerCoefficients { point, continuous, tau })
}

/// Pointwise inverse transform per xi row.
pub fn reconstruct(coeffs: &TowerCoefficients, basis: &SpectralBasis) -> Result<BulkState> {
    let xi_grid = coeffs
        .xi_grid()
        .ok_or_else(|| Error::GridMismatch("reconstruct: empty tower".into()))?
        .to_vec();
    let n_xi = xi_grid.len();
    let n_rho = basis.quad.len();
    let rows: Vec<(Vec<Complex64>, Vec<Complex64>)> = (0..n_xi)
        .into_par_iter()
        .map(|i| {
            let cu = Coefficients {
                point: coeffs.point.iter().map(|f| f.u_hat[i]).collect(),
                continuous: coeffs.continuous.iter().map(|f| f.u_hat[i]).collect(),
            };
            let cut = Coefficients {
                point: coeffs.point.iter().map(|f| f.ut_hat[i]).collect(),
                continuous: coeffs.continuous.iter().map(|f| f.ut_hat[i]).collect(),
            };
            Ok((spectral_inverse(&cu, basis)?, spectral_inverse(&cut, basis)?))
        })
        .collect::<Result<_>>()?;
    let mut u = Vec::with_capacity(n_xi * n_rho);
    let mut ut = Vec::with_capacity(n_xi * n_rho);
    for (ru, rut) in rows {
        u.extend(ru);
        ut.extend(rut);
    }
    Ok(BulkState { xi_grid, n_rho, u, ut, tau: coeffs.tau })
}

/// Bulk energy versus the sum of mode energies.
#[derive(Debug, Clone)]
pub struct EnergyReport {
    /// Direct (rho, xi) quadrature of the bulk energy density, boundary term
    /// included for Robin coupling.
    pub total: f64,
    pub per_point_mode: Vec<f64>,
    /// Energy density per continuous node (the dm weight is applied in
    /// `mode_sum`, not here).
    pub per_continuous_mode: Vec<f64>,
    pub mode_sum: f64,
    pub discrepancy: f64,
}

/// Direct bulk energy: integral of sinh^2 |du|^2 + e^{-2 tau} sinh^2 |grad u|^2
/// + sinh^4 |d_rho u|^2 + M^2 sinh^4 |u|^2 plus c sinh^4(rho0) |u(rho0)|^2.
pub fn bulk_energy(state: &BulkState, basis: &SpectralBasis, rad: &RadialQuadrature) -> Result<f64> {
    if state.n_rho != basis.quad.len() || state.xi_grid != rad.xi_nodes {
        return Err(Error::GridMismatch("bulk_energy: grids".into()));
    }
    let quad = &basis.quad;
    let e2t = (-2.0 * state.tau).exp();
    let m2 = basis.spec.mass * basis.spec.mass;
    let mut total = 0.0;
    for i in 0..state.xi_grid.len() {
        let xi = state.xi_grid[i];
        let wxi = rad.measure(i);
        let u = state.row_u(i);
        let ut = state.row_ut(i);
        let du = quad.deriv_rho(u);
        let mut acc = 0.0;
        for (r, &wy) in quad.weights_y.iter().enumerate() {
            let s = quad.sinh_rho[r];
            let s3 = s * s * s;
            let s5 = s3 * s * s;
            // sinh^2 rho drho = s^3 dy ; sinh^4 rho drho = s^5 dy
            acc += wy
                * (s3 * (ut[r].norm_sqr() + e2t * xi * xi * u[r].norm_sqr())
                    + s5 * (du[r].norm_sqr() + m2 * u[r].norm_sqr()));
        }
        if let BoundaryCondition::Robin(c) = basis.spec.bc {
            if c != 0.0 {
                let ub = quad.boundary_value(u);
                acc += c * basis.spec.geometry.rho0.sinh().powi(4) * ub.norm_sqr();
            }
        }
        total += wxi * acc;
    }
    Ok(total)
}

/// Compare the direct bulk energy with the sum of per-mode energies.
pub fn energy_report(
    state: &BulkState,
    coeffs: &TowerCoefficients,
    basis: &SpectralBasis,
    rad: &RadialQuadrature,
) -> Result<EnergyReport> {
    let total = bulk_energy(state, basis, rad)?;
    let mut per_point_mode = Vec::with_capacity(coeffs.point.len());
    for (f, &l) in coeffs.point.iter().zip(&basis.point.eigenvalues) {
        per_point_mode.push(desitter::energy(f, ModeParams::new(l), rad)?.value);
    }
    let mut per_continuous_mode = Vec::with_capacity(coeffs.continuous.len());
    for (f, &m) in coeffs.continuous.iter().zip(&basis.continuous.m_nodes) {
        per_continuous_mode.push(desitter::energy(f, ModeParams::new(m * m), rad)?.value);
    }
    let mut mode_sum: f64 = per_point_mode.iter().sum();
    for (e, w) in per_continuous_mode.iter().zip(&basis.continuous.m_weights) {
        mode_sum += w * e;
    }
    Ok(EnergyReport {
        total,
        per_point_mode,
        per_continuous_mode,
        mode_sum,
        discrepancy: (total - mode_sum).abs(),
    })
}

/// Initial data of the massless graviton: phi(tau*) = gamma^2 integral u0 sinh^2,
/// d_tau phi(tau*) = gamma^2 integral u1 sinh^2 (per xi row). Requires M = c = 0.
pub fn graviton_extract(state: &BulkState, basis: &SpectralBasis) -> Result<SpectralField> {
    match basis.spec.bc {
        BoundaryCondition::Robin(c) if c == 0.0 && basis.spec.mass == 0.0 => {}
        _ => {
            return Err(Error::domain(
                "graviton_extract",
                "the graviton sector needs M = 0 and Neumann coupling c = 0".to_string(),
            ))
        }
    }
    if state.n_rho != basis.quad.len() {
        return Err(Error::GridMismatch("graviton_extract: rho grid".into()));
    }
    let g = basis.spec.geometry.gamma;
    let gg = g * g;
    let n = state.xi_grid.len();
    let ones = vec![1.0_f64; state.n_rho];
    let mut u_hat = Vec::with_capacity(n);
    let mut ut_hat = Vec::with_capacity(n);
    for i in 0..n {
        u_hat.push(gg * basis.quad.inner_h_real(state.row_u(i), &ones));
        ut_hat.push(gg * basis.quad.inner_h_real(state.row_ut(i), &ones));
    }
    SpectralField::new(state.xi_grid.clone(), u_hat, ut_hat, state.tau)
}

/// One entry of the graviton residual schedule.
#[derive(Debug, Clone, Copy)]
pub struct GravitonResidual {
    pub tau: f64,
    /// ||(u - u_phi)(tau)||_{X^1} + ||d_tau u(tau)||_{X^0}.
    pub residual: f64,
    /// e^{3 tau/2} ||(d_tau + 3/2)(u - u_phi)(tau)||_{X^0}.
    pub weighted_drift: f64,
}

/// Evolve the tower and the extracted graviton along a tau schedule and
/// record the convergence of u toward u_phi.
pub fn graviton_residual_schedule(
    state: &BulkState,
    basis: &SpectralBasis,
    rad: &RadialQuadrature,
    taus: &[f64],
) -> Result<Vec<GravitonResidual>> {
    let coeffs = decompose(state, basis)?;
    let mut out = Vec::with_capacity(taus.len());
    for &tau in taus {
        let ev = evolve_tower(&coeffs, basis, tau)?;
        // u - u_phi is the continuous part of the tower (the graviton is the
        // whole point sector when M = c = 0).
        let cont_only = TowerCoefficients { point: vec![], continuous: ev.continuous.clone(), tau };
        let diff = reconstruct_with_empty_point(&cont_only, basis)?;
        let quad = &basis.quad;
        let mut x1 = 0.0;
        let mut x0_dt_full = 0.0;
        let mut drift = 0.0;
        for i in 0..diff.xi_grid.len() {
            let wxi = rad.measure(i);
            let xi = diff.xi_grid[i];
            let u = diff.row_u(i);
            let ut = diff.row_ut(i);
            let du = quad.deriv_rho(u);
            for (r, &wh) in quad.weights_h.iter().enumerate() {
                let s = quad.sinh_rho[r];
                x1 += wxi
                    * wh
                    * (u[r].norm_sqr()
                        + xi * xi * u[r].norm_sqr()
                        + (s * du[r]).norm_sqr());
                drift += wxi * wh * (ut[r] + 1.5 * u[r]).norm_sqr();
            }
            // d_tau u includes the graviton time derivative as well.
            let g_ut = ev.point.first().map(|f| f.ut_hat[i]).unwrap_or_default();
            for (r, &wh) in quad.weights_h.iter().enumerate() {
                let w0 = basis.point.eigenfunctions.first().map(|w| w[r]).unwrap_or(0.0);
                x0_dt_full += wxi * wh * (ut[r] + g_ut * w0).norm_sqr();
            }
        }
        out.push(GravitonResidual {
            tau,
            residual: x1.sqrt() + x0_dt_full.sqrt(),
            weighted_drift: (1.5 * tau).exp() * drift.sqrt(),
        });
    }
    Ok(out)
}

fn reconstruct_with_empty_point(coeffs: &TowerCoefficients, basis: &SpectralBasis) -> Result<BulkState> {
    // reconstruct() maps coefficient vectors by position; pad the point part
    // with zeros to reuse it.
    let xi_grid = coeffs
        .xi_grid()
        .ok_or_else(|| Error::GridMismatch("reconstruct: empty tower".into()))?
        .to_vec();
    let zeros = SpectralField::zero(xi_grid, coeffs.tau);
    let padded = TowerCoefficients {
        point: vec![zeros; basis.n_point()],
        continuous: coeffs.continuous.clone(),
        tau: coeffs.tau,
    };
    reconstruct(&padded, basis)
}

/// Trace of the graviton on the brane at tau = +infinity (forfi):
/// the massless profile of the extracted initial data.
pub fn brane_trace_profile(phi_init: &SpectralField) -> Result<SpectralField> {
    profile_phi(phi_init, ModeParams::new(0.0))
}

/// Distances of Proposition-style limits along a tau path; the null-frame
/// quotients (d_t +- d_z)/(z -+ t) reduce exactly to e^{2 tau} d_tau phi, so
/// they share the second entry.
#[derive(Debug, Clone, Copy)]
pub struct TraceLimits {
    pub tau: f64,
    /// ||u_phi(tau) - phi_inf||_{H^1}.
    pub h1_distance: f64,
    /// ||e^{2 tau} d_tau u_phi(tau) + xi^2 phi_inf||_{L^2}.
    pub dtau_distance: f64,
}

pub fn trace_limits(
    phi_init: &SpectralField,
    rad: &RadialQuadrature,
    taus: &[f64],
) -> Result<Vec<TraceLimits>> {
    let mode = ModeParams::new(0.0);
    let trace = profile_phi(phi_init, mode)?;
    let mut out = Vec::with_capacity(taus.len());
    for &tau in taus {
        let ev = evolve(phi_init, mode, tau)?;
        let mut h1 = 0.0;
        let mut dt = 0.0;
        for i in 0..ev.len() {
            let xi = ev.xi_grid[i];
            let w = rad.measure(i);
            h1 += w * (1.0 + xi * xi) * (ev.u_hat[i] - trace.u_hat[i]).norm_sqr();
            dt += w * ((2.0 * tau).exp() * ev.ut_hat[i] + xi * xi * trace.u_hat[i]).norm_sqr();
        }
        out.push(TraceLimits { tau, h1_distance: h1.sqrt(), dtau_distance: dt.sqrt() });
    }
    Ok(out)
}

/// Horizon energy sequence E_p(tau) = e^{2 tau} integral |grad_x u|^2
/// sinh(rho) cosh(rho) drho dx and its fitted power of 1/|t|.
#[derive(Debug, Clone)]
pub struct HorizonFit {
    pub taus: Vec<f64>,
    pub energies: Vec<f64>,
    /// Fitted exponent p in E_p ~ |t|^p (t = -e^{-tau}/sqrt(1-alpha^2)).
    pub exponent: f64,
    /// The extracted graviton trace is numerically zero, so the 1/t^2 law
    /// does not apply.
    pub trace_is_zero: bool,
}

pub fn horizon_energy(
    state: &BulkState,
    basis: &SpectralBasis,
    rad: &RadialQuadrature,
    taus: &[f64],
) -> Result<HorizonFit> {
    let coeffs = decompose(state, basis)?;
    let phi0 = graviton_extract(state, basis)?;
    let trace = brane_trace_profile(&phi0)?;
    let trace_norm: f64 = (0..trace.len())
        .map(|i| rad.measure(i) * trace.u_hat[i].norm_sqr())
        .sum::<f64>()
        .sqrt();
    let data_scale: f64 = (0..phi0.len())
        .map(|i| rad.measure(i) * (phi0.u_hat[i].norm_sqr() + phi0.ut_hat[i].norm_sqr()))
        .sum::<f64>()
        .sqrt();
    let trace_is_zero = trace_norm < 1e-8 * data_scale.max(1e-300);

    let quad = &basis.quad;
    let mut energies = Vec::with_capacity(taus.len());
    for &tau in taus {
        let ev = evolve_tower(&coeffs, basis, tau)?;
        let st = reconstruct(&ev, basis)?;
        let mut acc = 0.0;
        for i in 0..st.xi_grid.len() {
            let xi = st.xi_grid[i];
            let u = st.row_u(i);
            // integral f sinh cosh drho = sum w_y sinh^2 cosh f
            let mut rho_part = 0.0;
            for (r, &wy) in quad.weights_y.iter().enumerate() {
                let s = quad.sinh_rho[r];
                rho_part += wy * s * s * quad.rho_nodes[r].cosh() * u[r].norm_sqr();
            }
            acc += rad.measure(i) * xi * xi * rho_part;
        }
        energies.push((2.0 * tau).exp() * acc);
    }
    // log E_p against log |t|; log|t| = -tau + const.
    let logt: Vec<f64> = taus.iter().map(|&t| -t).collect();
    let loge: Vec<f64> = energies.iter().map(|&e| e.max(1e-300).ln()).collect();
    let n = logt.len() as f64;
    let mx = logt.iter().sum::<f64>() / n;
    let my = loge.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in logt.iter().zip(&loge) {
        num += (x - mx) * (y - my);
        den += (x - mx) * (x - mx);
    }
    Ok(HorizonFit { taus: taus.to_vec(), energies, exponent: num / den, trace_is_zero })
}

/// 17 geometrically spaced points on [tau0, tau0 + span].
pub fn default_schedule(tau0: f64, span: f64) -> Vec<f64> {
    let n = 17;
    (0..n)
        .map(|k| {
            let t = k as f64 / (n - 1) as f64;
            tau0 + span * ((2.0_f64.powf(t * 4.0) - 1.0) / (2.0_f64.powf(4.0) - 1.0))
        })
        .collect()
}
