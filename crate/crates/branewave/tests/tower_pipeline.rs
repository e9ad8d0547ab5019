//! Cross-module pipeline: tower decomposition against the finite-difference
//! oracle, graviton extraction, horizon energy growth.

mod common;

use branewave::desitter::SpectralField;
use branewave::fd::{run, FdConfig};
use branewave::geometry::{geometry_from_alpha, rho_to_y};
use branewave::quadrature::{RadialQuadrature, RhoQuadratureConfig};
use branewave::spectrum::{BoundaryCondition, OperatorSpec, SpectralBasis};
use branewave::tower::*;
use common::{band_limited_profile, SeededStream};
use num_complex::Complex64;

fn graviton_basis(m_max: f64) -> SpectralBasis {
    let g = geometry_from_alpha(-0.5).unwrap();
    let spec = OperatorSpec::new(0.0, BoundaryCondition::Robin(0.0), g).unwrap();
    SpectralBasis::build(spec, RhoQuadratureConfig::default(), m_max, 8).unwrap()
}

/// Initial data concentrated near the brane so the finite-speed budget keeps
/// a two-unit run away from the inner truncation radius.
fn near_brane_profile(y0: f64, rng: &mut SeededStream) -> impl Fn(f64) -> f64 {
    // Narrow enough to be band-limited below m ~ 30, far enough from the
    // window edges that the cut sits under 1e-5 of the peak.
    let c = y0 + rng.in_range(1.2, 1.5);
    let s = rng.in_range(0.18, 0.22);
    let a = rng.in_range(0.5, 1.0);
    move |y: f64| a * (-((y - c) / s).powi(2) / 2.0).exp() * common::window((y - (y0 + 1.55)) / 1.45)
}

/// Cubic Lagrange interpolation from a uniform grid; zero outside.
fn interp_uniform(rho_grid: &[f64], values: &[Complex64], target: f64) -> Complex64 {
    let n = rho_grid.len();
    let h = rho_grid[1] - rho_grid[0];
    if target < rho_grid[0] || target > rho_grid[n - 1] {
        return Complex64::default();
    }
    let pos = (target - rho_grid[0]) / h;
    let i = (pos.floor() as usize).clamp(1, n - 3);
    let t = pos - i as f64;
    // nodes i-1, i, i+1, i+2
    let l0 = -t * (t - 1.0) * (t - 2.0) / 6.0;
    let l1 = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
    let l2 = -(t + 1.0) * t * (t - 2.0) / 2.0;
    let l3 = (t + 1.0) * t * (t - 1.0) / 6.0;
    l0 * values[i - 1] + l1 * values[i] + l2 * values[i + 1] + l3 * values[i + 2]
}

fn fd_config(spec: &OperatorSpec, n: usize) -> FdConfig {
    // Support ends at y0 + 2.95 and runs last two tau units (unit speed in
    // y), so the inner truncation must sit beyond y = y0 + 5; rho = 0.004 is
    // y ~ 6.2.
    let rho_min = 0.004;
    let drho = (spec.geometry.rho0 - rho_min) / (n - 1) as f64;
    FdConfig { rho_min, n_rho: n, dt: 0.42 * drho / spec.geometry.rho0.sinh(), bc: spec.bc, safety: 0.45 }
}

/// Evolve one xi row with the FD oracle and sample on the quadrature nodes.
fn fd_evolve_row(
    basis: &SpectralBasis,
    config: &FdConfig,
    xi: f64,
    u0f: &dyn Fn(f64) -> Complex64,
    u1f: &dyn Fn(f64) -> Complex64,
    tau_star: f64,
    tau_end: f64,
) -> (Vec<Complex64>, Vec<Complex64>) {
    let spec = &basis.spec;
    let grid = config.grid(spec);
    let u0: Vec<Complex64> = grid.iter().map(|&r| u0f(r)).collect();
    let u1: Vec<Complex64> = grid.iter().map(|&r| u1f(r)).collect();
    let out = run(spec, config, xi, &u0, &u1, tau_star, tau_end).unwrap();
    let u: Vec<Complex64> =
        basis.quad.rho_nodes.iter().map(|&r| interp_uniform(&grid, &out.u, r)).collect();
    let ut: Vec<Complex64> =
        basis.quad.rho_nodes.iter().map(|&r| interp_uniform(&grid, &out.ut, r)).collect();
    (u, ut)
}

#[test]
fn spectral_vs_fd_agreement_and_order() {
    let basis = graviton_basis(30.0);
    let spec = basis.spec;
    let y0 = spec.geometry.y0;
    let mut rng = SeededStream::new(0xFD0C);
    let mut errors_coarse = Vec::new();

    for trial in 0..5 {
        let p0 = near_brane_profile(y0, &mut rng);
        let p1 = near_brane_profile(y0, &mut rng);
        let u0f = move |rho: f64| Complex64::new(p0(rho_to_y(rho).unwrap()), 0.0);
        let u1f = move |rho: f64| Complex64::new(0.0, 0.6 * p1(rho_to_y(rho).unwrap()));

        for &xi in &[0.0_f64, 1.0] {
            // spectral route: single-xi "bulk" evolved through the tower
            let xi_grid = vec![xi.max(1e-9)];
            let nrho = basis.quad.len();
            let mut state = BulkState::zero(xi_grid.clone(), nrho, 0.0);
            for (r, &rho) in basis.quad.rho_nodes.iter().enumerate() {
                state.u[r] = u0f(rho);
                state.ut[r] = u1f(rho);
            }
            let coeffs = decompose(&state, &basis).unwrap();
            let ev = evolve_tower(&coeffs, &basis, 2.0).unwrap();
            let back = reconstruct(&ev, &basis).unwrap();

            let config = fd_config(&spec, 400);
            let (fd_u, _) = fd_evolve_row(&basis, &config, xi.max(1e-9), &u0f, &u1f, 0.0, 2.0);

            let mut err = 0.0;
            let mut nrm = 0.0;
            for r in 0..nrho {
                err += basis.quad.weights_h[r] * (back.row_u(0)[r] - fd_u[r]).norm_sqr();
                nrm += basis.quad.weights_h[r] * fd_u[r].norm_sqr();
            }
            let rel = (err / nrm).sqrt();
            assert!(rel < 1e-2, "trial {trial} xi={xi}: spectral vs FD {rel}");
            if trial == 0 && xi == 1.0 {
                errors_coarse.push(rel);
                // refinement: halve the grid spacing, error ratio ~ 4
                let config2 = fd_config(&spec, 800);
                let (fd_u2, _) = fd_evolve_row(&basis, &config2, xi, &u0f, &u1f, 0.0, 2.0);
                let mut err2 = 0.0;
                for r in 0..nrho {
                    err2 += basis.quad.weights_h[r] * (back.row_u(0)[r] - fd_u2[r]).norm_sqr();
                }
                let rel2 = (err2 / nrm).sqrt();
                let ratio = rel / rel2;
                assert!(
                    ratio > 2.5 && ratio < 6.5,
                    "refinement ratio {ratio} not second order ({rel} -> {rel2})"
                );
            }
        }
    }
}

#[test]
fn fd_commutes_with_decomposition() {
    let basis = graviton_basis(24.0);
    let spec = basis.spec;
    let y0 = spec.geometry.y0;
    let mut rng = SeededStream::new(0xC0317);
    let p0 = near_brane_profile(y0, &mut rng);
    let p1 = near_brane_profile(y0, &mut rng);
    let u0f = move |rho: f64| Complex64::new(p0(rho_to_y(rho).unwrap()), 0.0);
    let u1f = move |rho: f64| Complex64::new(0.3 * p1(rho_to_y(rho).unwrap()), 0.0);

    let rad = RadialQuadrature::new(3.0, 4, 4).unwrap();
    let state = BulkState::from_profiles(&rad, &basis, 0.0, |_, rho| u0f(rho), |_, rho| u1f(rho));
    let tower_route = evolve_tower(&decompose(&state, &basis).unwrap(), &basis, 2.0).unwrap();

    let config = fd_config(&spec, 400);
    let mut fd_state = BulkState::zero(rad.xi_nodes.clone(), basis.quad.len(), 2.0);
    for (i, &xi) in rad.xi_nodes.iter().enumerate() {
        let (u, ut) = fd_evolve_row(&basis, &config, xi, &u0f, &u1f, 0.0, 2.0);
        let nr = basis.quad.len();
        fd_state.u[i * nr..(i + 1) * nr].copy_from_slice(&u);
        fd_state.ut[i * nr..(i + 1) * nr].copy_from_slice(&ut);
    }
    let fd_route = decompose(&fd_state, &basis).unwrap();

    // Compare mode coefficients in the energy-weighted metric.
    let mut err = 0.0;
    let mut nrm = 0.0;
    for (a, b) in tower_route.point.iter().zip(&fd_route.point) {
        for i in 0..a.len() {
            err += rad.measure(i) * (a.u_hat[i] - b.u_hat[i]).norm_sqr();
            nrm += rad.measure(i) * a.u_hat[i].norm_sqr();
        }
    }
    for (a, b) in tower_route.continuous.iter().zip(&fd_route.continuous) {
        for i in 0..a.len() {
            err += rad.measure(i) * (a.u_hat[i] - b.u_hat[i]).norm_sqr();
            nrm += rad.measure(i) * a.u_hat[i].norm_sqr();
        }
    }
    let rel = (err / nrm).sqrt();
    assert!(rel < 1e-2, "commutation defect {rel}");
}

#[test]
fn x1_control_of_tower() {
    // (naurme): mode-summed H1-type energies bounded by the X1 data norm
    // with one shared constant across the family.
    let basis = graviton_basis(24.0);
    let y0 = basis.spec.geometry.y0;
    let rad = RadialQuadrature::new(4.0, 5, 5).unwrap();
    let mut rng = SeededStream::new(0x1CADE);
    let mut worst_ratio = 0.0_f64;
    for _ in 0..6 {
        let p0 = band_limited_profile(y0, &mut rng);
        let p1 = band_limited_profile(y0, &mut rng);
        let state = BulkState::from_profiles(&rad, &basis, 0.0, |xi, rho| {
            Complex64::new((-(0.4 * xi * xi)).exp() * p0(rho_to_y(rho).unwrap()), 0.0)
        }, |xi, rho| {
            Complex64::new(0.0, (-(0.3 * xi * xi)).exp() * p1(rho_to_y(rho).unwrap()))
        });
        let coeffs = decompose(&state, &basis).unwrap();

        let mut lhs = 0.0;
        for (f, &m) in coeffs.continuous.iter().zip(&basis.continuous.m_nodes) {
            let mut acc = 0.0;
            for i in 0..f.len() {
                let xi = f.xi_grid[i];
                acc += rad.measure(i)
                    * (f.ut_hat[i].norm_sqr()
                        + xi * xi * f.u_hat[i].norm_sqr()
                        + m * m * f.u_hat[i].norm_sqr());
            }
            lhs += basis.continuous.m_weights[coeffs
                .continuous
                .iter()
                .position(|g| std::ptr::eq(g, f))
                .unwrap()]
                * acc;
        }

        // X1 data norm
        let quad = &basis.quad;
        let mut rhs = 0.0;
        for i in 0..state.xi_grid.len() {
            let xi = state.xi_grid[i];
            let u = state.row_u(i);
            let ut = state.row_ut(i);
            let du = quad.deriv_rho(u);
            for (r, &wh) in quad.weights_h.iter().enumerate() {
                let s = quad.sinh_rho[r];
                rhs += rad.measure(i)
                    * wh
                    * (u[r].norm_sqr()
                        + xi * xi * u[r].norm_sqr()
                        + (s * du[r]).norm_sqr()
                        + ut[r].norm_sqr());
            }
        }
        worst_ratio = worst_ratio.max(lhs / rhs);
    }
    assert!(worst_ratio < 1.0e3, "naurme shared constant exceeded: {worst_ratio}");
}

#[test]
fn graviton_residual_decay_and_drift() {
    let basis = graviton_basis(24.0);
    let y0 = basis.spec.geometry.y0;
    let rad = RadialQuadrature::new(4.0, 6, 6).unwrap();
    let mut rng = SeededStream::new(0x6A17);
    let p0 = band_limited_profile(y0, &mut rng);
    let p1 = band_limited_profile(y0, &mut rng);
    let state = BulkState::from_profiles(&rad, &basis, 0.0, |xi, rho| {
        Complex64::new((-(0.4 * xi * xi)).exp() * (p0(rho_to_y(rho).unwrap()) + 0.5), 0.0)
    }, |xi, rho| {
        Complex64::new(0.3 * (-(0.3 * xi * xi)).exp() * p1(rho_to_y(rho).unwrap()), 0.0)
    });
    let taus = default_schedule(0.0, 12.0);
    let residuals = graviton_residual_schedule(&state, &basis, &rad, &taus).unwrap();

    let initial = residuals[0].residual;
    let at8 = residuals.iter().find(|r| r.tau >= 8.0).unwrap();
    assert!(
        at8.residual < 0.1 * initial,
        "(deka) residual at tau=8: {} vs initial {}",
        at8.residual,
        initial
    );
    // trend to zero
    assert!(residuals.last().unwrap().residual < at8.residual * 1.001);

    // (dekaa): e^{3 tau/2} drift bounded by the mode-data functional
    // 2 e^{3|tau*|} sum_m I0(m), here tau* = 0.
    let coeffs = decompose(&state, &basis).unwrap();
    let mut d = 0.0;
    for ((f, &m), w) in coeffs
        .continuous
        .iter()
        .zip(&basis.continuous.m_nodes)
        .zip(&basis.continuous.m_weights)
    {
        for i in 0..f.len() {
            let xi = f.xi_grid[i];
            d += w * rad.measure(i)
                * (f.ut_hat[i].norm_sqr()
                    + xi * xi * f.u_hat[i].norm_sqr()
                    + m * m * f.u_hat[i].norm_sqr());
        }
    }
    let bound = (2.0 * d).sqrt();
    for r in &residuals {
        assert!(
            r.weighted_drift <= bound * (1.0 + 1e-6),
            "(dekaa) drift {} exceeds {} at tau={}",
            r.weighted_drift,
            bound,
            r.tau
        );
    }
}

#[test]
fn horizon_exponent_with_and_without_trace() {
    let basis = graviton_basis(24.0);
    let rad = RadialQuadrature::new(3.5, 6, 6).unwrap();
    // graviton-rich data: rho-independent profile, phi != 0
    let state = BulkState::from_profiles(&rad, &basis, 0.0, |xi, _| {
        Complex64::new((-(0.5 * xi * xi)).exp(), 0.0)
    }, |_, _| Complex64::default());
    let taus: Vec<f64> = (0..9).map(|k| 4.0 + 0.75 * k as f64).collect();
    let fit = horizon_energy(&state, &basis, &rad, &taus).unwrap();
    assert!(!fit.trace_is_zero);
    assert!((fit.exponent + 2.0).abs() < 0.1, "horizon exponent {}", fit.exponent);

    // engineered disappearing solution: per-xi, u1 kills the trace
    let sinc = |z: f64| if z.abs() < 1e-6 { 1.0 } else { z.sin() / z };
    let sinc1 = |z: f64| {
        if z.abs() < 1e-3 {
            1.0 / 3.0 - z * z / 30.0
        } else {
            (z.sin() / z - z.cos()) / (z * z)
        }
    };
    let state0 = BulkState::from_profiles(&rad, &basis, 0.0, |xi, _| {
        Complex64::new((-(0.5 * xi * xi)).exp(), 0.0)
    }, |xi, _| {
        Complex64::new(-(-(0.5 * xi * xi)).exp() * sinc(xi) / sinc1(xi), 0.0)
    });
    let fit0 = horizon_energy(&state0, &basis, &rad, &taus).unwrap();
    assert!(fit0.trace_is_zero, "engineered trace should vanish");
    assert!(
        fit0.exponent > -1.0,
        "disappearing solution should grow strictly slower than 1/t^2: {}",
        fit0.exponent
    );
}

#[test]
fn trace_limit_distances_shrink() {
    let basis = graviton_basis(24.0);
    let rad = RadialQuadrature::new(3.5, 6, 6).unwrap();
    let phi = SpectralField::new(
        rad.xi_nodes.clone(),
        rad.xi_nodes.iter().map(|&x| Complex64::new((-(0.6 * x * x)).exp(), 0.0)).collect(),
        rad.xi_nodes.iter().map(|&x| Complex64::new(0.0, 0.2 * (-(0.5 * x * x)).exp())).collect(),
        0.0,
    )
    .unwrap();
    let _ = &basis;
    // The d_tau quotient decays like e^{-tau} but carries an e^{2 tau}
    // roundoff amplification, so its floor in f64 sits near 2e-5 around
    // tau = 11; stop there.
    let taus = [1.0, 2.0, 4.0, 7.0, 9.0, 11.0];
    let lims = trace_limits(&phi, &rad, &taus).unwrap();
    for pair in lims.windows(2) {
        assert!(pair[1].h1_distance < pair[0].h1_distance * 1.001 + 1e-12);
        assert!(pair[1].dtau_distance < pair[0].dtau_distance * 1.001 + 1e-12);
    }
    assert!(lims.last().unwrap().h1_distance < 1e-9);
    assert!(lims.last().unwrap().dtau_distance < 5e-5);
}
