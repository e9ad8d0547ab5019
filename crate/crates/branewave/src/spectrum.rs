//! Spectral theory of the transverse Sturm-Liouville operator
//! L = -sinh^{-2}(rho) d/drho (sinh^4(rho) d/drho) + M^2 sinh^2(rho)
//! on (0, rho0) with a Robin or Dirichlet condition at the brane.
//!
//! Eigenvalues below 9/4 solve a transcendental equation in Legendre
//! functions evaluated at the brane; the absolutely continuous part [9/4,
//! inf) carries one generalized eigenfunction per mass m > 3/2, normalized
//! so that the forward map S is an isometry onto L^2(3/2, inf).

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::BraneGeometry;
use crate::quadrature::{gauss_legendre, RhoQuadrature, RhoQuadratureConfig};
use crate::specialfn::{gamma_complex, legendre_p, legendre_p_xm1, olver_q_xm1};

/// Boundary condition at rho0. Dirichlet is its own case, never a large
/// Robin coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum BoundaryCondition {
    Robin(f64),
    Dirichlet,
}

/// The operator L_c: bulk mass, boundary condition, brane geometry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperatorSpec {
    pub mass: f64,
    pub bc: BoundaryCondition,
    pub geometry: BraneGeometry,
    /// Legendre degree nu_L = -1/2 + sqrt(M^2 + 4) >= 3/2.
    pub legendre_degree: f64,
}

impl OperatorSpec {
    pub fn new(mass: f64, bc: BoundaryCondition, geometry: BraneGeometry) -> Result<Self> {
        if !(mass >= 0.0) {
            return Err(Error::domain("operator_spec", format!("mass {mass} must be >= 0")));
        }
        let legendre_degree = -0.5 + (mass * mass + 4.0).sqrt();
        Ok(OperatorSpec { mass, bc, geometry, legendre_degree })
    }

    /// Robin coefficient mapped to the x = cosh(rho) frame:
    /// v'(x_b) = beta_c v(x_b) with beta_c = alpha/sqrt(1-a^2) (c - 3/(2 sqrt(1-a^2))).
    fn beta_c(&self) -> Option<f64> {
        match self.bc {
            BoundaryCondition::Robin(c) => {
                let alpha = self.geometry.alpha;
                let root = (1.0 - alpha * alpha).sqrt();
                Some(alpha / root * (c - 1.5 / root))
            }
            BoundaryCondition::Dirichlet => None,
        }
    }
}

/// Residual of the eigenvalue equation at lambda < 9/4.
///
/// Robin: (c sqrt(1-a^2) - 2 + sqrt(M^2+4)) P^{-mu}_{nu}(x_b)
///        + alpha (-1/2 + sqrt(M^2+4) - mu) P^{-mu}_{nu-1}(x_b),
/// Dirichlet: P^{-mu}_{nu}(x_b), with mu = sqrt(9/4 - lambda).
pub fn transcendental_residual(lambda: f64, spec: &OperatorSpec) -> Result<f64> {
    if !(lambda < 2.25) {
        return Err(Error::domain(
            "transcendental_residual",
            format!("lambda {lambda} must lie below 9/4"),
        ));
    }
    let mu = (2.25 - lambda).sqrt();
    let xb = spec.geometry.x_boundary();
    let nu = spec.legendre_degree;
    let root_m = (spec.mass * spec.mass + 4.0).sqrt();
    let muc = Complex64::new(mu, 0.0);
    match spec.bc {
        BoundaryCondition::Robin(c) => {
            let alpha = spec.geometry.alpha;
            let (p_nu, _) = legendre_p(nu, muc, xb)?;
            let (p_nu1, _) = legendre_p(nu - 1.0, muc, xb)?;
            let pref1 = c * (1.0 - alpha * alpha).sqrt() - 2.0 + root_m;
            let pref2 = alpha * (-0.5 + root_m - mu);
            Ok(pref1 * p_nu.re + pref2 * p_nu1.re)
        }
        BoundaryCondition::Dirichlet => {
            let (p_nu, _) = legendre_p(nu, muc, xb)?;
            Ok(p_nu.re)
        }
    }
}

/// Point spectrum of L_c with unit-H-norm eigenfunction samples.
#[derive(Debug, Clone)]
pub struct PointSpectrum {
    pub eigenvalues: Vec<f64>,
    /// Residual of the transcendental equation at each eigenvalue.
    pub residuals: Vec<f64>,
    /// Eigenfunction samples w(rho_i; lambda_j), unit H-norm, on the
    /// quadrature nodes; real valued.
    pub eigenfunctions: Vec<Vec<f64>>,
    /// Eigenfunction value at the brane rho0.
    pub boundary_values: Vec<f64>,
}

/// Scan, bracket and bisect the residual on [search_floor, 9/4).
///
/// The scan step starts at 1e-3 and halves until the sign-change count is
/// stable, so no crossing wider than the final step is missed.
pub fn point_spectrum(
    spec: &OperatorSpec,
    quad: &RhoQuadrature,
    search_floor: f64,
) -> Result<PointSpectrum> {
    if !(search_floor < 2.25) {
        return Err(Error::domain("point_spectrum", "search floor must lie below 9/4".to_string()));
    }
    let top = 2.25 - 1e-6;
    let f = |lambda: f64| transcendental_residual(lambda, spec);

    let mut step = 1.0e-3;
    let mut brackets = scan_brackets(&f, search_floor, top, step)?;
    for _ in 0..4 {
        step *= 0.5;
        let refined = scan_brackets(&f, search_floor, top, step)?;
        let stable = refined.len() == brackets.len();
        brackets = refined;
        if stable {
            break;
        }
    }

    let mut eigenvalues = Vec::new();
    let mut residuals = Vec::new();
    for (mut a, mut b) in brackets {
        let mut fa = f(a)?;
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            let fm = f(mid)?;
            if (fa < 0.0) == (fm < 0.0) {
                a = mid;
                fa = fm;
            } else {
                b = mid;
            }
            if b - a < 1.0e-11 {
                break;
            }
        }
        let lambda = 0.5 * (a + b);
        eigenvalues.push(lambda);
        residuals.push(f(lambda)?);
    }

    let mut eigenfunctions = Vec::with_capacity(eigenvalues.len());
    let mut boundary_values = Vec::with_capacity(eigenvalues.len());
    for &lambda in &eigenvalues {
        let (samples, at_brane) = normalized_eigenfunction(spec, quad, lambda)?;
        eigenfunctions.push(samples);
        boundary_values.push(at_brane);
    }
    Ok(PointSpectrum { eigenvalues, residuals, eigenfunctions, boundary_values })
}

fn scan_brackets(
    f: &dyn Fn(f64) -> Result<f64>,
    lo: f64,
    hi: f64,
    step: f64,
) -> Result<Vec<(f64, f64)>> {
    let n = ((hi - lo) / step).ceil() as usize;
    let mut out = Vec::new();
    let mut prev_x = lo;
    let mut prev_f = f(lo)?;
    for i in 1..=n {
        let x = (lo + i as f64 * step).min(hi);
        let fx = f(x)?;
        if !fx.is_finite() {
            return Err(Error::convergence("point_spectrum", format!("residual not finite at {x}")));
        }
        if prev_f == 0.0 {
            out.push((prev_x - 0.5 * step, prev_x + 0.5 * step));
        } else if (prev_f < 0.0) != (fx < 0.0) {
            out.push((prev_x, x));
        }
        prev_x = x;
        prev_f = fx;
    }
    Ok(out)
}

/// coth(y) - 1 = 2 e^{-2y} / (1 - e^{-2y}), exact even at the deep tail.
fn coth_minus_one(y: f64) -> f64 {
    let em = (-2.0 * y).exp();
    2.0 * em / (1.0 - em)
}

/// Eigenfunction w(rho; lambda) = N^{-1} (sinh rho)^{-3/2} P^{-mu}_{nu}(cosh rho)
/// with N the L^2(J', dx/(x^2-1)) norm of P, i.e. unit H-norm.
fn normalized_eigenfunction(
    spec: &OperatorSpec,
    quad: &RhoQuadrature,
    lambda: f64,
) -> Result<(Vec<f64>, f64)> {
    let mu = (2.25 - lambda).sqrt();
    let muc = Complex64::new(mu, 0.0);
    let nu = spec.legendre_degree;
    let y0 = spec.geometry.y0;

    // Norm integral in the Liouville variable: integral_{y0}^{inf} vtilde^2 dy
    // with vtilde(y) = P^{-mu}_{nu}(coth y); the tail beyond the cut decays
    // like e^{-2 mu y} and is added in closed form.
    let y_cut = y0 + 12.0;
    let (gl_x, gl_w) = gauss_legendre(12);
    let n_panels = 60;
    let h = (y_cut - y0) / n_panels as f64;
    let mut norm_sq = 0.0;
    for p in 0..n_panels {
        let a = y0 + p as f64 * h;
        for (x, w) in gl_x.iter().zip(&gl_w) {
            let y = a + 0.5 * h * (x + 1.0);
            let (pv, _) = legendre_p_xm1(nu, muc, coth_minus_one(y))?;
            norm_sq += 0.5 * h * w * pv.re * pv.re;
        }
    }
    let (p_cut, _) = legendre_p_xm1(nu, muc, coth_minus_one(y_cut))?;
    norm_sq += p_cut.re * p_cut.re / (2.0 * mu);
    let norm = norm_sq.sqrt();

    let mut samples = Vec::with_capacity(quad.len());
    for (&sr, &y) in quad.sinh_rho.iter().zip(&quad.y_nodes) {
        let (pv, _) = legendre_p_xm1(nu, muc, coth_minus_one(y))?;
        samples.push(pv.re / (norm * sr.powf(1.5)));
    }
    let (pb, _) = legendre_p(nu, muc, spec.geometry.x_boundary())?;
    let at_brane = pb.re / (norm * spec.geometry.rho0.sinh().powf(1.5));
    Ok((samples, at_brane))
}

/// One generalized eigenfunction w(rho; m^2), real valued, with the Robin or
/// Dirichlet condition built in.
#[derive(Debug, Clone)]
pub struct GeneralizedEigenfunction {
    pub m: f64,
    /// Samples on the quadrature nodes.
    pub w: Vec<f64>,
    pub w_at_brane: f64,
    pub w_prime_at_brane: f64,
    /// Largest |Im|/scale seen while taking the real part; a reality check.
    pub imag_defect: f64,
}

/// Guard band above the continuous-spectrum threshold m = 3/2.
pub const M_GUARD: f64 = 1.0e-6;

pub fn generalized_eigenfunction(
    spec: &OperatorSpec,
    m: f64,
    quad: &RhoQuadrature,
) -> Result<GeneralizedEigenfunction> {
    if !(m > 1.5 + M_GUARD) {
        return Err(Error::domain(
            "generalized_eigenfunction",
            format!("m {m} inside the guard band above 3/2"),
        ));
    }
    let nu = spec.legendre_degree;
    let varsigma = (m * m - 2.25).sqrt();
    let mu = Complex64::new(0.0, -varsigma); // bold-Q order -i varsigma; P order +i varsigma
    let xb = spec.geometry.x_boundary();

    let (pb, dpb) = legendre_p_xm1(nu, mu, xb - 1.0)?;
    let (qb, dqb) = olver_q_xm1(nu, mu, xb - 1.0)?;
    let (d_p, d_q) = match spec.beta_c() {
        Some(beta) => (dpb - beta * pb, dqb - beta * qb),
        None => (pb, qb),
    };
    let gam = gamma_complex(Complex64::new(nu + 1.0, -varsigma))?;
    // Isometric normalization of the spectral measure: the upper solution
    // A P^{i vs}(coth y) has unit-flux Wronskian for A^2 = pi/(2 sinh(pi vs)),
    // and the self-dual kernel is 2 sqrt(m/pi) vtilde (checked against the
    // free half-line sine transform). Net amplitude sqrt(2 m sinh(pi vs))/pi.
    let pi = std::f64::consts::PI;
    let amp = (2.0 * m * (pi * varsigma).sinh()).sqrt() / pi;
    let pref = amp * gam / d_p.norm();

    let mut w = Vec::with_capacity(quad.len());
    let mut imag_defect = 0.0_f64;
    let mut scale = 0.0_f64;
    for (&sr, &y) in quad.sinh_rho.iter().zip(&quad.y_nodes) {
        let xm1 = coth_minus_one(y);
        let (pv, _) = legendre_p_xm1(nu, mu, xm1)?;
        let (qv, _) = olver_q_xm1(nu, mu, xm1)?;
        let val = pref * (d_p * qv - d_q * pv);
        let s32 = sr.powf(1.5);
        w.push(val.re / s32);
        imag_defect = imag_defect.max(val.im.abs());
        scale = scale.max(val.re.abs());
    }
    imag_defect /= scale.max(1e-300);

    // Value and rho-derivative at the brane from the analytic x-derivatives.
    let valb = pref * (d_p * qb - d_q * pb);
    let dvalb_dx = pref * (d_p * dqb - d_q * dpb);
    let s = spec.geometry.rho0.sinh();
    let ch = spec.geometry.rho0.cosh();
    let s32 = s.powf(1.5);
    let w_at_brane = valb.re / s32;
    // d/drho [ F(cosh rho) sinh^{-3/2} ] = F'(x) sinh^{-1/2} - (3/2) coth(rho) F sinh^{-3/2}
    let w_prime_at_brane = dvalb_dx.re * s / s32 - 1.5 * ch / s * valb.re / s32;

    Ok(GeneralizedEigenfunction { m, w, w_at_brane, w_prime_at_brane, imag_defect })
}

/// Sampled continuous basis on an m-quadrature graded toward the threshold.
#[derive(Debug, Clone)]
pub struct ContinuousBasis {
    pub m_nodes: Vec<f64>,
    pub m_weights: Vec<f64>,
    pub functions: Vec<GeneralizedEigenfunction>,
}

/// m-panel edges: geometric grading away from 3/2, then uniform panels.
fn m_panel_edges(m_max: f64) -> Vec<f64> {
    let mut edges = vec![1.5 + M_GUARD];
    let mut d = 4.0 * M_GUARD;
    while 1.5 + d < 2.0 {
        edges.push(1.5 + d);
        d *= 4.0;
    }
    let mut e = 2.0;
    while e < m_max - 1e-12 {
        edges.push(e);
        e += 0.4;
    }
    edges.push(m_max);
    edges
}

impl ContinuousBasis {
    pub fn build(
        spec: &OperatorSpec,
        quad: &RhoQuadrature,
        m_max: f64,
        nodes_per_panel: usize,
    ) -> Result<Self> {
        if !(m_max > 2.0) {
            return Err(Error::Config { field: "m_max".into(), message: "must exceed 2".into() });
        }
        let edges = m_panel_edges(m_max);
        let (gl_x, gl_w) = gauss_legendre(nodes_per_panel);
        let mut m_nodes = Vec::new();
        let mut m_weights = Vec::new();
        for pair in edges.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            for (x, w) in gl_x.iter().zip(&gl_w) {
                m_nodes.push(a + 0.5 * (b - a) * (x + 1.0));
                m_weights.push(0.5 * (b - a) * w);
            }
        }
        let functions: Result<Vec<_>> = m_nodes
            .par_iter()
            .map(|&m| generalized_eigenfunction(spec, m, quad))
            .collect();
        Ok(ContinuousBasis { m_nodes, m_weights, functions: functions? })
    }
}

/// Point plus continuous basis with its quadrature; immutable once built.
#[derive(Debug, Clone)]
pub struct SpectralBasis {
    pub spec: OperatorSpec,
    pub quad: RhoQuadrature,
    pub point: PointSpectrum,
    pub continuous: ContinuousBasis,
    pub m_max: f64,
}

/// Default lower end of the eigenvalue scan: L_c is bounded below but the
/// bound is not explicit, so scan a generous window and report the residual.
pub fn default_search_floor(mass: f64) -> f64 {
    -(10.0_f64).max(4.0 * mass * mass + 10.0)
}

impl SpectralBasis {
    pub fn build(
        spec: OperatorSpec,
        quad_config: RhoQuadratureConfig,
        m_max: f64,
        m_nodes_per_panel: usize,
    ) -> Result<Self> {
        let quad = RhoQuadrature::new(spec.geometry, quad_config)?;
        let point = point_spectrum(&spec, &quad, default_search_floor(spec.mass))?;
        let continuous = ContinuousBasis::build(&spec, &quad, m_max, m_nodes_per_panel)?;
        Ok(SpectralBasis { spec, quad, point, continuous, m_max })
    }

    pub fn n_point(&self) -> usize {
        self.point.eigenvalues.len()
    }

    pub fn n_continuous(&self) -> usize {
        self.continuous.m_nodes.len()
    }
}

/// Spectral-side coefficients of one transverse profile.
#[derive(Debug, Clone, PartialEq)]
pub struct Coefficients {
    /// C_j = <u, w(.; lambda_j)>_H.
    pub point: Vec<Complex64>,
    /// S(Pi_ac u)(m_k) on the m-quadrature nodes.
    pub continuous: Vec<Complex64>,
}

/// Forward transform of a profile sampled on the basis quadrature nodes.
pub fn spectral_forward(u: &[Complex64], basis: &SpectralBasis) -> Result<Coefficients> {
    if u.len() != basis.quad.len() {
        return Err(Error::GridMismatch("spectral_forward: profile length".into()));
    }
    let point: Vec<Complex64> = basis
        .point
        .eigenfunctions
        .iter()
        .map(|w| basis.quad.inner_h_real(u, w))
        .collect();
    // Pi_ac u = u - sum C_j w_j, then S(m) = <Pi_ac u, w(.; m^2)>_H.
    let mut ac = u.to_vec();
    for (c, w) in point.iter().zip(&basis.point.eigenfunctions) {
        for (a, b) in ac.iter_mut().zip(w) {
            *a -= c * b;
        }
    }
    let continuous: Vec<Complex64> = basis
        .continuous
        .functions
        .iter()
        .map(|g| basis.quad.inner_h_real(&ac, &g.w))
        .collect();
    Ok(Coefficients { point, continuous })
}

/// Inverse transform: sum of point modes plus the m-integral.
pub fn spectral_inverse(coeffs: &Coefficients, basis: &SpectralBasis) -> Result<Vec<Complex64>> {
    if coeffs.point.len() != basis.n_point() || coeffs.continuous.len() != basis.n_continuous() {
        return Err(Error::GridMismatch("spectral_inverse: coefficient lengths".into()));
    }
    let mut out = vec![Complex64::default(); basis.quad.len()];
    for (c, w) in coeffs.point.iter().zip(&basis.point.eigenfunctions) {
        for (o, b) in out.iter_mut().zip(w) {
            *o += c * b;
        }
    }
    for ((s, wgt), g) in
        coeffs.continuous.iter().zip(&basis.continuous.m_weights).zip(&basis.continuous.functions)
    {
        for (o, b) in out.iter_mut().zip(&g.w) {
            *o += s * wgt * b;
        }
    }
    Ok(out)
}

/// Two-sided comparison of the H_1 norm with the spectral quadratic form.
#[derive(Debug, Clone, Copy)]
pub struct H1Equivalence {
    /// Shifted form: A ||u||_H^2 + ||sinh(rho) u'||_H^2 (+ M^2, boundary terms
    /// are absent here; the plain H_1 norm of the paper).
    pub h1_sq: f64,
    /// sum (A + lambda_j)|C_j|^2 + integral (A + m^2)|S|^2 dm.
    pub spectral_sq: f64,
    /// Shift A making both sides positive.
    pub shift: f64,
}

impl H1Equivalence {
    pub fn ratio(&self) -> f64 {
        self.spectral_sq / self.h1_sq
    }
}

/// Compare the H_1 norm of a profile with its spectral counterpart, with the
/// fixed shift A = 10 + |min(0, lambda_min)|.
pub fn h1_equivalence_check(u: &[Complex64], basis: &SpectralBasis) -> Result<H1Equivalence> {
    let coeffs = spectral_forward(u, basis)?;
    let shift =
        10.0 + basis.point.eigenvalues.iter().cloned().fold(0.0_f64, |a, l| a.min(l)).abs();
    let du = basis.quad.deriv_rho(u);
    let mut h1_sq = shift * basis.quad.norm_h_sq(u);
    for (i, d) in du.iter().enumerate() {
        h1_sq += basis.quad.weights_h[i] * (basis.quad.rho_nodes[i].sinh() * d).norm_sqr();
    }

    let mut spectral_sq = 0.0;
    for (c, l) in coeffs.point.iter().zip(&basis.point.eigenvalues) {
        spectral_sq += (shift + l) * c.norm_sqr();
    }
    for ((s, w), m) in coeffs
        .continuous
        .iter()
        .zip(&basis.continuous.m_weights)
        .zip(&basis.continuous.m_nodes)
    {
        spectral_sq += w * (shift + m * m) * s.norm_sqr();
    }
    Ok(H1Equivalence { h1_sq, spectral_sq, shift })
}
