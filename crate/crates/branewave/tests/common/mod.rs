//! Shared test oracles, independent of the library's evaluation paths.
#![allow(dead_code)]

use num_complex::Complex64;

/// Adaptive RK45 (Dormand-Prince) for the mode ODE
/// u'' = -3 u' - (e^{-2 tau} xi^2 + kappa) u, complex state.
pub fn ode_oracle_evolve(
    kappa: f64,
    xi: f64,
    tau_star: f64,
    tau_end: f64,
    u0: Complex64,
    u1: Complex64,
) -> (Complex64, Complex64) {
    type State = [Complex64; 2];
    let f = |tau: f64, s: &State| -> State {
        let coeff = (-2.0 * tau).exp() * xi * xi + kappa;
        [s[1], -3.0 * s[1] - coeff * s[0]]
    };
    // Dormand-Prince coefficients.
    const A: [[f64; 6]; 6] = [
        [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
        [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
        [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
        [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
        [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
    ];
    const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
    const B5: [f64; 7] =
        [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
    const B4: [f64; 7] = [
        5179.0 / 57600.0,
        0.0,
        7571.0 / 16695.0,
        393.0 / 640.0,
        -92097.0 / 339200.0,
        187.0 / 2100.0,
        1.0 / 40.0,
    ];

    let dir = if tau_end >= tau_star { 1.0 } else { -1.0 };
    let mut tau = tau_star;
    let mut state: State = [u0, u1];
    let mut h: f64 = dir * 1e-3;
    let rtol = 1e-12;
    let atol = 1e-14;
    let mut k = [[Complex64::default(); 2]; 7];

    while (tau_end - tau) * dir > 1e-15 {
        if ((tau + h) - tau_end) * dir > 0.0 {
            h = tau_end - tau;
        }
        k[0] = f(tau, &state);
        for stage in 0..6 {
            let mut y = state;
            for (j, kj) in k.iter().enumerate().take(stage + 1) {
                y[0] += h * A[stage][j] * kj[0];
                y[1] += h * A[stage][j] * kj[1];
            }
            k[stage + 1] = f(tau + C[stage] * h, &y);
        }
        let mut y5 = state;
        let mut y4 = state;
        for (j, kj) in k.iter().enumerate() {
            y5[0] += h * B5[j] * kj[0];
            y5[1] += h * B5[j] * kj[1];
            y4[0] += h * B4[j] * kj[0];
            y4[1] += h * B4[j] * kj[1];
        }
        let sc0 = atol + rtol * y5[0].norm().max(state[0].norm());
        let sc1 = atol + rtol * y5[1].norm().max(state[1].norm());
        let err =
            (((y5[0] - y4[0]).norm() / sc0).powi(2) + ((y5[1] - y4[1]).norm() / sc1).powi(2))
                .sqrt()
                / 2.0_f64.sqrt();
        if err <= 1.0 {
            tau += h;
            state = y5;
        }
        let factor = (0.9 * err.powf(-0.2)).clamp(0.2, 5.0);
        h *= factor;
        if h.abs() < 1e-12 {
            h = dir * 1e-12;
        }
    }
    (state[0], state[1])
}

/// Brute-force Gauss series for the regularized 2F1 at the hypergeometric
/// argument (1-x)/2 < 0 (no Pfaff map), usable for x < 3.
pub fn hyp2f1_reg_direct(a: Complex64, b: Complex64, c: Complex64, z: f64) -> Complex64 {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for k in 0..100_000 {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) * z / ((c + kf) * (kf + 1.0));
        sum += term;
        if term.norm() < 1e-17 * sum.norm() {
            break;
        }
    }
    sum * recip_gamma_ref(c)
}

/// Reference reciprocal gamma via the product definition (slowly convergent
/// Euler form with many terms), independent of the Lanczos path.
pub fn recip_gamma_ref(z: Complex64) -> Complex64 {
    // 1/Gamma(z) = z e^{gamma z} prod_{n>=1} (1 + z/n) e^{-z/n}
    const EULER: f64 = 0.577_215_664_901_532_9;
    let mut prod = z * (EULER * z).exp();
    for n in 1..200_000 {
        let nf = n as f64;
        prod *= (1.0 + z / nf) * (-z / nf).exp();
    }
    prod
}

/// Independent P^{-mu}_nu(x) for x < 3: direct series at (1-x)/2.
pub fn legendre_p_direct(nu: f64, mu: Complex64, x: f64) -> Complex64 {
    let w = (x - 1.0) / (x + 1.0);
    let half_mu = 0.5 * mu;
    let wpow = (half_mu * w.ln()).exp();
    wpow * hyp2f1_reg_direct(
        Complex64::new(nu + 1.0, 0.0),
        Complex64::new(-nu, 0.0),
        mu + 1.0,
        0.5 * (1.0 - x),
    )
}

/// Deterministic xorshift-based f64 stream in [-1, 1]; keeps the test
/// dependencies self-contained where a full RNG is not needed.
pub struct SeededStream(u64);

impl SeededStream {
    pub fn new(seed: u64) -> Self {
        SeededStream(seed.max(1))
    }

    pub fn next_f64(&mut self) -> f64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        (x >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
    }

    pub fn in_range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * 0.5 * (self.next_f64() + 1.0)
    }
}

/// Smooth compact window (C-infinity bump), 1-normalized at the center.
pub fn window(t: f64) -> f64 {
    if t.abs() < 1.0 {
        (1.0 - 1.0 / (1.0 - t * t)).exp()
    } else {
        0.0
    }
}

/// Band-limited transverse profile: Gaussians in the Liouville coordinate
/// under a wide compact window; content above m ~ 30 is negligible.
pub fn band_limited_profile(y0: f64, seeds: &mut SeededStream) -> impl Fn(f64) -> f64 {
    let c1 = y0 + seeds.in_range(1.6, 2.6);
    let c2 = y0 + seeds.in_range(2.2, 3.4);
    let s1 = seeds.in_range(0.35, 0.5);
    let s2 = seeds.in_range(0.4, 0.55);
    let a2 = seeds.in_range(-0.8, 0.8);
    let y0c = y0;
    move |y: f64| {
        window((y - (y0c + 4.85)) / 4.7)
            * ((-((y - c1) / s1).powi(2) / 2.0).exp() + a2 * (-((y - c2) / s2).powi(2) / 2.0).exp())
    }
}
