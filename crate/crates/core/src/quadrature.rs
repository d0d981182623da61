//! Gauss-Legendre nodes and the Bloch-sphere average used by the
//! teleportation fidelity integral.

use std::f64::consts::PI;

/// Gauss-Legendre nodes and weights on [-1, 1], computed by Newton
/// iteration on the Legendre recurrence. Deterministic for a given `n`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    assert!(n >= 2, "need at least two nodes");
    let mut pairs = Vec::with_capacity(n);
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        pairs.push((x, w));
        if x.abs() > 1e-14 || 2 * i + 1 != n {
            pairs.push((-x, w));
        }
    }
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite nodes"));
    pairs
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// `(1/4π) ∫₀^{2π} dφ ∫₀^π f(θ, φ) sinθ dθ` with Gauss-Legendre in θ and
/// the uniform (periodic) trapezoid rule in φ.
pub fn bloch_sphere_average(
    f: &dyn Fn(f64, f64) -> f64,
    theta_nodes: usize,
    phi_nodes: usize,
) -> f64 {
    let gl = gauss_legendre(theta_nodes);
    let h_phi = 2.0 * PI / phi_nodes as f64;
    let mut total = 0.0;
    for k in 0..phi_nodes {
        let phi = k as f64 * h_phi;
        let mut inner = 0.0;
        for &(u, w) in &gl {
            let theta = (u + 1.0) * PI / 2.0;
            inner += w * (PI / 2.0) * f(theta, phi) * theta.sin();
        }
        total += inner * h_phi;
    }
    total / (4.0 * PI)
}
