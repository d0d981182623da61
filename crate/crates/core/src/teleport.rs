//! Two-qubit teleportation through two copies of a (thermal) channel
//! state: Bell-measurement probabilities, the output state, fidelity and
//! the Bloch-sphere-averaged fidelity.

use crate::cmatrix::{cr, pauli_pair, CMatrix, DensityMatrix, PureState};
use crate::error::{Error, Result};
use crate::graphene::{thermal_state, GrapheneParams};
use crate::quadrature::bloch_sphere_average;
use num_complex::Complex64;

/// Node counts of the average-fidelity quadrature.
pub const THETA_NODES: usize = 32;
pub const PHI_NODES: usize = 64;

/// The four Bell states in measurement order: Ψ-, Φ-, Φ+, Ψ+.
///
/// The order pairs index-wise with the Pauli corrections (1, σx, σy, σz):
/// a perfect Ψ- channel teleports exactly.
pub fn bell_states() -> [PureState; 4] {
    let inv = 1.0 / 2.0f64.sqrt();
    let mk = |amps: [Complex64; 4]| PureState::new(amps).expect("unit norm");
    [
        mk([cr(0.0), cr(inv), cr(-inv), cr(0.0)]),
        mk([cr(inv), cr(0.0), cr(0.0), cr(-inv)]),
        mk([cr(inv), cr(0.0), cr(0.0), cr(inv)]),
        mk([cr(0.0), cr(inv), cr(inv), cr(0.0)]),
    ]
}

/// Rank-1 projectors onto the Bell states, in the same order.
pub fn bell_projectors() -> [CMatrix; 4] {
    bell_states().map(|b| b.projector().matrix().clone())
}

/// P_i = Tr(E^i ρ_ch); the four values sum to one.
pub fn channel_probabilities(rho_ch: &DensityMatrix) -> [f64; 4] {
    bell_projectors().map(|e| (&e * rho_ch.matrix()).trace().re)
}

/// ρ_out = Σ_ij P_i P_j (σ_i⊗σ_j) ρ_in (σ_i⊗σ_j).
pub fn teleport_output(rho_in: &DensityMatrix, rho_ch: &DensityMatrix) -> DensityMatrix {
    let probs = channel_probabilities(rho_ch);
    let mut out = CMatrix::zeros(4).expect("4x4");
    for i in 0..4 {
        for j in 0..4 {
            let weight = probs[i] * probs[j];
            if weight == 0.0 {
                continue;
            }
            let op = pauli_pair(i, j);
            let term = &(&op * rho_in.matrix()) * &op;
            out = &out + &term.scale_re(weight);
        }
    }
    DensityMatrix::new(out.symmetrized()).expect("channel preserves states")
}

/// Input family cos(θ/2)|10⟩ + e^{iφ} sin(θ/2)|01⟩.
#[derive(Clone, Debug)]
pub struct InputState {
    pub theta: f64,
    pub phi: f64,
    pub vector: PureState,
}

impl InputState {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=std::f64::consts::PI + 1e-12).contains(&theta) {
            return Err(Error::InvalidArgument(format!(
                "theta must lie in [0, π], got {theta}"
            )));
        }
        if !phi.is_finite() {
            return Err(Error::InvalidArgument("phi must be finite".into()));
        }
        let half = theta / 2.0;
        let mut amps = [Complex64::default(); 4];
        amps[2] = cr(half.cos());
        amps[1] = Complex64::from_polar(half.sin(), phi);
        Ok(Self {
            theta,
            phi,
            vector: PureState::new(amps)?,
        })
    }

    pub fn projector(&self) -> DensityMatrix {
        self.vector.projector()
    }
}

/// Fidelity of a pure input against the channel output, ⟨ψ|ρ_out|ψ⟩.
pub fn fidelity_pure(input: &InputState, rho_out: &DensityMatrix) -> f64 {
    input.vector.expectation(rho_out.matrix()).re.clamp(0.0, 1.0)
}

/// The closed form of the output-matrix entries: a = 1/4 and the
/// hyperbolic expression for b (rescaled internally to avoid cosh
/// overflow at small T).
pub fn output_closed_ab(p: &GrapheneParams, temperature: f64) -> Result<(f64, f64)> {
    if !(temperature > 0.0) || !temperature.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "temperature must be positive and finite, got {temperature}"
        )));
    }
    let r = p.ratios()?;
    let s_plus = (r.n_plus * r.n_plus + r.eta22 * r.eta22).sqrt();
    let s_minus = (r.n_minus * r.n_minus + r.eta22 * r.eta22).sqrt();
    let u = p.lambda * s_minus / temperature;
    let v = p.lambda * s_plus / temperature;
    // (cosh u − sinh v) / (cosh u + cosh v), common factor e^m divided out
    let m = u.abs().max(v.abs());
    let num = (u - m).exp() + (-u - m).exp() - (v - m).exp() + (-v - m).exp();
    let den = (u - m).exp() + (-u - m).exp() + (v - m).exp() + (-v - m).exp();
    let ratio = num / den;
    let b = p.alpha.cos().powi(2) * ratio * ratio / 4.0;
    Ok((0.25, b))
}

/// Numeric (a, b) read off the teleported output of the reference θ = π/2
/// input: a from the diagonal, b from the antidiagonal corner.
pub fn output_numeric_ab(p: &GrapheneParams, temperature: f64) -> Result<(f64, f64)> {
    let channel = thermal_state(p, temperature)?;
    let input = InputState::new(std::f64::consts::FRAC_PI_2, 0.0)?;
    let out = teleport_output(&input.projector(), &channel);
    let m = out.matrix();
    let a = (0..4).map(|i| m[(i, i)].re).sum::<f64>() / 4.0;
    Ok((a, m[(0, 3)].re))
}

/// Average fidelity of the full channel map over the Bloch sphere of pure
/// inputs, 32-node Gauss-Legendre in θ by 64-node trapezoid in φ.
pub fn average_fidelity_channel(rho_ch: &DensityMatrix) -> f64 {
    average_fidelity_channel_with_nodes(rho_ch, THETA_NODES, PHI_NODES)
}

/// Same integral with caller-chosen node counts (used by convergence
/// checks).
pub fn average_fidelity_channel_with_nodes(
    rho_ch: &DensityMatrix,
    theta_nodes: usize,
    phi_nodes: usize,
) -> f64 {
    let probs = channel_probabilities(rho_ch);
    // Precompute channel images of the four basis operators |e_a⟩⟨e_b| for
    // a, b ∈ {1, 2}; ρ_out is a linear combination of them and the input
    // family has support only on {|01⟩, |10⟩}.
    let mut images: Vec<CMatrix> = Vec::with_capacity(4);
    for (a, b) in [(1usize, 1usize), (1, 2), (2, 1), (2, 2)] {
        let mut va = [Complex64::default(); 4];
        va[a] = cr(1.0);
        let mut vb = [Complex64::default(); 4];
        vb[b] = cr(1.0);
        let basis_op = CMatrix::outer(&va, &vb).expect("length 4");
        let mut image = CMatrix::zeros(4).expect("4x4");
        for i in 0..4 {
            for j in 0..4 {
                let weight = probs[i] * probs[j];
                if weight == 0.0 {
                    continue;
                }
                let op = pauli_pair(i, j);
                image = &image + &(&(&op * &basis_op) * &op).scale_re(weight);
            }
        }
        images.push(image);
    }
    let fidelity = |theta: f64, phi: f64| -> f64 {
        let psi1 = Complex64::from_polar((theta / 2.0).sin(), phi);
        let psi2 = cr((theta / 2.0).cos());
        let amps = [psi1, psi2];
        let coeff = [
            amps[0] * amps[0].conj(),
            amps[0] * amps[1].conj(),
            amps[1] * amps[0].conj(),
            amps[1] * amps[1].conj(),
        ];
        let idx = [1usize, 2];
        let mut f = Complex64::default();
        for (k, image) in images.iter().enumerate() {
            let mut quad = Complex64::default();
            for (ui, &u) in idx.iter().enumerate() {
                for (vi, &v) in idx.iter().enumerate() {
                    quad += amps[ui].conj() * image[(u, v)] * amps[vi];
                }
            }
            f += coeff[k] * quad;
        }
        f.re
    };
    bloch_sphere_average(&fidelity, theta_nodes, phi_nodes)
}

/// Average fidelity of teleportation through the thermal channel at the
/// given parameters and temperature.
pub fn average_fidelity(p: &GrapheneParams, temperature: f64) -> Result<f64> {
    let channel = thermal_state(p, temperature)?;
    Ok(average_fidelity_channel(&channel))
}

/// The φ-independent reduction a + (2/3)·b of the averaged fidelity for
/// outputs with the (a, b·sinθ) structure.
pub fn average_fidelity_from_ab(a: f64, b: f64) -> f64 {
    a + 2.0 * b / 3.0
}

/// True iff the average fidelity strictly beats the classical bound 2/3.
pub fn classical_threshold_check(fa: f64) -> Result<bool> {
    if !(0.0..=1.0).contains(&fa) {
        return Err(Error::InvalidArgument(format!(
            "average fidelity must lie in [0, 1], got {fa}"
        )));
    }
    Ok(fa > 2.0 / 3.0)
}

/// Aggregated teleportation diagnostics for one thermal channel.
#[derive(Clone, Debug)]
pub struct TeleportResult {
    /// Bell-channel probabilities P0..P3; they sum to one.
    pub probs: [f64; 4],
    /// Output state of the reference θ = π/2, φ = 0 input.
    pub rho_out: DensityMatrix,
    pub a_closed: f64,
    pub b_closed: f64,
    /// Fidelity at each requested input amplitude θ.
    pub fidelity_at: Vec<(f64, f64)>,
    /// Full-map Bloch-sphere average; lies in [0, 1].
    pub avg_fidelity: f64,
}

/// Evaluates the whole teleportation pipeline for the thermal channel at
/// the given parameters and temperature.
pub fn teleport_summary(
    p: &GrapheneParams,
    temperature: f64,
    thetas: &[f64],
) -> Result<TeleportResult> {
    let channel = thermal_state(p, temperature)?;
    let probs = channel_probabilities(&channel);
    let reference = InputState::new(std::f64::consts::FRAC_PI_2, 0.0)?;
    let rho_out = teleport_output(&reference.projector(), &channel);
    let (a_closed, b_closed) = output_closed_ab(p, temperature)?;
    let mut fidelity_at = Vec::with_capacity(thetas.len());
    for &theta in thetas {
        let input = InputState::new(theta, 0.0)?;
        let out = teleport_output(&input.projector(), &channel);
        fidelity_at.push((theta, fidelity_pure(&input, &out)));
    }
    Ok(TeleportResult {
        probs,
        rho_out,
        a_closed,
        b_closed,
        fidelity_at,
        avg_fidelity: average_fidelity_channel(&channel),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmatrix::trace_norm;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn params(eta: f64, eta_x: f64, eta_y: f64, lambda: f64, alpha: f64) -> GrapheneParams {
        GrapheneParams::new(eta, eta_x, eta_y, lambda, alpha).unwrap()
    }

    #[test]
    fn bell_projectors_complete_orthonormal() {
        let projectors = bell_projectors();
        let mut sum = CMatrix::zeros(4).unwrap();
        for (i, e) in projectors.iter().enumerate() {
            sum = &sum + e;
            assert_abs_diff_eq!(e.trace().re, 1.0, epsilon = 1e-14);
            for (j, f) in projectors.iter().enumerate() {
                let prod = e * f;
                if i == j {
                    assert!(prod.max_abs_diff(e) <= 1e-14);
                } else {
                    assert!(prod.frobenius_norm() <= 1e-14);
                }
            }
        }
        assert!(sum.max_abs_diff(&CMatrix::identity(4).unwrap()) <= 1e-14);
    }

    #[test]
    fn probabilities_for_simple_channels() {
        let singlet = bell_states()[0].projector();
        let p = channel_probabilities(&singlet);
        assert_abs_diff_eq!(p[0], 1.0, epsilon = 1e-14);
        for k in 1..4 {
            assert_abs_diff_eq!(p[k], 0.0, epsilon = 1e-14);
        }
        let mixed = DensityMatrix::maximally_mixed();
        for v in channel_probabilities(&mixed) {
            assert_abs_diff_eq!(v, 0.25, epsilon = 1e-14);
        }
    }

    #[test]
    fn perfect_channel_is_identity() {
        let singlet = bell_states()[0].projector();
        for theta in [0.0, 0.4, FRAC_PI_2, 2.2, PI] {
            let input = InputState::new(theta, 0.3).unwrap();
            let out = teleport_output(&input.projector(), &singlet);
            assert!(trace_norm(&(out.matrix() - input.projector().matrix())) < 1e-12);
        }
    }

    #[test]
    fn depolarizing_channel_outputs_maximally_mixed() {
        let mixed = DensityMatrix::maximally_mixed();
        let input = InputState::new(1.1, 0.0).unwrap();
        let out = teleport_output(&input.projector(), &mixed);
        assert!(trace_norm(&(out.matrix() - mixed.matrix())) < 1e-12);
    }

    #[test]
    fn thermal_output_has_a_b_structure() {
        let p = params(1.0, 1.0, 3.0, 1.0, PI);
        let channel = thermal_state(&p, 0.8).unwrap();
        let theta = 1.0;
        let input = InputState::new(theta, 0.0).unwrap();
        let out = teleport_output(&input.projector(), &channel);
        let m = out.matrix();
        for i in 0..4 {
            assert_abs_diff_eq!(m[(i, i)].re, 0.25, epsilon = 1e-10);
        }
        // antidiagonal entries are real multiples of sinθ with equal b
        let (_, b) = output_numeric_ab(&p, 0.8).unwrap();
        for (i, j) in [(0, 3), (1, 2)] {
            assert_abs_diff_eq!(m[(i, j)].im, 0.0, epsilon = 1e-12);
            assert_abs_diff_eq!(m[(i, j)].re, b * theta.sin(), epsilon = 1e-10);
        }
    }

    #[test]
    fn closed_b_limits() {
        // cos²α factor kills coherence at α = π/2
        let p = params(1.0, 1.0, 1.0, 1.0, FRAC_PI_2);
        let (a, b) = output_closed_ab(&p, 1.0).unwrap();
        assert_eq!(a, 0.25);
        assert!(b.abs() < 1e-30);

        // the closed formula tends to cos²α/16 as T → ∞
        let p = params(1.0, 1.0, 1.0, 1.0, 0.3);
        let (_, b) = output_closed_ab(&p, 1e9).unwrap();
        assert_abs_diff_eq!(b, 0.3f64.cos().powi(2) / 16.0, epsilon = 1e-8);
    }

    #[test]
    fn closed_b_is_finite_at_tiny_temperature() {
        let p = params(5.0, 5.0, 5.0, 3.0, 0.0);
        let (_, b) = output_closed_ab(&p, 0.001).unwrap();
        assert!(b.is_finite());
        assert!((0.0..=0.25 + 1e-12).contains(&b));
    }

    #[test]
    fn fidelity_cases() {
        let input = InputState::new(FRAC_PI_2, 0.0).unwrap();
        assert_abs_diff_eq!(
            fidelity_pure(&input, &input.projector()),
            1.0,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(
            fidelity_pure(&input, &DensityMatrix::maximally_mixed()),
            0.25,
            epsilon = 1e-14
        );
        // structured output with (a, b) = (1/4, 1/8) at θ = π/2
        let mut m = CMatrix::identity(4).unwrap().scale_re(0.25);
        let b = 0.125;
        let s = FRAC_PI_2.sin();
        for (i, j) in [(0, 3), (1, 2), (2, 1), (3, 0)] {
            m[(i, j)] = cr(b * s);
        }
        let rho = DensityMatrix::new(m).unwrap();
        assert_abs_diff_eq!(fidelity_pure(&input, &rho), 0.375, epsilon = 1e-12);
    }

    #[test]
    fn average_fidelity_simple_channels() {
        let singlet = bell_states()[0].projector();
        assert_abs_diff_eq!(average_fidelity_channel(&singlet), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(
            average_fidelity_channel(&DensityMatrix::maximally_mixed()),
            0.25,
            epsilon = 1e-12
        );
    }

    #[test]
    fn eq_structured_average_matches_two_thirds_rule() {
        // integrating the φ-independent fidelity a + b·sin²θ must give
        // a + (2/3)b to quadrature accuracy
        let (a, b) = (0.25, 0.2);
        let quad = bloch_sphere_average(
            &|theta, _| a + b * theta.sin() * theta.sin(),
            THETA_NODES,
            PHI_NODES,
        );
        assert_abs_diff_eq!(quad, average_fidelity_from_ab(a, b), epsilon = 1e-9);
    }

    #[test]
    fn quadrature_convergence_on_thermal_channel() {
        let p = params(1.0, 1.0, 3.0, 1.0, PI);
        let channel = thermal_state(&p, 0.5).unwrap();
        let coarse = average_fidelity_channel_with_nodes(&channel, THETA_NODES, PHI_NODES);
        let fine = average_fidelity_channel_with_nodes(&channel, 2 * THETA_NODES, 2 * PHI_NODES);
        assert!((coarse - fine).abs() < 1e-9);
    }

    #[test]
    fn threshold_check() {
        assert!(classical_threshold_check(1.0).unwrap());
        assert!(!classical_threshold_check(0.25).unwrap());
        assert!(!classical_threshold_check(2.0 / 3.0).unwrap());
        assert!(classical_threshold_check(1.5).is_err());
    }

    #[test]
    fn input_state_validation() {
        assert!(InputState::new(-0.1, 0.0).is_err());
        assert!(InputState::new(4.0, 0.0).is_err());
        let s = InputState::new(1.2, 0.7).unwrap();
        let amps = s.vector.amplitudes();
        assert_eq!(amps[0], Complex64::default());
        assert_eq!(amps[3], Complex64::default());
    }

    #[test]
    fn summary_invariants_at_fig6_parameters() {
        let p = params(1.0, 1.0, 3.0, 1.0, PI);
        let thetas = [0.0, FRAC_PI_2, PI];
        let result = teleport_summary(&p, 0.8, &thetas).unwrap();
        let total: f64 = result.probs.iter().sum();
        assert_abs_diff_eq!(total, 1.0, epsilon = 1e-10);
        assert!(result.probs.iter().all(|&v| v >= -1e-12));
        assert!((0.0..=1.0).contains(&result.avg_fidelity));
        assert_eq!(result.fidelity_at.len(), 3);
        // fidelity at θ = π/2 equals a + b from the output structure
        let (a, b) = output_numeric_ab(&p, 0.8).unwrap();
        assert_abs_diff_eq!(result.fidelity_at[1].1, a + b, epsilon = 1e-10);
        assert_eq!(result.a_closed, 0.25);
        // the thermal average through the wrapper matches the channel path
        assert_abs_diff_eq!(
            average_fidelity(&p, 0.8).unwrap(),
            result.avg_fidelity,
            epsilon = 1e-15
        );
    }
}
