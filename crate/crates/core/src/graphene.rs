//! Effective pseudo-spin/valley Hamiltonian of a graphene sheet, its
//! analytic eigensystem, ground-state selection and Gibbs thermal states.
//!
//! Basis order is fixed as {|↑1⟩, |↑0⟩, |↓1⟩, |↓0⟩} ↔ indices 0..3: the
//! first qubit is the sublattice pseudo-spin, the second the valley, each
//! with its "up" state first.

use crate::cmatrix::{
    c, cr, hermitian_eig, kron, pauli, CMatrix, DensityMatrix, EigenSystem, PureState,
};
use crate::error::{Error, Result};
use num_complex::Complex64;

/// Physical parameters of the model.
///
/// `eta` is the band parameter, `eta_x`/`eta_y` the wave numbers (treated
/// as real scalars), `lambda` the common intervalley/intravalley scattering
/// strength and `alpha` the scattering phase shift in radians.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GrapheneParams {
    pub eta: f64,
    pub eta_x: f64,
    pub eta_y: f64,
    pub lambda: f64,
    pub alpha: f64,
}

/// Derived ratios of the analytic eigensystem; defined only for `lambda != 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ratios {
    /// η11 = η·η_x/λ
    pub eta11: f64,
    /// η22 = η·η_y/λ
    pub eta22: f64,
    /// n± = η11 ± 1
    pub n_plus: f64,
    pub n_minus: f64,
}

impl GrapheneParams {
    pub fn new(eta: f64, eta_x: f64, eta_y: f64, lambda: f64, alpha: f64) -> Result<Self> {
        for (name, v) in [
            ("eta", eta),
            ("eta_x", eta_x),
            ("eta_y", eta_y),
            ("lambda", lambda),
            ("alpha", alpha),
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "parameter {name} must be finite, got {v}"
                )));
            }
        }
        Ok(Self {
            eta,
            eta_x,
            eta_y,
            lambda,
            alpha,
        })
    }

    pub fn ratios(&self) -> Result<Ratios> {
        if self.lambda == 0.0 {
            return Err(Error::UnsupportedParameters(
                "eta11/eta22 require lambda != 0".into(),
            ));
        }
        let eta11 = self.eta * self.eta_x / self.lambda;
        let eta22 = self.eta * self.eta_y / self.lambda;
        Ok(Ratios {
            eta11,
            eta22,
            n_plus: eta11 + 1.0,
            n_minus: eta11 - 1.0,
        })
    }
}

/// H = η[η_x(σ_x⊗1) + η_y(σ_y⊗κ_z)] + λ·1⊗(1 + cosα·κ_x + sinα·κ_y).
///
/// The scattering term is the λ_A = λ_B collapse of the per-sublattice sum,
/// which keeps the construction valid at λ = 0.
pub fn build_hamiltonian(p: &GrapheneParams) -> CMatrix {
    let kinetic_x = kron(&pauli(1), &pauli(0)).expect("2x2").scale_re(p.eta * p.eta_x);
    let kinetic_y = kron(&pauli(2), &pauli(3)).expect("2x2").scale_re(p.eta * p.eta_y);
    let mut scatter2 = pauli(0);
    scatter2 = &scatter2 + &pauli(1).scale_re(p.alpha.cos());
    scatter2 = &scatter2 + &pauli(2).scale_re(p.alpha.sin());
    let scatter = kron(&pauli(0), &scatter2).expect("2x2").scale_re(p.lambda);
    let h = &(&kinetic_x + &kinetic_y) + &scatter;
    h.symmetrized()
}

/// One closed-form eigenpair, labelled φ1..φ4.
#[derive(Clone, Debug)]
pub struct AnalyticMode {
    /// Label index, 1-based.
    pub label: usize,
    pub energy: f64,
    pub vector: [Complex64; 4],
}

/// The four closed-form eigenpairs, in label order φ1..φ4.
///
/// E1,2 = λ(1 ∓ √(n+² + η22²)) and E3,4 = λ(1 ∓ √(n-² + η22²)), with
/// amplitudes assembled from N± = -(n± ∓ i·η22)/(2√(n±² + η22²)).
pub fn analytic_modes(p: &GrapheneParams) -> Result<[AnalyticMode; 4]> {
    let r = p.ratios()?;
    let s_plus = (r.n_plus * r.n_plus + r.eta22 * r.eta22).sqrt();
    let s_minus = (r.n_minus * r.n_minus + r.eta22 * r.eta22).sqrt();
    if s_plus < 1e-12 || s_minus < 1e-12 {
        return Err(Error::UnsupportedParameters(
            "closed-form eigenvectors degenerate (n± and eta22 both ~ 0)".into(),
        ));
    }
    let lam = p.lambda;
    let n_plus_c = c(-r.n_plus / (2.0 * s_plus), r.eta22 / (2.0 * s_plus));
    let n_minus_c = c(-r.n_minus / (2.0 * s_minus), -r.eta22 / (2.0 * s_minus));
    let phase = Complex64::from_polar(1.0, -p.alpha);
    let half = cr(0.5);

    let phi1 = [phase * n_plus_c, half, phase * half, n_plus_c];
    let phi2 = [-phase * n_plus_c, half, phase * half, -n_plus_c];
    let phi3 = [-phase * half, n_minus_c, -phase * n_minus_c, half];
    let phi4 = [-phase * half, -n_minus_c, phase * n_minus_c, half];

    Ok([
        AnalyticMode {
            label: 1,
            energy: lam * (1.0 - s_plus),
            vector: phi1,
        },
        AnalyticMode {
            label: 2,
            energy: lam * (1.0 + s_plus),
            vector: phi2,
        },
        AnalyticMode {
            label: 3,
            energy: lam * (1.0 - s_minus),
            vector: phi3,
        },
        AnalyticMode {
            label: 4,
            energy: lam * (1.0 + s_minus),
            vector: phi4,
        },
    ])
}

/// Closed-form eigensystem packaged with ascending eigenvalues.
pub fn analytic_eigensystem(p: &GrapheneParams) -> Result<EigenSystem> {
    let modes = analytic_modes(p)?;
    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&i, &j| {
        modes[i]
            .energy
            .partial_cmp(&modes[j].energy)
            .expect("finite energies")
            .then(i.cmp(&j))
    });
    let values: Vec<f64> = order.iter().map(|&i| modes[i].energy).collect();
    let mut vectors = CMatrix::zeros(4)?;
    for (col, &i) in order.iter().enumerate() {
        for row in 0..4 {
            vectors[(row, col)] = modes[i].vector[row];
        }
    }
    EigenSystem::from_parts(values, vectors)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroundStateKind {
    Unique,
    DegenerateSuperposition,
}

#[derive(Clone, Debug)]
pub struct GroundState {
    pub kind: GroundStateKind,
    pub state: PureState,
    pub energy: f64,
    /// Relative phase of the degenerate superposition; `None` for the
    /// unique kind.
    pub beta_phase: Option<f64>,
}

/// Ground state by the sign table on (λ, η11).
///
/// λ>0 selects φ1 (η11>0) or φ3 (η11<0); λ<0 selects φ2 or φ4. At η11 = 0
/// the ground space is two-dimensional and the returned state is
/// `(e^{iβ}·φa + φb)/√2` with β = `beta_phase`.
pub fn ground_state(p: &GrapheneParams, beta_phase: f64) -> Result<GroundState> {
    let r = p.ratios()?;
    let modes = analytic_modes(p)?;
    let pick = |label: usize| -> &AnalyticMode { &modes[label - 1] };
    let (pair, unique) = if p.lambda > 0.0 {
        ((1usize, 3usize), r.eta11 > 0.0)
    } else {
        ((2usize, 4usize), r.eta11 > 0.0)
    };
    if r.eta11 != 0.0 {
        let label = if unique { pair.0 } else { pair.1 };
        let m = pick(label);
        return Ok(GroundState {
            kind: GroundStateKind::Unique,
            state: PureState::new(m.vector)?,
            energy: m.energy,
            beta_phase: None,
        });
    }
    let (a, b) = (pick(pair.0), pick(pair.1));
    let phase = Complex64::from_polar(1.0, beta_phase);
    let inv_sqrt2 = cr(1.0 / 2.0f64.sqrt());
    let mut amps = [Complex64::default(); 4];
    for k in 0..4 {
        amps[k] = (phase * a.vector[k] + b.vector[k]) * inv_sqrt2;
    }
    Ok(GroundState {
        kind: GroundStateKind::DegenerateSuperposition,
        state: PureState::new(amps)?,
        energy: a.energy,
        beta_phase: Some(beta_phase),
    })
}

/// Gibbs state ρ(T) = e^{-H/T}/Z with k_B = 1.
///
/// Computed as e^{-(H - E_min·1)/T} then normalized, which is identical
/// after division by the trace and avoids overflow at small T.
pub fn thermal_state(p: &GrapheneParams, temperature: f64) -> Result<DensityMatrix> {
    if !(temperature > 0.0) || !temperature.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "temperature must be positive and finite, got {temperature}"
        )));
    }
    let h = build_hamiltonian(p);
    let eig = hermitian_eig(&h)?;
    let e_min = eig.values()[0];
    let weights: Vec<f64> = eig
        .values()
        .iter()
        .map(|&e| (-(e - e_min) / temperature).exp())
        .collect();
    let z: f64 = weights.iter().sum();
    let mut rho = CMatrix::zeros(4)?;
    for (i, &w) in weights.iter().enumerate() {
        let v = eig.vector(i);
        for r_idx in 0..4 {
            for c_idx in 0..4 {
                rho[(r_idx, c_idx)] += v[r_idx] * v[c_idx].conj() * (w / z);
            }
        }
    }
    DensityMatrix::new(rho.symmetrized())
}

/// The closed-form thermal matrix elements.
///
/// All Boltzmann weights carry a common factor e^{E_min/T} removed for
/// overflow safety; `z`, `z_prime` and every element share the same factor,
/// so the assembled matrix and all ratios are unaffected.
#[derive(Clone, Debug)]
pub struct ThermalClosedForm {
    pub z: f64,
    pub z_prime: f64,
    pub r11: f64,
    pub r12: Complex64,
    pub r13: Complex64,
    pub r14: Complex64,
    pub r23: Complex64,
    pub r24: Complex64,
    pub r34: Complex64,
}

impl ThermalClosedForm {
    /// Assembles the matrix layout divided by Z.
    pub fn matrix(&self) -> CMatrix {
        let z = cr(1.0 / self.z);
        let r11 = cr(self.r11);
        CMatrix::from_rows(&[
            vec![r11 * z, self.r12 * z, self.r13 * z, self.r14 * z],
            vec![self.r12.conj() * z, r11 * z, self.r23 * z, self.r24 * z],
            vec![
                self.r13.conj() * z,
                self.r23.conj() * z,
                r11 * z,
                self.r34 * z,
            ],
            vec![
                self.r14.conj() * z,
                self.r24.conj() * z,
                self.r34.conj() * z,
                r11 * z,
            ],
        ])
        .expect("4x4")
    }
}

/// Evaluates the closed-form thermal-element expressions:
/// ϱ11 = Z/4, ϱ12 = (e^{-iα}/2)(w1·N+ − Z'·N-*), ϱ13 = (w1·N+ + Z'·N-*)/2,
/// ϱ14 = -(e^{-iα}/4)(Z − 2w1), ϱ23 = -(e^{iα}/4)(Z − 2w1),
/// ϱ24 = (w1·N+* + Z'·N-)/2, ϱ34 = (e^{-iα}/2)(w1·N+* − Z'·N-),
/// with Z = Σ wi and Z' = w2 + w3 − w4.
pub fn thermal_closed_elements(p: &GrapheneParams, temperature: f64) -> Result<ThermalClosedForm> {
    if !(temperature > 0.0) || !temperature.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "temperature must be positive and finite, got {temperature}"
        )));
    }
    let r = p.ratios()?;
    let modes = analytic_modes(p)?;
    let e_min = modes
        .iter()
        .map(|m| m.energy)
        .fold(f64::INFINITY, f64::min);
    let w: Vec<f64> = modes
        .iter()
        .map(|m| (-(m.energy - e_min) / temperature).exp())
        .collect();
    let z: f64 = w.iter().sum();
    let z_prime = w[1] + w[2] - w[3];

    let s_plus = (r.n_plus * r.n_plus + r.eta22 * r.eta22).sqrt();
    let s_minus = (r.n_minus * r.n_minus + r.eta22 * r.eta22).sqrt();
    let n_plus = c(-r.n_plus / (2.0 * s_plus), r.eta22 / (2.0 * s_plus));
    let n_minus = c(-r.n_minus / (2.0 * s_minus), -r.eta22 / (2.0 * s_minus));
    let phase_m = Complex64::from_polar(1.0, -p.alpha);
    let phase_p = Complex64::from_polar(1.0, p.alpha);

    Ok(ThermalClosedForm {
        z,
        z_prime,
        r11: z / 4.0,
        r12: phase_m * (n_plus * w[0] - n_minus.conj() * z_prime) * cr(0.5),
        r13: (n_plus * w[0] + n_minus.conj() * z_prime) * cr(0.5),
        r14: -phase_m * cr(0.25) * (z - 2.0 * w[0]),
        r23: -phase_p * cr(0.25) * (z - 2.0 * w[0]),
        r24: (n_plus.conj() * w[0] + n_minus * z_prime) * cr(0.5),
        r34: phase_m * (n_plus.conj() * w[0] - n_minus * z_prime) * cr(0.5),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmatrix::trace_norm;
    use crate::measures::concurrence_pure;
    use approx::assert_abs_diff_eq;

    fn params(eta: f64, eta_x: f64, eta_y: f64, lambda: f64, alpha: f64) -> GrapheneParams {
        GrapheneParams::new(eta, eta_x, eta_y, lambda, alpha).unwrap()
    }

    #[test]
    fn hamiltonian_is_hermitian() {
        let p = params(1.3, -0.7, 2.1, 0.4, 1.1);
        let h = build_hamiltonian(&p);
        assert!(h.hermiticity_deviation() <= 1e-14);
    }

    #[test]
    fn hamiltonian_zero_eta_spectrum() {
        // 1⊗(1+κx) has spectrum {0, 2}, each doubled
        let p = params(0.0, 1.0, 1.0, 1.0, 0.0);
        let eig = hermitian_eig(&build_hamiltonian(&p)).unwrap();
        let expect = [0.0, 0.0, 2.0, 2.0];
        for (got, want) in eig.values().iter().zip(expect) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-12);
        }
    }

    #[test]
    fn hamiltonian_unit_parameter_spectrum() {
        // n+ = 2, n- = 0, eta22 = 1 gives {1-√5, 0, 2, 1+√5}
        let p = params(1.0, 1.0, 1.0, 1.0, 0.0);
        let eig = hermitian_eig(&build_hamiltonian(&p)).unwrap();
        let s5 = 5.0f64.sqrt();
        let expect = [1.0 - s5, 0.0, 2.0, 1.0 + s5];
        for (got, want) in eig.values().iter().zip(expect) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-12);
        }
    }

    #[test]
    fn analytic_modes_match_numeric_eigensystem() {
        let cases = [
            params(1.0, 1.0, 1.0, 1.0, 0.0),
            params(2.0, -1.5, 0.7, 0.6, 2.4),
            params(-0.8, 3.0, -2.0, -1.2, 4.0),
            params(0.3, 0.9, 5.0, 2.5, 1.0),
        ];
        for p in cases {
            let h = build_hamiltonian(&p);
            let modes = analytic_modes(&p).unwrap();
            for m in &modes {
                let norm: f64 = m.vector.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                assert_abs_diff_eq!(norm, 1.0, epsilon = 1e-12);
                let hv = h.apply(&m.vector);
                for k in 0..4 {
                    assert!(
                        (hv[k] - m.vector[k] * cr(m.energy)).norm() <= 1e-9,
                        "eigen-equation residual too large for φ{} at {:?}",
                        m.label,
                        p
                    );
                }
            }
            let numeric = hermitian_eig(&h).unwrap();
            let analytic = analytic_eigensystem(&p).unwrap();
            for (a, b) in analytic.values().iter().zip(numeric.values()) {
                assert_abs_diff_eq!(*a, *b, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn analytic_eigensystem_unit_case() {
        let p = params(1.0, 1.0, 1.0, 1.0, 0.7);
        let modes = analytic_modes(&p).unwrap();
        let s5 = 5.0f64.sqrt();
        assert_abs_diff_eq!(modes[0].energy, 1.0 - s5, epsilon = 1e-14);
        assert_abs_diff_eq!(modes[1].energy, 1.0 + s5, epsilon = 1e-14);
        assert_abs_diff_eq!(modes[2].energy, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(modes[3].energy, 2.0, epsilon = 1e-14);
    }

    #[test]
    fn analytic_requires_nonzero_lambda() {
        let p = params(1.0, 1.0, 1.0, 0.0, 0.0);
        assert!(analytic_eigensystem(&p).is_err());
        assert!(ground_state(&p, 0.0).is_err());
    }

    #[test]
    fn ground_state_sign_table() {
        // λ>0, η11>0 -> φ1 with energy λ(1-√(n+²+η22²))
        let p = params(1.0, 1.0, 1.0, 1.0, 0.0);
        let gs = ground_state(&p, 0.0).unwrap();
        assert_eq!(gs.kind, GroundStateKind::Unique);
        assert_abs_diff_eq!(gs.energy, 1.0 - 5.0f64.sqrt(), epsilon = 1e-14);

        // λ>0, η11<0 -> φ3
        let p = params(-1.0, 1.0, 1.0, 1.0, 0.0);
        let gs = ground_state(&p, 0.0).unwrap();
        let modes = analytic_modes(&p).unwrap();
        assert_abs_diff_eq!(gs.energy, modes[2].energy, epsilon = 1e-14);

        // sign flip of λ swaps {φ1,φ3} to {φ2,φ4}
        let p = params(1.0, 1.0, 1.0, -1.0, 0.0);
        let gs = ground_state(&p, 0.0).unwrap();
        let modes = analytic_modes(&p).unwrap();
        // η11 = -1 < 0 here, so φ4 is selected
        assert_abs_diff_eq!(gs.energy, modes[3].energy, epsilon = 1e-14);
    }

    #[test]
    fn ground_state_energy_is_spectral_minimum() {
        for p in [
            params(1.4, -0.3, 0.8, 0.9, 0.5),
            params(-2.0, 1.1, -0.4, -0.7, 3.0),
            params(0.5, 2.0, 3.0, 1.5, 1.2),
        ] {
            let gs = ground_state(&p, 0.0).unwrap();
            let eig = hermitian_eig(&build_hamiltonian(&p)).unwrap();
            assert_abs_diff_eq!(gs.energy, eig.values()[0], epsilon = 1e-9);
        }
    }

    #[test]
    fn degenerate_ground_state_concurrence() {
        // η11 = 0, β = 0, η22 = 1: concurrence |η22|/√(1+η22²) = 1/√2
        let p = params(1.0, 0.0, 1.0, 1.0, 0.0);
        let gs = ground_state(&p, 0.0).unwrap();
        assert_eq!(gs.kind, GroundStateKind::DegenerateSuperposition);
        let c = concurrence_pure(&gs.state);
        assert_abs_diff_eq!(c, 1.0 / 2.0f64.sqrt(), epsilon = 1e-12);
        // state lies in the two-dimensional ground eigenspace
        let h = build_hamiltonian(&p);
        let hv = h.apply(gs.state.amplitudes());
        for k in 0..4 {
            assert!((hv[k] - gs.state.amplitudes()[k] * cr(gs.energy)).norm() <= 1e-9);
        }
    }

    #[test]
    fn thermal_state_limits() {
        let p = params(1.0, 1.0, 1.0, 1.0, 0.6);
        let hot = thermal_state(&p, 1e6).unwrap();
        let mixed = DensityMatrix::maximally_mixed();
        assert!(trace_norm(&(hot.matrix() - mixed.matrix())) <= 1e-4);

        let cold = thermal_state(&p, 1e-3).unwrap();
        let gs = ground_state(&p, 0.0).unwrap();
        let overlap = gs.state.expectation(cold.matrix()).re;
        assert!(overlap >= 1.0 - 1e-6);
    }

    #[test]
    fn thermal_state_unit_trace_and_psd() {
        let p = params(0.9, -1.7, 2.3, 1.4, 2.0);
        for t in [0.01, 0.5, 3.0, 100.0] {
            let rho = thermal_state(&p, t).unwrap();
            assert_abs_diff_eq!(rho.matrix().trace().re, 1.0, epsilon = 1e-12);
            assert!(rho.min_eigenvalue() > -1e-12);
        }
    }

    #[test]
    fn thermal_state_rejects_nonpositive_temperature() {
        let p = params(1.0, 1.0, 1.0, 1.0, 0.0);
        assert!(thermal_state(&p, 0.0).is_err());
        assert!(thermal_state(&p, -1.0).is_err());
    }

    #[test]
    fn closed_elements_basic_identities() {
        let p = params(1.0, 1.3, 0.8, 0.9, 1.1);
        for t in [0.2, 1.0, 7.0] {
            let cf = thermal_closed_elements(&p, t).unwrap();
            assert!(cf.z > 0.0);
            assert_abs_diff_eq!(4.0 * cf.r11, cf.z, epsilon = 1e-10 * cf.z);
            // shifted Z equals the trace of the shifted Gibbs operator
            let h = build_hamiltonian(&p);
            let eig = hermitian_eig(&h).unwrap();
            let e_min = eig.values()[0];
            let z_direct: f64 = eig
                .values()
                .iter()
                .map(|&e| (-(e - e_min) / t).exp())
                .sum();
            assert_abs_diff_eq!(cf.z, z_direct, epsilon = 1e-10 * cf.z);
            // diagonal of the assembled matrix is exactly 1/4
            let m = cf.matrix();
            for i in 0..4 {
                assert_abs_diff_eq!(m[(i, i)].re, 0.25, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn closed_elements_match_unshifted_weights_at_moderate_t() {
        // at moderate temperature the raw unshifted weights are representable;
        // the shifted evaluation must agree after removing the common factor
        let p = params(0.7, 1.1, -0.9, 1.3, 0.4);
        let t = 2.0;
        let cf = thermal_closed_elements(&p, t).unwrap();
        let modes = analytic_modes(&p).unwrap();
        let e_min = modes.iter().map(|m| m.energy).fold(f64::INFINITY, f64::min);
        let raw: Vec<f64> = modes.iter().map(|m| (-m.energy / t).exp()).collect();
        let shift = (e_min / t).exp();
        let z_raw: f64 = raw.iter().sum();
        assert_abs_diff_eq!(cf.z / (z_raw * shift), 1.0, epsilon = 1e-12);
    }
}
