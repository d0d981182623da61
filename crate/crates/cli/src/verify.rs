//! Audit report: closed formulas against brute-force oracles and numeric
//! reference paths on seeded random draws, plus two fixed textual-claim
//! checks. Findings are report content, never process failures.

use qcorr_core::cmatrix::{cr, DensityMatrix, PureState};
use qcorr_core::fano::{canonicalize_fano, pauli_decompose, FanoForm};
use qcorr_core::graphene::{
    analytic_eigensystem, analytic_modes, build_hamiltonian, thermal_closed_elements,
    thermal_state, GrapheneParams,
};
use qcorr_core::measures::{
    concurrence_pure, tmin_closed, tmin_closed_euclidean, tmin_oracle, uin_closed,
    uin_closed_bloch, uin_oracle,
};
use qcorr_core::teleport::{
    average_fidelity_channel, average_fidelity_from_ab, bell_states, output_closed_ab,
    teleport_output, InputState,
};
use qcorr_core::hermitian_eig;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::{FRAC_PI_2, PI, TAU};

/// Tolerance on the eigensystem comparison (relative values, residuals).
pub const EIG_TOL: f64 = 1e-9;
/// Entrywise tolerance on the closed-form thermal elements.
pub const THERMAL_ELEMENT_TOL: f64 = 1e-8;
/// Tolerance on closed-vs-oracle branches and flag threshold for the
/// nonlocality measures.
pub const MEASURE_TOL: f64 = 1e-6;
/// Tolerance on the closed (a, b) against the numeric teleport output.
pub const AB_TOL: f64 = 1e-8;
/// Classical average-fidelity bound.
pub const CLASSICAL_BOUND: f64 = 2.0 / 3.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Flagged,
}

#[derive(Clone, Debug, Serialize)]
pub struct Metric {
    pub name: String,
    pub value: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyItem {
    pub id: String,
    pub title: String,
    pub status: Status,
    pub metrics: Vec<Metric>,
    pub notes: Vec<String>,
}

impl VerifyItem {
    pub fn metric(&self, name: &str) -> Option<f64> {
        self.metrics.iter().find(|m| m.name == name).map(|m| m.value)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub samples: u32,
    pub items: Vec<VerifyItem>,
}

impl VerifyReport {
    pub fn item(&self, id: &str) -> Option<&VerifyItem> {
        self.items.iter().find(|i| i.id == id)
    }
}

fn metric(name: &str, value: f64) -> Metric {
    Metric {
        name: name.into(),
        value,
    }
}

fn item_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Random model parameters: eta, eta_x, eta_y uniform on [-5, 5], lambda
/// uniform on ±[0.05, 3], alpha uniform on [0, 2π).
pub fn sample_params(rng: &mut ChaCha8Rng) -> GrapheneParams {
    let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    GrapheneParams::new(
        rng.gen_range(-5.0..5.0),
        rng.gen_range(-5.0..5.0),
        rng.gen_range(-5.0..5.0),
        sign * rng.gen_range(0.05..3.0),
        rng.gen_range(0.0..TAU),
    )
    .expect("finite draws")
}

/// Log-uniform temperature on [0.05, 50].
pub fn sample_temperature(rng: &mut ChaCha8Rng) -> f64 {
    let lo = 0.05f64;
    let hi = 50.0f64;
    lo * (hi / lo).powf(rng.gen_range(0.0..1.0))
}

/// Random Bell-diagonal state (vanishing local Bloch vectors).
pub fn sample_bell_diagonal(rng: &mut ChaCha8Rng) -> DensityMatrix {
    let mut weights = [0.0f64; 4];
    let mut total = 0.0;
    for w in &mut weights {
        *w = -f64::ln(rng.gen_range(1e-12..1.0));
        total += *w;
    }
    let bells = bell_states();
    let mut m = qcorr_core::CMatrix::zeros(4).expect("4x4");
    for (w, b) in weights.iter().zip(&bells) {
        m = &m + &b.projector().matrix().scale_re(w / total);
    }
    DensityMatrix::new(m.symmetrized()).expect("convex mixture of states")
}

/// (i) Closed-form eigensystem against the Jacobi eigensolver.
pub fn audit_eigensystem(seed: u64, samples: u32) -> VerifyItem {
    let mut rng = item_rng(seed, 1);
    let mut max_rel = 0.0f64;
    let mut max_resid = 0.0f64;
    for _ in 0..samples {
        let p = sample_params(&mut rng);
        let h = build_hamiltonian(&p);
        let numeric = hermitian_eig(&h).expect("hamiltonian is hermitian");
        let analytic = analytic_eigensystem(&p).expect("lambda != 0 by sampling");
        let scale = numeric
            .values()
            .iter()
            .fold(0.0f64, |a, &b| a.max(b.abs()))
            .max(1e-300);
        for (a, n) in analytic.values().iter().zip(numeric.values()) {
            max_rel = max_rel.max((a - n).abs() / scale);
        }
        for mode in analytic_modes(&p).expect("lambda != 0").iter() {
            let hv = h.apply(&mode.vector);
            let resid: f64 = hv
                .iter()
                .zip(&mode.vector)
                .map(|(l, r)| (l - r * cr(mode.energy)).norm_sqr())
                .sum::<f64>()
                .sqrt();
            max_resid = max_resid.max(resid);
        }
    }
    let pass = max_rel <= EIG_TOL && max_resid <= EIG_TOL;
    VerifyItem {
        id: "eigensystem".into(),
        title: "closed-form eigensystem vs numeric diagonalization".into(),
        status: if pass { Status::Pass } else { Status::Flagged },
        metrics: vec![
            metric("samples", samples as f64),
            metric("max_relative_eigenvalue_error", max_rel),
            metric("max_eigenvector_residual", max_resid),
        ],
        notes: vec![],
    }
}

const ELEMENT_LABELS: [((usize, usize), &str); 6] = [
    ((0, 1), "12"),
    ((0, 2), "13"),
    ((0, 3), "14"),
    ((1, 2), "23"),
    ((1, 3), "24"),
    ((2, 3), "34"),
];

/// (ii) Closed-form thermal matrix elements against the numeric Gibbs state.
pub fn audit_thermal_closed(seed: u64, samples: u32) -> VerifyItem {
    let mut rng = item_rng(seed, 2);
    let mut per_element = [0.0f64; 6];
    let mut max_diag = 0.0f64;
    for _ in 0..samples {
        let p = sample_params(&mut rng);
        let t = sample_temperature(&mut rng);
        let numeric = thermal_state(&p, t).expect("t > 0");
        let closed = thermal_closed_elements(&p, t).expect("lambda != 0").matrix();
        for (k, &((i, j), _)) in ELEMENT_LABELS.iter().enumerate() {
            per_element[k] =
                per_element[k].max((closed[(i, j)] - numeric.matrix()[(i, j)]).norm());
        }
        for i in 0..4 {
            max_diag = max_diag.max((closed[(i, i)] - numeric.matrix()[(i, i)]).norm());
        }
    }
    let max_all = per_element.iter().fold(max_diag, |a, &b| a.max(b));
    let mut metrics = vec![
        metric("samples", samples as f64),
        metric("max_element_delta", max_all),
        metric("max_delta_diagonal", max_diag),
    ];
    let mut notes = Vec::new();
    for (k, &(_, label)) in ELEMENT_LABELS.iter().enumerate() {
        metrics.push(metric(&format!("max_delta_{label}"), per_element[k]));
        if per_element[k] > THERMAL_ELEMENT_TOL {
            notes.push(format!(
                "element {label} deviates from the numeric Gibbs state by up to {:.3e}",
                per_element[k]
            ));
        }
    }
    let status = if max_all <= THERMAL_ELEMENT_TOL {
        Status::Pass
    } else {
        notes.push(
            "closed-form off-diagonal elements are not the Gibbs elements at generic parameters; \
             the numeric state is authoritative"
                .into(),
        );
        Status::Flagged
    };
    VerifyItem {
        id: "thermal-closed-form".into(),
        title: "closed-form thermal matrix elements vs numeric Gibbs state".into(),
        status,
        metrics,
        notes,
    }
}

fn flip_c3(canon: &FanoForm) -> FanoForm {
    let mut out = canon.clone();
    out.c[2] = -out.c[2];
    out.t[2][2] = -out.t[2][2];
    out
}

/// (iii) Trace-MIN closed formula (both norm readings) against the oracle.
pub fn audit_tmin(seed: u64, samples: u32) -> VerifyItem {
    let mut rng = item_rng(seed, 3);
    let mut max_one_norm = 0.0f64;
    let mut max_euclid = 0.0f64;
    let mut max_sign = 0.0f64;
    for _ in 0..samples {
        let p = sample_params(&mut rng);
        let t = sample_temperature(&mut rng);
        let rho = thermal_state(&p, t).expect("t > 0");
        let canon = canonicalize_fano(&pauli_decompose(&rho)).expect("fresh decomposition");
        let (one_norm, _) = tmin_closed(&canon).expect("canonical");
        let euclid = tmin_closed_euclidean(&canon).expect("canonical");
        let oracle = tmin_oracle(&rho);
        max_one_norm = max_one_norm.max((one_norm - oracle).abs());
        max_euclid = max_euclid.max((euclid - oracle).abs());
        let (flipped, _) = tmin_closed(&flip_c3(&canon)).expect("canonical");
        max_sign = max_sign.max((flipped - one_norm).abs());
    }
    // x = 0 branch on Bell-diagonal draws, where both readings coincide
    let mut branch_rng = item_rng(seed, 30);
    let mut max_branch = 0.0f64;
    for _ in 0..samples {
        let rho = sample_bell_diagonal(&mut branch_rng);
        let canon = canonicalize_fano(&pauli_decompose(&rho)).expect("fresh decomposition");
        let (closed, _) = tmin_closed(&canon).expect("canonical");
        let oracle = tmin_oracle(&rho);
        max_branch = max_branch.max((closed - oracle).abs());
    }
    let mut notes = Vec::new();
    let status = if samples > 0 && max_one_norm > MEASURE_TOL {
        notes.push(format!(
            "the 1-norm reading deviates from the oracle by up to {max_one_norm:.3e}; \
             the Euclidean reading deviates by up to {max_euclid:.3e}; the oracle value is \
             authoritative"
        ));
        Status::Flagged
    } else {
        Status::Pass
    };
    if max_branch > MEASURE_TOL {
        notes.push(format!(
            "x = 0 branch disagrees with the sphere-search oracle by {max_branch:.3e}"
        ));
    }
    notes.push(
        "the closed formula depends on the canonical correlations only through |c_i| and c_i^2, \
         so the residual-sign convention cannot move it"
            .into(),
    );
    VerifyItem {
        id: "tmin-closed-vs-oracle".into(),
        title: "trace MIN closed formula vs measurement oracle".into(),
        status,
        metrics: vec![
            metric("samples", samples as f64),
            metric("max_1norm_vs_oracle", max_one_norm),
            metric("max_euclidean_vs_oracle", max_euclid),
            metric("max_branch_x0_vs_oracle", max_branch),
            metric("max_c3_sign_sensitivity", max_sign),
        ],
        notes,
    }
}

/// (iv) UIN closed formula (s' and Bloch-vector readings) vs the oracle.
pub fn audit_uin(seed: u64, samples: u32) -> VerifyItem {
    let mut rng = item_rng(seed, 4);
    let mut max_sprime = 0.0f64;
    let mut max_bloch = 0.0f64;
    for _ in 0..samples {
        let p = sample_params(&mut rng);
        let t = sample_temperature(&mut rng);
        let rho = thermal_state(&p, t).expect("t > 0");
        let sprime = uin_closed(&rho).expect("valid state");
        let bloch = uin_closed_bloch(&rho).expect("valid state");
        let oracle = uin_oracle(&rho).expect("valid state");
        max_sprime = max_sprime.max((sprime - oracle).abs());
        max_bloch = max_bloch.max((bloch - oracle).abs());
    }
    let mut branch_rng = item_rng(seed, 40);
    let mut max_branch = 0.0f64;
    for _ in 0..samples {
        let rho = sample_bell_diagonal(&mut branch_rng);
        let closed = uin_closed(&rho).expect("valid state");
        let oracle = uin_oracle(&rho).expect("valid state");
        max_branch = max_branch.max((closed - oracle).abs());
    }
    let mut notes = vec![
        "the s' direction s'_i = Tr[sqrt(rho)(sigma_i x 1)] is compared against the \
         marginal Bloch vector reading used by the oracle's commutation constraint"
            .into(),
    ];
    let status = if samples > 0 && max_sprime > MEASURE_TOL {
        notes.push(format!(
            "s' reading deviates from the oracle by up to {max_sprime:.3e}; Bloch reading \
             deviates by up to {max_bloch:.3e}; the oracle value is authoritative"
        ));
        Status::Flagged
    } else {
        Status::Pass
    };
    VerifyItem {
        id: "uin-closed-vs-oracle".into(),
        title: "UIN closed formula vs skew-information oracle".into(),
        status,
        metrics: vec![
            metric("samples", samples as f64),
            metric("max_sprime_vs_oracle", max_sprime),
            metric("max_bloch_vs_oracle", max_bloch),
            metric("max_branch_s0_vs_oracle", max_branch),
        ],
        notes,
    }
}

/// (v) Closed-form (a, b) against the entries of the numeric teleport output.
pub fn audit_teleport_ab(seed: u64, samples: u32) -> VerifyItem {
    let mut rng = item_rng(seed, 5);
    let mut max_a = 0.0f64;
    let mut max_b = 0.0f64;
    for _ in 0..samples {
        let p = sample_params(&mut rng);
        let t = sample_temperature(&mut rng);
        let channel = thermal_state(&p, t).expect("t > 0");
        let input = InputState::new(FRAC_PI_2, 0.0).expect("valid angle");
        let out = teleport_output(&input.projector(), &channel);
        let a_num = (0..4).map(|i| out.matrix()[(i, i)].re).sum::<f64>() / 4.0;
        let b_num = out.matrix()[(0, 3)].re;
        let (a_closed, b_closed) = output_closed_ab(&p, t).expect("lambda != 0");
        max_a = max_a.max((a_num - a_closed).abs());
        max_b = max_b.max((b_num - b_closed).abs());
    }
    let mut notes = Vec::new();
    let status = if samples > 0 && (max_a > AB_TOL || max_b > AB_TOL) {
        notes.push(format!(
            "closed-form b deviates from the numeric output by up to {max_b:.3e} (the hyperbolic \
             numerator disagrees away from the low-temperature regime); numeric entries are \
             authoritative"
        ));
        Status::Flagged
    } else {
        Status::Pass
    };
    VerifyItem {
        id: "teleport-closed-ab".into(),
        title: "closed-form output entries (a, b) vs numeric teleport output".into(),
        status,
        metrics: vec![
            metric("samples", samples as f64),
            metric("max_a_deviation", max_a),
            metric("max_b_closed_vs_numeric", max_b),
        ],
        notes,
    }
}

/// (vi-a) Audit of the claim that the closed-form eigenstates carry unit
/// concurrence, TMIN and UIN; evaluated at eta11 = eta22 = 1.
pub fn audit_claim_unity() -> VerifyItem {
    let p = GrapheneParams::new(1.0, 1.0, 1.0, 1.0, 0.0).expect("finite");
    let modes = analytic_modes(&p).expect("lambda != 0");
    let phi1 = PureState::new(modes[0].vector).expect("unit norm");
    let concurrence = concurrence_pure(&phi1);
    let rho = phi1.projector();
    let tmin = tmin_oracle(&rho);
    let uin = uin_oracle(&rho).expect("valid state");
    let expected = 1.0 / 5.0f64.sqrt();
    let supported =
        (concurrence - 1.0).abs() <= MEASURE_TOL && (tmin - 1.0).abs() <= MEASURE_TOL;
    let mut notes = vec![format!(
        "claim: eigenstate correlations are unity; computed at eta11 = eta22 = 1: \
         concurrence(phi1) = {concurrence:.12} (= 1/sqrt(5) within round-off), tmin = {tmin:.12}, \
         uin = {uin:.12}"
    )];
    if !supported {
        notes.push("the computed values are not unity; the closed-form concurrence \
             |eta22|/sqrt((1+eta11)^2+eta22^2) is authoritative"
            .into());
    }
    VerifyItem {
        id: "claim-eigenstate-unity".into(),
        title: "claimed unit correlations of the closed-form eigenstates".into(),
        status: if supported { Status::Pass } else { Status::Flagged },
        metrics: vec![
            metric("concurrence_phi1", concurrence),
            metric("concurrence_phi1_formula", expected),
            metric("tmin_phi1", tmin),
            metric("uin_phi1", uin),
            metric("claimed_value", 1.0),
        ],
        notes,
    }
}

/// (vi-b) Audit of the claim that the average fidelity exceeds 0.67 as
/// T -> 0 at eta_x = 1, eta_y = 3, lambda = 1 (with eta = 1, alpha = π).
pub fn audit_claim_fidelity() -> VerifyItem {
    let p = GrapheneParams::new(1.0, 1.0, 3.0, 1.0, PI).expect("finite");
    let t = 0.01;
    let channel = thermal_state(&p, t).expect("t > 0");
    let fa_full = average_fidelity_channel(&channel);
    let input = InputState::new(FRAC_PI_2, 0.0).expect("valid angle");
    let out = teleport_output(&input.projector(), &channel);
    let a = (0..4).map(|i| out.matrix()[(i, i)].re).sum::<f64>() / 4.0;
    let b = out.matrix()[(0, 3)].re;
    let fa_ab = average_fidelity_from_ab(a, b);
    let supported = fa_full > CLASSICAL_BOUND || fa_ab > CLASSICAL_BOUND;
    let mut notes = vec![format!(
        "claim: average fidelity exceeds 0.67 as T -> 0; computed at T = {t}: full-map \
         quadrature F_A = {fa_full:.12}, structured-output path a + (2/3)b = {fa_ab:.12}, \
         classical bound = {CLASSICAL_BOUND:.12}"
    )];
    if !supported {
        notes.push(format!(
            "neither value exceeds the classical bound: with a = 1/4 and b <= 1/4 the \
             structured-output path is capped at 5/12 = {:.12}",
            5.0 / 12.0
        ));
    }
    VerifyItem {
        id: "claim-average-fidelity".into(),
        title: "claimed above-classical average fidelity at low temperature".into(),
        status: if supported { Status::Pass } else { Status::Flagged },
        metrics: vec![
            metric("avg_fidelity_full_map", fa_full),
            metric("avg_fidelity_ab_path", fa_ab),
            metric("a_numeric", a),
            metric("b_numeric", b),
            metric("classical_bound", CLASSICAL_BOUND),
        ],
        notes,
    }
}

/// Runs every audit. With `samples = 0` the sampled items are vacuous but
/// the fixed textual-claim items are still evaluated.
pub fn verify_report(seed: u64, samples: u32) -> VerifyReport {
    VerifyReport {
        seed,
        samples,
        items: vec![
            audit_eigensystem(seed, samples),
            audit_thermal_closed(seed, samples),
            audit_tmin(seed, samples),
            audit_uin(seed, samples),
            audit_teleport_ab(seed, samples),
            audit_claim_unity(),
            audit_claim_fidelity(),
        ],
    }
}

pub fn render_text(report: &VerifyReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "verify report (seed = {}, samples = {})\n",
        report.seed, report.samples
    ));
    for item in &report.items {
        let tag = match item.status {
            Status::Pass => "PASS   ",
            Status::Flagged => "FLAGGED",
        };
        out.push_str(&format!("[{tag}] {} — {}\n", item.id, item.title));
        for m in &item.metrics {
            out.push_str(&format!("    {} = {:.17e}\n", m.name, m.value));
        }
        for n in &item.notes {
            out.push_str(&format!("    note: {n}\n"));
        }
    }
    out
}

/// Cross-check used by the acceptance suite: recompute the thermal
/// element deltas with the same stream the audit used.
pub fn recompute_thermal_max_delta(seed: u64, samples: u32) -> f64 {
    let mut rng = item_rng(seed, 2);
    let mut max_all = 0.0f64;
    for _ in 0..samples {
        let p = sample_params(&mut rng);
        let t = sample_temperature(&mut rng);
        let numeric = thermal_state(&p, t).expect("t > 0");
        let closed = thermal_closed_elements(&p, t).expect("lambda != 0").matrix();
        max_all = max_all.max(closed.max_abs_diff(numeric.matrix()));
    }
    max_all
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_is_deterministic() {
        let a = verify_report(5, 8);
        let b = verify_report(5, 8);
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn zero_samples_still_evaluates_claims() {
        let report = verify_report(1, 0);
        assert_eq!(report.items.len(), 7);
        let unity = report.item("claim-eigenstate-unity").unwrap();
        assert_eq!(unity.status, Status::Flagged);
        let computed = unity.metric("concurrence_phi1").unwrap();
        assert!((computed - 1.0 / 5.0f64.sqrt()).abs() < 1e-12);
        let fid = report.item("claim-average-fidelity").unwrap();
        assert_eq!(fid.status, Status::Flagged);
        // sampled items are vacuous passes at zero samples
        assert_eq!(report.item("eigensystem").unwrap().status, Status::Pass);
    }

    #[test]
    fn text_rendering_contains_statuses() {
        let report = verify_report(1, 2);
        let text = render_text(&report);
        assert!(text.contains("FLAGGED"));
        assert!(text.contains("eigensystem"));
        assert!(text.contains("claim-average-fidelity"));
    }
}
