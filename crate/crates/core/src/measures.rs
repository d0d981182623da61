//! Concurrence, Bures entanglement, trace MIN and UIN for two-qubit
//! states. Each nonlocality measure comes in two flavours: a closed
//! formula and a brute-force oracle built from the defining optimization.
//! Where the two disagree the oracle wins and the report carries a flag.

use crate::cmatrix::{
    cr, kron, pauli, pauli_pair, pauli_vector, sqrtm_psd, trace_norm, CMatrix, DensityMatrix,
    PureState, HERMITICITY_TOL,
};
use crate::error::{Error, Result};
use crate::fano::{canonicalize_fano, pauli_decompose, vec3_norm, FanoForm, Vec3};
use num_complex::Complex64;

/// Bloch vectors shorter than this are treated as zero when deciding
/// whether a marginal pins the measurement direction.
pub const MARGINAL_ZERO_TOL: f64 = 1e-9;
/// Flag threshold on |closed − oracle| in [`full_report`].
pub const DISCREPANCY_TOL: f64 = 1e-3;

const SPHERE_LATTICE_POINTS: usize = 2048;
const SIMPLEX_MAX_ITERS: usize = 200;
const SIMPLEX_TOL: f64 = 1e-10;

/// Concurrence of a pure state: |⟨ψ|ψ̃⟩| with ψ̃ = (σ_y⊗σ_y)ψ*.
/// Equals 2|a·d − b·c| on the amplitudes.
pub fn concurrence_pure(psi: &PureState) -> f64 {
    let flip = pauli_pair(2, 2);
    let conj: Vec<Complex64> = psi.amplitudes().iter().map(|z| z.conj()).collect();
    let flipped = flip.apply(&conj);
    let ip: Complex64 = psi
        .amplitudes()
        .iter()
        .zip(&flipped)
        .map(|(a, b)| a.conj() * b)
        .sum();
    ip.norm()
}

/// Spin-flipped density matrix (σ_y⊗σ_y)ρ*(σ_y⊗σ_y).
fn spin_flip(rho: &CMatrix) -> CMatrix {
    let yy = pauli_pair(2, 2);
    &(&yy * &rho.conjugate()) * &yy
}

/// Concurrence of a mixed state: max{0, τ1−τ2−τ3−τ4} with τi the
/// descending square-rooted eigenvalues of √ρ·ρ̃·√ρ, which carry the same
/// spectrum as the non-Hermitian product ρρ̃.
pub fn concurrence_mixed(rho: &DensityMatrix) -> Result<f64> {
    let root = sqrtm_psd(rho.matrix())?;
    let k = (&(&root * &spin_flip(rho.matrix())) * &root).symmetrized();
    let eig = crate::cmatrix::hermitian_eig(&k)?;
    let top = eig.values().iter().fold(0.0f64, |a, &b| a.max(b));
    // floor out eigenvalue round-off before the square root; on rank-1
    // inputs it would otherwise surface as ~1e-8 spurious τ values
    let floor = (1e-15 * top).max(1e-14);
    let mut taus: Vec<f64> = eig
        .values()
        .iter()
        .map(|&x| if x < floor { 0.0 } else { x.sqrt() })
        .collect();
    taus.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
    Ok((taus[0] - taus[1] - taus[2] - taus[3]).max(0.0))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BuresEntanglement {
    pub raw: f64,
    pub normalized: f64,
}

/// Bures entanglement from the concurrence:
/// raw = 2 − 2√((1+√(1−C²))/2), normalized by 2−√2.
pub fn bures_entanglement(concurrence: f64) -> Result<BuresEntanglement> {
    if !(-1e-10..=1.0 + 1e-10).contains(&concurrence) {
        return Err(Error::InvalidArgument(format!(
            "concurrence must lie in [0, 1], got {concurrence}"
        )));
    }
    let c2 = concurrence.clamp(0.0, 1.0).powi(2);
    let raw = 2.0 - 2.0 * ((1.0 + (1.0 - c2).sqrt()) / 2.0).sqrt();
    let normalized = raw / (2.0 - 2.0f64.sqrt());
    Ok(BuresEntanglement { raw, normalized })
}

/// Intermediates of the closed trace-MIN formula. `tmin_alpha` and
/// `tmin_beta` are the formula's α and β̃, renamed to avoid clashing with
/// the model's phase α.
#[derive(Clone, Debug, Default)]
pub struct TminIntermediates {
    pub x: Vec3,
    pub c: Vec3,
    pub tmin_alpha: f64,
    pub tmin_beta: f64,
    pub chi_plus: f64,
    pub chi_minus: f64,
}

fn tmin_from_norms(x: &Vec3, c: &Vec3, x_norm: f64, c_norm_sq: f64) -> (f64, TminIntermediates) {
    let cross_sq: f64 = (0..3).map(|i| c[i] * c[i] * x[i] * x[i]).sum();
    let alpha = c_norm_sq * x_norm * x_norm - cross_sq;
    let beta: f64 = (0..3)
        .map(|i| {
            let j = (i + 1) % 3;
            let k = (i + 2) % 3;
            x[i] * x[i] * c[j] * c[j] * c[k] * c[k]
        })
        .sum();
    let chi_plus = (alpha + 2.0 * beta.max(0.0).sqrt() * x_norm).max(0.0);
    let chi_minus = (alpha - 2.0 * beta.max(0.0).sqrt() * x_norm).max(0.0);
    let value = (chi_plus.sqrt() + chi_minus.sqrt()) / (2.0 * x_norm);
    (
        value,
        TminIntermediates {
            x: *x,
            c: *c,
            tmin_alpha: alpha,
            tmin_beta: beta,
            chi_plus,
            chi_minus,
        },
    )
}

/// Closed trace-MIN formula, reading every ‖·‖ as the 1-norm. Requires
/// a canonical Fano form.
pub fn tmin_closed(f: &FanoForm) -> Result<(f64, TminIntermediates)> {
    if !f.canonical {
        return Err(Error::InvalidArgument(
            "tmin_closed expects a canonical fano form".into(),
        ));
    }
    let x = f.s;
    let c = f.c;
    if vec3_norm(&x) <= MARGINAL_ZERO_TOL {
        let value = c.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
        return Ok((
            value,
            TminIntermediates {
                x,
                c,
                ..TminIntermediates::default()
            },
        ));
    }
    let x_1norm: f64 = x.iter().map(|v| v.abs()).sum();
    let c_1norm: f64 = c.iter().map(|v| v.abs()).sum();
    Ok(tmin_from_norms(&x, &c, x_1norm, c_1norm * c_1norm))
}

/// Same closed formula with every norm read as Euclidean; the alternate
/// reading evaluated by the verify report.
pub fn tmin_closed_euclidean(f: &FanoForm) -> Result<f64> {
    if !f.canonical {
        return Err(Error::InvalidArgument(
            "tmin_closed_euclidean expects a canonical fano form".into(),
        ));
    }
    let x = f.s;
    let c = f.c;
    let x_norm = vec3_norm(&x);
    if x_norm <= MARGINAL_ZERO_TOL {
        return Ok(c.iter().fold(0.0f64, |a, &b| a.max(b.abs())));
    }
    let c_norm_sq: f64 = c.iter().map(|v| v * v).sum();
    Ok(tmin_from_norms(&x, &c, x_norm, c_norm_sq).0)
}

/// Post-measurement state Σ_k (Π_k⊗1) ρ (Π_k⊗1) for the projective
/// measurement of subsystem A along direction `n`.
fn measured_state(rho: &CMatrix, n: &Vec3) -> CMatrix {
    let half = cr(0.5);
    let plus = kron(
        &(&pauli(0) + &pauli_vector(*n)).scale(half),
        &pauli(0),
    )
    .expect("2x2");
    let minus = kron(
        &(&pauli(0) - &pauli_vector(*n)).scale(half),
        &pauli(0),
    )
    .expect("2x2");
    &(&(&plus * rho) * &plus) + &(&(&minus * rho) * &minus)
}

fn direction(theta: f64, phi: f64) -> Vec3 {
    [
        theta.sin() * phi.cos(),
        theta.sin() * phi.sin(),
        theta.cos(),
    ]
}

/// Fibonacci lattice on the unit sphere.
fn fibonacci_sphere(count: usize) -> Vec<Vec3> {
    let golden_angle = std::f64::consts::PI * (3.0 - 5.0f64.sqrt());
    (0..count)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / count as f64;
            let radius = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden_angle * i as f64;
            [radius * phi.cos(), radius * phi.sin(), z]
        })
        .collect()
}

/// Nelder-Mead on (θ, φ), minimizing `f`. Fixed iteration budget and
/// deterministic updates.
fn nelder_mead_2d(f: &dyn Fn(f64, f64) -> f64, start: (f64, f64), step: f64) -> (f64, f64, f64) {
    let mut simplex = vec![
        (start.0, start.1),
        (start.0 + step, start.1),
        (start.0, start.1 + step),
    ];
    let mut values: Vec<f64> = simplex.iter().map(|&(a, b)| f(a, b)).collect();
    for _ in 0..SIMPLEX_MAX_ITERS {
        let mut order = [0usize, 1, 2];
        order.sort_by(|&i, &j| values[i].partial_cmp(&values[j]).expect("finite"));
        simplex = order.iter().map(|&i| simplex[i]).collect();
        values = order.iter().map(|&i| values[i]).collect();
        if (values[2] - values[0]).abs() < SIMPLEX_TOL {
            break;
        }
        let centroid = (
            (simplex[0].0 + simplex[1].0) / 2.0,
            (simplex[0].1 + simplex[1].1) / 2.0,
        );
        let reflect = (
            centroid.0 + (centroid.0 - simplex[2].0),
            centroid.1 + (centroid.1 - simplex[2].1),
        );
        let fr = f(reflect.0, reflect.1);
        if fr < values[0] {
            let expand = (
                centroid.0 + 2.0 * (centroid.0 - simplex[2].0),
                centroid.1 + 2.0 * (centroid.1 - simplex[2].1),
            );
            let fe = f(expand.0, expand.1);
            if fe < fr {
                simplex[2] = expand;
                values[2] = fe;
            } else {
                simplex[2] = reflect;
                values[2] = fr;
            }
        } else if fr < values[1] {
            simplex[2] = reflect;
            values[2] = fr;
        } else {
            let contract = (
                centroid.0 + 0.5 * (simplex[2].0 - centroid.0),
                centroid.1 + 0.5 * (simplex[2].1 - centroid.1),
            );
            let fc = f(contract.0, contract.1);
            if fc < values[2] {
                simplex[2] = contract;
                values[2] = fc;
            } else {
                for k in 1..3 {
                    simplex[k] = (
                        simplex[0].0 + 0.5 * (simplex[k].0 - simplex[0].0),
                        simplex[0].1 + 0.5 * (simplex[k].1 - simplex[0].1),
                    );
                    values[k] = f(simplex[k].0, simplex[k].1);
                }
            }
        }
    }
    let mut best = 0;
    for k in 1..3 {
        if values[k] < values[best] {
            best = k;
        }
    }
    (simplex[best].0, simplex[best].1, values[best])
}

/// Coarse Fibonacci scan followed by simplex refinement; maximizes `f`
/// over unit directions.
fn sphere_maximize(f: &dyn Fn(&Vec3) -> f64) -> f64 {
    let mut best_val = f64::NEG_INFINITY;
    let mut best_dir = [0.0, 0.0, 1.0];
    for n in fibonacci_sphere(SPHERE_LATTICE_POINTS) {
        let v = f(&n);
        if v > best_val {
            best_val = v;
            best_dir = n;
        }
    }
    let theta0 = best_dir[2].clamp(-1.0, 1.0).acos();
    let phi0 = best_dir[1].atan2(best_dir[0]);
    let objective = |t: f64, p: f64| -f(&direction(t, p));
    let step = (4.0 / SPHERE_LATTICE_POINTS as f64).sqrt();
    let (_, _, neg) = nelder_mead_2d(&objective, (theta0, phi0), step);
    best_val.max(-neg)
}

/// Trace-MIN oracle. A nonzero marginal Bloch vector pins the unique
/// marginal-preserving measurement to ±s/‖s‖; otherwise the direction is
/// free and searched over the sphere.
pub fn tmin_oracle(rho: &DensityMatrix) -> f64 {
    let fano = pauli_decompose(rho);
    let s = fano.s;
    let norm = vec3_norm(&s);
    let disturbance = |n: &Vec3| trace_norm(&(rho.matrix() - &measured_state(rho.matrix(), n)));
    if norm > MARGINAL_ZERO_TOL {
        let n = s.map(|v| v / norm);
        disturbance(&n)
    } else {
        sphere_maximize(&disturbance)
    }
}

/// Wigner-Yanase skew information I(ρ, R) = Tr[ρR²] − Tr[√ρ·R·√ρ·R],
/// algebraically −½Tr([√ρ, R]²).
pub fn skew_information(rho: &DensityMatrix, observable: &CMatrix) -> Result<f64> {
    if observable.dim() != 4 {
        return Err(Error::InvalidArgument(
            "observable must be 4x4".into(),
        ));
    }
    let dev = observable.hermiticity_deviation();
    if dev > HERMITICITY_TOL {
        return Err(Error::NotHermitian { deviation: dev });
    }
    let root = sqrtm_psd(rho.matrix())?;
    skew_with_root(rho.matrix(), &root, observable)
}

fn skew_with_root(rho: &CMatrix, root: &CMatrix, observable: &CMatrix) -> Result<f64> {
    let r2 = observable * observable;
    let term1 = (rho * &r2).trace().re;
    let srs = &(root * observable) * &(root * observable);
    Ok(term1 - srs.trace().re)
}

/// The 3x3 matrix ω_ij = Tr[√ρ(σ_i⊗1)√ρ(σ_j⊗1)] and the vector
/// s'_i = Tr[√ρ(σ_i⊗1)].
fn uin_w_matrix(root: &CMatrix) -> ([[f64; 3]; 3], Vec3) {
    let ops: Vec<CMatrix> = (1..4).map(|i| pauli_pair(i, 0)).collect();
    let mut w = [[0.0; 3]; 3];
    let mut sp = [0.0; 3];
    let products: Vec<CMatrix> = ops.iter().map(|op| root * op).collect();
    for i in 0..3 {
        sp[i] = products[i].trace().re;
        for j in 0..3 {
            w[i][j] = (&products[i] * &products[j]).trace().re;
        }
    }
    (w, sp)
}

fn quadratic_form(w: &[[f64; 3]; 3], v: &Vec3) -> f64 {
    let mut out = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            out += v[i] * w[i][j] * v[j];
        }
    }
    out
}

fn min_eig3(w: &[[f64; 3]; 3]) -> f64 {
    let (vals, _) = crate::fano::sym_eig3(w);
    vals.iter().fold(f64::INFINITY, |a, &b| a.min(b))
}

/// Closed UIN formula: 1 − s'Ws'ᵗ/‖s'‖² with
/// s'_i = Tr[√ρ(σ_i⊗1)], falling back to 1 − ω_min when s' vanishes.
pub fn uin_closed(rho: &DensityMatrix) -> Result<f64> {
    let root = sqrtm_psd(rho.matrix())?;
    let (w, sp) = uin_w_matrix(&root);
    let norm = vec3_norm(&sp);
    if norm > MARGINAL_ZERO_TOL {
        Ok(1.0 - quadratic_form(&w, &sp) / (norm * norm))
    } else {
        Ok(1.0 - min_eig3(&w))
    }
}

/// Alternate reading with the Bloch vector of ρ^A in place of s';
/// evaluated by the verify report.
pub fn uin_closed_bloch(rho: &DensityMatrix) -> Result<f64> {
    let root = sqrtm_psd(rho.matrix())?;
    let (w, _) = uin_w_matrix(&root);
    let s = pauli_decompose(rho).s;
    let norm = vec3_norm(&s);
    if norm > MARGINAL_ZERO_TOL {
        Ok(1.0 - quadratic_form(&w, &s) / (norm * norm))
    } else {
        Ok(1.0 - min_eig3(&w))
    }
}

/// UIN oracle: maximal skew information over observables (n·σ)⊗1. A
/// nonzero marginal forces n ∥ s (the observable must commute with ρ^A);
/// otherwise the sphere is searched.
pub fn uin_oracle(rho: &DensityMatrix) -> Result<f64> {
    let root = sqrtm_psd(rho.matrix())?;
    let s = pauli_decompose(rho).s;
    let norm = vec3_norm(&s);
    let objective = |n: &Vec3| {
        let r = kron(&pauli_vector(*n), &pauli(0)).expect("2x2");
        skew_with_root(rho.matrix(), &root, &r).expect("hermitian observable")
    };
    if norm > MARGINAL_ZERO_TOL {
        let n = s.map(|v| v / norm);
        let m = n.map(|v| -v);
        Ok(objective(&n).max(objective(&m)))
    } else {
        Ok(sphere_maximize(&objective))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiscrepancyFlag {
    pub name: String,
    pub magnitude: f64,
}

/// All measures for one state, closed-form and oracle side by side.
#[derive(Clone, Debug)]
pub struct CorrelationReport {
    pub concurrence: f64,
    pub bures_raw: f64,
    pub bures_normalized: f64,
    pub tmin_closed: f64,
    pub tmin_oracle: f64,
    pub uin_closed: f64,
    pub uin_oracle: f64,
    pub discrepancy_flags: Vec<DiscrepancyFlag>,
}

pub fn full_report(rho: &DensityMatrix) -> Result<CorrelationReport> {
    let concurrence = concurrence_mixed(rho)?;
    let bures = bures_entanglement(concurrence)?;
    let canon = canonicalize_fano(&pauli_decompose(rho))?;
    let (tmin_c, _) = tmin_closed(&canon)?;
    let tmin_o = tmin_oracle(rho);
    let uin_c = uin_closed(rho)?;
    let uin_o = uin_oracle(rho)?;
    let mut flags = Vec::new();
    if (tmin_c - tmin_o).abs() > DISCREPANCY_TOL {
        flags.push(DiscrepancyFlag {
            name: "tmin".into(),
            magnitude: (tmin_c - tmin_o).abs(),
        });
    }
    if (uin_c - uin_o).abs() > DISCREPANCY_TOL {
        flags.push(DiscrepancyFlag {
            name: "uin".into(),
            magnitude: (uin_c - uin_o).abs(),
        });
    }
    Ok(CorrelationReport {
        concurrence,
        bures_raw: bures.raw,
        bures_normalized: bures.normalized,
        tmin_closed: tmin_c,
        tmin_oracle: tmin_o,
        uin_closed: uin_c,
        uin_oracle: uin_o,
        discrepancy_flags: flags,
    })
}
