//! Bloch-vector/correlation-matrix parametrization of two-qubit states and
//! its canonical (diagonal) form under local rotations.

use crate::cmatrix::{pauli_pair, CMatrix, DensityMatrix};
use crate::error::{Error, Result};

pub type Vec3 = [f64; 3];
pub type Mat3 = [[f64; 3]; 3];

/// Bloch vectors `s` (subsystem A), `r` (subsystem B) and correlation
/// matrix `t`. In the canonical form `t` is diagonal with entries `c`,
/// ordered `|c1| >= |c2| >= |c3|`.
#[derive(Clone, Debug, PartialEq)]
pub struct FanoForm {
    pub s: Vec3,
    pub r: Vec3,
    pub t: Mat3,
    pub canonical: bool,
    /// Diagonal correlations; meaningful only when `canonical` is set.
    pub c: Vec3,
}

/// Extracts `s_j = Tr(ρ(σ_j⊗1))`, `r_j = Tr(ρ(1⊗σ_j))` and
/// `t_mn = Tr(ρ(σ_m⊗σ_n))` from a state.
pub fn pauli_decompose(rho: &DensityMatrix) -> FanoForm {
    let m = rho.matrix();
    let tr_with = |op: &CMatrix| -> f64 { (m * op).trace().re };
    let mut s = [0.0; 3];
    let mut r = [0.0; 3];
    let mut t = [[0.0; 3]; 3];
    for j in 0..3 {
        s[j] = tr_with(&pauli_pair(j + 1, 0));
        r[j] = tr_with(&pauli_pair(0, j + 1));
        for k in 0..3 {
            t[j][k] = tr_with(&pauli_pair(j + 1, k + 1));
        }
    }
    FanoForm {
        s,
        r,
        t,
        canonical: false,
        c: [0.0; 3],
    }
}

/// Rebuilds the 4x4 operator `(1⊗1 + s·σ⊗1 + 1⊗r·σ + Σ t_mn σ_m⊗σ_n)/4`.
pub fn reconstruct(f: &FanoForm) -> CMatrix {
    let mut out = pauli_pair(0, 0);
    for j in 0..3 {
        out = &out + &pauli_pair(j + 1, 0).scale_re(f.s[j]);
        out = &out + &pauli_pair(0, j + 1).scale_re(f.r[j]);
        for k in 0..3 {
            if f.t[j][k] != 0.0 {
                out = &out + &pauli_pair(j + 1, k + 1).scale_re(f.t[j][k]);
            }
        }
    }
    out.scale_re(0.25)
}

/// Rotates a Fano form into the canonical frame where the correlation
/// matrix is diagonal.
///
/// The correlation matrix is factored as `t = u · diag(c) · vᵀ` with
/// `u, v ∈ SO(3)` (proper rotations), so the result is reachable by local
/// unitaries; any residual sign sits on `c3`. The Bloch vectors are carried
/// into the same frame: `s -> uᵀ s`, `r -> vᵀ r`.
pub fn canonicalize_fano(f: &FanoForm) -> Result<FanoForm> {
    if f.canonical {
        return Err(Error::InvalidArgument(
            "fano form is already canonical".into(),
        ));
    }
    let (u, c, v) = rotation_svd(&f.t);
    let s = mat3_t_vec(&u, &f.s);
    let r = mat3_t_vec(&v, &f.r);
    let mut t = [[0.0; 3]; 3];
    for i in 0..3 {
        t[i][i] = c[i];
    }
    Ok(FanoForm {
        s,
        r,
        t,
        canonical: true,
        c,
    })
}

pub fn mat3_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

pub fn mat3_transpose(a: &Mat3) -> Mat3 {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = a[j][i];
        }
    }
    out
}

pub fn mat3_det(a: &Mat3) -> f64 {
    a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
        - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
}

pub fn mat3_vec(a: &Mat3, v: &Vec3) -> Vec3 {
    let mut out = [0.0; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i] += a[i][j] * v[j];
        }
    }
    out
}

/// `aᵀ v`.
pub fn mat3_t_vec(a: &Mat3, v: &Vec3) -> Vec3 {
    let mut out = [0.0; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i] += a[j][i] * v[j];
        }
    }
    out
}

pub fn vec3_norm(v: &Vec3) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn vec3_cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn column(a: &Mat3, j: usize) -> Vec3 {
    [a[0][j], a[1][j], a[2][j]]
}

fn set_column(a: &mut Mat3, j: usize, v: &Vec3) {
    for i in 0..3 {
        a[i][j] = v[i];
    }
}

/// Jacobi eigendecomposition of a real symmetric 3x3 matrix.
/// Returns (eigenvalues, eigenvector columns), unsorted.
pub(crate) fn sym_eig3(m: &Mat3) -> (Vec3, Mat3) {
    let mut a = *m;
    // enforce symmetry against caller round-off
    for i in 0..3 {
        for j in 0..3 {
            let avg = 0.5 * (a[i][j] + a[j][i]);
            a[i][j] = avg;
            a[j][i] = avg;
        }
    }
    let mut v: Mat3 = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    let scale: f64 = a
        .iter()
        .flatten()
        .map(|x| x * x)
        .sum::<f64>()
        .sqrt();
    if scale == 0.0 {
        return ([0.0; 3], v);
    }
    for _ in 0..64 {
        let off = (a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2]).sqrt();
        if off <= 1e-15 * scale {
            break;
        }
        for (p, q) in [(0usize, 1usize), (0, 2), (1, 2)] {
            let apq = a[p][q];
            if apq == 0.0 {
                continue;
            }
            let tau = (a[q][q] - a[p][p]) / (2.0 * apq);
            let t = if tau >= 0.0 {
                1.0 / (tau + (1.0 + tau * tau).sqrt())
            } else {
                -1.0 / (-tau + (1.0 + tau * tau).sqrt())
            };
            let c = 1.0 / (1.0 + t * t).sqrt();
            let s = t * c;
            for k in 0..3 {
                let akp = a[k][p];
                let akq = a[k][q];
                a[k][p] = c * akp - s * akq;
                a[k][q] = s * akp + c * akq;
            }
            for k in 0..3 {
                let apk = a[p][k];
                let aqk = a[q][k];
                a[p][k] = c * apk - s * aqk;
                a[q][k] = s * apk + c * aqk;
            }
            a[p][q] = 0.0;
            a[q][p] = 0.0;
            for k in 0..3 {
                let vkp = v[k][p];
                let vkq = v[k][q];
                v[k][p] = c * vkp - s * vkq;
                v[k][q] = s * vkp + c * vkq;
            }
        }
    }
    ([a[0][0], a[1][1], a[2][2]], v)
}

/// Factors a real 3x3 matrix as `t = u · diag(c) · vᵀ` with `u, v ∈ SO(3)`.
///
/// Singular values are ordered descending by magnitude; the determinant
/// sign is absorbed into `c[2]`. Degenerate directions are completed by
/// cross products, which keeps already-diagonal inputs on the identity
/// rotation.
pub(crate) fn rotation_svd(t: &Mat3) -> (Mat3, Vec3, Mat3) {
    let gram = mat3_mul(&mat3_transpose(t), t);
    let (vals, vecs) = sym_eig3(&gram);
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| vals[j].partial_cmp(&vals[i]).expect("finite").then(i.cmp(&j)));
    let mut v: Mat3 = [[0.0; 3]; 3];
    let mut sigma = [0.0; 3];
    for (dst, &src) in order.iter().enumerate() {
        set_column(&mut v, dst, &column(&vecs, src));
        sigma[dst] = vals[src].max(0.0).sqrt();
    }
    if mat3_det(&v) < 0.0 {
        let flipped = column(&v, 2).map(|x| -x);
        set_column(&mut v, 2, &flipped);
    }

    let mut u: Mat3 = [[0.0; 3]; 3];
    let cutoff = 1e-10 * sigma[0].max(f64::MIN_POSITIVE);
    let rank = sigma.iter().take_while(|&&s| s > cutoff).count();
    for k in 0..rank {
        let tv = mat3_vec(t, &column(&v, k));
        let col = tv.map(|x| x / sigma[k]);
        set_column(&mut u, k, &col);
    }
    match rank {
        0 => {
            u = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
            sigma = [0.0; 3];
        }
        1 => {
            let u0 = column(&u, 0);
            // complete with the standard axis least aligned with u0
            let mut axis = [1.0, 0.0, 0.0];
            let mut best = u0[0].abs();
            for (k, cand) in [[0.0, 1.0, 0.0], [0.0, 0.0, 1.0]].iter().enumerate() {
                if u0[k + 1].abs() < best {
                    best = u0[k + 1].abs();
                    axis = *cand;
                }
            }
            let mut u1 = vec3_cross(&axis, &u0);
            let n1 = vec3_norm(&u1);
            u1 = u1.map(|x| x / n1);
            let u2 = vec3_cross(&u0, &u1);
            set_column(&mut u, 1, &u1);
            set_column(&mut u, 2, &u2);
        }
        2 => {
            let u2 = vec3_cross(&column(&u, 0), &column(&u, 1));
            set_column(&mut u, 2, &u2);
        }
        _ => {
            if mat3_det(&u) < 0.0 {
                let flipped = column(&u, 2).map(|x| -x);
                set_column(&mut u, 2, &flipped);
                sigma[2] = -sigma[2];
            }
        }
    }
    (u, sigma, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmatrix::{c, cr, PureState};
    use approx::assert_abs_diff_eq;

    fn bell_phi_plus() -> DensityMatrix {
        let inv = 1.0 / 2.0f64.sqrt();
        PureState::new([cr(inv), cr(0.0), cr(0.0), cr(inv)])
            .unwrap()
            .projector()
    }

    #[test]
    fn decompose_maximally_mixed() {
        let f = pauli_decompose(&DensityMatrix::maximally_mixed());
        assert_eq!(f.s, [0.0; 3]);
        assert_eq!(f.r, [0.0; 3]);
        assert_eq!(f.t, [[0.0; 3]; 3]);
        assert!(!f.canonical);
    }

    #[test]
    fn decompose_bell_state() {
        let f = pauli_decompose(&bell_phi_plus());
        for j in 0..3 {
            assert_abs_diff_eq!(f.s[j], 0.0, epsilon = 1e-14);
            assert_abs_diff_eq!(f.r[j], 0.0, epsilon = 1e-14);
        }
        assert_abs_diff_eq!(f.t[0][0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(f.t[1][1], -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(f.t[2][2], 1.0, epsilon = 1e-14);
    }

    #[test]
    fn decompose_computational_product() {
        let f = pauli_decompose(&PureState::basis(0).projector());
        assert_abs_diff_eq!(f.s[2], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(f.r[2], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(f.t[2][2], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(f.t[0][0], 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(f.t[1][1], 0.0, epsilon = 1e-14);
    }

    #[test]
    fn reconstruction_round_trip() {
        let psi = PureState::from_unnormalized([
            c(0.3, 0.1),
            c(-0.5, 0.25),
            c(0.0, 0.9),
            c(0.4, -0.2),
        ])
        .unwrap();
        let rho = psi.projector();
        let f = pauli_decompose(&rho);
        let back = reconstruct(&f);
        assert!(back.max_abs_diff(rho.matrix()) <= 1e-12);
    }

    #[test]
    fn canonicalize_diagonal_input() {
        let mut f = pauli_decompose(&DensityMatrix::maximally_mixed());
        f.t = [[0.5, 0.0, 0.0], [0.0, -0.3, 0.0], [0.0, 0.0, 0.1]];
        let canon = canonicalize_fano(&f).unwrap();
        assert!(canon.canonical);
        let abs: Vec<f64> = canon.c.iter().map(|x| x.abs()).collect();
        assert_abs_diff_eq!(abs[0], 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(abs[1], 0.3, epsilon = 1e-12);
        assert_abs_diff_eq!(abs[2], 0.1, epsilon = 1e-12);
        // residual sign convention: product of signs matches det(t)
        let det: f64 = 0.5 * -0.3 * 0.1;
        assert_eq!((canon.c[0] * canon.c[1] * canon.c[2]).signum(), det.signum());
    }

    #[test]
    fn canonicalize_bell_state() {
        let f = pauli_decompose(&bell_phi_plus());
        let canon = canonicalize_fano(&f).unwrap();
        for i in 0..3 {
            assert_abs_diff_eq!(canon.c[i].abs(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn canonicalize_rejects_canonical_input() {
        let f = pauli_decompose(&DensityMatrix::maximally_mixed());
        let canon = canonicalize_fano(&f).unwrap();
        assert!(canonicalize_fano(&canon).is_err());
    }

    #[test]
    fn canonical_factorization_reconstructs_t() {
        let t: Mat3 = [[0.2, -0.4, 0.1], [0.05, 0.3, -0.2], [-0.15, 0.0, 0.25]];
        let (u, c, v) = rotation_svd(&t);
        assert_abs_diff_eq!(mat3_det(&u), 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(mat3_det(&v), 1.0, epsilon = 1e-10);
        let mut d = [[0.0; 3]; 3];
        for i in 0..3 {
            d[i][i] = c[i];
        }
        let rebuilt = mat3_mul(&mat3_mul(&u, &d), &mat3_transpose(&v));
        for i in 0..3 {
            for j in 0..3 {
                assert_abs_diff_eq!(rebuilt[i][j], t[i][j], epsilon = 1e-10);
            }
        }
        assert!(c[0].abs() >= c[1].abs() && c[1].abs() >= c[2].abs());
    }

    #[test]
    fn canonical_frame_carries_bloch_vectors() {
        // rebuilt state from the canonical data must be a valid state again
        let psi = PureState::from_unnormalized([
            c(0.7, 0.0),
            c(0.2, -0.4),
            c(-0.1, 0.3),
            c(0.45, 0.15),
        ])
        .unwrap();
        let f = pauli_decompose(&psi.projector());
        let canon = canonicalize_fano(&f).unwrap();
        let rebuilt = reconstruct(&canon);
        assert!(DensityMatrix::new(rebuilt.symmetrized()).is_ok());
        // norms of Bloch vectors are rotation-invariant
        assert_abs_diff_eq!(vec3_norm(&canon.s), vec3_norm(&f.s), epsilon = 1e-12);
        assert_abs_diff_eq!(vec3_norm(&canon.r), vec3_norm(&f.r), epsilon = 1e-12);
    }

    #[test]
    fn identity_matrix_canonicalizes_to_identity_rotation() {
        let t: Mat3 = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        let (u, c, v) = rotation_svd(&t);
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(u[i][j], expect, epsilon = 1e-12);
                assert_abs_diff_eq!(v[i][j], expect, epsilon = 1e-12);
            }
            assert_abs_diff_eq!(c[i], 1.0, epsilon = 1e-12);
        }
    }
}
