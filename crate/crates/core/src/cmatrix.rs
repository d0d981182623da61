//! Dense complex-matrix kernel for 2x2 and 4x4 operators.
//!
//! Provides Hermitian eigendecomposition (cyclic Jacobi), spectral functions,
//! trace norm, tensor products and partial traces, plus the validated state
//! wrappers [`PureState`] and [`DensityMatrix`] used throughout the crate.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

/// Entrywise tolerance below which a matrix is accepted as Hermitian.
pub const HERMITICITY_TOL: f64 = 1e-10;
/// Eigenvalues in `[-PSD_CLAMP_TOL, 0)` are clamped to zero before square roots.
pub const PSD_CLAMP_TOL: f64 = 1e-12;

const MAX_JACOBI_SWEEPS: usize = 64;

#[inline]
pub const fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[inline]
pub const fn cr(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Square complex matrix of dimension 2 or 4, row-major storage.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Result<Self> {
        if dim != 2 && dim != 4 {
            return Err(Error::InvalidArgument(format!(
                "matrix dimension must be 2 or 4, got {dim}"
            )));
        }
        Ok(Self {
            dim,
            data: vec![Complex64::default(); dim * dim],
        })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m[(i, i)] = cr(1.0);
        }
        Ok(m)
    }

    /// Builds a matrix from rows; every row must have length equal to the row count.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        let mut m = Self::zeros(dim)?;
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::InvalidArgument(format!(
                    "row {i} has length {}, expected {dim}",
                    row.len()
                )));
            }
            for (j, &z) in row.iter().enumerate() {
                m[(i, j)] = z;
            }
        }
        Ok(m)
    }

    pub fn diagonal(entries: &[f64]) -> Result<Self> {
        let mut m = Self::zeros(entries.len())?;
        for (i, &x) in entries.iter().enumerate() {
            m[(i, i)] = cr(x);
        }
        Ok(m)
    }

    /// Rank-1 outer product `v * w†` of two vectors of equal length 2 or 4.
    pub fn outer(v: &[Complex64], w: &[Complex64]) -> Result<Self> {
        if v.len() != w.len() {
            return Err(Error::InvalidArgument("outer product length mismatch".into()));
        }
        let mut m = Self::zeros(v.len())?;
        for i in 0..v.len() {
            for j in 0..w.len() {
                m[(i, j)] = v[i] * w[j].conj();
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn adjoint(&self) -> Self {
        let mut out = self.clone();
        for i in 0..self.dim {
            for j in 0..self.dim {
                out[(i, j)] = self[(j, i)].conj();
            }
        }
        out
    }

    pub fn conjugate(&self) -> Self {
        let mut out = self.clone();
        for z in &mut out.data {
            *z = z.conj();
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        let mut out = self.clone();
        for z in &mut out.data {
            *z *= factor;
        }
        out
    }

    pub fn scale_re(&self, factor: f64) -> Self {
        self.scale(cr(factor))
    }

    /// Largest entrywise deviation from the adjoint, `max |M - M†|`.
    pub fn hermiticity_deviation(&self) -> f64 {
        let mut dev = 0.0f64;
        for i in 0..self.dim {
            for j in 0..self.dim {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_deviation() <= tol
    }

    /// `(M + M†)/2` with the diagonal forced real.
    pub fn symmetrized(&self) -> Self {
        let mut out = self.clone();
        for i in 0..self.dim {
            for j in 0..self.dim {
                out[(i, j)] = (self[(i, j)] + self[(j, i)].conj()) * cr(0.5);
            }
            out[(i, i)] = cr(out[(i, i)].re);
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Applies the matrix to a vector.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim, "vector length mismatch");
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&rhs.data) {
            *a += b;
        }
        out
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&rhs.data) {
            *a -= b;
        }
        out
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = CMatrix::zeros(n).expect("valid dimension");
        for i in 0..n {
            for k in 0..n {
                let aik = self[(i, k)];
                if aik == Complex64::default() {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += aik * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                let z = self[(i, j)];
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Pauli matrix by index: 0 -> identity, 1 -> x, 2 -> y, 3 -> z.
pub fn pauli(i: usize) -> CMatrix {
    let rows = match i {
        0 => vec![vec![cr(1.0), cr(0.0)], vec![cr(0.0), cr(1.0)]],
        1 => vec![vec![cr(0.0), cr(1.0)], vec![cr(1.0), cr(0.0)]],
        2 => vec![vec![cr(0.0), c(0.0, -1.0)], vec![c(0.0, 1.0), cr(0.0)]],
        3 => vec![vec![cr(1.0), cr(0.0)], vec![cr(0.0), cr(-1.0)]],
        _ => panic!("pauli index must be 0..=3, got {i}"),
    };
    CMatrix::from_rows(&rows).expect("2x2")
}

/// Real linear combination `n · (σx, σy, σz)`.
pub fn pauli_vector(n: [f64; 3]) -> CMatrix {
    let mut out = pauli(1).scale_re(n[0]);
    out = &out + &pauli(2).scale_re(n[1]);
    &out + &pauli(3).scale_re(n[2])
}

/// Tensor product of two 2x2 operators, `(A⊗B)[2i+k][2j+l] = A[i][j]·B[k][l]`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    if a.dim() != 2 || b.dim() != 2 {
        return Err(Error::InvalidArgument(format!(
            "kron expects 2x2 inputs, got {}x{} and {}x{}",
            a.dim(),
            a.dim(),
            b.dim(),
            b.dim()
        )));
    }
    let mut out = CMatrix::zeros(4)?;
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[(2 * i + k, 2 * j + l)] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    Ok(out)
}

/// Two-qubit Pauli product `σ_i ⊗ σ_j` with indices in 0..=3.
pub fn pauli_pair(i: usize, j: usize) -> CMatrix {
    kron(&pauli(i), &pauli(j)).expect("2x2 inputs")
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Eigenvalues are ascending; eigenvector `i` is column `i` of `vectors`.
#[derive(Clone, Debug)]
pub struct EigenSystem {
    values: Vec<f64>,
    vectors: CMatrix,
}

impl EigenSystem {
    /// Packs precomputed eigenpairs; values must be ascending and the
    /// columns of `vectors` orthonormal.
    pub fn from_parts(values: Vec<f64>, vectors: CMatrix) -> Result<Self> {
        if values.len() != vectors.dim() {
            return Err(Error::InvalidArgument(
                "eigenvalue count does not match matrix dimension".into(),
            ));
        }
        if values.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidArgument(
                "eigenvalues must be ascending".into(),
            ));
        }
        Ok(Self { values, vectors })
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn vectors(&self) -> &CMatrix {
        &self.vectors
    }

    pub fn vector(&self, i: usize) -> Vec<Complex64> {
        (0..self.dim()).map(|k| self.vectors[(k, i)]).collect()
    }
}

fn off_diagonal_norm(a: &CMatrix) -> f64 {
    let n = a.dim();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[(i, j)].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// One cyclic-Jacobi rotation annihilating the (p, q) entry of `a`,
/// accumulated into `v`.
fn jacobi_rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let phase = apq / mag;
    let tau = (aqq - app) / (2.0 * mag);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let cth = 1.0 / (1.0 + t * t).sqrt();
    let sth = t * cth;
    let n = a.dim();
    // A <- A J with J[p][p]=c, J[p][q]=s, J[q][p]=-s e^{-iφ}, J[q][q]=c e^{-iφ}
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * cr(cth) - akq * (phase.conj() * sth);
        a[(k, q)] = akp * cr(sth) + akq * (phase.conj() * cth);
    }
    // A <- J† A
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * cr(cth) - aqk * (phase * sth);
        a[(q, k)] = apk * cr(sth) + aqk * (phase * cth);
    }
    a[(p, q)] = Complex64::default();
    a[(q, p)] = Complex64::default();
    a[(p, p)] = cr(a[(p, p)].re);
    a[(q, q)] = cr(a[(q, q)].re);
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * cr(cth) - vkq * (phase.conj() * sth);
        v[(k, q)] = vkp * cr(sth) + vkq * (phase.conj() * cth);
    }
}

/// Hermitian eigendecomposition by cyclic Jacobi rotations.
///
/// Converges when the off-diagonal Frobenius mass drops below
/// `1e-14 * ‖M‖_F`; the sweep order is fixed so identical inputs give
/// identical outputs. Each eigenvector is phase-fixed so its largest
/// component is real and nonnegative.
pub fn hermitian_eig(m: &CMatrix) -> Result<EigenSystem> {
    let deviation = m.hermiticity_deviation();
    if deviation > HERMITICITY_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    let n = m.dim();
    let mut a = m.symmetrized();
    let mut v = CMatrix::identity(n)?;
    let scale = a.frobenius_norm();
    if scale == 0.0 {
        return Ok(EigenSystem {
            values: vec![0.0; n],
            vectors: v,
        });
    }
    let target = 1e-14 * scale;
    let mut converged = false;
    for _ in 0..MAX_JACOBI_SWEEPS {
        if off_diagonal_norm(&a) <= target {
            converged = true;
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                jacobi_rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged && off_diagonal_norm(&a) > target {
        return Err(Error::Numeric(
            "Jacobi eigensolver did not converge".into(),
        ));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[(i, i)]
            .re
            .partial_cmp(&a[(j, j)].re)
            .expect("eigenvalues are finite")
            .then(i.cmp(&j))
    });
    let values: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = CMatrix::zeros(n)?;
    for (col, &src) in order.iter().enumerate() {
        // phase-fix on the largest-magnitude component
        let mut kmax = 0;
        let mut best = -1.0;
        for k in 0..n {
            let mag = v[(k, src)].norm();
            if mag > best {
                best = mag;
                kmax = k;
            }
        }
        let pivot = v[(kmax, src)];
        let phase = if pivot.norm() > 0.0 {
            (pivot / pivot.norm()).conj()
        } else {
            cr(1.0)
        };
        for k in 0..n {
            vectors[(k, col)] = v[(k, src)] * phase;
        }
    }
    Ok(EigenSystem { values, vectors })
}

fn spectral_assemble(eig: &EigenSystem, mapped: &[f64]) -> CMatrix {
    let n = eig.dim();
    let mut out = CMatrix::zeros(n).expect("valid dimension");
    for (i, &w) in mapped.iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        let v = eig.vector(i);
        for r in 0..n {
            for s in 0..n {
                out[(r, s)] += v[r] * v[s].conj() * w;
            }
        }
    }
    out.symmetrized()
}

/// Spectral function `f(M) = Σ f(λ_i) |v_i⟩⟨v_i|` of a Hermitian matrix.
pub fn hermitian_function(m: &CMatrix, f: impl Fn(f64) -> f64) -> Result<CMatrix> {
    let eig = hermitian_eig(m)?;
    let mut mapped = Vec::with_capacity(eig.dim());
    for &x in eig.values() {
        let y = f(x);
        if !y.is_finite() {
            return Err(Error::Domain { eigenvalue: x });
        }
        mapped.push(y);
    }
    Ok(spectral_assemble(&eig, &mapped))
}

/// Principal square root of a positive-semidefinite Hermitian matrix.
///
/// Eigenvalues in `[-1e-12, 0)` are treated as round-off and clamped to
/// zero; anything more negative is an error. Eigenvalues below the
/// relative machine floor `1e-15·λ_max` are also clamped: they are
/// indistinguishable from zero and the square root would otherwise
/// amplify their noise to ~1e-8.
pub fn sqrtm_psd(m: &CMatrix) -> Result<CMatrix> {
    let eig = hermitian_eig(m)?;
    let top = eig.values().iter().fold(0.0f64, |a, &b| a.max(b));
    let floor = 1e-15 * top;
    let mut mapped = Vec::with_capacity(eig.dim());
    for &x in eig.values() {
        if x < -PSD_CLAMP_TOL {
            return Err(Error::NotPositive { eigenvalue: x });
        }
        let clamped = if x < floor { 0.0 } else { x };
        mapped.push(clamped.sqrt());
    }
    Ok(spectral_assemble(&eig, &mapped))
}

/// Trace norm (sum of singular values). Hermitian inputs take the
/// eigenvalue fast path; general inputs go through `M†M`.
pub fn trace_norm(m: &CMatrix) -> f64 {
    if m.is_hermitian(HERMITICITY_TOL) {
        let eig = hermitian_eig(m).expect("hermiticity just checked");
        eig.values().iter().map(|x| x.abs()).sum()
    } else {
        let gram = (&m.adjoint() * m).symmetrized();
        let eig = hermitian_eig(&gram).expect("gram matrix is Hermitian");
        eig.values().iter().map(|x| x.max(0.0).sqrt()).sum()
    }
}

/// Which subsystem a partial trace keeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Partial trace of a unit-trace 4x4 operator down to the kept qubit.
pub fn partial_trace(rho: &CMatrix, keep: Subsystem) -> Result<CMatrix> {
    if rho.dim() != 4 {
        return Err(Error::InvalidArgument(format!(
            "partial trace expects a 4x4 matrix, got {}x{}",
            rho.dim(),
            rho.dim()
        )));
    }
    let tr = rho.trace();
    if (tr - cr(1.0)).norm() > 1e-10 {
        return Err(Error::InvalidArgument(format!(
            "partial trace expects unit trace, got {tr}"
        )));
    }
    let mut out = CMatrix::zeros(2)?;
    match keep {
        Subsystem::A => {
            for i in 0..2 {
                for j in 0..2 {
                    out[(i, j)] = rho[(2 * i, 2 * j)] + rho[(2 * i + 1, 2 * j + 1)];
                }
            }
        }
        Subsystem::B => {
            for k in 0..2 {
                for l in 0..2 {
                    out[(k, l)] = rho[(k, l)] + rho[(2 + k, 2 + l)];
                }
            }
        }
    }
    Ok(out)
}

/// Unit-norm two-qubit state vector in the fixed computational basis.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amps: [Complex64; 4],
}

impl PureState {
    /// Accepts amplitudes already normalized within 1e-10.
    pub fn new(amps: [Complex64; 4]) -> Result<Self> {
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidArgument(format!(
                "state vector norm is {norm:.12}, expected 1"
            )));
        }
        Ok(Self { amps })
    }

    pub fn from_unnormalized(amps: [Complex64; 4]) -> Result<Self> {
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-12 {
            return Err(Error::InvalidArgument(
                "cannot normalize a (near-)zero vector".into(),
            ));
        }
        let mut out = amps;
        for z in &mut out {
            *z /= norm;
        }
        Ok(Self { amps: out })
    }

    /// Basis state `|k⟩` for k in 0..4.
    pub fn basis(k: usize) -> Self {
        let mut amps = [Complex64::default(); 4];
        amps[k] = cr(1.0);
        Self { amps }
    }

    pub fn amplitudes(&self) -> &[Complex64; 4] {
        &self.amps
    }

    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn projector(&self) -> DensityMatrix {
        let m = CMatrix::outer(&self.amps, &self.amps).expect("length 4");
        DensityMatrix::new(m).expect("rank-1 projector is a valid state")
    }

    /// Expectation value `⟨ψ|M|ψ⟩`.
    pub fn expectation(&self, m: &CMatrix) -> Complex64 {
        let mv = m.apply(&self.amps);
        self.amps
            .iter()
            .zip(&mv)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

/// Validated 4x4 density matrix: Hermitian, PSD, unit trace.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    mat: CMatrix,
}

impl DensityMatrix {
    pub fn new(mat: CMatrix) -> Result<Self> {
        if mat.dim() != 4 {
            return Err(Error::InvalidState(format!(
                "density matrix must be 4x4, got {}x{}",
                mat.dim(),
                mat.dim()
            )));
        }
        let dev = mat.hermiticity_deviation();
        if dev > 1e-9 {
            return Err(Error::InvalidState(format!(
                "not Hermitian (deviation {dev:.3e})"
            )));
        }
        let tr = mat.trace();
        if (tr - cr(1.0)).norm() > 1e-9 {
            return Err(Error::InvalidState(format!("trace is {tr}, expected 1")));
        }
        let eig = hermitian_eig(&mat.symmetrized())?;
        let min = eig.values()[0];
        if min < -PSD_CLAMP_TOL {
            return Err(Error::InvalidState(format!(
                "not positive semidefinite (min eigenvalue {min:.3e})"
            )));
        }
        Ok(Self { mat })
    }

    pub fn from_pure(psi: &PureState) -> Self {
        psi.projector()
    }

    pub fn maximally_mixed() -> Self {
        Self {
            mat: CMatrix::identity(4).expect("4x4").scale_re(0.25),
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn min_eigenvalue(&self) -> f64 {
        hermitian_eig(&self.mat.symmetrized())
            .expect("validated state")
            .values()[0]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn h_fixture() -> CMatrix {
        // Hermitian with nontrivial complex off-diagonals.
        CMatrix::from_rows(&[
            vec![cr(1.0), c(0.5, -0.25), c(0.0, 0.75), cr(0.125)],
            vec![c(0.5, 0.25), cr(-2.0), c(0.3, 0.1), c(0.0, -0.4)],
            vec![c(0.0, -0.75), c(0.3, -0.1), cr(0.5), c(-0.2, 0.6)],
            vec![cr(0.125), c(0.0, 0.4), c(-0.2, -0.6), cr(3.0)],
        ])
        .unwrap()
    }

    #[test]
    fn kron_identity_cases() {
        let id4 = kron(&pauli(0), &pauli(0)).unwrap();
        assert_eq!(id4, CMatrix::identity(4).unwrap());

        let zz = kron(&pauli(3), &pauli(3)).unwrap();
        let expect = CMatrix::diagonal(&[1.0, -1.0, -1.0, 1.0]).unwrap();
        assert!(zz.max_abs_diff(&expect) == 0.0);

        // σx ⊗ 1 swaps the two-qubit blocks: antidiagonal-block permutation
        let x1 = kron(&pauli(1), &pauli(0)).unwrap();
        for (i, j) in [(0, 2), (1, 3), (2, 0), (3, 1)] {
            assert_eq!(x1[(i, j)], cr(1.0));
        }
        assert_eq!(x1.trace(), cr(0.0));
    }

    #[test]
    fn kron_rejects_wrong_dims() {
        let four = CMatrix::identity(4).unwrap();
        assert!(kron(&four, &pauli(0)).is_err());
    }

    #[test]
    fn eig_diagonal_matrix() {
        let m = CMatrix::diagonal(&[4.0, 1.0, 3.0, 2.0]).unwrap();
        let eig = hermitian_eig(&m).unwrap();
        assert_eq!(eig.values(), &[1.0, 2.0, 3.0, 4.0]);
        // eigenvectors are basis permutations
        let v0 = eig.vector(0);
        assert_abs_diff_eq!(v0[1].re, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn eig_sigma_x() {
        let eig = hermitian_eig(&pauli(1)).unwrap();
        assert_abs_diff_eq!(eig.values()[0], -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(eig.values()[1], 1.0, epsilon = 1e-14);
        let v = eig.vector(1);
        let inv_sqrt2 = 1.0 / 2.0f64.sqrt();
        assert_abs_diff_eq!(v[0].re, inv_sqrt2, epsilon = 1e-12);
        assert_abs_diff_eq!(v[1].re, inv_sqrt2, epsilon = 1e-12);
        let w = eig.vector(0);
        assert_abs_diff_eq!((w[0].norm() - inv_sqrt2).abs(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!((w[0] + w[1]).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn eig_residuals_and_orthonormality() {
        let m = h_fixture();
        let eig = hermitian_eig(&m).unwrap();
        let vmax = eig.values().iter().fold(0.0f64, |a, &b| a.max(b.abs()));
        for i in 0..4 {
            let v = eig.vector(i);
            let mv = m.apply(&v);
            for k in 0..4 {
                assert!((mv[k] - v[k] * eig.values()[i]).norm() <= 1e-10 * vmax);
            }
            for j in 0..4 {
                let w = eig.vector(j);
                let ip: Complex64 = v.iter().zip(&w).map(|(a, b)| a.conj() * b).sum();
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((ip - cr(expect)).norm() <= 1e-10);
            }
        }
        let sum: f64 = eig.values().iter().sum();
        assert_abs_diff_eq!(sum, m.trace().re, epsilon = 1e-10 * 4.0);
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let mut m = h_fixture();
        m[(0, 1)] += cr(1e-3);
        assert!(matches!(
            hermitian_eig(&m),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn eig_deterministic() {
        let m = h_fixture();
        let a = hermitian_eig(&m).unwrap();
        let b = hermitian_eig(&m).unwrap();
        assert_eq!(a.values(), b.values());
        assert!(a.vectors().max_abs_diff(b.vectors()) == 0.0);
    }

    #[test]
    fn sqrt_of_identity_and_diagonal() {
        let id = CMatrix::identity(4).unwrap();
        assert!(sqrtm_psd(&id).unwrap().max_abs_diff(&id) <= 1e-14);

        let m = CMatrix::diagonal(&[4.0, 9.0, 0.0, 1.0]).unwrap();
        let expect = CMatrix::diagonal(&[2.0, 3.0, 0.0, 1.0]).unwrap();
        assert!(sqrtm_psd(&m).unwrap().max_abs_diff(&expect) <= 1e-14);
    }

    #[test]
    fn sqrt_of_projector_is_projector() {
        let psi = PureState::from_unnormalized([cr(1.0), c(0.0, 2.0), cr(-1.0), cr(0.5)]).unwrap();
        let p = psi.projector();
        let root = sqrtm_psd(p.matrix()).unwrap();
        assert!(root.max_abs_diff(p.matrix()) <= 1e-12);
    }

    #[test]
    fn sqrt_rejects_negative() {
        let m = CMatrix::diagonal(&[1.0, 1.0, -1e-6, 1.0]).unwrap();
        assert!(matches!(sqrtm_psd(&m), Err(Error::NotPositive { .. })));
    }

    #[test]
    fn hermitian_function_identity_map() {
        let m = h_fixture();
        let back = hermitian_function(&m, |x| x).unwrap();
        assert!(back.max_abs_diff(&m) <= 1e-12);
    }

    #[test]
    fn hermitian_function_domain_error_names_eigenvalue() {
        let m = CMatrix::diagonal(&[1.0, 2.0, 0.0, 3.0]).unwrap();
        match hermitian_function(&m, |x| 1.0 / x) {
            Err(Error::Domain { eigenvalue }) => assert_eq!(eigenvalue, 0.0),
            other => panic!("expected domain error, got {other:?}"),
        }
    }

    #[test]
    fn trace_norm_cases() {
        let m = CMatrix::diagonal(&[1.0, -2.0, 0.0, 0.0]).unwrap();
        assert_abs_diff_eq!(trace_norm(&m), 3.0, epsilon = 1e-14);

        let zero = CMatrix::zeros(4).unwrap();
        assert_eq!(trace_norm(&zero), 0.0);

        // |Φ+⟩⟨Φ+| − 1/4: eigenvalues {3/4, −1/4, −1/4, −1/4} sum to 1.5
        let inv_sqrt2 = 1.0 / 2.0f64.sqrt();
        let bell =
            PureState::new([cr(inv_sqrt2), cr(0.0), cr(0.0), cr(inv_sqrt2)]).unwrap();
        let diff = bell.projector().matrix()
            - &CMatrix::identity(4).unwrap().scale_re(0.25);
        assert_abs_diff_eq!(trace_norm(&diff), 1.5, epsilon = 1e-12);
    }

    #[test]
    fn trace_norm_general_path() {
        // non-Hermitian upper-triangular: singular values of [[0,1],[0,0]]⊕0 are {1}
        let mut m = CMatrix::zeros(4).unwrap();
        m[(0, 1)] = cr(1.0);
        assert_abs_diff_eq!(trace_norm(&m), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn partial_trace_product_and_bell() {
        // |0⟩⟨0| ⊗ |1⟩⟨1|
        let psi = PureState::basis(1);
        let rho = psi.projector();
        let a = partial_trace(rho.matrix(), Subsystem::A).unwrap();
        assert_abs_diff_eq!(a[(0, 0)].re, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(a[(1, 1)].re, 0.0, epsilon = 1e-14);
        let b = partial_trace(rho.matrix(), Subsystem::B).unwrap();
        assert_abs_diff_eq!(b[(1, 1)].re, 1.0, epsilon = 1e-14);

        let inv_sqrt2 = 1.0 / 2.0f64.sqrt();
        let bell =
            PureState::new([cr(inv_sqrt2), cr(0.0), cr(0.0), cr(inv_sqrt2)]).unwrap();
        let marg = partial_trace(bell.projector().matrix(), Subsystem::A).unwrap();
        let half = CMatrix::identity(2).unwrap().scale_re(0.5);
        assert!(marg.max_abs_diff(&half) <= 1e-14);
    }

    #[test]
    fn partial_trace_requires_unit_trace() {
        let m = CMatrix::identity(4).unwrap();
        assert!(partial_trace(&m, Subsystem::A).is_err());
    }

    #[test]
    fn density_matrix_validation() {
        assert!(DensityMatrix::new(CMatrix::identity(4).unwrap()).is_err());
        let ok = DensityMatrix::new(CMatrix::identity(4).unwrap().scale_re(0.25));
        assert!(ok.is_ok());
        let bad = CMatrix::diagonal(&[0.5, 0.7, -0.2, 0.0]).unwrap();
        assert!(DensityMatrix::new(bad).is_err());
    }

    #[test]
    fn pure_state_norm_validation() {
        assert!(PureState::new([cr(1.0), cr(1.0), cr(0.0), cr(0.0)]).is_err());
        assert!(PureState::from_unnormalized([cr(1.0), cr(1.0), cr(0.0), cr(0.0)]).is_ok());
    }
}
