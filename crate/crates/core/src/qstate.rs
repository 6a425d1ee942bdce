//! States, operators and the small dense linear algebra the rest of the crate
//! is built on.
//!
//! Registers hold one to three qubits. Qubit 0 is the leftmost label in a ket
//! and the most significant bit of a basis index, so for two qubits the basis
//! order is |00>, |01>, |10>, |11>.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub type C64 = Complex64;

/// Hermiticity and unit-trace tolerance for density-operator validation.
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Eigenvalues of a density operator may undershoot zero by at most this.
pub const PSD_TOL: f64 = -1e-10;
/// Off-diagonal norm at which the Jacobi eigensolver stops sweeping.
pub const JACOBI_TOL: f64 = 1e-13;

const NORM_TOL: f64 = 1e-12;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Dense square complex matrix, row-major, dimension 2 to 8.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![C64::ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = C64::ONE;
        }
        m
    }

    pub fn from_rows(rows: &[&[C64]]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::InvalidArgument("matrix rows must be square".into()));
        }
        let mut m = Self::zeros(dim);
        for (i, row) in rows.iter().enumerate() {
            m.data[i * dim..(i + 1) * dim].copy_from_slice(row);
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.data[i * self.dim + j] = v;
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Self { dim: self.dim, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Self { dim: self.dim, data }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|a| a * s).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == C64::ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    pub fn conjugate(&self) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|a| a.conj()).collect() }
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).sum()
    }

    pub fn kron(&self, other: &Self) -> Self {
        let (n, m) = (self.dim, other.dim);
        let mut out = Self::zeros(n * m);
        for i in 0..n {
            for j in 0..n {
                let a = self.data[i * n + j];
                if a == C64::ZERO {
                    continue;
                }
                for k in 0..m {
                    for l in 0..m {
                        out.data[(i * m + k) * (n * m) + (j * m + l)] = a * other.data[k * m + l];
                    }
                }
            }
        }
        out
    }

    /// Largest entrywise absolute difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.data.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    /// Replace the matrix by its Hermitian part (M + M^dag)/2.
    pub fn hermitize(&mut self) {
        let n = self.dim;
        for i in 0..n {
            self.data[i * n + i] = c(self.data[i * n + i].re, 0.0);
            for j in (i + 1)..n {
                let avg = (self.data[i * n + j] + self.data[j * n + i].conj()) * 0.5;
                self.data[i * n + j] = avg;
                self.data[j * n + i] = avg.conj();
            }
        }
    }

    pub fn hermiticity_error(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((self.data[i * n + j] - self.data[j * n + i].conj()).norm());
            }
        }
        worst
    }

    /// Apply `self * v` to a vector.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.dim);
        let n = self.dim;
        let mut out = vec![C64::ZERO; n];
        for i in 0..n {
            let mut acc = C64::ZERO;
            for j in 0..n {
                acc += self.data[i * n + j] * v[j];
            }
            out[i] = acc;
        }
        out
    }

    /// Outer product v w^dag as a matrix.
    pub fn outer(v: &[C64], w: &[C64]) -> Self {
        assert_eq!(v.len(), w.len());
        let n = v.len();
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[i * n + j] = v[i] * w[j].conj();
            }
        }
        out
    }
}

// ---------------------------------------------------------------------------
// JSON exchange format
// ---------------------------------------------------------------------------

/// Serialized form of a complex matrix: `{"dim": d, "re": [[..]], "im": [[..]]}`
/// with row-major real and imaginary parts.
#[derive(Serialize, Deserialize)]
struct MatrixJson {
    dim: usize,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl ComplexMatrix {
    pub fn to_json_string(&self) -> String {
        let n = self.dim;
        let re = (0..n).map(|i| (0..n).map(|j| self.at(i, j).re).collect()).collect();
        let im = (0..n).map(|i| (0..n).map(|j| self.at(i, j).im).collect()).collect();
        serde_json::to_string(&MatrixJson { dim: n, re, im })
            .expect("matrix serialization cannot fail")
    }

    pub fn from_json_slice(data: &[u8]) -> Result<Self> {
        let parsed: MatrixJson = serde_json::from_slice(data)
            .map_err(|e| Error::InvalidArgument(format!("matrix json: {e}")))?;
        let n = parsed.dim;
        if !(1..=16).contains(&n) {
            return Err(Error::InvalidArgument(format!("matrix json: unsupported dim {n}")));
        }
        if parsed.re.len() != n || parsed.im.len() != n {
            return Err(Error::InvalidArgument("matrix json: row count != dim".into()));
        }
        let mut m = Self::zeros(n);
        for i in 0..n {
            if parsed.re[i].len() != n || parsed.im[i].len() != n {
                return Err(Error::InvalidArgument(format!(
                    "matrix json: row {i} length != dim"
                )));
            }
            for j in 0..n {
                let (re, im) = (parsed.re[i][j], parsed.im[i][j]);
                if !re.is_finite() || !im.is_finite() {
                    return Err(Error::InvalidArgument(format!(
                        "matrix json: non-finite entry at ({i},{j})"
                    )));
                }
                m.set(i, j, c(re, im));
            }
        }
        Ok(m)
    }

    pub fn from_json_str(data: &str) -> Result<Self> {
        Self::from_json_slice(data.as_bytes())
    }
}

// ---------------------------------------------------------------------------
// Pure states
// ---------------------------------------------------------------------------

/// Normalized state vector over 1..=3 qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amps: Vec<C64>,
}

impl PureState {
    pub fn new(amps: Vec<C64>) -> Result<Self> {
        let n = amps.len();
        if ![2, 4, 8].contains(&n) {
            return Err(Error::InvalidArgument(format!(
                "state vector length {n} is not a 1..=3 qubit register"
            )));
        }
        let norm2: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm2 - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidArgument(format!(
                "state vector norm^2 = {norm2}, expected 1 within {NORM_TOL}"
            )));
        }
        Ok(Self { amps })
    }

    /// Normalize an arbitrary nonzero vector.
    pub fn from_unnormalized(amps: Vec<C64>) -> Result<Self> {
        let norm2: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if norm2 < 1e-280 {
            return Err(Error::InvalidArgument("cannot normalize the zero vector".into()));
        }
        let s = norm2.sqrt();
        Self::new(amps.into_iter().map(|a| a / s).collect())
    }

    /// Computational basis state |index> on `n_qubits` qubits.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        if !(1..=3).contains(&n_qubits) || index >= (1 << n_qubits) {
            return Err(Error::InvalidArgument(format!(
                "basis({n_qubits}, {index}) out of range"
            )));
        }
        let mut amps = vec![C64::ZERO; 1 << n_qubits];
        amps[index] = C64::ONE;
        Ok(Self { amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.amps.len().trailing_zeros() as usize
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    pub fn amp(&self, i: usize) -> C64 {
        self.amps[i]
    }

    /// <self|other>.
    pub fn inner(&self, other: &Self) -> C64 {
        assert_eq!(self.amps.len(), other.amps.len());
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn density(&self) -> DensityOperator {
        let m = ComplexMatrix::outer(&self.amps, &self.amps);
        DensityOperator::new(m).expect("projector of a normalized state is a density operator")
    }

    pub fn kron(&self, other: &Self) -> Result<Self> {
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        Self::new(amps)
    }
}

// ---------------------------------------------------------------------------
// Density operators
// ---------------------------------------------------------------------------

/// Validated density operator: Hermitian, unit trace, eigenvalues >= -1e-10.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    mat: ComplexMatrix,
}

impl DensityOperator {
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        if ![2, 4, 8].contains(&mat.dim()) {
            return Err(Error::InvalidArgument(format!(
                "density operator dim {} is not a 1..=3 qubit register",
                mat.dim()
            )));
        }
        let herm = mat.hermiticity_error();
        if herm > HERMITICITY_TOL {
            return Err(Error::InvalidArgument(format!(
                "matrix is not Hermitian: worst asymmetry {herm:.3e}"
            )));
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > HERMITICITY_TOL || tr.im.abs() > HERMITICITY_TOL {
            return Err(Error::InvalidArgument(format!("trace {tr} differs from 1")));
        }
        let mut sym = mat.clone();
        sym.hermitize();
        let (evals, _) = hermitian_eigensystem(&sym)?;
        let min = evals.last().copied().unwrap_or(0.0);
        if min < PSD_TOL {
            return Err(Error::InvalidArgument(format!(
                "matrix has negative eigenvalue {min:.3e}"
            )));
        }
        Ok(Self { mat: sym })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn n_qubits(&self) -> usize {
        self.mat.dim().trailing_zeros() as usize
    }
}

/// Trace out every qubit not listed in `keep` (indices as in the ket labels,
/// qubit 0 leftmost). The kept qubits stay in their original relative order.
pub fn partial_trace(rho: &DensityOperator, keep: &[usize]) -> Result<DensityOperator> {
    let n = rho.n_qubits();
    let mut keep = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    if keep.is_empty() || keep.iter().any(|&q| q >= n) {
        return Err(Error::InvalidArgument(format!(
            "keep set {keep:?} invalid for {n} qubits"
        )));
    }
    if keep.len() == n {
        return Ok(rho.clone());
    }
    let traced: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
    let kd = 1 << keep.len();
    let td = 1 << traced.len();
    // bit position (from the left) q corresponds to shift n-1-q
    let shift = |q: usize| n - 1 - q;
    let mut out = ComplexMatrix::zeros(kd);
    for i in 0..kd {
        for j in 0..kd {
            let mut acc = C64::ZERO;
            for t in 0..td {
                let mut row = 0usize;
                let mut col = 0usize;
                for (pos, &q) in keep.iter().enumerate() {
                    let bit_i = (i >> (keep.len() - 1 - pos)) & 1;
                    let bit_j = (j >> (keep.len() - 1 - pos)) & 1;
                    row |= bit_i << shift(q);
                    col |= bit_j << shift(q);
                }
                for (pos, &q) in traced.iter().enumerate() {
                    let bit = (t >> (traced.len() - 1 - pos)) & 1;
                    row |= bit << shift(q);
                    col |= bit << shift(q);
                }
                acc += rho.matrix().at(row, col);
            }
            out.set(i, j, acc);
        }
    }
    DensityOperator::new(out)
}

/// Transpose the indices of one qubit only. The result is generally not
/// positive, which is exactly what the PPT witness looks for.
pub fn partial_transpose(rho: &DensityOperator, subsystem: usize) -> Result<ComplexMatrix> {
    let n = rho.n_qubits();
    if subsystem >= n {
        return Err(Error::InvalidArgument(format!(
            "subsystem {subsystem} out of range for {n} qubits"
        )));
    }
    let dim = rho.dim();
    let mask = 1usize << (n - 1 - subsystem);
    let mut out = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            let ti = (i & !mask) | (j & mask);
            let tj = (j & !mask) | (i & mask);
            out.set(ti, tj, rho.matrix().at(i, j));
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Magic basis
// ---------------------------------------------------------------------------

/// Coefficients of a two-qubit state in the basis
///   e1 = (|00> + |11>)/sqrt2,    e2 = i(|00> - |11>)/sqrt2,
///   e3 = i(|01> + |10>)/sqrt2,   e4 = (|01> - |10>)/sqrt2.
///
/// In this basis the concurrence of a pure state is |sum_k alpha_k^2|, so the
/// plain (unconjugated) bilinear form over these coefficients carries all the
/// spin-flip structure the decomposition machinery needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MagicCoefficients(pub [C64; 4]);

/// Columns are e1..e4 expressed in the computational basis.
fn magic_columns() -> [[C64; 4]; 4] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    [
        [c(s, 0.0), C64::ZERO, C64::ZERO, c(s, 0.0)],
        [c(0.0, s), C64::ZERO, C64::ZERO, c(0.0, -s)],
        [C64::ZERO, c(0.0, s), c(0.0, s), C64::ZERO],
        [C64::ZERO, c(s, 0.0), c(-s, 0.0), C64::ZERO],
    ]
}

/// The 4x4 change-of-basis matrix whose columns are e1..e4 in the
/// computational basis.
pub fn magic_basis_matrix() -> ComplexMatrix {
    let cols = magic_columns();
    let mut m = ComplexMatrix::zeros(4);
    for (k, col) in cols.iter().enumerate() {
        for (i, e) in col.iter().enumerate() {
            m.set(i, k, *e);
        }
    }
    m
}

pub fn to_magic_basis(psi: &PureState) -> Result<MagicCoefficients> {
    if psi.n_qubits() != 2 {
        return Err(Error::InvalidArgument("magic basis is defined for two qubits".into()));
    }
    let cols = magic_columns();
    let mut alpha = [C64::ZERO; 4];
    for (k, col) in cols.iter().enumerate() {
        alpha[k] = col.iter().zip(psi.amps()).map(|(e, a)| e.conj() * a).sum();
    }
    Ok(MagicCoefficients(alpha))
}

pub fn from_magic_basis(coeffs: &MagicCoefficients) -> Result<PureState> {
    let cols = magic_columns();
    let mut amps = [C64::ZERO; 4];
    for (k, col) in cols.iter().enumerate() {
        for (i, e) in col.iter().enumerate() {
            amps[i] += coeffs.0[k] * e;
        }
    }
    PureState::new(amps.to_vec())
}

// ---------------------------------------------------------------------------
// Hermitian eigensolver
// ---------------------------------------------------------------------------

/// Eigenvalues (descending) and matching eigenvector columns of a Hermitian
/// matrix, by cyclic Jacobi rotations.
///
/// Each rotation is a 2x2 unitary zeroing one off-diagonal pair; sweeps repeat
/// until the off-diagonal Frobenius norm falls below 1e-13 relative to the
/// matrix scale. For the dimensions used here (<= 8) this converges in a
/// handful of sweeps.
pub fn hermitian_eigensystem(m: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    let herm = m.hermiticity_error();
    let scale = m.max_abs_entry().max(1.0);
    if herm > HERMITICITY_TOL * scale.max(1.0) {
        return Err(Error::InvalidArgument(format!(
            "eigensystem input is not Hermitian: worst asymmetry {herm:.3e}"
        )));
    }
    let n = m.dim();
    let mut a = m.clone();
    a.hermitize();
    let mut v = ComplexMatrix::identity(n);

    let off_norm = |a: &ComplexMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a.at(i, j).norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    for _sweep in 0..200 {
        if off_norm(&a) <= JACOBI_TOL * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.at(p, q);
                let mag = apq.norm();
                if mag < 1e-300 {
                    continue;
                }
                let phase = apq / mag;
                let app = a.at(p, p).re;
                let aqq = a.at(q, q).re;
                // zero the (p,q) entry: tan(2 theta) = 2|apq| / (app - aqq)
                let tau = (app - aqq) / (2.0 * mag);
                let t = if tau == 0.0 {
                    1.0
                } else {
                    tau.signum() / (tau.abs() + (tau * tau + 1.0).sqrt())
                };
                let cth = 1.0 / (t * t + 1.0).sqrt();
                let sth = t * cth;
                let mut j_rot = ComplexMatrix::identity(n);
                j_rot.set(p, p, c(cth, 0.0));
                j_rot.set(p, q, phase * (-sth));
                j_rot.set(q, p, phase.conj() * sth);
                j_rot.set(q, q, c(cth, 0.0));
                a = j_rot.dagger().mul(&a).mul(&j_rot);
                v = v.mul(&j_rot);
            }
        }
    }
    let resid = off_norm(&a);
    if resid > JACOBI_TOL * scale * 10.0 {
        return Err(Error::Numerical(format!(
            "Jacobi eigensolver stalled at off-diagonal norm {resid:.3e}"
        )));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a.at(j, j).re.total_cmp(&a.at(i, i).re));
    let evals: Vec<f64> = order.iter().map(|&i| a.at(i, i).re).collect();
    let mut vecs = ComplexMatrix::zeros(n);
    for (col, &src) in order.iter().enumerate() {
        for row in 0..n {
            vecs.set(row, col, v.at(row, src));
        }
    }
    Ok((evals, vecs))
}

/// Hermitian square root of a positive semidefinite matrix. Eigenvalues in
/// [-1e-10, 0) are clamped to zero; anything lower is rejected.
pub fn psd_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (evals, vecs) = hermitian_eigensystem(m)?;
    let n = m.dim();
    let mut out = ComplexMatrix::zeros(n);
    for k in 0..n {
        let ev = evals[k];
        if ev < PSD_TOL {
            return Err(Error::InvalidArgument(format!(
                "psd_sqrt: eigenvalue {ev:.3e} is negative"
            )));
        }
        let root = ev.max(0.0).sqrt();
        if root == 0.0 {
            continue;
        }
        for i in 0..n {
            for j in 0..n {
                let add = vecs.at(i, k) * vecs.at(j, k).conj() * root;
                out.set(i, j, out.at(i, j) + add);
            }
        }
    }
    Ok(out)
}

/// <psi| rho |psi>.
pub fn fidelity_pure(psi: &PureState, rho: &DensityOperator) -> Result<f64> {
    if psi.dim() != rho.dim() {
        return Err(Error::InvalidArgument(format!(
            "state dim {} does not match operator dim {}",
            psi.dim(),
            rho.dim()
        )));
    }
    let rv = rho.matrix().apply(psi.amps());
    let val: C64 = psi.amps().iter().zip(&rv).map(|(a, b)| a.conj() * b).sum();
    Ok(val.re)
}

// ---------------------------------------------------------------------------
// Fixed single-qubit gates
// ---------------------------------------------------------------------------

pub fn sigma_x() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[&[C64::ZERO, C64::ONE], &[C64::ONE, C64::ZERO]]).unwrap()
}

pub fn sigma_y() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[&[C64::ZERO, c(0.0, -1.0)], &[c(0.0, 1.0), C64::ZERO]]).unwrap()
}

pub fn sigma_z() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[&[C64::ONE, C64::ZERO], &[C64::ZERO, c(-1.0, 0.0)]]).unwrap()
}

pub fn hadamard() -> ComplexMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_rows(&[&[c(s, 0.0), c(s, 0.0)], &[c(s, 0.0), c(-s, 0.0)]]).unwrap()
}
