//! Entanglement measures: concurrence for pure and mixed two-qubit states,
//! the entanglement of formation and Groverian measure derived from it, the
//! maximal product-state overlap Pmax, and the partial-transpose witness.

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::qstate::{
    hermitian_eigensystem, partial_transpose, psd_sqrt, sigma_y, to_magic_basis, ComplexMatrix,
    DensityOperator, PureState,
};
use crate::{Error, Result};

/// Relative floor below which eigenvalues of the spin-flip product are
/// treated as exact zeros. The channel states here are rank-deficient, and
/// eigen-noise of order 1e-16 would otherwise surface as 1e-8 after the
/// square root.
const SPECTRUM_FLOOR: f64 = 1e-13;

/// |sum_k alpha_k^2| over the magic-basis coefficients.
pub fn concurrence_pure(psi: &PureState) -> Result<f64> {
    let alpha = to_magic_basis(psi)?;
    let bilinear: C64 = alpha.0.iter().map(|a| a * a).sum();
    Ok(bilinear.norm())
}

fn spin_flip(rho: &DensityOperator) -> ComplexMatrix {
    let yy = sigma_y().kron(&sigma_y());
    yy.mul(&rho.matrix().conjugate()).mul(&yy)
}

/// Wootters concurrence max(0, l1 - l2 - l3 - l4), with the l_i the
/// descending square roots of the spectrum of sqrt(rho) rho~ sqrt(rho).
pub fn concurrence_mixed(rho: &DensityOperator) -> Result<f64> {
    if rho.n_qubits() != 2 {
        return Err(Error::InvalidArgument(format!(
            "concurrence is defined for two qubits, got {}",
            rho.n_qubits()
        )));
    }
    let sq = psd_sqrt(rho.matrix())?;
    let mut m = sq.mul(&spin_flip(rho)).mul(&sq);
    m.hermitize();
    let (evals, _) = hermitian_eigensystem(&m)?;
    let scale = evals.first().copied().unwrap_or(0.0).max(0.0);
    let lam: Vec<f64> = evals
        .iter()
        .map(|&e| if e < SPECTRUM_FLOOR * scale.max(1e-300) { 0.0 } else { e.sqrt() })
        .collect();
    let c = lam[0] - lam[1] - lam[2] - lam[3];
    if c < 1e-12 {
        Ok(0.0)
    } else {
        Ok(c)
    }
}

fn checked_concurrence(c: f64) -> Result<f64> {
    if !(-1e-9..=1.0 + 1e-9).contains(&c) {
        return Err(Error::InvalidArgument(format!("concurrence {c} outside [0, 1]")));
    }
    Ok(c.clamp(0.0, 1.0))
}

fn binary_entropy(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        return 0.0;
    }
    -x * x.log2() - (1.0 - x) * (1.0 - x).log2()
}

/// Entanglement of formation h((1 + sqrt(1 - c^2))/2).
pub fn eof_from_concurrence(c: f64) -> Result<f64> {
    let c = checked_concurrence(c)?;
    Ok(binary_entropy((1.0 + (1.0 - c * c).sqrt()) / 2.0))
}

/// Groverian measure sqrt((1 - sqrt(1 - c^2))/2), in [0, 1/sqrt2].
pub fn groverian_from_concurrence(c: f64) -> Result<f64> {
    let c = checked_concurrence(c)?;
    Ok(((1.0 - (1.0 - c * c).sqrt()) / 2.0).sqrt())
}

/// Maximal squared overlap with a product state for a two-qubit pure state:
/// (1 + sqrt(1 - 4 det rho_A))/2 with rho_A the reduced single-qubit state.
pub fn pmax_pure_2qubit(psi: &PureState) -> Result<f64> {
    if psi.n_qubits() != 2 {
        return Err(Error::InvalidArgument(format!(
            "pmax closed form is defined for two qubits, got {}",
            psi.n_qubits()
        )));
    }
    let a = psi.amps();
    // rho_A[i][k] = sum_j a[ij] conj(a[kj])
    let mut red = [[C64::ZERO; 2]; 2];
    for i in 0..2 {
        for k in 0..2 {
            for j in 0..2 {
                red[i][k] += a[i * 2 + j] * a[k * 2 + j].conj();
            }
        }
    }
    let det = (red[0][0] * red[1][1] - red[0][1] * red[1][0]).re;
    Ok(0.5 * (1.0 + (1.0 - 4.0 * det).max(0.0).sqrt()))
}

fn haar_qubit(rng: &mut ChaCha8Rng) -> [C64; 2] {
    let mut normal = || {
        let u1: f64 = rng.random::<f64>();
        let u2: f64 = rng.random::<f64>();
        let r = (-2.0 * (1.0 - u1).max(1e-300).ln()).sqrt();
        let (s, c) = (2.0 * std::f64::consts::PI * u2).sin_cos();
        (r * c, r * s)
    };
    let (a, b) = (normal(), normal());
    let v = [C64::new(a.0, a.1), C64::new(b.0, b.1)];
    let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    [v[0] / n, v[1] / n]
}

/// Maximize |<q1 ... qn | psi>|^2 over product states by alternating
/// single-qubit updates from multi-start random initializations.
///
/// Each update replaces one factor by the normalized partial contraction,
/// which is exact per coordinate, so the sweep value never decreases. The
/// sweep stops when the gain drops below 1e-13; the cap is generous because
/// states with a flat maximizer direction converge sublinearly.
pub fn pmax_numeric(psi: &PureState, restarts: usize, seed: u64) -> Result<f64> {
    if restarts == 0 {
        return Err(Error::InvalidArgument("pmax_numeric needs at least one restart".into()));
    }
    let n = psi.n_qubits();
    let dim = psi.dim();
    let bit = |idx: usize, q: usize| (idx >> (n - 1 - q)) & 1;

    let mut best = 0.0f64;
    for r in 0..restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(
            seed.wrapping_add((r as u64).wrapping_mul(0x9E3779B97F4A7C15)),
        );
        let mut qs: Vec<[C64; 2]> = (0..n).map(|_| haar_qubit(&mut rng)).collect();
        let mut last = 0.0f64;
        for _sweep in 0..50_000 {
            let mut val = 0.0;
            for i in 0..n {
                let mut phi = [C64::ZERO; 2];
                for idx in 0..dim {
                    let mut coef = psi.amp(idx);
                    for (j, q) in qs.iter().enumerate() {
                        if j != i {
                            coef *= q[bit(idx, j)].conj();
                        }
                    }
                    phi[bit(idx, i)] += coef;
                }
                let norm2 = phi[0].norm_sqr() + phi[1].norm_sqr();
                if norm2 > 1e-300 {
                    let norm = norm2.sqrt();
                    qs[i] = [phi[0] / norm, phi[1] / norm];
                }
                val = norm2;
            }
            if val - last < 1e-13 {
                last = val.max(last);
                break;
            }
            last = val;
        }
        best = best.max(last);
    }
    Ok(best.min(1.0))
}

/// Smallest eigenvalue of the partial transpose. Nonnegative (within
/// -1e-10) exactly when the two-qubit state is separable.
pub fn ppt_min_eigenvalue(rho: &DensityOperator) -> Result<f64> {
    if rho.n_qubits() != 2 {
        return Err(Error::InvalidArgument(format!(
            "partial-transpose witness is defined for two qubits, got {}",
            rho.n_qubits()
        )));
    }
    let pt = partial_transpose(rho, 1)?;
    let (evals, _) = hermitian_eigensystem(&pt)?;
    Ok(*evals.last().expect("4x4 spectrum is nonempty"))
}

/// The measures the sweep and `entangle` command report for one two-qubit
/// state. `pmax` is the maximal product-state overlap probability, defined
/// for pure states only and absent otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntanglementReport {
    pub concurrence: f64,
    pub eof: f64,
    pub groverian: f64,
    pub pmax: Option<f64>,
    pub ppt_min_eig: f64,
}

pub fn report_mixed(rho: &DensityOperator) -> Result<EntanglementReport> {
    let c = concurrence_mixed(rho)?;
    Ok(EntanglementReport {
        concurrence: c,
        eof: eof_from_concurrence(c)?,
        groverian: groverian_from_concurrence(c)?,
        pmax: None,
        ppt_min_eig: ppt_min_eigenvalue(rho)?,
    })
}

pub fn report_pure(psi: &PureState) -> Result<EntanglementReport> {
    let c = concurrence_pure(psi)?;
    Ok(EntanglementReport {
        concurrence: c,
        eof: eof_from_concurrence(c)?,
        groverian: groverian_from_concurrence(c)?,
        pmax: Some(pmax_pure_2qubit(psi)?),
        ppt_min_eig: ppt_min_eigenvalue(&psi.density())?,
    })
}
