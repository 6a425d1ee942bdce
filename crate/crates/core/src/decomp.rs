//! Pure-state decompositions of the channel states: the explicit
//! concurrence-optimal ensembles, product-state (separable) ensembles in the
//! zero-concurrence regime, and a general equal-concurrence decomposition
//! for arbitrary two-qubit states.
//!
//! Everything here works in magic-basis coordinates, where the symmetric
//! bilinear form B(a, b) = sum_k a_k b_k carries the spin-flip structure: a
//! pure state's concurrence is |B(a, a)|, and a set of subnormalized rows z_i
//! reconstructs rho exactly when it is related to the eigenrows by a matrix
//! with orthonormal rows.

use num_complex::Complex64 as C64;

use crate::channels::{analytic_channel, channel_coefficients, Axis, NoiseKind, NoiseSpec};
use crate::entanglement::concurrence_pure;
use crate::qstate::{
    from_magic_basis, hermitian_eigensystem, magic_basis_matrix, ComplexMatrix, DensityOperator,
    MagicCoefficients, PureState,
};
use crate::teleport::classical_threshold_kt;
use crate::{Error, Result};

const SIGN_PATTERNS: [[f64; 4]; 4] = [
    [1.0, 1.0, 1.0, 1.0],
    [1.0, 1.0, -1.0, -1.0],
    [1.0, -1.0, 1.0, -1.0],
    [1.0, -1.0, -1.0, 1.0],
];

/// Weighted pure-state mixture. Weights sum to one; members are normalized,
/// phase-canonicalized (first significant amplitude real positive) and
/// sorted by descending weight.
#[derive(Debug, Clone)]
pub struct Ensemble {
    pub members: Vec<(f64, PureState)>,
}

impl Ensemble {
    pub fn weight_sum(&self) -> f64 {
        self.members.iter().map(|(w, _)| w).sum()
    }

    /// Sum of weighted projectors.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let dim = self.members.first().map_or(4, |(_, s)| s.dim());
        let mut out = ComplexMatrix::zeros(dim);
        for (w, psi) in &self.members {
            let proj = ComplexMatrix::outer(psi.amps(), psi.amps());
            out = out.add(&proj.scale(C64::new(*w, 0.0)));
        }
        out
    }

    fn from_weighted_magic(rows: Vec<(f64, [C64; 4])>) -> Result<Self> {
        let mut members = Vec::with_capacity(rows.len());
        for (w, coeffs) in rows {
            let state = from_magic_basis(&MagicCoefficients(coeffs))?;
            members.push((w, canonical_phase(&state)?));
        }
        canonical_sort(&mut members);
        Ok(Self { members })
    }

    /// Rows are subnormalized magic coordinates; the squared norm becomes
    /// the weight. Rows lighter than 1e-14 are dropped.
    fn from_unnormalized_magic(rows: Vec<[C64; 4]>) -> Result<Self> {
        let mut members = Vec::with_capacity(rows.len());
        for z in rows {
            let w: f64 = z.iter().map(|a| a.norm_sqr()).sum();
            if w < 1e-14 {
                continue;
            }
            let s = w.sqrt();
            let coeffs = [z[0] / s, z[1] / s, z[2] / s, z[3] / s];
            let state = from_magic_basis(&MagicCoefficients(coeffs))?;
            members.push((w, canonical_phase(&state)?));
        }
        canonical_sort(&mut members);
        Ok(Self { members })
    }
}

fn canonical_phase(psi: &PureState) -> Result<PureState> {
    let amps = psi.amps();
    let lead = amps.iter().find(|a| a.norm() > 1e-12);
    let rotated = match lead {
        Some(a) => {
            let phase = a.conj() / a.norm();
            amps.iter().map(|x| x * phase).collect()
        }
        None => amps.to_vec(),
    };
    PureState::new(rotated)
}

fn canonical_sort(members: &mut [(f64, PureState)]) {
    members.sort_by(|(wa, sa), (wb, sb)| {
        wb.total_cmp(wa).then_with(|| {
            for (x, y) in sa.amps().iter().zip(sb.amps()) {
                let ord = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
                if ord != std::cmp::Ordering::Equal {
                    return ord;
                }
            }
            std::cmp::Ordering::Equal
        })
    });
}

/// Reconstruction residual (max entry) and per-member concurrences.
pub fn verify_ensemble(e: &Ensemble, target: &DensityOperator) -> Result<(f64, Vec<f64>)> {
    if e.members.is_empty() {
        return Err(Error::InvalidArgument("ensemble has no members".into()));
    }
    if e.members.iter().any(|(_, s)| s.dim() != target.dim()) {
        return Err(Error::InvalidArgument(
            "ensemble members do not match the target dimension".into(),
        ));
    }
    let residual = e.reconstruct().max_abs_diff(target.matrix());
    let concurrences = e
        .members
        .iter()
        .map(|(_, s)| concurrence_pure(s))
        .collect::<Result<Vec<f64>>>()?;
    Ok((residual, concurrences))
}

fn require_two_qubit_kind(kind: NoiseKind) -> Result<()> {
    if kind == NoiseKind::WSameAxisX {
        return Err(Error::InvalidArgument(
            "pure-state decompositions are available for the two-qubit channels only".into(),
        ));
    }
    Ok(())
}

/// Magic slot permutation taking the xz-family members to the given pair.
fn family_permutation(a: Axis, b: Axis) -> [usize; 4] {
    use Axis::*;
    match (a, b) {
        (X, Z) | (Z, X) => [0, 1, 2, 3],
        (Y, Z) | (Z, Y) => [0, 1, 3, 2],
        (X, Y) | (Y, X) => [0, 2, 3, 1],
        _ => unreachable!("axes validated distinct"),
    }
}

fn permute(coeffs: [C64; 4], perm: [usize; 4]) -> [C64; 4] {
    let mut out = [C64::ZERO; 4];
    for (src, &dst) in perm.iter().enumerate() {
        out[dst] = coeffs[src];
    }
    out
}

/// The explicit minimal-average-concurrence ensemble for each two-qubit
/// channel. Valid wherever the channel is entangled; past the classical
/// threshold the separable construction takes over.
pub fn optimal_ensemble(spec: &NoiseSpec) -> Result<Ensemble> {
    require_two_qubit_kind(spec.kind)?;
    let kt = spec.kappa_t;
    let threshold = classical_threshold_kt(spec.kind);
    if kt > threshold + 1e-12 {
        return Err(Error::OutOfDomain(format!(
            "optimal ensemble for '{}' is defined for kappa_t <= {threshold:.9}; got {kt}",
            spec.kind.name()
        )));
    }
    let co = channel_coefficients(kt);
    let rows: Vec<(f64, [C64; 4])> = match spec.kind {
        NoiseKind::SameAxis(axis) => {
            let slot = match axis {
                Axis::X => 2,
                Axis::Y => 3,
                Axis::Z => 1,
            };
            let head = C64::new(co.tau_plus.sqrt(), 0.0);
            let tail = C64::new(0.0, co.tau_minus.sqrt());
            let mut plus = [C64::ZERO; 4];
            plus[0] = head;
            plus[slot] = tail;
            let mut minus = [C64::ZERO; 4];
            minus[0] = head;
            minus[slot] = -tail;
            vec![(0.5, plus), (0.5, minus)]
        }
        NoiseKind::Isotropic => {
            let l1 = (3.0 * co.ttau_plus - 1.0) / 2.0;
            let l2 = co.ttau_minus / 2.0;
            let s1 = C64::new(l1.sqrt(), 0.0);
            let im = |x: f64| C64::new(0.0, x);
            vec![
                (0.25, [s1, im(-(3.0 * l2).sqrt()), C64::ZERO, C64::ZERO]),
                (0.25, [s1, im((l2 / 3.0).sqrt()), im(-2.0 * (2.0 * l2 / 3.0).sqrt()), C64::ZERO]),
                (0.25, [s1, im((l2 / 3.0).sqrt()), im((2.0 * l2 / 3.0).sqrt()), im(-(2.0 * l2).sqrt())]),
                (0.25, [s1, im((l2 / 3.0).sqrt()), im((2.0 * l2 / 3.0).sqrt()), im((2.0 * l2).sqrt())]),
            ]
        }
        NoiseKind::DifferentAxis(a, b) => {
            let p = co.nu_plus;
            let m = co.nu_minus;
            let w_outer = p / (1.0 + 2.0 * p);
            let w_inner = 1.0 / (2.0 * (1.0 + 2.0 * p));
            let head = C64::new(p, 0.0);
            let im = |x: f64| C64::new(0.0, x);
            let e2c = im(p * (m / (1.0 + p)).sqrt());
            let e3c = (m * (1.0 + 2.0 * p) / (1.0 + p)).sqrt();
            let e4c = m * (1.0 + 2.0 * p).sqrt();
            let base = [
                [head, im(-(m * (1.0 + p)).sqrt()), C64::ZERO, C64::ZERO],
                [head, e2c, im(-e3c), C64::ZERO],
                [head, e2c, im(p * e3c), im(-e4c)],
                [head, e2c, im(p * e3c), im(e4c)],
            ];
            let perm = family_permutation(a, b);
            vec![
                (w_outer, permute(base[0], perm)),
                (w_outer, permute(base[1], perm)),
                (w_inner, permute(base[2], perm)),
                (w_inner, permute(base[3], perm)),
            ]
        }
        NoiseKind::WSameAxisX => unreachable!("rejected above"),
    };
    Ensemble::from_weighted_magic(rows)
}

/// Phases th_1..th_4 with sum_j coeffs_j exp(2 i th_j) = 0, th_1 = 0
/// canonical.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSolution {
    pub theta: [f64; 4],
}

/// Angles (alpha, beta) with a e^{i alpha} + b e^{i beta} = d for d real
/// nonnegative, by the law of cosines. Callers guarantee the triangle
/// inequality |a - b| <= d <= a + b.
fn pair_angles(a: f64, b: f64, d: f64) -> (f64, f64) {
    const EPS: f64 = 1e-300;
    if a < EPS || b < EPS {
        // the feasibility bracket forces d to equal the surviving side
        return (0.0, 0.0);
    }
    if d <= EPS {
        return (0.0, std::f64::consts::PI);
    }
    let cos_alpha = ((a * a + d * d - b * b) / (2.0 * a * d)).clamp(-1.0, 1.0);
    let alpha = cos_alpha.acos();
    let (sin_alpha, cos_alpha) = alpha.sin_cos();
    let beta = (-a * sin_alpha).atan2(d - a * cos_alpha);
    (alpha, beta)
}

/// Close the four-sided polygon with side lengths `coeffs`: the first pair
/// spans a chord of length d in one direction, the second pair returns along
/// -d. Feasible whenever no side exceeds the sum of the others, which is
/// exactly the zero-concurrence condition for the states handled here.
pub fn solve_phase_condition(coeffs: [f64; 4]) -> Result<PhaseSolution> {
    for c in coeffs {
        if !c.is_finite() || c < -1e-14 {
            return Err(Error::InvalidArgument(format!(
                "phase condition needs nonnegative coefficients, got {c}"
            )));
        }
    }
    let c = coeffs.map(|x| x.max(0.0));
    let lo = (c[0] - c[1]).abs().max((c[2] - c[3]).abs());
    let hi = (c[0] + c[1]).min(c[2] + c[3]);
    if lo > hi + 1e-12 {
        return Err(Error::OutOfDomain(format!(
            "no phase assignment cancels coefficients {c:?}; the dominant one exceeds the rest"
        )));
    }
    let d = 0.5 * (lo + hi.max(lo));
    let (a1, a2) = pair_angles(c[0], c[1], d);
    let (b1, b2) = pair_angles(c[2], c[3], d);
    let mut phi = [a1, a2, std::f64::consts::PI + b1, std::f64::consts::PI + b2];
    let base = phi[0];
    let tau = 2.0 * std::f64::consts::PI;
    for p in phi.iter_mut() {
        *p = (*p - base).rem_euclid(tau);
    }
    let residual: C64 = c
        .iter()
        .zip(&phi)
        .map(|(&cj, &pj)| C64::from_polar(cj, pj))
        .sum();
    if residual.norm() > 1e-10 {
        return Err(Error::Numerical(format!(
            "phase closure residual {:.3e} exceeds 1e-10",
            residual.norm()
        )));
    }
    let theta = phi.map(|p| (p / 2.0).rem_euclid(std::f64::consts::PI));
    Ok(PhaseSolution { theta })
}

/// Diagonal of the state in the magic basis; errors if the state is not
/// magic-diagonal, which all the built-in two-qubit channels are.
fn magic_diagonal(rho: &DensityOperator) -> Result<[f64; 4]> {
    let m = magic_basis_matrix();
    let in_magic = m.dagger().mul(rho.matrix()).mul(&m);
    let mut d = [0.0; 4];
    for i in 0..4 {
        for j in 0..4 {
            if i != j && in_magic.at(i, j).norm() > 1e-12 {
                return Err(Error::Numerical(format!(
                    "state is not diagonal in the magic basis: entry ({i},{j}) = {:.3e}",
                    in_magic.at(i, j).norm()
                )));
            }
        }
        d[i] = in_magic.at(i, i).re;
    }
    Ok(d)
}

/// Four equal-weight product states reconstructing the channel in its
/// zero-concurrence regime. Built from the magic diagonal d: the vectors
/// -i sqrt(d_j) e_j are combined under the four sign patterns with phases
/// that cancel every member's concurrence.
pub fn separable_ensemble(spec: &NoiseSpec) -> Result<Ensemble> {
    require_two_qubit_kind(spec.kind)?;
    let kt = spec.kappa_t;
    let threshold = classical_threshold_kt(spec.kind);
    if kt < threshold - 1e-12 {
        return Err(Error::OutOfDomain(format!(
            "separable decomposition for '{}' needs kappa_t >= {threshold:.9}; got {kt}",
            spec.kind.name()
        )));
    }
    let rho = analytic_channel(spec)?;
    let d = magic_diagonal(&rho)?;
    let phases = solve_phase_condition(d)?;
    let mut rows = Vec::with_capacity(4);
    for pattern in SIGN_PATTERNS {
        let mut z = [C64::ZERO; 4];
        for j in 0..4 {
            let amp = C64::from_polar(d[j].max(0.0).sqrt(), phases.theta[j]);
            z[j] = C64::new(0.0, -0.5) * pattern[j] * amp;
        }
        rows.push(z);
    }
    Ensemble::from_unnormalized_magic(rows)
}

/// Con-eigendecomposition of a complex symmetric matrix: returns (U', sigma)
/// with U' tau U'^T = diag(sigma), sigma >= 0 descending, U' unitary.
///
/// Works through the real embedding [[Re, Im], [Im, -Re]], whose spectrum is
/// the +-sigma pairs; an eigenvector [x; y] of +sigma gives the
/// con-eigenvector x + i y. The null space is even-dimensional and closed
/// under [x; y] -> [-y; x], so half of it is selected by projecting that
/// image away.
fn takagi(tau: &ComplexMatrix) -> Result<(ComplexMatrix, Vec<f64>)> {
    let n = tau.dim();
    let two_n = 2 * n;
    let mut m = ComplexMatrix::zeros(two_n);
    for i in 0..n {
        for j in 0..n {
            let t = tau.at(i, j);
            m.set(i, j, C64::new(t.re, 0.0));
            m.set(i, j + n, C64::new(t.im, 0.0));
            m.set(i + n, j, C64::new(t.im, 0.0));
            m.set(i + n, j + n, C64::new(-t.re, 0.0));
        }
    }
    let (evals, vecs) = hermitian_eigensystem(&m)?;
    let scale = evals.iter().fold(0.0f64, |acc, e| acc.max(e.abs())).max(1e-300);
    let ztol = 1e-12 * scale;

    let column = |k: usize| -> Vec<f64> { (0..two_n).map(|i| vecs.at(i, k).re).collect() };
    let mut us: Vec<Vec<C64>> = Vec::new();
    let mut sigma: Vec<f64> = Vec::new();
    let mut zero_vecs: Vec<Vec<f64>> = Vec::new();
    for k in 0..two_n {
        let ev = evals[k];
        if ev > ztol {
            let col = column(k);
            us.push((0..n).map(|i| C64::new(col[i], col[i + n])).collect());
            sigma.push(ev);
        } else if ev.abs() <= ztol {
            zero_vecs.push(column(k));
        }
    }
    if us.len() > n {
        return Err(Error::Numerical(
            "con-eigendecomposition found more positive directions than the dimension".into(),
        ));
    }

    let jmap = |v: &[f64]| -> Vec<f64> {
        let mut out = vec![0.0; two_n];
        for i in 0..n {
            out[i] = -v[i + n];
            out[i + n] = v[i];
        }
        out
    };
    let dot = |a: &[f64], b: &[f64]| -> f64 { a.iter().zip(b).map(|(x, y)| x * y).sum() };

    let mut picked: Vec<Vec<f64>> = Vec::new();
    while us.len() + picked.len() < n {
        let mut found = false;
        for cand in &zero_vecs {
            let mut w = cand.clone();
            for p in &picked {
                let jp = jmap(p);
                let cp = dot(p, &w);
                let cj = dot(&jp, &w);
                for i in 0..two_n {
                    w[i] -= cp * p[i] + cj * jp[i];
                }
            }
            let norm = dot(&w, &w).sqrt();
            if norm > 1e-6 {
                for x in w.iter_mut() {
                    *x /= norm;
                }
                picked.push(w);
                found = true;
                break;
            }
        }
        if !found {
            return Err(Error::Numerical("null-space pairing failed".into()));
        }
    }
    for v in picked {
        us.push((0..n).map(|i| C64::new(v[i], v[i + n])).collect());
        sigma.push(0.0);
    }

    let mut uprime = ComplexMatrix::zeros(n);
    for (i, u) in us.iter().enumerate() {
        for j in 0..n {
            uprime.set(i, j, u[j].conj());
        }
    }
    Ok((uprime, sigma))
}

/// Equal-concurrence decomposition of an arbitrary two-qubit state: every
/// member's concurrence equals the state's mixed concurrence, which also
/// makes the ensemble average the convex-roof minimum.
pub fn wootters_decomposition(rho: &DensityOperator) -> Result<Ensemble> {
    if rho.n_qubits() != 2 {
        return Err(Error::InvalidArgument(format!(
            "decomposition is defined for two qubits, got {}",
            rho.n_qubits()
        )));
    }
    let (evals, vecs) = hermitian_eigensystem(rho.matrix())?;
    let to_magic = magic_basis_matrix().dagger();
    let mut zrows: Vec<[C64; 4]> = Vec::new();
    for k in 0..4 {
        if evals[k] > 1e-13 {
            let scaled: Vec<C64> = (0..4)
                .map(|i| vecs.at(i, k) * C64::new(evals[k].sqrt(), 0.0))
                .collect();
            let coords = to_magic.apply(&scaled);
            zrows.push([coords[0], coords[1], coords[2], coords[3]]);
        }
    }
    let r = zrows.len();
    if r == 0 {
        return Err(Error::Numerical("state has no spectral support".into()));
    }

    let mut tau = ComplexMatrix::zeros(r);
    for i in 0..r {
        for j in i..r {
            let mut s = C64::ZERO;
            for k in 0..4 {
                s += zrows[i][k] * zrows[j][k];
            }
            tau.set(i, j, s);
            tau.set(j, i, s);
        }
    }
    let (uprime, sigma) = takagi(&tau)?;

    let mut xrows: Vec<[C64; 4]> = vec![[C64::ZERO; 4]; r];
    for i in 0..r {
        for j in 0..r {
            let u = uprime.at(i, j);
            for k in 0..4 {
                xrows[i][k] += u * zrows[j][k];
            }
        }
    }

    let c = sigma[0] - sigma[1..].iter().sum::<f64>();
    let final_rows: Vec<[C64; 4]> = if c > 1e-14 {
        equalize_concurrences(&xrows, &sigma, c)?
    } else {
        let mut sig4 = [0.0; 4];
        sig4[..r].copy_from_slice(&sigma);
        let phases = solve_phase_condition(sig4)?;
        let yrows: Vec<[C64; 4]> = xrows
            .iter()
            .enumerate()
            .map(|(i, x)| x.map(|v| v * C64::from_polar(1.0, phases.theta[i])))
            .collect();
        if r == 1 {
            yrows
        } else {
            let mut rows = Vec::with_capacity(4);
            for pattern in SIGN_PATTERNS {
                let mut z = [C64::ZERO; 4];
                for (j, y) in yrows.iter().enumerate() {
                    for k in 0..4 {
                        z[k] += 0.5 * pattern[j] * y[k];
                    }
                }
                rows.push(z);
            }
            rows
        }
    };
    Ensemble::from_unnormalized_magic(final_rows)
}

/// Entangled branch: phase the sub-leading rows by i so the bilinear form
/// becomes diag(s1, -s2, ..., -sr), then rotate by a real orthogonal matrix
/// that zeroes the diagonal of D - C Re(Gram), leaving every member with
/// bilinear magnitude C times its weight.
fn equalize_concurrences(
    xrows: &[[C64; 4]],
    sigma: &[f64],
    c: f64,
) -> Result<Vec<[C64; 4]>> {
    let r = xrows.len();
    let mut yrows: Vec<[C64; 4]> = xrows.to_vec();
    for row in yrows.iter_mut().skip(1) {
        for v in row.iter_mut() {
            *v *= C64::i();
        }
    }

    let mut a = vec![vec![0.0f64; r]; r];
    for i in 0..r {
        for j in 0..r {
            let mut g = C64::ZERO;
            for k in 0..4 {
                g += yrows[i][k].conj() * yrows[j][k];
            }
            a[i][j] = -c * g.re;
        }
    }
    a[0][0] += sigma[0];
    for i in 1..r {
        a[i][i] -= sigma[i];
    }

    let mut vrot = vec![vec![0.0f64; r]; r];
    for (i, row) in vrot.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    let diag_max = |a: &Vec<Vec<f64>>| (0..a.len()).map(|i| a[i][i].abs()).fold(0.0, f64::max);
    for _ in 0..200 {
        if diag_max(&a) < 1e-14 {
            break;
        }
        let mut hi = 0;
        let mut lo = 0;
        for i in 0..r {
            if a[i][i] > a[hi][hi] {
                hi = i;
            }
            if a[i][i] < a[lo][lo] {
                lo = i;
            }
        }
        if hi == lo {
            break;
        }
        let (aii, ajj, aij) = (a[hi][hi], a[lo][lo], a[hi][lo]);
        // root of aii + 2 aij t + ajj t^2 with the stable quadratic form
        let disc = (aij * aij - aii * ajj).max(0.0);
        let t = if ajj.abs() < 1e-300 {
            if aij.abs() < 1e-300 { 0.0 } else { -aii / (2.0 * aij) }
        } else {
            let q = -(aij + disc.sqrt().copysign(aij));
            let t1 = q / ajj;
            let t2 = if q.abs() > 1e-300 { aii / q } else { t1 };
            if t2.abs() < t1.abs() { t2 } else { t1 }
        };
        let theta = t.atan();
        let (s, co) = theta.sin_cos();
        for k in 0..r {
            let (x, y) = (a[hi][k], a[lo][k]);
            a[hi][k] = co * x + s * y;
            a[lo][k] = -s * x + co * y;
        }
        for row in a.iter_mut() {
            let (x, y) = (row[hi], row[lo]);
            row[hi] = co * x + s * y;
            row[lo] = -s * x + co * y;
        }
        for k in 0..r {
            let (x, y) = (vrot[hi][k], vrot[lo][k]);
            vrot[hi][k] = co * x + s * y;
            vrot[lo][k] = -s * x + co * y;
        }
    }
    if diag_max(&a) > 1e-13 {
        return Err(Error::Numerical(format!(
            "concurrence-equalizing rotation stalled at diagonal {:.3e}",
            diag_max(&a)
        )));
    }

    let mut rows = vec![[C64::ZERO; 4]; r];
    for i in 0..r {
        for j in 0..r {
            let v = vrot[i][j];
            for k in 0..4 {
                rows[i][k] += v * yrows[j][k];
            }
        }
    }
    Ok(rows)
}
