//! The teleportation protocol with an arbitrary two-qubit resource, plus the
//! closed-form average fidelities and classical thresholds for the built-in
//! channels.
//!
//! Register layout during the protocol: qubit 0 carries the input state,
//! qubits 1 and 2 hold the resource pair (qubit 1 on the sending side).
//! The sender applies CNOT(0 -> 1) then H on qubit 0 and measures qubits 0
//! and 1; the receiver applies X^(m2) then Z^(m1). Outcomes are summed with
//! their Born weights, so the output is the exact channel action, not a
//! sampled run.

use num_complex::Complex64 as C64;

use crate::channels::{NoiseKind, NoiseSpec};
use crate::qstate::{
    fidelity_pure, hadamard, sigma_x, sigma_z, ComplexMatrix, DensityOperator, PureState,
};
use crate::{Error, Result};

/// Bloch angles of the input state cos(t/2)e^{i p/2}|0> + sin(t/2)e^{-i p/2}|1>.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InputAngles {
    pub theta: f64,
    pub phi: f64,
}

impl InputAngles {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=std::f64::consts::PI).contains(&theta) {
            return Err(Error::InvalidArgument(format!("theta {theta} outside [0, pi]")));
        }
        if !(0.0..2.0 * std::f64::consts::PI).contains(&phi) {
            return Err(Error::InvalidArgument(format!("phi {phi} outside [0, 2 pi)")));
        }
        Ok(Self { theta, phi })
    }
}

pub fn input_state(angles: InputAngles) -> PureState {
    let half = angles.theta / 2.0;
    let phase = C64::from_polar(1.0, angles.phi / 2.0);
    PureState::new(vec![half.cos() * phase, half.sin() * phase.conj()])
        .expect("Bloch angles give a normalized state")
}

/// CNOT with qubit 0 as control and qubit 1 as target, then H on qubit 0.
fn bell_measurement_unitary() -> ComplexMatrix {
    let mut cnot = ComplexMatrix::zeros(8);
    for b in 0..8usize {
        let (b0, b1, b2) = ((b >> 2) & 1, (b >> 1) & 1, b & 1);
        let nb = (b0 << 2) | ((b1 ^ b0) << 1) | b2;
        cnot.set(nb, b, C64::ONE);
    }
    let h0 = hadamard().kron(&ComplexMatrix::identity(4));
    h0.mul(&cnot)
}

fn teleport_with(u: &ComplexMatrix, resource: &DensityOperator, psi_in: &PureState) -> DensityOperator {
    let rho_in = ComplexMatrix::outer(psi_in.amps(), psi_in.amps());
    let total = rho_in.kron(resource.matrix());
    let evolved = u.mul(&total).mul(&u.dagger());

    let x = sigma_x();
    let z = sigma_z();
    let mut out = ComplexMatrix::zeros(2);
    for m1 in 0..2usize {
        for m2 in 0..2usize {
            let base = (m1 << 2) | (m2 << 1);
            let mut blk = ComplexMatrix::zeros(2);
            for i in 0..2 {
                for j in 0..2 {
                    blk.set(i, j, evolved.at(base + i, base + j));
                }
            }
            let mut corr = ComplexMatrix::identity(2);
            if m2 == 1 {
                corr = x.mul(&corr);
            }
            if m1 == 1 {
                corr = z.mul(&corr);
            }
            out = out.add(&corr.mul(&blk).mul(&corr.dagger()));
        }
    }
    out.hermitize();
    DensityOperator::new(out).expect("outcome-summed teleportation output is a state")
}

/// Run the protocol and return the receiver's qubit.
pub fn teleport_output(resource: &DensityOperator, psi_in: &PureState) -> Result<DensityOperator> {
    if resource.n_qubits() != 2 {
        return Err(Error::InvalidArgument(format!(
            "resource must be a two-qubit state, got {} qubits",
            resource.n_qubits()
        )));
    }
    if psi_in.n_qubits() != 1 {
        return Err(Error::InvalidArgument(format!(
            "input must be a single qubit, got {} qubits",
            psi_in.n_qubits()
        )));
    }
    Ok(teleport_with(&bell_measurement_unitary(), resource, psi_in))
}

/// Fidelity <psi_in| rho_out |psi_in> for one input direction.
pub fn fidelity_at(resource: &DensityOperator, angles: InputAngles) -> Result<f64> {
    let psi = input_state(angles);
    let out = teleport_output(resource, &psi)?;
    fidelity_pure(&psi, &out)
}

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on the
/// recurrence for P_n.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

/// Average of the teleportation fidelity over the input sphere:
/// Gauss-Legendre in u = cos(theta), uniform trapezoid in phi. The phi
/// integrand is a low-order trigonometric polynomial, so both rules are
/// exact well before the default 64x64 grid.
pub fn average_fidelity(resource: &DensityOperator, n_theta: usize, n_phi: usize) -> Result<f64> {
    if n_theta < 8 || n_phi < 8 {
        return Err(Error::InvalidArgument(format!(
            "quadrature grid {n_theta}x{n_phi} too coarse; need at least 8x8"
        )));
    }
    if resource.n_qubits() != 2 {
        return Err(Error::InvalidArgument(format!(
            "resource must be a two-qubit state, got {} qubits",
            resource.n_qubits()
        )));
    }
    let u_mat = bell_measurement_unitary();
    let (nodes, weights) = gauss_legendre(n_theta);
    let mut total = 0.0;
    for (&u, &wu) in nodes.iter().zip(&weights) {
        let theta = u.clamp(-1.0, 1.0).acos();
        for k in 0..n_phi {
            let phi = 2.0 * std::f64::consts::PI * k as f64 / n_phi as f64;
            let psi = input_state(InputAngles { theta, phi });
            let out = teleport_with(&u_mat, resource, &psi);
            let f = fidelity_pure(&psi, &out)?;
            total += wu * (2.0 * std::f64::consts::PI / n_phi as f64) * f;
        }
    }
    Ok(total / (4.0 * std::f64::consts::PI))
}

/// The exact sphere-averaged fidelity for each built-in channel.
pub fn average_fidelity_closed_form(spec: &NoiseSpec) -> f64 {
    let kt = spec.kappa_t;
    let e2 = (-2.0 * kt).exp();
    let e4 = (-4.0 * kt).exp();
    let e6 = (-6.0 * kt).exp();
    let e8 = (-8.0 * kt).exp();
    match spec.kind {
        NoiseKind::SameAxis(_) => 2.0 / 3.0 + e4 / 3.0,
        NoiseKind::Isotropic => 0.5 + e8 / 2.0,
        NoiseKind::DifferentAxis(_, _) => (3.0 + 2.0 * e2 + e4) / 6.0,
        NoiseKind::WSameAxisX => (14.0 + 3.0 * e2 + 2.0 * e4 + 5.0 * e6) / 24.0,
    }
}

/// The exposure at which the channel's average fidelity drops to the
/// classical ceiling 2/3, by bisection on the closed form. Same-axis noise
/// stays above 2/3 for every finite exposure, so it gets +infinity.
pub fn classical_threshold_kt(kind: NoiseKind) -> f64 {
    if matches!(kind, NoiseKind::SameAxis(_)) {
        return f64::INFINITY;
    }
    let f = |kt: f64| average_fidelity_closed_form(&NoiseSpec { kind, kappa_t: kt }) - 2.0 / 3.0;
    let mut lo = 0.0;
    let mut hi = 8.0;
    debug_assert!(f(lo) > 0.0 && f(hi) < 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
