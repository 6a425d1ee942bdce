//! Noisy resource channels: closed-form output states and a Lindblad
//! integrator to check them against.
//!
//! A resource pair (or W triple) sits in storage while each qubit suffers
//! Pauli noise at unit rate for a dimensionless time `kappa_t`. With no
//! coherent term, each single-qubit noise acts as
//! `rho -> (1+g)/2 rho + (1-g)/2 P rho P` with `g = exp(-2 kappa_t)`, and the
//! generators for different qubits or axes commute, so every channel here is
//! an exact composition of those mixers.
//!
//! One trap worth noting: the xz and yz pairs do not share a matrix. Both
//! give the same fidelity and concurrence curves, but the inner off-diagonal
//! entries of yz carry a minus sign relative to xz. The integrator
//! cross-check in the test suite pins the sign down.

use num_complex::Complex64 as C64;

use crate::qstate::{sigma_x, sigma_y, sigma_z, ComplexMatrix, DensityOperator, PureState};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        }
    }

    fn operator(self) -> ComplexMatrix {
        match self {
            Axis::X => sigma_x(),
            Axis::Y => sigma_y(),
            Axis::Z => sigma_z(),
        }
    }
}

/// Which noise acts on the stored resource.
///
/// `DifferentAxis(a, b)` puts `a`-noise on the first qubit of the pair and
/// `b`-noise on the second. `WSameAxisX` is x-noise on all three qubits of
/// the W resource.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseKind {
    SameAxis(Axis),
    Isotropic,
    DifferentAxis(Axis, Axis),
    WSameAxisX,
}

impl NoiseKind {
    pub const NAMES: [&'static str; 11] =
        ["x", "y", "z", "isotropic", "xz", "xy", "yz", "zx", "zy", "yx", "w"];

    pub fn parse(name: &str) -> Result<Self> {
        let kind = match name {
            "x" => NoiseKind::SameAxis(Axis::X),
            "y" => NoiseKind::SameAxis(Axis::Y),
            "z" => NoiseKind::SameAxis(Axis::Z),
            "isotropic" => NoiseKind::Isotropic,
            "xz" => NoiseKind::DifferentAxis(Axis::X, Axis::Z),
            "xy" => NoiseKind::DifferentAxis(Axis::X, Axis::Y),
            "yz" => NoiseKind::DifferentAxis(Axis::Y, Axis::Z),
            "zx" => NoiseKind::DifferentAxis(Axis::Z, Axis::X),
            "zy" => NoiseKind::DifferentAxis(Axis::Z, Axis::Y),
            "yx" => NoiseKind::DifferentAxis(Axis::Y, Axis::X),
            "w" => NoiseKind::WSameAxisX,
            other => {
                return Err(Error::InvalidArgument(format!(
                    "unknown noise kind '{other}' (expected one of {})",
                    Self::NAMES.join(", ")
                )))
            }
        };
        Ok(kind)
    }

    pub fn name(self) -> &'static str {
        match self {
            NoiseKind::SameAxis(a) => a.name(),
            NoiseKind::Isotropic => "isotropic",
            NoiseKind::DifferentAxis(Axis::X, Axis::Z) => "xz",
            NoiseKind::DifferentAxis(Axis::X, Axis::Y) => "xy",
            NoiseKind::DifferentAxis(Axis::Y, Axis::Z) => "yz",
            NoiseKind::DifferentAxis(Axis::Z, Axis::X) => "zx",
            NoiseKind::DifferentAxis(Axis::Z, Axis::Y) => "zy",
            NoiseKind::DifferentAxis(Axis::Y, Axis::X) => "yx",
            NoiseKind::DifferentAxis(_, _) => unreachable!("axes validated distinct"),
            NoiseKind::WSameAxisX => "w",
        }
    }

    pub fn all() -> [NoiseKind; 11] {
        Self::NAMES.map(|n| Self::parse(n).expect("built-in names parse"))
    }

    pub fn resource_qubits(self) -> usize {
        match self {
            NoiseKind::WSameAxisX => 3,
            _ => 2,
        }
    }

    /// Per-qubit axis lists defining the channel's Lindblad operators.
    fn noise_axes(self) -> Vec<(usize, Axis)> {
        match self {
            NoiseKind::SameAxis(a) => vec![(0, a), (1, a)],
            NoiseKind::Isotropic => vec![
                (0, Axis::X),
                (1, Axis::X),
                (0, Axis::Y),
                (1, Axis::Y),
                (0, Axis::Z),
                (1, Axis::Z),
            ],
            NoiseKind::DifferentAxis(a, b) => vec![(0, a), (1, b)],
            NoiseKind::WSameAxisX => vec![(0, Axis::X), (1, Axis::X), (2, Axis::X)],
        }
    }
}

/// Noise kind plus the dimensionless exposure `kappa_t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    pub kind: NoiseKind,
    pub kappa_t: f64,
}

impl NoiseSpec {
    pub fn new(kind: NoiseKind, kappa_t: f64) -> Result<Self> {
        if let NoiseKind::DifferentAxis(a, b) = kind {
            if a == b {
                return Err(Error::InvalidArgument(
                    "different-axis noise requires two distinct axes".into(),
                ));
            }
        }
        if !kappa_t.is_finite() || kappa_t < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "kappa_t must be finite and nonnegative, got {kappa_t}"
            )));
        }
        Ok(Self { kind, kappa_t })
    }
}

/// The exponential coefficient families every closed form is written in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelCoefficients {
    /// (1 ± e^{-4 kt})/2
    pub tau_plus: f64,
    pub tau_minus: f64,
    /// (1 ± e^{-2 kt})/2
    pub nu_plus: f64,
    pub nu_minus: f64,
    /// (1 ± e^{-8 kt})/2
    pub ttau_plus: f64,
    pub ttau_minus: f64,
    /// 1 ± e^{-2kt} ± e^{-4kt} ± e^{-6kt} with the four sign patterns
    /// (+,+,+), (+,-,-), (-,-,+), (-,+,-)
    pub w_alpha: [f64; 4],
    /// 1 ± e^{-6 kt}
    pub w_beta_plus: f64,
    pub w_beta_minus: f64,
}

pub fn channel_coefficients(kappa_t: f64) -> ChannelCoefficients {
    let e2 = (-2.0 * kappa_t).exp();
    let e4 = (-4.0 * kappa_t).exp();
    let e6 = (-6.0 * kappa_t).exp();
    let e8 = (-8.0 * kappa_t).exp();
    ChannelCoefficients {
        tau_plus: (1.0 + e4) / 2.0,
        tau_minus: (1.0 - e4) / 2.0,
        nu_plus: (1.0 + e2) / 2.0,
        nu_minus: (1.0 - e2) / 2.0,
        ttau_plus: (1.0 + e8) / 2.0,
        ttau_minus: (1.0 - e8) / 2.0,
        w_alpha: [
            1.0 + e2 + e4 + e6,
            1.0 + e2 - e4 - e6,
            1.0 - e2 - e4 + e6,
            1.0 - e2 + e4 - e6,
        ],
        w_beta_plus: 1.0 + e6,
        w_beta_minus: 1.0 - e6,
    }
}

/// The resource pair before any noise: (|00> + |11>)/sqrt2.
pub fn epr_state() -> PureState {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    PureState::new(vec![
        C64::new(s, 0.0),
        C64::ZERO,
        C64::ZERO,
        C64::new(s, 0.0),
    ])
    .expect("EPR state is normalized")
}

/// The three-qubit resource (|100> + |010> + sqrt2 |001>)/2.
pub fn w_state() -> PureState {
    let mut amps = vec![C64::ZERO; 8];
    amps[0b100] = C64::new(0.5, 0.0);
    amps[0b010] = C64::new(0.5, 0.0);
    amps[0b001] = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    PureState::new(amps).expect("W state is normalized")
}

fn embed_single(op: &ComplexMatrix, qubit: usize, n_qubits: usize) -> ComplexMatrix {
    let mut out = ComplexMatrix::identity(1);
    for q in 0..n_qubits {
        let factor = if q == qubit { op.clone() } else { ComplexMatrix::identity(2) };
        out = out.kron(&factor);
    }
    out
}

/// One Pauli mixer applied to `qubit`: (1+g)/2 rho + (1-g)/2 P rho P.
fn pauli_mix(rho: &ComplexMatrix, qubit: usize, axis: Axis, g: f64, n_qubits: usize) -> ComplexMatrix {
    let p = embed_single(&axis.operator(), qubit, n_qubits);
    let flipped = p.mul(rho).mul(&p);
    rho.scale(C64::new((1.0 + g) / 2.0, 0.0))
        .add(&flipped.scale(C64::new((1.0 - g) / 2.0, 0.0)))
}

/// Closed-form output of the channel at the requested exposure.
pub fn analytic_channel(spec: &NoiseSpec) -> Result<DensityOperator> {
    let mat = match spec.kind {
        NoiseKind::WSameAxisX => w_channel_matrix(spec.kappa_t),
        kind => {
            let g = (-2.0 * spec.kappa_t).exp();
            let mut rho = epr_state().density().matrix().clone();
            for (qubit, axis) in kind.noise_axes() {
                rho = pauli_mix(&rho, qubit, axis, g, 2);
            }
            rho
        }
    };
    DensityOperator::new(mat)
}

/// The 8x8 output of x-noise on all three W qubits, assembled from the
/// alpha/beta coefficient families with an overall 1/16.
fn w_channel_matrix(kappa_t: f64) -> ComplexMatrix {
    let co = channel_coefficients(kappa_t);
    let [a1, a2, a3, a4] = co.w_alpha;
    let (bp, bm) = (co.w_beta_plus, co.w_beta_minus);
    let r2 = std::f64::consts::SQRT_2;
    let rows: [[f64; 8]; 8] = [
        [2.0 * a2, 0.0, 0.0, r2 * a2, 0.0, r2 * a2, a2, 0.0],
        [0.0, 2.0 * a1, r2 * a1, 0.0, r2 * a1, 0.0, 0.0, a3],
        [0.0, r2 * a1, 2.0 * bp, 0.0, a1, 0.0, 0.0, r2 * a3],
        [r2 * a2, 0.0, 0.0, 2.0 * bm, 0.0, a4, r2 * a4, 0.0],
        [0.0, r2 * a1, a1, 0.0, 2.0 * bp, 0.0, 0.0, r2 * a3],
        [r2 * a2, 0.0, 0.0, a4, 0.0, 2.0 * bm, r2 * a4, 0.0],
        [a2, 0.0, 0.0, r2 * a4, 0.0, r2 * a4, 2.0 * a4, 0.0],
        [0.0, a3, r2 * a3, 0.0, r2 * a3, 0.0, 0.0, 2.0 * a3],
    ];
    let mut m = ComplexMatrix::zeros(8);
    for (i, row) in rows.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            m.set(i, j, C64::new(v / 16.0, 0.0));
        }
    }
    m
}

/// The channel's initial resource state as a density operator.
pub fn initial_resource(kind: NoiseKind) -> DensityOperator {
    match kind.resource_qubits() {
        3 => w_state().density(),
        _ => epr_state().density(),
    }
}

/// Integrate d sigma/ds = sum_L (L sigma L^dag - {L^dag L, sigma}/2) from
/// s = 0 to s = kappa_t with fixed-step RK4, Hermitizing after each step.
/// The jump operators are the channel's unit-rate Pauli set.
pub fn lindblad_evolve(
    rho0: &DensityOperator,
    kind: NoiseKind,
    kappa_t: f64,
    steps: usize,
) -> Result<DensityOperator> {
    if steps == 0 {
        return Err(Error::InvalidArgument("integrator needs at least one step".into()));
    }
    if !kappa_t.is_finite() || kappa_t < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "kappa_t must be finite and nonnegative, got {kappa_t}"
        )));
    }
    let n_qubits = kind.resource_qubits();
    if rho0.n_qubits() != n_qubits {
        return Err(Error::InvalidArgument(format!(
            "initial state has {} qubits but the channel acts on {}",
            rho0.n_qubits(),
            n_qubits
        )));
    }
    let louts: Vec<ComplexMatrix> = kind
        .noise_axes()
        .into_iter()
        .map(|(q, a)| embed_single(&a.operator(), q, n_qubits))
        .collect();

    let rhs = |r: &ComplexMatrix| -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(r.dim());
        for l in &louts {
            // Pauli jump operators: L^dag L = I, so the anticommutator term
            // is just -rho per operator.
            let jump = l.mul(r).mul(l);
            out = out.add(&jump).sub(r);
        }
        out
    };

    let h = kappa_t / steps as f64;
    let mut r = rho0.matrix().clone();
    for _ in 0..steps {
        let k1 = rhs(&r);
        let k2 = rhs(&r.add(&k1.scale(C64::new(h / 2.0, 0.0))));
        let k3 = rhs(&r.add(&k2.scale(C64::new(h / 2.0, 0.0))));
        let k4 = rhs(&r.add(&k3.scale(C64::new(h, 0.0))));
        let incr = k1
            .add(&k2.scale(C64::new(2.0, 0.0)))
            .add(&k3.scale(C64::new(2.0, 0.0)))
            .add(&k4)
            .scale(C64::new(h / 6.0, 0.0));
        r = r.add(&incr);
        r.hermitize();
    }
    DensityOperator::new(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn coefficient_families_are_consistent() {
        for kt in [0.0, 0.1, 0.25, 0.7, 2.0] {
            let c = channel_coefficients(kt);
            assert_abs_diff_eq!(c.tau_plus + c.tau_minus, 1.0, epsilon = 1e-14);
            assert_abs_diff_eq!(c.nu_plus + c.nu_minus, 1.0, epsilon = 1e-14);
            assert_abs_diff_eq!(c.ttau_plus + c.ttau_minus, 1.0, epsilon = 1e-14);
            assert_abs_diff_eq!(c.w_alpha.iter().sum::<f64>(), 4.0, epsilon = 1e-13);
            assert_abs_diff_eq!(c.w_beta_plus + c.w_beta_minus, 2.0, epsilon = 1e-14);
        }
        let c0 = channel_coefficients(0.0);
        assert_eq!(c0.tau_plus, 1.0);
        assert_eq!(c0.tau_minus, 0.0);
        assert_eq!(c0.w_beta_plus, 2.0);
        assert_eq!(c0.w_beta_minus, 0.0);
        let cmu = channel_coefficients(3.0f64.ln() / 8.0);
        assert_abs_diff_eq!(cmu.ttau_plus, 2.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(cmu.ttau_minus, 1.0 / 3.0, epsilon = 1e-15);
        let cq = channel_coefficients(0.25);
        assert_abs_diff_eq!(cq.tau_minus, 0.316060, epsilon = 1e-6);
    }

    #[test]
    fn kind_names_round_trip() {
        for name in NoiseKind::NAMES {
            let kind = NoiseKind::parse(name).unwrap();
            assert_eq!(kind.name(), name);
        }
        assert!(NoiseKind::parse("xx").is_err());
        assert!(NoiseKind::parse("").is_err());
        assert!(NoiseSpec::new(NoiseKind::DifferentAxis(Axis::X, Axis::X), 0.1).is_err());
        assert!(NoiseSpec::new(NoiseKind::Isotropic, -0.1).is_err());
        assert!(NoiseSpec::new(NoiseKind::Isotropic, f64::NAN).is_err());
    }

    #[test]
    fn zero_exposure_returns_the_clean_resource() {
        for kind in NoiseKind::all() {
            let spec = NoiseSpec::new(kind, 0.0).unwrap();
            let rho = analytic_channel(&spec).unwrap();
            let clean = initial_resource(kind);
            assert!(rho.matrix().max_abs_diff(clean.matrix()) < 1e-14, "{}", kind.name());
        }
    }

    #[test]
    fn isotropic_saturates_to_maximally_mixed() {
        let spec = NoiseSpec::new(NoiseKind::Isotropic, 20.0).unwrap();
        let rho = analytic_channel(&spec).unwrap();
        let quarter = ComplexMatrix::identity(4).scale(C64::new(0.25, 0.0));
        assert!(rho.matrix().max_abs_diff(&quarter) < 1e-12);
    }

    #[test]
    fn xz_entries_match_direct_evaluation() {
        let kt = 0.2;
        let spec = NoiseSpec::new(NoiseKind::DifferentAxis(Axis::X, Axis::Z), kt).unwrap();
        let rho = analytic_channel(&spec).unwrap();
        let c = channel_coefficients(kt);
        let g = (-2.0 * kt).exp();
        assert_abs_diff_eq!(rho.matrix().at(0, 0).re, c.nu_plus / 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(rho.matrix().at(0, 3).re, g * c.nu_plus / 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(rho.matrix().at(1, 1).re, c.nu_minus / 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(rho.matrix().at(1, 2).re, g * c.nu_minus / 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(rho.matrix().at(0, 0).im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn yz_differs_from_xz_by_an_inner_sign() {
        let kt = 0.2;
        let xz = analytic_channel(&NoiseSpec::new(NoiseKind::parse("xz").unwrap(), kt).unwrap())
            .unwrap();
        let yz = analytic_channel(&NoiseSpec::new(NoiseKind::parse("yz").unwrap(), kt).unwrap())
            .unwrap();
        assert!(xz.matrix().max_abs_diff(yz.matrix()) > 0.05);
        assert_abs_diff_eq!(
            yz.matrix().at(1, 2).re,
            -xz.matrix().at(1, 2).re,
            epsilon = 1e-14
        );
        // corners agree
        assert_abs_diff_eq!(yz.matrix().at(0, 3).re, xz.matrix().at(0, 3).re, epsilon = 1e-14);
    }

    #[test]
    fn reversed_pairs_give_identical_matrices() {
        for (a, b) in [("zx", "xz"), ("yx", "xy"), ("zy", "yz")] {
            for kt in [0.05, 0.3, 0.8] {
                let ra = analytic_channel(&NoiseSpec::new(NoiseKind::parse(a).unwrap(), kt).unwrap())
                    .unwrap();
                let rb = analytic_channel(&NoiseSpec::new(NoiseKind::parse(b).unwrap(), kt).unwrap())
                    .unwrap();
                assert!(ra.matrix().max_abs_diff(rb.matrix()) < 1e-15, "{a} vs {b} at {kt}");
            }
        }
    }

    #[test]
    fn every_channel_stays_a_density_operator_across_exposures() {
        for kind in NoiseKind::all() {
            let mut kt = 0.0;
            while kt <= 1.0 + 1e-9 {
                // DensityOperator::new inside analytic_channel enforces
                // hermiticity, unit trace, and positivity
                analytic_channel(&NoiseSpec::new(kind, kt).unwrap()).unwrap();
                kt += 0.05;
            }
        }
    }

    #[test]
    fn integrator_matches_closed_forms() {
        for (name, kt, steps) in [("x", 0.1, 400), ("isotropic", 0.05, 400), ("yz", 0.2, 800)] {
            let kind = NoiseKind::parse(name).unwrap();
            let spec = NoiseSpec::new(kind, kt).unwrap();
            let exact = analytic_channel(&spec).unwrap();
            let num = lindblad_evolve(&initial_resource(kind), kind, kt, steps).unwrap();
            let d = num.matrix().max_abs_diff(exact.matrix());
            assert!(d < 1e-8, "{name} at {kt}: {d:.2e}");
        }
    }

    #[test]
    fn integrator_no_time_is_identity() {
        let kind = NoiseKind::SameAxis(Axis::Z);
        let rho0 = initial_resource(kind);
        let out = lindblad_evolve(&rho0, kind, 0.0, 5).unwrap();
        assert!(out.matrix().max_abs_diff(rho0.matrix()) < 1e-15);
    }

    #[test]
    fn integrator_rejects_bad_arguments() {
        let kind = NoiseKind::SameAxis(Axis::X);
        let rho0 = initial_resource(kind);
        assert!(lindblad_evolve(&rho0, kind, 0.1, 0).is_err());
        assert!(lindblad_evolve(&rho0, NoiseKind::WSameAxisX, 0.1, 10).is_err());
        assert!(lindblad_evolve(&rho0, kind, -1.0, 10).is_err());
    }

    #[test]
    fn w_matrix_is_trace_one_hermitian_psd() {
        for kt in [0.0, 0.1, 0.5, 2.0] {
            let spec = NoiseSpec::new(NoiseKind::WSameAxisX, kt).unwrap();
            // construction validates
            let rho = analytic_channel(&spec).unwrap();
            assert_eq!(rho.dim(), 8);
        }
    }
}
