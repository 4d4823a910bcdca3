//! States, projectors and operators of the five-qubit teleportation setup.
//!
//! Register: qubit 1 (Bob), qubit 2 (Cindy), qubit 3 (Alice's channel
//! share), qubits 4 and 5 (Alice's input pair). Ordering follows the
//! convention documented in [`crate::qmat`].

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::qmat::{herm_eigvals, QMatrix, QVector, C64, I, ONE, ZERO};

/// Tolerance used when validating a [`DensityOperator`].
pub const DENSITY_TOL: f64 = 1e-9;

/// Hermitian, unit-trace, positive-semidefinite operator on `qubits` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    matrix: QMatrix,
    qubits: usize,
}

impl DensityOperator {
    pub fn new(matrix: QMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotADensityOperator(format!(
                "{}x{} is not square",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let dim = matrix.rows();
        if !dim.is_power_of_two() {
            return Err(Error::NotADensityOperator(format!(
                "dimension {dim} is not a qubit register"
            )));
        }
        let defect = matrix.hermiticity_defect();
        if defect > DENSITY_TOL {
            return Err(Error::NotADensityOperator(format!(
                "not Hermitian (defect {defect:e})"
            )));
        }
        let tr = matrix.trace();
        if (tr - ONE).norm() > DENSITY_TOL {
            return Err(Error::NotADensityOperator(format!("trace {tr} != 1")));
        }
        let min_eig = *herm_eigvals(&matrix)?.last().expect("non-empty spectrum");
        if min_eig < -DENSITY_TOL {
            return Err(Error::NotADensityOperator(format!(
                "negative eigenvalue {min_eig:e}"
            )));
        }
        Ok(Self {
            matrix: matrix.symmetrized(),
            qubits: dim.trailing_zeros() as usize,
        })
    }

    /// `|psi⟩⟨psi|` for a normalized ket.
    pub fn pure(psi: &QVector) -> Result<Self> {
        Self::new(psi.projector())
    }

    pub fn maximally_mixed(qubits: usize) -> Self {
        let dim = 1usize << qubits;
        Self {
            matrix: QMatrix::identity(dim).scale_real(1.0 / dim as f64),
            qubits,
        }
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> QMatrix {
        self.matrix
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }
}

fn check_range(name: &'static str, value: f64, ok: bool, reason: &'static str) -> Result<()> {
    if !value.is_finite() || !ok {
        return Err(Error::InvalidParameter { name, value, reason });
    }
    Ok(())
}

/// Polar and azimuthal angles of the input pair
/// `cos(theta/2)|01⟩ + e^{i phi} sin(theta/2)|10⟩`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InputSpec {
    theta: f64,
    phi: f64,
}

impl InputSpec {
    /// `theta` must lie strictly inside `(0, pi)` so the input is entangled;
    /// `phi` in `[0, 2 pi]`.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        check_range(
            "theta",
            theta,
            theta > 0.0 && theta < PI,
            "must lie in the open interval (0, pi)",
        )?;
        check_range(
            "phi",
            phi,
            (0.0..=2.0 * PI).contains(&phi),
            "must lie in [0, 2 pi]",
        )?;
        Ok(Self { theta, phi })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn ket(&self) -> QVector {
        let mut amp = vec![ZERO; 4];
        amp[0b01] = C64::new((self.theta / 2.0).cos(), 0.0);
        amp[0b10] = C64::from_polar((self.theta / 2.0).sin(), self.phi);
        QVector::new(amp)
    }
}

/// Alice's single-qubit basis on qubit 5, parametrized by `lambda` in
/// `[0, 2 pi]` and `mu` in `[0, pi]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasurementSpec {
    lambda: f64,
    mu: f64,
}

impl MeasurementSpec {
    pub fn new(lambda: f64, mu: f64) -> Result<Self> {
        check_range(
            "lambda",
            lambda,
            (0.0..=2.0 * PI).contains(&lambda),
            "must lie in [0, 2 pi]",
        )?;
        check_range("mu", mu, (0.0..=PI).contains(&mu), "must lie in [0, pi]")?;
        Ok(Self { lambda, mu })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// `|nu+⟩ = cos(mu/2)|0⟩ + e^{i lambda} sin(mu/2)|1⟩`.
    pub fn nu_plus(&self) -> QVector {
        let half = self.mu / 2.0;
        QVector::new(vec![
            C64::new(half.cos(), 0.0),
            C64::from_polar(half.sin(), self.lambda),
        ])
    }

    /// `|nu-⟩ = -sin(mu/2)|0⟩ + e^{i lambda} cos(mu/2)|1⟩`, the orthogonal
    /// complement of [`Self::nu_plus`]. With `e^{-i lambda}` on the second
    /// amplitude the pair would not be orthogonal unless `lambda` is a
    /// multiple of `pi`.
    pub fn nu_minus(&self) -> QVector {
        let half = self.mu / 2.0;
        QVector::new(vec![
            C64::new(-half.sin(), 0.0),
            C64::from_polar(half.cos(), self.lambda),
        ])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ChannelKind {
    Ghz,
    W,
}

impl ChannelKind {
    pub const ALL: [ChannelKind; 2] = [ChannelKind::Ghz, ChannelKind::W];

    pub fn name(self) -> &'static str {
        match self {
            ChannelKind::Ghz => "GHZ",
            ChannelKind::W => "W",
        }
    }

    /// The noiseless three-qubit channel ket on qubits 1, 2, 3.
    pub fn ket(self) -> QVector {
        let mut amp = vec![ZERO; 8];
        match self {
            ChannelKind::Ghz => {
                amp[0b000] = C64::new(FRAC_1_SQRT_2, 0.0);
                amp[0b111] = C64::new(FRAC_1_SQRT_2, 0.0);
            }
            ChannelKind::W => {
                let a = C64::new(1.0 / 3f64.sqrt(), 0.0);
                amp[0b001] = a;
                amp[0b010] = a;
                amp[0b100] = a;
            }
        }
        QVector::new(amp)
    }
}

impl fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ChannelKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "ghz" => Ok(ChannelKind::Ghz),
            "w" => Ok(ChannelKind::W),
            other => Err(format!("unknown channel '{other}' (expected ghz or w)")),
        }
    }
}

/// Channel selection plus white-noise visibility `w` in `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChannelSpec {
    kind: ChannelKind,
    visibility: f64,
}

impl ChannelSpec {
    pub fn new(kind: ChannelKind, visibility: f64) -> Result<Self> {
        check_range(
            "w",
            visibility,
            (0.0..=1.0).contains(&visibility),
            "must lie in [0, 1]",
        )?;
        Ok(Self { kind, visibility })
    }

    pub fn noiseless(kind: ChannelKind) -> Self {
        Self {
            kind,
            visibility: 1.0,
        }
    }

    pub fn kind(&self) -> ChannelKind {
        self.kind
    }

    pub fn visibility(&self) -> f64 {
        self.visibility
    }
}

/// Input pair density operator on qubits 4, 5.
pub fn input_state(spec: &InputSpec) -> DensityOperator {
    DensityOperator::pure(&spec.ket()).expect("normalized ket")
}

/// Bell ket for outcome `j` in `1..=4`: Phi+, Phi-, Psi+, Psi-.
pub fn bell_state(j: usize) -> QVector {
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    let mut amp = vec![ZERO; 4];
    match j {
        1 | 2 => {
            amp[0b00] = h;
            amp[0b11] = if j == 1 { h } else { -h };
        }
        3 | 4 => {
            amp[0b01] = h;
            amp[0b10] = if j == 3 { h } else { -h };
        }
        _ => panic!("Bell outcome index {j} outside 1..=4"),
    }
    QVector::new(amp)
}

/// The four Bell projectors on qubits 3, 4; element `j - 1` is `Π^j`.
pub fn bell_projectors() -> [QMatrix; 4] {
    [1, 2, 3, 4].map(|j| bell_state(j).projector())
}

/// Alice's two projectors on qubit 5; element `k - 1` is `Π^k`.
pub fn nu_projectors(spec: &MeasurementSpec) -> [QMatrix; 2] {
    [spec.nu_plus().projector(), spec.nu_minus().projector()]
}

/// `w χ + (1 - w) I/8` on qubits 1, 2, 3.
pub fn channel_state(spec: &ChannelSpec) -> DensityOperator {
    let w = spec.visibility();
    let pure = spec.kind().ket().projector().scale_real(w);
    let noise = QMatrix::identity(8).scale_real((1.0 - w) / 8.0);
    DensityOperator::new(&pure + &noise).expect("convex mixture of density operators")
}

/// Pauli matrix `σ^b`, `b` in `0..=3`.
pub fn pauli(b: usize) -> Result<QMatrix> {
    Ok(match b {
        0 => QMatrix::identity(2),
        1 => QMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]),
        2 => QMatrix::from_rows(&[&[ZERO, -I], &[I, ZERO]]),
        3 => QMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]),
        _ => {
            return Err(Error::InvalidParameter {
                name: "pauli index",
                value: b as f64,
                reason: "must be 0, 1, 2 or 3",
            })
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::partial_trace;
    use std::f64::consts::FRAC_PI_2;

    fn assert_valid_density(rho: &DensityOperator) {
        let m = rho.matrix();
        assert!(m.hermiticity_defect() < 1e-12);
        assert!((m.trace() - ONE).norm() < 1e-12);
        assert!(*herm_eigvals(m).unwrap().last().unwrap() >= -1e-10);
    }

    #[test]
    fn input_state_examples() {
        let rho = input_state(&InputSpec::new(FRAC_PI_2, 0.0).unwrap());
        assert!(rho.matrix().max_abs_diff(&bell_state(3).projector()) < 1e-15);
        let rho = input_state(&InputSpec::new(FRAC_PI_2, PI).unwrap());
        assert!(rho.matrix().max_abs_diff(&bell_state(4).projector()) < 1e-15);
        assert_valid_density(&rho);
        assert_eq!(rho.qubits(), 2);
    }

    #[test]
    fn input_spec_rejects_boundaries() {
        assert!(InputSpec::new(0.0, 0.0).is_err());
        assert!(InputSpec::new(PI, 0.0).is_err());
        assert!(InputSpec::new(1.0, -0.1).is_err());
        assert!(InputSpec::new(1.0, 2.0 * PI).is_ok());
        assert!(InputSpec::new(f64::NAN, 0.0).is_err());
        let err = MeasurementSpec::new(0.0, 4.0).unwrap_err();
        assert!(err.to_string().contains("mu"));
        assert!(ChannelSpec::new(ChannelKind::W, 1.5).is_err());
    }

    #[test]
    fn bell_projectors_complete_and_orthogonal() {
        let proj = bell_projectors();
        let sum = proj.iter().skip(1).fold(proj[0].clone(), |acc, p| &acc + p);
        assert!(sum.max_abs_diff(&QMatrix::identity(4)) < 1e-12);
        for a in 0..4 {
            for b in 0..4 {
                let prod = &proj[a] * &proj[b];
                if a == b {
                    assert!(prod.max_abs_diff(&proj[a]) < 1e-12);
                } else {
                    assert!(prod.max_abs() < 1e-12, "Π{}Π{} != 0", a + 1, b + 1);
                }
            }
        }
        let image = QVector::apply(&proj[0], &QVector::basis(4, 0));
        assert!((image.norm().powi(2) - 0.5).abs() < 1e-15);
        assert!((image.amplitudes()[3] - C64::new(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn nu_projector_examples() {
        let [p1, p2] = nu_projectors(&MeasurementSpec::new(1.3, 0.0).unwrap());
        assert!(p1.max_abs_diff(&QMatrix::from_real_diag(&[1.0, 0.0])) < 1e-15);
        assert!(p2.max_abs_diff(&QMatrix::from_real_diag(&[0.0, 1.0])) < 1e-15);

        let [p1, p2] = nu_projectors(&MeasurementSpec::new(0.0, FRAC_PI_2).unwrap());
        let plus = QMatrix::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]);
        let minus = QMatrix::from_real_rows(&[&[0.5, -0.5], &[-0.5, 0.5]]);
        assert!(p1.max_abs_diff(&plus) < 1e-15);
        assert!(p2.max_abs_diff(&minus) < 1e-15);
    }

    #[test]
    fn nu_basis_is_orthonormal_for_any_lambda() {
        for &lambda in &[0.0, 0.4, 1.0, 2.5, PI, 5.0, 2.0 * PI] {
            for &mu in &[0.0, 0.3, FRAC_PI_2, 2.9, PI] {
                let spec = MeasurementSpec::new(lambda, mu).unwrap();
                assert!(spec.nu_plus().inner(&spec.nu_minus()).norm() < 1e-15);
                let [p1, p2] = nu_projectors(&spec);
                assert!((&p1 + &p2).max_abs_diff(&QMatrix::identity(2)) < 1e-12);
                assert!((&p1 * &p2).max_abs() < 1e-12);
            }
        }
    }

    #[test]
    fn channel_state_examples() {
        let ghz = channel_state(&ChannelSpec::noiseless(ChannelKind::Ghz));
        for r in 0..8 {
            for c in 0..8 {
                let expected = if [0, 7].contains(&r) && [0, 7].contains(&c) {
                    0.5
                } else {
                    0.0
                };
                assert!((ghz.matrix()[(r, c)] - C64::new(expected, 0.0)).norm() < 1e-15);
            }
        }
        let w = channel_state(&ChannelSpec::noiseless(ChannelKind::W));
        for r in 0..8 {
            for c in 0..8 {
                let on = [1, 2, 4].contains(&r) && [1, 2, 4].contains(&c);
                let expected = if on { 1.0 / 3.0 } else { 0.0 };
                assert!((w.matrix()[(r, c)] - C64::new(expected, 0.0)).norm() < 1e-15);
            }
        }
        for kind in ChannelKind::ALL {
            let mixed = channel_state(&ChannelSpec::new(kind, 0.0).unwrap());
            assert!(
                mixed
                    .matrix()
                    .max_abs_diff(&QMatrix::identity(8).scale_real(0.125))
                    < 1e-15
            );
            assert_valid_density(&mixed);
        }
    }

    #[test]
    fn channel_state_is_affine_in_visibility() {
        for kind in ChannelKind::ALL {
            let one = channel_state(&ChannelSpec::noiseless(kind)).into_matrix();
            let zero = channel_state(&ChannelSpec::new(kind, 0.0).unwrap()).into_matrix();
            for &w in &[0.1, 0.25, 0.5, 0.9] {
                let mid = channel_state(&ChannelSpec::new(kind, w).unwrap());
                assert_valid_density(&mid);
                let mix = &one.scale_real(w) + &zero.scale_real(1.0 - w);
                assert!(mid.matrix().max_abs_diff(&mix) < 1e-12);
            }
        }
    }

    #[test]
    fn pauli_examples() {
        assert_eq!(pauli(0).unwrap(), QMatrix::identity(2));
        let s2 = pauli(2).unwrap();
        assert_eq!(s2[(0, 1)], -I);
        assert_eq!(s2[(1, 0)], I);
        for b in 0..4 {
            let p = pauli(b).unwrap();
            assert!((&p * &p).max_abs_diff(&QMatrix::identity(2)) < 1e-15);
        }
        assert!(pauli(4).is_err());
    }

    #[test]
    fn density_operator_validation() {
        assert!(DensityOperator::new(QMatrix::identity(4)).is_err());
        assert!(DensityOperator::new(QMatrix::from_real_diag(&[1.5, -0.5])).is_err());
        assert!(DensityOperator::new(QMatrix::identity(3).scale_real(1.0 / 3.0)).is_err());
        let rho = DensityOperator::new(QMatrix::from_real_diag(&[0.25; 4])).unwrap();
        assert_eq!(rho, DensityOperator::maximally_mixed(2));
    }

    #[test]
    fn reduced_ghz_is_classically_correlated() {
        let ghz = channel_state(&ChannelSpec::noiseless(ChannelKind::Ghz));
        for traced in 0..3 {
            let red = partial_trace(ghz.matrix(), &[2, 2, 2], &[traced]).unwrap();
            assert!(red.max_abs_diff(&QMatrix::from_real_diag(&[0.5, 0.0, 0.0, 0.5])) < 1e-15);
        }
    }
}
