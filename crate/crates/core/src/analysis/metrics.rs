use crate::qmat::{herm_eigvals, psd_sqrt_with_floor, QMatrix};
use crate::qstates::DensityOperator;

/// Eigenvalues of a two-qubit density operator at or below this are treated
/// as rounding noise when forming its square root.
pub const RANK_FLOOR: f64 = 1e-12;

/// Trace overlap `tr(τ π)` between an output state and a pure target.
pub fn fidelity(tau: &DensityOperator, input: &DensityOperator) -> f64 {
    crate::protocol::overlap(tau.matrix(), input.matrix())
}

fn sigma_y_sigma_y() -> QMatrix {
    QMatrix::from_real_rows(&[
        &[0.0, 0.0, 0.0, -1.0],
        &[0.0, 0.0, 1.0, 0.0],
        &[0.0, 1.0, 0.0, 0.0],
        &[-1.0, 0.0, 0.0, 0.0],
    ])
}

fn require_two_qubit(rho: &DensityOperator) {
    assert_eq!(rho.dim(), 4, "concurrence is defined here for two-qubit states");
}

/// Spin-flipped state `(σ² ⊗ σ²) ρ* (σ² ⊗ σ²)`, conjugation taken in the
/// computational basis.
pub fn spin_flipped(rho: &DensityOperator) -> QMatrix {
    require_two_qubit(rho);
    let yy = sigma_y_sigma_y();
    &(&yy * &rho.matrix().conj()) * &yy
}

/// `sqrt(ρ) · ρ̃ · sqrt(ρ)`. Hermitian and PSD, with the same spectrum as the
/// non-Hermitian `ρ ρ̃`.
pub fn wootters_hermitian(rho: &DensityOperator) -> QMatrix {
    let root = psd_sqrt_with_floor(rho.matrix(), RANK_FLOOR).expect("density operator is PSD");
    &(&root * &spin_flipped(rho)) * &root
}

/// Square roots of the eigenvalues of `ρ ρ̃`, descending.
///
/// These are the singular values of `A = sqrt(ρ) (σ²⊗σ²) sqrt(ρ)*`, since
/// `A A† = sqrt(ρ) ρ̃ sqrt(ρ)`. They are read off the Hermitian dilation
/// `[[0, A], [A†, 0]]`, whose eigenvalues are `±σ_i`; this keeps absolute
/// accuracy near zero where `sqrt(eigenvalue)` would amplify rounding.
pub fn spin_flip_spectrum(rho: &DensityOperator) -> [f64; 4] {
    require_two_qubit(rho);
    let root = psd_sqrt_with_floor(rho.matrix(), RANK_FLOOR).expect("density operator is PSD");
    let a = &(&root * &sigma_y_sigma_y()) * &root.conj();

    let mut dilation = QMatrix::zeros(8, 8);
    for r in 0..4 {
        for c in 0..4 {
            dilation[(r, 4 + c)] = a[(r, c)];
            dilation[(4 + c, r)] = a[(r, c)].conj();
        }
    }
    let ev = herm_eigvals(&dilation).expect("dilation is Hermitian");
    [ev[0].max(0.0), ev[1].max(0.0), ev[2].max(0.0), ev[3].max(0.0)]
}

/// Wootters concurrence `max{λ1 - λ2 - λ3 - λ4, 0}`.
pub fn concurrence(rho: &DensityOperator) -> f64 {
    let [l1, l2, l3, l4] = spin_flip_spectrum(rho);
    (l1 - l2 - l3 - l4).clamp(0.0, 1.0)
}
