//! Second, independently coded route to the receivers' conditioned state.
//!
//! Works entry by entry in the 32-dimensional computational basis from the
//! channel, input, Bell and qubit-5 amplitudes. No matrix products,
//! Kronecker products or partial traces from [`crate::qmat`] are used, and
//! the amplitudes are written out here rather than taken from
//! [`crate::qstates`].

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64 as C64;

use crate::protocol::Branch;
use crate::qstates::{ChannelKind, ChannelSpec, InputSpec, MeasurementSpec};

fn channel_amplitudes(kind: ChannelKind) -> [C64; 8] {
    let mut a = [C64::new(0.0, 0.0); 8];
    match kind {
        ChannelKind::Ghz => {
            a[0] = C64::new(FRAC_1_SQRT_2, 0.0);
            a[7] = C64::new(FRAC_1_SQRT_2, 0.0);
        }
        ChannelKind::W => {
            let v = C64::new((1.0f64 / 3.0).sqrt(), 0.0);
            a[1] = v;
            a[2] = v;
            a[4] = v;
        }
    }
    a
}

/// Channel density matrix entry `χ[x][x']` for three-bit indices.
fn channel_entry(amp: &[C64; 8], w: f64, x: usize, xp: usize) -> C64 {
    let noise = if x == xp { (1.0 - w) / 8.0 } else { 0.0 };
    amp[x] * amp[xp].conj() * w + noise
}

fn input_amplitudes(input: &InputSpec) -> [C64; 4] {
    let half = input.theta() / 2.0;
    [
        C64::new(0.0, 0.0),
        C64::new(half.cos(), 0.0),
        C64::from_polar(half.sin(), input.phi()),
        C64::new(0.0, 0.0),
    ]
}

fn bell_amplitudes(j: usize) -> [C64; 4] {
    let h = FRAC_1_SQRT_2;
    let r = |x: f64| C64::new(x, 0.0);
    match j {
        1 => [r(h), r(0.0), r(0.0), r(h)],
        2 => [r(h), r(0.0), r(0.0), r(-h)],
        3 => [r(0.0), r(h), r(h), r(0.0)],
        _ => [r(0.0), r(h), r(-h), r(0.0)],
    }
}

fn nu_amplitudes(meas: &MeasurementSpec, k: usize) -> [C64; 2] {
    let half = meas.mu() / 2.0;
    if k == 1 {
        [
            C64::new(half.cos(), 0.0),
            C64::from_polar(half.sin(), meas.lambda()),
        ]
    } else {
        [
            C64::new(-half.sin(), 0.0),
            C64::from_polar(half.cos(), meas.lambda()),
        ]
    }
}

/// Unnormalized receivers' operator for `branch`, as a 4x4 array indexed by
/// the two-bit value `q1 q2`.
///
/// Entry `(a, a')` is `Σ_{s,t} Π[s][t] σ[(a, t)][(a', s)]` where `s`, `t`
/// run over Alice's three bits `q3 q4 q5` and
/// `Π[s][t] = m_s conj(m_t)` with `m = bell_j ⊗ nu_k`.
pub fn direct_numerator(
    channel: &ChannelSpec,
    input: &InputSpec,
    meas: &MeasurementSpec,
    branch: Branch,
) -> [[C64; 4]; 4] {
    let chi = channel_amplitudes(channel.kind());
    let w = channel.visibility();
    let psi = input_amplitudes(input);
    let bell = bell_amplitudes(branch.j());
    let nu = nu_amplitudes(meas, branch.k());

    // Measurement amplitude over (q3, q4, q5).
    let m = |bits: usize| bell[bits >> 1] * nu[bits & 1];
    // Full state entry over (q1 q2 q3 q4 q5) index pairs, via the product form.
    let sigma = |row: usize, col: usize| {
        let chi_entry = channel_entry(&chi, w, row >> 2, col >> 2);
        let pi_entry = psi[row & 0b11] * psi[col & 0b11].conj();
        chi_entry * pi_entry
    };

    let mut out = [[C64::new(0.0, 0.0); 4]; 4];
    for (a, row) in out.iter_mut().enumerate() {
        for (ap, entry) in row.iter_mut().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for s in 0..8 {
                for t in 0..8 {
                    let proj = m(s) * m(t).conj();
                    if proj == C64::new(0.0, 0.0) {
                        continue;
                    }
                    acc += proj * sigma((a << 3) | t, (ap << 3) | s);
                }
            }
            *entry = acc;
        }
    }
    out
}

/// Conditioned state from [`direct_numerator`], or `None` when the branch
/// probability is at or below `1e-12`.
pub fn direct_conditioned(
    channel: &ChannelSpec,
    input: &InputSpec,
    meas: &MeasurementSpec,
    branch: Branch,
) -> Option<[[C64; 4]; 4]> {
    let mut n = direct_numerator(channel, input, meas, branch);
    let p: f64 = (0..4).map(|i| n[i][i].re).sum();
    if p <= crate::protocol::REACHABLE_TOL {
        return None;
    }
    for row in n.iter_mut() {
        for z in row.iter_mut() {
            *z /= p;
        }
    }
    Some(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ghz_equatorial_probability_is_one_eighth() {
        let channel = ChannelSpec::noiseless(ChannelKind::Ghz);
        let input = InputSpec::new(0.9, 1.3).unwrap();
        let meas = MeasurementSpec::new(0.4, std::f64::consts::FRAC_PI_2).unwrap();
        for branch in Branch::all() {
            let n = direct_numerator(&channel, &input, &meas, branch);
            let p: f64 = (0..4).map(|i| n[i][i].re).sum();
            assert!((p - 0.125).abs() < 1e-14);
        }
    }

    #[test]
    fn fully_mixed_channel_gives_maximally_mixed_receivers() {
        let channel = ChannelSpec::new(ChannelKind::W, 0.0).unwrap();
        let input = InputSpec::new(2.0, 0.3).unwrap();
        let meas = MeasurementSpec::new(1.0, 1.0).unwrap();
        let rho = direct_conditioned(&channel, &input, &meas, Branch::new(2, 2).unwrap()).unwrap();
        for (a, row) in rho.iter().enumerate() {
            for (b, z) in row.iter().enumerate() {
                let expected = if a == b { 0.25 } else { 0.0 };
                assert!((z - C64::new(expected, 0.0)).norm() < 1e-14);
            }
        }
    }
}
