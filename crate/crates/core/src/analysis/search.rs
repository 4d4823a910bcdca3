//! Exhaustive search over the sixteen Pauli-pair corrections.

use crate::analysis::quadrature::QuadratureSpec;
use crate::protocol::{overlap, Branch, CorrectionChoice, Protocol, REACHABLE_TOL};
use crate::qstates::{input_state, DensityOperator};

/// Choices within this distance of the best score count as maximizers.
pub const MAXIMIZER_TOL: f64 = 1e-9;

/// Fidelity of `rho` against `input` after each of the sixteen corrections,
/// in `(b, c)` order.
pub fn correction_fidelities(rho: &DensityOperator, input: &DensityOperator) -> Vec<(CorrectionChoice, f64)> {
    CorrectionChoice::all()
        .map(|choice| {
            let moved = rho
                .matrix()
                .conjugate_by(&choice.unitary())
                .expect("4x4 operands");
            (choice, overlap(&moved, input.matrix()))
        })
        .collect()
}

fn maximizers(scores: &[(CorrectionChoice, f64)]) -> Vec<CorrectionChoice> {
    let best = scores.iter().map(|&(_, s)| s).fold(f64::NEG_INFINITY, f64::max);
    scores
        .iter()
        .filter(|&&(_, s)| s >= best - MAXIMIZER_TOL)
        .map(|&(c, _)| c)
        .collect()
}

/// Every Pauli pair whose corrected state reaches the maximal fidelity with
/// `input`, sorted by `(b, c)`.
pub fn search_corrections(rho: &DensityOperator, input: &DensityOperator) -> Vec<CorrectionChoice> {
    maximizers(&correction_fidelities(rho, input))
}

/// Input-averaged search for one branch.
#[derive(Clone, Debug, PartialEq)]
pub struct AveragedSearch {
    pub branch: Branch,
    /// Sphere average of `p_jk`.
    pub probability: f64,
    /// Sphere average of `p_jk F^jk` for each correction, `(b, c)` order.
    pub scores: Vec<(CorrectionChoice, f64)>,
    pub maximizers: Vec<CorrectionChoice>,
}

impl AveragedSearch {
    pub fn reachable(&self) -> bool {
        self.probability > REACHABLE_TOL
    }

    pub fn score(&self, choice: CorrectionChoice) -> f64 {
        self.scores
            .iter()
            .find(|(c, _)| *c == choice)
            .map(|&(_, s)| s)
            .expect("all sixteen choices are scored")
    }
}

/// For every branch, scores each correction by its contribution
/// `⟨p_jk F^jk⟩` to the average fidelity. The receivers do not know the
/// input, so a fixed correction per branch is judged by this average rather
/// than by its fidelity for any single input.
pub fn averaged_search(protocol: &Protocol, quad: &QuadratureSpec) -> Vec<AveragedSearch> {
    let unitaries: Vec<_> = CorrectionChoice::all().map(|c| (c, c.unitary())).collect();
    let mut prob = [0.0; 8];
    let mut scores = vec![vec![0.0; unitaries.len()]; 8];

    for (input, weight) in quad.nodes() {
        let pi = input_state(&input);
        for (branch, p, numerator) in protocol.branch_numerators(&input) {
            let i = branch.index();
            prob[i] += weight * p;
            for (slot, (_, u)) in scores[i].iter_mut().zip(&unitaries) {
                let moved = numerator.conjugate_by(u).expect("4x4 operands");
                *slot += weight * overlap(&moved, pi.matrix());
            }
        }
    }

    Branch::all()
        .map(|branch| {
            let i = branch.index();
            let scored: Vec<_> = unitaries
                .iter()
                .zip(&scores[i])
                .map(|(&(c, _), &s)| (c, s))
                .collect();
            AveragedSearch {
                branch,
                probability: prob[i],
                maximizers: maximizers(&scored),
                scores: scored,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::{run_protocol, CorrectionChoice as CC};
    use crate::qstates::{bell_state, ChannelKind, ChannelSpec, InputSpec, MeasurementSpec};
    use std::f64::consts::FRAC_PI_2;

    fn cc(b: usize, c: usize) -> CC {
        CC::new(b, c).unwrap()
    }

    #[test]
    fn psi_minus_to_psi_plus() {
        let rho = DensityOperator::pure(&bell_state(4)).unwrap();
        let target = DensityOperator::pure(&bell_state(3)).unwrap();
        let found = search_corrections(&rho, &target);
        // Brute force by hand: σ³ on either qubit, or σ¹σ² / σ²σ¹ combinations.
        assert_eq!(found, vec![cc(0, 3), cc(1, 2), cc(2, 1), cc(3, 0)]);
    }

    #[test]
    fn identity_suffices_when_states_agree() {
        let input = input_state(&InputSpec::new(1.2, 0.5).unwrap());
        let found = search_corrections(&input, &input);
        assert!(found.contains(&cc(0, 0)));
        let scores = correction_fidelities(&input, &input);
        assert!((scores[0].1 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn ghz_branch_11_has_exactly_the_table_entries() {
        let input = InputSpec::new(1.1, 0.7).unwrap();
        let records = run_protocol(
            &ChannelSpec::noiseless(ChannelKind::Ghz),
            &input,
            &MeasurementSpec::new(0.0, FRAC_PI_2).unwrap(),
        )
        .unwrap();
        let rho = records[0].conditioned.as_ref().unwrap();
        assert_eq!(records[0].branch, Branch::new(1, 1).unwrap());
        let found = search_corrections(rho, &input_state(&input));
        assert_eq!(found, vec![cc(0, 1), cc(3, 2)]);
    }

    #[test]
    fn averaged_search_scores_sum_to_average_fidelity() {
        let protocol = Protocol::new(
            ChannelSpec::noiseless(ChannelKind::W),
            MeasurementSpec::new(0.0, 0.0).unwrap(),
        );
        let quad = QuadratureSpec::new(4, 8).unwrap();
        let found = averaged_search(&protocol, &quad);
        let total: f64 = found
            .iter()
            .map(|s| s.score(protocol.table().primary(s.branch)))
            .sum();
        assert!((total - 5.0 / 9.0).abs() < 1e-12);
        let p: f64 = found.iter().map(|s| s.probability).sum();
        assert!((p - 1.0).abs() < 1e-12);
    }
}
