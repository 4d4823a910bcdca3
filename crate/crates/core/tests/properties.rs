use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use triport::analysis::quadrature::protocol_average_fidelity;
use triport::analysis::{concurrence, oracle, search_corrections, OracleParams, QuadratureSpec, Quantity};
use triport::protocol::{Branch, Protocol};
use triport::qmat::{herm_eigvals, partial_trace, psd_sqrt};
use triport::qstates::input_state;
use triport::{ChannelKind, ChannelSpec, DensityOperator, InputSpec, MeasurementSpec, QMatrix, QVector, C64};

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = QMatrix> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), rows * cols).prop_map(move |v| {
        QMatrix::new(
            rows,
            cols,
            v.into_iter().map(|(re, im)| C64::new(re, im)).collect(),
        )
        .unwrap()
    })
}

/// Random density operator `B B† / tr(B B†)`.
fn density(dim: usize) -> impl Strategy<Value = QMatrix> {
    matrix(dim, dim).prop_map(|b| {
        let m = &b * &b.dagger();
        let t = m.trace().re;
        m.scale_real(1.0 / t)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kron_is_associative(a in matrix(2, 2), b in matrix(2, 3), c in matrix(3, 2)) {
        let left = a.kron(&b).kron(&c);
        let right = a.kron(&b.kron(&c));
        prop_assert!(left.max_abs_diff(&right) < 1e-14);
    }

    #[test]
    fn partial_trace_is_linear(a in matrix(8, 8), b in matrix(8, 8), s in -2.0..2.0f64) {
        let dims = [2, 2, 2];
        let combo = &a + &b.scale_real(s);
        let lhs = partial_trace(&combo, &dims, &[1]).unwrap();
        let rhs = &partial_trace(&a, &dims, &[1]).unwrap()
            + &partial_trace(&b, &dims, &[1]).unwrap().scale_real(s);
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-13);
    }

    #[test]
    fn partial_traces_compose(rho in density(32)) {
        let dims = [2, 2, 2, 2, 2];
        let once = partial_trace(&rho, &dims, &[2, 3, 4]).unwrap();
        let step = partial_trace(&rho, &dims, &[4]).unwrap();
        let step = partial_trace(&step, &[2, 2, 2, 2], &[2, 3]).unwrap();
        prop_assert!(once.max_abs_diff(&step) < 1e-14);
        prop_assert!((once.trace() - rho.trace()).norm() < 1e-13);
    }

    #[test]
    fn eigenvalues_sum_to_trace(b in matrix(6, 6)) {
        let h = (&b + &b.dagger()).scale_real(0.5);
        let sum: f64 = herm_eigvals(&h).unwrap().iter().sum();
        prop_assert!((sum - h.trace().re).abs() < 1e-12);
    }

    #[test]
    fn psd_square_root_squares_back(rho in density(4)) {
        let root = psd_sqrt(&rho).unwrap();
        prop_assert!((&root * &root).max_abs_diff(&rho) < 1e-12);
        prop_assert!(root.hermiticity_defect() < 1e-13);
    }

    #[test]
    fn product_states_have_zero_concurrence(a in density(2), b in density(2)) {
        let rho = DensityOperator::new(a.kron(&b)).unwrap();
        prop_assert!(concurrence(&rho) < 1e-10);
    }
}

#[test]
fn concurrence_stays_in_unit_interval() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..1000 {
        let amps: Vec<C64> = (0..4)
            .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let psi = QVector::new(amps).normalized();
        let w: f64 = rng.gen_range(0.0..1.0);
        let m = &psi.projector().scale_real(w) + &QMatrix::identity(4).scale_real((1.0 - w) / 4.0);
        let c = concurrence(&DensityOperator::new(m).unwrap());
        assert!((0.0..=1.0).contains(&c), "C = {c}");
    }
}

#[test]
fn quadrature_has_reached_its_plateau() {
    let quad = QuadratureSpec::default();
    for (kind, w, lambda, mu) in [
        (ChannelKind::Ghz, 1.0, 0.3, 1.1),
        (ChannelKind::Ghz, 0.4, 2.0, 0.5),
        (ChannelKind::W, 1.0, 1.0, 2.2),
        (ChannelKind::W, 0.6, 5.0, 0.0),
    ] {
        let protocol = Protocol::new(
            ChannelSpec::new(kind, w).unwrap(),
            MeasurementSpec::new(lambda, mu).unwrap(),
        );
        let base = protocol_average_fidelity(&protocol, &quad);
        let fine = protocol_average_fidelity(&protocol, &quad.doubled());
        assert!((base - fine).abs() < 1e-12, "{kind} w={w}: {base} vs {fine}");
    }
}

fn oracle_at(q: Quantity, kind: ChannelKind, p: OracleParams) -> f64 {
    oracle(q, kind, p).unwrap().value
}

/// Noiseless grid `theta, mu in {pi i/12}`, `lambda in {0, pi/3, pi}`,
/// `phi in {0, pi/2}`; the open theta interval drops the endpoints.
fn noiseless_grid(kind: ChannelKind) {
    let mut worst: f64 = 0.0;
    for i in 1..12 {
        let theta = PI * i as f64 / 12.0;
        for m in 0..=12 {
            let mu = PI * m as f64 / 12.0;
            for &lambda in &[0.0, FRAC_PI_3, PI] {
                let protocol = Protocol::new(
                    ChannelSpec::noiseless(kind),
                    MeasurementSpec::new(lambda, mu).unwrap(),
                );
                for &phi in &[0.0, FRAC_PI_2] {
                    let input = InputSpec::new(theta, phi).unwrap();
                    let pi = input_state(&input);
                    for rec in protocol.run(&input).unwrap() {
                        let p = OracleParams {
                            theta,
                            phi,
                            lambda,
                            mu,
                            w: 1.0,
                            branch: Some(rec.branch),
                        };
                        let at = format!(
                            "{kind} theta={theta} mu={mu} lambda={lambda} phi={phi} {}",
                            rec.branch
                        );
                        let dp = (rec.probability - oracle_at(Quantity::Probability, kind, p)).abs();
                        assert!(dp < 1e-9, "p at {at}: {dp}");
                        worst = worst.max(dp);
                        if let (Some(f), Some(c)) = (rec.fidelity(&pi), rec.concurrence()) {
                            let df = (f - oracle_at(Quantity::Fidelity, kind, p)).abs();
                            let dc = (c - oracle_at(Quantity::Concurrence, kind, p)).abs();
                            assert!(df < 1e-9, "F at {at}: {df}");
                            assert!(dc < 1e-9, "C at {at}: {dc}");
                            worst = worst.max(df).max(dc);
                        }
                    }
                }
            }
        }
    }
    assert!(worst < 1e-9);
}

#[test]
fn ghz_grid_matches_closed_forms() {
    noiseless_grid(ChannelKind::Ghz);
}

#[test]
fn w_grid_matches_closed_forms() {
    noiseless_grid(ChannelKind::W);
}

#[test]
fn noisy_concurrences_match_closed_forms() {
    for &w in &[0.0, 0.25, 0.5, 0.75, 1.0] {
        for m in 0..=6 {
            let mu = PI * m as f64 / 6.0;
            let ghz = Protocol::new(
                ChannelSpec::new(ChannelKind::Ghz, w).unwrap(),
                MeasurementSpec::new(0.0, mu).unwrap(),
            );
            for i in 1..6 {
                let theta = PI * i as f64 / 6.0;
                for rec in ghz.run(&InputSpec::new(theta, 1.0).unwrap()).unwrap() {
                    let p = OracleParams {
                        theta,
                        mu,
                        w,
                        ..Default::default()
                    }
                    .with_branch(rec.branch);
                    let expected = oracle_at(Quantity::Concurrence, ChannelKind::Ghz, p);
                    assert!((rec.concurrence().unwrap() - expected).abs() < 1e-9);
                }
            }
        }
        let w_chan = Protocol::new(
            ChannelSpec::new(ChannelKind::W, w).unwrap(),
            MeasurementSpec::new(0.0, 0.0).unwrap(),
        );
        let recs = w_chan.run(&InputSpec::new(1.0, 2.0).unwrap()).unwrap();
        let mut total = 0.0;
        for rec in recs
            .iter()
            .filter(|r| Branch::w_swap_branches().contains(&r.branch))
        {
            total += rec.probability;
            let p = OracleParams {
                w,
                ..Default::default()
            }
            .with_branch(rec.branch);
            let expected = oracle_at(Quantity::Concurrence, ChannelKind::W, p);
            assert!((rec.concurrence().unwrap() - expected).abs() < 1e-9);
        }
        let expected = oracle_at(
            Quantity::TotalBellProb,
            ChannelKind::W,
            OracleParams {
                w,
                ..Default::default()
            },
        );
        assert!((total - expected).abs() < 1e-10);
    }
}

#[test]
fn local_pauli_corrections_leave_concurrence_unchanged() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let amps: Vec<C64> = (0..4)
            .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let psi = QVector::new(amps).normalized();
        let m = &psi.projector().scale_real(0.9) + &QMatrix::identity(4).scale_real(0.025);
        let rho = DensityOperator::new(m).unwrap();
        let c0 = concurrence(&rho);
        for choice in triport::protocol::CorrectionChoice::all() {
            let moved = triport::protocol::apply_correction(&rho, choice);
            assert!((concurrence(&moved) - c0).abs() < 1e-10);
        }
    }
}

/// Every published alternative is a pointwise maximizer wherever the
/// published correction already restores the input exactly.
#[test]
fn ghz_table_alternatives_are_pointwise_maximizers() {
    let protocol = Protocol::new(
        ChannelSpec::noiseless(ChannelKind::Ghz),
        MeasurementSpec::new(0.0, FRAC_PI_2).unwrap(),
    );
    for &(theta, phi) in &[(0.4, 0.0), (1.3, 2.0), (2.5, 5.0)] {
        let input = InputSpec::new(theta, phi).unwrap();
        let pi = input_state(&input);
        for rec in protocol.run(&input).unwrap() {
            let found = search_corrections(rec.conditioned.as_ref().unwrap(), &pi);
            for alt in protocol.table().row(rec.branch) {
                assert!(found.contains(alt), "{} {alt} missing from {found:?}", rec.branch);
            }
        }
    }
}
