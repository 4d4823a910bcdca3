use triport::protocol::{Branch, CorrectionChoice, CorrectionTable};
use triport::verify::{run_criterion, VerifyOptions};
use triport::ChannelKind;

#[test]
fn corrupted_ghz_row_is_named() {
    let mut table = CorrectionTable::published(ChannelKind::Ghz);
    let row = Branch::new(1, 1).unwrap();
    table.set_row(row, vec![CorrectionChoice::new(1, 1).unwrap()]);
    let opts = VerifyOptions {
        ghz_table: table,
        ..Default::default()
    };
    let report = run_criterion(8, &opts);
    assert!(!report.passed());
    let ghz: Vec<_> = report
        .failures()
        .map(|c| c.name.clone())
        .filter(|n| n.starts_with("GHZ"))
        .collect();
    assert!(!ghz.is_empty());
    assert!(ghz.iter().all(|n| n.contains("row (1, 1)")), "{ghz:#?}");
}

#[test]
fn tight_quadrature_tolerance_reports_deltas() {
    let opts = VerifyOptions {
        quadrature_tol: Some(1e-18),
        ..Default::default()
    };
    let report = run_criterion(2, &opts);
    assert!(!report.passed());
    let check = &report.checks[0];
    assert_eq!(check.tolerance, 1e-18);
    assert!(check.delta() > 1e-18 && check.delta() < 1e-12);
}
