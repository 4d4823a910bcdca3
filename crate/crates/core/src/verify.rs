//! Acceptance checks replaying the closed-form results against the
//! simulation. Shared by the `verify` subcommand and the test suite.
//!
//! Grids are summarized by their worst point: a single [`Check`] carries the
//! expected and actual values where the deviation is largest.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, PI};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analysis::crosscheck::direct_conditioned;
use crate::analysis::quadrature::{protocol_average_fidelity, QuadratureSpec};
use crate::analysis::search::{averaged_search, MAXIMIZER_TOL};
use crate::analysis::{concurrence, fidelity, oracle, OracleParams, Quantity};
use crate::protocol::{apply_correction, Branch, CorrectionTable, OutcomeRecord, Protocol};
use crate::qmat::partial_trace;
use crate::qstates::{
    bell_state, input_state, ChannelKind, ChannelSpec, DensityOperator, InputSpec, MeasurementSpec,
};

const POINTWISE_TOL: f64 = 1e-9;
const QUADRATURE_TOL: f64 = 1e-9;

/// One compared quantity.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub expected: f64,
    pub actual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    /// Passes when `|actual - expected| <= tolerance`.
    pub fn close(name: impl Into<String>, expected: f64, actual: f64, tolerance: f64) -> Self {
        let passed = (actual - expected).abs() <= tolerance;
        Self {
            name: name.into(),
            expected,
            actual,
            tolerance,
            passed,
        }
    }

    /// A yes/no condition reported as expected 1, actual 1 or 0.
    pub fn holds(name: impl Into<String>, ok: bool) -> Self {
        Self {
            name: name.into(),
            expected: 1.0,
            actual: if ok { 1.0 } else { 0.0 },
            tolerance: 0.0,
            passed: ok,
        }
    }

    pub fn delta(&self) -> f64 {
        (self.actual - self.expected).abs()
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {}: expected {:.12e}, actual {:.12e}, |delta| {:.3e}, tol {:.1e}",
            if self.passed { "pass" } else { "FAIL" },
            self.name,
            self.expected,
            self.actual,
            self.delta(),
            self.tolerance
        )
    }
}

/// Collects `(label, expected, actual)` samples and reports the worst one.
struct Worst {
    name: String,
    tolerance: f64,
    count: usize,
    worst: Option<(String, f64, f64)>,
}

impl Worst {
    fn new(name: impl Into<String>, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            tolerance,
            count: 0,
            worst: None,
        }
    }

    fn push(&mut self, label: impl FnOnce() -> String, expected: f64, actual: f64) {
        self.count += 1;
        let delta = (actual - expected).abs();
        // NaN deltas always win so they surface in the report.
        let replace = match &self.worst {
            None => true,
            Some((_, e, a)) => delta.is_nan() || delta > (a - e).abs(),
        };
        if replace {
            self.worst = Some((label(), expected, actual));
        }
    }

    fn finish(self) -> Check {
        match self.worst {
            Some((label, expected, actual)) => Check::close(
                format!("{} (worst of {} at {})", self.name, self.count, label),
                expected,
                actual,
                self.tolerance,
            ),
            None => Check::holds(format!("{} (no samples)", self.name), false),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CriterionReport {
    pub id: u8,
    pub title: &'static str,
    pub checks: Vec<Check>,
}

impl CriterionReport {
    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    /// One-line summary.
    pub fn summary(&self) -> String {
        let failed = self.failures().count();
        if failed == 0 {
            format!(
                "criterion {:>2} PASS  {} ({} checks)",
                self.id,
                self.title,
                self.checks.len()
            )
        } else {
            format!(
                "criterion {:>2} FAIL  {} ({} of {} checks failed)",
                self.id,
                self.title,
                failed,
                self.checks.len()
            )
        }
    }
}

/// Settings for a verification run.
#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub quad: QuadratureSpec,
    /// Replaces the tolerance of every quadrature comparison.
    pub quadrature_tol: Option<f64>,
    /// Replaces the tolerance of every pointwise comparison.
    pub pointwise_tol: Option<f64>,
    /// Correction tables under test.
    pub ghz_table: CorrectionTable,
    pub w_table: CorrectionTable,
    /// Seed for the randomized criteria.
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            quad: QuadratureSpec::default(),
            quadrature_tol: None,
            pointwise_tol: None,
            ghz_table: CorrectionTable::published(ChannelKind::Ghz),
            w_table: CorrectionTable::published(ChannelKind::W),
            seed: 0x5eed_2024,
        }
    }
}

impl VerifyOptions {
    fn pointwise(&self, default: f64) -> f64 {
        self.pointwise_tol.unwrap_or(default)
    }

    fn quadrature(&self) -> f64 {
        self.quadrature_tol.unwrap_or(QUADRATURE_TOL)
    }

    fn table(&self, kind: ChannelKind) -> &CorrectionTable {
        match kind {
            ChannelKind::Ghz => &self.ghz_table,
            ChannelKind::W => &self.w_table,
        }
    }

    fn protocol(&self, channel: ChannelSpec, meas: MeasurementSpec) -> Protocol {
        Protocol::new(channel, meas).with_table(self.table(channel.kind()).clone())
    }
}

pub const CRITERIA: [(u8, &str); 11] = [
    (1, "GHZ perfect teleportation"),
    (2, "GHZ average fidelity"),
    (3, "GHZ branch concurrences"),
    (4, "W probabilities, fidelities and average fidelity"),
    (5, "W probabilistic entanglement swapping"),
    (6, "noisy GHZ"),
    (7, "noisy W at mu = 0"),
    (8, "correction table rediscovery"),
    (9, "measurement completeness"),
    (10, "concurrence of known states"),
    (11, "independent conditioned-state cross-check"),
];

/// Runs one criterion by number (1 to 11).
pub fn run_criterion(id: u8, opts: &VerifyOptions) -> CriterionReport {
    let checks = match id {
        1 => ghz_perfect(opts),
        2 => ghz_average(opts),
        3 => ghz_concurrence(opts),
        4 => w_probabilities(opts),
        5 => w_swapping(opts),
        6 => noisy_ghz(opts),
        7 => noisy_w(opts),
        8 => table_rediscovery(opts),
        9 => completeness(opts),
        10 => known_concurrences(opts),
        11 => cross_check(opts),
        _ => panic!("no criterion {id}"),
    };
    let title = CRITERIA
        .iter()
        .find(|(i, _)| *i == id)
        .map(|(_, t)| *t)
        .expect("listed criterion");
    CriterionReport { id, title, checks }
}

pub fn run_all(opts: &VerifyOptions) -> Vec<CriterionReport> {
    CRITERIA.iter().map(|&(id, _)| run_criterion(id, opts)).collect()
}

fn input(theta: f64, phi: f64) -> InputSpec {
    InputSpec::new(theta, phi).expect("grid angles are in range")
}

fn meas(lambda: f64, mu: f64) -> MeasurementSpec {
    MeasurementSpec::new(lambda, mu).expect("grid angles are in range")
}

fn channel(kind: ChannelKind, w: f64) -> ChannelSpec {
    ChannelSpec::new(kind, w).expect("grid visibility is in range")
}

fn oracle_value(q: Quantity, kind: ChannelKind, params: OracleParams) -> f64 {
    oracle(q, kind, params)
        .expect("supported oracle combination")
        .value
}

/// `n` evenly spaced points on `[a, b]`, endpoints included.
fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

/// `n` midpoints of an even split of `(a, b)`, so endpoints are avoided.
fn midpoints(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| a + (b - a) * (i as f64 + 0.5) / n as f64)
        .collect()
}

fn run(protocol: &Protocol, spec: &InputSpec) -> Vec<OutcomeRecord> {
    protocol.run(spec).expect("valid configuration")
}

fn ghz_perfect(opts: &VerifyOptions) -> Vec<Check> {
    let protocol = opts.protocol(ChannelSpec::noiseless(ChannelKind::Ghz), meas(0.0, FRAC_PI_2));
    let mut f = Worst::new("F^jk = 1", opts.pointwise(POINTWISE_TOL));
    let mut p = Worst::new("p_jk = 1/8", opts.pointwise(1e-12));
    for &theta in &[FRAC_PI_6, FRAC_PI_3, FRAC_PI_2, 2.0 * FRAC_PI_3] {
        for &phi in &[0.0, FRAC_PI_2, PI] {
            let spec = input(theta, phi);
            let pi = input_state(&spec);
            for rec in run(&protocol, &spec) {
                let label = || format!("theta={theta:.4} phi={phi:.4} branch {}", rec.branch);
                p.push(label, 0.125, rec.probability);
                f.push(label, 1.0, rec.fidelity(&pi).unwrap_or(f64::NAN));
            }
        }
    }
    vec![f.finish(), p.finish()]
}

fn ghz_average(opts: &VerifyOptions) -> Vec<Check> {
    let mut avg = Worst::new("<F> vs 2/3 + cos(lambda) sin(mu)/3", opts.quadrature());
    for lambda in linspace(0.0, 2.0 * PI, 7) {
        for mu in linspace(0.0, PI, 7) {
            let protocol = opts.protocol(ChannelSpec::noiseless(ChannelKind::Ghz), meas(lambda, mu));
            let numeric = protocol_average_fidelity(&protocol, &opts.quad);
            let expected = oracle_value(
                Quantity::AvgFidelity,
                ChannelKind::Ghz,
                OracleParams {
                    lambda,
                    mu,
                    ..Default::default()
                },
            );
            avg.push(|| format!("lambda={lambda:.4} mu={mu:.4}"), expected, numeric);
        }
    }
    vec![avg.finish()]
}

fn ghz_concurrence(opts: &VerifyOptions) -> Vec<Check> {
    let tol = opts.pointwise(POINTWISE_TOL);
    let mut grid = Worst::new("C(tau^jk) vs closed form", tol);
    for theta in midpoints(0.0, PI, 10) {
        for mu in linspace(0.0, PI, 10) {
            let protocol = opts.protocol(ChannelSpec::noiseless(ChannelKind::Ghz), meas(0.0, mu));
            for rec in run(&protocol, &input(theta, 0.0)) {
                let expected = oracle_value(
                    Quantity::Concurrence,
                    ChannelKind::Ghz,
                    OracleParams {
                        theta,
                        mu,
                        ..Default::default()
                    }
                    .with_branch(rec.branch),
                );
                let label = || format!("theta={theta:.4} mu={mu:.4} branch {}", rec.branch);
                grid.push(label, expected, rec.concurrence().unwrap_or(f64::NAN));
            }
        }
    }

    let mut k1 = Worst::new("C(tau^j1) = 1 at mu = theta", tol);
    let mut k2 = Worst::new("C(tau^j2) = 1 at mu = pi - theta", tol);
    for &theta in &[FRAC_PI_6, FRAC_PI_3, FRAC_PI_2, 2.0 * FRAC_PI_3, 5.0 * FRAC_PI_6] {
        for (mu, k, sink) in [(theta, 1, &mut k1), (PI - theta, 2, &mut k2)] {
            let protocol = opts.protocol(ChannelSpec::noiseless(ChannelKind::Ghz), meas(0.0, mu));
            for rec in run(&protocol, &input(theta, 0.0)) {
                if rec.branch.k() == k {
                    let label = || format!("theta={theta:.4} branch {}", rec.branch);
                    sink.push(label, 1.0, rec.concurrence().unwrap_or(f64::NAN));
                }
            }
        }
    }
    vec![grid.finish(), k1.finish(), k2.finish()]
}

fn w_probabilities(opts: &VerifyOptions) -> Vec<Check> {
    let tol = opts.pointwise(POINTWISE_TOL);
    let mut p = Worst::new("p_jk vs closed form", tol);
    let mut f = Worst::new("F^jk vs closed form", tol);
    let mut points = 0;
    for theta in midpoints(0.0, PI, 6) {
        for mu in linspace(0.0, PI, 7) {
            let protocol = opts.protocol(ChannelSpec::noiseless(ChannelKind::W), meas(0.0, mu));
            for &phi in &[0.0, FRAC_PI_3, FRAC_PI_2, PI, 1.5 * PI] {
                points += 1;
                let spec = input(theta, phi);
                let pi = input_state(&spec);
                for rec in run(&protocol, &spec) {
                    let params = OracleParams {
                        theta,
                        phi,
                        mu,
                        ..Default::default()
                    }
                    .with_branch(rec.branch);
                    let label = || format!("theta={theta:.4} mu={mu:.4} phi={phi:.4} branch {}", rec.branch);
                    p.push(
                        label,
                        oracle_value(Quantity::Probability, ChannelKind::W, params),
                        rec.probability,
                    );
                    if let Some(fid) = rec.fidelity(&pi) {
                        f.push(
                            label,
                            oracle_value(Quantity::Fidelity, ChannelKind::W, params),
                            fid,
                        );
                    }
                }
            }
        }
    }

    let mut avg = Worst::new("<F> vs (5/9) cos^2(mu/2)", opts.quadrature());
    for mu in linspace(0.0, PI, 7) {
        let protocol = opts.protocol(ChannelSpec::noiseless(ChannelKind::W), meas(0.0, mu));
        let expected = oracle_value(
            Quantity::AvgFidelity,
            ChannelKind::W,
            OracleParams {
                mu,
                ..Default::default()
            },
        );
        avg.push(
            || format!("mu={mu:.4}"),
            expected,
            protocol_average_fidelity(&protocol, &opts.quad),
        );
    }
    let at_zero = protocol_average_fidelity(
        &opts.protocol(ChannelSpec::noiseless(ChannelKind::W), meas(0.0, 0.0)),
        &opts.quad,
    );
    vec![
        Check::holds(format!("grid has at least 200 points ({points})"), points >= 200),
        p.finish(),
        f.finish(),
        avg.finish(),
        Check::close("<F> = 5/9 at mu = 0", 5.0 / 9.0, at_zero, opts.quadrature()),
    ]
}

fn w_swapping(opts: &VerifyOptions) -> Vec<Check> {
    let protocol = opts.protocol(ChannelSpec::noiseless(ChannelKind::W), meas(0.0, 0.0));
    let psi_plus = bell_state(3).projector();
    let mut tau = Worst::new("tau = |Psi+><Psi+| entrywise", opts.pointwise(POINTWISE_TOL));
    let mut total = Worst::new("total swap probability = 2/3", opts.pointwise(1e-12));
    let swap = Branch::w_swap_branches();
    for &theta in &[FRAC_PI_6, FRAC_PI_2, 5.0 * FRAC_PI_6] {
        for &phi in &[0.0, FRAC_PI_2] {
            let mut p = 0.0;
            for rec in run(&protocol, &input(theta, phi)) {
                if !swap.contains(&rec.branch) {
                    continue;
                }
                p += rec.probability;
                let dev = rec
                    .corrected
                    .as_ref()
                    .map_or(f64::NAN, |t| t.matrix().max_abs_diff(&psi_plus));
                tau.push(
                    || format!("theta={theta:.4} phi={phi:.4} branch {}", rec.branch),
                    0.0,
                    dev,
                );
            }
            total.push(|| format!("theta={theta:.4} phi={phi:.4}"), 2.0 / 3.0, p);
        }
    }
    vec![tau.finish(), total.finish()]
}

fn noisy_ghz(opts: &VerifyOptions) -> Vec<Check> {
    let tol = opts.pointwise(POINTWISE_TOL);
    let ws = [0.0, 0.25, 0.5, 0.75, 1.0];
    let mut avg = Worst::new("<F> vs noisy closed form", opts.quadrature());
    for &w in &ws {
        for &lambda in &[0.0, FRAC_PI_3, PI] {
            for &mu in &[0.0, FRAC_PI_4, FRAC_PI_2] {
                let protocol = opts.protocol(channel(ChannelKind::Ghz, w), meas(lambda, mu));
                let expected = oracle_value(
                    Quantity::AvgFidelity,
                    ChannelKind::Ghz,
                    OracleParams {
                        lambda,
                        mu,
                        w,
                        ..Default::default()
                    },
                );
                avg.push(
                    || format!("w={w} lambda={lambda:.4} mu={mu:.4}"),
                    expected,
                    protocol_average_fidelity(&protocol, &opts.quad),
                );
            }
        }
    }

    let mut conc = Worst::new("C(tau^jk) vs noisy closed form", tol);
    for &w in &ws {
        for &mu in &[0.0, FRAC_PI_4, FRAC_PI_2, 3.0 * FRAC_PI_4, PI] {
            let protocol = opts.protocol(channel(ChannelKind::Ghz, w), meas(FRAC_PI_3, mu));
            for &theta in &[FRAC_PI_6, FRAC_PI_3, FRAC_PI_2, 2.0 * FRAC_PI_3] {
                for rec in run(&protocol, &input(theta, 0.4)) {
                    let expected = oracle_value(
                        Quantity::Concurrence,
                        ChannelKind::Ghz,
                        OracleParams {
                            theta,
                            mu,
                            w,
                            ..Default::default()
                        }
                        .with_branch(rec.branch),
                    );
                    let label = || format!("w={w} theta={theta:.4} mu={mu:.4} branch {}", rec.branch);
                    conc.push(label, expected, rec.concurrence().unwrap_or(f64::NAN));
                }
            }
        }
    }

    // mu = theta = pi/2 reduces the noisy form to max{1 - (3/2)(1 - w), 0}.
    let mut line = Worst::new("C = max{1 - 3(1-w)/2, 0} at mu = theta = pi/2", tol);
    let mut root = Worst::new("C = 0 at 1 - w = 2/3", tol);
    for w in linspace(0.0, 1.0, 13).into_iter().chain([1.0 / 3.0]) {
        let protocol = opts.protocol(channel(ChannelKind::Ghz, w), meas(0.0, FRAC_PI_2));
        let expected = (1.0 - 1.5 * (1.0 - w)).max(0.0);
        for rec in run(&protocol, &input(FRAC_PI_2, 0.0)) {
            let c = rec.concurrence().unwrap_or(f64::NAN);
            line.push(|| format!("w={w:.4} branch {}", rec.branch), expected, c);
            if w == 1.0 / 3.0 {
                root.push(|| format!("branch {}", rec.branch), 0.0, c);
            }
        }
    }
    vec![avg.finish(), conc.finish(), line.finish(), root.finish()]
}

fn noisy_w(opts: &VerifyOptions) -> Vec<Check> {
    let tol = opts.pointwise(POINTWISE_TOL);
    let threshold = 8.0 / 11.0;
    let swap = Branch::w_swap_branches();
    let mut conc = Worst::new("swap-branch C vs noisy closed form", tol);
    let mut beyond = Worst::new("swap-branch C = 0 for 1 - w > 8/11", 0.0);
    let mut at = Worst::new("swap-branch C = 0 at 1 - w = 8/11", opts.pointwise(1e-12));
    let mut total = Worst::new("total swap probability vs 2/3 - (1-w)/6", opts.pointwise(1e-10));
    let mut at_zero = f64::NAN;

    let ws: Vec<f64> = linspace(0.0, 1.0, 21)
        .into_iter()
        .chain([1.0 - threshold])
        .collect();
    for &w in &ws {
        let protocol = opts.protocol(channel(ChannelKind::W, w), meas(0.0, 0.0));
        let params = OracleParams {
            w,
            ..Default::default()
        };
        for &theta in &[FRAC_PI_6, FRAC_PI_2, 2.0 * FRAC_PI_3] {
            let mut p = 0.0;
            for rec in run(&protocol, &input(theta, 0.7)) {
                if !swap.contains(&rec.branch) {
                    continue;
                }
                p += rec.probability;
                let c = rec.concurrence().unwrap_or(f64::NAN);
                let label = || format!("w={w:.4} theta={theta:.4} branch {}", rec.branch);
                let expected = oracle_value(
                    Quantity::Concurrence,
                    ChannelKind::W,
                    params.with_branch(rec.branch),
                );
                conc.push(label, expected, c);
                if w == 1.0 - threshold {
                    at.push(label, 0.0, c);
                } else if 1.0 - w > threshold {
                    beyond.push(label, 0.0, c);
                }
            }
            let expected = oracle_value(Quantity::TotalBellProb, ChannelKind::W, params);
            total.push(|| format!("w={w:.4} theta={theta:.4}"), expected, p);
            if w == 0.0 {
                at_zero = p;
            }
        }
    }
    vec![
        conc.finish(),
        beyond.finish(),
        at.finish(),
        total.finish(),
        Check::holds(
            format!("total swap probability positive at w = 0 ({at_zero:.12})"),
            at_zero > 0.0,
        ),
    ]
}

fn table_rediscovery(opts: &VerifyOptions) -> Vec<Check> {
    let configs = [
        (ChannelKind::Ghz, 0.0, FRAC_PI_2),
        (ChannelKind::W, 0.0, 0.0),
        (ChannelKind::W, 0.0, FRAC_PI_2),
    ];
    let samples = [(FRAC_PI_3, 0.0), (FRAC_PI_2, 1.0), (2.0 * FRAC_PI_3, 4.0)];
    let agree_tol = opts.pointwise(1e-10);
    let mut checks = Vec::new();

    for (kind, lambda, mu) in configs {
        let protocol = opts.protocol(ChannelSpec::noiseless(kind), meas(lambda, mu));
        let table = opts.table(kind);
        let setting = format!("{kind} lambda={lambda:.4} mu={mu:.4}");

        for found in averaged_search(&protocol, &opts.quad) {
            if !found.reachable() {
                continue;
            }
            let branch = found.branch;
            let best = found.maximizers.first().map_or(f64::NAN, |&c| found.score(c));
            for &alt in table.row(branch) {
                let name = format!("{setting} row {branch} {alt} is a maximizer of <p F>");
                checks.push(Check::close(name, best, found.score(alt), MAXIMIZER_TOL));
            }
        }

        // Alternatives in a row must be interchangeable for each input.
        for &(theta, phi) in &samples {
            let spec = input(theta, phi);
            let pi = input_state(&spec);
            for rec in run(&protocol, &spec) {
                let Some(rho) = rec.conditioned.as_ref() else {
                    continue;
                };
                let row = table.row(rec.branch);
                let reference = apply_correction(rho, row[0]);
                for &alt in &row[1..] {
                    let tau = apply_correction(rho, alt);
                    let at = format!(
                        "{setting} row {} {alt} vs {} at theta={theta:.4} phi={phi:.4}",
                        rec.branch, row[0]
                    );
                    checks.push(Check::close(
                        format!("{at}: F"),
                        fidelity(&reference, &pi),
                        fidelity(&tau, &pi),
                        agree_tol,
                    ));
                    checks.push(Check::close(
                        format!("{at}: C"),
                        concurrence(&reference),
                        concurrence(&tau),
                        agree_tol,
                    ));
                }
            }
        }
    }
    checks
}

/// Uniform draw from `[a, b)`.
fn uniform(rng: &mut ChaCha8Rng, a: f64, b: f64) -> f64 {
    rng.gen_range(a..b)
}

struct RandomConfig {
    channel: ChannelSpec,
    input: InputSpec,
    meas: MeasurementSpec,
}

fn random_config(rng: &mut ChaCha8Rng, i: usize) -> RandomConfig {
    let kind = ChannelKind::ALL[rng.gen_range(0..2)];
    // Every third configuration is noiseless, the rest noisy.
    let w = if i.is_multiple_of(3) {
        1.0
    } else {
        uniform(rng, 0.0, 1.0)
    };
    RandomConfig {
        channel: channel(kind, w),
        input: input(uniform(rng, 1e-3, PI - 1e-3), uniform(rng, 0.0, 2.0 * PI)),
        meas: meas(uniform(rng, 0.0, 2.0 * PI), uniform(rng, 0.0, PI)),
    }
}

fn describe(cfg: &RandomConfig) -> String {
    format!(
        "{} w={:.4} theta={:.4} phi={:.4} lambda={:.4} mu={:.4}",
        cfg.channel.kind(),
        cfg.channel.visibility(),
        cfg.input.theta(),
        cfg.input.phi(),
        cfg.meas.lambda(),
        cfg.meas.mu()
    )
}

fn completeness(opts: &VerifyOptions) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut sum = Worst::new("sum of p_jk = 1", opts.pointwise(1e-10));
    let mut noisy = 0;
    for i in 0..100 {
        let cfg = random_config(&mut rng, i);
        if cfg.channel.visibility() < 1.0 {
            noisy += 1;
        }
        let protocol = Protocol::new(cfg.channel, cfg.meas);
        let total: f64 = protocol
            .branch_numerators(&cfg.input)
            .iter()
            .map(|(_, p, _)| p)
            .sum();
        sum.push(|| describe(&cfg), 1.0, total);
    }
    vec![
        sum.finish(),
        Check::holds(
            format!("configurations include w < 1 ({noisy} of 100)"),
            noisy > 0,
        ),
    ]
}

fn known_concurrences(opts: &VerifyOptions) -> Vec<Check> {
    let tol = opts.pointwise(1e-10);
    let mut pure = Worst::new("C(input) = sin theta", tol);
    for (i, theta) in midpoints(0.0, PI, 20).into_iter().enumerate() {
        let phi = 0.3 * i as f64;
        let c = concurrence(&input_state(&input(theta, phi)));
        pure.push(|| format!("theta={theta:.4} phi={phi:.4}"), theta.sin(), c);
    }

    let mut checks = vec![pure.finish()];
    for (kind, expected) in [(ChannelKind::Ghz, 0.0), (ChannelKind::W, 2.0 / 3.0)] {
        let chi = kind.ket().projector();
        for traced in 0..3 {
            let reduced = partial_trace(&chi, &[2, 2, 2], &[traced]).expect("three-qubit register");
            let c = concurrence(&DensityOperator::new(reduced).expect("reduced state"));
            checks.push(Check::close(
                format!("C of {kind} with qubit {} traced out", traced + 1),
                expected,
                c,
                tol,
            ));
        }
    }
    checks
}

fn cross_check(opts: &VerifyOptions) -> Vec<Check> {
    // Offset so these configurations differ from the completeness draws.
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(11));
    let mut entries = Worst::new(
        "conditioned state entries, projector vs direct",
        opts.pointwise(1e-10),
    );
    let mut mismatched = Vec::new();
    for i in 0..20 {
        let cfg = random_config(&mut rng, i);
        let records = Protocol::new(cfg.channel, cfg.meas)
            .run(&cfg.input)
            .expect("valid configuration");
        for rec in records {
            let direct = direct_conditioned(&cfg.channel, &cfg.input, &cfg.meas, rec.branch);
            match (&rec.conditioned, direct) {
                (Some(rho), Some(d)) => {
                    let mut dev: f64 = 0.0;
                    for (r, row) in d.iter().enumerate() {
                        for (c, z) in row.iter().enumerate() {
                            dev = dev.max((rho.matrix()[(r, c)] - z).norm());
                        }
                    }
                    entries.push(|| format!("{} branch {}", describe(&cfg), rec.branch), 0.0, dev);
                }
                (None, None) => {}
                _ => mismatched.push(format!("{} branch {}", describe(&cfg), rec.branch)),
            }
        }
    }
    vec![
        entries.finish(),
        Check::holds(
            format!(
                "reachability agrees ({} mismatches {:?})",
                mismatched.len(),
                mismatched
            ),
            mismatched.is_empty(),
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worst_tracks_largest_deviation() {
        let mut w = Worst::new("x", 0.1);
        w.push(|| "a".into(), 1.0, 1.05);
        w.push(|| "b".into(), 1.0, 0.8);
        w.push(|| "c".into(), 1.0, 1.01);
        let check = w.finish();
        assert!(!check.passed);
        assert!(check.name.contains("worst of 3 at b"));
        assert_eq!(check.actual, 0.8);
    }

    #[test]
    fn nan_counts_as_failure() {
        let mut w = Worst::new("x", 1.0);
        w.push(|| "a".into(), 0.0, 0.5);
        w.push(|| "b".into(), 0.0, f64::NAN);
        assert!(!w.finish().passed);
    }
}
