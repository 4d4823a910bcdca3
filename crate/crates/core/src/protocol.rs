//! The teleportation protocol: compose the five-qubit state, project onto
//! each of Alice's eight outcomes, trace out her qubits and apply the
//! receivers' Pauli-pair correction.

use std::fmt;

use crate::analysis;
use crate::error::{Error, Result};
use crate::qmat::{partial_trace, QMatrix, C64, ZERO};
use crate::qstates::{
    bell_projectors, channel_state, input_state, nu_projectors, pauli, ChannelKind, ChannelSpec,
    DensityOperator, InputSpec, MeasurementSpec,
};

/// Outcomes with probability at or below this are flagged unreachable.
pub const REACHABLE_TOL: f64 = 1e-12;

/// Subsystem dimensions of the register 1,2 | 3,4,5 as seen by the partial trace.
const REGISTER: [usize; 5] = [2, 2, 2, 2, 2];
const ALICE: [usize; 3] = [2, 3, 4];

/// One of Alice's measurement outcomes: Bell outcome `j` in `1..=4` on
/// qubits 3, 4 and basis outcome `k` in `1..=2` on qubit 5.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Branch {
    k: u8,
    j: u8,
}

impl Branch {
    pub fn new(j: usize, k: usize) -> Result<Self> {
        if !(1..=4).contains(&j) {
            return Err(Error::InvalidParameter {
                name: "j",
                value: j as f64,
                reason: "Bell outcome must be 1, 2, 3 or 4",
            });
        }
        if !(1..=2).contains(&k) {
            return Err(Error::InvalidParameter {
                name: "k",
                value: k as f64,
                reason: "basis outcome must be 1 or 2",
            });
        }
        Ok(Self {
            j: j as u8,
            k: k as u8,
        })
    }

    pub fn j(self) -> usize {
        self.j as usize
    }

    pub fn k(self) -> usize {
        self.k as usize
    }

    /// Position in table order: (1,1), (2,1), (3,1), (4,1), (1,2), ..., (4,2).
    pub fn index(self) -> usize {
        (self.k() - 1) * 4 + (self.j() - 1)
    }

    /// All eight branches in table order.
    pub fn all() -> impl Iterator<Item = Branch> {
        (1..=2).flat_map(|k| (1..=4).map(move |j| Branch { j, k }))
    }

    /// The four branches that yield `|Psi+⟩` from the noiseless W channel at `mu = 0`.
    pub fn w_swap_branches() -> [Branch; 4] {
        [
            Branch { j: 3, k: 1 },
            Branch { j: 4, k: 1 },
            Branch { j: 1, k: 2 },
            Branch { j: 2, k: 2 },
        ]
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.j, self.k)
    }
}

/// Receivers' correction `σ^b ⊗ σ^c` on qubits 1, 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CorrectionChoice {
    pub b: u8,
    pub c: u8,
}

impl CorrectionChoice {
    pub fn new(b: usize, c: usize) -> Result<Self> {
        pauli(b)?;
        pauli(c)?;
        Ok(Self {
            b: b as u8,
            c: c as u8,
        })
    }

    const fn of(b: u8, c: u8) -> Self {
        Self { b, c }
    }

    pub fn all() -> impl Iterator<Item = CorrectionChoice> {
        (0..4u8).flat_map(|b| (0..4u8).map(move |c| CorrectionChoice { b, c }))
    }

    pub fn unitary(self) -> QMatrix {
        let sb = pauli(self.b as usize).expect("validated index");
        let sc = pauli(self.c as usize).expect("validated index");
        sb.kron(&sc)
    }
}

impl fmt::Display for CorrectionChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "σ{}⊗σ{}", self.b, self.c)
    }
}

const fn cc(b: u8, c: u8) -> CorrectionChoice {
    CorrectionChoice::of(b, c)
}

// Rows in table order (1,1), (2,1), (3,1), (4,1), (1,2), (2,2), (3,2), (4,2).
static GHZ_TABLE: [[CorrectionChoice; 2]; 8] = [
    [cc(0, 1), cc(3, 2)],
    [cc(0, 2), cc(3, 1)],
    [cc(1, 0), cc(2, 3)],
    [cc(2, 0), cc(1, 3)],
    [cc(0, 2), cc(3, 1)],
    [cc(0, 1), cc(3, 2)],
    [cc(2, 0), cc(1, 3)],
    [cc(1, 0), cc(2, 3)],
];

static W_TABLE: [[CorrectionChoice; 4]; 8] = [
    [cc(1, 0), cc(1, 3), cc(2, 0), cc(2, 3)],
    [cc(1, 0), cc(1, 3), cc(2, 0), cc(2, 3)],
    [cc(0, 0), cc(1, 1), cc(2, 2), cc(3, 3)],
    [cc(0, 0), cc(1, 1), cc(2, 2), cc(3, 3)],
    [cc(0, 0), cc(1, 1), cc(2, 2), cc(3, 3)],
    [cc(0, 0), cc(1, 1), cc(2, 2), cc(3, 3)],
    [cc(0, 1), cc(0, 2), cc(3, 1), cc(3, 2)],
    [cc(0, 1), cc(0, 2), cc(3, 1), cc(3, 2)],
];

/// Published correction row: the canonical (first listed) choice plus every
/// listed alternative, canonical included.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub primary: CorrectionChoice,
    pub alternatives: &'static [CorrectionChoice],
}

/// Published correction for `branch` of the given channel kind.
pub fn table_correction(kind: ChannelKind, branch: Branch) -> TableRow {
    let alternatives: &'static [CorrectionChoice] = match kind {
        ChannelKind::Ghz => &GHZ_TABLE[branch.index()],
        ChannelKind::W => &W_TABLE[branch.index()],
    };
    TableRow {
        primary: alternatives[0],
        alternatives,
    }
}

/// Correction table used by a protocol run. Starts out as the published
/// table for a channel kind; rows can be replaced to study other choices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorrectionTable {
    kind: ChannelKind,
    rows: Vec<Vec<CorrectionChoice>>,
}

impl CorrectionTable {
    pub fn published(kind: ChannelKind) -> Self {
        let rows = Branch::all()
            .map(|b| table_correction(kind, b).alternatives.to_vec())
            .collect();
        Self { kind, rows }
    }

    pub fn kind(&self) -> ChannelKind {
        self.kind
    }

    pub fn row(&self, branch: Branch) -> &[CorrectionChoice] {
        &self.rows[branch.index()]
    }

    pub fn primary(&self, branch: Branch) -> CorrectionChoice {
        self.rows[branch.index()][0]
    }

    /// Replaces a row. Panics on an empty row.
    pub fn set_row(&mut self, branch: Branch, row: Vec<CorrectionChoice>) {
        assert!(!row.is_empty(), "a correction row needs at least one choice");
        self.rows[branch.index()] = row;
    }
}

/// Outcome of one branch of a protocol run.
#[derive(Clone, Debug, PartialEq)]
pub struct OutcomeRecord {
    pub branch: Branch,
    pub probability: f64,
    pub correction: CorrectionChoice,
    /// Receivers' state before correction; `None` when unreachable.
    pub conditioned: Option<DensityOperator>,
    /// Receivers' state after correction; `None` when unreachable.
    pub corrected: Option<DensityOperator>,
}

impl OutcomeRecord {
    pub fn reachable(&self) -> bool {
        self.conditioned.is_some()
    }

    pub fn fidelity(&self, input: &DensityOperator) -> Option<f64> {
        self.corrected.as_ref().map(|tau| analysis::fidelity(tau, input))
    }

    pub fn concurrence(&self) -> Option<f64> {
        self.corrected.as_ref().map(analysis::concurrence)
    }
}

/// `χ_123 ⊗ π_45` in register order 1..5.
pub fn compose_total(channel: &DensityOperator, input: &DensityOperator) -> Result<DensityOperator> {
    if channel.dim() != 8 || input.dim() != 4 {
        return Err(Error::NotADensityOperator(format!(
            "expected 8x8 channel and 4x4 input, got {}x{} and {}x{}",
            channel.dim(),
            channel.dim(),
            input.dim(),
            input.dim()
        )));
    }
    DensityOperator::new(channel.matrix().kron(input.matrix()))
}

/// `I_12 ⊗ Π^j_34 ⊗ Π^k_5`.
pub fn measurement_operator(branch: Branch, meas: &MeasurementSpec) -> QMatrix {
    let bell = &bell_projectors()[branch.j() - 1];
    let nu = &nu_projectors(meas)[branch.k() - 1];
    QMatrix::identity(4).kron(bell).kron(nu)
}

fn clamp_probability(p: f64) -> f64 {
    debug_assert!(
        (-REACHABLE_TOL..=1.0 + REACHABLE_TOL).contains(&p),
        "probability {p} outside rounding range"
    );
    p.clamp(0.0, 1.0)
}

/// `tr[(I ⊗ Π^j ⊗ Π^k) σ]` evaluated as a full trace of the product.
fn trace_of_product(op: &QMatrix, total: &QMatrix) -> f64 {
    let n = op.rows();
    let mut acc = ZERO;
    for r in 0..n {
        for s in 0..n {
            let a = op[(r, s)];
            if a != ZERO {
                acc += a * total[(s, r)];
            }
        }
    }
    acc.re
}

fn numerator_with(op: &QMatrix, total: &QMatrix) -> QMatrix {
    let projected = op.matmul(total).expect("32x32 operands");
    partial_trace(&projected, &REGISTER, &ALICE).expect("five-qubit register")
}

/// Probability of `branch` for the five-qubit state `total`.
pub fn outcome_probability(total: &DensityOperator, branch: Branch, meas: &MeasurementSpec) -> f64 {
    clamp_probability(trace_of_product(
        &measurement_operator(branch, meas),
        total.matrix(),
    ))
}

/// Unnormalized receivers' operator `tr_345[(I ⊗ Π^j ⊗ Π^k) σ]`.
pub fn conditioned_numerator(total: &DensityOperator, branch: Branch, meas: &MeasurementSpec) -> QMatrix {
    numerator_with(&measurement_operator(branch, meas), total.matrix())
}

/// Receivers' state conditioned on `branch`.
pub fn conditioned_state(
    total: &DensityOperator,
    branch: Branch,
    meas: &MeasurementSpec,
) -> Result<DensityOperator> {
    let op = measurement_operator(branch, meas);
    let p = clamp_probability(trace_of_product(&op, total.matrix()));
    normalize_branch(numerator_with(&op, total.matrix()), branch, p)
}

fn normalize_branch(numerator: QMatrix, branch: Branch, p: f64) -> Result<DensityOperator> {
    if p <= REACHABLE_TOL {
        return Err(Error::UnreachableOutcome {
            j: branch.j(),
            k: branch.k(),
            probability: p,
        });
    }
    DensityOperator::new(numerator.scale_real(1.0 / p))
}

/// `U ρ U†` with `U = σ^b ⊗ σ^c`.
pub fn apply_correction(rho: &DensityOperator, choice: CorrectionChoice) -> DensityOperator {
    let out = rho
        .matrix()
        .conjugate_by(&choice.unitary())
        .expect("4x4 operands");
    DensityOperator::new(out).expect("unitary conjugation preserves density operators")
}

/// A channel and measurement basis with the eight measurement operators
/// built once, so many inputs can be run cheaply.
#[derive(Clone, Debug)]
pub struct Protocol {
    channel: ChannelSpec,
    meas: MeasurementSpec,
    chi: DensityOperator,
    operators: Vec<QMatrix>,
    table: CorrectionTable,
}

impl Protocol {
    pub fn new(channel: ChannelSpec, meas: MeasurementSpec) -> Self {
        Self {
            channel,
            meas,
            chi: channel_state(&channel),
            operators: Branch::all().map(|b| measurement_operator(b, &meas)).collect(),
            table: CorrectionTable::published(channel.kind()),
        }
    }

    /// Replaces the correction table.
    pub fn with_table(mut self, table: CorrectionTable) -> Self {
        self.table = table;
        self
    }

    pub fn channel(&self) -> &ChannelSpec {
        &self.channel
    }

    pub fn measurement(&self) -> &MeasurementSpec {
        &self.meas
    }

    pub fn table(&self) -> &CorrectionTable {
        &self.table
    }

    pub fn channel_state(&self) -> &DensityOperator {
        &self.chi
    }

    pub fn total_state(&self, input: &InputSpec) -> DensityOperator {
        compose_total(&self.chi, &input_state(input)).expect("valid factor states")
    }

    /// Probability and unnormalized receivers' operator for every branch.
    pub fn branch_numerators(&self, input: &InputSpec) -> Vec<(Branch, f64, QMatrix)> {
        let total = self.chi.matrix().kron(input_state(input).matrix());
        Branch::all()
            .zip(&self.operators)
            .map(|(b, op)| {
                let p = clamp_probability(trace_of_product(op, &total));
                (b, p, numerator_with(op, &total))
            })
            .collect()
    }

    pub fn run(&self, input: &InputSpec) -> Result<Vec<OutcomeRecord>> {
        self.branch_numerators(input)
            .into_iter()
            .map(|(branch, probability, numerator)| {
                let correction = self.table.primary(branch);
                if probability <= REACHABLE_TOL {
                    return Ok(OutcomeRecord {
                        branch,
                        probability,
                        correction,
                        conditioned: None,
                        corrected: None,
                    });
                }
                let rho = normalize_branch(numerator, branch, probability)?;
                let tau = apply_correction(&rho, correction);
                Ok(OutcomeRecord {
                    branch,
                    probability,
                    correction,
                    conditioned: Some(rho),
                    corrected: Some(tau),
                })
            })
            .collect()
    }

    /// `Σ_jk p_jk F^jk` for one input: the integrand of the sphere-averaged
    /// fidelity. Works on unnormalized operators, so unreachable branches
    /// contribute zero without special casing.
    pub fn weighted_fidelity(&self, input: &InputSpec) -> f64 {
        let pi = input_state(input);
        self.branch_numerators(input)
            .into_iter()
            .map(|(branch, _, numerator)| {
                let u = self.table.primary(branch).unitary();
                let moved = numerator.conjugate_by(&u).expect("4x4 operands");
                overlap(&moved, pi.matrix())
            })
            .sum()
    }
}

/// `Re tr(a b)` for square matrices of equal size.
pub(crate) fn overlap(a: &QMatrix, b: &QMatrix) -> f64 {
    let n = a.rows();
    let mut acc = C64::new(0.0, 0.0);
    for r in 0..n {
        for s in 0..n {
            acc += a[(r, s)] * b[(s, r)];
        }
    }
    acc.re
}

/// Runs all eight branches for one configuration with the published table.
pub fn run_protocol(
    channel: &ChannelSpec,
    input: &InputSpec,
    meas: &MeasurementSpec,
) -> Result<Vec<OutcomeRecord>> {
    Protocol::new(*channel, *meas).run(input)
}
