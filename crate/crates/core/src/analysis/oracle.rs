//! Closed-form values for probabilities, fidelities and concurrences of the
//! GHZ and W channels, `max{·, 0}` clamps included.
//!
//! | quantity        | GHZ                    | W                                     |
//! |-----------------|------------------------|---------------------------------------|
//! | probability     | w = 1                  | w = 1                                 |
//! | fidelity        | w = 1                  | w = 1                                 |
//! | avg fidelity    | any w                  | w = 1                                 |
//! | concurrence     | any w                  | w = 1; any w for swap branches, mu = 0 |
//! | total swap prob | unsupported            | w = 1; any w at mu = 0                |

use std::fmt;

use crate::error::{Error, Result};
use crate::protocol::Branch;
use crate::qstates::ChannelKind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quantity {
    Probability,
    Fidelity,
    AvgFidelity,
    Concurrence,
    /// `p31 + p41 + p12 + p22`, the W channel's Bell-output probability.
    TotalBellProb,
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Quantity::Probability => "prob",
            Quantity::Fidelity => "fidelity",
            Quantity::AvgFidelity => "avg_fidelity",
            Quantity::Concurrence => "concurrence",
            Quantity::TotalBellProb => "total_bell_prob",
        })
    }
}

/// Parameters for an oracle evaluation. Fields a quantity does not use are
/// ignored.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleParams {
    pub theta: f64,
    pub phi: f64,
    pub lambda: f64,
    pub mu: f64,
    pub w: f64,
    pub branch: Option<Branch>,
}

impl Default for OracleParams {
    fn default() -> Self {
        Self {
            theta: std::f64::consts::FRAC_PI_2,
            phi: 0.0,
            lambda: 0.0,
            mu: 0.0,
            w: 1.0,
            branch: None,
        }
    }
}

impl OracleParams {
    pub fn with_branch(mut self, branch: Branch) -> Self {
        self.branch = Some(branch);
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleResult {
    pub quantity: Quantity,
    pub kind: ChannelKind,
    pub params: OracleParams,
    /// Value after any `max{·, 0}` clamp.
    pub value: f64,
    /// Value before the clamp; equal to `value` for unclamped forms.
    pub unclamped: f64,
}

impl OracleResult {
    /// True when the `max{·, 0}` clamp was active.
    pub fn clamped(&self) -> bool {
        self.unclamped < self.value
    }
}

fn unsupported(quantity: Quantity, kind: ChannelKind, why: &str) -> Error {
    Error::Unsupported(format!("{quantity} oracle for {kind} channel {why}"))
}

fn noiseless(params: &OracleParams) -> bool {
    params.w == 1.0
}

fn branch_of(quantity: Quantity, kind: ChannelKind, params: &OracleParams) -> Result<Branch> {
    params
        .branch
        .ok_or_else(|| unsupported(quantity, kind, "needs a branch (j, k)"))
}

/// Evaluates the closed form for `quantity` on a `kind` channel.
pub fn oracle(quantity: Quantity, kind: ChannelKind, params: OracleParams) -> Result<OracleResult> {
    if !(0.0..=1.0).contains(&params.w) {
        return Err(Error::InvalidParameter {
            name: "w",
            value: params.w,
            reason: "must lie in [0, 1]",
        });
    }
    let (unclamped, value) = match kind {
        ChannelKind::Ghz => ghz(quantity, &params)?,
        ChannelKind::W => w_channel(quantity, &params)?,
    };
    Ok(OracleResult {
        quantity,
        kind,
        params,
        value,
        unclamped,
    })
}

fn plain(v: f64) -> (f64, f64) {
    (v, v)
}

fn clamped(v: f64) -> (f64, f64) {
    (v, v.max(0.0))
}

fn ghz(quantity: Quantity, p: &OracleParams) -> Result<(f64, f64)> {
    let kind = ChannelKind::Ghz;
    let (ct, st) = (p.theta.cos(), p.theta.sin());
    let (cm, sm) = (p.mu.cos(), p.mu.sin());
    let cl = p.lambda.cos();
    let noise = 1.0 - p.w;
    // k = 1 carries the minus sign, k = 2 the plus sign.
    let sign = |b: Branch| if b.k() == 1 { -1.0 } else { 1.0 };

    Ok(match quantity {
        Quantity::Probability => {
            if !noiseless(p) {
                return Err(unsupported(quantity, kind, "is only available for w = 1"));
            }
            let s = sign(branch_of(quantity, kind, p)?);
            plain((1.0 + s * cm * ct) / 8.0)
        }
        Quantity::Fidelity => {
            if !noiseless(p) {
                return Err(unsupported(quantity, kind, "is only available for w = 1"));
            }
            let s = sign(branch_of(quantity, kind, p)?);
            let num = 3.0 + s * 4.0 * cm * ct + (2.0 * p.theta).cos() + 2.0 * cl * sm * st * st;
            plain(num / (4.0 * (1.0 + s * cm * ct)))
        }
        Quantity::AvgFidelity => plain((2.0 / 3.0 + cl * sm / 3.0) - (5.0 / 12.0 + cl * sm / 3.0) * noise),
        Quantity::Concurrence => {
            let s = sign(branch_of(quantity, kind, p)?);
            let x = sm * st / (1.0 + s * cm * ct);
            clamped(x - (0.5 + x) * noise)
        }
        Quantity::TotalBellProb => {
            return Err(unsupported(quantity, kind, "is not defined"));
        }
    })
}

fn w_channel(quantity: Quantity, p: &OracleParams) -> Result<(f64, f64)> {
    let kind = ChannelKind::W;
    let ct = p.theta.cos();
    let cm = p.mu.cos();
    let c2 = |x: f64| (x / 2.0).cos().powi(2);
    let s2 = |x: f64| (x / 2.0).sin().powi(2);
    let cos_phi_sin_theta = p.phi.cos() * p.theta.sin();
    let noise = 1.0 - p.w;

    // Shared denominators of the per-branch forms.
    let d11 = 3.0 + ct - cm * (1.0 + 3.0 * ct);
    let d31 = 3.0 - ct + cm * (1.0 - 3.0 * ct);
    let d12 = 3.0 + ct + cm * (1.0 + 3.0 * ct);
    let d32 = 3.0 - ct - cm * (1.0 - 3.0 * ct);

    let is_swap = |b: Branch| Branch::w_swap_branches().contains(&b);

    Ok(match quantity {
        Quantity::Probability => {
            if !noiseless(p) {
                return Err(unsupported(quantity, kind, "is only available for w = 1"));
            }
            let b = branch_of(quantity, kind, p)?;
            plain(
                match (b.j(), b.k()) {
                    (1 | 2, 1) => d11,
                    (3 | 4, 1) => d31,
                    (1 | 2, 2) => d12,
                    _ => d32,
                } / 24.0,
            )
        }
        Quantity::Fidelity => {
            if !noiseless(p) {
                return Err(unsupported(quantity, kind, "is only available for w = 1"));
            }
            let b = branch_of(quantity, kind, p)?;
            let cm2 = c2(p.mu);
            plain(match (b.j(), b.k()) {
                (1 | 2, 1) => 4.0 * cm2 * s2(p.theta).powi(2) / d11,
                (3 | 4, 1) => 4.0 * cm2 * s2(p.theta) * (1.0 + cos_phi_sin_theta) / d31,
                (1 | 2, 2) => 4.0 * cm2 * c2(p.theta) * (1.0 + cos_phi_sin_theta) / d12,
                _ => 4.0 * cm2 * c2(p.theta).powi(2) / d32,
            })
        }
        Quantity::AvgFidelity => {
            if !noiseless(p) {
                return Err(unsupported(quantity, kind, "is only available for w = 1"));
            }
            plain(5.0 / 9.0 * c2(p.mu))
        }
        Quantity::Concurrence => {
            let b = branch_of(quantity, kind, p)?;
            if noiseless(p) {
                clamped(match (b.j(), b.k()) {
                    (1 | 2, 1) => 8.0 * s2(p.mu) * c2(p.theta) / d11,
                    (3 | 4, 1) => 8.0 * c2(p.mu) * s2(p.theta) / d31,
                    (1 | 2, 2) => 8.0 * c2(p.mu) * c2(p.theta) / d12,
                    _ => 8.0 * s2(p.mu) * s2(p.theta) / d32,
                })
            } else if p.mu == 0.0 && is_swap(b) {
                clamped(1.0 - 9.0 * noise / (2.0 * (4.0 - noise)))
            } else {
                return Err(unsupported(
                    quantity,
                    kind,
                    "with w < 1 is only available for the swap branches at mu = 0",
                ));
            }
        }
        Quantity::TotalBellProb => {
            if noiseless(p) {
                plain((3.0 + cm) / 6.0)
            } else if p.mu == 0.0 {
                plain(2.0 / 3.0 - noise / 6.0)
            } else {
                return Err(unsupported(
                    quantity,
                    kind,
                    "with w < 1 is only available for mu = 0",
                ));
            }
        }
    })
}
