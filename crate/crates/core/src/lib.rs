//! Density-operator simulation of two-qubit entanglement teleportation over
//! three-qubit GHZ and W channels, with and without white noise.
//!
//! Alice holds the input pair (qubits 4, 5) and qubit 3 of a three-qubit
//! channel shared with Bob (qubit 1) and Cindy (qubit 2). She measures
//! qubits 3, 4 in the Bell basis and qubit 5 in a tunable basis, and the
//! receivers apply a Pauli-pair correction chosen from a published table.
//!
//! - [`qmat`]: dense complex matrices, partial trace, Hermitian eigensolver.
//! - [`qstates`]: input pair, Bell and single-qubit projectors, channels.
//! - [`protocol`]: the eight measurement branches and their corrections.
//! - [`analysis`]: fidelity, concurrence, sphere averages, closed forms,
//!   correction search and an independent amplitude-level cross-check.
//! - [`verify`]: the acceptance checks, shared by the CLI and the test suite.

pub mod analysis;
pub mod error;
pub mod protocol;
pub mod qmat;
pub mod qstates;
pub mod verify;

pub use error::{Error, Result};
pub use qmat::{QMatrix, QVector, C64};
pub use qstates::{ChannelKind, ChannelSpec, DensityOperator, InputSpec, MeasurementSpec};
