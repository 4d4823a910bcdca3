//! Figures of merit, closed-form oracles, sphere averages and the correction
//! search built on top of the protocol simulation.

pub mod crosscheck;
pub mod metrics;
pub mod oracle;
pub mod quadrature;
pub mod search;

pub use metrics::{concurrence, fidelity, spin_flip_spectrum};
pub use oracle::{oracle, OracleParams, OracleResult, Quantity};
pub use quadrature::{average_fidelity, protocol_average_fidelity, sphere_average, QuadratureSpec};
pub use search::{averaged_search, search_corrections, AveragedSearch};
