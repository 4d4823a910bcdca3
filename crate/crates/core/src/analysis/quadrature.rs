//! Averages over the Bloch sphere of input states.
//!
//! The isotropic measure `sin θ dθ dφ / 4π` becomes `du dφ / 4π` with
//! `u = cos θ`. The `u` integral uses Gauss-Legendre nodes, which never sit
//! on `u = ±1`, and the periodic `φ` integral uses the uniform rule.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::protocol::Protocol;
use crate::qstates::{ChannelSpec, InputSpec, MeasurementSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadratureSpec {
    theta_nodes: usize,
    phi_nodes: usize,
}

impl QuadratureSpec {
    pub fn new(theta_nodes: usize, phi_nodes: usize) -> Result<Self> {
        for (name, n) in [("quad-theta", theta_nodes), ("quad-phi", phi_nodes)] {
            if n < 2 {
                return Err(Error::InvalidParameter {
                    name,
                    value: n as f64,
                    reason: "needs at least 2 nodes",
                });
            }
        }
        Ok(Self {
            theta_nodes,
            phi_nodes,
        })
    }

    pub fn theta_nodes(&self) -> usize {
        self.theta_nodes
    }

    pub fn phi_nodes(&self) -> usize {
        self.phi_nodes
    }

    /// Same rule with both orders doubled.
    pub fn doubled(&self) -> Self {
        Self {
            theta_nodes: 2 * self.theta_nodes,
            phi_nodes: 2 * self.phi_nodes,
        }
    }

    /// Every node of the product rule as an input spec plus its weight.
    /// Weights sum to one.
    pub fn nodes(&self) -> Vec<(InputSpec, f64)> {
        let (us, ws) = gauss_legendre(self.theta_nodes);
        let mut out = Vec::with_capacity(self.theta_nodes * self.phi_nodes);
        for (u, wu) in us.into_iter().zip(ws) {
            let theta = u.acos();
            for q in 0..self.phi_nodes {
                let phi = 2.0 * PI * q as f64 / self.phi_nodes as f64;
                let input = InputSpec::new(theta, phi).expect("Gauss-Legendre nodes are interior");
                // (1/4π) · wu · (2π / Nφ)
                out.push((input, wu / (2.0 * self.phi_nodes as f64)));
            }
        }
        out
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            theta_nodes: 32,
            phi_nodes: 64,
        }
    }
}

/// Gauss-Legendre nodes (ascending) and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess, then Newton on P_n.
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// `(1/4π) ∮ f dΩ` over input states.
pub fn sphere_average<F>(quad: &QuadratureSpec, mut f: F) -> f64
where
    F: FnMut(&InputSpec) -> f64,
{
    quad.nodes().iter().map(|(input, w)| w * f(input)).sum()
}

/// Sphere-averaged `Σ_jk p_jk F^jk` for a prepared protocol.
pub fn protocol_average_fidelity(protocol: &Protocol, quad: &QuadratureSpec) -> f64 {
    sphere_average(quad, |input| protocol.weighted_fidelity(input))
}

/// Average teleportation fidelity over outcomes and isotropic inputs, using
/// the published correction table.
pub fn average_fidelity(channel: &ChannelSpec, meas: &MeasurementSpec, quad: &QuadratureSpec) -> f64 {
    protocol_average_fidelity(&Protocol::new(*channel, *meas), quad)
}
