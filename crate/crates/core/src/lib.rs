//! Exact pure-dephasing dynamics of a central qubit coupled to a finite thermal Ising ring,
//! together with the two-point-measurement energetics and trace-distance non-Markovianity
//! diagnostics of that dynamics.
//!
//! The crate is `no_std` (it needs `alloc`). File formats, the command-line driver and
//! parallel sweeps live in the companion `dephasing` crate.
//!
//! Layout:
//! - [`linalg`]: dense complex matrices, Jacobi `eigh`, `exp(−iHt)`, partial traces, trace norm.
//! - [`model`]: Hamiltonians of the qubit + Ising-ring problem, Gibbs and qubit initial states.
//! - [`dynamics`]: conditional propagators `ω_k(t)`, the coherence function `Γ(t)`, reduced
//!   states, and the brute-force joint propagator used as an oracle.
//! - [`thermo`]: mean heat, mean work, coherent energy from transition amplitudes.
//! - [`witness`]: trace distance of the `|±⟩` pair, information flow, accumulated measure.
//! - [`simulation`]: per-time-sample pipeline with cached eigendecompositions.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod dynamics;
pub mod error;
pub mod linalg;
pub mod model;
pub mod simulation;
pub mod thermo;
pub mod witness;

pub use error::{Error, Result};
pub use linalg::{CMatrix, EigenDecomposition};
pub use model::{DensityMatrix, HamiltonianSet, InitialQubit, ModelParams};
pub use num_complex::Complex64;
pub use simulation::{SampleRecord, Simulation};

/// Uniform grid of `n` points on `[0, t_max]`, both ends included.
pub fn time_grid(t_max: f64, n: usize) -> alloc::vec::Vec<f64> {
    match n {
        0 => alloc::vec::Vec::new(),
        1 => alloc::vec![0.0],
        _ => (0..n)
            .map(|i| {
                if i + 1 == n {
                    t_max
                } else {
                    t_max * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}
