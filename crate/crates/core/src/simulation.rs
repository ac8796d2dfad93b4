//! Per-time-sample evaluation of every reported quantity over a fixed parameter set.
//!
//! [`Simulation`] diagonalizes `H_0` and `H_1` once; each call to [`Simulation::sample`] is
//! then a handful of matrix products. Samples are independent, so callers may evaluate them
//! in any order or in parallel.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::dynamics::{
    coherence, joint_block_state, reduced_env_state, reduced_system_state, ConditionalPropagator,
    JointOracle, PropagatorCache,
};
use crate::error::{Error, Result};
use crate::linalg::{partial_trace_env, partial_trace_sys, CMatrix};
use crate::model::{
    build_hamiltonians, gibbs_state, initial_qubit_state, product_state, Basis, DensityMatrix,
    HamiltonianSet, ModelParams,
};
use crate::thermo::{coherent_energy_in, mean_heat, mean_work, EnergyBasis, ThermoRecord};
use crate::witness::trace_distance_pair;

/// Everything known about the composite system at one time.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SampleRecord {
    pub t: f64,
    pub gamma: Complex64,
    pub c_l1: f64,
    /// Trace distance of the evolved `|±⟩` pair, via the trace norm.
    pub trace_distance: f64,
    pub thermo: ThermoRecord,
    /// `⟨H_I⟩_t`, reported because the measurement scheme assumes it negligible at the ends.
    pub interaction_energy: f64,
}

/// Largest discrepancies between the block-propagator path and direct exponentiation of
/// `H_total` over a set of times.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleReport {
    pub samples: usize,
    pub max_propagator_deviation: f64,
    pub max_reduced_state_deviation: f64,
}

#[derive(Clone, Debug)]
pub struct Simulation {
    params: ModelParams,
    hs: HamiltonianSet,
    rho_s0: DensityMatrix,
    rho_e0: DensityMatrix,
    joint0: DensityMatrix,
    h_s_embedded: CMatrix,
    cache: PropagatorCache,
    energy_basis: EnergyBasis,
}

impl Simulation {
    pub fn new(params: ModelParams) -> Result<Self> {
        let rho_s0 = initial_qubit_state(&params);
        Self::with_qubit_state(params, rho_s0)
    }

    /// Uses `rho_s0` instead of the state named in `params.initial_qubit`.
    pub fn with_qubit_state(params: ModelParams, rho_s0: DensityMatrix) -> Result<Self> {
        if rho_s0.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: "2x2 qubit state",
                found: rho_s0.dim(),
            });
        }
        let hs = build_hamiltonians(&params)?;
        let rho_e0 = gibbs_state(&hs.h_e, params.beta)?;
        let joint0 = product_state(&rho_s0, &rho_e0);
        let cache = PropagatorCache::new(&hs)?;
        let energy_basis = EnergyBasis::of(&hs.h_e)?;
        Ok(Self {
            h_s_embedded: hs.h_s_embedded(),
            params,
            hs,
            rho_s0,
            rho_e0,
            joint0,
            cache,
            energy_basis,
        })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn hamiltonians(&self) -> &HamiltonianSet {
        &self.hs
    }

    pub fn qubit_state(&self) -> &DensityMatrix {
        &self.rho_s0
    }

    pub fn bath_state(&self) -> &DensityMatrix {
        &self.rho_e0
    }

    pub fn propagators(&self, t: f64) -> ConditionalPropagator {
        self.cache.at(t)
    }

    pub fn sample(&self, t: f64) -> Result<SampleRecord> {
        let cp = self.cache.at(t);
        let coh = coherence(&cp, &self.rho_e0, &self.rho_s0)?;
        let witness = trace_distance_pair(&coh)?;

        let joint = joint_block_state(&cp, &self.rho_s0, &self.rho_e0)?;
        let d = self.hs.env_dim();
        let rho_e_t =
            DensityMatrix::from_trusted(partial_trace_sys(joint.matrix(), 2, d)?, Basis::Environment);
        let q_mean = mean_heat(&rho_e_t, &self.rho_e0, &self.hs.h_e)?;
        let (_, c_coherent) = coherent_energy_in(&self.energy_basis, &cp, &self.rho_s0, &self.rho_e0)?;
        let w_mean = mean_work(&joint, &self.joint0, &self.hs.h_i)?;

        let delta =
            |op: &CMatrix| -> Result<f64> { Ok(joint.expectation(op)? - self.joint0.expectation(op)?) };
        let thermo = ThermoRecord {
            t,
            q_mean,
            w_mean,
            c_coherent,
            u_s_delta: delta(&self.h_s_embedded)?,
            u_total_delta: delta(&self.hs.h_total)?,
            identity_residual: (q_mean - c_coherent).abs(),
        };
        Ok(SampleRecord {
            t,
            gamma: coh.gamma,
            c_l1: coh.c_l1,
            trace_distance: witness.d,
            thermo,
            interaction_energy: joint.expectation(&self.hs.h_i)?,
        })
    }

    /// Sequential evaluation over `times`.
    pub fn run(&self, times: &[f64]) -> Result<Vec<SampleRecord>> {
        times.iter().map(|&t| self.sample(t)).collect()
    }

    /// Mean heat alone, from `ρ_E(t)` built directly by summing the two bath branches.
    pub fn heat(&self, t: f64) -> Result<f64> {
        let cp = self.cache.at(t);
        let rho_e_t = reduced_env_state(&cp, &self.rho_e0, &self.rho_s0)?;
        mean_heat(&rho_e_t, &self.rho_e0, &self.hs.h_e)
    }

    pub fn oracle(&self) -> Result<JointOracle> {
        JointOracle::new(&self.hs, &self.rho_s0, &self.rho_e0)
    }

    /// Compares both evolution paths at `times`: the propagators entrywise, and the reduced
    /// qubit and bath states entrywise.
    pub fn oracle_check(&self, times: &[f64]) -> Result<OracleReport> {
        let oracle = self.oracle()?;
        let d = self.hs.env_dim();
        let mut report = OracleReport {
            samples: times.len(),
            max_propagator_deviation: 0.0,
            max_reduced_state_deviation: 0.0,
        };
        for &t in times {
            let cp = self.cache.at(t);
            report.max_propagator_deviation =
                report.max_propagator_deviation.max(oracle.block_deviation(&cp));

            let joint = oracle.state(t);
            let coh = coherence(&cp, &self.rho_e0, &self.rho_s0)?;
            let qubit_dev = partial_trace_env(joint.matrix(), 2, d)?
                .max_abs_diff(reduced_system_state(&coh, &self.rho_s0).matrix());
            let bath_dev = partial_trace_sys(joint.matrix(), 2, d)?
                .max_abs_diff(reduced_env_state(&cp, &self.rho_e0, &self.rho_s0)?.matrix());
            report.max_reduced_state_deviation =
                report.max_reduced_state_deviation.max(qubit_dev).max(bath_dev);
        }
        Ok(report)
    }
}
