//! Exact dephasing dynamics.
//!
//! Because `[H_S, H_I] = 0`, the joint propagator is block diagonal in the qubit basis,
//! `U(t) = Σ_k |k⟩⟨k| ⊗ ω_k(t)` with `ω_k(t) = e^{−iε_k t}·e^{−iH_k t}`. Everything the qubit
//! sees is carried by the overlap `Γ(t) = tr[ω_0 ρ_E(0) ω_1†]`.
//!
//! Phase convention: the stored `Γ` keeps the free phase `e^{−i(ε_0−ε_1)t}`; only `|Γ|` is
//! reported downstream.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{eigh, kron, CMatrix, EigenDecomposition};
use crate::model::{Basis, DensityMatrix, HamiltonianSet};

/// The pair `ω_0(t), ω_1(t)`.
#[derive(Clone, Debug)]
pub struct ConditionalPropagator {
    pub t: f64,
    pub omega0: CMatrix,
    pub omega1: CMatrix,
}

impl ConditionalPropagator {
    pub fn omega(&self, k: usize) -> &CMatrix {
        match k {
            0 => &self.omega0,
            1 => &self.omega1,
            _ => panic!("qubit level {k} out of range"),
        }
    }

    pub fn env_dim(&self) -> usize {
        self.omega0.rows()
    }

    /// `Σ_k |k⟩⟨k| ⊗ ω_k(t)`, the full joint propagator assembled from its blocks.
    pub fn block_propagator(&self) -> CMatrix {
        let p0 = CMatrix::from_real_diag(&[1.0, 0.0]);
        let p1 = CMatrix::from_real_diag(&[0.0, 1.0]);
        &kron(&p0, &self.omega0) + &kron(&p1, &self.omega1)
    }
}

/// Eigendecompositions of `H_0` and `H_1`, computed once and reused at every time.
#[derive(Clone, Debug)]
pub struct PropagatorCache {
    eps: [f64; 2],
    spectra: [EigenDecomposition; 2],
}

impl PropagatorCache {
    pub fn new(hs: &HamiltonianSet) -> Result<Self> {
        Ok(Self {
            eps: hs.eps(),
            spectra: [eigh(&hs.h_k0)?, eigh(&hs.h_k1)?],
        })
    }

    pub fn spectrum(&self, k: usize) -> &EigenDecomposition {
        &self.spectra[k]
    }

    pub fn at(&self, t: f64) -> ConditionalPropagator {
        if t == 0.0 {
            let id = CMatrix::identity(self.spectra[0].dim());
            return ConditionalPropagator {
                t,
                omega0: id.clone(),
                omega1: id,
            };
        }
        let [omega0, omega1] = [0, 1].map(|k| {
            let eps = self.eps[k];
            self.spectra[k].map_spectrum(|l| {
                let phase = -(l + eps) * t;
                Complex64::new(libm::cos(phase), libm::sin(phase))
            })
        });
        ConditionalPropagator { t, omega0, omega1 }
    }
}

/// `ω_k(t) = e^{−iε_k t}·exp(−iH_k t)` for both qubit levels.
pub fn propagators(hs: &HamiltonianSet, t: f64) -> Result<ConditionalPropagator> {
    Ok(PropagatorCache::new(hs)?.at(t))
}

/// `Γ(t)` together with the l1-norm of the qubit coherence it implies.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoherenceSample {
    pub t: f64,
    pub gamma: Complex64,
    pub c_l1: f64,
}

/// `a·ρ·b†`, with a cheap path for a diagonal `ρ`.
pub(crate) fn sandwich(a: &CMatrix, rho: &CMatrix, b: &CMatrix) -> CMatrix {
    match rho.as_exact_diagonal() {
        Some(diag) => a.scale_columns(&diag).mul_adjoint(b),
        None => (a * rho).mul_adjoint(b),
    }
}

fn check_env(cp: &ConditionalPropagator, rho_e0: &DensityMatrix) -> Result<()> {
    if rho_e0.dim() != cp.env_dim() {
        return Err(Error::DimensionMismatch {
            expected: "environment state matching the propagator dimension",
            found: rho_e0.dim(),
        });
    }
    Ok(())
}

fn check_qubit(rho_s0: &DensityMatrix) -> Result<()> {
    if rho_s0.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: "2x2 qubit state",
            found: rho_s0.dim(),
        });
    }
    Ok(())
}

/// `Γ_{k,j}(t) = tr[ω_k ρ_E(0) ω_j†]`.
pub fn coherence_function(
    cp: &ConditionalPropagator,
    rho_e0: &DensityMatrix,
    k: usize,
    j: usize,
) -> Result<Complex64> {
    check_env(cp, rho_e0)?;
    let left = match rho_e0.matrix().as_exact_diagonal() {
        Some(diag) => cp.omega(k).scale_columns(&diag),
        None => cp.omega(k) * rho_e0.matrix(),
    };
    // tr[L·ω_j†] = Σ_ab L_ab·conj(ω_j)_ab
    Ok(left
        .as_slice()
        .iter()
        .zip(cp.omega(j).as_slice())
        .map(|(l, w)| l * w.conj())
        .sum())
}

pub fn coherence(
    cp: &ConditionalPropagator,
    rho_e0: &DensityMatrix,
    rho_s0: &DensityMatrix,
) -> Result<CoherenceSample> {
    check_qubit(rho_s0)?;
    let gamma = coherence_function(cp, rho_e0, 0, 1)?;
    // Σ_{k≠j} |ρ_kj(0)|·|Γ_kj| with |Γ_10| = |Γ_01|
    let c_l1 = 2.0 * rho_s0.matrix()[(0, 1)].norm() * gamma.norm();
    Ok(CoherenceSample { t: cp.t, gamma, c_l1 })
}

/// Qubit state at the sample's time: populations untouched, coherence scaled by `Γ`.
pub fn reduced_system_state(sample: &CoherenceSample, rho_s0: &DensityMatrix) -> DensityMatrix {
    let r = rho_s0.matrix();
    let m = CMatrix::from_fn(2, 2, |i, j| match (i, j) {
        (0, 1) => r[(0, 1)] * sample.gamma,
        (1, 0) => r[(1, 0)] * sample.gamma.conj(),
        _ => r[(i, j)],
    });
    DensityMatrix::from_trusted(m, Basis::System)
}

/// `ρ_E(t) = Σ_k ρ_S^{kk}(0)·ω_k ρ_E(0) ω_k†`.
pub fn reduced_env_state(
    cp: &ConditionalPropagator,
    rho_e0: &DensityMatrix,
    rho_s0: &DensityMatrix,
) -> Result<DensityMatrix> {
    check_env(cp, rho_e0)?;
    check_qubit(rho_s0)?;
    let d = cp.env_dim();
    let mut acc = CMatrix::zeros(d, d);
    for k in 0..2 {
        let weight = rho_s0.matrix()[(k, k)].re;
        if weight == 0.0 {
            continue;
        }
        let branch = sandwich(cp.omega(k), rho_e0.matrix(), cp.omega(k));
        acc = &acc + &branch.scale_real(weight);
    }
    Ok(DensityMatrix::from_trusted(acc, Basis::Environment))
}

/// Joint state `Σ_{k,j} ρ_S^{kj}(0)|k⟩⟨j| ⊗ ω_k ρ_E(0) ω_j†` assembled from the blocks.
pub fn joint_block_state(
    cp: &ConditionalPropagator,
    rho_s0: &DensityMatrix,
    rho_e0: &DensityMatrix,
) -> Result<DensityMatrix> {
    check_env(cp, rho_e0)?;
    check_qubit(rho_s0)?;
    let d = cp.env_dim();
    let rs = rho_s0.matrix();
    let mut joint = CMatrix::zeros(2 * d, 2 * d);
    let mut place = |k: usize, j: usize, block: &CMatrix| {
        for a in 0..d {
            for b in 0..d {
                joint[(k * d + a, j * d + b)] = block[(a, b)];
            }
        }
    };
    for k in 0..2 {
        let w = rs[(k, k)];
        if w.norm() != 0.0 {
            place(
                k,
                k,
                &sandwich(cp.omega(k), rho_e0.matrix(), cp.omega(k)).scale(w),
            );
        }
    }
    if rs[(0, 1)].norm() != 0.0 {
        let upper = sandwich(&cp.omega0, rho_e0.matrix(), &cp.omega1);
        place(0, 1, &upper.scale(rs[(0, 1)]));
        place(1, 0, &upper.adjoint().scale(rs[(1, 0)]));
    }
    Ok(DensityMatrix::from_trusted(joint, Basis::Joint))
}

/// Brute-force reference: exponentiates the full `H_total` without using the block structure.
#[derive(Clone, Debug)]
pub struct JointOracle {
    spectrum: EigenDecomposition,
    initial: CMatrix,
    env_dim: usize,
}

impl JointOracle {
    pub fn new(hs: &HamiltonianSet, rho_s0: &DensityMatrix, rho_e0: &DensityMatrix) -> Result<Self> {
        check_qubit(rho_s0)?;
        if rho_e0.dim() != hs.env_dim() {
            return Err(Error::DimensionMismatch {
                expected: "environment state matching H_E",
                found: rho_e0.dim(),
            });
        }
        Ok(Self {
            spectrum: eigh(&hs.h_total)?,
            initial: kron(rho_s0.matrix(), rho_e0.matrix()),
            env_dim: hs.env_dim(),
        })
    }

    pub fn env_dim(&self) -> usize {
        self.env_dim
    }

    /// `exp(−i·H_total·t)`.
    pub fn propagator(&self, t: f64) -> CMatrix {
        self.spectrum.propagator(t)
    }

    /// `U(t)·ρ(0)·U†(t)`.
    pub fn state(&self, t: f64) -> DensityMatrix {
        let u = self.propagator(t);
        DensityMatrix::from_trusted((&u * &self.initial).mul_adjoint(&u), Basis::Joint)
    }

    /// Max entry deviation between the full propagator and the block assembly.
    pub fn block_deviation(&self, cp: &ConditionalPropagator) -> f64 {
        self.propagator(cp.t).max_abs_diff(&cp.block_propagator())
    }
}

pub fn joint_oracle_state(
    hs: &HamiltonianSet,
    rho_s0: &DensityMatrix,
    rho_e0: &DensityMatrix,
    t: f64,
) -> Result<DensityMatrix> {
    Ok(JointOracle::new(hs, rho_s0, rho_e0)?.state(t))
}

/// `‖exp(−iH_total t) − Σ_k |k⟩⟨k| ⊗ ω_k(t)‖∞`.
pub fn block_equivalence(hs: &HamiltonianSet, t: f64) -> Result<f64> {
    let full = eigh(&hs.h_total)?.propagator(t);
    Ok(full.max_abs_diff(&propagators(hs, t)?.block_propagator()))
}
