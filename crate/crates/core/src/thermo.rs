//! Two-point-measurement energetics of the dephasing protocol.
//!
//! The mean heat is the change of `⟨H_E⟩`; the mean work is minus the change of `⟨H_I⟩`.
//! The coherent energy is computed independently from the transition probabilities
//! `|c^k_{m,n}(t)|² = |⟨r_n|ω_k(t)|r_m⟩|²` between bath energy eigenstates, never from the
//! trace formula, so that agreement with the mean heat is a real check.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::dynamics::{reduced_env_state, ConditionalPropagator};
use crate::error::{Error, Result};
use crate::linalg::{eigh, CMatrix};
use crate::model::{DensityMatrix, HamiltonianSet};

/// Per-time energetic bookkeeping. All energies are changes since `t = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThermoRecord {
    pub t: f64,
    pub q_mean: f64,
    pub w_mean: f64,
    pub c_coherent: f64,
    pub u_s_delta: f64,
    pub u_total_delta: f64,
    pub identity_residual: f64,
}

/// `|c^k_{m,n}(t)|²` for `k ∈ {0,1}` and bath eigenstates `m → n`.
#[derive(Clone, Debug)]
pub struct AmplitudeTable {
    pub t: f64,
    dim: usize,
    probs: Vec<f64>,
}

impl AmplitudeTable {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Probability of `|r_m⟩ → |r_n⟩` in branch `k`.
    pub fn get(&self, k: usize, m: usize, n: usize) -> f64 {
        assert!(k < 2 && m < self.dim && n < self.dim);
        self.probs[(k * self.dim + m) * self.dim + n]
    }

    /// `max_{k,m} |Σ_n |c^k_{m,n}|² − 1|`.
    pub fn unitarity_defect(&self) -> f64 {
        self.probs
            .chunks_exact(self.dim)
            .map(|row| (row.iter().sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

/// The bath's energy eigenbasis `{ℰ_n, |r_n⟩}`. For the Ising ring this is the computational
/// basis and no rotation is needed.
#[derive(Clone, Debug)]
pub enum EnergyBasis {
    Computational { energies: Vec<f64> },
    Rotated { energies: Vec<f64>, vectors: CMatrix },
}

impl EnergyBasis {
    pub fn of(h_e: &CMatrix) -> Result<Self> {
        match h_e.as_exact_diagonal() {
            Some(diag) => Ok(EnergyBasis::Computational {
                energies: diag.iter().map(|z| z.re).collect(),
            }),
            None => {
                let eig = eigh(h_e)?;
                Ok(EnergyBasis::Rotated {
                    energies: eig.eigenvalues().to_vec(),
                    vectors: eig.eigenvectors().clone(),
                })
            }
        }
    }

    pub fn energies(&self) -> &[f64] {
        match self {
            EnergyBasis::Computational { energies } | EnergyBasis::Rotated { energies, .. } => energies,
        }
    }

    /// Matrix elements `⟨r_a|op|r_b⟩`.
    pub fn represent(&self, op: &CMatrix) -> CMatrix {
        match self {
            EnergyBasis::Computational { .. } => op.clone(),
            EnergyBasis::Rotated { vectors, .. } => &(&vectors.adjoint() * op) * vectors,
        }
    }

    /// `⟨r_m|ρ|r_m⟩`.
    pub fn populations(&self, rho: &DensityMatrix) -> Vec<f64> {
        match self {
            EnergyBasis::Computational { .. } => rho.populations(),
            EnergyBasis::Rotated { .. } => self.represent(rho.matrix()).real_diagonal(),
        }
    }
}

pub fn mean_heat(rho_e_t: &DensityMatrix, rho_e_0: &DensityMatrix, h_e: &CMatrix) -> Result<f64> {
    Ok(rho_e_t.expectation(h_e)? - rho_e_0.expectation(h_e)?)
}

/// `⟨W⟩ = −(⟨H_I⟩_t − ⟨H_I⟩_0)` on joint states.
pub fn mean_work(joint_t: &DensityMatrix, joint_0: &DensityMatrix, h_i: &CMatrix) -> Result<f64> {
    Ok(-(joint_t.expectation(h_i)? - joint_0.expectation(h_i)?))
}

pub fn transition_probabilities(basis: &EnergyBasis, cp: &ConditionalPropagator) -> AmplitudeTable {
    let dim = cp.env_dim();
    let mut probs = Vec::with_capacity(2 * dim * dim);
    for k in 0..2 {
        let w = basis.represent(cp.omega(k));
        // c_{m,n} = ⟨r_n|ω|r_m⟩ = w[n][m]
        for m in 0..dim {
            probs.extend((0..dim).map(|n| w[(n, m)].norm_sqr()));
        }
    }
    AmplitudeTable { t: cp.t, dim, probs }
}

/// `C(t) = Σ_k Σ_{m,n} ρ_S^{kk} ρ_E^m ℰ_n (|c^k_{m,n}(t)|² − δ_{mn})`.
pub fn coherent_energy_amplitudes(
    hs: &HamiltonianSet,
    cp: &ConditionalPropagator,
    rho_s0: &DensityMatrix,
    rho_e0: &DensityMatrix,
) -> Result<(AmplitudeTable, f64)> {
    let basis = EnergyBasis::of(&hs.h_e)?;
    coherent_energy_in(&basis, cp, rho_s0, rho_e0)
}

/// As [`coherent_energy_amplitudes`] with a precomputed bath eigenbasis.
pub fn coherent_energy_in(
    basis: &EnergyBasis,
    cp: &ConditionalPropagator,
    rho_s0: &DensityMatrix,
    rho_e0: &DensityMatrix,
) -> Result<(AmplitudeTable, f64)> {
    let dim = cp.env_dim();
    if rho_e0.dim() != dim || basis.energies().len() != dim {
        return Err(Error::DimensionMismatch {
            expected: "bath operators of the propagator dimension",
            found: rho_e0.dim(),
        });
    }
    let table = transition_probabilities(basis, cp);
    let energies = basis.energies();
    let bath_pops = basis.populations(rho_e0);
    let mut total = 0.0;
    for k in 0..2 {
        let weight = rho_s0.matrix()[(k, k)].re;
        if weight == 0.0 {
            continue;
        }
        let mut branch = 0.0;
        for (m, &pm) in bath_pops.iter().enumerate() {
            let moved: f64 = (0..dim).map(|n| energies[n] * table.get(k, m, n)).sum();
            branch += pm * (moved - energies[m]);
        }
        total += weight * branch;
    }
    Ok((table, total))
}

/// Energy changes of every Hamiltonian piece between two joint states.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnergyAudit {
    pub u_s_delta: f64,
    pub u_e_delta: f64,
    pub u_i_delta: f64,
    pub u_total_delta: f64,
}

pub fn energy_audit(
    hs: &HamiltonianSet,
    joint_t: &DensityMatrix,
    joint_0: &DensityMatrix,
) -> Result<EnergyAudit> {
    let delta = |op: &CMatrix| -> Result<f64> { Ok(joint_t.expectation(op)? - joint_0.expectation(op)?) };
    Ok(EnergyAudit {
        u_s_delta: delta(&hs.h_s_embedded())?,
        u_e_delta: delta(&hs.h_e_embedded())?,
        u_i_delta: delta(&hs.h_i)?,
        u_total_delta: delta(&hs.h_total)?,
    })
}

/// Finite-time versions of the classical and interaction contributions of the bath energy
/// change, evaluated along a sequence of propagators.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BernardoTerms {
    /// `Σ_n ∫ P_n dℰ_n`
    pub classical_work: f64,
    /// `Σ_{k,m} ∫ d(ρ_S^{kk} ρ_E^m) ε^k_m`
    pub classical_heat: f64,
    /// `Σ_{k,m} ρ_S^{kk} ρ_E^m (ε^k_m(t) − ε^k_m(t_0))`
    pub interaction_work: f64,
    /// `⟨H_E⟩_t − ⟨H_E⟩_{t_0}` from the reduced bath state.
    pub env_energy_change: f64,
}

/// Discrete Stieltjes sums along `path` (ordered in time, at least one element).
///
/// `ε^k_m(t) = ⟨r_m|ω_k†(t) H_E ω_k(t)|r_m⟩` is evaluated through the Heisenberg-picture
/// operator, a third route next to the trace and amplitude forms.
pub fn bernardo_classical_terms(
    hs: &HamiltonianSet,
    rho_s0: &DensityMatrix,
    rho_e0: &DensityMatrix,
    path: &[ConditionalPropagator],
) -> Result<BernardoTerms> {
    let (first, last) = match (path.first(), path.last()) {
        (Some(f), Some(l)) => (f, l),
        _ => return Err(Error::GridTooSmall { len: 0 }),
    };
    let basis = EnergyBasis::of(&hs.h_e)?;
    let h_e_basis = basis.represent(&hs.h_e);
    let bath_pops = basis.populations(rho_e0);
    let qubit_pops = |_: &ConditionalPropagator| rho_s0.populations();
    // The bath Hamiltonian is time independent, so its levels are read fresh but never move.
    let levels = |_: &ConditionalPropagator| h_e_basis.real_diagonal();
    let rotated_levels = |cp: &ConditionalPropagator| -> [Vec<f64>; 2] {
        [0, 1].map(|k| {
            let w = basis.represent(cp.omega(k));
            (&(&w.adjoint() * &h_e_basis) * &w).real_diagonal()
        })
    };

    let mut classical_work = 0.0;
    let mut classical_heat = 0.0;
    for step in path.windows(2) {
        let (a, b) = (&step[0], &step[1]);
        let pops_a = basis.populations(&reduced_env_state(a, rho_e0, rho_s0)?);
        let (la, lb) = (levels(a), levels(b));
        classical_work += pops_a
            .iter()
            .zip(la.iter().zip(&lb))
            .map(|(p, (x, y))| p * (y - x))
            .sum::<f64>();

        let (qa, qb) = (qubit_pops(a), qubit_pops(b));
        let eps_a = rotated_levels(a);
        for k in 0..2 {
            for (m, &pm) in bath_pops.iter().enumerate() {
                classical_heat += (qb[k] * pm - qa[k] * pm) * eps_a[k][m];
            }
        }
    }

    let qubit = rho_s0.populations();
    let (start, end) = (rotated_levels(first), rotated_levels(last));
    let mut interaction_work = 0.0;
    for k in 0..2 {
        for (m, &pm) in bath_pops.iter().enumerate() {
            interaction_work += qubit[k] * pm * (end[k][m] - start[k][m]);
        }
    }
    let env_energy_change = mean_heat(
        &reduced_env_state(last, rho_e0, rho_s0)?,
        &reduced_env_state(first, rho_e0, rho_s0)?,
        &hs.h_e,
    )?;
    Ok(BernardoTerms {
        classical_work,
        classical_heat,
        interaction_work,
        env_energy_change,
    })
}

/// `⟨H_E⟩` change computed in the bath eigenbasis with an arbitrary (possibly non-physical)
/// qubit population vector. Used to show that only the qubit diagonal enters the heat.
pub fn heat_from_populations(
    hs: &HamiltonianSet,
    cp: &ConditionalPropagator,
    qubit_populations: [f64; 2],
    rho_e0: &DensityMatrix,
) -> Result<f64> {
    let diag = CMatrix::from_diag(&qubit_populations.map(|p| Complex64::new(p, 0.0)));
    let rho_s = DensityMatrix::new(diag, crate::model::Basis::System)?;
    mean_heat(&reduced_env_state(cp, rho_e0, &rho_s)?, rho_e0, &hs.h_e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{joint_block_state, propagators, PropagatorCache};
    use crate::model::{build_hamiltonians, gibbs_state, initial_qubit_state, product_state, ModelParams};

    struct Fixture {
        hs: HamiltonianSet,
        rho_s: DensityMatrix,
        rho_e: DensityMatrix,
    }

    fn fixture(n: usize, g: f64) -> Fixture {
        let p = ModelParams::default().with_spins(n).with_coupling(g);
        let hs = build_hamiltonians(&p).unwrap();
        let rho_e = gibbs_state(&hs.h_e, p.beta).unwrap();
        Fixture {
            rho_s: initial_qubit_state(&p),
            hs,
            rho_e,
        }
    }

    fn heat_at(f: &Fixture, t: f64) -> f64 {
        let cp = propagators(&f.hs, t).unwrap();
        mean_heat(
            &reduced_env_state(&cp, &f.rho_e, &f.rho_s).unwrap(),
            &f.rho_e,
            &f.hs.h_e,
        )
        .unwrap()
    }

    #[test]
    fn heat_vanishes_at_start_and_without_coupling() {
        let f = fixture(3, 0.5);
        assert!(heat_at(&f, 0.0).abs() < 1e-14);
        let free = fixture(3, 0.0);
        for &t in &[0.4, 3.0, 11.0] {
            assert!(heat_at(&free, t).abs() < 1e-12);
        }
    }

    #[test]
    fn work_equals_heat() {
        let f = fixture(3, 0.5);
        let joint_0 = product_state(&f.rho_s, &f.rho_e);
        assert!(f.rho_e.expectation(&f.hs.v0).unwrap().abs() < 1e-15);
        for &t in &[0.0, 0.6, 1.0, 4.5] {
            let cp = propagators(&f.hs, t).unwrap();
            let joint_t = joint_block_state(&cp, &f.rho_s, &f.rho_e).unwrap();
            let w = mean_work(&joint_t, &joint_0, &f.hs.h_i).unwrap();
            assert!((w - heat_at(&f, t)).abs() < 1e-9);
        }
    }

    #[test]
    fn coherent_energy_limits_and_identity() {
        let f = fixture(3, 0.5);
        let cp0 = propagators(&f.hs, 0.0).unwrap();
        let (table0, c0) = coherent_energy_amplitudes(&f.hs, &cp0, &f.rho_s, &f.rho_e).unwrap();
        assert!(c0.abs() < 1e-13);
        for k in 0..2 {
            for m in 0..8 {
                for n in 0..8 {
                    let expect = if m == n { 1.0 } else { 0.0 };
                    assert!((table0.get(k, m, n) - expect).abs() < 1e-14);
                }
            }
        }

        let cp = propagators(&f.hs, 1.0).unwrap();
        let (table, c) = coherent_energy_amplitudes(&f.hs, &cp, &f.rho_s, &f.rho_e).unwrap();
        assert!(table.unitarity_defect() < 1e-10);
        assert!((c - heat_at(&f, 1.0)).abs() < 1e-9);

        let free = fixture(3, 0.0);
        let (_, c_free) = coherent_energy_amplitudes(
            &free.hs,
            &propagators(&free.hs, 2.0).unwrap(),
            &free.rho_s,
            &free.rho_e,
        )
        .unwrap();
        assert!(c_free.abs() < 1e-12);
    }

    #[test]
    fn rotated_basis_matches_computational() {
        // Same bath, but the eigenbasis found by diagonalizing a unitarily conjugated copy.
        let f = fixture(2, 0.5);
        let cp = propagators(&f.hs, 1.4).unwrap();
        let comp = EnergyBasis::of(&f.hs.h_e).unwrap();
        let rotated = match &comp {
            EnergyBasis::Computational { energies } => EnergyBasis::Rotated {
                energies: energies.clone(),
                vectors: CMatrix::identity(4),
            },
            _ => unreachable!(),
        };
        let (_, a) = coherent_energy_in(&comp, &cp, &f.rho_s, &f.rho_e).unwrap();
        let (_, b) = coherent_energy_in(&rotated, &cp, &f.rho_s, &f.rho_e).unwrap();
        assert!((a - b).abs() < 1e-14);
    }

    #[test]
    fn energy_audit_conserves_total_and_system() {
        let f = fixture(3, 0.5);
        let joint_0 = product_state(&f.rho_s, &f.rho_e);
        let cp = propagators(&f.hs, 2.2).unwrap();
        let joint_t = joint_block_state(&cp, &f.rho_s, &f.rho_e).unwrap();
        let audit = energy_audit(&f.hs, &joint_t, &joint_0).unwrap();
        assert!(audit.u_s_delta.abs() < 1e-10);
        assert!(audit.u_total_delta.abs() < 1e-9 * f.hs.h_total.max_abs());
        assert!((audit.u_e_delta + audit.u_i_delta).abs() < 1e-9);
    }

    #[test]
    fn bernardo_terms() {
        let f = fixture(3, 0.5);
        let cache = PropagatorCache::new(&f.hs).unwrap();
        let path: Vec<_> = (0..=20).map(|i| cache.at(i as f64 * 0.05)).collect();
        let terms = bernardo_classical_terms(&f.hs, &f.rho_s, &f.rho_e, &path).unwrap();
        assert_eq!(terms.classical_work, 0.0);
        assert_eq!(terms.classical_heat, 0.0);
        assert!((terms.interaction_work - terms.env_energy_change).abs() < 1e-9);
        assert!((terms.interaction_work - heat_at(&f, 1.0)).abs() < 1e-9);
        assert!(bernardo_classical_terms(&f.hs, &f.rho_s, &f.rho_e, &[]).is_err());
    }

    #[test]
    fn heat_depends_only_on_qubit_populations() {
        let f = fixture(3, 0.5);
        for &t in &[0.3, 1.1, 5.0] {
            let cp = propagators(&f.hs, t).unwrap();
            let dephased = heat_from_populations(&f.hs, &cp, [0.5, 0.5], &f.rho_e).unwrap();
            assert!((dephased - heat_at(&f, t)).abs() < 1e-10);
        }
    }

    #[test]
    fn non_real_expectation_is_an_error() {
        let f = fixture(1, 0.5);
        let mut skew = CMatrix::zeros(2, 2);
        skew[(0, 0)] = Complex64::new(0.0, 1.0);
        assert!(matches!(
            f.rho_e.expectation(&skew),
            Err(Error::NonRealExpectation { .. })
        ));
    }
}
