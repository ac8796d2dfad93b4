//! The qubit + Ising-ring model: parameters, Hamiltonians and initial states.
//!
//! Tensor products always put the qubit first, `ρ_S ⊗ ρ_E`. Within the environment, site 0
//! is the most significant factor and `σz|0⟩ = +|0⟩`, so basis index bit `1` means spin down.

use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{commutator, eigh, kron, pauli, CMatrix, HERMITIAN_TOL, ONE};

/// Largest ring we agree to treat densely: the joint space is `2^(N+1)`.
pub const MAX_SPINS: usize = 10;

const TRACE_TOL: f64 = 1e-12;
const POSITIVITY_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum InitialQubit {
    /// `(|0⟩ + |1⟩)/√2`
    Plus,
    /// `(|0⟩ − |1⟩)/√2`
    Minus,
    /// `cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`
    Custom { theta: f64, phi: f64 },
}

impl InitialQubit {
    pub fn amplitudes(&self) -> [Complex64; 2] {
        let h = core::f64::consts::FRAC_1_SQRT_2;
        match *self {
            InitialQubit::Plus => [Complex64::new(h, 0.0), Complex64::new(h, 0.0)],
            InitialQubit::Minus => [Complex64::new(h, 0.0), Complex64::new(-h, 0.0)],
            InitialQubit::Custom { theta, phi } => [
                Complex64::new(libm::cos(theta / 2.0), 0.0),
                Complex64::from_polar(libm::sin(theta / 2.0), phi),
            ],
        }
    }
}

impl fmt::Display for InitialQubit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InitialQubit::Plus => f.write_str("plus"),
            InitialQubit::Minus => f.write_str("minus"),
            InitialQubit::Custom { theta, phi } => write!(f, "{theta},{phi}"),
        }
    }
}

/// Physical parameters, in units where the Ising coupling magnitude sets the energy scale.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelParams {
    pub n_spins: usize,
    pub j_z: f64,
    pub h_z: f64,
    pub g0: f64,
    pub g1: f64,
    pub beta: f64,
    /// Qubit level energies `ε_0, ε_1`. They only contribute the phase `e^{−i(ε_0−ε_1)t}`
    /// to `Γ(t)`, and nothing to any reported magnitude or energy change.
    pub eps0: f64,
    pub eps1: f64,
    pub initial_qubit: InitialQubit,
}

impl Default for ModelParams {
    /// `N = 7`, `J_z = 1`, `h_z = −5|J_z|`, `T = |J_z|`, `g_0 = g_1 = 0.5|J_z|`, qubit in `|+⟩`.
    fn default() -> Self {
        Self {
            n_spins: 7,
            j_z: 1.0,
            h_z: -5.0,
            g0: 0.5,
            g1: 0.5,
            beta: 1.0,
            eps0: -0.5,
            eps1: 0.5,
            initial_qubit: InitialQubit::Plus,
        }
    }
}

impl ModelParams {
    pub fn with_spins(mut self, n: usize) -> Self {
        self.n_spins = n;
        self
    }

    /// Sets `g_0 = g_1 = g`.
    pub fn with_coupling(mut self, g: f64) -> Self {
        self.g0 = g;
        self.g1 = g;
        self
    }

    pub fn with_initial(mut self, initial: InitialQubit) -> Self {
        self.initial_qubit = initial;
        self
    }

    pub fn env_dim(&self) -> usize {
        1 << self.n_spins
    }

    pub fn validate(&self) -> Result<()> {
        let invalid = |field, reason| Err(Error::InvalidParams { field, reason });
        if self.n_spins == 0 {
            return invalid("n_spins", "must be at least 1");
        }
        if self.n_spins > MAX_SPINS {
            return invalid("n_spins", "too large for dense exact diagonalization (max 10)");
        }
        let reals = [
            ("j_z", self.j_z),
            ("h_z", self.h_z),
            ("g0", self.g0),
            ("g1", self.g1),
            ("beta", self.beta),
            ("eps0", self.eps0),
            ("eps1", self.eps1),
        ];
        for (field, value) in reals {
            if !value.is_finite() {
                return invalid(field, "must be finite");
            }
        }
        if self.beta <= 0.0 {
            return invalid("beta", "must be positive");
        }
        if let InitialQubit::Custom { theta, phi } = self.initial_qubit {
            if !theta.is_finite() || !phi.is_finite() {
                return invalid("initial_qubit", "angles must be finite");
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Basis {
    System,
    Environment,
    Joint,
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Basis::System => "system",
            Basis::Environment => "environment",
            Basis::Joint => "system-environment",
        })
    }
}

/// Hermitian, unit-trace, positive semidefinite operator.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    matrix: CMatrix,
    basis: Basis,
}

impl DensityMatrix {
    /// Validates Hermiticity (1e-12), unit trace (1e-12) and positivity (eigenvalues ≥ −1e-10).
    pub fn new(matrix: CMatrix, basis: Basis) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidState {
                reason: "matrix is not square",
            });
        }
        if matrix.hermiticity_defect() > HERMITIAN_TOL {
            return Err(Error::InvalidState {
                reason: "matrix is not Hermitian",
            });
        }
        if (matrix.trace() - ONE).norm() > TRACE_TOL {
            return Err(Error::InvalidState {
                reason: "trace differs from one",
            });
        }
        let spectrum = eigh(&matrix)?;
        if spectrum
            .eigenvalues()
            .first()
            .is_some_and(|&l| l < -POSITIVITY_TOL)
        {
            return Err(Error::InvalidState {
                reason: "matrix has a negative eigenvalue",
            });
        }
        Ok(Self { matrix, basis })
    }

    /// For states obtained from a validated state by unitary evolution, partial traces or
    /// convex combinations, where re-running the spectral check would only cost time.
    pub(crate) fn from_trusted(matrix: CMatrix, basis: Basis) -> Self {
        debug_assert!(matrix.is_square());
        Self { matrix, basis }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Populations, the real diagonal.
    pub fn populations(&self) -> Vec<f64> {
        self.matrix.real_diagonal()
    }

    /// `tr[op·ρ]` for a Hermitian `op`; the imaginary residue must stay below 1e-8.
    pub fn expectation(&self, op: &CMatrix) -> Result<f64> {
        if op.rows() != self.dim() || op.cols() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: "operator of the state's dimension",
                found: op.rows(),
            });
        }
        real_part_checked(op.trace_product(&self.matrix))
    }
}

/// Rejects expectation values whose imaginary part exceeds 1e-8.
pub(crate) fn real_part_checked(z: Complex64) -> Result<f64> {
    if z.im.abs() > 1e-8 {
        return Err(Error::NonRealExpectation { imag: z.im });
    }
    Ok(z.re)
}

/// Every operator of the model, in matrix form.
#[derive(Clone, Debug)]
pub struct HamiltonianSet {
    /// `diag(ε_0, ε_1)`
    pub h_s: CMatrix,
    pub h_e: CMatrix,
    /// Environment operators coupled to `|0⟩⟨0|` and `|1⟩⟨1|`.
    pub v0: CMatrix,
    pub v1: CMatrix,
    pub g0: f64,
    pub g1: f64,
    pub h_i: CMatrix,
    pub h_total: CMatrix,
    /// Conditional Hamiltonians `H_E + g_k V_k`.
    pub h_k0: CMatrix,
    pub h_k1: CMatrix,
}

impl HamiltonianSet {
    /// Assembles the composite operators from the system levels, the bath Hamiltonian and
    /// the two environment coupling operators.
    pub fn from_parts(
        eps: [f64; 2],
        h_e: CMatrix,
        v0: CMatrix,
        v1: CMatrix,
        g0: f64,
        g1: f64,
    ) -> Result<Self> {
        let d = h_e.rows();
        for op in [&h_e, &v0, &v1] {
            if !op.is_square() || op.rows() != d {
                return Err(Error::DimensionMismatch {
                    expected: "environment operators of equal square dimension",
                    found: op.rows(),
                });
            }
            let defect = op.hermiticity_defect();
            if defect > HERMITIAN_TOL {
                return Err(Error::NotHermitian { defect });
            }
        }
        let h_s = CMatrix::from_real_diag(&eps);
        let proj0 = CMatrix::from_real_diag(&[1.0, 0.0]);
        let proj1 = CMatrix::from_real_diag(&[0.0, 1.0]);
        let h_i = &kron(&proj0, &v0.scale_real(g0)) + &kron(&proj1, &v1.scale_real(g1));
        let id_e = CMatrix::identity(d);
        let h_total = &(&kron(&h_s, &id_e) + &kron(&pauli::identity(), &h_e)) + &h_i;
        let h_k0 = &h_e + &v0.scale_real(g0);
        let h_k1 = &h_e + &v1.scale_real(g1);
        Ok(Self {
            h_s,
            h_e,
            v0,
            v1,
            g0,
            g1,
            h_i,
            h_total,
            h_k0,
            h_k1,
        })
    }

    pub fn env_dim(&self) -> usize {
        self.h_e.rows()
    }

    pub fn eps(&self) -> [f64; 2] {
        [self.h_s[(0, 0)].re, self.h_s[(1, 1)].re]
    }

    pub fn conditional(&self, k: usize) -> &CMatrix {
        match k {
            0 => &self.h_k0,
            1 => &self.h_k1,
            _ => panic!("qubit level {k} out of range"),
        }
    }

    pub fn coupling_operator(&self, k: usize) -> (&CMatrix, f64) {
        match k {
            0 => (&self.v0, self.g0),
            1 => (&self.v1, self.g1),
            _ => panic!("qubit level {k} out of range"),
        }
    }

    /// `H_S ⊗ I`
    pub fn h_s_embedded(&self) -> CMatrix {
        kron(&self.h_s, &CMatrix::identity(self.env_dim()))
    }

    /// `I ⊗ H_E`
    pub fn h_e_embedded(&self) -> CMatrix {
        kron(&pauli::identity(), &self.h_e)
    }

    /// `‖[H_S⊗I, H_I]‖∞`, zero for a pure-dephasing coupling.
    pub fn pure_dephasing_defect(&self) -> f64 {
        commutator(&self.h_s_embedded(), &self.h_i).max_abs()
    }

    /// `‖H_total − (H_S⊗I + I⊗H_E + H_I)‖∞`
    pub fn assembly_defect(&self) -> f64 {
        let parts = &(&self.h_s_embedded() + &self.h_e_embedded()) + &self.h_i;
        self.h_total.max_abs_diff(&parts)
    }
}

/// `Σ_j op_j` over all ring sites.
pub fn collective(op: &CMatrix, n: usize) -> CMatrix {
    let d = 1 << n;
    (0..n).fold(CMatrix::zeros(d, d), |acc, j| &acc + &pauli::on_site(op, j, n))
}

/// `−J_z Σ_j σz_j σz_{j+1} − h_z Σ_j σz_j` with `σ_{N+1} = σ_1`.
///
/// The periodic sum is taken literally for every `N`: for `N = 1` the bond term is `−J_z·I`,
/// and for `N = 2` the single physical bond appears twice.
pub fn ising_ring(n: usize, j_z: f64, h_z: f64) -> CMatrix {
    let d = 1 << n;
    let z: Vec<CMatrix> = (0..n).map(|j| pauli::on_site(&pauli::z(), j, n)).collect();
    let mut h = CMatrix::zeros(d, d);
    for j in 0..n {
        let bond = &z[j] * &z[(j + 1) % n];
        h = &h + &bond.scale_real(-j_z);
        h = &h + &z[j].scale_real(-h_z);
    }
    h
}

/// Builds the full operator set: Ising ring bath, `V_0 = Σσx_j`, `V_1 = Σσy_j`,
/// `H_I = |0⟩⟨0|⊗g_0V_0 + |1⟩⟨1|⊗g_1V_1`.
pub fn build_hamiltonians(p: &ModelParams) -> Result<HamiltonianSet> {
    p.validate()?;
    let n = p.n_spins;
    HamiltonianSet::from_parts(
        [p.eps0, p.eps1],
        ising_ring(n, p.j_z, p.h_z),
        collective(&pauli::x(), n),
        collective(&pauli::y(), n),
        p.g0,
        p.g1,
    )
}

/// `e^{−βH_E}/Z_E`, with the ground energy shifted out before exponentiating.
pub fn gibbs_state(h_e: &CMatrix, beta: f64) -> Result<DensityMatrix> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::InvalidParams {
            field: "beta",
            reason: "must be positive and finite",
        });
    }
    let eig = eigh(h_e)?;
    let ground = eig.eigenvalues().first().copied().unwrap_or(0.0);
    let boltzmann = |l: f64| libm::exp(-beta * (l - ground));
    let z: f64 = eig.eigenvalues().iter().map(|&l| boltzmann(l)).sum();
    let rho = eig.map_spectrum(|l| Complex64::new(boltzmann(l) / z, 0.0));
    Ok(DensityMatrix::from_trusted(rho, Basis::Environment))
}

pub fn initial_qubit_state(p: &ModelParams) -> DensityMatrix {
    let rho = match p.initial_qubit {
        // exact halves rather than (1/√2)² rounding
        InitialQubit::Plus | InitialQubit::Minus => {
            let off = if p.initial_qubit == InitialQubit::Plus {
                0.5
            } else {
                -0.5
            };
            CMatrix::from_fn(2, 2, |i, j| Complex64::new(if i == j { 0.5 } else { off }, 0.0))
        }
        InitialQubit::Custom { .. } => {
            let psi = p.initial_qubit.amplitudes();
            CMatrix::from_fn(2, 2, |i, j| psi[i] * psi[j].conj())
        }
    };
    DensityMatrix::from_trusted(rho, Basis::System)
}

/// Whether `[H_E, H_k] ≠ 0` for `k = 0, 1`, judged against `1e-10·‖H_E‖∞·‖H_k‖∞`.
pub fn check_dissipation_condition(hs: &HamiltonianSet) -> [bool; 2] {
    [0, 1].map(|k| {
        let hk = hs.conditional(k);
        let scale = hs.h_e.max_abs() * hk.max_abs();
        commutator(&hs.h_e, hk).max_abs() > 1e-10 * scale
    })
}

/// `ρ_S ⊗ ρ_E`.
pub fn product_state(rho_s: &DensityMatrix, rho_e: &DensityMatrix) -> DensityMatrix {
    DensityMatrix::from_trusted(kron(rho_s.matrix(), rho_e.matrix()), Basis::Joint)
}
