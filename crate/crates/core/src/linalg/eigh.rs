//! Cyclic Jacobi eigensolver for complex Hermitian matrices.

use alloc::vec::Vec;

use num_complex::Complex64;

use super::{CMatrix, ZERO};
use crate::error::{Error, Result};

/// Absolute tolerance on `‖H − H†‖∞` accepted as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;

pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Converged once the off-diagonal Frobenius norm drops below this fraction of `‖H‖_F`.
const OFF_DIAGONAL_RTOL: f64 = 1e-13;

/// Spectral decomposition `H = V·diag(λ)·V†` with eigenvalues ascending and orthonormal
/// eigenvectors stored as the columns of `V`.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: CMatrix,
}

impl EigenDecomposition {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &CMatrix {
        &self.eigenvectors
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `V·diag(f(λ))·V†`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> Complex64) -> CMatrix {
        let weights: Vec<Complex64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        self.eigenvectors
            .scale_columns(&weights)
            .mul_adjoint(&self.eigenvectors)
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.map_spectrum(|l| Complex64::new(l, 0.0))
    }

    /// `exp(−i·H·t)`; exactly the identity at `t = 0`.
    pub fn propagator(&self, t: f64) -> CMatrix {
        if t == 0.0 {
            return CMatrix::identity(self.dim());
        }
        self.map_spectrum(|l| {
            let phase = -l * t;
            Complex64::new(libm::cos(phase), libm::sin(phase))
        })
    }

    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.iter().map(|l| l.abs()).fold(0.0, f64::max)
    }
}

fn off_diagonal_norm(a: &[Complex64], n: usize) -> f64 {
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[i * n + j].norm_sqr();
            }
        }
    }
    libm::sqrt(acc)
}

/// Diagonalizes a Hermitian matrix by cyclic Jacobi sweeps.
///
/// Each rotation first strips the phase of the pivot `a_pq` and then applies the real
/// symmetric Jacobi rotation, so the diagonal stays exactly real throughout.
pub fn eigh(h: &CMatrix) -> Result<EigenDecomposition> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch {
            expected: "square matrix",
            found: h.cols(),
        });
    }
    let defect = h.hermiticity_defect();
    if defect > HERMITIAN_TOL {
        return Err(Error::NotHermitian { defect });
    }
    let n = h.rows();
    let sym = (h + &h.adjoint()).scale_real(0.5);
    let mut a: Vec<Complex64> = sym.as_slice().to_vec();
    for i in 0..n {
        a[i * n + i].im = 0.0;
    }
    let mut v: Vec<Complex64> = CMatrix::identity(n).as_slice().to_vec();

    let scale = sym.frobenius_norm();
    let target = OFF_DIAGONAL_RTOL * scale;
    // Pivots this small contribute nothing measurable to the off-diagonal norm.
    let skip = 1e-300_f64.max(1e-18 * scale / (n.max(1) as f64));

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&a, n);
        if off <= target {
            break;
        }
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off_norm: off,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, n, p, q, skip);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].re.total_cmp(&a[j * n + j].re));
    let eigenvalues = order.iter().map(|&i| a[i * n + i].re).collect();
    let eigenvectors = CMatrix::from_fn(n, n, |row, col| v[row * n + order[col]]);
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

fn rotate(a: &mut [Complex64], v: &mut [Complex64], n: usize, p: usize, q: usize, skip: f64) {
    let apq = a[p * n + q];
    let r = apq.norm();
    if r <= skip {
        return;
    }
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;
    // e^{-iφ} where a_pq = r·e^{iφ}
    let phase_conj = apq.conj() / r;

    let tau = (aqq - app) / (2.0 * r);
    let t = if tau == 0.0 {
        1.0
    } else {
        tau.signum() / (tau.abs() + libm::hypot(1.0, tau))
    };
    let cs = 1.0 / libm::hypot(1.0, t);
    let sn = t * cs;

    for i in 0..n {
        if i == p || i == q {
            continue;
        }
        let aip = a[i * n + p];
        let aiq = a[i * n + q];
        let new_ip = aip * cs - aiq * phase_conj * sn;
        let new_iq = aip * sn + aiq * phase_conj * cs;
        a[i * n + p] = new_ip;
        a[i * n + q] = new_iq;
        a[p * n + i] = new_ip.conj();
        a[q * n + i] = new_iq.conj();
    }
    a[p * n + p] = Complex64::new(app - t * r, 0.0);
    a[q * n + q] = Complex64::new(aqq + t * r, 0.0);
    a[p * n + q] = ZERO;
    a[q * n + p] = ZERO;

    for i in 0..n {
        let vip = v[i * n + p];
        let viq = v[i * n + q];
        v[i * n + p] = vip * cs - viq * phase_conj * sn;
        v[i * n + q] = vip * sn + viq * phase_conj * cs;
    }
}
