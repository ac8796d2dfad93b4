//! Dense complex linear algebra sized for small spin systems (dimension up to a few hundred).
//!
//! Everything here is a pure function of its inputs. Matrices are stored row-major as
//! [`Complex64`] and all operator-valued quantities of the crate live in a [`CMatrix`].

mod eigh;

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use eigh::{eigh, EigenDecomposition, HERMITIAN_TOL, JACOBI_MAX_SWEEPS};

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        m
    }

    /// Builds a matrix from row-major entries. Rejects a wrong entry count and non-finite values.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: "rows * cols entries",
                found: data.len(),
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_diag(diag: &[Complex64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = d;
        }
        m
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = Complex64::new(d, 0.0);
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        let n = self.rows.min(self.cols);
        (0..n).map(|i| self.data[i * self.cols + i]).collect()
    }

    /// Real parts of the diagonal.
    pub fn real_diagonal(&self) -> Vec<f64> {
        self.diagonal().into_iter().map(|z| z.re).collect()
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.data[i * self.cols + j].conj();
            }
        }
        out
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * factor).collect(),
        }
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(Complex64::new(factor, 0.0))
    }

    pub fn trace(&self) -> Complex64 {
        self.diagonal().into_iter().sum()
    }

    /// Largest entry modulus, the `‖·‖∞` used for every tolerance in this crate.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        libm::sqrt(self.data.iter().map(|z| z.norm_sqr()).sum::<f64>())
    }

    /// `max |A - A†|`; infinite for non-square input.
    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                let d = (self.data[i * n + j] - self.data[j * n + i].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    /// Max entry modulus of `self - other`. Panics on shape mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.assert_same_shape(other);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `self · other†` without materializing the adjoint twice.
    pub fn mul_adjoint(&self, other: &Self) -> Self {
        matmul(self, &other.adjoint())
    }

    /// `tr(self · other)` in O(n²).
    pub fn trace_product(&self, other: &Self) -> Complex64 {
        assert!(
            self.cols == other.rows && self.rows == other.cols,
            "trace_product shape mismatch: {}x{} vs {}x{}",
            self.rows,
            self.cols,
            other.rows,
            other.cols
        );
        let mut acc = ZERO;
        for i in 0..self.rows {
            for k in 0..self.cols {
                acc += self.data[i * self.cols + k] * other.data[k * other.cols + i];
            }
        }
        acc
    }

    /// Multiplies column `j` by `diag[j]`, i.e. `self · diag(diag)`.
    pub fn scale_columns(&self, diag: &[Complex64]) -> Self {
        assert_eq!(diag.len(), self.cols, "scale_columns length mismatch");
        let mut out = self.clone();
        for row in out.data.chunks_exact_mut(self.cols) {
            for (z, d) in row.iter_mut().zip(diag) {
                *z *= d;
            }
        }
        out
    }

    /// Returns the diagonal if every off-diagonal entry is exactly zero.
    pub fn as_exact_diagonal(&self) -> Option<Vec<Complex64>> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        for i in 0..n {
            for j in 0..n {
                if i != j && self.data[i * n + j] != ZERO {
                    return None;
                }
            }
        }
        Some(self.diagonal())
    }

    fn assert_same_shape(&self, other: &Self) {
        assert!(
            self.rows == other.rows && self.cols == other.cols,
            "shape mismatch: {}x{} vs {}x{}",
            self.rows,
            self.cols,
            other.rows,
            other.cols
        );
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;

    fn add(self, rhs: &CMatrix) -> CMatrix {
        self.assert_same_shape(rhs);
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;

    fn sub(self, rhs: &CMatrix) -> CMatrix {
        self.assert_same_shape(rhs);
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;

    fn mul(self, rhs: &CMatrix) -> CMatrix {
        matmul(self, rhs)
    }
}

/// Matrix product. The right factor is split into real and imaginary planes so the inner
/// loop is a pair of real axpys, which vectorizes far better than interleaved complex data.
/// Zero entries of the left factor are skipped, which keeps Pauli-string products cheap.
fn matmul(a: &CMatrix, b: &CMatrix) -> CMatrix {
    assert_eq!(
        a.cols, b.rows,
        "matmul shape mismatch: {}x{} * {}x{}",
        a.rows, a.cols, b.rows, b.cols
    );
    let (n, inner, m) = (a.rows, a.cols, b.cols);
    let b_re: Vec<f64> = b.data.iter().map(|z| z.re).collect();
    let b_im: Vec<f64> = b.data.iter().map(|z| z.im).collect();
    let mut c_re = vec![0.0; m];
    let mut c_im = vec![0.0; m];
    let mut out = Vec::with_capacity(n * m);
    for i in 0..n {
        c_re.iter_mut().for_each(|x| *x = 0.0);
        c_im.iter_mut().for_each(|x| *x = 0.0);
        for p in 0..inner {
            let x = a.data[i * inner + p];
            if x == ZERO {
                continue;
            }
            let br = &b_re[p * m..(p + 1) * m];
            let bi = &b_im[p * m..(p + 1) * m];
            for (((cr, ci), &yr), &yi) in c_re.iter_mut().zip(c_im.iter_mut()).zip(br).zip(bi) {
                *cr += x.re * yr - x.im * yi;
                *ci += x.re * yi + x.im * yr;
            }
        }
        out.extend(c_re.iter().zip(&c_im).map(|(&r, &im)| Complex64::new(r, im)));
    }
    CMatrix {
        rows: n,
        cols: m,
        data: out,
    }
}

/// `[a, b] = ab - ba`.
pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    &(a * b) - &(b * a)
}

/// Kronecker product `a ⊗ b`, with `(a⊗b)[i·rb+k, j·cb+l] = a[i,j]·b[k,l]`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ra, ca, rb, cb) = (a.rows, a.cols, b.rows, b.cols);
    let mut out = CMatrix::zeros(ra * rb, ca * cb);
    let width = ca * cb;
    for i in 0..ra {
        for j in 0..ca {
            let x = a.data[i * ca + j];
            if x == ZERO {
                continue;
            }
            for k in 0..rb {
                let row = (i * rb + k) * width + j * cb;
                for l in 0..cb {
                    out.data[row + l] = x * b.data[k * cb + l];
                }
            }
        }
    }
    out
}

/// `exp(-i·h·t)` through the Hermitian eigendecomposition of `h`.
pub fn expm_unitary(h: &CMatrix, t: f64) -> Result<CMatrix> {
    Ok(eigh(h)?.propagator(t))
}

fn check_bipartite(m: &CMatrix, dim_s: usize, dim_e: usize) -> Result<()> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            expected: "square matrix",
            found: m.cols,
        });
    }
    if m.rows != dim_s * dim_e {
        return Err(Error::DimensionMismatch {
            expected: "dim_s * dim_e rows",
            found: m.rows,
        });
    }
    Ok(())
}

/// Traces out the second (environment) factor of a `dim_s·dim_e` operator.
pub fn partial_trace_env(m: &CMatrix, dim_s: usize, dim_e: usize) -> Result<CMatrix> {
    check_bipartite(m, dim_s, dim_e)?;
    let n = m.rows;
    Ok(CMatrix::from_fn(dim_s, dim_s, |i, j| {
        (0..dim_e)
            .map(|e| m.data[(i * dim_e + e) * n + j * dim_e + e])
            .sum()
    }))
}

/// Traces out the first (system) factor of a `dim_s·dim_e` operator.
pub fn partial_trace_sys(m: &CMatrix, dim_s: usize, dim_e: usize) -> Result<CMatrix> {
    check_bipartite(m, dim_s, dim_e)?;
    let n = m.rows;
    Ok(CMatrix::from_fn(dim_e, dim_e, |a, b| {
        (0..dim_s)
            .map(|s| m.data[(s * dim_e + a) * n + s * dim_e + b])
            .sum()
    }))
}

/// Trace norm `tr √(M†M)`: the sum of |eigenvalues| for Hermitian input, otherwise the sum
/// of singular values taken from the spectrum of `M†M`.
pub fn trace_norm(m: &CMatrix) -> Result<f64> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            expected: "square matrix",
            found: m.cols,
        });
    }
    if m.is_hermitian(HERMITIAN_TOL) {
        let eig = eigh(m)?;
        Ok(eig.eigenvalues().iter().map(|l| l.abs()).sum())
    } else {
        let gram = &m.adjoint() * m;
        let eig = eigh(&gram)?;
        Ok(eig.eigenvalues().iter().map(|&l| libm::sqrt(l.max(0.0))).sum())
    }
}

/// Pauli matrices in the `σz|0⟩ = |0⟩` convention.
pub mod pauli {
    use super::*;

    pub fn identity() -> CMatrix {
        CMatrix::identity(2)
    }

    pub fn x() -> CMatrix {
        CMatrix::from_fn(2, 2, |i, j| if i != j { ONE } else { ZERO })
    }

    pub fn y() -> CMatrix {
        let i = Complex64::new(0.0, 1.0);
        CMatrix::from_fn(2, 2, |r, c| match (r, c) {
            (0, 1) => -i,
            (1, 0) => i,
            _ => ZERO,
        })
    }

    pub fn z() -> CMatrix {
        CMatrix::from_real_diag(&[1.0, -1.0])
    }

    /// `op` acting on `site` of an `n`-site register (site 0 is the most significant factor).
    pub fn on_site(op: &CMatrix, site: usize, n: usize) -> CMatrix {
        assert!(site < n, "site {site} out of range for {n} sites");
        let id = identity();
        let mut acc = CMatrix::identity(1);
        for j in 0..n {
            acc = kron(&acc, if j == site { op } else { &id });
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_matrix(rng: &mut impl Rng, r: usize, cols: usize) -> CMatrix {
        CMatrix::from_fn(r, cols, |_, _| {
            c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        })
    }

    #[test]
    fn from_vec_validates() {
        assert!(matches!(
            CMatrix::from_vec(2, 2, vec![ONE; 3]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert_eq!(
            CMatrix::from_vec(1, 1, vec![c(f64::NAN, 0.0)]),
            Err(Error::NonFinite)
        );
    }

    #[test]
    fn kron_identities() {
        assert_eq!(
            kron(&CMatrix::identity(2), &CMatrix::identity(2)),
            CMatrix::identity(4)
        );
        assert_eq!(
            kron(&pauli::z(), &CMatrix::identity(2)),
            CMatrix::from_real_diag(&[1.0, 1.0, -1.0, -1.0])
        );
    }

    #[test]
    fn kron_matches_index_arithmetic() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let pairs = [
            (pauli::x(), pauli::y()),
            (random_matrix(&mut rng, 2, 3), random_matrix(&mut rng, 3, 2)),
        ];
        for (a, b) in &pairs {
            let k = kron(a, b);
            assert_eq!((k.rows(), k.cols()), (a.rows() * b.rows(), a.cols() * b.cols()));
            for i in 0..a.rows() {
                for j in 0..a.cols() {
                    for p in 0..b.rows() {
                        for q in 0..b.cols() {
                            assert_eq!(k[(i * b.rows() + p, j * b.cols() + q)], a[(i, j)] * b[(p, q)]);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn matmul_against_naive_triple_loop() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = random_matrix(&mut rng, 5, 7);
        let b = random_matrix(&mut rng, 7, 3);
        let p = &a * &b;
        for i in 0..5 {
            for j in 0..3 {
                let expect: Complex64 = (0..7).map(|k| a[(i, k)] * b[(k, j)]).sum();
                assert_abs_diff_eq!((p[(i, j)] - expect).norm(), 0.0, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn expm_unitary_basics() {
        let u0 = expm_unitary(&pauli::x(), 0.0).unwrap();
        assert!(u0.max_abs_diff(&CMatrix::identity(2)) < 1e-15);

        let half_pi = core::f64::consts::FRAC_PI_2;
        let u = expm_unitary(&pauli::z(), half_pi).unwrap();
        let expect = CMatrix::from_diag(&[c(0.0, -1.0), c(0.0, 1.0)]);
        assert!(u.max_abs_diff(&expect) < 1e-15);
    }

    #[test]
    fn partial_trace_of_product_and_bell_state() {
        let rho_s =
            CMatrix::from_vec(2, 2, vec![c(0.7, 0.0), c(0.1, 0.2), c(0.1, -0.2), c(0.3, 0.0)]).unwrap();
        let rho_e = CMatrix::from_real_diag(&[0.25, 0.5, 0.125, 0.125]);
        let joint = kron(&rho_s, &rho_e);
        assert!(partial_trace_env(&joint, 2, 4).unwrap().max_abs_diff(&rho_s) < 1e-15);
        assert!(partial_trace_sys(&joint, 2, 4).unwrap().max_abs_diff(&rho_e) < 1e-15);

        let h = 0.5;
        let bell = CMatrix::from_fn(4, 4, |i, j| {
            if (i == 0 || i == 3) && (j == 0 || j == 3) {
                c(h, 0.0)
            } else {
                ZERO
            }
        });
        let reduced = partial_trace_env(&bell, 2, 2).unwrap();
        assert!(reduced.max_abs_diff(&CMatrix::identity(2).scale_real(0.5)) < 1e-15);
    }

    #[test]
    fn partial_trace_rejects_bad_dimensions() {
        let m = CMatrix::identity(6);
        assert!(matches!(
            partial_trace_env(&m, 2, 4),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            partial_trace_sys(&CMatrix::zeros(4, 2), 2, 2),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn trace_norm_simple_cases() {
        assert_abs_diff_eq!(trace_norm(&pauli::z()).unwrap(), 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(trace_norm(&CMatrix::zeros(3, 3)).unwrap(), 0.0);
        // Non-Hermitian: singular values of [[0,2],[0,0]] are (2,0).
        let m = CMatrix::from_vec(2, 2, vec![ZERO, c(2.0, 0.0), ZERO, ZERO]).unwrap();
        assert_abs_diff_eq!(trace_norm(&m).unwrap(), 2.0, epsilon = 1e-14);
    }

    #[test]
    fn trace_norm_of_dephased_pair_is_twice_gamma() {
        // ρ± = ½[[1, ±Γ],[±Γ*, 1]]; the difference has eigenvalues ±|Γ|.
        for &gamma in &[c(0.3, 0.4), c(-0.9, 0.1), ZERO, c(0.0, -1.0)] {
            let plus = CMatrix::from_vec(
                2,
                2,
                vec![c(0.5, 0.0), gamma * 0.5, gamma.conj() * 0.5, c(0.5, 0.0)],
            )
            .unwrap();
            let minus = CMatrix::from_vec(
                2,
                2,
                vec![c(0.5, 0.0), -gamma * 0.5, -gamma.conj() * 0.5, c(0.5, 0.0)],
            )
            .unwrap();
            assert_abs_diff_eq!(
                trace_norm(&(&plus - &minus)).unwrap(),
                2.0 * gamma.norm(),
                epsilon = 1e-14
            );
        }
    }

    #[test]
    fn pauli_on_site_ordering() {
        // σz on site 0 of two sites: diag(1,1,-1,-1).
        let z0 = pauli::on_site(&pauli::z(), 0, 2);
        assert_eq!(z0, CMatrix::from_real_diag(&[1.0, 1.0, -1.0, -1.0]));
        let z1 = pauli::on_site(&pauli::z(), 1, 2);
        assert_eq!(z1, CMatrix::from_real_diag(&[1.0, -1.0, 1.0, -1.0]));
    }
}
