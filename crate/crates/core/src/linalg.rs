//! Dense complex matrices and the Hermitian spectral machinery everything
//! else is built on: eigendecomposition, support-respecting fractional
//! powers, entropies, Kronecker products and partial traces.

use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative tolerance for Hermiticity gates.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Eigenvalues down to `-NEGATIVITY_TOL` are treated as numerical zeros.
pub const NEGATIVITY_TOL: f64 = 1e-12;
/// Eigenvalues at or below this (relative to the spectral scale) are off the support.
pub const SUPPORT_TOL: f64 = 1e-12;

const EIG_EPS: f64 = 1e-15;
const EIG_MAX_ITER: usize = 10_000;

pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Square dense complex matrix with finite entries.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix(DMatrix<Complex64>);

impl ComplexMatrix {
    pub fn new(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() == 0 {
            return Err(Error::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(ComplexMatrix(m))
    }

    pub(crate) fn from_dmatrix_unchecked(m: DMatrix<Complex64>) -> Self {
        debug_assert_eq!(m.nrows(), m.ncols());
        ComplexMatrix(m)
    }

    /// Builds a `dim x dim` matrix from row-major entries.
    pub fn from_row_major(dim: usize, entries: &[Complex64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimMismatch {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        Self::new(DMatrix::from_row_slice(dim, dim, entries))
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> Complex64) -> Self {
        ComplexMatrix(DMatrix::from_fn(dim, dim, f))
    }

    pub fn zeros(dim: usize) -> Self {
        ComplexMatrix(DMatrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        ComplexMatrix(DMatrix::identity(dim, dim))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, |i, j| if i == j { c64(diag[i], 0.0) } else { c64(0.0, 0.0) })
    }

    /// `|v><w|`
    pub fn outer(v: &[Complex64], w: &[Complex64]) -> Self {
        assert_eq!(v.len(), w.len());
        Self::from_fn(v.len(), |i, j| v[i] * w[j].conj())
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_dmatrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_dmatrix(self) -> DMatrix<Complex64> {
        self.0
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.0[(i, j)]
    }

    pub fn adjoint(&self) -> Self {
        ComplexMatrix(self.0.adjoint())
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        ComplexMatrix(&self.0 * s)
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(c64(s, 0.0))
    }

    /// `tr(self * other)` without forming the product.
    pub fn trace_product(&self, other: &ComplexMatrix) -> Complex64 {
        let n = self.dim();
        let mut acc = c64(0.0, 0.0);
        for i in 0..n {
            for k in 0..n {
                acc += self.0[(i, k)] * other.0[(k, i)];
            }
        }
        acc
    }

    /// `U * self * U^dagger`
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Self {
        ComplexMatrix(&u.0 * &self.0 * u.0.adjoint())
    }

    /// `||A - A^dagger||_F / max(1, ||A||_F)`
    pub fn hermitian_defect(&self) -> f64 {
        let d = (&self.0 - self.0.adjoint())
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt();
        d / self.frobenius_norm().max(1.0)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_defect() <= tol
    }

    /// `||U^dagger U - 1||_F`
    pub fn unitary_defect(&self) -> f64 {
        let n = self.dim();
        (self.0.adjoint() * &self.0 - DMatrix::<Complex64>::identity(n, n))
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitary_defect() <= tol
    }

    /// Column `j` as a vector.
    pub fn column(&self, j: usize) -> Vec<Complex64> {
        self.0.column(j).iter().copied().collect()
    }

    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub eigenvalues: Vec<f64>,
    /// Eigenvectors as columns, in the order of `eigenvalues`.
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let diag = ComplexMatrix::from_real_diagonal(&self.eigenvalues);
        diag.conjugate_by(&self.eigenvectors)
    }
}

pub fn hermitian_eig(a: &ComplexMatrix) -> Result<HermitianEigen> {
    let defect = a.hermitian_defect();
    if defect > HERMITIAN_TOL {
        return Err(Error::NotHermitian { defect });
    }
    // The gate above bounds the anti-Hermitian part; the solver only reads one triangle.
    let sym = (&a.0 + a.0.adjoint()) * c64(0.5, 0.0);
    let eig = SymmetricEigen::try_new(sym, EIG_EPS, EIG_MAX_ITER).ok_or(Error::NoConvergence)?;
    let n = a.dim();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(HermitianEigen {
        eigenvalues,
        eigenvectors: ComplexMatrix(vecs),
    })
}

pub fn max_eigenvalue(h: &ComplexMatrix) -> Result<f64> {
    let eig = hermitian_eig(h)?;
    Ok(*eig.eigenvalues.last().expect("non-empty spectrum"))
}

/// `x^kappa` with the support convention `0^kappa = 0` for every `kappa`, including 0.
pub fn support_pow(x: f64, kappa: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x.powf(kappa)
    }
}

/// Spectral factorization of a positive semidefinite matrix, with
/// near-zero eigenvalues snapped to exactly zero.
#[derive(Clone, Debug)]
pub struct PsdSpectrum {
    eigenvalues: Vec<f64>,
    eigenvectors: ComplexMatrix,
}

impl PsdSpectrum {
    pub fn new(a: &ComplexMatrix) -> Result<Self> {
        let eig = hermitian_eig(a)?;
        let scale = eig
            .eigenvalues
            .iter()
            .fold(1.0_f64, |m, &l| m.max(l.abs()));
        let min = eig.eigenvalues[0];
        if min < -NEGATIVITY_TOL * scale {
            return Err(Error::NotPositive { eigenvalue: min });
        }
        let eigenvalues = eig
            .eigenvalues
            .iter()
            .map(|&l| if l <= SUPPORT_TOL * scale { 0.0 } else { l })
            .collect();
        Ok(PsdSpectrum {
            eigenvalues,
            eigenvectors: eig.eigenvectors,
        })
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &ComplexMatrix {
        &self.eigenvectors
    }

    pub fn rank(&self) -> usize {
        self.eigenvalues.iter().filter(|&&l| l > 0.0).count()
    }

    /// `sum_i lambda_i^kappa v_i v_i^dagger` over the support.
    pub fn power(&self, kappa: f64) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors.0;
        let weights: Vec<f64> = self
            .eigenvalues
            .iter()
            .map(|&l| support_pow(l, kappa))
            .collect();
        ComplexMatrix::from_fn(n, |i, j| {
            let mut acc = c64(0.0, 0.0);
            for (k, &w) in weights.iter().enumerate() {
                if w != 0.0 {
                    acc += v[(i, k)] * v[(j, k)].conj() * w;
                }
            }
            acc
        })
    }

    pub fn trace_power(&self, kappa: f64) -> f64 {
        self.eigenvalues.iter().map(|&l| support_pow(l, kappa)).sum()
    }

    pub fn entropy_bits(&self) -> f64 {
        shannon_entropy(&self.eigenvalues)
    }
}

/// `rho^kappa` for positive semidefinite `rho` and `kappa` in `[0, 1]`,
/// with `rho^0` the support projector.
pub fn fractional_power(rho: &ComplexMatrix, kappa: f64) -> Result<ComplexMatrix> {
    if !(-1e-12..=1.0 + 1e-12).contains(&kappa) {
        return Err(Error::out_of_range("kappa", kappa, "[0, 1]"));
    }
    Ok(PsdSpectrum::new(rho)?.power(kappa.clamp(0.0, 1.0)))
}

/// Explicit 2x2 formula for the power of the qubit state with Bloch vector `r`.
pub fn qubit_power_closed_form(r: [f64; 3], kappa: f64) -> Result<ComplexMatrix> {
    let [r1, r2, r3] = r;
    let norm = (r1 * r1 + r2 * r2 + r3 * r3).sqrt();
    if norm < 1e-14 {
        return Err(Error::ZeroBloch);
    }
    if norm > 1.0 + 1e-12 {
        return Err(Error::BlochOutOfBall { r });
    }
    let l1 = support_pow((1.0 - norm) / 2.0, kappa);
    let l2 = support_pow((1.0 + norm) / 2.0, kappa);
    let mean = (l1 + l2) / 2.0;
    let diag_shift = r3 * (l2 - l1) / (2.0 * norm);
    let off = (l1 - l2) / (2.0 * norm);
    ComplexMatrix::from_row_major(
        2,
        &[
            c64(mean + diag_shift, 0.0),
            c64(-r1, r2) * off,
            c64(-r1, -r2) * off,
            c64(mean - diag_shift, 0.0),
        ],
    )
}

/// `-sum p log2 p` with `0 log 0 = 0`.
pub fn shannon_entropy(probs: &[f64]) -> f64 {
    probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum()
}

/// Von Neumann entropy in bits of a positive semidefinite, unit-trace matrix.
pub fn von_neumann_entropy(rho: &ComplexMatrix) -> Result<f64> {
    Ok(PsdSpectrum::new(rho)?.entropy_bits())
}

pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(-1e-12..=1.0 + 1e-12).contains(&p) {
        return Err(Error::out_of_range("p", p, "[0, 1]"));
    }
    let p = p.clamp(0.0, 1.0);
    Ok(shannon_entropy(&[p, 1.0 - p]))
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix(a.0.kronecker(&b.0))
}

/// Which tensor factor of `A (x) B` a partial trace keeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Keep {
    A,
    B,
}

/// Partial trace over one factor of `A (x) B`, with basis index `a * dim_b + b`.
pub fn partial_trace(w: &ComplexMatrix, dims: (usize, usize), keep: Keep) -> Result<ComplexMatrix> {
    let (da, db) = dims;
    if w.dim() != da * db {
        return Err(Error::DimMismatch {
            expected: da * db,
            got: w.dim(),
        });
    }
    let m = &w.0;
    Ok(match keep {
        Keep::A => ComplexMatrix::from_fn(da, |i, j| {
            (0..db).map(|k| m[(i * db + k, j * db + k)]).sum()
        }),
        Keep::B => ComplexMatrix::from_fn(db, |i, j| {
            (0..da).map(|k| m[(k * db + i, k * db + j)]).sum()
        }),
    })
}

/// Pauli matrices `sigma_1, sigma_2, sigma_3`.
pub fn pauli() -> [ComplexMatrix; 3] {
    let z = c64(0.0, 0.0);
    let one = c64(1.0, 0.0);
    let i = c64(0.0, 1.0);
    [
        ComplexMatrix::from_fn(2, |r, c| if r != c { one } else { z }),
        ComplexMatrix::from_fn(2, |r, c| match (r, c) {
            (0, 1) => -i,
            (1, 0) => i,
            _ => z,
        }),
        ComplexMatrix::from_real_diagonal(&[1.0, -1.0]),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn bloch_state(r: [f64; 3]) -> ComplexMatrix {
        let [s1, s2, s3] = pauli();
        let mut m = ComplexMatrix::identity(2);
        m = &m + &s1.scale_real(r[0]);
        m = &m + &s2.scale_real(r[1]);
        m = &m + &s3.scale_real(r[2]);
        m.scale_real(0.5)
    }

    #[test]
    fn eig_of_identity_and_diagonal() {
        let e = hermitian_eig(&ComplexMatrix::identity(2)).unwrap();
        assert_abs_diff_eq!(e.eigenvalues[0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(e.eigenvalues[1], 1.0, epsilon = 1e-14);

        let e = hermitian_eig(&ComplexMatrix::from_real_diagonal(&[0.75, 0.25])).unwrap();
        assert_abs_diff_eq!(e.eigenvalues[0], 0.25, epsilon = 1e-14);
        assert_abs_diff_eq!(e.eigenvalues[1], 0.75, epsilon = 1e-14);
    }

    #[test]
    fn eig_of_bloch_state_along_z() {
        let r3 = 0.6;
        let e = hermitian_eig(&bloch_state([0.0, 0.0, r3])).unwrap();
        assert_abs_diff_eq!(e.eigenvalues[0], (1.0 - r3) / 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(e.eigenvalues[1], (1.0 + r3) / 2.0, epsilon = 1e-14);
        assert!(e.reconstruct().max_abs_diff(&bloch_state([0.0, 0.0, r3])) < 1e-12);
        assert!(e.eigenvectors.is_unitary(1e-10));
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let m = ComplexMatrix::from_row_major(
            2,
            &[c64(1.0, 0.0), c64(1.0, 0.0), c64(0.0, 0.0), c64(1.0, 0.0)],
        )
        .unwrap();
        assert!(matches!(hermitian_eig(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn power_of_maximally_mixed_qubit() {
        let half = ComplexMatrix::identity(2).scale_real(0.5);
        for &k in &[0.0, 0.3, 0.5, 1.0] {
            let p = fractional_power(&half, k).unwrap();
            let expect = ComplexMatrix::identity(2).scale_real(2f64.powf(-k));
            assert!(p.max_abs_diff(&expect) < 1e-14, "kappa {k}");
        }
    }

    #[test]
    fn zeroth_power_is_support_projector() {
        let proj = ComplexMatrix::from_real_diagonal(&[1.0, 0.0]);
        let p = fractional_power(&proj, 0.0).unwrap();
        assert!(p.max_abs_diff(&proj) < 1e-14);
    }

    #[test]
    fn power_rejects_negative_matrix() {
        let m = ComplexMatrix::from_real_diagonal(&[1.1, -0.1]);
        assert!(matches!(
            fractional_power(&m, 0.5),
            Err(Error::NotPositive { .. })
        ));
    }

    #[test]
    fn qubit_closed_form_matches_spectral_power() {
        for (r, k) in [
            ([0.0, 0.0, 1.0], 0.5),
            ([0.3, -0.2, 0.5], 0.37),
            ([0.1, 0.7, -0.4], 0.0),
            ([0.9, 0.0, 0.0], 0.83),
        ] {
            let closed = qubit_power_closed_form(r, k).unwrap();
            let spectral = fractional_power(&bloch_state(r), k).unwrap();
            assert!(closed.max_abs_diff(&spectral) < 1e-12, "r {r:?} kappa {k}");
        }
    }

    #[test]
    fn qubit_closed_form_at_unit_power_is_the_state() {
        let closed = qubit_power_closed_form([1.0, 0.0, 0.0], 1.0).unwrap();
        assert!(closed.max_abs_diff(&bloch_state([1.0, 0.0, 0.0])) < 1e-14);
        assert_eq!(
            qubit_power_closed_form([0.0, 0.0, 0.0], 0.5),
            Err(Error::ZeroBloch)
        );
    }

    #[test]
    fn entropies() {
        assert_abs_diff_eq!(binary_entropy(0.5).unwrap(), 1.0, epsilon = 1e-15);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        // -(1/4)log2(1/4) - (3/4)log2(3/4) = 2 - (3/4) log2 3
        assert_abs_diff_eq!(
            binary_entropy(0.25).unwrap(),
            0.811_278_124_459_132_8,
            epsilon = 1e-15
        );
        assert!(binary_entropy(1.5).is_err());
        let mixed = ComplexMatrix::identity(4).scale_real(0.25);
        assert_abs_diff_eq!(von_neumann_entropy(&mixed).unwrap(), 2.0, epsilon = 1e-14);
        let pure = ComplexMatrix::from_real_diagonal(&[0.0, 1.0, 0.0]);
        assert_abs_diff_eq!(von_neumann_entropy(&pure).unwrap(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn kron_and_partial_trace_are_consistent() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(kron(&i2, &i2), ComplexMatrix::identity(4));

        let a = bloch_state([0.2, 0.1, -0.3]);
        let b = bloch_state([0.0, 0.5, 0.5]);
        let ab = kron(&a, &b);
        assert!(partial_trace(&ab, (2, 2), Keep::A).unwrap().max_abs_diff(&a) < 1e-15);
        assert!(partial_trace(&ab, (2, 2), Keep::B).unwrap().max_abs_diff(&b) < 1e-15);

        // sigma_1 on the first factor flips the leading index.
        let [s1, _, _] = pauli();
        let x1 = kron(&s1, &i2);
        assert_eq!(x1.get(0, 2), c64(1.0, 0.0));
        assert_eq!(x1.get(1, 3), c64(1.0, 0.0));
        assert_eq!(x1.get(0, 1), c64(0.0, 0.0));
    }

    #[test]
    fn partial_trace_dim_mismatch() {
        let m = ComplexMatrix::identity(5);
        assert!(matches!(
            partial_trace(&m, (2, 2), Keep::A),
            Err(Error::DimMismatch { .. })
        ));
    }

    #[test]
    fn max_eigenvalue_simple() {
        assert_abs_diff_eq!(
            max_eigenvalue(&ComplexMatrix::from_real_diagonal(&[1.0, 3.0])).unwrap(),
            3.0,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(
            max_eigenvalue(&ComplexMatrix::identity(3)).unwrap(),
            1.0,
            epsilon = 1e-14
        );
    }
}
