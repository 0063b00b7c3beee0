//! Density matrices and the state families used throughout: Bloch qubits,
//! Werner and isotropic two-qubit states, seeded random states and
//! purifications.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{self, c64, ComplexMatrix, PsdSpectrum, HERMITIAN_TOL, NEGATIVITY_TOL};

pub const TRACE_TOL: f64 = 1e-10;
pub const NORM_TOL: f64 = 1e-12;

/// Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        let defect = mat.hermitian_defect();
        if defect > HERMITIAN_TOL {
            return Err(Error::NotHermitian { defect });
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::BadTrace { trace: tr.re });
        }
        let eig = linalg::hermitian_eig(&mat)?;
        if eig.eigenvalues[0] < -NEGATIVITY_TOL {
            return Err(Error::NotPositive {
                eigenvalue: eig.eigenvalues[0],
            });
        }
        Ok(DensityMatrix { mat })
    }

    pub(crate) fn new_unchecked(mat: ComplexMatrix) -> Self {
        DensityMatrix { mat }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix {
            mat: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn spectrum(&self) -> PsdSpectrum {
        PsdSpectrum::new(&self.mat).expect("validated density matrix")
    }

    pub fn purity(&self) -> f64 {
        self.mat.trace_product(&self.mat).re
    }

    /// `1 - tr rho^2`
    pub fn linear_entropy(&self) -> f64 {
        1.0 - self.purity()
    }

    pub fn entropy(&self) -> f64 {
        self.spectrum().entropy_bits()
    }

    /// `sum_j w_j rho_j`; weights must be non-negative and sum to one.
    pub fn mixture(parts: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let first = parts.first().ok_or(Error::Schema("empty mixture".into()))?;
        let dim = first.1.dim();
        let mut acc = ComplexMatrix::zeros(dim);
        for (w, rho) in parts {
            if *w < 0.0 {
                return Err(Error::out_of_range("weight", *w, "[0, inf)"));
            }
            if rho.dim() != dim {
                return Err(Error::DimMismatch {
                    expected: dim,
                    got: rho.dim(),
                });
            }
            acc = &acc + &rho.mat.scale_real(*w);
        }
        DensityMatrix::new(acc)
    }

    /// `U rho U^dagger`
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Result<Self> {
        if u.dim() != self.dim() {
            return Err(Error::DimMismatch {
                expected: self.dim(),
                got: u.dim(),
            });
        }
        DensityMatrix::new(self.mat.conjugate_by(u))
    }

    pub fn tensor(&self, other: &DensityMatrix) -> Self {
        DensityMatrix {
            mat: linalg::kron(&self.mat, &other.mat),
        }
    }
}

/// Real Bloch vector of a qubit, inside the closed unit ball.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlochQubit {
    r: [f64; 3],
}

impl BlochQubit {
    pub fn new(r1: f64, r2: f64, r3: f64) -> Result<Self> {
        let r = [r1, r2, r3];
        if r.iter().any(|x| !x.is_finite()) || r1 * r1 + r2 * r2 + r3 * r3 > 1.0 + 1e-12 {
            return Err(Error::BlochOutOfBall { r });
        }
        Ok(BlochQubit { r })
    }

    pub fn components(&self) -> [f64; 3] {
        self.r
    }

    pub fn radius(&self) -> f64 {
        self.r.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

/// `(1 + r . sigma) / 2`
pub fn from_bloch(b: &BlochQubit) -> DensityMatrix {
    let [r1, r2, r3] = b.r;
    let mat = ComplexMatrix::from_fn(2, |i, j| match (i, j) {
        (0, 0) => c64((1.0 + r3) / 2.0, 0.0),
        (1, 1) => c64((1.0 - r3) / 2.0, 0.0),
        (0, 1) => c64(r1 / 2.0, -r2 / 2.0),
        _ => c64(r1 / 2.0, r2 / 2.0),
    });
    DensityMatrix::new_unchecked(mat)
}

/// Unit-norm state vector.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
}

impl PureState {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if amplitudes.is_empty() || (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(PureState { amplitudes })
    }

    /// Computational basis vector `|index>`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut amplitudes = vec![c64(0.0, 0.0); dim];
        amplitudes[index] = c64(1.0, 0.0);
        PureState { amplitudes }
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn projector(&self) -> DensityMatrix {
        DensityMatrix::new_unchecked(ComplexMatrix::outer(&self.amplitudes, &self.amplitudes))
    }

    /// `<psi|K|psi>`
    pub fn expectation(&self, k: &ComplexMatrix) -> Result<Complex64> {
        if k.dim() != self.dim() {
            return Err(Error::DimMismatch {
                expected: self.dim(),
                got: k.dim(),
            });
        }
        let m = k.as_dmatrix();
        let psi = &self.amplitudes;
        let mut acc = c64(0.0, 0.0);
        for i in 0..psi.len() {
            for j in 0..psi.len() {
                acc += psi[i].conj() * m[(i, j)] * psi[j];
            }
        }
        Ok(acc)
    }
}

fn check_unit_interval(name: &'static str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::out_of_range(name, x, "[0, 1]"))
    }
}

/// Werner state on two qubits; `p = 0` is the singlet and `p = 3/4` is `1/4`.
pub fn werner(p: f64) -> Result<DensityMatrix> {
    check_unit_interval("p", p)?;
    let corner = p / 3.0;
    let mid = (3.0 - 2.0 * p) / 6.0;
    let off = (4.0 * p - 3.0) / 6.0;
    let mat = ComplexMatrix::from_fn(4, |i, j| match (i, j) {
        (0, 0) | (3, 3) => c64(corner, 0.0),
        (1, 1) | (2, 2) => c64(mid, 0.0),
        (1, 2) | (2, 1) => c64(off, 0.0),
        _ => c64(0.0, 0.0),
    });
    Ok(DensityMatrix::new_unchecked(mat))
}

pub fn werner_is_separable(p: f64) -> bool {
    p <= 1.0 / 3.0
}

/// Isotropic state on two qubits with fidelity `f` to the maximally entangled state.
pub fn isotropic(f: f64) -> Result<DensityMatrix> {
    check_unit_interval("F", f)?;
    let corner = (2.0 * f + 1.0) / 6.0;
    let anti = (4.0 * f - 1.0) / 6.0;
    let mid = (1.0 - f) / 3.0;
    let mat = ComplexMatrix::from_fn(4, |i, j| match (i, j) {
        (0, 0) | (3, 3) => c64(corner, 0.0),
        (1, 1) | (2, 2) => c64(mid, 0.0),
        (0, 3) | (3, 0) => c64(anti, 0.0),
        _ => c64(0.0, 0.0),
    });
    Ok(DensityMatrix::new_unchecked(mat))
}

pub fn isotropic_is_separable(f: f64) -> bool {
    f <= 0.5
}

fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    c64(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// `G G^dagger / tr(G G^dagger)` for a `dim x rank` complex Gaussian `G`.
pub fn random_density_with<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    rank: usize,
) -> Result<DensityMatrix> {
    if rank == 0 || rank > dim {
        return Err(Error::BadRank { rank, dim });
    }
    let g: Vec<Complex64> = (0..dim * rank).map(|_| gaussian_complex(rng)).collect();
    let mut m = ComplexMatrix::from_fn(dim, |i, j| {
        (0..rank)
            .map(|k| g[i * rank + k] * g[j * rank + k].conj())
            .sum()
    });
    let tr = m.trace().re;
    m = m.scale_real(1.0 / tr);
    // Exact Hermitian symmetry and unit trace by construction.
    Ok(DensityMatrix::new_unchecked(m))
}

pub fn random_density(dim: usize, rank: usize, seed: u64) -> Result<DensityMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_density_with(&mut rng, dim, rank)
}

pub fn random_pure_with<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> PureState {
    let v: Vec<Complex64> = (0..dim).map(|_| gaussian_complex(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    PureState {
        amplitudes: v.into_iter().map(|z| z / norm).collect(),
    }
}

/// Pure state on `A (x) B` whose `B` marginal is the purified state.
#[derive(Clone, Debug)]
pub struct Purification {
    pub state: PureState,
    /// Ancilla (first factor) dimension, equal to the rank of the input.
    pub ancilla_dim: usize,
    pub system_dim: usize,
}

/// `|psi> = sum_i sqrt(lambda_i) |i>_A |v_i>_B` over the support of `rho`.
pub fn purify(rho: &DensityMatrix) -> Purification {
    let spec = rho.spectrum();
    let d = rho.dim();
    let support: Vec<usize> = (0..d).filter(|&i| spec.eigenvalues()[i] > 0.0).collect();
    let ra = support.len();
    let mut amps = vec![c64(0.0, 0.0); ra * d];
    for (a, &i) in support.iter().enumerate() {
        let w = spec.eigenvalues()[i].sqrt();
        let v = spec.eigenvectors().column(i);
        for b in 0..d {
            amps[a * d + b] = v[b] * w;
        }
    }
    // Renormalize away the eigenvalues clipped off the support.
    let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in &mut amps {
        *z /= norm;
    }
    Purification {
        state: PureState { amplitudes: amps },
        ancilla_dim: ra,
        system_dim: d,
    }
}
