//! Square quantum channels in Kraus form, the catalog of example channels,
//! and the operations that change representation without changing the map.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{self, c64, ComplexMatrix};
use crate::states::DensityMatrix;

/// Frobenius tolerance for trace preservation and unitality.
pub const CHANNEL_TOL: f64 = 1e-10;

/// Completely positive map `rho -> sum_i K_i rho K_i^dagger`.
///
/// Channels built with [`KrausChannel::new`] are trace preserving. Positive
/// combinations and other CP maps come from [`KrausChannel::from_cp_kraus`].
#[derive(Clone, Debug, PartialEq)]
pub struct KrausChannel {
    ops: Vec<ComplexMatrix>,
    dim: usize,
    trace_preserving: bool,
}

/// Which tensor slot the channel occupies next to an identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    /// `K_i (x) 1`
    First,
    /// `1 (x) K_i`
    Second,
}

fn check_dims(ops: &[ComplexMatrix]) -> Result<usize> {
    let dim = ops.first().ok_or(Error::EmptyChannel)?.dim();
    for k in ops {
        if k.dim() != dim {
            return Err(Error::DimMismatch {
                expected: dim,
                got: k.dim(),
            });
        }
    }
    Ok(dim)
}

fn tp_defect(ops: &[ComplexMatrix], dim: usize) -> f64 {
    let sum = ops
        .iter()
        .fold(ComplexMatrix::zeros(dim), |acc, k| &acc + &(&k.adjoint() * k));
    (&sum - &ComplexMatrix::identity(dim)).frobenius_norm()
}

impl KrausChannel {
    /// Trace-preserving channel; fails unless `sum K_i^dagger K_i = 1`.
    pub fn new(ops: Vec<ComplexMatrix>) -> Result<Self> {
        let dim = check_dims(&ops)?;
        let defect = tp_defect(&ops, dim);
        if defect > CHANNEL_TOL {
            return Err(Error::NotTracePreserving { defect });
        }
        Ok(KrausChannel {
            ops,
            dim,
            trace_preserving: true,
        })
    }

    /// Any completely positive map given by Kraus operators.
    pub fn from_cp_kraus(ops: Vec<ComplexMatrix>) -> Result<Self> {
        let dim = check_dims(&ops)?;
        let trace_preserving = tp_defect(&ops, dim) <= CHANNEL_TOL;
        Ok(KrausChannel {
            ops,
            dim,
            trace_preserving,
        })
    }

    pub fn identity(dim: usize) -> Self {
        KrausChannel {
            ops: vec![ComplexMatrix::identity(dim)],
            dim,
            trace_preserving: true,
        }
    }

    pub fn kraus_ops(&self) -> &[ComplexMatrix] {
        &self.ops
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_trace_preserving(&self) -> bool {
        self.trace_preserving
    }

    pub fn require_trace_preserving(&self) -> Result<()> {
        if self.trace_preserving {
            Ok(())
        } else {
            Err(Error::NotTracePreserving {
                defect: tp_defect(&self.ops, self.dim),
            })
        }
    }

    fn check_input(&self, d: usize) -> Result<()> {
        if d != self.dim {
            return Err(Error::DimMismatch {
                expected: self.dim,
                got: d,
            });
        }
        Ok(())
    }

    /// `sum_i K_i X K_i^dagger` for any square `X` of matching size.
    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_input(x.dim())?;
        Ok(self
            .ops
            .iter()
            .fold(ComplexMatrix::zeros(self.dim), |acc, k| {
                &acc + &x.conjugate_by(k)
            }))
    }

    /// Output state of a trace-preserving channel.
    pub fn apply_state(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        self.require_trace_preserving()?;
        let out = self.apply(rho.matrix())?;
        // Hermitian up to rounding by construction; re-symmetrize.
        let sym = (&out + &out.adjoint()).scale_real(0.5);
        Ok(DensityMatrix::new_unchecked(sym))
    }

    /// `Phi(1) = sum_i K_i K_i^dagger`
    pub fn image_of_identity(&self) -> ComplexMatrix {
        self.ops
            .iter()
            .fold(ComplexMatrix::zeros(self.dim), |acc, k| &acc + &(k * &k.adjoint()))
    }

    pub fn unital_defect(&self) -> f64 {
        (&self.image_of_identity() - &ComplexMatrix::identity(self.dim)).frobenius_norm()
    }

    pub fn is_unital(&self) -> bool {
        self.unital_defect() <= CHANNEL_TOL
    }

    /// `E_i = sum_j u_ij F_j`, zero-padding the Kraus list up to the size of `u`.
    pub fn mix_kraus(&self, u: &ComplexMatrix) -> Result<Self> {
        let n = u.dim();
        if n < self.ops.len() {
            return Err(Error::SizeMismatch {
                needed: self.ops.len(),
                got: n,
            });
        }
        let defect = u.unitary_defect();
        if defect > CHANNEL_TOL {
            return Err(Error::NotUnitary { defect });
        }
        let ops = (0..n)
            .map(|i| {
                self.ops
                    .iter()
                    .enumerate()
                    .fold(ComplexMatrix::zeros(self.dim), |acc, (j, f)| {
                        &acc + &f.scale(u.get(i, j))
                    })
            })
            .collect();
        Ok(KrausChannel {
            ops,
            dim: self.dim,
            trace_preserving: self.trace_preserving,
        })
    }

    /// `Phi (x) id` or `id (x) Phi` with the identity on `d_other` levels.
    pub fn tensor_with_identity(&self, slot: Slot, d_other: usize) -> Self {
        let id = ComplexMatrix::identity(d_other);
        let ops = self
            .ops
            .iter()
            .map(|k| match slot {
                Slot::First => linalg::kron(k, &id),
                Slot::Second => linalg::kron(&id, k),
            })
            .collect();
        KrausChannel {
            ops,
            dim: self.dim * d_other,
            trace_preserving: self.trace_preserving,
        }
    }

    /// `U Phi(U^dagger . U) U^dagger`, i.e. Kraus operators `U K_i U^dagger`.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Result<Self> {
        self.check_input(u.dim())?;
        Ok(KrausChannel {
            ops: self.ops.iter().map(|k| k.conjugate_by(u)).collect(),
            dim: self.dim,
            trace_preserving: self.trace_preserving,
        })
    }

    /// `sum_j w_j Phi_j` as the union of the Kraus sets scaled by `sqrt(w_j)`.
    pub fn positive_combination(parts: &[(f64, &KrausChannel)]) -> Result<Self> {
        let mut ops = Vec::new();
        for (w, phi) in parts {
            if !(*w >= 0.0) {
                return Err(Error::out_of_range("weight", *w, "[0, inf)"));
            }
            let s = w.sqrt();
            ops.extend(phi.ops.iter().map(|k| k.scale_real(s)));
        }
        Self::from_cp_kraus(ops)
    }
}

fn unit_interval(name: &'static str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::out_of_range(name, p, "[0, 1]"))
    }
}

fn real2(a: f64, b: f64, c: f64, d: f64) -> ComplexMatrix {
    ComplexMatrix::from_fn(2, |i, j| c64([[a, b], [c, d]][i][j], 0.0))
}

pub fn amplitude_damping(p: f64) -> Result<KrausChannel> {
    unit_interval("p", p)?;
    KrausChannel::new(vec![
        real2(1.0, 0.0, 0.0, (1.0 - p).sqrt()),
        real2(0.0, p.sqrt(), 0.0, 0.0),
    ])
}

pub fn phase_damping(p: f64) -> Result<KrausChannel> {
    unit_interval("p", p)?;
    KrausChannel::new(vec![
        real2(1.0, 0.0, 0.0, (1.0 - p).sqrt()),
        real2(0.0, 0.0, 0.0, p.sqrt()),
    ])
}

/// `(1 - 3p) rho + p sum_j sigma_j rho sigma_j`
pub fn depolarizing(p: f64) -> Result<KrausChannel> {
    if !(0.0..=1.0 / 3.0).contains(&p) {
        return Err(Error::out_of_range("p", p, "[0, 1/3]"));
    }
    let [s1, s2, s3] = linalg::pauli();
    let sp = p.sqrt();
    KrausChannel::new(vec![
        ComplexMatrix::identity(2).scale_real((1.0 - 3.0 * p).sqrt()),
        s1.scale_real(sp),
        s2.scale_real(sp),
        s3.scale_real(sp),
    ])
}

/// Entrywise product with `[[1, theta], [theta, 1]]`.
pub fn hadamard_decoherence(theta: f64) -> Result<KrausChannel> {
    if !(-1.0..=1.0).contains(&theta) {
        return Err(Error::out_of_range("theta", theta, "[-1, 1]"));
    }
    let [_, _, s3] = linalg::pauli();
    KrausChannel::new(vec![
        ComplexMatrix::identity(2).scale_real(((1.0 + theta) / 2.0).sqrt()),
        s3.scale_real(((1.0 - theta) / 2.0).sqrt()),
    ])
}

/// `rho -> sum_{l,m} |l><m| rho |m><l| / d = tr(rho) 1/d`
pub fn basis_channel(d: usize) -> Result<KrausChannel> {
    if d < 2 {
        return Err(Error::out_of_range("d", d as f64, "[2, inf)"));
    }
    let w = 1.0 / (d as f64).sqrt();
    let ops = (0..d * d)
        .map(|i| {
            let (l, m) = (i / d, i % d);
            ComplexMatrix::from_fn(d, |r, c| {
                if r == l && c == m {
                    c64(w, 0.0)
                } else {
                    c64(0.0, 0.0)
                }
            })
        })
        .collect();
    KrausChannel::new(ops)
}

/// Projective measurement onto the columns of `basis`.
pub fn von_neumann_measurement(basis: &ComplexMatrix) -> Result<KrausChannel> {
    let defect = basis.unitary_defect();
    if defect > CHANNEL_TOL {
        return Err(Error::NotUnitary { defect });
    }
    let ops = (0..basis.dim())
        .map(|i| {
            let v = basis.column(i);
            ComplexMatrix::outer(&v, &v)
        })
        .collect();
    KrausChannel::new(ops)
}

pub fn computational_measurement(d: usize) -> Result<KrausChannel> {
    von_neumann_measurement(&ComplexMatrix::identity(d))
}

fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(rows, cols, |_, _| {
        c64(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// Orthonormal columns from a Gaussian matrix, phases fixed so the
/// distribution is Haar.
fn haar_columns<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> DMatrix<Complex64> {
    let qr = ginibre(rng, rows, cols).qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..cols {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { c64(1.0, 0.0) };
        for i in 0..rows {
            q[(i, j)] *= phase;
        }
    }
    q
}

pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    ComplexMatrix::from_dmatrix_unchecked(haar_columns(rng, dim, dim))
}

/// Channel with `kraus_count` operators cut from a Haar-random isometry.
pub fn random_channel<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    kraus_count: usize,
) -> Result<KrausChannel> {
    if kraus_count == 0 {
        return Err(Error::EmptyChannel);
    }
    let v = haar_columns(rng, dim * kraus_count, dim);
    let ops = (0..kraus_count)
        .map(|k| ComplexMatrix::from_fn(dim, |i, j| v[(k * dim + i, j)]))
        .collect();
    KrausChannel::new(ops)
}

/// Random channel whose Kraus operators are all Hermitian, built as a
/// mixture of Hermitian unitaries `U D U^dagger` with `D = diag(+-1)`.
pub fn random_hermitian_channel<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    kraus_count: usize,
) -> Result<KrausChannel> {
    if kraus_count == 0 {
        return Err(Error::EmptyChannel);
    }
    let weights: Vec<f64> = (0..kraus_count).map(|_| rng.random::<f64>() + 1e-3).collect();
    let total: f64 = weights.iter().sum();
    let ops = weights
        .iter()
        .map(|w| {
            let u = random_unitary(rng, dim);
            let signs: Vec<f64> = (0..dim)
                .map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 })
                .collect();
            ComplexMatrix::from_real_diagonal(&signs)
                .conjugate_by(&u)
                .scale_real((w / total).sqrt())
        })
        .collect();
    KrausChannel::new(ops)
}
