//! Entanglement fidelity, entropy exchange and coherent information, and
//! the trade-off relations and entropy bounds that tie them to the total
//! uncertainty of a channel.

use serde::{Deserialize, Serialize};

use crate::channels::KrausChannel;
use crate::error::{Error, Result};
use crate::linalg::{self, c64, ComplexMatrix, Keep, PsdSpectrum};
use crate::states::{purify, DensityMatrix};
use crate::uncertainty::{AlphaBeta, ChannelTerms};

/// A bound is satisfied when `slack >= -BOUND_TOL`.
pub const BOUND_TOL: f64 = 1e-9;

/// Two sides of an inequality, oriented so that `slack >= 0` means it holds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub satisfied: bool,
}

impl BoundReport {
    /// Report for `lhs <= rhs`.
    pub fn upper(lhs: f64, rhs: f64) -> Self {
        Self::with_slack(lhs, rhs, rhs - lhs)
    }

    /// Report for `lhs >= rhs`.
    pub fn lower(lhs: f64, rhs: f64) -> Self {
        Self::with_slack(lhs, rhs, lhs - rhs)
    }

    fn with_slack(lhs: f64, rhs: f64, slack: f64) -> Self {
        BoundReport {
            lhs,
            rhs,
            slack,
            satisfied: slack >= -BOUND_TOL,
        }
    }
}

fn check(rho: &DensityMatrix, phi: &KrausChannel) -> Result<()> {
    if rho.dim() != phi.dim() {
        return Err(Error::DimMismatch {
            expected: phi.dim(),
            got: rho.dim(),
        });
    }
    phi.require_trace_preserving()
}

/// `sum_i |tr rho K_i|^2`
pub fn entanglement_fidelity(rho: &DensityMatrix, phi: &KrausChannel) -> Result<f64> {
    check(rho, phi)?;
    Ok(phi
        .kraus_ops()
        .iter()
        .map(|k| rho.matrix().trace_product(k).norm_sqr())
        .sum())
}

/// `(id (x) Phi)(|psi><psi|)` for the purification `psi` of `rho`.
pub fn joint_output(rho: &DensityMatrix, phi: &KrausChannel) -> Result<ComplexMatrix> {
    check(rho, phi)?;
    let pur = purify(rho);
    let joint = pur.state.projector();
    let ext = phi.tensor_with_identity(crate::channels::Slot::Second, pur.ancilla_dim);
    ext.apply(joint.matrix())
}

/// `<psi| (id (x) Phi)(|psi><psi|) |psi>` on an explicit purification.
pub fn entanglement_fidelity_purified(rho: &DensityMatrix, phi: &KrausChannel) -> Result<f64> {
    let out = joint_output(rho, phi)?;
    let psi = purify(rho).state;
    let amps = psi.amplitudes();
    let mut acc = c64(0.0, 0.0);
    for i in 0..amps.len() {
        for j in 0..amps.len() {
            acc += amps[i].conj() * out.get(i, j) * amps[j];
        }
    }
    Ok(acc.re)
}

/// `W_ij = tr(K_i rho K_j^dagger)`, which shares its nonzero spectrum with
/// the joint output of the purification.
pub fn exchange_matrix(rho: &DensityMatrix, phi: &KrausChannel) -> Result<ComplexMatrix> {
    check(rho, phi)?;
    let ops = phi.kraus_ops();
    let left: Vec<ComplexMatrix> = ops.iter().map(|k| k * rho.matrix()).collect();
    let adj: Vec<ComplexMatrix> = ops.iter().map(|k| k.adjoint()).collect();
    let w = ComplexMatrix::from_fn(ops.len(), |i, j| left[i].trace_product(&adj[j]));
    Ok((&w + &w.adjoint()).scale_real(0.5))
}

pub fn entropy_exchange(rho: &DensityMatrix, phi: &KrausChannel) -> Result<f64> {
    linalg::von_neumann_entropy(&exchange_matrix(rho, phi)?)
}

/// Entropy exchange from the explicit joint state on ancilla (x) system.
pub fn entropy_exchange_purified(rho: &DensityMatrix, phi: &KrausChannel) -> Result<f64> {
    let out = joint_output(rho, phi)?;
    linalg::von_neumann_entropy(&(&out + &out.adjoint()).scale_real(0.5))
}

/// `S(Phi(rho)) - S_e(rho, Phi)`
pub fn coherent_information(rho: &DensityMatrix, phi: &KrausChannel) -> Result<f64> {
    let out = phi.apply_state(rho)?;
    Ok(out.entropy() - entropy_exchange(rho, phi)?)
}

/// Everything the bounds need, from one eigendecomposition of `rho`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InfoSummary {
    pub total_v: f64,
    pub quantum_q: f64,
    pub classical_c: f64,
    pub fe: f64,
    /// `tr rho^(a+b) Phi(rho^(1-a-b))`
    pub twisted: f64,
    /// `tr rho^(a+b)`
    pub trace_power: f64,
    /// `lambda_max(Phi(rho^(1-a-b)))`
    pub lambda_max: f64,
    pub entropy: f64,
    pub output_entropy: f64,
    pub entropy_exchange: f64,
    pub coherent_information: f64,
    pub dim: usize,
}

impl InfoSummary {
    pub fn compute(rho: &DensityMatrix, phi: &KrausChannel, ab: AlphaBeta) -> Result<Self> {
        check(rho, phi)?;
        let spec = rho.spectrum();
        let terms = ChannelTerms::from_spectrum(rho, &spec, phi.kraus_ops(), ab);
        let s = ab.sum();
        let image = phi.apply(&spec.power(1.0 - s))?;
        let lambda_max = linalg::max_eigenvalue(&(&image + &image.adjoint()).scale_real(0.5))?;
        let output_entropy = phi.apply_state(rho)?.entropy();
        let se = entropy_exchange(rho, phi)?;
        Ok(InfoSummary {
            total_v: terms.total(),
            quantum_q: terms.quantum(),
            classical_c: terms.classical(),
            fe: terms.fe,
            twisted: terms.t_sum,
            trace_power: spec.trace_power(s),
            lambda_max,
            entropy: spec.entropy_bits(),
            output_entropy,
            entropy_exchange: se,
            coherent_information: output_entropy - se,
            dim: rho.dim(),
        })
    }

    /// `2V + 1 - tr rho^(a+b) Phi(rho^(1-a-b))`, equal to `2(1 - F_e)` for channels.
    pub fn deficit(&self) -> f64 {
        2.0 * self.total_v + 1.0 - self.twisted
    }

    /// `V + F_e <= (1 + lambda_max tr rho^(a+b)) / 2`
    pub fn fidelity_tradeoff(&self) -> BoundReport {
        BoundReport::upper(
            self.total_v + self.fe,
            (1.0 + self.lambda_max * self.trace_power) / 2.0,
        )
    }

    /// `S_e <= 1 + (2V + 1 - tr rho^(a+b) Phi(rho^(1-a-b))) log d`
    pub fn entropy_exchange_bound(&self) -> BoundReport {
        let log_d = (self.dim as f64).log2();
        BoundReport::upper(self.entropy_exchange, 1.0 + self.deficit() * log_d)
    }

    /// `S(rho) - 2 <= 2 (2V + 1 - tr rho^(a+b) Phi(rho^(1-a-b))) log d + I_c`
    pub fn coherent_information_bound(&self) -> BoundReport {
        let log_d = (self.dim as f64).log2();
        BoundReport::upper(
            self.entropy - 2.0,
            2.0 * self.deficit() * log_d + self.coherent_information,
        )
    }

    /// `S_e <= H(F_e) + (1 - F_e) log(d^2 - 1)`
    pub fn quantum_fano(&self) -> BoundReport {
        let fe = self.fe.clamp(0.0, 1.0);
        let d = self.dim as f64;
        let rhs = linalg::binary_entropy(fe).expect("clamped") + (1.0 - fe) * (d * d - 1.0).log2();
        BoundReport::upper(self.entropy_exchange, rhs)
    }

    /// `2V + F_e - 1`, zero for pure states.
    pub fn pure_state_residual(&self) -> f64 {
        2.0 * self.total_v + self.fe - 1.0
    }
}

pub fn fidelity_tradeoff(rho: &DensityMatrix, phi: &KrausChannel, ab: AlphaBeta) -> Result<BoundReport> {
    Ok(InfoSummary::compute(rho, phi, ab)?.fidelity_tradeoff())
}

pub fn entropy_exchange_bound(
    rho: &DensityMatrix,
    phi: &KrausChannel,
    ab: AlphaBeta,
) -> Result<BoundReport> {
    Ok(InfoSummary::compute(rho, phi, ab)?.entropy_exchange_bound())
}

pub fn coherent_information_bound(
    rho: &DensityMatrix,
    phi: &KrausChannel,
    ab: AlphaBeta,
) -> Result<BoundReport> {
    Ok(InfoSummary::compute(rho, phi, ab)?.coherent_information_bound())
}

pub fn quantum_fano(rho: &DensityMatrix, phi: &KrausChannel) -> Result<BoundReport> {
    let ab = AlphaBeta::new(0.5, 0.5).expect("valid exponents");
    Ok(InfoSummary::compute(rho, phi, ab)?.quantum_fano())
}

/// `V + F_e = 1` for a unital channel with `alpha + beta = 1`.
///
/// Exact for full-rank `rho`. For rank-deficient states `rho^0` is the
/// support projector rather than the identity, so the sum can fall short of
/// 1; the shortfall is reported as negative slack.
pub fn unital_conservation(
    rho: &DensityMatrix,
    phi: &KrausChannel,
    ab: AlphaBeta,
) -> Result<BoundReport> {
    check(rho, phi)?;
    let defect = phi.unital_defect();
    if defect > crate::channels::CHANNEL_TOL {
        return Err(Error::NotUnital { defect });
    }
    if (ab.alpha() + ab.beta() - 1.0).abs() > 1e-12 {
        return Err(Error::out_of_range("alpha + beta", ab.alpha() + ab.beta(), "{1}"));
    }
    let t = ChannelTerms::compute(rho, phi.kraus_ops(), ab)?;
    let lhs = t.total() + t.fe;
    Ok(BoundReport::with_slack(lhs, 1.0, -(lhs - 1.0).abs()))
}

/// Marginal on the system factor of the joint output, for cross-checks.
pub fn joint_output_marginal(rho: &DensityMatrix, phi: &KrausChannel) -> Result<ComplexMatrix> {
    let ra = rho.spectrum().rank();
    linalg::partial_trace(&joint_output(rho, phi)?, (ra, rho.dim()), Keep::B)
}

/// Nonzero spectrum of a PSD matrix, descending.
pub fn nonzero_spectrum(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let spec = PsdSpectrum::new(m)?;
    let mut v: Vec<f64> = spec.eigenvalues().iter().copied().filter(|&l| l > 0.0).collect();
    v.sort_by(|a, b| b.total_cmp(a));
    Ok(v)
}
