//! Total (MGV), quantum (MGWYD) and classical uncertainty of operators and
//! channels, plus the Morozova-Chentsov kernel of the quantum part.

use serde::{Deserialize, Serialize};

use crate::channels::KrausChannel;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, PsdSpectrum};
use crate::states::{DensityMatrix, PureState};

/// Exponent pair with `alpha, beta >= 0` and `alpha + beta <= 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlphaBeta {
    alpha: f64,
    beta: f64,
}

impl AlphaBeta {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return Err(Error::out_of_range("alpha", alpha, "[0, 1]"));
        }
        if !(beta >= 0.0 && beta.is_finite()) {
            return Err(Error::out_of_range("beta", beta, "[0, 1]"));
        }
        if alpha + beta > 1.0 + 1e-12 {
            return Err(Error::out_of_range("alpha + beta", alpha + beta, "[0, 1]"));
        }
        Ok(AlphaBeta { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `alpha + beta`, clamped into `[0, 1]`.
    pub fn sum(&self) -> f64 {
        (self.alpha + self.beta).min(1.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UncertaintyTriple {
    pub total_v: f64,
    pub quantum_q: f64,
    pub classical_c: f64,
}

impl UncertaintyTriple {
    /// `V - (Q + C)`; zero up to rounding.
    pub fn decomposition_residual(&self) -> f64 {
        self.total_v - (self.quantum_q + self.classical_c)
    }
}

/// The scalar traces every functional is assembled from.
///
/// With `t(k) = sum_i tr rho^k K_i rho^(1-k) K_i^dagger`:
/// `V = (norm + t(a+b))/2 - fe`, `Q = (norm - t(a) - t(b) + t(a+b))/2`,
/// `C = (t(a) + t(b))/2 - fe`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChannelTerms {
    /// `sum_i tr rho K_i^dagger K_i`, equal to 1 for trace-preserving maps.
    pub norm: f64,
    pub t_alpha: f64,
    pub t_beta: f64,
    pub t_sum: f64,
    /// `sum_i |tr rho K_i|^2`
    pub fe: f64,
}

impl ChannelTerms {
    pub fn compute(rho: &DensityMatrix, ops: &[ComplexMatrix], ab: AlphaBeta) -> Result<Self> {
        let d = rho.dim();
        for k in ops {
            if k.dim() != d {
                return Err(Error::DimMismatch {
                    expected: d,
                    got: k.dim(),
                });
            }
        }
        let spec = rho.spectrum();
        Ok(Self::from_spectrum(rho, &spec, ops, ab))
    }

    pub(crate) fn from_spectrum(
        rho: &DensityMatrix,
        spec: &PsdSpectrum,
        ops: &[ComplexMatrix],
        ab: AlphaBeta,
    ) -> Self {
        let r = rho.matrix();
        let s = ab.sum();
        let pair = |k: f64| (spec.power(k), spec.power(1.0 - k));
        let (pa, pa_c) = pair(ab.alpha());
        let (pb, pb_c) = pair(ab.beta());
        let (ps, ps_c) = pair(s);
        let twisted = |left: &ComplexMatrix, right: &ComplexMatrix| -> f64 {
            ops.iter()
                .map(|k| left.trace_product(&(&(k * right) * &k.adjoint())).re)
                .sum()
        };
        let norm = ops
            .iter()
            .map(|k| r.trace_product(&(&k.adjoint() * k)).re)
            .sum();
        let fe = ops.iter().map(|k| r.trace_product(k).norm_sqr()).sum();
        ChannelTerms {
            norm,
            t_alpha: twisted(&pa, &pa_c),
            t_beta: twisted(&pb, &pb_c),
            t_sum: twisted(&ps, &ps_c),
            fe,
        }
    }

    pub fn total(&self) -> f64 {
        (self.norm + self.t_sum) / 2.0 - self.fe
    }

    pub fn quantum(&self) -> f64 {
        (self.norm - self.t_alpha - self.t_beta + self.t_sum) / 2.0
    }

    pub fn classical(&self) -> f64 {
        (self.t_alpha + self.t_beta) / 2.0 - self.fe
    }

    pub fn triple(&self) -> UncertaintyTriple {
        UncertaintyTriple {
            total_v: self.total(),
            quantum_q: self.quantum(),
            classical_c: self.classical(),
        }
    }
}

fn single(rho: &DensityMatrix, k: &ComplexMatrix, ab: AlphaBeta) -> Result<ChannelTerms> {
    ChannelTerms::compute(rho, std::slice::from_ref(k), ab)
}

pub fn mgv_operator(rho: &DensityMatrix, k: &ComplexMatrix, ab: AlphaBeta) -> Result<f64> {
    Ok(single(rho, k, ab)?.total())
}

pub fn mgwyd_operator(rho: &DensityMatrix, k: &ComplexMatrix, ab: AlphaBeta) -> Result<f64> {
    Ok(single(rho, k, ab)?.quantum())
}

pub fn classical_operator(rho: &DensityMatrix, k: &ComplexMatrix, ab: AlphaBeta) -> Result<f64> {
    Ok(single(rho, k, ab)?.classical())
}

pub fn operator_triple(
    rho: &DensityMatrix,
    k: &ComplexMatrix,
    ab: AlphaBeta,
) -> Result<UncertaintyTriple> {
    Ok(single(rho, k, ab)?.triple())
}

fn channel_terms(rho: &DensityMatrix, phi: &KrausChannel, ab: AlphaBeta) -> Result<ChannelTerms> {
    ChannelTerms::compute(rho, phi.kraus_ops(), ab)
}

/// Total uncertainty, the sum of the operator MGVs over the Kraus set.
pub fn mgv_channel(rho: &DensityMatrix, phi: &KrausChannel, ab: AlphaBeta) -> Result<f64> {
    Ok(channel_terms(rho, phi, ab)?.total())
}

pub fn mgwyd_channel(rho: &DensityMatrix, phi: &KrausChannel, ab: AlphaBeta) -> Result<f64> {
    Ok(channel_terms(rho, phi, ab)?.quantum())
}

pub fn classical_channel(rho: &DensityMatrix, phi: &KrausChannel, ab: AlphaBeta) -> Result<f64> {
    Ok(channel_terms(rho, phi, ab)?.classical())
}

pub fn uncertainty_triple(
    rho: &DensityMatrix,
    phi: &KrausChannel,
    ab: AlphaBeta,
) -> Result<UncertaintyTriple> {
    Ok(channel_terms(rho, phi, ab)?.triple())
}

/// `(sum_i <K_i^dagger K_i> - sum_i |<K_i>|^2) / 2`, which is
/// `(1 - sum_i |<K_i>|^2) / 2` for a channel.
pub fn pure_state_uncertainty(psi: &PureState, phi: &KrausChannel) -> Result<f64> {
    let mut norm = 0.0;
    let mut fe = 0.0;
    for k in phi.kraus_ops() {
        norm += psi.expectation(&(&k.adjoint() * k))?.re;
        fe += psi.expectation(k)?.norm_sqr();
    }
    Ok((norm - fe) / 2.0)
}

/// Morozova-Chentsov function of the quantum part.
///
/// Evaluated through `L = ln(x/y)` and `expm1` so that nearby arguments do
/// not cancel catastrophically. On the diagonal (`x == y` to relative
/// `1e-10`) the continuous limit `2 alpha beta / x` is returned.
pub fn morozova_chentsov(x: f64, y: f64, ab: AlphaBeta) -> Result<f64> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::out_of_range("x", x, "(0, inf)"));
    }
    if !(y > 0.0 && y.is_finite()) {
        return Err(Error::out_of_range("y", y, "(0, inf)"));
    }
    let (a, b) = (ab.alpha(), ab.beta());
    if (x - y).abs() <= 1e-10 * x.max(y) {
        return Ok(4.0 * a * b / (x + y));
    }
    let l = (x / y).ln();
    let g = |k: f64| (k * l).exp_m1() * ((1.0 - k) * l).exp_m1();
    let den = l.exp_m1();
    Ok((g(a) + g(b) - g(ab.sum())) / (y * den * den))
}
