//! Analytic values of the uncertainty functionals and entropy bounds for
//! the catalog channels, qubit states and the Werner/isotropic families.
//!
//! Scalar powers follow the same support convention as the spectral path:
//! `0^k = 0` for every `k`, including `k = 0`.
//!
//! Two of the qubit total-uncertainty formulas exist in two versions. The
//! `*_published` functions transcribe the published expressions literally;
//! the plain functions carry the corrected coefficients that agree with
//! the generic spectral evaluation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, support_pow as sp, ComplexMatrix};
use crate::states::{self, BlochQubit, DensityMatrix};
use crate::uncertainty::AlphaBeta;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChannelKind {
    AmplitudeDamping,
    PhaseDamping,
    Depolarizing,
    HadamardDecoherence,
    BasisChannel,
    ProjectiveMeasurement,
}

impl ChannelKind {
    pub fn name(&self) -> &'static str {
        match self {
            ChannelKind::AmplitudeDamping => "amplitude_damping",
            ChannelKind::PhaseDamping => "phase_damping",
            ChannelKind::Depolarizing => "depolarizing",
            ChannelKind::HadamardDecoherence => "hadamard_decoherence",
            ChannelKind::BasisChannel => "basis_channel",
            ChannelKind::ProjectiveMeasurement => "projective_measurement",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClosedFormParams {
    pub kind: ChannelKind,
    /// `p` for the damping and depolarizing channels, `theta` for decoherence.
    pub channel_param: f64,
    pub bloch: Option<BlochQubit>,
    /// Werner `p` or isotropic `F`.
    pub family_param: Option<f64>,
    pub ab: AlphaBeta,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VqPair {
    pub total: f64,
    pub quantum: f64,
}

impl VqPair {
    pub fn classical(&self) -> f64 {
        self.total - self.quantum
    }
}

/// Spectral data of a qubit state `(1 + r.sigma)/2`.
struct Qubit {
    r: f64,
    /// Components of `r` squared.
    r1s: f64,
    r2s: f64,
    r3s: f64,
    r3: f64,
    /// Unit direction components squared; zero when `r = 0`.
    n12s: f64,
    n3s: f64,
    n3: f64,
    l1: f64,
    l2: f64,
}

impl Qubit {
    fn new(b: &BlochQubit) -> Self {
        let [r1, r2, r3] = b.components();
        let r = b.radius();
        let (n12s, n3s, n3) = if r > 0.0 {
            ((r1 * r1 + r2 * r2) / (r * r), r3 * r3 / (r * r), r3 / r)
        } else {
            (0.0, 0.0, 0.0)
        };
        Qubit {
            r,
            r1s: r1 * r1,
            r2s: r2 * r2,
            r3s: r3 * r3,
            r3,
            n12s,
            n3s,
            n3,
            l1: ((1.0 - r) / 2.0).max(0.0),
            l2: (1.0 + r) / 2.0,
        }
    }

    /// `l1^k + l2^k`
    fn p(&self, k: f64) -> f64 {
        sp(self.l1, k) + sp(self.l2, k)
    }

    /// `l1^k - l2^k`
    fn m(&self, k: f64) -> f64 {
        sp(self.l1, k) - sp(self.l2, k)
    }

    /// `(l1^k - l2^k) / r`, by series near `r = 0`.
    fn m_over_r(&self, k: f64) -> f64 {
        if self.r < 1e-4 {
            let r2 = self.r * self.r;
            2f64.powf(-k) * (-2.0 * k - k * (k - 1.0) * (k - 2.0) * r2 / 3.0)
        } else {
            self.m(k) / self.r
        }
    }
}

fn require_bloch(params: &ClosedFormParams) -> Result<Qubit> {
    params.bloch.as_ref().map(Qubit::new).ok_or(Error::MissingBloch)
}

fn check_param(params: &ClosedFormParams) -> Result<()> {
    let x = params.channel_param;
    let (ok, range) = match params.kind {
        ChannelKind::AmplitudeDamping | ChannelKind::PhaseDamping => ((0.0..=1.0).contains(&x), "[0, 1]"),
        ChannelKind::Depolarizing => ((0.0..=1.0 / 3.0).contains(&x), "[0, 1/3]"),
        ChannelKind::HadamardDecoherence => ((-1.0..=1.0).contains(&x), "[-1, 1]"),
        other => return Err(Error::UnsupportedKind(other.name().into())),
    };
    if ok {
        Ok(())
    } else {
        Err(Error::out_of_range("channel_param", x, range))
    }
}

/// Total and quantum uncertainty of a qubit channel for a Bloch state.
pub fn qubit_channel_vq(params: &ClosedFormParams) -> Result<VqPair> {
    check_param(params)?;
    let q = require_bloch(params)?;
    let (a, b, s) = (params.ab.alpha(), params.ab.beta(), params.ab.sum());
    let x = params.channel_param;
    let ps = q.p(s) * q.p(1.0 - s);
    let ms = q.m(s) * q.m(1.0 - s);
    let mab = q.m(a) * q.m(b);
    Ok(match params.kind {
        ChannelKind::AmplitudeDamping => {
            let c = (1.0 - x).sqrt();
            let total = amplitude_damping_common(&q, x, s)
                + (2.0 * (1.0 - x) * q.n3s + 2.0 * c * (1.0 - q.n3s)) / 8.0 * ms;
            let quantum = 0.5
                * (((1.0 - c) * q.n12s + x * q.n3s) / 2.0 * q.p(1.0 - s) + x * q.n3 / 2.0 * q.m(1.0 - s))
                * mab;
            VqPair { total, quantum }
        }
        ChannelKind::PhaseDamping => {
            let c = (1.0 - x).sqrt();
            let total = 0.25 * ps - (c + (1.0 - c) * q.r3s) / 2.0 + ((1.0 - c) * q.n3s + c) / 4.0 * ms;
            let quantum = 0.5 * (1.0 - c) * q.n12s / 2.0 * mab * q.p(1.0 - s);
            VqPair { total, quantum }
        }
        ChannelKind::Depolarizing => {
            let total = 0.25 * (2.0 + ps + (1.0 - 4.0 * x) * ms) - (1.0 - 3.0 * x + x * q.r * q.r);
            let quantum = x * mab * q.p(1.0 - s);
            VqPair { total, quantum }
        }
        ChannelKind::HadamardDecoherence => {
            let total = 0.25 * ps - (q.r3s + x - q.r3s * x) / 2.0 + 0.25 * ms * (x + q.n3s - x * q.n3s);
            VqPair {
                total,
                quantum: hadamard_quantum(&q, x, params.ab),
            }
        }
        _ => unreachable!("checked above"),
    })
}

/// Terms shared by the published and corrected amplitude-damping totals.
fn amplitude_damping_common(q: &Qubit, p: f64, s: f64) -> f64 {
    let c = (1.0 - p).sqrt();
    let cross = sp(q.l1, 1.0 - s) * sp(q.l2, s) - sp(q.l2, 1.0 - s) * sp(q.l1, s) + q.r;
    0.25 * q.p(s) * q.p(1.0 - s) - p * q.r * q.r / 4.0 + (p + c - 1.0) / 2.0 * q.r3s
        - (2.0 * p * q.r3 - p + 2.0 * c) / 4.0
        + p * q.n3 / 4.0 * cross
}

fn hadamard_quantum(q: &Qubit, theta: f64, ab: AlphaBeta) -> f64 {
    let (a, b, s) = (ab.alpha(), ab.beta(), ab.sum());
    let w = q.n3s + theta * q.n12s;
    (q.p(s) * q.p(1.0 - s) + 2.0) / 4.0
        - (q.p(a) * q.p(1.0 - a) + q.p(b) * q.p(1.0 - b)) / 4.0
        - w / 4.0 * (q.m(a) * q.m(1.0 - a) + q.m(b) * q.m(1.0 - b))
        + w / 4.0 * q.m(s) * q.m(1.0 - s)
}

/// Total uncertainty exactly as published for the four qubit channels.
///
/// Differs from [`qubit_channel_vq`] for amplitude damping (last
/// coefficient) and Hadamard decoherence (a missing factor `1/4`); the two
/// agree for the other kinds.
pub fn qubit_channel_v_published(params: &ClosedFormParams) -> Result<f64> {
    check_param(params)?;
    let q = require_bloch(params)?;
    let s = params.ab.sum();
    let x = params.channel_param;
    // (l1^s - l2^s)(l1^(1-s) - l2^(1-s)) / r^2
    let ms_r2 = q.m_over_r(s) * q.m_over_r(1.0 - s);
    match params.kind {
        ChannelKind::AmplitudeDamping => {
            let c = (1.0 - x).sqrt();
            let coeff = 2.0 - x - x * q.r3s + 2.0 * c * (q.r * q.r - q.r3s);
            Ok(amplitude_damping_common(&q, x, s) + coeff / 8.0 * ms_r2)
        }
        ChannelKind::HadamardDecoherence => {
            let ps = q.p(s) * q.p(1.0 - s);
            Ok(0.25 * ps - (q.r3s + x - q.r3s * x) / 2.0
                + ms_r2 * (x * q.r * q.r + q.r3s - x * q.r3s))
        }
        _ => Ok(qubit_channel_vq(params)?.total),
    }
}

/// `r1^2 + r2^2` and `r3^2` of the Bloch vector, for callers that need
/// the erratum terms.
pub fn bloch_squares(b: &BlochQubit) -> (f64, f64) {
    let q = Qubit::new(b);
    (q.r1s + q.r2s, q.r3s)
}

fn trace_power(spec: &[f64], k: f64) -> f64 {
    spec.iter().map(|&l| sp(l, k)).sum()
}

/// Uncertainty under `rho -> tr(rho) 1/d` from the spectrum of `rho`.
pub fn basis_channel_vq(rho: &DensityMatrix, ab: AlphaBeta) -> VqPair {
    let spec = rho.spectrum();
    basis_channel_vq_from_spectrum(spec.eigenvalues(), ab)
}

pub fn basis_channel_vq_from_spectrum(spec: &[f64], ab: AlphaBeta) -> VqPair {
    let d = spec.len() as f64;
    let (a, b, s) = (ab.alpha(), ab.beta(), ab.sum());
    let x = |k: f64| trace_power(spec, k) * trace_power(spec, 1.0 - k);
    let purity: f64 = spec.iter().map(|l| l * l).sum();
    VqPair {
        total: (d + x(s) - 2.0 * purity) / (2.0 * d),
        quantum: (d + x(s) - x(a) - x(b)) / (2.0 * d),
    }
}

fn unit_param(name: &'static str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::out_of_range(name, x, "[0, 1]"))
    }
}

/// `3^(1-k) p^k (1-p)^(1-k) + 3^k p^(1-k) (1-p)^k`
fn werner_cross(p: f64, k: f64) -> f64 {
    3f64.powf(1.0 - k) * sp(p, k) * sp(1.0 - p, 1.0 - k) + 3f64.powf(k) * sp(p, 1.0 - k) * sp(1.0 - p, k)
}

/// `3^k F^k (1-F)^(1-k) + 3^(1-k) F^(1-k) (1-F)^k`
fn isotropic_cross(f: f64, k: f64) -> f64 {
    3f64.powf(k) * sp(f, k) * sp(1.0 - f, 1.0 - k) + 3f64.powf(1.0 - k) * sp(f, 1.0 - k) * sp(1.0 - f, k)
}

/// Werner state under the basis channel on `C^2 (x) C^2`.
pub fn werner_vq(p: f64, ab: AlphaBeta) -> Result<VqPair> {
    unit_param("p", p)?;
    let (a, b, s) = (ab.alpha(), ab.beta(), ab.sum());
    Ok(VqPair {
        total: (3.0 + 6.0 * p - 8.0 * p * p / 3.0 + werner_cross(p, s)) / 8.0,
        quantum: (3.0 - 2.0 * p - werner_cross(p, a) - werner_cross(p, b) + werner_cross(p, s)) / 8.0,
    })
}

/// Isotropic state under the basis channel on `C^2 (x) C^2`.
pub fn isotropic_vq(f: f64, ab: AlphaBeta) -> Result<VqPair> {
    unit_param("F", f)?;
    let (a, b, s) = (ab.alpha(), ab.beta(), ab.sum());
    let total = (19.0 - 2.0 * f - 8.0 * f * f
        + 3f64.powf(2.0 - s) * sp(f, 1.0 - s) * sp(1.0 - f, s)
        + 3f64.powf(1.0 + s) * sp(f, s) * sp(1.0 - f, 1.0 - s))
        / 24.0;
    let quantum =
        (1.0 + 2.0 * f - isotropic_cross(f, a) - isotropic_cross(f, b) + isotropic_cross(f, s)) / 8.0;
    Ok(VqPair { total, quantum })
}

/// Uncertainty of the projective measurement onto the columns of `basis`,
/// from the diagonal elements `<i|rho^k|i>`.
pub fn projective_vq(rho: &DensityMatrix, basis: &ComplexMatrix, ab: AlphaBeta) -> Result<VqPair> {
    let defect = basis.unitary_defect();
    if defect > crate::channels::CHANNEL_TOL {
        return Err(Error::NotUnitary { defect });
    }
    if basis.dim() != rho.dim() {
        return Err(Error::DimMismatch {
            expected: rho.dim(),
            got: basis.dim(),
        });
    }
    let spec = rho.spectrum();
    let diag = |k: f64| -> Vec<f64> {
        let m = spec.power(k).conjugate_by(&basis.adjoint());
        (0..m.dim()).map(|i| m.get(i, i).re).collect()
    };
    let (a, b, s) = (ab.alpha(), ab.beta(), ab.sum());
    let pair = |k: f64| -> f64 { diag(k).iter().zip(diag(1.0 - k)).map(|(x, y)| x * y).sum() };
    let populations = diag(1.0);
    let sum_sq: f64 = populations.iter().map(|x| x * x).sum();
    Ok(VqPair {
        total: 0.5 * (1.0 + pair(s)) - sum_sq,
        quantum: 0.5 * (1.0 + pair(s) - pair(b) - pair(a)),
    })
}

/// Both sides of the entropy-exchange bound and the coherent-information
/// bound for a two-qubit family under the computational-basis measurement.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundCurves {
    /// `1 + (2V + 1 - tr rho^s Phi(rho^(1-s))) log 4`
    pub se_bound_rhs: f64,
    /// Entropy exchange.
    pub se_bound_lhs: f64,
    /// `2 (2V + 1 - tr rho^s Phi(rho^(1-s))) log 4 + I_c`
    pub ic_bound_rhs: f64,
    /// `S(rho) - 2`
    pub ic_bound_lhs: f64,
}

fn xlog(x: f64) -> f64 {
    if x > 0.0 {
        x * x.log2()
    } else {
        0.0
    }
}

/// Bound curves for the Werner family.
pub fn werner_bound_curves(p: f64) -> Result<BoundCurves> {
    unit_param("p", p)?;
    let deficit_log4 = 4.0 * (1.0 - werner_fidelity_under_measurement(p));
    let diag = [p / 3.0, p / 3.0, (3.0 - 2.0 * p) / 6.0, (3.0 - 2.0 * p) / 6.0];
    let spectrum = [1.0 - p, p / 3.0, p / 3.0, p / 3.0];
    Ok(BoundCurves {
        se_bound_rhs: 1.0 + deficit_log4,
        se_bound_lhs: linalg::shannon_entropy(&diag),
        // The measurement output has the same entropy as the exchange, so I_c = 0.
        ic_bound_rhs: 2.0 * deficit_log4,
        ic_bound_lhs: linalg::shannon_entropy(&spectrum) - 2.0,
    })
}

/// `sum_i <i|rho_w|i>^2`
fn werner_fidelity_under_measurement(p: f64) -> f64 {
    (9.0 - 12.0 * p + 8.0 * p * p) / 18.0
}

fn isotropic_fidelity_under_measurement(f: f64) -> f64 {
    (5.0 - 4.0 * f + 8.0 * f * f) / 18.0
}

/// Bound curves for the Werner family as published.
pub fn werner_bound_curves_published(p: f64) -> Result<BoundCurves> {
    unit_param("p", p)?;
    let s_rho = xlog(1.0 - p) * -1.0 - p * if p > 0.0 { (p / 3.0).log2() } else { 0.0 };
    Ok(BoundCurves {
        se_bound_rhs: 3.0 + 8.0 / 3.0 * p - 16.0 / 3.0 * p * p,
        se_bound_lhs: s_rho,
        ic_bound_rhs: 4.0 + 16.0 / 3.0 * p - 32.0 / 9.0 * p * p + xlog(1.0 - p) + xlog(p / 3.0)
            - xlog((3.0 - 2.0 * p) / 6.0) * 2.0,
        ic_bound_lhs: s_rho - 2.0,
    })
}

/// Bound curves for the isotropic family.
pub fn isotropic_bound_curves(f: f64) -> Result<BoundCurves> {
    unit_param("F", f)?;
    let deficit_log4 = 4.0 * (1.0 - isotropic_fidelity_under_measurement(f));
    let diag = [
        (2.0 * f + 1.0) / 6.0,
        (2.0 * f + 1.0) / 6.0,
        (1.0 - f) / 3.0,
        (1.0 - f) / 3.0,
    ];
    let spectrum = [f, (1.0 - f) / 3.0, (1.0 - f) / 3.0, (1.0 - f) / 3.0];
    Ok(BoundCurves {
        se_bound_rhs: 1.0 + deficit_log4,
        se_bound_lhs: linalg::shannon_entropy(&diag),
        ic_bound_rhs: 2.0 * deficit_log4,
        ic_bound_lhs: linalg::shannon_entropy(&spectrum) - 2.0,
    })
}

/// Bound curves for the isotropic family as published.
pub fn isotropic_bound_curves_published(f: f64) -> Result<BoundCurves> {
    unit_param("F", f)?;
    let s_rho = -xlog(f) - 3.0 * xlog((1.0 - f) / 3.0);
    Ok(BoundCurves {
        se_bound_rhs: 35.0 / 9.0 + 8.0 / 9.0 * f - 16.0 / 9.0 * f * f,
        se_bound_lhs: s_rho,
        ic_bound_rhs: 52.0 / 9.0 + 16.0 / 9.0 * f * (1.0 - 2.0 * f) + xlog((1.0 - f) / 3.0) + xlog(f)
            - xlog((1.0 + 2.0 * f) / 6.0) * 2.0,
        ic_bound_lhs: s_rho - 2.0,
    })
}

/// Both sides of `V + F_e <= (1 + lambda_max tr rho^s)/2` for the Werner
/// state under the computational-basis measurement.
pub fn werner_tradeoff_sides(p: f64, ab: AlphaBeta) -> Result<(f64, f64)> {
    unit_param("p", p)?;
    let s = ab.sum();
    let u = 3f64.powf(s - 1.0) * sp(p, 1.0 - s) * sp(1.0 - p, s);
    let v = 3f64.powf(-s) * sp(p, s) * sp(1.0 - p, 1.0 - s);
    let lhs = 0.75 + p / 6.0 + 0.25 * (u + v);
    let rhs = if p <= 0.75 {
        0.75 + 0.25 * (3f64.powf(1.0 - s) * sp(p, s) * sp(1.0 - p, 1.0 - s) + u)
    } else {
        p / 2.0 + 0.5 * (1.0 + u)
    };
    Ok((lhs, rhs))
}

/// Isotropic analogue of [`werner_tradeoff_sides`].
pub fn isotropic_tradeoff_sides(f: f64, ab: AlphaBeta) -> Result<(f64, f64)> {
    unit_param("F", f)?;
    let s = ab.sum();
    let u = 3f64.powf(-s) * sp(f, 1.0 - s) * sp(1.0 - f, s);
    let v = 3f64.powf(s - 1.0) * sp(f, s) * sp(1.0 - f, 1.0 - s);
    let lhs = 11.0 / 12.0 - f / 6.0 + 0.25 * (u + v);
    let rhs = if f < 0.25 {
        1.0 + 0.5 * (v - f)
    } else {
        0.75 + 0.25 * (3f64.powf(1.0 - s) * sp(f, 1.0 - s) * sp(1.0 - f, s) + v)
    };
    Ok((lhs, rhs))
}

/// One-parameter two-qubit state families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Werner,
    Isotropic,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Werner => "werner",
            Family::Isotropic => "isotropic",
        }
    }

    pub fn state(&self, x: f64) -> Result<DensityMatrix> {
        match self {
            Family::Werner => states::werner(x),
            Family::Isotropic => states::isotropic(x),
        }
    }

    /// Uncertainty under the basis channel.
    pub fn vq(&self, x: f64, ab: AlphaBeta) -> Result<VqPair> {
        match self {
            Family::Werner => werner_vq(x, ab),
            Family::Isotropic => isotropic_vq(x, ab),
        }
    }

    pub fn bound_curves(&self, x: f64) -> Result<BoundCurves> {
        match self {
            Family::Werner => werner_bound_curves(x),
            Family::Isotropic => isotropic_bound_curves(x),
        }
    }

    pub fn bound_curves_published(&self, x: f64) -> Result<BoundCurves> {
        match self {
            Family::Werner => werner_bound_curves_published(x),
            Family::Isotropic => isotropic_bound_curves_published(x),
        }
    }

    pub fn tradeoff_sides(&self, x: f64, ab: AlphaBeta) -> Result<(f64, f64)> {
        match self {
            Family::Werner => werner_tradeoff_sides(x, ab),
            Family::Isotropic => isotropic_tradeoff_sides(x, ab),
        }
    }
}

/// Location and value of the largest classical uncertainty found.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassicalMaximum {
    pub family_param: f64,
    pub alpha: f64,
    pub beta: f64,
    pub value: f64,
}

fn classical_at(family: Family, x: f64, a: f64, b: f64) -> Option<f64> {
    if !(0.0..=1.0).contains(&x) || a < 0.0 || b < 0.0 || a + b > 1.0 {
        return None;
    }
    let ab = AlphaBeta::new(a, b).ok()?;
    family.vq(x, ab).ok().map(|v| v.classical())
}

/// Maximizes the classical uncertainty of a family under the basis channel
/// over `(x, alpha, beta)`: a grid scan with spacing `1/grid`, then a
/// compass search from the best grid point.
pub fn maximize_classical(family: Family, grid: usize) -> ClassicalMaximum {
    let g = grid.max(2) as f64;
    let mut best = ClassicalMaximum {
        family_param: 0.0,
        alpha: 0.0,
        beta: 0.0,
        value: f64::NEG_INFINITY,
    };
    let n = grid.max(2);
    for i in 0..=n {
        let x = i as f64 / g;
        for j in 0..=n {
            for k in 0..=(n - j) {
                let (a, b) = (j as f64 / g, k as f64 / g);
                if let Some(c) = classical_at(family, x, a, b) {
                    if c > best.value {
                        best = ClassicalMaximum {
                            family_param: x,
                            alpha: a,
                            beta: b,
                            value: c,
                        };
                    }
                }
            }
        }
    }
    let mut step = 1.0 / g;
    let mut pt = [best.family_param, best.alpha, best.beta];
    while step > 1e-9 {
        let mut moved = false;
        for axis in 0..3 {
            for dir in [-1.0, 1.0] {
                let mut trial = pt;
                trial[axis] += dir * step;
                if let Some(c) = classical_at(family, trial[0], trial[1], trial[2]) {
                    if c > best.value + 1e-15 {
                        best.value = c;
                        pt = trial;
                        moved = true;
                    }
                }
            }
        }
        if !moved {
            step /= 2.0;
        }
    }
    best.family_param = pt[0];
    best.alpha = pt[1];
    best.beta = pt[2];
    best
}
