//! Seeded randomized check of the structural properties of the uncertainty
//! functionals and of the fidelity and entropy bounds.
//!
//! Every `(property, sample)` pair draws from its own ChaCha stream keyed
//! by the run seed, so results do not depend on thread scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channels::{self, KrausChannel, Slot};
use crate::error::{Error, Result};
use crate::infotheory::{self, InfoSummary, BOUND_TOL};
use crate::linalg::{c64, ComplexMatrix};
use crate::states::{self, purify, DensityMatrix};
use crate::uncertainty::{uncertainty_triple, AlphaBeta, UncertaintyTriple};

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyConfig {
    pub seed: u64,
    pub samples: usize,
    pub dims: Vec<usize>,
    /// Used in place of the random channel where a property takes one.
    pub channel: Option<KrausChannel>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 0,
            samples: 500,
            dims: vec![2, 3, 4],
            channel: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub name: String,
    pub samples: usize,
    pub passed: usize,
    /// Smallest slack seen; negative beyond the tolerance means failure.
    pub worst_slack: f64,
    pub worst_sample: usize,
}

impl PropertyReport {
    pub fn ok(&self) -> bool {
        self.passed == self.samples
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub samples: usize,
    pub dims: Vec<usize>,
    pub tolerance: f64,
    pub properties: Vec<PropertyReport>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.properties.iter().all(PropertyReport::ok)
    }

    pub fn property(&self, name: &str) -> Option<&PropertyReport> {
        self.properties.iter().find(|p| p.name == name)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!(
            "seed {} samples {} dims {:?} tolerance {:e}\n",
            self.seed, self.samples, self.dims, self.tolerance
        );
        for p in &self.properties {
            s.push_str(&format!(
                "{:<5} {:<30} {:>5}/{:<5} worst slack {:e} (sample {})\n",
                if p.ok() { "PASS" } else { "FAIL" },
                p.name,
                p.passed,
                p.samples,
                p.worst_slack,
                p.worst_sample
            ));
        }
        s
    }
}

type Check = fn(&mut Sampler) -> Result<f64>;

/// Random inputs for one sample.
pub struct Sampler<'a> {
    rng: ChaCha8Rng,
    dim: usize,
    fixed: Option<&'a KrausChannel>,
}

impl Sampler<'_> {
    fn ab(&mut self) -> AlphaBeta {
        let a: f64 = self.rng.random();
        let pick: f64 = self.rng.random();
        let b = if pick < 0.1 {
            1.0 - a
        } else if pick < 0.15 {
            0.0
        } else {
            self.rng.random::<f64>() * (1.0 - a)
        };
        AlphaBeta::new(a, b).expect("inside the simplex")
    }

    /// `alpha + 2 beta <= 1` and `2 alpha + beta <= 1`.
    fn restricted_ab(&mut self) -> AlphaBeta {
        let a = self.rng.random::<f64>() * 0.5;
        let b_max = ((1.0 - a) / 2.0).min(1.0 - 2.0 * a);
        let b = self.rng.random::<f64>() * b_max;
        AlphaBeta::new(a, b).expect("inside the region")
    }

    fn state(&mut self) -> Result<DensityMatrix> {
        let d = self.dim;
        self.state_of_dim(d)
    }

    /// Ginibre state of random rank, or one quarter of the time a state
    /// whose spectrum spans four decades, to reach the boundary.
    fn state_of_dim(&mut self, d: usize) -> Result<DensityMatrix> {
        if self.rng.random::<f64>() < 0.25 {
            let w: Vec<f64> = (0..d).map(|_| 10f64.powf(-4.0 * self.rng.random::<f64>())).collect();
            let total: f64 = w.iter().sum();
            let probs: Vec<f64> = w.iter().map(|x| x / total).collect();
            let u = self.unitary(d);
            return DensityMatrix::new(ComplexMatrix::from_real_diagonal(&probs))?.conjugate_by(&u);
        }
        let rank = self.rng.random_range(1..=d);
        states::random_density_with(&mut self.rng, d, rank)
    }

    fn full_rank_state(&mut self) -> Result<DensityMatrix> {
        let d = self.dim;
        states::random_density_with(&mut self.rng, d, d)
    }

    fn channel(&mut self) -> Result<KrausChannel> {
        if let Some(phi) = self.fixed {
            return Ok(phi.clone());
        }
        let d = self.dim;
        self.channel_of_dim(d)
    }

    fn channel_of_dim(&mut self, d: usize) -> Result<KrausChannel> {
        let k = self.rng.random_range(1..=d + 2);
        channels::random_channel(&mut self.rng, d, k)
    }

    fn unitary(&mut self, d: usize) -> ComplexMatrix {
        channels::random_unitary(&mut self.rng, d)
    }

    fn weight(&mut self) -> f64 {
        self.rng.random()
    }
}

fn triple(rho: &DensityMatrix, phi: &KrausChannel, ab: AlphaBeta) -> Result<UncertaintyTriple> {
    uncertainty_triple(rho, phi, ab)
}

fn max_diff(a: &UncertaintyTriple, b: &UncertaintyTriple) -> f64 {
    (a.total_v - b.total_v)
        .abs()
        .max((a.quantum_q - b.quantum_q).abs())
        .max((a.classical_c - b.classical_c).abs())
}

fn nonnegativity(s: &mut Sampler) -> Result<f64> {
    let (rho, phi, ab) = (s.state()?, s.channel()?, s.ab());
    let t = triple(&rho, &phi, ab)?;
    Ok(t.total_v.min(t.quantum_q).min(t.classical_c))
}

fn decomposition(s: &mut Sampler) -> Result<f64> {
    let (rho, phi, ab) = (s.state()?, s.channel()?, s.ab());
    Ok(-triple(&rho, &phi, ab)?.decomposition_residual().abs())
}

fn kraus_independence(s: &mut Sampler) -> Result<f64> {
    let (rho, phi, ab) = (s.state()?, s.channel()?, s.ab());
    let n = phi.kraus_ops().len() + s.rng.random_range(0..=2);
    let u = s.unitary(n);
    let mixed = phi.mix_kraus(&u)?;
    Ok(-max_diff(&triple(&rho, &phi, ab)?, &triple(&rho, &mixed, ab)?))
}

fn linearity(s: &mut Sampler) -> Result<f64> {
    let (rho, ab) = (s.state()?, s.ab());
    let (p1, p2) = (s.channel()?, s.channel()?);
    let (w1, w2) = (2.0 * s.weight(), 2.0 * s.weight());
    let combo = KrausChannel::positive_combination(&[(w1, &p1), (w2, &p2)])?;
    let (t1, t2, t) = (triple(&rho, &p1, ab)?, triple(&rho, &p2, ab)?, triple(&rho, &combo, ab)?);
    let expect = UncertaintyTriple {
        total_v: w1 * t1.total_v + w2 * t2.total_v,
        quantum_q: w1 * t1.quantum_q + w2 * t2.quantum_q,
        classical_c: w1 * t1.classical_c + w2 * t2.classical_c,
    };
    Ok(-max_diff(&t, &expect))
}

/// `f(mix) - (w f(rho1) + (1 - w) f(rho2))` for a random two-state mixture.
fn mixture_gap(
    s: &mut Sampler,
    phi: &KrausChannel,
    ab: AlphaBeta,
    f: fn(&UncertaintyTriple) -> f64,
) -> Result<f64> {
    let (r1, r2, w) = (s.state()?, s.state()?, s.weight());
    let mix = DensityMatrix::mixture(&[(w, &r1), (1.0 - w, &r2)])?;
    let at = |r: &DensityMatrix| -> Result<f64> { Ok(f(&triple(r, phi, ab)?)) };
    Ok(at(&mix)? - (w * at(&r1)? + (1.0 - w) * at(&r2)?))
}

fn concavity_v(s: &mut Sampler) -> Result<f64> {
    let (phi, ab) = (s.channel()?, s.ab());
    mixture_gap(s, &phi, ab, |t| t.total_v)
}

fn c_concavity(s: &mut Sampler) -> Result<f64> {
    let (phi, ab) = (s.channel()?, s.ab());
    mixture_gap(s, &phi, ab, |t| t.classical_c)
}

fn q_convexity(s: &mut Sampler) -> Result<f64> {
    let (phi, ab) = (s.channel()?, s.restricted_ab());
    Ok(-mixture_gap(s, &phi, ab, |t| t.quantum_q)?)
}

fn q_convexity_hermitian_kraus(s: &mut Sampler) -> Result<f64> {
    let d = s.dim;
    let k = s.rng.random_range(1..=d + 2);
    let phi = channels::random_hermitian_channel(&mut s.rng, d, k)?;
    let ab = s.restricted_ab();
    Ok(-mixture_gap(s, &phi, ab, |t| t.quantum_q)?)
}

fn unitary_invariance(s: &mut Sampler) -> Result<f64> {
    let (rho, phi, ab) = (s.state()?, s.channel()?, s.ab());
    let u = s.unitary(s.dim);
    let moved = triple(&rho.conjugate_by(&u)?, &phi.conjugate_by(&u)?, ab)?;
    Ok(-max_diff(&triple(&rho, &phi, ab)?, &moved))
}

fn ancillary_independence(s: &mut Sampler) -> Result<f64> {
    let (rho_a, phi, ab) = (s.state()?, s.channel()?, s.ab());
    let db = s.rng.random_range(2..=3);
    let rho_b = s.state_of_dim(db)?;
    let joint = triple(&rho_a.tensor(&rho_b), &phi.tensor_with_identity(Slot::First, db), ab)?;
    Ok(-max_diff(&joint, &triple(&rho_a, &phi, ab)?))
}

/// `V(rho, Phi) >= Q(|psi><psi|, id (x) Phi)` for a purification `psi`.
fn purification_inequality(s: &mut Sampler) -> Result<f64> {
    let (rho, phi, ab) = (s.state()?, s.channel()?, s.ab());
    let p = purify(&rho);
    let extended = phi.tensor_with_identity(Slot::Second, p.ancilla_dim);
    let pure = triple(&p.state.projector(), &extended, ab)?;
    Ok(triple(&rho, &phi, ab)?.total_v - pure.quantum_q)
}

/// `V(rho_A (x) rho_B, Phi_A (x) id + id (x) Phi_B) <= V(rho_A, Phi_A) + V(rho_B, Phi_B)`
fn subadditivity_product(s: &mut Sampler) -> Result<f64> {
    let ab = s.ab();
    let da = s.dim;
    let db = s.rng.random_range(2..=3);
    let (rho_a, rho_b) = (s.state()?, s.state_of_dim(db)?);
    let (phi_a, phi_b) = (s.channel()?, s.channel_of_dim(db)?);
    let sum = KrausChannel::positive_combination(&[
        (1.0, &phi_a.tensor_with_identity(Slot::First, db)),
        (1.0, &phi_b.tensor_with_identity(Slot::Second, da)),
    ])?;
    let lhs = triple(&rho_a.tensor(&rho_b), &sum, ab)?.total_v;
    let rhs = triple(&rho_a, &phi_a, ab)?.total_v + triple(&rho_b, &phi_b, ab)?.total_v;
    Ok(rhs - lhs)
}

/// `Q = 0` when every Kraus operator commutes with the state.
fn q_vanishes_commuting(s: &mut Sampler) -> Result<f64> {
    let d = s.dim;
    let ab = s.ab();
    let u = s.unitary(d);
    let mut probs: Vec<f64> = (0..d).map(|_| s.weight()).collect();
    let total: f64 = probs.iter().sum();
    probs.iter_mut().for_each(|p| *p /= total);
    let rho = DensityMatrix::new(ComplexMatrix::from_real_diagonal(&probs))?.conjugate_by(&u)?;
    let k = s.rng.random_range(1..=3);
    let raw: Vec<Vec<_>> = (0..k)
        .map(|_| (0..d).map(|_| c64(s.weight() - 0.5, s.weight() - 0.5)).collect())
        .collect();
    let ops = (0..k)
        .map(|j| {
            ComplexMatrix::from_fn(d, |r, c| {
                if r != c {
                    return c64(0.0, 0.0);
                }
                let norm = raw.iter().map(|v| v[r].norm_sqr()).sum::<f64>().sqrt();
                raw[j][r] / norm
            })
            .conjugate_by(&u)
        })
        .collect();
    let phi = KrausChannel::new(ops)?;
    Ok(-triple(&rho, &phi, ab)?.quantum_q.abs())
}

fn pure_state_tradeoff(s: &mut Sampler) -> Result<f64> {
    let d = s.dim;
    let psi = states::random_pure_with(&mut s.rng, d).projector();
    let (phi, ab) = (s.channel()?, s.ab());
    Ok(-InfoSummary::compute(&psi, &phi, ab)?.pure_state_residual().abs())
}

fn summary(s: &mut Sampler) -> Result<InfoSummary> {
    let (rho, phi, ab) = (s.state()?, s.channel()?, s.ab());
    InfoSummary::compute(&rho, &phi, ab)
}

fn fidelity_tradeoff(s: &mut Sampler) -> Result<f64> {
    Ok(summary(s)?.fidelity_tradeoff().slack)
}

/// The basis channel has a flat output spectrum, so the trade-off is tight.
fn tradeoff_saturation_basis(s: &mut Sampler) -> Result<f64> {
    let (rho, ab) = (s.state()?, s.ab());
    let phi = channels::basis_channel(s.dim)?;
    Ok(-infotheory::fidelity_tradeoff(&rho, &phi, ab)?.slack.abs())
}

fn entropy_exchange_bound(s: &mut Sampler) -> Result<f64> {
    Ok(summary(s)?.entropy_exchange_bound().slack)
}

fn coherent_information_bound(s: &mut Sampler) -> Result<f64> {
    Ok(summary(s)?.coherent_information_bound().slack)
}

fn quantum_fano(s: &mut Sampler) -> Result<f64> {
    Ok(summary(s)?.quantum_fano().slack)
}

fn entropy_exchange_paths(s: &mut Sampler) -> Result<f64> {
    let (rho, phi) = (s.state()?, s.channel()?);
    let a = infotheory::entropy_exchange(&rho, &phi)?;
    let b = infotheory::entropy_exchange_purified(&rho, &phi)?;
    Ok(-(a - b).abs())
}

fn fidelity_paths(s: &mut Sampler) -> Result<f64> {
    let (rho, phi) = (s.state()?, s.channel()?);
    let a = infotheory::entanglement_fidelity(&rho, &phi)?;
    let b = infotheory::entanglement_fidelity_purified(&rho, &phi)?;
    Ok(-(a - b).abs())
}

/// `V + F_e = 1` for unital channels at `alpha + beta = 1` and full rank.
fn unital_conservation(s: &mut Sampler) -> Result<f64> {
    let rho = s.full_rank_state()?;
    let d = s.dim;
    let k = s.rng.random_range(1..=d + 2);
    let phi = channels::random_hermitian_channel(&mut s.rng, d, k)?;
    let a: f64 = s.weight();
    let ab = AlphaBeta::new(a, 1.0 - a)?;
    Ok(infotheory::unital_conservation(&rho, &phi, ab)?.slack)
}

pub const PROPERTIES: &[(&str, Check)] = &[
    ("nonnegativity", nonnegativity),
    ("decomposition", decomposition),
    ("kraus_independence", kraus_independence),
    ("linearity", linearity),
    ("concavity_v", concavity_v),
    ("unitary_invariance", unitary_invariance),
    ("ancillary_independence", ancillary_independence),
    ("purification_inequality", purification_inequality),
    ("subadditivity_product", subadditivity_product),
    ("q_convexity", q_convexity),
    ("q_convexity_hermitian_kraus", q_convexity_hermitian_kraus),
    ("c_concavity", c_concavity),
    ("q_vanishes_commuting", q_vanishes_commuting),
    ("pure_state_tradeoff", pure_state_tradeoff),
    ("fidelity_tradeoff", fidelity_tradeoff),
    ("tradeoff_saturation_basis", tradeoff_saturation_basis),
    ("unital_conservation", unital_conservation),
    ("entropy_exchange_bound", entropy_exchange_bound),
    ("coherent_information_bound", coherent_information_bound),
    ("quantum_fano", quantum_fano),
    ("entropy_exchange_paths", entropy_exchange_paths),
    ("fidelity_paths", fidelity_paths),
];

fn sample_rng(seed: u64, property: usize, sample: usize) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&(property as u64).to_le_bytes());
    key[16..24].copy_from_slice(&(sample as u64).to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

fn check_config(config: &VerifyConfig) -> Result<Vec<usize>> {
    if config.samples == 0 {
        return Err(Error::out_of_range("samples", 0.0, "[1, inf)"));
    }
    let dims = match &config.channel {
        Some(phi) => vec![phi.dim()],
        None => config.dims.clone(),
    };
    if dims.is_empty() {
        return Err(Error::Schema("no dimensions to verify".into()));
    }
    if let Some(&d) = dims.iter().find(|&&d| !(2..=16).contains(&d)) {
        return Err(Error::out_of_range("dim", d as f64, "[2, 16]"));
    }
    Ok(dims)
}

fn run_index(config: &VerifyConfig, idx: usize) -> Result<PropertyReport> {
    let dims = check_config(config)?;
    let (name, check) = PROPERTIES[idx];
    let slacks = (0..config.samples)
        .into_par_iter()
        .map(|j| {
            let mut s = Sampler {
                rng: sample_rng(config.seed, idx, j),
                dim: dims[j % dims.len()],
                fixed: config.channel.as_ref(),
            };
            check(&mut s)
        })
        .collect::<Result<Vec<f64>>>()?;
    let passed = slacks.iter().filter(|x| **x >= -BOUND_TOL).count();
    let (worst_sample, worst_slack) = slacks
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::INFINITY), |(bi, bx), (i, x)| {
            if x < bx || x.is_nan() && !bx.is_nan() {
                (i, x)
            } else {
                (bi, bx)
            }
        });
    Ok(PropertyReport {
        name: name.to_string(),
        samples: config.samples,
        passed,
        worst_slack,
        worst_sample,
    })
}

pub fn run(config: &VerifyConfig) -> Result<VerifyReport> {
    run_indices(config, (0..PROPERTIES.len()).collect())
}

/// Runs only the named properties, in the order given.
pub fn run_only(config: &VerifyConfig, names: &[String]) -> Result<VerifyReport> {
    let indices = names
        .iter()
        .map(|n| {
            PROPERTIES
                .iter()
                .position(|(p, _)| p == n)
                .ok_or_else(|| Error::Schema(format!("unknown property {n:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    run_indices(config, indices)
}

fn run_indices(config: &VerifyConfig, indices: Vec<usize>) -> Result<VerifyReport> {
    let dims = check_config(config)?;
    let properties = indices
        .into_iter()
        .map(|i| run_index(config, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(VerifyReport {
        seed: config.seed,
        samples: config.samples,
        dims,
        tolerance: BOUND_TOL,
        properties,
    })
}
