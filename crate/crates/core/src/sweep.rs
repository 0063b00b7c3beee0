//! Parameter sweeps over a state family, a channel and an `(alpha, beta)`
//! grid, emitted as CSV.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channels::KrausChannel;
use crate::error::{Error, Result};
use crate::infotheory::InfoSummary;
use crate::schema;
use crate::states::{self, BlochQubit, DensityMatrix};
use crate::uncertainty::AlphaBeta;

/// Inclusive grid: either `start..=stop` in steps of `step`, or a list.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Grid {
    Range { start: f64, stop: f64, step: f64 },
    Values { values: Vec<f64> },
}

impl Grid {
    pub fn single(x: f64) -> Self {
        Grid::Values { values: vec![x] }
    }

    pub fn range(start: f64, stop: f64, step: f64) -> Self {
        Grid::Range { start, stop, step }
    }

    /// Grid points, snapped to twelve decimals so that `0.01 * 3` reads `0.03`.
    pub fn points(&self, name: &'static str) -> Result<Vec<f64>> {
        let pts = match self {
            Grid::Values { values } => values.clone(),
            Grid::Range { start, stop, step } => {
                if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
                    return Err(Error::Schema(format!("grid {name} has non-finite bounds")));
                }
                if *step <= 0.0 {
                    return Err(Error::Schema(format!("grid {name} needs a positive step")));
                }
                if stop < start {
                    return Err(Error::EmptyGrid(name));
                }
                let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
                (0..n)
                    .map(|i| ((start + i as f64 * step) * 1e12).round() / 1e12)
                    .collect()
            }
        };
        if pts.is_empty() {
            return Err(Error::EmptyGrid(name));
        }
        if let Some(x) = pts.iter().find(|x| !x.is_finite()) {
            return Err(Error::Schema(format!("grid {name} contains {x}")));
        }
        Ok(pts)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepFamily {
    Werner,
    Isotropic,
    /// Qubit states `r n` along a fixed direction `n`, swept over `r`.
    #[serde(alias = "bloch-grid")]
    BlochGrid,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Output {
    V,
    Q,
    C,
    Fe,
    Se,
    Ic,
    #[serde(rename = "bounds")]
    Bounds,
}

impl Output {
    fn columns(&self) -> &'static [&'static str] {
        match self {
            Output::V => &["V"],
            Output::Q => &["Q"],
            Output::C => &["C"],
            Output::Fe => &["Fe"],
            Output::Se => &["Se"],
            Output::Ic => &["Ic"],
            Output::Bounds => &[
                "tradeoff_lhs",
                "tradeoff_rhs",
                "se_bound_lhs",
                "se_bound_rhs",
                "ic_bound_lhs",
                "ic_bound_rhs",
                "fano_lhs",
                "fano_rhs",
            ],
        }
    }

    fn values(&self, s: &InfoSummary, out: &mut Vec<f64>) {
        match self {
            Output::V => out.push(s.total_v),
            Output::Q => out.push(s.quantum_q),
            Output::C => out.push(s.classical_c),
            Output::Fe => out.push(s.fe),
            Output::Se => out.push(s.entropy_exchange),
            Output::Ic => out.push(s.coherent_information),
            Output::Bounds => {
                for b in [
                    s.fidelity_tradeoff(),
                    s.entropy_exchange_bound(),
                    s.coherent_information_bound(),
                    s.quantum_fano(),
                ] {
                    out.push(b.lhs);
                    out.push(b.rhs);
                }
            }
        }
    }
}

fn default_direction() -> [f64; 3] {
    [0.0, 0.0, 1.0]
}

fn default_outputs() -> Vec<Output> {
    vec![Output::V, Output::Q, Output::C]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub family: SweepFamily,
    /// Channel source: a `preset:` string or a path to a channel file.
    pub channel: String,
    pub param: Grid,
    pub alpha: Grid,
    pub beta: Grid,
    #[serde(default = "default_outputs")]
    pub outputs: Vec<Output>,
    #[serde(default = "default_direction")]
    pub direction: [f64; 3],
}

impl SweepSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Schema(format!("sweep spec: {e}")))
    }

    /// Built-in Werner/isotropic sweeps, numbered 1-6.
    pub fn figure(n: u32) -> Result<Self> {
        let full = Grid::range(0.0, 1.0, 0.01);
        let line = |family, channel: &str, outputs| SweepSpec {
            family,
            channel: channel.to_string(),
            param: full.clone(),
            alpha: Grid::single(0.2),
            beta: Grid::single(0.3),
            outputs,
            direction: default_direction(),
        };
        let surfaces = |family, params: Vec<f64>| SweepSpec {
            family,
            channel: "preset:basis_channel:d=4".into(),
            param: Grid::Values { values: params },
            alpha: full.clone(),
            beta: full.clone(),
            outputs: default_outputs(),
            direction: default_direction(),
        };
        let basis = "preset:basis_channel:d=4";
        let measure = "preset:measurement:d=4";
        Ok(match n {
            1 => line(SweepFamily::Werner, basis, default_outputs()),
            2 => surfaces(SweepFamily::Werner, vec![0.25, 0.5, 0.75, 1.0]),
            3 => line(SweepFamily::Isotropic, basis, default_outputs()),
            4 => surfaces(SweepFamily::Isotropic, vec![0.0, 0.25, 0.5, 0.75]),
            5 => line(SweepFamily::Werner, measure, vec![Output::Bounds]),
            6 => line(SweepFamily::Isotropic, measure, vec![Output::Bounds]),
            _ => return Err(Error::Schema(format!("no figure {n}; choose 1-6"))),
        })
    }

    fn state(&self, x: f64) -> Result<DensityMatrix> {
        match self.family {
            SweepFamily::Werner => states::werner(x),
            SweepFamily::Isotropic => states::isotropic(x),
            SweepFamily::BlochGrid => {
                let [a, b, c] = self.direction;
                let len = (a * a + b * b + c * c).sqrt();
                if !(len > 0.0) {
                    return Err(Error::Schema("bloch-grid direction must be non-zero".into()));
                }
                let r = BlochQubit::new(x * a / len, x * b / len, x * c / len)?;
                Ok(states::from_bloch(&r))
            }
        }
    }

    pub fn header(&self) -> Vec<&'static str> {
        let mut h = vec!["family_param", "alpha", "beta"];
        for o in &self.outputs {
            h.extend_from_slice(o.columns());
        }
        h
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepTable {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
    /// Grid points with `alpha + beta > 1`, left out of `rows`.
    pub skipped: usize,
}

impl SweepTable {
    /// CSV with LF line endings and shortest round-trip number formatting.
    pub fn to_csv(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for row in &self.rows {
            for (i, x) in row.iter().enumerate() {
                if i > 0 {
                    s.push(',');
                }
                write!(s, "{x}").expect("writing to a String");
            }
            s.push('\n');
        }
        s
    }
}

/// Evaluates `spec` with the channel already loaded. Rows are ordered by
/// `(param, alpha, beta)` grid index whatever the evaluation order.
pub fn run_with_channel(spec: &SweepSpec, phi: &KrausChannel) -> Result<SweepTable> {
    let params = spec.param.points("param")?;
    let alphas = spec.alpha.points("alpha")?;
    let betas = spec.beta.points("beta")?;
    if spec.outputs.is_empty() {
        return Err(Error::Schema("sweep spec lists no outputs".into()));
    }
    let mut pairs = Vec::new();
    let mut skipped = 0;
    for &a in &alphas {
        for &b in &betas {
            match AlphaBeta::new(a, b) {
                Ok(ab) => pairs.push(ab),
                Err(_) if a >= 0.0 && b >= 0.0 => skipped += 1,
                Err(e) => return Err(e),
            }
        }
    }
    if pairs.is_empty() {
        return Err(Error::EmptyGrid("alpha x beta"));
    }
    let states = params
        .iter()
        .map(|&x| spec.state(x))
        .collect::<Result<Vec<_>>>()?;
    let points: Vec<(usize, AlphaBeta)> = (0..params.len())
        .flat_map(|i| pairs.iter().map(move |&ab| (i, ab)))
        .collect();
    let rows = points
        .par_iter()
        .map(|&(i, ab)| {
            let s = InfoSummary::compute(&states[i], phi, ab)?;
            let mut row = vec![params[i], ab.alpha(), ab.beta()];
            for o in &spec.outputs {
                o.values(&s, &mut row);
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepTable {
        header: spec.header(),
        rows,
        skipped: skipped * params.len(),
    })
}

pub fn run(spec: &SweepSpec) -> Result<SweepTable> {
    let phi = schema::load_channel(&spec.channel)?;
    run_with_channel(spec, &phi)
}
