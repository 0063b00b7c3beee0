//! JSON and `preset:` input formats for states and channels.
//!
//! Complex entries are `[re, im]` pairs (a bare number is read as real);
//! matrices are row-major nested arrays. A state is `{"matrix": M}`,
//! `{"bloch": [r1, r2, r3]}` or `{"preset": NAME, ...params}`; a channel is
//! `{"kraus": [M, ...]}` or `{"preset": NAME, ...params}`.
//!
//! On the command line a source is either a path to such a file or
//! `preset:NAME[:key=value,key=value]`.

use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::channels::{self, KrausChannel};
use crate::error::{Error, Result};
use crate::linalg::{c64, ComplexMatrix};
use crate::states::{self, BlochQubit, DensityMatrix, PureState};

fn schema(msg: impl Into<String>) -> Error {
    Error::Schema(msg.into())
}

fn parse_complex(v: &Value) -> Result<Complex64> {
    match v {
        Value::Number(n) => Ok(c64(n.as_f64().ok_or_else(|| schema("bad number"))?, 0.0)),
        Value::Array(pair) if pair.len() == 2 => {
            let re = pair[0].as_f64().ok_or_else(|| schema("complex entry must hold numbers"))?;
            let im = pair[1].as_f64().ok_or_else(|| schema("complex entry must hold numbers"))?;
            Ok(c64(re, im))
        }
        _ => Err(schema(format!("expected [re, im], got {v}"))),
    }
}

pub fn parse_matrix(v: &Value) -> Result<ComplexMatrix> {
    let rows = v.as_array().ok_or_else(|| schema("matrix must be an array of rows"))?;
    let n = rows.len();
    if n == 0 {
        return Err(schema("matrix is empty"));
    }
    let mut entries = Vec::with_capacity(n * n);
    for row in rows {
        let row = row.as_array().ok_or_else(|| schema("matrix row must be an array"))?;
        if row.len() != n {
            return Err(schema(format!("matrix is not square: row of length {} in {n} rows", row.len())));
        }
        for x in row {
            entries.push(parse_complex(x)?);
        }
    }
    ComplexMatrix::from_row_major(n, &entries)
}

pub fn matrix_to_json(m: &ComplexMatrix) -> Value {
    let n = m.dim();
    Value::Array(
        (0..n)
            .map(|i| {
                Value::Array(
                    (0..n)
                        .map(|j| {
                            let z = m.get(i, j);
                            json!([z.re, z.im])
                        })
                        .collect(),
                )
            })
            .collect(),
    )
}

/// Named numeric parameters of a preset.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Params(BTreeMap<String, f64>);

impl Params {
    fn from_json(obj: &Map<String, Value>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (k, v) in obj {
            if k == "preset" {
                continue;
            }
            let x = v.as_f64().ok_or_else(|| schema(format!("preset parameter {k} must be a number")))?;
            map.insert(k.clone(), x);
        }
        Ok(Params(map))
    }

    fn from_spec(spec: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for item in spec.split(',').filter(|s| !s.is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| schema(format!("preset parameter {item:?} is not key=value")))?;
            let x: f64 = v
                .trim()
                .parse()
                .map_err(|_| schema(format!("preset parameter {k} = {v:?} is not a number")))?;
            map.insert(k.trim().to_string(), x);
        }
        Ok(Params(map))
    }

    fn get(&self, key: &str) -> Result<f64> {
        self.0
            .get(key)
            .copied()
            .ok_or_else(|| schema(format!("missing preset parameter {key}")))
    }

    fn get_or(&self, key: &str, default: f64) -> f64 {
        self.0.get(key).copied().unwrap_or(default)
    }

    fn count(&self, key: &str, default: Option<usize>) -> Result<usize> {
        let x = match (self.0.get(key), default) {
            (Some(&x), _) => x,
            (None, Some(d)) => return Ok(d),
            (None, None) => return Err(schema(format!("missing preset parameter {key}"))),
        };
        if x >= 0.0 && x.fract() == 0.0 && x < 1e6 {
            Ok(x as usize)
        } else {
            Err(schema(format!("preset parameter {key} = {x} must be a non-negative integer")))
        }
    }

    fn seed(&self) -> Result<u64> {
        Ok(self.count("seed", Some(0))? as u64)
    }

    fn check_known(&self, name: &str, known: &[&str]) -> Result<()> {
        match self.0.keys().find(|k| !known.contains(&k.as_str())) {
            Some(k) => Err(schema(format!("preset {name} has no parameter {k}"))),
            None => Ok(()),
        }
    }
}

pub fn state_preset(name: &str, p: &Params) -> Result<DensityMatrix> {
    match name {
        "werner" => {
            p.check_known(name, &["p"])?;
            states::werner(p.get("p")?)
        }
        "isotropic" => {
            p.check_known(name, &["F", "f"])?;
            states::isotropic(p.get("F").or_else(|_| p.get("f"))?)
        }
        "bloch" => {
            p.check_known(name, &["r1", "r2", "r3"])?;
            let b = BlochQubit::new(p.get_or("r1", 0.0), p.get_or("r2", 0.0), p.get_or("r3", 0.0))?;
            Ok(states::from_bloch(&b))
        }
        "mixed" => {
            p.check_known(name, &["d"])?;
            let d = p.count("d", None)?;
            if d == 0 {
                return Err(schema("dimension must be positive"));
            }
            Ok(DensityMatrix::maximally_mixed(d))
        }
        "basis" => {
            p.check_known(name, &["d", "i"])?;
            let d = p.count("d", None)?;
            let i = p.count("i", Some(0))?;
            if i >= d {
                return Err(schema(format!("basis index {i} is not below d = {d}")));
            }
            Ok(PureState::basis(d, i).projector())
        }
        "random" => {
            p.check_known(name, &["d", "rank", "seed"])?;
            let d = p.count("d", None)?;
            let rank = p.count("rank", Some(d))?;
            states::random_density(d, rank, p.seed()?)
        }
        "random_pure" => {
            p.check_known(name, &["d", "seed"])?;
            let d = p.count("d", None)?;
            if d == 0 {
                return Err(schema("dimension must be positive"));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(p.seed()?);
            Ok(states::random_pure_with(&mut rng, d).projector())
        }
        other => Err(schema(format!("unknown state preset {other:?}"))),
    }
}

pub fn channel_preset(name: &str, p: &Params) -> Result<KrausChannel> {
    let dim = |p: &Params| -> Result<usize> {
        let d = p.count("d", None)?;
        if d == 0 {
            Err(schema("dimension must be positive"))
        } else {
            Ok(d)
        }
    };
    match name {
        "amplitude_damping" => {
            p.check_known(name, &["p"])?;
            channels::amplitude_damping(p.get("p")?)
        }
        "phase_damping" => {
            p.check_known(name, &["p"])?;
            channels::phase_damping(p.get("p")?)
        }
        "depolarizing" => {
            p.check_known(name, &["p"])?;
            channels::depolarizing(p.get("p")?)
        }
        "hadamard_decoherence" => {
            p.check_known(name, &["theta"])?;
            channels::hadamard_decoherence(p.get("theta")?)
        }
        "identity" => {
            p.check_known(name, &["d"])?;
            Ok(KrausChannel::identity(dim(p)?))
        }
        "basis_channel" => {
            p.check_known(name, &["d"])?;
            channels::basis_channel(dim(p)?)
        }
        "measurement" => {
            p.check_known(name, &["d"])?;
            channels::computational_measurement(dim(p)?)
        }
        "random" => {
            p.check_known(name, &["d", "k", "seed"])?;
            let d = dim(p)?;
            let k = p.count("k", Some(d))?;
            let mut rng = ChaCha8Rng::seed_from_u64(p.seed()?);
            channels::random_channel(&mut rng, d, k)
        }
        other => Err(schema(format!("unknown channel preset {other:?}"))),
    }
}

pub fn state_from_json(v: &Value) -> Result<DensityMatrix> {
    let obj = v.as_object().ok_or_else(|| schema("state must be a JSON object"))?;
    if let Some(m) = obj.get("matrix") {
        return DensityMatrix::new(parse_matrix(m)?);
    }
    if let Some(b) = obj.get("bloch") {
        let r = b
            .as_array()
            .filter(|a| a.len() == 3)
            .ok_or_else(|| schema("bloch must be [r1, r2, r3]"))?;
        let c = |i: usize| r[i].as_f64().ok_or_else(|| schema("bloch entries must be numbers"));
        return Ok(states::from_bloch(&BlochQubit::new(c(0)?, c(1)?, c(2)?)?));
    }
    if let Some(name) = obj.get("preset") {
        let name = name.as_str().ok_or_else(|| schema("preset must be a string"))?;
        return state_preset(name, &Params::from_json(obj)?);
    }
    Err(schema("state needs one of \"matrix\", \"bloch\", \"preset\""))
}

pub fn channel_from_json(v: &Value) -> Result<KrausChannel> {
    let obj = v.as_object().ok_or_else(|| schema("channel must be a JSON object"))?;
    if let Some(k) = obj.get("kraus") {
        let ops = k
            .as_array()
            .ok_or_else(|| schema("kraus must be an array of matrices"))?
            .iter()
            .map(parse_matrix)
            .collect::<Result<Vec<_>>>()?;
        return KrausChannel::new(ops);
    }
    if let Some(name) = obj.get("preset") {
        let name = name.as_str().ok_or_else(|| schema("preset must be a string"))?;
        return channel_preset(name, &Params::from_json(obj)?);
    }
    Err(schema("channel needs one of \"kraus\", \"preset\""))
}

pub fn channel_to_json(phi: &KrausChannel) -> Value {
    json!({ "kraus": phi.kraus_ops().iter().map(matrix_to_json).collect::<Vec<_>>() })
}

pub fn state_to_json(rho: &DensityMatrix) -> Value {
    json!({ "matrix": matrix_to_json(rho.matrix()) })
}

/// Splits `preset:NAME[:params]`; `None` when `source` is not a preset.
fn split_preset(source: &str) -> Option<Result<(&str, Params)>> {
    let rest = source.strip_prefix("preset:")?;
    let (name, params) = rest.split_once(':').unwrap_or((rest, ""));
    Some(Params::from_spec(params).map(|p| (name, p)))
}

fn read_json(path: &str) -> Result<Value> {
    let text = std::fs::read_to_string(Path::new(path)).map_err(|e| Error::Io {
        path: path.to_string(),
        message: e.to_string(),
    })?;
    serde_json::from_str(&text).map_err(|e| schema(format!("{path}: {e}")))
}

/// State from a file path or `preset:` string.
pub fn load_state(source: &str) -> Result<DensityMatrix> {
    match split_preset(source) {
        Some(r) => {
            let (name, p) = r?;
            state_preset(name, &p)
        }
        None => state_from_json(&read_json(source)?),
    }
}

/// Channel from a file path or `preset:` string.
pub fn load_channel(source: &str) -> Result<KrausChannel> {
    match split_preset(source) {
        Some(r) => {
            let (name, p) = r?;
            channel_preset(name, &p)
        }
        None => channel_from_json(&read_json(source)?),
    }
}
