//! JSON input files.

use std::path::Path;

use serde_json::Value;
use toric_mle::model::{Binomial, DataVector, LatticePolytope, Scaling};
use toric_mle::phylo::{PhyloTree, TreeSpec};
use toric_mle::rational::{parse_rational, Rational};
use toric_mle::tfp::GradedConfig;
use toric_mle::Error;

use crate::error::{CliError, CliResult};

fn shown(path: &Path) -> String {
    path.display().to_string()
}

pub fn read_json(path: &Path) -> CliResult<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io { path: shown(path), message: e.to_string() })?;
    serde_json::from_str(&text).map_err(|e| CliError::Json { path: shown(path), message: e.to_string() })
}

fn decode<T: serde::de::DeserializeOwned>(path: &Path, v: Value) -> CliResult<T> {
    serde_json::from_value(v).map_err(|e| CliError::Json { path: shown(path), message: e.to_string() })
}

fn field<'a>(path: &Path, v: &'a Value, key: &str) -> CliResult<&'a Value> {
    v.get(key).ok_or_else(|| CliError::Json { path: shown(path), message: format!("missing field `{key}`") })
}

/// A rational from `"num/den"`, an integer, or a decimal number.
pub fn rational(v: &Value) -> CliResult<Rational> {
    match v {
        Value::String(s) => Ok(parse_rational(s)?),
        Value::Number(n) => Ok(parse_rational(&n.to_string())?),
        other => Err(Error::Parse(format!("expected a rational number, got {other}")).into()),
    }
}

pub fn rationals(v: &Value) -> CliResult<Vec<Rational>> {
    v.as_array()
        .ok_or_else(|| CliError::Core(Error::Parse(format!("expected an array, got {v}"))))?
        .iter()
        .map(rational)
        .collect()
}

pub struct Model {
    pub polytope: LatticePolytope,
    pub scaling: Scaling,
}

/// `{"points": [[int,...],...], "scaling": ["num/den",...]}`; scaling defaults to ones.
pub fn model(path: &Path) -> CliResult<Model> {
    let v = read_json(path)?;
    let points: Vec<Vec<i64>> = decode(path, field(path, &v, "points")?.clone())?;
    let polytope = LatticePolytope::new(points)?;
    let scaling = match v.get("scaling") {
        Some(s) => Scaling::new(rationals(s)?)?,
        None => Scaling::ones(polytope.len()),
    };
    if scaling.len() != polytope.len() {
        return Err(Error::Dimension(format!("{} points but {} scaling entries", polytope.len(), scaling.len())).into());
    }
    Ok(Model { polytope, scaling })
}

pub struct Data {
    pub counts: Vec<u64>,
    pub labels: Option<Vec<String>>,
}

/// `{"counts": [int,...], "labels": [...]}`; labels are optional.
pub fn data(path: &Path) -> CliResult<Data> {
    let v = read_json(path)?;
    let counts: Vec<u64> = decode(path, field(path, &v, "counts")?.clone())?;
    let labels: Option<Vec<String>> = match v.get("labels") {
        Some(l) => Some(decode(path, l.clone())?),
        None => None,
    };
    Ok(Data { counts, labels })
}

pub fn data_vector(path: &Path) -> CliResult<DataVector> {
    Ok(DataVector::new(data(path)?.counts)?)
}

pub fn tree(path: &Path) -> CliResult<PhyloTree> {
    let spec: TreeSpec = decode(path, read_json(path)?)?;
    Ok(PhyloTree::from_spec(&spec)?)
}

pub fn graded_config(path: &Path) -> CliResult<GradedConfig> {
    let cfg: GradedConfig = decode(path, read_json(path)?)?;
    cfg.validate()?;
    Ok(cfg)
}

/// `{"generators": ["p1p4-p2p3", ...]}` or a bare list.
pub fn binomials(path: &Path) -> CliResult<Vec<Binomial>> {
    let v = read_json(path)?;
    let list = v.get("generators").cloned().unwrap_or(v);
    let strings: Vec<String> = decode(path, list)?;
    Ok(strings.iter().map(|s| Binomial::parse(s)).collect::<toric_mle::Result<_>>()?)
}

/// `{"C": [[...],[...],[...]]}` or a bare 3x3 array.
pub fn veronese(path: &Path) -> CliResult<[[Rational; 3]; 3]> {
    let v = read_json(path)?;
    let m = v.get("C").cloned().unwrap_or(v);
    let rows = m.as_array().filter(|r| r.len() == 3).ok_or_else(|| Error::Dimension("C must be 3x3".into()))?;
    let mut out: Vec<[Rational; 3]> = Vec::with_capacity(3);
    for r in rows {
        let r = rationals(r)?;
        let r: [Rational; 3] = r.try_into().map_err(|_| Error::Dimension("C must be 3x3".into()))?;
        out.push(r);
    }
    Ok(out.try_into().expect("three rows"))
}

/// `{"theta": [...]}` or a bare list of rationals.
pub fn theta(path: &Path) -> CliResult<Vec<Rational>> {
    let v = read_json(path)?;
    rationals(v.get("theta").unwrap_or(&v))
}
