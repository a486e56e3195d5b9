//! JSON instance files.
//!
//! A discrete instance lists the measure as a table keyed by comma-separated
//! 0-based indices (`""` is the empty set), plus `A` and the values of `f`:
//!
//! ```json
//! {"n": 3, "measure": {"0": 0.5, "1": 0.5, "2": 0.5, "0,1": 1, "0,2": 1, "1,2": 1, "0,1,2": 2},
//!  "A": [0, 1], "f": [1, 0.5, 0], "mode": "strict"}
//! ```
//!
//! An interval instance gives a closed-form measure, a domain and `f` as a
//! piecewise map:
//!
//! ```json
//! {"measure": {"kind": "lebesgue"}, "domain": [0, 5],
//!  "f": {"segments": [{"lo": 0, "hi": "inf", "kind": "affine", "params": [0, 1], "mono": "inc"}]}}
//! ```
//!
//! Both may carry the transform `H` and the options of a bound check
//! (`op`, `conj`, `star`, `slope`, `pivot`, `p`, `c_grid`).

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::binops::{semicopula, BinaryOpSpec, MixedOpSpec};
use crate::bounds::BoundInstance;
use crate::extreal::{ExtReal, SignedExtReal};
use crate::measure::{DiscreteMeasure, FiniteSpace, IntervalMeasure, StorageMode, Subset};
use crate::profile::Instance;
use crate::transforms::{HSpec, PiecewiseMap};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MeasureSpec {
    Interval(IntervalMeasure),
    Table(BTreeMap<String, ExtReal>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FunctionSpec {
    Values(Vec<SignedExtReal>),
    Map(HSpec),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub measure: MeasureSpec,
    #[serde(rename = "A", default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<[f64; 2]>,
    pub f: FunctionSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<StorageMode>,
    #[serde(rename = "H", default, skip_serializing_if = "Option::is_none")]
    pub h: Option<HSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub op: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conj: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub star: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slope: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pivot: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_grid: Option<Vec<f64>>,
}

/// Resolves a conjunction or semicopula name, with or without its
/// `tnorm:` / `semicopula:` prefix.
pub fn parse_conj(name: &str) -> Result<BinaryOpSpec> {
    let inner = name.strip_prefix("tnorm:").or_else(|| name.strip_prefix("semicopula:")).unwrap_or(name);
    semicopula(inner)
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("instance files serialize")
    }

    pub fn to_instance(&self) -> Result<Instance> {
        match (&self.measure, &self.f) {
            (MeasureSpec::Table(table), FunctionSpec::Values(values)) => {
                let n = self.n.unwrap_or(values.len());
                if values.len() != n {
                    return Err(Error::InvalidValue(format!("f has {} values for n = {n}", values.len())));
                }
                let space = FiniteSpace::new(n)?;
                let stored = table
                    .iter()
                    .map(|(k, v)| Ok((Subset::parse_key(k)?, *v)))
                    .collect::<Result<Vec<_>>>()?;
                let measure = DiscreteMeasure::from_values(space, stored, self.mode.unwrap_or_default())?;
                let a = match &self.a {
                    Some(idx) => {
                        if let Some(&bad) = idx.iter().find(|&&i| i >= n) {
                            return Err(Error::MalformedSubset { mask: 1u64 << bad.min(63), n });
                        }
                        Subset::from_indices(idx.iter().copied())
                    }
                    None => space.full(),
                };
                Instance::signed(measure, a, values.clone())
            }
            (MeasureSpec::Interval(m), FunctionSpec::Map(spec)) => {
                let [lo, hi] = self
                    .domain
                    .ok_or_else(|| Error::InvalidValue("interval instance needs \"domain\": [lo, hi]".into()))?;
                Instance::interval(*m, lo, hi, PiecewiseMap::from_spec(spec)?)
            }
            (MeasureSpec::Table(_), FunctionSpec::Map(_)) => {
                Err(Error::InvalidValue("a measure table needs f as a list of values".into()))
            }
            (MeasureSpec::Interval(_), FunctionSpec::Values(_)) => {
                Err(Error::InvalidValue("an interval measure needs f as a piecewise map".into()))
            }
        }
    }

    pub fn transform(&self) -> Result<Option<PiecewiseMap>> {
        self.h.as_ref().map(PiecewiseMap::from_spec).transpose()
    }

    /// The instance with its bound options; `H` must be present.
    pub fn to_bound_instance(&self) -> Result<BoundInstance> {
        let h = self.transform()?.ok_or_else(|| Error::InvalidValue("instance has no \"H\"".into()))?;
        let mut bi = BoundInstance::new(self.to_instance()?, h);
        if let Some(op) = &self.op {
            bi.op = BinaryOpSpec::builtin(op)?;
        }
        if let Some(c) = &self.conj {
            bi.conj = Some(parse_conj(c)?);
        }
        if let Some(s) = &self.star {
            bi.star = MixedOpSpec::builtin(s)?;
        }
        bi.slope = self.slope;
        bi.pivot = self.pivot;
        bi.p = self.p;
        bi.c_grid = self.c_grid.clone();
        Ok(bi)
    }

    pub fn from_instance(inst: &Instance) -> Self {
        let (n, measure, a, domain, f, mode) = match inst {
            Instance::Discrete { measure, a, f } => {
                let table = measure
                    .space()
                    .subsets()
                    .filter(|s| !s.is_empty())
                    .map(|s| (s.key(), measure.value(s)))
                    .collect();
                (
                    Some(measure.space().n()),
                    MeasureSpec::Table(table),
                    Some(a.iter().collect()),
                    None,
                    FunctionSpec::Values(f.clone()),
                    Some(StorageMode::Strict),
                )
            }
            Instance::Interval { measure, lo, hi, f } => {
                (None, MeasureSpec::Interval(*measure), None, Some([*lo, *hi]), FunctionSpec::Map(f.to_spec()), None)
            }
        };
        InstanceFile {
            n,
            measure,
            a,
            domain,
            f,
            mode,
            h: None,
            op: None,
            conj: None,
            star: None,
            slope: None,
            pivot: None,
            p: None,
            c_grid: None,
        }
    }

    pub fn from_bound_instance(bi: &BoundInstance) -> Self {
        let mut file = Self::from_instance(&bi.instance);
        file.h = Some(bi.h.to_spec());
        file.op = Some(bi.op.name().to_string());
        file.conj = bi.conj.as_ref().map(|c| c.name().to_string());
        file.star = Some(bi.star.name().to_string());
        file.slope = bi.slope;
        file.pivot = bi.pivot;
        file.p = bi.p;
        file.c_grid = bi.c_grid.clone();
        file
    }
}
