//! The on-disk fan format: a JSON document naming the lattice rank, the ray
//! vectors, and the maximal cones as lists of ray indices.

use crate::json::{parse_int, parse_usize_list, vector_value};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde_json::{Map, Value};
use std::collections::BTreeMap;
use toriq_core::fan::Fan;
use toriq_core::LatticeVector;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanDocument {
    pub name: String,
    pub lattice_rank: usize,
    pub rays: Vec<LatticeVector>,
    pub cones: Vec<Vec<usize>>,
    pub metadata: BTreeMap<String, String>,
}

/// A document that cannot describe a fan at all: malformed JSON, missing or
/// ill-typed fields, rays of the wrong length, zero rays, or cone indices
/// referencing no ray.
#[derive(Debug)]
pub struct DocumentError(pub String);

impl std::fmt::Display for DocumentError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for DocumentError {}

fn bad(msg: impl Into<String>) -> DocumentError {
    DocumentError(msg.into())
}

fn content(v: &LatticeVector) -> BigInt {
    v.0.iter()
        .fold(BigInt::zero(), |acc, x| acc.gcd(&x.abs()))
}

impl FanDocument {
    /// Parses a document from JSON text. Rays are normalized to primitive
    /// vectors; each normalization is reported as a warning.
    pub fn parse(text: &str) -> Result<(FanDocument, Vec<String>), DocumentError> {
        let value: Value =
            serde_json::from_str(text).map_err(|e| bad(format!("malformed JSON: {e}")))?;
        let obj = value.as_object().ok_or_else(|| bad("top level is not an object"))?;
        let name = obj
            .get("name")
            .and_then(Value::as_str)
            .unwrap_or("unnamed")
            .to_string();
        let lattice_rank = obj
            .get("lattice_rank")
            .and_then(Value::as_u64)
            .ok_or_else(|| bad("missing or ill-typed lattice_rank"))?
            as usize;
        let rays_value = obj
            .get("rays")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing or ill-typed rays"))?;
        let mut rays = Vec::new();
        let mut warnings = Vec::new();
        for (i, rv) in rays_value.iter().enumerate() {
            let entries = rv
                .as_array()
                .ok_or_else(|| bad(format!("ray {i} is not an array")))?
                .iter()
                .map(parse_int)
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| bad(format!("ray {i} has a non-integer entry")))?;
            if entries.len() != lattice_rank {
                return Err(bad(format!(
                    "ray {i} has length {} but lattice_rank is {lattice_rank}",
                    entries.len()
                )));
            }
            let ray = LatticeVector::new(entries);
            if ray.is_zero() {
                return Err(bad(format!("ray {i} is zero")));
            }
            let c = content(&ray);
            let ray = if c > BigInt::from(1) {
                warnings.push(format!(
                    "ray {i} normalized to primitive by dividing out {c}"
                ));
                LatticeVector::new(ray.0.iter().map(|x| x / &c).collect())
            } else {
                ray
            };
            rays.push(ray);
        }
        let cones_value = obj
            .get("cones")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing or ill-typed cones"))?;
        let mut cones = Vec::new();
        for (i, cv) in cones_value.iter().enumerate() {
            let ids = parse_usize_list(cv)
                .ok_or_else(|| bad(format!("cone {i} is not a list of indices")))?;
            for &id in &ids {
                if id >= rays.len() {
                    return Err(bad(format!(
                        "cone {i} references ray {id} but only {} rays exist",
                        rays.len()
                    )));
                }
            }
            cones.push(ids);
        }
        let mut metadata = BTreeMap::new();
        if let Some(meta) = obj.get("metadata").and_then(Value::as_object) {
            for (k, v) in meta {
                if let Some(s) = v.as_str() {
                    metadata.insert(k.clone(), s.to_string());
                }
            }
        }
        Ok((
            FanDocument {
                name,
                lattice_rank,
                rays,
                cones,
                metadata,
            },
            warnings,
        ))
    }

    pub fn to_value(&self) -> Value {
        let mut map = Map::new();
        map.insert("name".into(), Value::String(self.name.clone()));
        map.insert(
            "lattice_rank".into(),
            Value::Number((self.lattice_rank as u64).into()),
        );
        map.insert(
            "rays".into(),
            Value::Array(self.rays.iter().map(vector_value).collect()),
        );
        map.insert(
            "cones".into(),
            Value::Array(
                self.cones
                    .iter()
                    .map(|ids| {
                        Value::Array(
                            ids.iter().map(|&i| Value::Number((i as u64).into())).collect(),
                        )
                    })
                    .collect(),
            ),
        );
        if !self.metadata.is_empty() {
            let meta: Map<String, Value> = self
                .metadata
                .iter()
                .map(|(k, v)| (k.clone(), Value::String(v.clone())))
                .collect();
            map.insert("metadata".into(), Value::Object(meta));
        }
        Value::Object(map)
    }

    /// Builds the fan, completing faces. Duplicate rays or other structural
    /// defects the core rejects outright are document errors.
    pub fn build_fan(&self) -> Result<Fan, DocumentError> {
        Fan::from_rays_and_cones(self.lattice_rank, self.rays.clone(), self.cones.clone())
            .map_err(|e| bad(format!("unusable fan data: {e}")))
    }
}
