//! JSON conventions shared by all reports: snake_case keys, integer vectors
//! as arrays, and integers as JSON numbers while they fit in 64 bits,
//! switching to decimal strings beyond that.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};
use toriq_core::{LatticeMatrix, LatticeVector};

pub fn int_value(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(small) => json!(small),
        None => json!(n.to_str_radix(10)),
    }
}

pub fn vector_value(v: &LatticeVector) -> Value {
    Value::Array(v.0.iter().map(int_value).collect())
}

pub fn matrix_rows_value(m: &LatticeMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| {
                Value::Array((0..m.cols()).map(|j| int_value(m.get(i, j))).collect())
            })
            .collect(),
    )
}

pub fn usize_list_value(ids: &[usize]) -> Value {
    Value::Array(ids.iter().map(|&i| json!(i)).collect())
}

pub fn parse_int(value: &Value) -> Option<BigInt> {
    match value {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Some(BigInt::from(i))
            } else {
                n.as_u64().map(BigInt::from)
            }
        }
        Value::String(s) => s.parse::<BigInt>().ok(),
        _ => None,
    }
}

pub fn parse_vector(value: &Value) -> Option<LatticeVector> {
    let entries = value
        .as_array()?
        .iter()
        .map(parse_int)
        .collect::<Option<Vec<_>>>()?;
    Some(LatticeVector::new(entries))
}

pub fn parse_usize_list(value: &Value) -> Option<Vec<usize>> {
    value
        .as_array()?
        .iter()
        .map(|v| v.as_u64().map(|n| n as usize))
        .collect()
}

pub fn object(entries: Vec<(&str, Value)>) -> Value {
    let mut map = Map::new();
    for (k, v) in entries {
        map.insert(k.to_string(), v);
    }
    Value::Object(map)
}
