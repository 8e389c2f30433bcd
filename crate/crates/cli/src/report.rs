//! Report envelopes, exit-code mapping, and the quotient report with its
//! round-trip parser.

use crate::doc::DocumentError;
use crate::json::{
    matrix_rows_value, object, parse_usize_list, parse_vector, usize_list_value, vector_value,
};
use serde_json::{json, Map, Value};
use toriq_core::quotient::{CartierReport, QuotientPresentation};
use toriq_core::{Error, LatticeMatrix, LatticeVector};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATIONS: i32 = 1;
pub const EXIT_PARSE_IO: i32 = 2;
pub const EXIT_OBSTRUCTION: i32 = 3;
pub const EXIT_CERTIFICATE: i32 = 4;

/// Stable machine-readable code for a library error.
pub fn error_code(err: &Error) -> &'static str {
    match err {
        Error::TorsionPic(_) => "TORSION_PIC",
        Error::NotEnoughCartier(_) => "NOT_ENOUGH_CARTIER",
        Error::CertificateFailure(_) => "CERTIFICATE_FAILURE",
        Error::NonIntegralRestriction => "NON_INTEGRAL_RESTRICTION",
        Error::DegreeUnreachable => "DEGREE_UNREACHABLE",
        Error::SpanDeficient => "SPAN_DEFICIENT",
        Error::InvalidFan(_) => "INVALID_FAN",
        Error::Dimension(_) => "BAD_REQUEST",
        Error::Internal(_) => "INTERNAL_INCONSISTENCY",
        _ => "ERROR",
    }
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::TorsionPic(_) | Error::NotEnoughCartier(_) => EXIT_OBSTRUCTION,
        Error::InvalidFan(_) | Error::SpanDeficient => EXIT_VIOLATIONS,
        Error::Dimension(_) => EXIT_PARSE_IO,
        Error::CertificateFailure(_)
        | Error::NonIntegralRestriction
        | Error::DegreeUnreachable
        | Error::Internal(_) => EXIT_CERTIFICATE,
        _ => EXIT_CERTIFICATE,
    }
}

/// Assembles the common envelope around a payload.
pub fn envelope(
    command: &str,
    fan_name: &str,
    warnings: &[String],
    payload: Value,
    error: Option<(&str, String)>,
) -> Value {
    let mut map = Map::new();
    map.insert("command".into(), json!(command));
    map.insert("fan".into(), json!(fan_name));
    map.insert(
        "status".into(),
        json!(if error.is_none() { "ok" } else { "error" }),
    );
    if let Some((code, detail)) = error {
        map.insert(
            "error".into(),
            object(vec![("code", json!(code)), ("detail", json!(detail))]),
        );
    }
    map.insert(
        "warnings".into(),
        Value::Array(warnings.iter().map(|w| json!(w)).collect()),
    );
    if let Value::Object(extra) = payload {
        for (k, v) in extra {
            map.insert(k, v);
        }
    }
    Value::Object(map)
}

pub fn cartier_table_value(report: &CartierReport) -> Value {
    let table: Vec<Value> = report
        .entries
        .iter()
        .map(|e| {
            object(vec![
                ("cone_ray_ids", usize_list_value(&e.ray_ids)),
                ("ok", json!(e.ok())),
                (
                    "witness",
                    e.witness
                        .as_ref()
                        .map(|w| vector_value(w.coords()))
                        .unwrap_or(Value::Null),
                ),
            ])
        })
        .collect();
    object(vec![
        ("all_ok", json!(report.all_ok())),
        ("table", Value::Array(table)),
    ])
}

fn monomial_value(exponent: &LatticeVector, degree: &LatticeVector) -> Value {
    object(vec![
        ("exponent", vector_value(exponent)),
        ("degree", vector_value(degree)),
    ])
}

/// The full quotient presentation as JSON.
pub fn quotient_value(
    qp: &QuotientPresentation,
    cartier: &CartierReport,
    full_irrelevant: bool,
) -> Result<Value, Error> {
    let sl = qp.support();
    let fan = qp.fan();
    let mut map = Map::new();
    map.insert("lattice_rank".into(), json!(fan.lattice_rank()));
    map.insert("sf_rank".into(), json!(sl.rank()));
    map.insert("pic_rank".into(), json!(sl.pic_rank()));
    map.insert("iota_matrix".into(), matrix_rows_value(sl.iota_matrix()));
    map.insert(
        "pic_projection".into(),
        matrix_rows_value(&sl.pic().projection),
    );
    map.insert(
        "fan_rays".into(),
        Value::Array(fan.rays().iter().map(vector_value).collect()),
    );
    map.insert(
        "l_rays".into(),
        Value::Array(qp.l_rays().iter().map(vector_value).collect()),
    );
    map.insert(
        "hat_cones".into(),
        Value::Array(
            fan.cones()
                .iter()
                .enumerate()
                .map(|(i, fc)| {
                    object(vec![
                        ("ray_ids", usize_list_value(&fc.ray_ids)),
                        ("dim", json!(qp.hat_face(i).dim)),
                        ("simplicial", json!(fc.cone.is_simplicial())),
                    ])
                })
                .collect(),
        ),
    );
    map.insert(
        "maximal_cone_indices".into(),
        usize_list_value(qp.maximal_cone_indices()),
    );
    map.insert(
        "distinguished_monomials".into(),
        Value::Array(
            qp.maximal_cone_indices()
                .iter()
                .map(|&i| {
                    object(vec![
                        ("cone_index", json!(i)),
                        ("exponent", vector_value(qp.h_dist(i).coords())),
                    ])
                })
                .collect(),
        ),
    );
    map.insert(
        "ring_generators".into(),
        Value::Array(
            qp.ring_generators()?
                .iter()
                .map(|g| monomial_value(&g.exponent, &g.degree))
                .collect(),
        ),
    );
    let ideal = qp.irrelevant_ideal()?;
    let codim = qp.codim_check()?;
    map.insert(
        "irrelevant_ideal".into(),
        object(vec![
            (
                "radical_generators",
                Value::Array(
                    ideal
                        .radical_generators
                        .iter()
                        .map(|g| monomial_value(&g.exponent, &g.degree))
                        .collect(),
                ),
            ),
            (
                "vanishing_faces",
                Value::Array(
                    ideal
                        .vanishing_faces
                        .iter()
                        .map(|f| {
                            object(vec![
                                ("ray_ids", usize_list_value(&f.ray_ids)),
                                ("dim", json!(f.dim)),
                            ])
                        })
                        .collect(),
                ),
            ),
            (
                "codimension",
                codim.map(|c| json!(c)).unwrap_or(Value::Null),
            ),
        ]),
    );
    if full_irrelevant {
        map.insert(
            "full_irrelevant_generators".into(),
            Value::Array(
                qp.full_irrelevant_generators()?
                    .iter()
                    .map(|g| monomial_value(&g.exponent, &g.degree))
                    .collect(),
            ),
        );
    }
    map.insert(
        "interior_witness".into(),
        vector_value(qp.interior_witness()),
    );
    map.insert("enough_cartier".into(), cartier_table_value(cartier));
    Ok(Value::Object(map))
}

/// The quotient report fields read back from JSON.
#[derive(Debug)]
pub struct ParsedQuotient {
    pub lattice_rank: usize,
    pub sf_rank: usize,
    pub pic_rank: usize,
    pub iota_matrix: Vec<LatticeVector>,
    pub pic_projection: Vec<LatticeVector>,
    pub fan_rays: Vec<LatticeVector>,
    pub l_rays: Vec<LatticeVector>,
    pub hat_cones: Vec<(Vec<usize>, usize, bool)>,
    pub maximal_cone_indices: Vec<usize>,
    pub distinguished_monomials: Vec<(usize, LatticeVector)>,
    pub ring_generators: Vec<(LatticeVector, LatticeVector)>,
    pub radical_generators: Vec<(LatticeVector, LatticeVector)>,
    pub vanishing_faces: Vec<(Vec<usize>, usize)>,
    pub codimension: Option<usize>,
    pub interior_witness: LatticeVector,
}

fn field<'a>(obj: &'a Value, key: &str) -> Result<&'a Value, DocumentError> {
    obj.get(key)
        .ok_or_else(|| DocumentError(format!("report is missing field {key}")))
}

fn vectors(value: &Value, key: &str) -> Result<Vec<LatticeVector>, DocumentError> {
    value
        .as_array()
        .and_then(|a| a.iter().map(parse_vector).collect())
        .ok_or_else(|| DocumentError(format!("field {key} is not a vector list")))
}

fn monomials(value: &Value, key: &str) -> Result<Vec<(LatticeVector, LatticeVector)>, DocumentError> {
    value
        .as_array()
        .and_then(|a| {
            a.iter()
                .map(|m| {
                    Some((
                        parse_vector(m.get("exponent")?)?,
                        parse_vector(m.get("degree")?)?,
                    ))
                })
                .collect()
        })
        .ok_or_else(|| DocumentError(format!("field {key} is not a monomial list")))
}

pub fn parse_quotient_report(value: &Value) -> Result<ParsedQuotient, DocumentError> {
    let usize_of = |v: &Value, key: &str| -> Result<usize, DocumentError> {
        v.as_u64()
            .map(|n| n as usize)
            .ok_or_else(|| DocumentError(format!("field {key} is not an integer")))
    };
    let ideal = field(value, "irrelevant_ideal")?;
    Ok(ParsedQuotient {
        lattice_rank: usize_of(field(value, "lattice_rank")?, "lattice_rank")?,
        sf_rank: usize_of(field(value, "sf_rank")?, "sf_rank")?,
        pic_rank: usize_of(field(value, "pic_rank")?, "pic_rank")?,
        iota_matrix: vectors(field(value, "iota_matrix")?, "iota_matrix")?,
        pic_projection: vectors(field(value, "pic_projection")?, "pic_projection")?,
        fan_rays: vectors(field(value, "fan_rays")?, "fan_rays")?,
        l_rays: vectors(field(value, "l_rays")?, "l_rays")?,
        hat_cones: field(value, "hat_cones")?
            .as_array()
            .and_then(|a| {
                a.iter()
                    .map(|c| {
                        Some((
                            parse_usize_list(c.get("ray_ids")?)?,
                            c.get("dim")?.as_u64()? as usize,
                            c.get("simplicial")?.as_bool()?,
                        ))
                    })
                    .collect()
            })
            .ok_or_else(|| DocumentError("field hat_cones is malformed".into()))?,
        maximal_cone_indices: parse_usize_list(field(value, "maximal_cone_indices")?)
            .ok_or_else(|| DocumentError("field maximal_cone_indices is malformed".into()))?,
        distinguished_monomials: field(value, "distinguished_monomials")?
            .as_array()
            .and_then(|a| {
                a.iter()
                    .map(|m| {
                        Some((
                            m.get("cone_index")?.as_u64()? as usize,
                            parse_vector(m.get("exponent")?)?,
                        ))
                    })
                    .collect()
            })
            .ok_or_else(|| DocumentError("field distinguished_monomials is malformed".into()))?,
        ring_generators: monomials(field(value, "ring_generators")?, "ring_generators")?,
        radical_generators: monomials(
            field(ideal, "radical_generators")?,
            "radical_generators",
        )?,
        vanishing_faces: field(ideal, "vanishing_faces")?
            .as_array()
            .and_then(|a| {
                a.iter()
                    .map(|f| {
                        Some((
                            parse_usize_list(f.get("ray_ids")?)?,
                            f.get("dim")?.as_u64()? as usize,
                        ))
                    })
                    .collect()
            })
            .ok_or_else(|| DocumentError("field vanishing_faces is malformed".into()))?,
        codimension: match field(ideal, "codimension")? {
            Value::Null => None,
            v => Some(usize_of(v, "codimension")?),
        },
        interior_witness: parse_vector(field(value, "interior_witness")?)
            .ok_or_else(|| DocumentError("field interior_witness is malformed".into()))?,
    })
}

fn matrix_rows(m: &LatticeMatrix) -> Vec<LatticeVector> {
    (0..m.rows()).map(|i| m.row(i)).collect()
}

/// Lists every field of the parsed report that differs from the in-memory
/// presentation. Empty means the round trip is exact.
pub fn diff_quotient(parsed: &ParsedQuotient, qp: &QuotientPresentation) -> Vec<String> {
    let sl = qp.support();
    let fan = qp.fan();
    let mut diffs = Vec::new();
    let mut check = |name: &str, same: bool| {
        if !same {
            diffs.push(name.to_string());
        }
    };
    check("lattice_rank", parsed.lattice_rank == fan.lattice_rank());
    check("sf_rank", parsed.sf_rank == sl.rank());
    check("pic_rank", parsed.pic_rank == sl.pic_rank());
    check(
        "iota_matrix",
        parsed.iota_matrix == matrix_rows(sl.iota_matrix()),
    );
    check(
        "pic_projection",
        parsed.pic_projection == matrix_rows(&sl.pic().projection),
    );
    check("fan_rays", parsed.fan_rays == fan.rays());
    check("l_rays", parsed.l_rays == qp.l_rays());
    check(
        "hat_cones",
        parsed.hat_cones.len() == fan.cones().len()
            && parsed.hat_cones.iter().enumerate().all(|(i, (ids, dim, simp))| {
                let fc = &fan.cones()[i];
                ids == &fc.ray_ids
                    && *dim == qp.hat_face(i).dim
                    && *simp == fc.cone.is_simplicial()
            }),
    );
    check(
        "maximal_cone_indices",
        parsed.maximal_cone_indices == qp.maximal_cone_indices(),
    );
    check(
        "distinguished_monomials",
        parsed.distinguished_monomials.len() == qp.maximal_cone_indices().len()
            && parsed
                .distinguished_monomials
                .iter()
                .zip(qp.maximal_cone_indices())
                .all(|((i, exp), &j)| *i == j && exp == qp.h_dist(j).coords()),
    );
    match qp.ring_generators() {
        Ok(gens) => check(
            "ring_generators",
            parsed.ring_generators.len() == gens.len()
                && parsed
                    .ring_generators
                    .iter()
                    .zip(gens)
                    .all(|((e, d), g)| e == &g.exponent && d == &g.degree),
        ),
        Err(_) => check("ring_generators", false),
    }
    match qp.irrelevant_ideal() {
        Ok(ideal) => {
            check(
                "radical_generators",
                parsed.radical_generators.len() == ideal.radical_generators.len()
                    && parsed
                        .radical_generators
                        .iter()
                        .zip(&ideal.radical_generators)
                        .all(|((e, d), g)| e == &g.exponent && d == &g.degree),
            );
            check(
                "vanishing_faces",
                parsed.vanishing_faces.len() == ideal.vanishing_faces.len()
                    && parsed
                        .vanishing_faces
                        .iter()
                        .zip(&ideal.vanishing_faces)
                        .all(|((ids, dim), f)| ids == &f.ray_ids && *dim == f.dim),
            );
            check("codimension", parsed.codimension == ideal.codimension);
        }
        Err(_) => check("irrelevant_ideal", false),
    }
    check(
        "interior_witness",
        &parsed.interior_witness == qp.interior_witness(),
    );
    diffs
}

/// Serializes a report deterministically: object keys are emitted in sorted
/// order by the JSON library, so equal reports are equal bytes.
pub fn to_bytes(report: &Value) -> Vec<u8> {
    let mut text = serde_json::to_string_pretty(report).expect("report serialization");
    text.push('\n');
    text.into_bytes()
}
