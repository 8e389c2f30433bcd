//! The five subcommand pipelines. Each returns the report together with the
//! process exit code.

use crate::doc::FanDocument;
use crate::json::{object, usize_list_value, vector_value};
use crate::report::{
    cartier_table_value, envelope, error_code, exit_code, quotient_value, EXIT_CERTIFICATE,
    EXIT_OK, EXIT_VIOLATIONS,
};
use num_traits::Zero;
use serde_json::{json, Value};
use toriq_core::fan::Fan;
use toriq_core::graded::{
    chart_contraction, global_sections, homunit_factorize, monomial_primes,
    overlap_unit_certificate, twisted_sections_on_chart, verify_nagspec, SectionSpace,
};
use toriq_core::quotient::{build_quotient, check_enough_cartier, QuotientPresentation};
use toriq_core::support::SupportLattice;
use toriq_core::{Error, Int, LatticeVector};

pub struct Outcome {
    pub report: Value,
    pub exit: i32,
}

fn error_outcome(command: &str, name: &str, warnings: &[String], err: Error) -> Outcome {
    let report = envelope(
        command,
        name,
        warnings,
        json!({}),
        Some((error_code(&err), err.to_string())),
    );
    Outcome {
        report,
        exit: exit_code(&err),
    }
}

fn validation_payload(fan: &Fan) -> Value {
    let report = fan.validation();
    let violations: Vec<Value> = report
        .violations
        .iter()
        .map(|v| {
            object(vec![
                ("code", json!(v.kind.code())),
                ("detail", json!(v.detail.clone())),
            ])
        })
        .collect();
    let fan_warnings: Vec<Value> = report
        .warnings
        .iter()
        .map(|v| {
            object(vec![
                ("code", json!(v.kind.code())),
                ("detail", json!(v.detail.clone())),
            ])
        })
        .collect();
    object(vec![
        ("lattice_rank", json!(fan.lattice_rank())),
        ("ray_count", json!(fan.rays().len())),
        ("cone_count", json!(fan.cones().len())),
        (
            "maximal_cone_count",
            json!(fan.maximal_cones().count()),
        ),
        ("valid", json!(fan.is_valid())),
        ("violations", Value::Array(violations)),
        ("fan_warnings", Value::Array(fan_warnings)),
    ])
}

pub fn cmd_validate(doc: &FanDocument, warnings: &[String]) -> Outcome {
    let fan = match doc.build_fan() {
        Ok(fan) => fan,
        Err(e) => {
            return error_outcome(
                "validate",
                &doc.name,
                warnings,
                Error::InvalidFan(e.to_string()),
            )
        }
    };
    let payload = validation_payload(&fan);
    let exit = if fan.is_valid() { EXIT_OK } else { EXIT_VIOLATIONS };
    let error = (!fan.is_valid()).then(|| {
        (
            "FAN_VIOLATIONS",
            format!("{} fan axiom violations", fan.validation().violations.len()),
        )
    });
    Outcome {
        report: envelope("validate", &doc.name, warnings, payload, error),
        exit,
    }
}

/// Builds the fan and the support lattice, the shared front of every
/// pipeline past validation.
fn prepare(doc: &FanDocument) -> Result<(Fan, SupportLattice), Error> {
    let fan = doc
        .build_fan()
        .map_err(|e| Error::InvalidFan(e.to_string()))?;
    fan.require_valid_spanning()?;
    let sl = SupportLattice::compute(&fan)?;
    Ok((fan, sl))
}

fn analyze_payload(sl: &SupportLattice) -> Result<Value, Error> {
    let cartier = check_enough_cartier(sl)?;
    Ok(object(vec![
        ("lattice_rank", json!(sl.fan().lattice_rank())),
        ("ray_count", json!(sl.fan().rays().len())),
        ("sf_rank", json!(sl.rank())),
        ("pic_rank", json!(sl.pic_rank())),
        ("torsion_free", json!(true)),
        ("enough_cartier", cartier_table_value(&cartier)),
    ]))
}

pub fn cmd_analyze(doc: &FanDocument, warnings: &[String]) -> Outcome {
    let sl = match prepare(doc) {
        Ok((_, sl)) => sl,
        Err(e) => return error_outcome("analyze", &doc.name, warnings, e),
    };
    match analyze_payload(&sl) {
        Ok(payload) => Outcome {
            report: envelope("analyze", &doc.name, warnings, payload, None),
            exit: EXIT_OK,
        },
        Err(e) => error_outcome("analyze", &doc.name, warnings, e),
    }
}

pub fn cmd_quotient(doc: &FanDocument, warnings: &[String], full_irrelevant: bool) -> Outcome {
    let (qp, cartier) = match prepare(doc).and_then(|(_, sl)| {
        let cartier = check_enough_cartier(&sl)?;
        let qp = build_quotient(sl)?;
        Ok((qp, cartier))
    }) {
        Ok(pair) => pair,
        Err(e) => return error_outcome("quotient", &doc.name, warnings, e),
    };
    match quotient_value(&qp, &cartier, full_irrelevant) {
        Ok(payload) => Outcome {
            report: envelope("quotient", &doc.name, warnings, payload, None),
            exit: EXIT_OK,
        },
        Err(e) => error_outcome("quotient", &doc.name, warnings, e),
    }
}

fn sections_payload(
    qp: &QuotientPresentation,
    degree: &LatticeVector,
    bound: u32,
) -> Result<Value, Error> {
    let global = match global_sections(qp, degree)? {
        SectionSpace::Finite(monomials) => object(vec![
            ("finite", json!(true)),
            ("count", json!(monomials.len())),
            (
                "monomials",
                Value::Array(
                    monomials
                        .iter()
                        .map(|m| {
                            object(vec![
                                ("exponent", vector_value(&m.exponent)),
                                ("degree", vector_value(&m.degree)),
                            ])
                        })
                        .collect(),
                ),
            ),
        ]),
        SectionSpace::Infinite { ray } => object(vec![
            ("finite", json!(false)),
            ("witness_ray", vector_value(&ray)),
        ]),
    };
    let mut charts = Vec::new();
    for &i in qp.maximal_cone_indices() {
        let chart = twisted_sections_on_chart(qp, degree, i, bound)?;
        charts.push(object(vec![
            ("cone_index", json!(i)),
            (
                "cone_ray_ids",
                usize_list_value(&qp.fan().cones()[i].ray_ids),
            ),
            ("generator", vector_value(&chart.generator)),
            (
                "generator_unit_exponent",
                json!(chart.generator_unit_exponent),
            ),
            (
                "character_images",
                Value::Array(chart.character_images.iter().map(vector_value).collect()),
            ),
            (
                "samples",
                Value::Array(
                    chart
                        .samples
                        .iter()
                        .map(|(x, k)| {
                            object(vec![
                                ("exponent", vector_value(x)),
                                ("unit_exponent", json!(k)),
                            ])
                        })
                        .collect(),
                ),
            ),
            (
                "chart_prime_indices",
                usize_list_value(&chart.chart_prime_indices),
            ),
        ]));
    }
    Ok(object(vec![
        ("degree", vector_value(degree)),
        ("global_sections", global),
        ("charts", Value::Array(charts)),
    ]))
}

pub fn cmd_sections(
    doc: &FanDocument,
    warnings: &[String],
    degree: Option<Vec<i64>>,
    bound: u32,
) -> Outcome {
    let qp = match prepare(doc).and_then(|(_, sl)| build_quotient(sl)) {
        Ok(qp) => qp,
        Err(e) => return error_outcome("sections", &doc.name, warnings, e),
    };
    let pic_rank = qp.support().pic_rank();
    let degree = match degree {
        None => LatticeVector::zeros(pic_rank),
        Some(coords) if coords.len() == pic_rank => {
            LatticeVector::new(coords.into_iter().map(Int::from).collect())
        }
        Some(coords) => {
            return error_outcome(
                "sections",
                &doc.name,
                warnings,
                Error::Dimension(format!(
                    "degree has {} coordinates but the Picard rank is {pic_rank}",
                    coords.len()
                )),
            )
        }
    };
    match sections_payload(&qp, &degree, bound) {
        Ok(payload) => Outcome {
            report: envelope("sections", &doc.name, warnings, payload, None),
            exit: EXIT_OK,
        },
        Err(e) => error_outcome("sections", &doc.name, warnings, e),
    }
}

/// Deterministic localized monomials used to exercise the factorization
/// checks: every ring generator shifted by small powers of the chart's
/// distinguished monomial.
fn homunit_samples(qp: &QuotientPresentation, cone_index: usize) -> Result<Vec<LatticeVector>, Error> {
    let h = qp.h_dist(cone_index).coords();
    let mut samples = Vec::new();
    for g in qp.ring_generators()? {
        for k in 0..3i64 {
            samples.push(g.exponent.add(&h.scale(&Int::from(k))));
        }
    }
    samples.push(h.clone());
    samples.sort();
    samples.dedup();
    Ok(samples)
}

fn verify_checks(qp: &QuotientPresentation, bound: u32, checks: &mut Vec<Value>) -> Result<(), Error> {
    fn pass(name: String, checks: &mut Vec<Value>) {
        checks.push(object(vec![
            ("name", json!(name)),
            ("status", json!("pass")),
        ]));
    }

    qp.hat_fan()?;
    pass("lifted_fan".into(), checks);
    qp.codim_check()?;
    pass("codimension".into(), checks);

    for &i in qp.maximal_cone_indices() {
        verify_nagspec(qp, i, bound)?;
        pass(format!("nagspec_cone_{i}"), checks);
    }

    for &i in qp.maximal_cone_indices() {
        for x in homunit_samples(qp, i)? {
            let f = homunit_factorize(qp, i, &x, bound)?;
            let recomposed = qp
                .support()
                .iota(&f.character)?
                .coords()
                .add(&f.residual);
            if recomposed != x {
                return Err(Error::CertificateFailure(
                    "localized factorization does not recompose".into(),
                ));
            }
        }
        pass(format!("homunit_cone_{i}"), checks);
    }

    let primes = monomial_primes(qp)?;
    let face_count = qp.cone_c().face_lattice()?.faces.len();
    if primes.len() != face_count {
        return Err(Error::CertificateFailure(
            "monomial prime count differs from the face count".into(),
        ));
    }
    let surviving = primes.iter().filter(|p| !p.contains_irrelevant).count();
    if surviving != qp.fan().cones().len() {
        return Err(Error::CertificateFailure(
            "primes avoiding the irrelevant ideal do not match the fan cones".into(),
        ));
    }
    pass("monomial_primes".into(), checks);

    let gens = qp.ring_generators()?;
    for p in &primes {
        let member = |x: &LatticeVector| {
            p.face_ray_ids
                .iter()
                .any(|&id| !qp.l_ray(id).dot(x).is_zero())
        };
        for a in gens {
            for b in gens {
                let ab = a.exponent.add(&b.exponent);
                if member(&ab) != (member(&a.exponent) || member(&b.exponent)) {
                    return Err(Error::CertificateFailure(
                        "product membership violates primality".into(),
                    ));
                }
            }
        }
    }
    pass("localization_law".into(), checks);

    for &i in qp.maximal_cone_indices() {
        chart_contraction(qp, &primes, i)?;
        pass(format!("chart_contraction_cone_{i}"), checks);
    }

    if !gens.is_empty() {
        let alpha = gens[0].degree.clone();
        let charts: Vec<_> = qp
            .maximal_cone_indices()
            .iter()
            .map(|&i| twisted_sections_on_chart(qp, &alpha, i, bound))
            .collect::<Result<_, _>>()?;
        for a in &charts {
            for b in &charts {
                overlap_unit_certificate(qp, a, b, bound)?;
            }
        }
        pass("section_trivializations".into(), checks);
    }
    Ok(())
}

pub fn cmd_verify(doc: &FanDocument, warnings: &[String], bound: u32) -> Outcome {
    let qp = match prepare(doc).and_then(|(_, sl)| build_quotient(sl)) {
        Ok(qp) => qp,
        Err(e) => return error_outcome("verify", &doc.name, warnings, e),
    };
    let mut checks = Vec::new();
    match verify_checks(&qp, bound, &mut checks) {
        Ok(()) => {
            let payload = object(vec![
                ("search_bound", json!(bound)),
                ("checks", Value::Array(checks)),
                ("all_passed", json!(true)),
            ]);
            Outcome {
                report: envelope("verify", &doc.name, warnings, payload, None),
                exit: EXIT_OK,
            }
        }
        Err(e) => {
            let payload = object(vec![
                ("search_bound", json!(bound)),
                ("checks", Value::Array(checks)),
                ("all_passed", json!(false)),
            ]);
            let exit = exit_code(&e);
            let report = envelope(
                "verify",
                &doc.name,
                warnings,
                payload,
                Some((error_code(&e), e.to_string())),
            );
            Outcome {
                report,
                exit: if exit == EXIT_OK { EXIT_CERTIFICATE } else { exit },
            }
        }
    }
}
