//! The Pic-graded monomial ring attached to a quotient presentation:
//! generators, the degree-zero localization certificates, monomial primes
//! with their chart contractions, and section spaces of twists.

use crate::error::{Error, Result};
use crate::linalg::{kernel_basis, solve_integer, Int, LatticeMatrix, LatticeVector};
use crate::polyhedral::{lattice_points, semigroup_generators, LatticePoints};
use crate::quotient::QuotientPresentation;
use crate::support::PicClass;
use num_traits::{Signed, Zero};

/// A monomial of the graded ring: an exponent vector in the monoid of the
/// quotient cone together with its Picard degree.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct GradedMonomial {
    pub exponent: LatticeVector,
    pub degree: PicClass,
}

/// Exponent bounds tried in order before a certificate search gives up.
fn search_bounds(bound: u32) -> Vec<u32> {
    if bound < 48 {
        vec![bound, 48]
    } else {
        vec![bound]
    }
}

/// Search order 0, 1, -1, 2, -2, ... for signed shift searches.
fn signed_shifts(bound: u32) -> impl Iterator<Item = i64> {
    (0..=i64::from(bound)).flat_map(|k| if k == 0 { vec![0] } else { vec![k, -k] })
}

/// One direction of the degree-zero localization certificate: a character
/// exhibited inside the localized monoid.
#[derive(Clone, Debug)]
pub struct ForwardCert {
    /// Generator of the dual-cone semigroup of the fan cone.
    pub character: LatticeVector,
    /// k >= 0 with iota(character) + k*h lying in the quotient monoid.
    pub exponent: u32,
    /// The witness iota(character) + k*h itself.
    pub lifted: LatticeVector,
}

/// The other direction: a degree-zero localized generator traced back to a
/// character of the fan cone.
#[derive(Clone, Debug)]
pub struct BackwardCert {
    /// Index into `ring_generators`.
    pub generator_index: usize,
    /// Shift k with deg(generator + k*h) = 0.
    pub shift: i64,
    /// The character m with iota(m) = generator + k*h, lying in the dual
    /// cone of the fan cone.
    pub character: LatticeVector,
}

/// Two-sided certificate that the degree-zero part of the localization at
/// the distinguished monomial of a cone is the character semigroup of that
/// cone.
#[derive(Clone, Debug)]
pub struct NagspecCertificate {
    pub cone_index: usize,
    pub forward: Vec<ForwardCert>,
    pub backward: Vec<BackwardCert>,
}

/// Produces the two-sided degree-zero localization certificate for a cone
/// of the fan. Searches exponents up to `bound`, escalating once before
/// reporting failure.
pub fn verify_nagspec(
    qp: &QuotientPresentation,
    cone_index: usize,
    bound: u32,
) -> Result<NagspecCertificate> {
    let mut last = None;
    for b in search_bounds(bound) {
        match nagspec_attempt(qp, cone_index, b) {
            Ok(cert) => return Ok(cert),
            Err(Error::CertificateFailure(msg)) => last = Some(Error::CertificateFailure(msg)),
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one bound attempted"))
}

fn nagspec_attempt(
    qp: &QuotientPresentation,
    cone_index: usize,
    bound: u32,
) -> Result<NagspecCertificate> {
    let sl = qp.support();
    let fc = &qp.fan().cones()[cone_index];
    let h = qp.h_dist(cone_index).coords().clone();
    let characters = semigroup_generators(&fc.cone.dual())?;

    let mut forward = Vec::new();
    for m in &characters {
        let image = sl.iota(m)?.coords().clone();
        let found = (0..=bound).find_map(|k| {
            let lifted = image.add(&h.scale(&Int::from(k)));
            qp.is_monomial(&lifted).then_some((k, lifted))
        });
        let (exponent, lifted) = found.ok_or_else(|| {
            Error::CertificateFailure(format!(
                "no exponent up to {bound} lifts a character of cone {:?} into the monoid",
                fc.ray_ids
            ))
        })?;
        forward.push(ForwardCert {
            character: m.clone(),
            exponent,
            lifted,
        });
    }

    let mut backward = Vec::new();
    for (gi, gen) in qp.ring_generators()?.iter().enumerate() {
        let shift = signed_shifts(bound).find(|&k| {
            let x = gen.exponent.add(&h.scale(&Int::from(k)));
            sl.degree_of_coords(&x).is_zero()
        });
        let Some(k) = shift else { continue };
        let x = gen.exponent.add(&h.scale(&Int::from(k)));
        let f = sl.function_from_coords(&x)?;
        let m = sl.preimage_under_iota(&f).ok_or_else(|| {
            Error::CertificateFailure(
                "degree-zero localized generator is not a character".into(),
            )
        })?;
        let in_dual = fc
            .ray_ids
            .iter()
            .all(|&id| !f.ray_values().0[id].is_negative());
        if !in_dual {
            return Err(Error::CertificateFailure(
                "degree-zero localized generator is negative on the cone".into(),
            ));
        }
        if sl.iota(&m)?.coords() != &x {
            return Err(Error::Internal("character preimage does not recompose".into()));
        }
        backward.push(BackwardCert {
            generator_index: gi,
            shift: k,
            character: m,
        });
    }

    Ok(NagspecCertificate {
        cone_index,
        forward,
        backward,
    })
}

/// The factorization of a localized monomial into a degree-zero character
/// part and a residual support function vanishing on the cone, with unit
/// certificates for both signs of the residual.
#[derive(Clone, Debug)]
pub struct HomunitFactorization {
    /// The character m agreeing with the input on the cone.
    pub character: LatticeVector,
    /// h' = input - iota(m), vanishing on every ray of the cone.
    pub residual: LatticeVector,
    /// k with residual + k*h in the monoid.
    pub unit_pos: u32,
    /// k with -residual + k*h in the monoid.
    pub unit_neg: u32,
}

/// Factors a monomial of the localization at the distinguished monomial of
/// a cone as (character of degree zero) * (unit residual).
pub fn homunit_factorize(
    qp: &QuotientPresentation,
    cone_index: usize,
    exponent: &LatticeVector,
    bound: u32,
) -> Result<HomunitFactorization> {
    let mut last = None;
    for b in search_bounds(bound) {
        match homunit_attempt(qp, cone_index, exponent, b) {
            Ok(f) => return Ok(f),
            Err(Error::CertificateFailure(msg)) => last = Some(Error::CertificateFailure(msg)),
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one bound attempted"))
}

fn homunit_attempt(
    qp: &QuotientPresentation,
    cone_index: usize,
    exponent: &LatticeVector,
    bound: u32,
) -> Result<HomunitFactorization> {
    let sl = qp.support();
    let fan = qp.fan();
    let fc = &fan.cones()[cone_index];
    let f = sl.function_from_coords(exponent)?;
    let rows: Vec<LatticeVector> = fc
        .ray_ids
        .iter()
        .map(|&id| fan.rays()[id].clone())
        .collect();
    let rhs = LatticeVector::new(
        fc.ray_ids
            .iter()
            .map(|&id| f.ray_values().0[id].clone())
            .collect(),
    );
    let system = LatticeMatrix::from_rows(fan.lattice_rank(), &rows);
    let m = solve_integer(&system, &rhs).ok_or(Error::NonIntegralRestriction)?;
    let residual = exponent.sub(sl.iota(&m)?.coords());
    let rf = sl.function_from_coords(&residual)?;
    for &id in &fc.ray_ids {
        if !rf.ray_values().0[id].is_zero() {
            return Err(Error::Internal(
                "residual does not vanish on the cone".into(),
            ));
        }
    }
    let h = qp.h_dist(cone_index).coords();
    let unit_pos = (0..=bound)
        .find(|k| qp.is_monomial(&residual.add(&h.scale(&Int::from(*k)))))
        .ok_or_else(|| {
            Error::CertificateFailure(format!(
                "no exponent up to {bound} makes the residual a monomial"
            ))
        })?;
    let unit_neg = (0..=bound)
        .find(|k| qp.is_monomial(&residual.neg().add(&h.scale(&Int::from(*k)))))
        .ok_or_else(|| {
            Error::CertificateFailure(format!(
                "no exponent up to {bound} makes the negated residual a monomial"
            ))
        })?;
    Ok(HomunitFactorization {
        character: m,
        residual,
        unit_pos,
        unit_neg,
    })
}

/// The monomial prime of a face of the dual quotient cone: the ideal of
/// ring generators whose exponents do not vanish against the face.
#[derive(Clone, Debug)]
pub struct MonomialPrime {
    /// Fan ray ids of the rays spanning the face.
    pub face_ray_ids: Vec<usize>,
    pub face_dim: usize,
    /// Indices into `ring_generators` of the monomials in the prime.
    pub generator_indices: Vec<usize>,
    /// Whether the prime contains the whole irrelevant ideal.
    pub contains_irrelevant: bool,
    /// The fan cone whose lifted face this is, when the face lies in the
    /// lifted fan.
    pub fan_cone_index: Option<usize>,
}

/// One monomial prime per face of the dual quotient cone. Certifies that
/// containing the irrelevant ideal is equivalent to the face lying outside
/// the lifted fan.
pub fn monomial_primes(qp: &QuotientPresentation) -> Result<Vec<MonomialPrime>> {
    let gens = qp.ring_generators()?;
    let lattice = qp.cone_c().face_lattice()?;
    let radicals: Vec<&LatticeVector> = qp
        .maximal_cone_indices()
        .iter()
        .map(|&i| qp.h_dist(i).coords())
        .collect();
    let mut primes = Vec::new();
    for face in &lattice.faces {
        let face_rays: Vec<&LatticeVector> = face
            .ray_indices
            .iter()
            .map(|&p| &qp.cone_c().rays()[p])
            .collect();
        let in_prime =
            |x: &LatticeVector| face_rays.iter().any(|r| !r.dot(x).is_zero());
        let mut ids: Vec<usize> = face
            .ray_indices
            .iter()
            .map(|&p| qp.fan_ray_of_c_ray(p))
            .collect();
        ids.sort_unstable();
        let fan_cone_index = qp
            .fan()
            .cones()
            .iter()
            .position(|fc| fc.ray_ids == ids)
            .filter(|&i| qp.hat_face(i).dim == face.dim);
        let contains_irrelevant = radicals.iter().all(|h| in_prime(h));
        if contains_irrelevant != fan_cone_index.is_none() {
            return Err(Error::CertificateFailure(
                "irrelevant membership disagrees with the lifted fan".into(),
            ));
        }
        let generator_indices: Vec<usize> = gens
            .iter()
            .enumerate()
            .filter(|(_, g)| in_prime(&g.exponent))
            .map(|(i, _)| i)
            .collect();
        primes.push(MonomialPrime {
            face_ray_ids: ids,
            face_dim: face.dim,
            generator_indices,
            contains_irrelevant,
            fan_cone_index,
        });
    }
    Ok(primes)
}

/// The degree-zero contraction of the monomial primes of one chart onto
/// the monomial primes of the character semigroup of the chart's cone.
#[derive(Clone, Debug)]
pub struct ChartContraction {
    pub maximal_cone_index: usize,
    /// Generators of the character semigroup of the cone.
    pub characters: Vec<LatticeVector>,
    /// Per chart prime: index into `monomial_primes` and the indices of the
    /// characters lying in the contracted prime.
    pub entries: Vec<(usize, Vec<usize>)>,
}

/// Contracts the primes of the chart of a maximal cone to the character
/// semigroup. Certifies that the contraction is an inclusion-preserving
/// bijection onto the face primes of the cone.
pub fn chart_contraction(
    qp: &QuotientPresentation,
    primes: &[MonomialPrime],
    maximal_cone_index: usize,
) -> Result<ChartContraction> {
    let fan = qp.fan();
    let fc = &fan.cones()[maximal_cone_index];
    let h = qp.h_dist(maximal_cone_index).coords();
    let characters = semigroup_generators(&fc.cone.dual())?;
    let sigma_set: std::collections::BTreeSet<usize> = fc.ray_ids.iter().copied().collect();
    let mut entries = Vec::new();
    for (pi, prime) in primes.iter().enumerate() {
        let face_rays: Vec<&LatticeVector> = prime
            .face_ray_ids
            .iter()
            .map(|&id| qp.l_ray(id))
            .collect();
        let excludes_h = face_rays.iter().all(|r| r.dot(h).is_zero());
        let is_subface = prime.face_ray_ids.iter().all(|id| sigma_set.contains(id));
        if excludes_h != is_subface {
            return Err(Error::CertificateFailure(
                "chart membership disagrees with the face relation".into(),
            ));
        }
        if !excludes_h {
            continue;
        }
        let contracted: Vec<usize> = characters
            .iter()
            .enumerate()
            .filter(|(_, m)| {
                prime
                    .face_ray_ids
                    .iter()
                    .any(|&id| !m.dot(&fan.rays()[id]).is_zero())
            })
            .map(|(i, _)| i)
            .collect();
        entries.push((pi, contracted));
    }
    // Inclusion-preserving bijection onto the face primes of the cone.
    let face_count = fan
        .cones()
        .iter()
        .filter(|c| c.ray_ids.iter().all(|id| sigma_set.contains(id)))
        .count();
    if entries.len() != face_count {
        return Err(Error::CertificateFailure(
            "chart prime count differs from the face count of the cone".into(),
        ));
    }
    for (i, (pi, ci)) in entries.iter().enumerate() {
        for (j, (pj, cj)) in entries.iter().enumerate() {
            if i == j {
                continue;
            }
            let faces_incl = primes[*pi]
                .face_ray_ids
                .iter()
                .all(|id| primes[*pj].face_ray_ids.contains(id));
            let contracted_incl = ci.iter().all(|x| cj.contains(x));
            if faces_incl != contracted_incl {
                return Err(Error::CertificateFailure(
                    "contraction does not preserve inclusions".into(),
                ));
            }
        }
    }
    Ok(ChartContraction {
        maximal_cone_index,
        characters,
        entries,
    })
}

/// A basis of the degree-alpha graded piece, or a witness ray along which
/// monomials of that degree go on forever.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SectionSpace {
    Finite(Vec<GradedMonomial>),
    Infinite { ray: LatticeVector },
}

/// All monomials of the given degree: lattice points of the fiber of the
/// degree map over alpha inside the quotient cone.
pub fn global_sections(qp: &QuotientPresentation, degree: &PicClass) -> Result<SectionSpace> {
    let sl = qp.support();
    assert_eq!(degree.len(), sl.pic_rank(), "degree coordinate length");
    let projection = &sl.pic().projection;
    let equations: Vec<(LatticeVector, Int)> = (0..sl.pic_rank())
        .map(|i| {
            (
                LatticeVector::new(
                    (0..sl.rank()).map(|j| projection.get(i, j).clone()).collect(),
                ),
                degree.0[i].clone(),
            )
        })
        .collect();
    let inequalities: Vec<LatticeVector> = qp.l_rays().to_vec();
    match lattice_points(sl.rank(), &inequalities, &equations)? {
        LatticePoints::Finite(points) => {
            let mut sections: Vec<GradedMonomial> =
                points.iter().map(|p| qp.monomial(p)).collect();
            sections.sort();
            Ok(SectionSpace::Finite(sections))
        }
        LatticePoints::Unbounded { ray } => Ok(SectionSpace::Infinite { ray }),
    }
}

/// The sections of the twist S(alpha) over the chart of one cone: a single
/// trivializing generator of degree alpha vanishing on the cone, the
/// character images spanning the degree-zero subring, sample degree-alpha
/// monomials certified to be generator multiples, and the chart's primes.
#[derive(Clone, Debug)]
pub struct ChartSections {
    pub cone_index: usize,
    pub degree: PicClass,
    /// Exponent of the trivializing monomial, vanishing on the cone rays.
    pub generator: LatticeVector,
    /// k with generator + k*h in the monoid, placing the generator in the
    /// localization.
    pub generator_unit_exponent: u32,
    /// iota images of the character semigroup generators of the cone.
    pub character_images: Vec<LatticeVector>,
    /// Degree-alpha localized monomials x with the k certifying that
    /// x - generator + k*h lies in the monoid.
    pub samples: Vec<(LatticeVector, u32)>,
    /// Indices into `monomial_primes` of the primes of this chart.
    pub chart_prime_indices: Vec<usize>,
}

/// Computes the chart sections of S(alpha) on the chart of a cone, with
/// stalk certificates at every prime of the chart.
pub fn twisted_sections_on_chart(
    qp: &QuotientPresentation,
    degree: &PicClass,
    cone_index: usize,
    bound: u32,
) -> Result<ChartSections> {
    let mut last = None;
    for b in search_bounds(bound) {
        match twisted_attempt(qp, degree, cone_index, b) {
            Ok(c) => return Ok(c),
            Err(Error::CertificateFailure(msg)) => last = Some(Error::CertificateFailure(msg)),
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one bound attempted"))
}

fn twisted_attempt(
    qp: &QuotientPresentation,
    degree: &PicClass,
    cone_index: usize,
    bound: u32,
) -> Result<ChartSections> {
    let sl = qp.support();
    assert_eq!(degree.len(), sl.pic_rank(), "degree coordinate length");
    let fan = qp.fan();
    let fc = &fan.cones()[cone_index];
    let s = sl.rank();
    // Solve for a representative of degree alpha among the support
    // functions vanishing on the cone.
    let rows: Vec<LatticeVector> = fc.ray_ids.iter().map(|&id| qp.l_ray(id).clone()).collect();
    let vanishing = kernel_basis(&LatticeMatrix::from_rows(s, &rows));
    let embed = LatticeMatrix::from_cols(s, &vanishing);
    let reduced = sl.pic().projection.mul(&embed);
    let y = solve_integer(&reduced, degree).ok_or(Error::DegreeUnreachable)?;
    let generator = embed.mul_vec(&y);
    if &sl.degree_of_coords(&generator) != degree {
        return Err(Error::Internal("chart generator has the wrong degree".into()));
    }
    let h = qp.h_dist(cone_index).coords();
    let generator_unit_exponent = (0..=bound)
        .find(|k| qp.is_monomial(&generator.add(&h.scale(&Int::from(*k)))))
        .ok_or_else(|| {
            Error::CertificateFailure(format!(
                "no exponent up to {bound} places the chart generator in the monoid"
            ))
        })?;

    let characters = semigroup_generators(&fc.cone.dual())?;
    let character_images: Vec<LatticeVector> = characters
        .iter()
        .map(|m| Ok(sl.iota(m)?.coords().clone()))
        .collect::<Result<_>>()?;

    // Degree-alpha sample monomials of the localization: the global
    // sections when finite, otherwise ring generators shifted into degree
    // alpha by powers of the distinguished monomial.
    let mut samples_exp: Vec<LatticeVector> = vec![generator.clone()];
    match global_sections(qp, degree)? {
        SectionSpace::Finite(sections) => {
            samples_exp.extend(sections.into_iter().map(|g| g.exponent));
        }
        SectionSpace::Infinite { .. } => {
            for gen in qp.ring_generators()? {
                let hit = signed_shifts(bound).find(|&k| {
                    let x = gen.exponent.add(&h.scale(&Int::from(k)));
                    &sl.degree_of_coords(&x) == degree
                });
                if let Some(k) = hit {
                    samples_exp.push(gen.exponent.add(&h.scale(&Int::from(k))));
                }
            }
        }
    }
    samples_exp.sort();
    samples_exp.dedup();
    let mut samples = Vec::new();
    for x in samples_exp {
        let diff = x.sub(&generator);
        let k = (0..=bound)
            .find(|k| qp.is_monomial(&diff.add(&h.scale(&Int::from(*k)))))
            .ok_or_else(|| {
                Error::CertificateFailure(format!(
                    "no exponent up to {bound} divides a degree-alpha monomial by the chart generator"
                ))
            })?;
        samples.push((x, k));
    }

    let primes = monomial_primes(qp)?;
    let sigma_set: std::collections::BTreeSet<usize> = fc.ray_ids.iter().copied().collect();
    let chart_prime_indices: Vec<usize> = primes
        .iter()
        .enumerate()
        .filter(|(_, p)| p.face_ray_ids.iter().all(|id| sigma_set.contains(id)))
        .map(|(i, _)| i)
        .collect();
    // At each chart prime the distinguished monomial is invertible, so the
    // sample certificates transfer to every stalk.
    for &pi in &chart_prime_indices {
        let orthogonal = primes[pi]
            .face_ray_ids
            .iter()
            .all(|&id| qp.l_ray(id).dot(h).is_zero());
        if !orthogonal {
            return Err(Error::CertificateFailure(
                "distinguished monomial is not invertible at a chart prime".into(),
            ));
        }
    }

    Ok(ChartSections {
        cone_index,
        degree: degree.clone(),
        generator,
        generator_unit_exponent,
        character_images,
        samples,
        chart_prime_indices,
    })
}

/// Certifies that the trivializing generators of two charts differ by a
/// unit on the overlap: both signed differences become monomials after
/// adding a multiple of the sum of the two distinguished monomials.
pub fn overlap_unit_certificate(
    qp: &QuotientPresentation,
    a: &ChartSections,
    b: &ChartSections,
    bound: u32,
) -> Result<(u32, u32)> {
    let diff = a.generator.sub(&b.generator);
    let h = qp
        .h_dist(a.cone_index)
        .coords()
        .add(qp.h_dist(b.cone_index).coords());
    let mut result = None;
    for bnd in search_bounds(bound) {
        let pos = (0..=bnd).find(|k| qp.is_monomial(&diff.add(&h.scale(&Int::from(*k)))));
        let neg = (0..=bnd).find(|k| qp.is_monomial(&diff.neg().add(&h.scale(&Int::from(*k)))));
        if let (Some(p), Some(n)) = (pos, neg) {
            result = Some((p, n));
            break;
        }
    }
    result.ok_or_else(|| {
        Error::CertificateFailure(
            "chart generators do not differ by a unit on the overlap".into(),
        )
    })
}
