//! From the support function lattice to the homogeneous presentation: the
//! quotient cone and its dual, the lifted fan, the distinguished support
//! function of each cone, and the irrelevant ideal with its vanishing locus.

use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::graded::GradedMonomial;
use crate::linalg::{Int, LatticeMatrix, LatticeVector};
use crate::polyhedral::{hilbert_basis, Cone, Face};
use crate::support::{SupportFunction, SupportLattice};
use num_traits::{Signed, Zero};
use std::collections::BTreeSet;
use std::sync::OnceLock;

/// The half space functional of a ray: evaluation of support functions at
/// the primitive ray generator, in coordinates dual to the chosen basis of
/// the support lattice.
pub fn half_space(sl: &SupportLattice, ray: usize) -> Result<LatticeVector> {
    sl.evaluation_row(ray)
}

/// The decision for one cone of the fan: a support function vanishing
/// exactly on the rays of the cone, when one exists.
#[derive(Clone, Debug)]
pub struct CartierEntry {
    pub ray_ids: Vec<usize>,
    pub witness: Option<SupportFunction>,
}

impl CartierEntry {
    pub fn ok(&self) -> bool {
        self.witness.is_some()
    }
}

/// Per-cone results of the enough-invariant-Cartier-divisors test, indexed
/// like `Fan::cones`.
#[derive(Clone, Debug)]
pub struct CartierReport {
    pub entries: Vec<CartierEntry>,
}

impl CartierReport {
    pub fn all_ok(&self) -> bool {
        self.entries.iter().all(CartierEntry::ok)
    }

    pub fn failing_cone_indices(&self) -> Vec<usize> {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, e)| !e.ok())
            .map(|(i, _)| i)
            .collect()
    }
}

/// Decides, for every cone of the fan, whether some integral support
/// function vanishes on the rays of the cone and is strictly positive on
/// all other rays.
///
/// The set of candidates is the dual face cone of the cone inside the
/// quotient cone. A strictly positive function exists exactly when the sum
/// of the extremal rays of that cone, a relative interior point, is
/// strictly positive on every ray outside the cone.
pub fn check_enough_cartier(sl: &SupportLattice) -> Result<CartierReport> {
    Ok(cartier_data(sl)?.0)
}

fn dual_face_cone(sl: &SupportLattice, ray_ids: &[usize]) -> Result<Cone> {
    let inside: BTreeSet<usize> = ray_ids.iter().copied().collect();
    let mut equations = Vec::new();
    let mut inequalities = Vec::new();
    for ray in 0..sl.fan().rays().len() {
        let row = sl.evaluation_row(ray)?;
        if inside.contains(&ray) {
            equations.push(row);
        } else {
            inequalities.push(row);
        }
    }
    Ok(Cone::from_inequalities(
        sl.rank(),
        &inequalities,
        &equations,
    ))
}

fn cartier_data(sl: &SupportLattice) -> Result<(CartierReport, Vec<Cone>)> {
    let fan = sl.fan();
    let mut entries = Vec::new();
    let mut duals = Vec::new();
    for fc in fan.cones() {
        let dual = dual_face_cone(sl, &fc.ray_ids)?;
        let inside: BTreeSet<usize> = fc.ray_ids.iter().copied().collect();
        let mut point = LatticeVector::zeros(sl.rank());
        for r in dual.rays() {
            point = point.add(r);
        }
        let mut strict = true;
        for ray in 0..fan.rays().len() {
            if inside.contains(&ray) {
                continue;
            }
            if !sl.evaluation_row(ray)?.dot(&point).is_positive() {
                strict = false;
                break;
            }
        }
        let witness = if strict {
            Some(sl.function_from_coords(&point)?)
        } else {
            None
        };
        entries.push(CartierEntry {
            ray_ids: fc.ray_ids.clone(),
            witness,
        });
        duals.push(dual);
    }
    Ok((CartierReport { entries }, duals))
}

/// A face of the quotient dual cone that carries a stratum of the
/// vanishing locus of the irrelevant ideal, identified by fan ray ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VanishingFace {
    pub ray_ids: Vec<usize>,
    pub dim: usize,
}

/// The irrelevant ideal: one radical generator per maximal cone, the faces
/// of the quotient dual cone outside the lifted fan, and the codimension of
/// the corresponding locus (None when the locus is empty).
#[derive(Clone, Debug)]
pub struct IrrelevantIdeal {
    pub radical_generators: Vec<GradedMonomial>,
    pub vanishing_faces: Vec<VanishingFace>,
    pub codimension: Option<usize>,
}

/// The homogeneous presentation data built from a support lattice with
/// enough invariant Cartier divisors.
#[derive(Debug)]
pub struct QuotientPresentation {
    sl: SupportLattice,
    cone_check: Cone,
    cone_c: Cone,
    l_rays: Vec<LatticeVector>,
    id_to_c_ray: Vec<usize>,
    c_ray_to_id: Vec<usize>,
    dual_faces: Vec<Cone>,
    h_dist: Vec<SupportFunction>,
    hat_faces: Vec<Face>,
    maximal_cone_indices: Vec<usize>,
    interior_witness: LatticeVector,
    ring_gens: OnceLock<Vec<GradedMonomial>>,
}

/// Builds the quotient presentation: the cone of nonnegative support
/// functions with its dual, the lifted face of every fan cone, and the
/// distinguished support functions. Fails with the list of offending cones
/// when the enough-Cartier condition does not hold.
pub fn build_quotient(sl: SupportLattice) -> Result<QuotientPresentation> {
    let (report, dual_faces) = cartier_data(&sl)?;
    if !report.all_ok() {
        return Err(Error::NotEnoughCartier(report.failing_cone_indices()));
    }
    let s = sl.rank();
    let ray_count = sl.fan().rays().len();
    let rows: Vec<LatticeVector> = (0..ray_count)
        .map(|ray| sl.evaluation_row(ray))
        .collect::<Result<_>>()?;
    let cone_check = Cone::from_inequalities(s, &rows, &[]);
    if !cone_check.is_pointed() || !cone_check.is_full_dimensional() {
        return Err(Error::CertificateFailure(
            "quotient cone is not pointed and full dimensional".into(),
        ));
    }
    let mut interior_witness = LatticeVector::zeros(s);
    for entry in &report.entries {
        if let Some(w) = &entry.witness {
            interior_witness = interior_witness.add(w.coords());
        }
    }
    for normal in cone_check.facet_normals() {
        if !normal.dot(&interior_witness).is_positive() {
            return Err(Error::CertificateFailure(
                "interior witness fails strict positivity on a facet of the quotient cone".into(),
            ));
        }
    }

    let cone_c = cone_check.dual();
    let l_rays: Vec<LatticeVector> = rows.iter().map(LatticeVector::primitive).collect();
    for (row, l) in rows.iter().zip(&l_rays) {
        if row != l {
            return Err(Error::CertificateFailure(
                "evaluation functional of a ray is not primitive".into(),
            ));
        }
    }
    let mut sorted = l_rays.clone();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != l_rays.len() {
        return Err(Error::CertificateFailure(
            "evaluation functionals of two rays coincide".into(),
        ));
    }
    if sorted.as_slice() != cone_c.rays() {
        return Err(Error::CertificateFailure(
            "extremal rays of the dual quotient cone do not match the fan rays".into(),
        ));
    }
    let id_to_c_ray: Vec<usize> = l_rays
        .iter()
        .map(|l| {
            cone_c
                .rays()
                .iter()
                .position(|r| r == l)
                .expect("ray set equality was checked")
        })
        .collect();
    let mut c_ray_to_id = vec![0usize; ray_count];
    for (id, &pos) in id_to_c_ray.iter().enumerate() {
        c_ray_to_id[pos] = id;
    }

    let lattice = cone_c.face_lattice()?;
    let mut hat_faces = Vec::new();
    for fc in sl.fan().cones() {
        let mut target: Vec<usize> = fc.ray_ids.iter().map(|&id| id_to_c_ray[id]).collect();
        target.sort_unstable();
        let face = lattice.find(&target).ok_or_else(|| {
            Error::CertificateFailure(format!(
                "lifted rays of cone {:?} do not span a face of the dual quotient cone",
                fc.ray_ids
            ))
        })?;
        if face.dim != fc.dim() {
            return Err(Error::CertificateFailure(format!(
                "lifted face of cone {:?} changes dimension",
                fc.ray_ids
            )));
        }
        hat_faces.push(face.clone());
    }

    let mut h_dist = Vec::new();
    for (i, fc) in sl.fan().cones().iter().enumerate() {
        let basis = hilbert_basis(&dual_faces[i])?;
        let mut point = LatticeVector::zeros(s);
        for h in &basis {
            point = point.add(h);
        }
        let f = sl.function_from_coords(&point)?;
        let inside: BTreeSet<usize> = fc.ray_ids.iter().copied().collect();
        for ray in 0..ray_count {
            let value = &f.ray_values().0[ray];
            let ok = if inside.contains(&ray) {
                value.is_zero()
            } else {
                value.is_positive()
            };
            if !ok {
                return Err(Error::CertificateFailure(format!(
                    "distinguished support function of cone {:?} has the wrong vanishing locus",
                    fc.ray_ids
                )));
            }
        }
        h_dist.push(f);
    }

    let maximal_cone_indices: Vec<usize> = sl
        .maximal_sets()
        .iter()
        .map(|ids| {
            sl.fan()
                .cones()
                .iter()
                .position(|fc| &fc.ray_ids == ids)
                .expect("maximal cone listed in the fan")
        })
        .collect();

    Ok(QuotientPresentation {
        sl,
        cone_check,
        cone_c,
        l_rays,
        id_to_c_ray,
        c_ray_to_id,
        dual_faces,
        h_dist,
        hat_faces,
        maximal_cone_indices,
        interior_witness,
        ring_gens: OnceLock::new(),
    })
}

impl QuotientPresentation {
    pub fn support(&self) -> &SupportLattice {
        &self.sl
    }

    pub fn fan(&self) -> &Fan {
        self.sl.fan()
    }

    /// The cone of everywhere-nonnegative support functions, in SF
    /// coordinates. Pointed and full dimensional.
    pub fn cone_check(&self) -> &Cone {
        &self.cone_check
    }

    /// Its dual cone, the recipient of the lifted fan.
    pub fn cone_c(&self) -> &Cone {
        &self.cone_c
    }

    /// Primitive generators of the lifted rays, indexed by fan ray id.
    pub fn l_rays(&self) -> &[LatticeVector] {
        &self.l_rays
    }

    pub fn l_ray(&self, ray: usize) -> &LatticeVector {
        &self.l_rays[ray]
    }

    /// Fan ray id of an extremal ray position of `cone_c`.
    pub fn fan_ray_of_c_ray(&self, position: usize) -> usize {
        self.c_ray_to_id[position]
    }

    /// Position in `cone_c.rays()` of the lifted ray of a fan ray.
    pub fn c_ray_of_fan_ray(&self, ray: usize) -> usize {
        self.id_to_c_ray[ray]
    }

    /// The dual face cone of the lifted cone, indexed like `Fan::cones`:
    /// support functions vanishing on the cone and nonnegative elsewhere.
    pub fn dual_face(&self, cone_index: usize) -> &Cone {
        &self.dual_faces[cone_index]
    }

    /// The distinguished support function of a cone: the sum of the Hilbert
    /// basis of its dual face, which vanishes exactly on the cone's rays.
    pub fn h_dist(&self, cone_index: usize) -> &SupportFunction {
        &self.h_dist[cone_index]
    }

    /// The lifted cone as a face of `cone_c`, indexed like `Fan::cones`.
    pub fn hat_face(&self, cone_index: usize) -> &Face {
        &self.hat_faces[cone_index]
    }

    /// Indices into `Fan::cones` of the maximal cones, aligned with
    /// `SupportLattice::maximal_sets`.
    pub fn maximal_cone_indices(&self) -> &[usize] {
        &self.maximal_cone_indices
    }

    /// A lattice point interior to the quotient cone, strictly positive on
    /// every facet normal.
    pub fn interior_witness(&self) -> &LatticeVector {
        &self.interior_witness
    }

    /// The projection from the dual of the support lattice onto the fan
    /// lattice, sending each lifted ray to the primitive ray generator.
    pub fn projection_matrix(&self) -> LatticeMatrix {
        self.sl.iota_matrix().transpose()
    }

    pub fn monomial(&self, coords: &LatticeVector) -> GradedMonomial {
        GradedMonomial {
            exponent: coords.clone(),
            degree: self.sl.degree_of_coords(coords),
        }
    }

    /// Whether the coordinates lie in the monoid of the quotient cone.
    pub fn is_monomial(&self, coords: &LatticeVector) -> bool {
        self.cone_check.contains(coords)
    }

    /// Minimal generating set of the monomial ring: the Hilbert basis of
    /// the quotient cone with Picard degrees. Computed once and cached.
    pub fn ring_generators(&self) -> Result<&[GradedMonomial]> {
        if let Some(gens) = self.ring_gens.get() {
            return Ok(gens);
        }
        let basis = hilbert_basis(&self.cone_check)?;
        let gens: Vec<GradedMonomial> = basis.iter().map(|b| self.monomial(b)).collect();
        Ok(self.ring_gens.get_or_init(|| gens))
    }

    /// The smallest k with 0 <= k <= bound such that the divisor exponent
    /// divides k times the base exponent in the monoid, i.e. k*base -
    /// divisor lies in the quotient cone.
    pub fn divides_power(
        &self,
        divisor: &LatticeVector,
        base: &LatticeVector,
        bound: u32,
    ) -> Option<u32> {
        for k in 0..=bound {
            let diff = base.scale(&Int::from(k)).sub(divisor);
            if self.cone_check.contains(&diff) {
                return Some(k);
            }
        }
        None
    }

    /// The lifted fan: the fan in the dual of the support lattice whose
    /// rays are the lifted rays and whose cones are the lifted faces.
    /// Certifies validity, the combinatorial equivalence with the base fan
    /// (equal ray id sets, equal dimensions, simpliciality preserved), and
    /// that the projection carries each lifted ray to its base ray.
    pub fn hat_fan(&self) -> Result<Fan> {
        let fan = self.sl.fan();
        let hat = Fan::from_rays_and_cones(
            self.sl.rank(),
            self.l_rays.clone(),
            fan.maximal_ray_id_sets(),
        )?;
        if !hat.is_valid() {
            let detail: Vec<String> = hat
                .validation()
                .violations
                .iter()
                .map(|v| v.to_string())
                .collect();
            return Err(Error::CertificateFailure(format!(
                "lifted fan violates the fan axioms: {}",
                detail.join("; ")
            )));
        }
        let base_sets: BTreeSet<Vec<usize>> =
            fan.cones().iter().map(|fc| fc.ray_ids.clone()).collect();
        let hat_sets: BTreeSet<Vec<usize>> =
            hat.cones().iter().map(|fc| fc.ray_ids.clone()).collect();
        if base_sets != hat_sets {
            return Err(Error::CertificateFailure(
                "cone sets of the lifted fan differ from the base fan".into(),
            ));
        }
        for fc in fan.cones() {
            let hc = hat
                .cone_by_ray_ids(&fc.ray_ids)
                .expect("cone sets were compared");
            if hc.dim() != fc.dim() {
                return Err(Error::CertificateFailure(format!(
                    "lifted cone {:?} changes dimension",
                    fc.ray_ids
                )));
            }
            if hc.cone.is_simplicial() != fc.cone.is_simplicial() {
                return Err(Error::CertificateFailure(format!(
                    "lifted cone {:?} changes simpliciality",
                    fc.ray_ids
                )));
            }
        }
        let projection = self.projection_matrix();
        for (id, l) in self.l_rays.iter().enumerate() {
            if &projection.mul_vec(l) != &fan.rays()[id] {
                return Err(Error::CertificateFailure(format!(
                    "projection does not carry lifted ray {id} to its base ray"
                )));
            }
        }
        Ok(hat)
    }

    /// The irrelevant ideal up to radical: one distinguished monomial per
    /// maximal cone, together with the faces of the dual quotient cone that
    /// lie outside the lifted fan and the codimension of the locus they
    /// define.
    pub fn irrelevant_ideal(&self) -> Result<IrrelevantIdeal> {
        let fan = self.sl.fan();
        let radical_generators: Vec<GradedMonomial> = self
            .maximal_cone_indices
            .iter()
            .map(|&i| self.monomial(self.h_dist[i].coords()))
            .collect();
        let in_hat: BTreeSet<Vec<usize>> =
            fan.cones().iter().map(|fc| fc.ray_ids.clone()).collect();
        let lattice = self.cone_c.face_lattice()?;
        let mut vanishing_faces = Vec::new();
        for face in &lattice.faces {
            let mut ids: Vec<usize> = face
                .ray_indices
                .iter()
                .map(|&p| self.c_ray_to_id[p])
                .collect();
            ids.sort_unstable();
            if !in_hat.contains(&ids) {
                vanishing_faces.push(VanishingFace {
                    ray_ids: ids,
                    dim: face.dim,
                });
            }
        }
        // The stratum of a face has codimension equal to the face
        // dimension, so the locus codimension is the minimum face dimension.
        let codimension = vanishing_faces.iter().map(|f| f.dim).min();
        Ok(IrrelevantIdeal {
            radical_generators,
            vanishing_faces,
            codimension,
        })
    }

    /// The codimension of the vanishing locus of the irrelevant ideal
    /// (None when empty). When the Picard rank is positive, certifies that
    /// the codimension is at least 2.
    pub fn codim_check(&self) -> Result<Option<usize>> {
        let ideal = self.irrelevant_ideal()?;
        if self.sl.pic_rank() >= 1 {
            if let Some(c) = ideal.codimension {
                if c < 2 {
                    return Err(Error::CertificateFailure(format!(
                        "irrelevant locus has codimension {c}, expected at least 2"
                    )));
                }
            }
        }
        Ok(ideal.codimension)
    }

    /// The full minimal monomial generating set of the irrelevant ideal:
    /// for each maximal cone, the ideal of the relative interior of its
    /// dual face, generated by the relative-interior lattice points of the
    /// closed fundamental parallelepipeds over a triangulation; the union
    /// is then reduced to the divisibility-minimal elements.
    pub fn full_irrelevant_generators(&self) -> Result<Vec<GradedMonomial>> {
        let mut candidates: BTreeSet<LatticeVector> = BTreeSet::new();
        for &i in &self.maximal_cone_indices {
            let dual = &self.dual_faces[i];
            for p in crate::polyhedral::hilbert::monoid_cover(dual)? {
                if dual.contains_in_relative_interior(&p) {
                    candidates.insert(p);
                }
            }
        }
        let all: Vec<LatticeVector> = candidates.into_iter().collect();
        let minimal: Vec<GradedMonomial> = all
            .iter()
            .filter(|g| {
                !all.iter().any(|other| {
                    other != *g && self.cone_check.contains(&g.sub(other))
                })
            })
            .map(|g| self.monomial(g))
            .collect();
        Ok(minimal)
    }
}
