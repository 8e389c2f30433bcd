//! Fans in the lattice N: construction from maximal cones with automatic
//! face completion, axiom validation, star subfans and point location.

use crate::error::{Error, Result};
use crate::linalg::{rank, LatticeMatrix, LatticeVector};
use crate::polyhedral::Cone;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    NotPointed,
    RayNotExtremal,
    UnusedRay,
    BadIntersection,
    MissingFace,
    SpanDeficient,
}

impl ViolationKind {
    pub fn code(&self) -> &'static str {
        match self {
            ViolationKind::NotPointed => "NOT_POINTED",
            ViolationKind::RayNotExtremal => "RAY_NOT_EXTREMAL",
            ViolationKind::UnusedRay => "UNUSED_RAY",
            ViolationKind::BadIntersection => "BAD_INTERSECTION",
            ViolationKind::MissingFace => "MISSING_FACE",
            ViolationKind::SpanDeficient => "SPAN_DEFICIENT",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Violation {
    pub kind: ViolationKind,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind.code(), self.detail)
    }
}

/// Outcome of checking the fan axioms. Span deficiency is kept separate:
/// it only invalidates the quotient constructions, not the fan itself.
#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub warnings: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A cone of the fan together with the ids of the fan rays it is spanned by.
#[derive(Clone, Debug)]
pub struct FanCone {
    pub ray_ids: Vec<usize>,
    pub cone: Cone,
}

impl FanCone {
    pub fn dim(&self) -> usize {
        self.cone.dim()
    }
}

#[derive(Clone, Debug)]
pub struct Fan {
    lattice_rank: usize,
    rays: Vec<LatticeVector>,
    cones: Vec<FanCone>,
    maximal: Vec<usize>,
    report: ValidationReport,
}

impl Fan {
    /// Builds a fan from its rays and the ray id sets of its maximal cones.
    /// Faces are completed automatically. Axiom violations are collected in
    /// the validation report rather than failing construction; only
    /// structurally unusable input (wrong dimensions, unknown ids, zero or
    /// imprimitive rays, repeated rays) is an error.
    pub fn from_rays_and_cones(
        lattice_rank: usize,
        rays: Vec<LatticeVector>,
        maximal_cones: Vec<Vec<usize>>,
    ) -> Result<Fan> {
        let mut seen_rays: BTreeSet<LatticeVector> = BTreeSet::new();
        for (i, r) in rays.iter().enumerate() {
            if r.len() != lattice_rank {
                return Err(Error::InvalidFan(format!(
                    "ray {i} has {} coordinates, expected {lattice_rank}",
                    r.len()
                )));
            }
            if r.is_zero() {
                return Err(Error::InvalidFan(format!("ray {i} is zero")));
            }
            if *r != r.primitive() {
                return Err(Error::InvalidFan(format!(
                    "ray {i} = {r:?} is not primitive"
                )));
            }
            if !seen_rays.insert(r.clone()) {
                return Err(Error::InvalidFan(format!("ray {i} = {r:?} is repeated")));
            }
        }
        for (k, ids) in maximal_cones.iter().enumerate() {
            for &id in ids {
                if id >= rays.len() {
                    return Err(Error::InvalidFan(format!(
                        "cone {k} references unknown ray id {id}"
                    )));
                }
            }
        }

        let mut report = ValidationReport::default();
        let ray_lookup: BTreeMap<LatticeVector, usize> = rays
            .iter()
            .enumerate()
            .map(|(i, r)| (r.clone(), i))
            .collect();

        // Normalized maximal generator sets, deduplicated.
        let mut top_sets: Vec<Vec<usize>> = maximal_cones
            .iter()
            .map(|ids| {
                let set: BTreeSet<usize> = ids.iter().copied().collect();
                set.into_iter().collect::<Vec<_>>()
            })
            .collect();
        top_sets.sort();
        top_sets.dedup();

        struct Top {
            ids: Vec<usize>,
            cone: Cone,
        }
        let mut tops: Vec<Top> = Vec::new();
        for ids in top_sets {
            let gens: Vec<LatticeVector> = ids.iter().map(|&i| rays[i].clone()).collect();
            let cone = Cone::from_generators(lattice_rank, &gens);
            if !cone.is_pointed() {
                report.violations.push(Violation {
                    kind: ViolationKind::NotPointed,
                    detail: format!("cone on rays {ids:?} contains a line"),
                });
            } else {
                let extremal_ids: Option<Vec<usize>> = cone
                    .rays()
                    .iter()
                    .map(|r| ray_lookup.get(r).copied())
                    .collect();
                match extremal_ids {
                    Some(mut ext) => {
                        ext.sort_unstable();
                        if ext != ids {
                            report.violations.push(Violation {
                                kind: ViolationKind::RayNotExtremal,
                                detail: format!(
                                    "cone on rays {ids:?} has extremal rays {ext:?}"
                                ),
                            });
                        }
                    }
                    None => {
                        report.violations.push(Violation {
                            kind: ViolationKind::RayNotExtremal,
                            detail: format!(
                                "cone on rays {ids:?} has an extremal ray outside the ray list"
                            ),
                        });
                    }
                }
            }
            tops.push(Top { ids, cone });
        }

        // Drop listed cones that are faces of other listed cones.
        let mut is_maximal = vec![true; tops.len()];
        for i in 0..tops.len() {
            for j in 0..tops.len() {
                if i != j
                    && is_maximal[j]
                    && tops[i].ids != tops[j].ids
                    && tops[i].ids.iter().all(|id| tops[j].ids.contains(id))
                {
                    is_maximal[i] = false;
                    break;
                }
            }
        }

        // Face completion over the pointed maximal cones.
        let mut all: BTreeMap<Vec<usize>, Cone> = BTreeMap::new();
        for (t, top) in tops.iter().enumerate() {
            if !is_maximal[t] {
                continue;
            }
            if !top.cone.is_pointed() {
                all.entry(top.ids.clone()).or_insert_with(|| top.cone.clone());
                continue;
            }
            let lattice = top.cone.face_lattice()?;
            for face in &lattice.faces {
                let mut ids: Vec<usize> = face
                    .ray_indices
                    .iter()
                    .filter_map(|&k| ray_lookup.get(&top.cone.rays()[k]).copied())
                    .collect();
                ids.sort_unstable();
                all.entry(ids)
                    .or_insert_with(|| top.cone.face_cone(&face.ray_indices));
            }
        }

        // Pairwise intersection axiom over maximal cones.
        let max_idx: Vec<usize> = (0..tops.len()).filter(|&t| is_maximal[t]).collect();
        for a in 0..max_idx.len() {
            for b in (a + 1)..max_idx.len() {
                let s1 = &tops[max_idx[a]];
                let s2 = &tops[max_idx[b]];
                if let Some(detail) = bad_intersection(&rays, &ray_lookup, s1.ids.as_slice(), &s1.cone, s2.ids.as_slice(), &s2.cone, lattice_rank) {
                    report.violations.push(Violation {
                        kind: ViolationKind::BadIntersection,
                        detail,
                    });
                }
            }
        }

        // Every ray id should occur in some maximal cone.
        let used: BTreeSet<usize> = max_idx
            .iter()
            .flat_map(|&t| tops[t].ids.iter().copied())
            .collect();
        for id in 0..rays.len() {
            if !used.contains(&id) {
                report.violations.push(Violation {
                    kind: ViolationKind::UnusedRay,
                    detail: format!("ray {id} does not occur in any maximal cone"),
                });
            }
        }

        // Span of the rays.
        let span = rank(&LatticeMatrix::from_rows(lattice_rank, &rays));
        if span < lattice_rank {
            report.warnings.push(Violation {
                kind: ViolationKind::SpanDeficient,
                detail: format!(
                    "rays span a sublattice of rank {span} < {lattice_rank}"
                ),
            });
        }

        let mut cones: Vec<FanCone> = all
            .into_iter()
            .map(|(ray_ids, cone)| FanCone { ray_ids, cone })
            .collect();
        cones.sort_by(|x, y| {
            (x.dim(), &x.ray_ids).cmp(&(y.dim(), &y.ray_ids))
        });
        let maximal: Vec<usize> = (0..cones.len())
            .filter(|&i| {
                max_idx
                    .iter()
                    .any(|&t| tops[t].ids == cones[i].ray_ids)
            })
            .collect();

        Ok(Fan {
            lattice_rank,
            rays,
            cones,
            maximal,
            report,
        })
    }

    pub fn lattice_rank(&self) -> usize {
        self.lattice_rank
    }

    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn cones(&self) -> &[FanCone] {
        &self.cones
    }

    pub fn maximal_cones(&self) -> impl Iterator<Item = &FanCone> {
        self.maximal.iter().map(|&i| &self.cones[i])
    }

    pub fn maximal_ray_id_sets(&self) -> Vec<Vec<usize>> {
        self.maximal
            .iter()
            .map(|&i| self.cones[i].ray_ids.clone())
            .collect()
    }

    pub fn cone_by_ray_ids(&self, ids: &[usize]) -> Option<&FanCone> {
        let mut key = ids.to_vec();
        key.sort_unstable();
        self.cones.iter().find(|c| c.ray_ids == key)
    }

    pub fn validation(&self) -> &ValidationReport {
        &self.report
    }

    pub fn is_valid(&self) -> bool {
        self.report.is_clean()
    }

    /// Whether the rays span the ambient space over the rationals.
    pub fn spans_ambient(&self) -> bool {
        !self
            .report
            .warnings
            .iter()
            .any(|w| w.kind == ViolationKind::SpanDeficient)
    }

    /// Fails unless the fan is axiom-clean and its rays span; quotient
    /// constructions require both.
    pub fn require_valid_spanning(&self) -> Result<()> {
        if !self.is_valid() {
            let list: Vec<String> =
                self.report.violations.iter().map(|v| v.to_string()).collect();
            return Err(Error::InvalidFan(list.join("; ")));
        }
        if !self.spans_ambient() {
            return Err(Error::SpanDeficient);
        }
        Ok(())
    }

    /// The subfan generated by all maximal cones containing the given ray,
    /// with rays renumbered to the ones that still occur.
    pub fn star_subfan(&self, ray_id: usize) -> Result<Fan> {
        if ray_id >= self.rays.len() {
            return Err(Error::UnknownRay(ray_id));
        }
        let selected: Vec<&FanCone> = self
            .maximal_cones()
            .filter(|c| c.ray_ids.contains(&ray_id))
            .collect();
        let used: BTreeSet<usize> = selected
            .iter()
            .flat_map(|c| c.ray_ids.iter().copied())
            .collect();
        let used: Vec<usize> = used.into_iter().collect();
        let renumber: BTreeMap<usize, usize> = used
            .iter()
            .enumerate()
            .map(|(new, &old)| (old, new))
            .collect();
        let rays: Vec<LatticeVector> = used.iter().map(|&i| self.rays[i].clone()).collect();
        let maximal: Vec<Vec<usize>> = selected
            .iter()
            .map(|c| c.ray_ids.iter().map(|id| renumber[id]).collect())
            .collect();
        Fan::from_rays_and_cones(self.lattice_rank, rays, maximal)
    }

    /// The minimal cone of the fan containing the point, if any.
    pub fn cone_containing(&self, n: &LatticeVector) -> Option<&FanCone> {
        self.cones.iter().find(|c| c.cone.contains(n))
    }
}

fn bad_intersection(
    rays: &[LatticeVector],
    ray_lookup: &BTreeMap<LatticeVector, usize>,
    ids1: &[usize],
    c1: &Cone,
    ids2: &[usize],
    c2: &Cone,
    lattice_rank: usize,
) -> Option<String> {
    let mut ineqs: Vec<LatticeVector> = c1.facet_normals().to_vec();
    ineqs.extend_from_slice(c2.facet_normals());
    let mut eqs: Vec<LatticeVector> = c1.span_equations().to_vec();
    eqs.extend_from_slice(c2.span_equations());
    let inter = Cone::from_inequalities(lattice_rank, &ineqs, &eqs);
    if !inter.is_pointed() {
        return Some(format!(
            "cones {ids1:?} and {ids2:?} intersect in a non-pointed cone"
        ));
    }
    for (ids, c) in [(ids1, c1), (ids2, c2)] {
        let inter_ids: Option<Vec<usize>> = inter
            .rays()
            .iter()
            .map(|r| ray_lookup.get(r).copied().filter(|id| ids.contains(id)))
            .collect();
        let Some(mut inter_ids) = inter_ids else {
            return Some(format!(
                "cones {ids1:?} and {ids2:?} intersect outside the rays of {ids:?}"
            ));
        };
        inter_ids.sort_unstable();
        let local: Vec<usize> = inter_ids
            .iter()
            .filter_map(|id| c.rays().iter().position(|r| r == &rays[*id]))
            .collect();
        let lattice = match c.face_lattice() {
            Ok(l) => l,
            Err(_) => return Some(format!("cone {ids:?} is not pointed")),
        };
        let mut local_sorted = local.clone();
        local_sorted.sort_unstable();
        if lattice.find(&local_sorted).is_none() {
            return Some(format!(
                "intersection of {ids1:?} and {ids2:?} is not a face of {ids:?}"
            ));
        }
        if c.face_cone(&local_sorted) != inter {
            return Some(format!(
                "intersection of {ids1:?} and {ids2:?} differs from the face of {ids:?} on the same rays"
            ));
        }
    }
    None
}
