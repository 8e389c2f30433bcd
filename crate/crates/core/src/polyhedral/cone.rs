//! Rational polyhedral cones carrying both a generator and an inequality
//! description. Every cone stores its extremal rays, a lineality basis, its
//! facet normals and the equations cutting out its linear span, all in
//! canonical form so that structural equality is plain data equality.

use super::dd::double_description;
use crate::error::{Error, Result};
use crate::linalg::{rank, LatticeMatrix, LatticeVector};
use num_traits::{Signed, Zero};
use std::collections::{BTreeMap, BTreeSet, VecDeque};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone {
    ambient: usize,
    rays: Vec<LatticeVector>,
    lineality: Vec<LatticeVector>,
    facet_normals: Vec<LatticeVector>,
    span_equations: Vec<LatticeVector>,
    dim: usize,
}

/// A face of a pointed cone, identified by the set of extremal rays it
/// contains (indices into `Cone::rays`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub ray_indices: Vec<usize>,
    pub dim: usize,
}

pub struct FaceLattice {
    pub faces: Vec<Face>,
}

impl Cone {
    pub fn from_generators(ambient: usize, generators: &[LatticeVector]) -> Cone {
        for g in generators {
            assert_eq!(g.len(), ambient, "generator dimension mismatch");
        }
        let gens: Vec<LatticeVector> = generators
            .iter()
            .filter(|g| !g.is_zero())
            .map(|g| g.primitive())
            .collect();
        let dual = double_description(ambient, &[], &gens);
        let span_equations = dual.lineality;
        let facet_normals = sorted(dual.rays);
        let primal = double_description(ambient, &span_equations, &facet_normals);
        let dim = ambient - span_equations.len();
        Cone {
            ambient,
            rays: sorted(primal.rays),
            lineality: primal.lineality,
            facet_normals,
            span_equations,
            dim,
        }
    }

    pub fn from_inequalities(
        ambient: usize,
        inequalities: &[LatticeVector],
        equations: &[LatticeVector],
    ) -> Cone {
        let primal = double_description(ambient, equations, inequalities);
        let mut gens = primal.rays.clone();
        for b in &primal.lineality {
            gens.push(b.clone());
            gens.push(b.neg());
        }
        let dual = double_description(ambient, &[], &gens);
        let span_equations = dual.lineality;
        let dim = ambient - span_equations.len();
        Cone {
            ambient,
            rays: sorted(primal.rays),
            lineality: primal.lineality,
            facet_normals: sorted(dual.rays),
            span_equations,
            dim,
        }
    }

    pub fn zero(ambient: usize) -> Cone {
        Cone::from_generators(ambient, &[])
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn lineality(&self) -> &[LatticeVector] {
        &self.lineality
    }

    pub fn facet_normals(&self) -> &[LatticeVector] {
        &self.facet_normals
    }

    pub fn span_equations(&self) -> &[LatticeVector] {
        &self.span_equations
    }

    /// Rays together with both signs of the lineality basis.
    pub fn generators(&self) -> Vec<LatticeVector> {
        let mut gens = self.rays.clone();
        for b in &self.lineality {
            gens.push(b.clone());
            gens.push(b.neg());
        }
        gens
    }

    pub fn is_pointed(&self) -> bool {
        self.lineality.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.dim == 0
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dim == self.ambient
    }

    pub fn is_simplicial(&self) -> bool {
        self.is_pointed() && self.rays.len() == self.dim
    }

    pub fn dual(&self) -> Cone {
        Cone::from_inequalities(self.ambient, &self.rays, &self.lineality)
    }

    pub fn contains(&self, v: &LatticeVector) -> bool {
        self.span_equations.iter().all(|e| e.dot(v).is_zero())
            && self.facet_normals.iter().all(|f| !f.dot(v).is_negative())
    }

    /// Membership in the relative interior: inside the span and strictly
    /// positive on every facet normal.
    pub fn contains_in_relative_interior(&self, v: &LatticeVector) -> bool {
        self.span_equations.iter().all(|e| e.dot(v).is_zero())
            && self.facet_normals.iter().all(|f| f.dot(v).is_positive())
    }

    pub fn contains_cone(&self, other: &Cone) -> bool {
        other.generators().iter().all(|g| self.contains(g))
    }

    /// A lattice point strictly inside the cone, obtained as the sum of the
    /// extremal rays. Fails on the zero cone and on cones with lineality.
    pub fn relative_interior_point(&self) -> Result<LatticeVector> {
        if !self.is_pointed() {
            return Err(Error::NotPointed);
        }
        if self.is_zero() {
            return Err(Error::ZeroCone);
        }
        let mut p = LatticeVector::zeros(self.ambient);
        for r in &self.rays {
            p = p.add(r);
        }
        debug_assert!(self.contains_in_relative_interior(&p));
        Ok(p)
    }

    /// All faces of a pointed cone, keyed by extremal ray subsets, ordered by
    /// dimension then lexicographically. Includes the zero face and the cone
    /// itself.
    pub fn face_lattice(&self) -> Result<FaceLattice> {
        if !self.is_pointed() {
            return Err(Error::NotPointed);
        }
        let full: Vec<usize> = (0..self.rays.len()).collect();
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut queue: VecDeque<Vec<usize>> = VecDeque::new();
        seen.insert(full.clone());
        queue.push_back(full);
        while let Some(face) = queue.pop_front() {
            for normal in &self.facet_normals {
                let sub: Vec<usize> = face
                    .iter()
                    .copied()
                    .filter(|&i| normal.dot(&self.rays[i]).is_zero())
                    .collect();
                if sub != face && seen.insert(sub.clone()) {
                    queue.push_back(sub);
                }
            }
        }
        let mut faces: Vec<Face> = seen
            .into_iter()
            .map(|ray_indices| {
                let rows: Vec<LatticeVector> = ray_indices
                    .iter()
                    .map(|&i| self.rays[i].clone())
                    .collect();
                let dim = rank(&LatticeMatrix::from_rows(self.ambient, &rows));
                Face { ray_indices, dim }
            })
            .collect();
        faces.sort_by(|a, b| (a.dim, &a.ray_indices).cmp(&(b.dim, &b.ray_indices)));
        Ok(FaceLattice { faces })
    }

    /// The subcone spanned by a subset of the extremal rays. Only meaningful
    /// when the subset is a face.
    pub fn face_cone(&self, ray_indices: &[usize]) -> Cone {
        let rows: Vec<LatticeVector> = ray_indices
            .iter()
            .map(|&i| self.rays[i].clone())
            .collect();
        Cone::from_generators(self.ambient, &rows)
    }
}

impl FaceLattice {
    pub fn faces_of_dim(&self, dim: usize) -> impl Iterator<Item = &Face> {
        self.faces.iter().filter(move |f| f.dim == dim)
    }

    pub fn find(&self, ray_indices: &[usize]) -> Option<&Face> {
        self.faces.iter().find(|f| f.ray_indices == ray_indices)
    }

    /// Number of faces in each dimension, as a map dim -> count.
    pub fn f_vector(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for f in &self.faces {
            *out.entry(f.dim).or_insert(0) += 1;
        }
        out
    }
}

/// For a face of `cone`, the indices of the rays of `dual` vanishing on all
/// of the face's rays. This realizes the inclusion-reversing bijection
/// between the faces of a cone and of its dual.
pub fn dual_face_ray_indices(cone: &Cone, face: &Face, dual: &Cone) -> Vec<usize> {
    (0..dual.rays().len())
        .filter(|&j| {
            face.ray_indices
                .iter()
                .all(|&i| dual.rays()[j].dot(&cone.rays()[i]).is_zero())
        })
        .collect()
}

fn sorted(mut v: Vec<LatticeVector>) -> Vec<LatticeVector> {
    v.sort();
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vecs(entries: &[&[i64]]) -> Vec<LatticeVector> {
        entries.iter().map(|e| LatticeVector::from_i64(e)).collect()
    }

    #[test]
    fn quadrant_round_trip() {
        let c = Cone::from_generators(2, &vecs(&[&[1, 0], &[0, 1]]));
        assert!(c.is_pointed());
        assert!(c.is_full_dimensional());
        assert!(c.is_simplicial());
        assert_eq!(c.rays(), &vecs(&[&[0, 1], &[1, 0]])[..]);
        assert_eq!(c.facet_normals(), &vecs(&[&[0, 1], &[1, 0]])[..]);
        let d = c.dual();
        assert_eq!(c, d);
    }

    #[test]
    fn dual_of_skew_cone_is_frozen() {
        let c = Cone::from_generators(2, &vecs(&[&[1, 0], &[1, 2]]));
        let d = c.dual();
        assert_eq!(d.rays(), &vecs(&[&[0, 1], &[2, -1]])[..]);
        assert_eq!(d.dual(), c);
    }

    #[test]
    fn generator_normalization() {
        // Scaled, repeated and redundant generators give the same cone.
        let a = Cone::from_generators(2, &vecs(&[&[1, 0], &[0, 1]]));
        let b = Cone::from_generators(2, &vecs(&[&[3, 0], &[1, 0], &[0, 2], &[1, 1]]));
        assert_eq!(a, b);
    }

    #[test]
    fn line_is_not_pointed() {
        let c = Cone::from_generators(2, &vecs(&[&[1, 0], &[-1, 0]]));
        assert!(!c.is_pointed());
        assert_eq!(c.dim(), 1);
        assert!(c.rays().is_empty());
        assert_eq!(c.lineality().len(), 1);
        assert!(c.relative_interior_point().is_err());
    }

    #[test]
    fn low_dimensional_cone_has_span_equations() {
        let c = Cone::from_generators(3, &vecs(&[&[1, 2, 0]]));
        assert_eq!(c.dim(), 1);
        assert_eq!(c.span_equations().len(), 2);
        assert!(c.contains(&LatticeVector::from_i64(&[2, 4, 0])));
        assert!(!c.contains(&LatticeVector::from_i64(&[1, 2, 1])));
        assert!(!c.contains(&LatticeVector::from_i64(&[-1, -2, 0])));
    }

    #[test]
    fn square_cone_face_lattice() {
        // Cone over the unit square: 1 + 4 + 4 + 1 faces.
        let c = Cone::from_generators(
            3,
            &vecs(&[&[1, 1, 1], &[1, -1, 1], &[-1, 1, 1], &[-1, -1, 1]]),
        );
        assert_eq!(c.dim(), 3);
        assert!(!c.is_simplicial());
        let fl = c.face_lattice().unwrap();
        assert_eq!(fl.faces.len(), 10);
        let fv = fl.f_vector();
        assert_eq!(fv.get(&0), Some(&1));
        assert_eq!(fv.get(&1), Some(&4));
        assert_eq!(fv.get(&2), Some(&4));
        assert_eq!(fv.get(&3), Some(&1));
    }

    #[test]
    fn dual_face_correspondence_reverses_dimension() {
        let c = Cone::from_generators(
            3,
            &vecs(&[&[1, 1, 1], &[1, -1, 1], &[-1, 1, 1], &[-1, -1, 1]]),
        );
        let d = c.dual();
        let fl = c.face_lattice().unwrap();
        for face in &fl.faces {
            let dual_rays = dual_face_ray_indices(&c, face, &d);
            let dual_cone = d.face_cone(&dual_rays);
            assert_eq!(dual_cone.dim() + face.dim, 3);
        }
    }

    #[test]
    fn relative_interior_point_is_strict() {
        let c = Cone::from_generators(2, &vecs(&[&[1, 0], &[1, 2]]));
        let p = c.relative_interior_point().unwrap();
        assert!(c.contains_in_relative_interior(&p));
        assert!(!c.contains_in_relative_interior(&LatticeVector::from_i64(&[1, 0])));
    }

    #[test]
    fn zero_cone_basics() {
        let c = Cone::zero(3);
        assert!(c.is_zero());
        assert!(c.is_pointed());
        assert!(c.contains(&LatticeVector::zeros(3)));
        assert!(!c.contains(&LatticeVector::from_i64(&[1, 0, 0])));
        let fl = c.face_lattice().unwrap();
        assert_eq!(fl.faces.len(), 1);
    }

    #[test]
    fn halfspace_has_one_facet() {
        let c = Cone::from_inequalities(2, &vecs(&[&[0, 1]]), &[]);
        assert_eq!(c.dim(), 2);
        assert_eq!(c.lineality().len(), 1);
        assert_eq!(c.facet_normals(), &vecs(&[&[0, 1]])[..]);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn small_generators() -> impl Strategy<Value = (usize, Vec<LatticeVector>)> {
            (2usize..=3).prop_flat_map(|dim| {
                let gen = proptest::collection::vec(-4i64..=4, dim)
                    .prop_map(|v| LatticeVector::from_i64(&v));
                proptest::collection::vec(gen, 1..=5).prop_map(move |gens| (dim, gens))
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            #[test]
            fn biduality((dim, gens) in small_generators()) {
                let c = Cone::from_generators(dim, &gens);
                prop_assert_eq!(&c.dual().dual(), &c);
                for g in &gens {
                    prop_assert!(c.contains(g));
                }
                for r in c.rays() {
                    prop_assert!(c.contains(r));
                }
                let d = c.dual();
                for f in c.facet_normals() {
                    prop_assert!(d.contains(f));
                }
                prop_assert_eq!(c.dim() + d.lineality().len(), dim);
            }

            #[test]
            fn representations_agree((dim, gens) in small_generators()) {
                let c = Cone::from_generators(dim, &gens);
                let again = Cone::from_inequalities(
                    dim,
                    c.facet_normals(),
                    c.span_equations(),
                );
                prop_assert_eq!(&again, &c);
            }
        }
    }
}
