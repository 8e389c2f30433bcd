//! Hilbert bases of pointed rational cones. The superset of candidates is
//! collected from lattice points of fundamental parallelepipeds over a
//! triangulation, then cut down to the irreducible elements by exact
//! membership tests.

use super::cone::Cone;
use crate::error::{Error, Result};
use crate::linalg::{
    kernel_basis, smith_normal_form, solve_rational, to_rational, Int, LatticeMatrix,
    LatticeVector, Rat,
};
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeSet;

/// The minimal generating set of the monoid of lattice points of a pointed
/// cone, sorted. The cone may live in a proper subspace of the ambient
/// lattice; generators are returned in ambient coordinates.
pub fn hilbert_basis(cone: &Cone) -> Result<Vec<LatticeVector>> {
    if !cone.is_pointed() {
        return Err(Error::NotPointed);
    }
    if cone.is_zero() {
        return Ok(Vec::new());
    }
    if cone.dim() == cone.ambient() {
        return hilbert_basis_full(cone);
    }
    // Work in coordinates on the saturated lattice of the span.
    let span_basis = kernel_basis(&LatticeMatrix::from_rows(
        cone.ambient(),
        cone.span_equations(),
    ));
    let embed = LatticeMatrix::from_cols(cone.ambient(), &span_basis);
    let small_rays: Vec<LatticeVector> = cone
        .rays()
        .iter()
        .map(|r| {
            let sol = solve_rational(&embed, &to_rational(r))
                .ok_or_else(|| Error::Internal("span basis does not cover ray".into()))?;
            crate::linalg::rational_to_integer(&sol)
                .ok_or_else(|| Error::Internal("span basis is not saturated".into()))
        })
        .collect::<Result<_>>()?;
    let small = Cone::from_generators(span_basis.len(), &small_rays);
    let basis = hilbert_basis_full(&small)?;
    let mut out: Vec<LatticeVector> = basis.iter().map(|h| embed.mul_vec(h)).collect();
    out.sort();
    Ok(out)
}

/// A finite generating set of the semigroup of lattice points of a cone
/// that may contain lines. For a pointed cone this is the Hilbert basis;
/// otherwise the cone splits as lineality plus a pointed image, and the
/// generators are integral lifts of the image's Hilbert basis together with
/// both signs of a lineality lattice basis.
pub fn semigroup_generators(cone: &Cone) -> Result<Vec<LatticeVector>> {
    if cone.is_pointed() {
        return hilbert_basis(cone);
    }
    let ambient = cone.ambient();
    let lin = LatticeMatrix::from_cols(ambient, cone.lineality());
    let ck = crate::linalg::cokernel(&lin);
    if !ck.torsion_invariants.is_empty() {
        return Err(Error::Internal("lineality lattice is not saturated".into()));
    }
    let proj = &ck.projection;
    let image_gens: Vec<LatticeVector> = cone
        .rays()
        .iter()
        .map(|r| proj.mul_vec(r))
        .collect();
    let image = Cone::from_generators(ck.free_rank, &image_gens);
    if !image.is_pointed() {
        return Err(Error::Internal("projected cone still has lineality".into()));
    }
    let mut out: Vec<LatticeVector> = hilbert_basis(&image)?
        .iter()
        .map(|h| {
            crate::linalg::solve_integer(proj, h)
                .ok_or_else(|| Error::Internal("projection is not surjective".into()))
        })
        .collect::<Result<_>>()?;
    for b in cone.lineality() {
        out.push(b.clone());
        out.push(b.neg());
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Lattice points of the closed fundamental parallelepipeds over a
/// triangulation of a pointed cone, in ambient coordinates. Any lattice
/// point of the cone differs from some cover point by a nonnegative integer
/// combination of extremal rays, and the cover point can be chosen with the
/// same support of barycentric weights, so the cover meets every relatively
/// open stratum that the point lies in.
pub(crate) fn monoid_cover(cone: &Cone) -> Result<Vec<LatticeVector>> {
    if !cone.is_pointed() {
        return Err(Error::NotPointed);
    }
    if cone.is_zero() {
        return Ok(vec![LatticeVector::zeros(cone.ambient())]);
    }
    if cone.dim() == cone.ambient() {
        return monoid_cover_full(cone);
    }
    let span_basis = kernel_basis(&LatticeMatrix::from_rows(
        cone.ambient(),
        cone.span_equations(),
    ));
    let embed = LatticeMatrix::from_cols(cone.ambient(), &span_basis);
    let small_rays: Vec<LatticeVector> = cone
        .rays()
        .iter()
        .map(|r| {
            let sol = solve_rational(&embed, &to_rational(r))
                .ok_or_else(|| Error::Internal("span basis does not cover ray".into()))?;
            crate::linalg::rational_to_integer(&sol)
                .ok_or_else(|| Error::Internal("span basis is not saturated".into()))
        })
        .collect::<Result<_>>()?;
    let small = Cone::from_generators(span_basis.len(), &small_rays);
    let mut out: Vec<LatticeVector> = monoid_cover_full(&small)?
        .iter()
        .map(|p| embed.mul_vec(p))
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}

fn monoid_cover_full(cone: &Cone) -> Result<Vec<LatticeVector>> {
    let dim = cone.ambient();
    let mut out: BTreeSet<LatticeVector> = BTreeSet::new();
    for simplex in triangulate(cone) {
        let gens: Vec<LatticeVector> = simplex.iter().map(|&i| cone.rays()[i].clone()).collect();
        for p in super::polytope::closed_parallelepiped_points(dim, &gens)? {
            out.insert(p);
        }
    }
    Ok(out.into_iter().collect())
}

fn hilbert_basis_full(cone: &Cone) -> Result<Vec<LatticeVector>> {
    let dim = cone.ambient();
    let mut candidates: BTreeSet<LatticeVector> = cone.rays().iter().cloned().collect();
    for simplex in triangulate(cone) {
        let gens: Vec<LatticeVector> = simplex.iter().map(|&i| cone.rays()[i].clone()).collect();
        for p in half_open_parallelepiped_points(dim, &gens)? {
            if !p.is_zero() {
                candidates.insert(p);
            }
        }
    }
    // Sort by a positive grading so that only earlier elements can divide
    // later ones, then keep the irreducible elements.
    let grade = |v: &LatticeVector| -> Int {
        cone.facet_normals().iter().map(|f| f.dot(v)).sum()
    };
    let mut graded: Vec<(Int, LatticeVector)> =
        candidates.into_iter().map(|v| (grade(&v), v)).collect();
    graded.sort();
    let mut basis: Vec<LatticeVector> = Vec::new();
    for i in 0..graded.len() {
        let (ref gi, ref h) = graded[i];
        let reducible = graded[..i].iter().any(|(gs, s)| {
            gs < gi && {
                let diff = h.sub(s);
                !diff.is_zero() && cone.contains(&diff)
            }
        });
        if !reducible {
            basis.push(h.clone());
        }
    }
    basis.sort();
    Ok(basis)
}

/// Triangulation of a full dimensional pointed cone into simplicial subcones
/// spanned by extremal rays, as index sets. Pulls the lexicographically first
/// ray through every facet not containing it, recursively.
fn triangulate(cone: &Cone) -> Vec<Vec<usize>> {
    let all: Vec<usize> = (0..cone.rays().len()).collect();
    triangulate_rec(cone, &all, cone)
}

fn triangulate_rec(root: &Cone, subset: &[usize], current: &Cone) -> Vec<Vec<usize>> {
    if subset.len() == current.dim() {
        return vec![subset.to_vec()];
    }
    let apex = subset[0];
    let apex_ray = &root.rays()[apex];
    let mut out = Vec::new();
    for normal in current.facet_normals() {
        if normal.dot(apex_ray).is_zero() {
            continue;
        }
        let face_subset: Vec<usize> = subset
            .iter()
            .copied()
            .filter(|&i| normal.dot(&root.rays()[i]).is_zero())
            .collect();
        let face_rays: Vec<LatticeVector> = face_subset
            .iter()
            .map(|&i| root.rays()[i].clone())
            .collect();
        let face_cone = Cone::from_generators(root.ambient(), &face_rays);
        for mut simplex in triangulate_rec(root, &face_subset, &face_cone) {
            simplex.push(apex);
            simplex.sort_unstable();
            out.push(simplex);
        }
    }
    out
}

/// Lattice points of `{sum t_i g_i : 0 <= t_i < 1}` for linearly independent
/// integer vectors `g_i`, via coset representatives of the sublattice they
/// span, computed from a Smith decomposition.
fn half_open_parallelepiped_points(
    dim: usize,
    gens: &[LatticeVector],
) -> Result<Vec<LatticeVector>> {
    assert_eq!(gens.len(), dim, "parallelepiped needs a lattice basis");
    let g = LatticeMatrix::from_cols(dim, gens);
    let snf = smith_normal_form(&g);
    let diag = snf.diagonal();
    let index: Int = diag.iter().map(|d| d.abs()).product();
    let count = index
        .to_usize()
        .filter(|&c| c <= 1_000_000)
        .ok_or_else(|| Error::Internal("parallelepiped index too large".into()))?;
    // Columns of the inverse of U give representatives for each invariant
    // factor direction; U is unimodular so the solves are integral.
    let u_inv_cols: Vec<LatticeVector> = (0..dim)
        .map(|i| {
            crate::linalg::solve_integer(&snf.u, &LatticeVector::unit(dim, i))
                .ok_or_else(|| Error::Internal("unimodular solve failed".into()))
        })
        .collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(count);
    let mut tuple = vec![Int::zero(); dim];
    loop {
        let mut x = LatticeVector::zeros(dim);
        for i in 0..dim {
            x = x.add(&u_inv_cols[i].scale(&tuple[i]));
        }
        // Reduce the coset representative into the half open box.
        let mu = solve_rational(&g, &to_rational(&x))
            .ok_or_else(|| Error::Internal("parallelepiped solve failed".into()))?;
        let frac: Vec<Rat> = mu.iter().map(|m| m - m.floor()).collect();
        let mut p = vec![Rat::zero(); dim];
        for (i, gen) in gens.iter().enumerate() {
            for (k, entry) in gen.0.iter().enumerate() {
                p[k] += &frac[i] * Rat::from(entry.clone());
            }
        }
        let point = crate::linalg::rational_to_integer(&p)
            .ok_or_else(|| Error::Internal("coset representative not integral".into()))?;
        out.push(point);
        // Odometer step over the box of invariant factors.
        let mut i = 0;
        loop {
            if i == dim {
                out.sort();
                out.dedup();
                debug_assert_eq!(out.len(), count);
                return Ok(out);
            }
            tuple[i] += Int::one();
            if tuple[i] < diag[i].abs() {
                break;
            }
            tuple[i] = Int::zero();
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vecs(entries: &[&[i64]]) -> Vec<LatticeVector> {
        entries.iter().map(|e| LatticeVector::from_i64(e)).collect()
    }

    #[test]
    fn quadrant_hilbert_basis() {
        let c = Cone::from_generators(2, &vecs(&[&[1, 0], &[0, 1]]));
        assert_eq!(hilbert_basis(&c).unwrap(), vecs(&[&[0, 1], &[1, 0]]));
    }

    #[test]
    fn skew_cone_needs_interior_generator() {
        let c = Cone::from_generators(2, &vecs(&[&[1, 0], &[1, 2]]));
        assert_eq!(
            hilbert_basis(&c).unwrap(),
            vecs(&[&[1, 0], &[1, 1], &[1, 2]])
        );
    }

    #[test]
    fn wider_skew_cone() {
        let c = Cone::from_generators(2, &vecs(&[&[1, 0], &[1, 4]]));
        assert_eq!(
            hilbert_basis(&c).unwrap(),
            vecs(&[&[1, 0], &[1, 1], &[1, 2], &[1, 3], &[1, 4]])
        );
    }

    #[test]
    fn square_cone_hilbert_basis() {
        // Height is additive and positive, so the basis is exactly the nine
        // lattice points at height one.
        let c = Cone::from_generators(
            3,
            &vecs(&[&[1, 1, 1], &[1, -1, 1], &[-1, 1, 1], &[-1, -1, 1]]),
        );
        let hb = hilbert_basis(&c).unwrap();
        assert_eq!(hb.len(), 9);
        for x in -1..=1i64 {
            for y in -1..=1i64 {
                assert!(hb.contains(&LatticeVector::from_i64(&[x, y, 1])));
            }
        }
    }

    #[test]
    fn half_plane_semigroup_generators() {
        let c = Cone::from_inequalities(2, &vecs(&[&[0, 1]]), &[]);
        let gens = semigroup_generators(&c).unwrap();
        assert!(gens.contains(&LatticeVector::from_i64(&[1, 0])));
        assert!(gens.contains(&LatticeVector::from_i64(&[-1, 0])));
        assert_eq!(
            gens.iter()
                .filter(|g| g.0[1] == Int::from(1))
                .count(),
            1
        );
        // Every point of the half plane near the origin is a sum of generators
        // with the height-one generator used at most once.
        let lift = gens
            .iter()
            .find(|g| g.0[1] == Int::from(1))
            .unwrap()
            .clone();
        for x in -3..=3i64 {
            let target = LatticeVector::from_i64(&[x, 1]);
            let diff = target.sub(&lift);
            assert_eq!(diff.0[1], Int::from(0));
        }
    }

    #[test]
    fn pointed_cone_semigroup_generators_match_hilbert_basis() {
        let c = Cone::from_generators(2, &vecs(&[&[1, 0], &[1, 2]]));
        assert_eq!(semigroup_generators(&c).unwrap(), hilbert_basis(&c).unwrap());
    }

    #[test]
    fn low_dimensional_cone_in_ambient_three() {
        // Image of the skew cone under an embedding with saturated span.
        let c = Cone::from_generators(3, &vecs(&[&[1, 0, 1], &[1, 2, 1]]));
        let hb = hilbert_basis(&c).unwrap();
        assert_eq!(hb, vecs(&[&[1, 0, 1], &[1, 1, 1], &[1, 2, 1]]));
    }

    #[test]
    fn ray_hilbert_basis_is_primitive_generator() {
        let c = Cone::from_generators(2, &vecs(&[&[2, 4]]));
        assert_eq!(hilbert_basis(&c).unwrap(), vecs(&[&[1, 2]]));
    }

    #[test]
    fn zero_cone_has_empty_basis() {
        let c = Cone::zero(2);
        assert!(hilbert_basis(&c).unwrap().is_empty());
    }

    #[test]
    fn non_pointed_cone_is_rejected() {
        let c = Cone::from_generators(2, &vecs(&[&[1, 0], &[-1, 0]]));
        assert!(matches!(hilbert_basis(&c), Err(Error::NotPointed)));
    }

    #[test]
    fn parallelepiped_of_determinant_two() {
        let pts =
            half_open_parallelepiped_points(2, &vecs(&[&[1, 0], &[1, 2]])).unwrap();
        assert_eq!(pts, vecs(&[&[0, 0], &[1, 1]]));
    }
}
