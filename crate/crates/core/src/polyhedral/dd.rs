//! Double description: from a cone `{x : e x = 0, a x >= 0}` to a lineality
//! basis plus the extremal rays. Constraints are inserted in lexicographic
//! order and adjacency of rays is decided by an exact rank test, so the
//! output is deterministic and no perturbation is ever needed.

use crate::linalg::{kernel_basis, rank, Int, LatticeMatrix, LatticeVector};
use num_traits::{Signed, Zero};

pub struct DoubleDescription {
    pub lineality: Vec<LatticeVector>,
    pub rays: Vec<LatticeVector>,
}

pub fn double_description(
    ambient: usize,
    equations: &[LatticeVector],
    inequalities: &[LatticeVector],
) -> DoubleDescription {
    let mut lineality: Vec<LatticeVector> = if equations.is_empty() {
        (0..ambient)
            .map(|i| LatticeVector::unit(ambient, i))
            .collect()
    } else {
        kernel_basis(&LatticeMatrix::from_rows(ambient, equations))
    };
    let mut rays: Vec<LatticeVector> = Vec::new();
    let mut processed: Vec<LatticeVector> = equations.to_vec();

    let mut ineqs: Vec<LatticeVector> = inequalities
        .iter()
        .filter(|a| !a.is_zero())
        .map(|a| a.primitive())
        .collect();
    ineqs.sort();
    ineqs.dedup();

    for a in ineqs {
        if let Some(idx) = lineality.iter().position(|b| !a.dot(b).is_zero()) {
            // The constraint cuts the lineality space: one basis vector turns
            // into a ray, the rest are sheared into the hyperplane of `a`.
            let mut b0 = lineality.remove(idx).primitive();
            if a.dot(&b0).is_negative() {
                b0 = b0.neg();
            }
            let ab0 = a.dot(&b0);
            for b in lineality.iter_mut() {
                let ab = a.dot(b);
                *b = b.scale(&ab0).sub(&b0.scale(&ab)).primitive();
            }
            for r in rays.iter_mut() {
                let ar = a.dot(r);
                *r = r.scale(&ab0).sub(&b0.scale(&ar)).primitive();
            }
            rays.push(b0);
            rays.retain(|r| !r.is_zero());
            rays.sort();
            rays.dedup();
        } else {
            let vals: Vec<Int> = rays.iter().map(|r| a.dot(r)).collect();
            let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
            let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
            if neg.is_empty() {
                processed.push(a);
                continue;
            }
            let lin_dim = lineality.len();
            let mut next: Vec<LatticeVector> = (0..rays.len())
                .filter(|i| !vals[*i].is_negative())
                .map(|i| rays[i].clone())
                .collect();
            for &i in &pos {
                for &j in &neg {
                    if !adjacent(&processed, &rays[i], &rays[j], ambient, lin_dim) {
                        continue;
                    }
                    // positive combination lying on the hyperplane of `a`
                    let combo = rays[j]
                        .scale(&vals[i])
                        .sub(&rays[i].scale(&vals[j]))
                        .primitive();
                    if !combo.is_zero() {
                        next.push(combo);
                    }
                }
            }
            next.sort();
            next.dedup();
            rays = next;
            processed.push(a);
            continue;
        }
        processed.push(a);
    }

    DoubleDescription {
        lineality: crate::linalg::hermite_row_basis(&lineality, ambient),
        rays,
    }
}

/// Two extremal rays are adjacent when the minimal face containing both has
/// dimension `lineality + 2`, i.e. the constraints active at both span a
/// space of rank `ambient - lineality - 2`.
fn adjacent(
    processed: &[LatticeVector],
    r1: &LatticeVector,
    r2: &LatticeVector,
    ambient: usize,
    lin_dim: usize,
) -> bool {
    let active: Vec<LatticeVector> = processed
        .iter()
        .filter(|c| c.dot(r1).is_zero() && c.dot(r2).is_zero())
        .cloned()
        .collect();
    let target = ambient - lin_dim;
    if target < 2 {
        return false;
    }
    rank(&LatticeMatrix::from_rows(ambient, &active)) == target - 2
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vecs(entries: &[&[i64]]) -> Vec<LatticeVector> {
        entries.iter().map(|e| LatticeVector::from_i64(e)).collect()
    }

    #[test]
    fn whole_plane_and_quadrant() {
        let dd = double_description(2, &[], &[]);
        assert_eq!(dd.lineality.len(), 2);
        assert!(dd.rays.is_empty());

        let dd = double_description(2, &[], &vecs(&[&[1, 0], &[0, 1]]));
        assert!(dd.lineality.is_empty());
        let mut rays = dd.rays.clone();
        rays.sort();
        assert_eq!(rays, vecs(&[&[0, 1], &[1, 0]]));
    }

    #[test]
    fn dual_of_skew_cone() {
        // {u : u.(1,0) >= 0, u.(1,2) >= 0} has extremal rays (0,1) and (2,-1).
        let dd = double_description(2, &[], &vecs(&[&[1, 0], &[1, 2]]));
        assert!(dd.lineality.is_empty());
        let mut rays = dd.rays.clone();
        rays.sort();
        assert_eq!(rays, vecs(&[&[0, 1], &[2, -1]]));
    }

    #[test]
    fn line_from_opposite_constraints() {
        let dd = double_description(2, &[], &vecs(&[&[1, 0], &[-1, 0]]));
        assert_eq!(dd.lineality, vecs(&[&[0, 1]]));
        assert!(dd.rays.is_empty());
    }

    #[test]
    fn octant_from_redundant_system() {
        let dd = double_description(
            3,
            &[],
            &vecs(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 1]]),
        );
        assert!(dd.lineality.is_empty());
        assert_eq!(dd.rays.len(), 3);
    }

    #[test]
    fn square_cone_from_inequalities() {
        // Cone over the unit square at height one: z >= |x|, z >= |y|.
        let dd = double_description(
            3,
            &[],
            &vecs(&[&[1, 0, 1], &[-1, 0, 1], &[0, 1, 1], &[0, -1, 1]]),
        );
        assert!(dd.lineality.is_empty());
        assert_eq!(dd.rays.len(), 4);
        for r in &dd.rays {
            assert_eq!(r.0[2], Int::from(1));
        }
    }

    #[test]
    fn equations_restrict_the_ambient() {
        let dd = double_description(
            3,
            &vecs(&[&[0, 0, 1]]),
            &vecs(&[&[1, 0, 0], &[0, 1, 0]]),
        );
        assert!(dd.lineality.is_empty());
        let mut rays = dd.rays.clone();
        rays.sort();
        assert_eq!(rays, vecs(&[&[0, 1, 0], &[1, 0, 0]]));
    }
}
