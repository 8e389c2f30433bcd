//! Lattice point enumeration for rational polyhedra of the form
//! `{x : a_i x >= 0, d_j x = c_j}`. Boundedness is decided through the
//! recession cone; bounded regions are enumerated through the vertices of
//! the homogenization.

use super::cone::Cone;
use super::dd::double_description;
use crate::error::{Error, Result};
use crate::linalg::{solve_rational, to_rational, Int, LatticeMatrix, LatticeVector, Rat};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

pub enum LatticePoints {
    Finite(Vec<LatticeVector>),
    /// The region is unbounded; the witness is a nonzero lattice direction
    /// in which it recedes.
    Unbounded { ray: LatticeVector },
}

/// The recession cone `{x : a_i x >= 0, d_j x = 0}` of the region.
pub fn recession_cone(
    ambient: usize,
    inequalities: &[LatticeVector],
    equations: &[(LatticeVector, Int)],
) -> Cone {
    let eqs: Vec<LatticeVector> = equations.iter().map(|(d, _)| d.clone()).collect();
    Cone::from_inequalities(ambient, inequalities, &eqs)
}

/// All lattice points of `{x : a_i x >= 0, d_j x = c_j}`, or a recession
/// direction when the region is unbounded.
pub fn lattice_points(
    ambient: usize,
    inequalities: &[LatticeVector],
    equations: &[(LatticeVector, Int)],
) -> Result<LatticePoints> {
    let rec = recession_cone(ambient, inequalities, equations);
    if !rec.is_zero() {
        let ray = rec
            .rays()
            .first()
            .cloned()
            .or_else(|| rec.lineality().first().cloned())
            .expect("nonzero cone has a generator");
        return Ok(LatticePoints::Unbounded { ray });
    }

    // Homogenize with one extra coordinate t: points of the region are the
    // t = 1 slice of {a x >= 0, d x - c t = 0, t >= 0}.
    let mut h_ineqs: Vec<LatticeVector> = inequalities
        .iter()
        .map(|a| {
            let mut v = a.0.clone();
            v.push(Int::zero());
            LatticeVector::new(v)
        })
        .collect();
    let mut t_row = vec![Int::zero(); ambient];
    t_row.push(Int::from(1));
    h_ineqs.push(LatticeVector::new(t_row));
    let h_eqs: Vec<LatticeVector> = equations
        .iter()
        .map(|(d, c)| {
            let mut v = d.0.clone();
            v.push(-c.clone());
            LatticeVector::new(v)
        })
        .collect();
    let dd = double_description(ambient + 1, &h_eqs, &h_ineqs);

    // With trivial recession cone the homogenization is pointed and every
    // ray has a positive last coordinate unless the region is empty.
    let mut vertices: Vec<Vec<Rat>> = Vec::new();
    for r in dd.rays.iter().chain(dd.lineality.iter()) {
        let t = &r.0[ambient];
        if t.is_zero() {
            let dir = LatticeVector::new(r.0[..ambient].to_vec());
            if !dir.is_zero() {
                return Err(Error::Internal(
                    "unexpected recession direction in homogenization".into(),
                ));
            }
            continue;
        }
        let t_rat = Rat::from(t.clone());
        vertices.push(
            r.0[..ambient]
                .iter()
                .map(|x| Rat::from(x.clone()) / t_rat.clone())
                .collect(),
        );
    }
    if vertices.is_empty() {
        return Ok(LatticePoints::Finite(Vec::new()));
    }

    // Bounding box of the vertices, then exact filtering.
    let mut lo = vec![Int::zero(); ambient];
    let mut hi = vec![Int::zero(); ambient];
    for k in 0..ambient {
        let mut min = vertices[0][k].clone();
        let mut max = vertices[0][k].clone();
        for v in &vertices[1..] {
            if v[k] < min {
                min = v[k].clone();
            }
            if v[k] > max {
                max = v[k].clone();
            }
        }
        lo[k] = min.ceil().to_integer();
        hi[k] = max.floor().to_integer();
    }
    let mut volume = BigInt::from(1);
    for k in 0..ambient {
        let side: BigInt = &hi[k] - &lo[k] + 1;
        if side.is_negative() || side.is_zero() {
            return Ok(LatticePoints::Finite(Vec::new()));
        }
        volume *= side;
        if volume > BigInt::from(4_000_000) {
            return Err(Error::Internal("lattice point region too large".into()));
        }
    }

    let mut out = Vec::new();
    let mut cursor = lo.clone();
    'scan: loop {
        let point = LatticeVector::new(cursor.clone());
        let ok = inequalities.iter().all(|a| !a.dot(&point).is_negative())
            && equations.iter().all(|(d, c)| d.dot(&point) == *c);
        if ok {
            out.push(point);
        }
        let mut k = 0;
        loop {
            if k == ambient {
                break 'scan;
            }
            cursor[k] += 1;
            if cursor[k] <= hi[k] {
                break;
            }
            cursor[k] = lo[k].clone();
            k += 1;
        }
    }
    out.sort();
    Ok(LatticePoints::Finite(out))
}

/// Lattice points of the closed parallelepiped `{sum t_i g_i : 0 <= t_i <= 1}`
/// spanned by linearly independent integer vectors.
pub fn closed_parallelepiped_points(
    ambient: usize,
    gens: &[LatticeVector],
) -> Result<Vec<LatticeVector>> {
    let matrix = LatticeMatrix::from_cols(ambient, gens);
    // Bounding box from the corners, i.e. all subset sums.
    let mut lo = vec![Int::zero(); ambient];
    let mut hi = vec![Int::zero(); ambient];
    for g in gens {
        for k in 0..ambient {
            let e = &g.0[k];
            if e.is_negative() {
                lo[k] += e;
            } else {
                hi[k] += e;
            }
        }
    }
    let mut volume = BigInt::from(1);
    for k in 0..ambient {
        volume *= &hi[k] - &lo[k] + 1;
        if volume > BigInt::from(4_000_000) {
            return Err(Error::Internal("parallelepiped region too large".into()));
        }
    }
    let mut out = Vec::new();
    let mut cursor = lo.clone();
    'scan: loop {
        let point = LatticeVector::new(cursor.clone());
        if let Some(coeffs) = solve_rational(&matrix, &to_rational(&point)) {
            let in_box = coeffs
                .iter()
                .all(|t| !t.is_negative() && *t <= Rat::from(Int::from(1)));
            // Independent generators make the coefficients unique, but the
            // point must also lie in their span.
            let back: Vec<Rat> = {
                let mut acc = vec![Rat::zero(); ambient];
                for (i, g) in gens.iter().enumerate() {
                    for k in 0..ambient {
                        acc[k] += &coeffs[i] * Rat::from(g.0[k].clone());
                    }
                }
                acc
            };
            let in_span = back
                .iter()
                .zip(point.0.iter())
                .all(|(b, p)| *b == Rat::from(p.clone()));
            if in_box && in_span {
                out.push(point);
            }
        }
        let mut k = 0;
        loop {
            if k == ambient {
                break 'scan;
            }
            cursor[k] += 1;
            if cursor[k] <= hi[k] {
                break;
            }
            cursor[k] = lo[k].clone();
            k += 1;
        }
    }
    out.sort();
    Ok(out)
}
