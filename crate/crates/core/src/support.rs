//! The lattice of integral piecewise linear support functions on a fan, the
//! embedding of the character lattice, and the Picard group as its cokernel.
//!
//! A support function is stored through its ray values. Values on rays pin
//! down the function on every cone, so the lattice of support functions is
//! the set of integer ray-value vectors that are linear across each maximal
//! cone and integral on its lattice points.

use crate::error::{Error, Result};
use crate::fan::{Fan, FanCone};
use crate::linalg::{
    cokernel, hermite_row_basis, kernel_basis, solve_integer, solve_rational, to_rational,
    CokernelData, Int, LatticeMatrix, LatticeVector, Rat,
};
use crate::polyhedral::hilbert_basis;
use num_integer::Integer as _;
use num_traits::{One, Zero};

/// Coordinates of a divisor class in the free part of the Picard group.
pub type PicClass = LatticeVector;

/// An integral support function on the fan: ray values, coordinates in the
/// chosen basis of the support function lattice, one rational linear
/// representative per maximal cone, and the integer values on the Hilbert
/// basis of each maximal cone certifying integrality.
#[derive(Clone, Debug)]
pub struct SupportFunction {
    coords: LatticeVector,
    ray_values: LatticeVector,
    m_reps: Vec<Vec<Rat>>,
    hilbert_values: Vec<Vec<Int>>,
}

impl SupportFunction {
    pub fn coords(&self) -> &LatticeVector {
        &self.coords
    }

    pub fn ray_values(&self) -> &LatticeVector {
        &self.ray_values
    }

    /// Rational linear representative on the k-th maximal cone.
    pub fn representative(&self, k: usize) -> &[Rat] {
        &self.m_reps[k]
    }

    pub fn hilbert_values(&self, k: usize) -> &[Int] {
        &self.hilbert_values[k]
    }
}

impl PartialEq for SupportFunction {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords
    }
}
impl Eq for SupportFunction {}

#[derive(Clone, Debug)]
pub struct SupportLattice {
    fan: Fan,
    /// Rows are the ray-value vectors of the basis support functions.
    basis_matrix: LatticeMatrix,
    basis: Vec<SupportFunction>,
    iota: LatticeMatrix,
    pic: CokernelData,
    /// Hilbert bases of the maximal cones, parallel to `maximal_sets`.
    max_hilbert: Vec<Vec<LatticeVector>>,
    maximal_sets: Vec<Vec<usize>>,
}

impl SupportLattice {
    /// Solves for the lattice of support functions of a valid spanning fan.
    pub fn compute(fan: &Fan) -> Result<SupportLattice> {
        fan.require_valid_spanning()?;
        let rank_n = fan.lattice_rank();
        let num_rays = fan.rays().len();
        let ray_id = |v: &LatticeVector| -> usize {
            fan.rays().iter().position(|r| r == v).expect("fan ray")
        };

        let maximal: Vec<&FanCone> = fan.maximal_cones().collect();
        let maximal_sets: Vec<Vec<usize>> = maximal.iter().map(|c| c.ray_ids.clone()).collect();

        // Linearity across each maximal cone: every rational linear relation
        // among its rays must annihilate the ray values.
        let mut compat_rows: Vec<LatticeVector> = Vec::new();
        for c in &maximal {
            let cols = LatticeMatrix::from_cols(rank_n, c.cone.rays());
            for rel in kernel_basis(&cols) {
                let mut row = LatticeVector::zeros(num_rays);
                for (local, r) in c.cone.rays().iter().enumerate() {
                    row.0[ray_id(r)] = rel.0[local].clone();
                }
                compat_rows.push(row);
            }
        }
        let linear_space = kernel_basis(&LatticeMatrix::from_rows(num_rays, &compat_rows));

        // Integrality on each maximal cone: the value at a Hilbert basis
        // element, written as a rational combination of ray values, must be
        // an integer.
        let max_hilbert: Vec<Vec<LatticeVector>> = maximal
            .iter()
            .map(|c| hilbert_basis(&c.cone))
            .collect::<Result<_>>()?;
        let mut int_rows: Vec<Vec<Rat>> = Vec::new();
        for (c, hb) in maximal.iter().zip(&max_hilbert) {
            let cols = LatticeMatrix::from_cols(rank_n, c.cone.rays());
            for eta in hb {
                let q = solve_rational(&cols, &to_rational(eta))
                    .ok_or_else(|| Error::Internal("hilbert element outside ray span".into()))?;
                let mut row = vec![Rat::zero(); num_rays];
                for (local, r) in c.cone.rays().iter().enumerate() {
                    row[ray_id(r)] += q[local].clone();
                }
                int_rows.push(row);
            }
        }

        let basis_rows = integral_sublattice(&linear_space, &int_rows, num_rays)?;
        let basis_matrix = LatticeMatrix::from_rows(num_rays, &basis_rows);
        let sf_rank = basis_rows.len();

        // The character lattice embeds by m -> (<m, n_rho>)_rho; express the
        // image in the chosen basis.
        let transpose = basis_matrix.transpose();
        let mut iota = LatticeMatrix::zeros(sf_rank, rank_n);
        for j in 0..rank_n {
            let image = LatticeVector::new(
                fan.rays().iter().map(|r| r.0[j].clone()).collect(),
            );
            let coords = solve_integer(&transpose, &image).ok_or_else(|| {
                Error::Internal("globally linear function outside the computed lattice".into())
            })?;
            for i in 0..sf_rank {
                *iota.get_mut(i, j) = coords.0[i].clone();
            }
        }
        if !kernel_basis(&iota).is_empty() {
            return Err(Error::Internal(
                "character embedding is not injective on a spanning fan".into(),
            ));
        }

        let pic = cokernel(&iota);
        if !pic.torsion_invariants.is_empty() {
            return Err(Error::TorsionPic(pic.torsion_invariants.clone()));
        }

        let mut sl = SupportLattice {
            fan: fan.clone(),
            basis_matrix,
            basis: Vec::new(),
            iota,
            pic,
            max_hilbert,
            maximal_sets,
        };
        let funcs: Vec<SupportFunction> = basis_rows
            .iter()
            .map(|row| sl.function_from_ray_values_unchecked(row))
            .collect::<Result<_>>()?;
        sl.basis = funcs;
        Ok(sl)
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[SupportFunction] {
        &self.basis
    }

    pub fn basis_matrix(&self) -> &LatticeMatrix {
        &self.basis_matrix
    }

    pub fn iota_matrix(&self) -> &LatticeMatrix {
        &self.iota
    }

    pub fn pic(&self) -> &CokernelData {
        &self.pic
    }

    pub fn pic_rank(&self) -> usize {
        self.pic.free_rank
    }

    /// Ray id sets of the maximal cones, fixing the indexing used by
    /// `representative` and `maximal_hilbert_basis`.
    pub fn maximal_sets(&self) -> &[Vec<usize>] {
        &self.maximal_sets
    }

    pub fn maximal_hilbert_basis(&self, k: usize) -> &[LatticeVector] {
        &self.max_hilbert[k]
    }

    /// (rank of the big torus, rank of the base torus, rank of the quotient
    /// group): character lattice ranks of the three groups in the quotient.
    pub fn quotient_group_data(&self) -> (usize, usize, usize) {
        (self.rank(), self.fan.lattice_rank(), self.pic_rank())
    }

    /// The support function with the given coordinates in the SF basis.
    pub fn function_from_coords(&self, coords: &LatticeVector) -> Result<SupportFunction> {
        assert_eq!(coords.len(), self.rank(), "coordinate length mismatch");
        let ray_values = self.basis_matrix.transpose().mul_vec(coords);
        let mut f = self.function_from_ray_values_unchecked(&ray_values)?;
        f.coords = coords.clone();
        Ok(f)
    }

    /// The support function with the given ray values, or None when the
    /// values are not those of an integral support function.
    pub fn function_from_ray_values(
        &self,
        ray_values: &LatticeVector,
    ) -> Result<Option<SupportFunction>> {
        assert_eq!(ray_values.len(), self.fan.rays().len());
        match solve_integer(&self.basis_matrix.transpose(), ray_values) {
            Some(_) => Ok(Some(self.function_from_ray_values_unchecked(ray_values)?)),
            None => Ok(None),
        }
    }

    fn function_from_ray_values_unchecked(
        &self,
        ray_values: &LatticeVector,
    ) -> Result<SupportFunction> {
        let coords = solve_integer(&self.basis_matrix.transpose(), ray_values)
            .ok_or_else(|| Error::Internal("ray values outside the support lattice".into()))?;
        let mut m_reps = Vec::new();
        let mut hilbert_values = Vec::new();
        for (k, ids) in self.maximal_sets.iter().enumerate() {
            let cone = &self
                .fan
                .cone_by_ray_ids(ids)
                .expect("maximal cone present")
                .cone;
            let rows = LatticeMatrix::from_rows(self.fan.lattice_rank(), cone.rays());
            let values: Vec<Rat> = cone
                .rays()
                .iter()
                .map(|r| {
                    let id = self.fan.rays().iter().position(|x| x == r).expect("ray");
                    Rat::from(ray_values.0[id].clone())
                })
                .collect();
            let m = solve_rational(&rows, &values)
                .ok_or_else(|| Error::Internal("incompatible ray values on a cone".into()))?;
            let mut vals = Vec::new();
            for eta in &self.max_hilbert[k] {
                let v: Rat = m
                    .iter()
                    .zip(eta.0.iter())
                    .map(|(mi, ni)| mi * Rat::from(ni.clone()))
                    .sum();
                if !v.is_integer() {
                    return Err(Error::Internal(
                        "support function not integral on a cone lattice".into(),
                    ));
                }
                vals.push(v.to_integer());
            }
            m_reps.push(m);
            hilbert_values.push(vals);
        }
        Ok(SupportFunction {
            coords,
            ray_values: ray_values.clone(),
            m_reps,
            hilbert_values,
        })
    }

    /// The globally linear support function of a character.
    pub fn iota(&self, m: &LatticeVector) -> Result<SupportFunction> {
        assert_eq!(m.len(), self.fan.lattice_rank());
        let coords = LatticeVector::new(
            (0..self.rank())
                .map(|i| {
                    (0..self.fan.lattice_rank())
                        .map(|j| self.iota.get(i, j) * &m.0[j])
                        .sum()
                })
                .collect(),
        );
        self.function_from_coords(&coords)
    }

    /// Picard degree: image of the coordinates under the cokernel
    /// projection.
    pub fn degree(&self, h: &SupportFunction) -> PicClass {
        self.degree_of_coords(h.coords())
    }

    pub fn degree_of_coords(&self, coords: &LatticeVector) -> PicClass {
        self.pic.projection.mul_vec(coords)
    }

    /// The evaluation-at-n_rho functional in coordinates dual to the SF
    /// basis. This is the defining functional of the half space attached to
    /// the ray.
    pub fn evaluation_row(&self, ray: usize) -> Result<LatticeVector> {
        if ray >= self.fan.rays().len() {
            return Err(Error::UnknownRay(ray));
        }
        Ok(LatticeVector::new(
            (0..self.rank())
                .map(|i| self.basis_matrix.get(i, ray).clone())
                .collect(),
        ))
    }

    /// Value of a support function at a lattice point of the support.
    pub fn evaluate(&self, h: &SupportFunction, n: &LatticeVector) -> Result<Int> {
        for (k, ids) in self.maximal_sets.iter().enumerate() {
            let cone = &self.fan.cone_by_ray_ids(ids).expect("maximal cone").cone;
            if cone.contains(n) {
                let v: Rat = h.m_reps[k]
                    .iter()
                    .zip(n.0.iter())
                    .map(|(mi, ni)| mi * Rat::from(ni.clone()))
                    .sum();
                if !v.is_integer() {
                    return Err(Error::Internal(
                        "non-integral value at a lattice point of the support".into(),
                    ));
                }
                return Ok(v.to_integer());
            }
        }
        Err(Error::OutsideSupport)
    }

    /// Integer solution x of iota(x) = h when h has degree zero.
    pub fn preimage_under_iota(&self, h: &SupportFunction) -> Option<LatticeVector> {
        solve_integer(&self.iota, h.coords())
    }
}

/// Basis of the sublattice of `space` (a saturated lattice given by basis
/// vectors of length `ambient`) on which all the rational functionals take
/// integer values.
fn integral_sublattice(
    space: &[LatticeVector],
    functionals: &[Vec<Rat>],
    ambient: usize,
) -> Result<Vec<LatticeVector>> {
    let s = space.len();
    if s == 0 {
        return Ok(Vec::new());
    }
    // Entries Q[j][i] = functional j applied to basis vector i.
    let mut q: Vec<Vec<Rat>> = Vec::new();
    for f in functionals {
        assert_eq!(f.len(), ambient);
        q.push(
            space
                .iter()
                .map(|b| {
                    f.iter()
                        .zip(b.0.iter())
                        .map(|(fj, bi)| fj * Rat::from(bi.clone()))
                        .sum()
                })
                .collect(),
        );
    }
    let t = q.len();
    // y is admissible iff Q y is integral, i.e. (d_j q_j) y = d_j z_j has an
    // integer solution (y, z); read off the y-projection of that kernel.
    let mut rows: Vec<LatticeVector> = Vec::new();
    for (j, qrow) in q.iter().enumerate() {
        let denom: Int = qrow.iter().fold(Int::one(), |acc, x| acc.lcm(x.denom()));
        let mut row = vec![Int::zero(); s + t];
        for (i, x) in qrow.iter().enumerate() {
            let scaled = x * Rat::from(denom.clone());
            debug_assert!(scaled.is_integer());
            row[i] = scaled.to_integer();
        }
        row[s + j] = -denom;
        rows.push(LatticeVector::new(row));
    }
    let combined = kernel_basis(&LatticeMatrix::from_rows(s + t, &rows));
    let projected: Vec<LatticeVector> = combined
        .iter()
        .map(|v| LatticeVector::new(v.0[..s].to_vec()))
        .collect();
    let y_basis = hermite_row_basis(&projected, s);
    if y_basis.len() != s {
        return Err(Error::Internal(
            "integrality conditions degenerate the lattice rank".into(),
        ));
    }
    // Map back to ambient coordinates and canonicalize.
    let embedded: Vec<LatticeVector> = y_basis
        .iter()
        .map(|y| {
            let mut v = LatticeVector::zeros(ambient);
            for (i, b) in space.iter().enumerate() {
                v = v.add(&b.scale(&y.0[i]));
            }
            v
        })
        .collect();
    Ok(hermite_row_basis(&embedded, ambient))
}
