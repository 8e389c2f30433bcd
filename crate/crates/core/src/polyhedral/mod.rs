//! Exact polyhedral geometry over the integers: cones in both descriptions,
//! face lattices, Hilbert bases and lattice point enumeration.

pub mod cone;
pub mod dd;
pub mod hilbert;
pub mod polytope;

pub use cone::{dual_face_ray_indices, Cone, Face, FaceLattice};
pub use dd::{double_description, DoubleDescription};
pub use hilbert::{hilbert_basis, semigroup_generators};
pub use polytope::{
    closed_parallelepiped_points, lattice_points, recession_cone, LatticePoints,
};
