//! Acceptance suite. Each test is one criterion; the test name doubles as
//! the pass/fail line in the runner output. The oracles here are written
//! against plain machine integers, independently of the library kernels
//! they check.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use std::path::PathBuf;
use toriq::doc::FanDocument;
use toriq_core::fan::Fan;
use toriq_core::graded::{
    chart_contraction, global_sections, homunit_factorize, monomial_primes,
    overlap_unit_certificate, twisted_sections_on_chart, verify_nagspec, SectionSpace,
};
use toriq_core::linalg::{kernel_basis, solve_integer};
use toriq_core::polyhedral::hilbert_basis;
use toriq_core::quotient::{build_quotient, check_enough_cartier, half_space, QuotientPresentation};
use toriq_core::support::SupportLattice;
use toriq_core::{Cone, Int, LatticeVector};

const ALL_FANS: [&str; 8] = [
    "p1",
    "p2",
    "p1xp1",
    "hirzebruch_2",
    "blowup_p2",
    "affine_square_cone",
    "cube_fan",
    "perturbed_cube",
];

/// The corpus fans admitting the quotient construction.
const CARTIER_FANS: [&str; 7] = [
    "p1",
    "p2",
    "p1xp1",
    "hirzebruch_2",
    "blowup_p2",
    "affine_square_cone",
    "cube_fan",
];

fn corpus(name: &str) -> Fan {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "corpus"]
        .iter()
        .collect::<PathBuf>()
        .join(format!("{name}.json"));
    let text = std::fs::read_to_string(&path).expect("corpus file");
    let (doc, warnings) = FanDocument::parse(&text).expect("corpus parses");
    assert!(warnings.is_empty(), "corpus rays are primitive");
    let fan = doc.build_fan().expect("corpus builds");
    assert!(fan.is_valid(), "corpus fan {name} is valid");
    fan
}

fn quotient(name: &str) -> QuotientPresentation {
    build_quotient(SupportLattice::compute(&corpus(name)).unwrap()).unwrap()
}

fn small(v: &LatticeVector) -> Vec<i64> {
    use num_traits::ToPrimitive;
    v.0.iter().map(|x| x.to_i64().expect("small entry")).collect()
}

fn vector_set(vs: &[LatticeVector]) -> BTreeSet<Vec<i64>> {
    vs.iter().map(|v| small(v)).collect()
}

// ---------------------------------------------------------------------------
// Oracles: plain integer arithmetic, no library kernels.

/// Rank of an integer matrix by fraction-free elimination.
fn gauss_rank(mut rows: Vec<Vec<i128>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let (head, tail) = rows.split_at_mut(rank + 1);
        let p = &head[rank];
        for row in tail {
            if row[col] != 0 {
                let (a, b) = (p[col], row[col]);
                for j in 0..cols {
                    row[j] = row[j] * a - p[j] * b;
                }
                let g = row.iter().fold(0i128, |acc, x| gcd(acc, x.abs()));
                if g > 1 {
                    for x in row.iter_mut() {
                        *x /= g;
                    }
                }
            }
        }
        rank += 1;
    }
    rank
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 { a } else { gcd(b, a % b) }
}

fn primitive(v: &[i64]) -> Vec<i64> {
    let g = v.iter().fold(0i128, |acc, &x| gcd(acc, (x as i128).abs())) as i64;
    if g > 1 {
        v.iter().map(|x| x / g).collect()
    } else {
        v.to_vec()
    }
}

/// Iterates the integer points of the centered box of side 2b+1.
fn box_points(d: usize, b: i64) -> impl Iterator<Item = Vec<i64>> {
    let side = 2 * b + 1;
    let total = (0..d).fold(1i64, |acc, _| acc * side);
    (0..total).map(move |mut idx| {
        (0..d)
            .map(|_| {
                let digit = idx % side - b;
                idx /= side;
                digit
            })
            .collect()
    })
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Extremal rays of `{y : <y, g> >= 0 for all generators}` for a full rank
/// generator set, found by scanning a box that provably contains a primitive
/// generator of every extremal ray.
fn dual_rays_oracle(d: usize, gens: &[Vec<i64>]) -> BTreeSet<Vec<i64>> {
    let b = if d <= 2 { 16 } else { 32 };
    let mut rays = BTreeSet::new();
    for y in box_points(d, b) {
        if y.iter().all(|&x| x == 0) {
            continue;
        }
        if gens.iter().any(|g| dot(&y, g) < 0) {
            continue;
        }
        let tight: Vec<Vec<i128>> = gens
            .iter()
            .filter(|g| dot(&y, g) == 0)
            .map(|g| g.iter().map(|&x| x as i128).collect())
            .collect();
        if gauss_rank(tight) != d - 1 {
            continue;
        }
        let p = primitive(&y);
        if p == y {
            rays.insert(p);
        }
    }
    rays
}

/// Minimal generating set of the semigroup of lattice points of a pointed
/// full dimensional cone, by box enumeration and subtraction. `facets` is
/// the inequality description, `b` a box radius containing every generator.
/// Members are processed in increasing order of an interior functional, so
/// a reducible point always has an already confirmed witness to subtract.
fn hilbert_oracle(d: usize, facets: &[Vec<i64>], b: i64) -> BTreeSet<Vec<i64>> {
    let mut members: Vec<Vec<i64>> = box_points(d, b)
        .filter(|p| p.iter().any(|&x| x != 0) && facets.iter().all(|f| dot(p, f) >= 0))
        .collect();
    let weight = |p: &Vec<i64>| facets.iter().map(|f| dot(p, f)).sum::<i64>();
    members.sort_by_key(weight);
    let mut basis: Vec<Vec<i64>> = Vec::new();
    'candidates: for p in members {
        for q in &basis {
            let diff: Vec<i64> = p.iter().zip(q).map(|(a, b)| a - b).collect();
            if diff.iter().any(|&x| x != 0) && facets.iter().all(|f| dot(&diff, f) >= 0) {
                continue 'candidates;
            }
        }
        basis.push(p);
    }
    basis.into_iter().collect()
}

/// Rank of the lattice of support functions of a fan whose maximal cones
/// are full dimensional: one linear functional per maximal cone, glued
/// along shared rays. Integrality does not change the rank.
fn sf_rank_oracle(d: usize, rays: &[Vec<i64>], maximal: &[Vec<usize>]) -> usize {
    let t = maximal.len();
    for ids in maximal {
        let gens: Vec<Vec<i128>> = ids
            .iter()
            .map(|&i| rays[i].iter().map(|&x| x as i128).collect())
            .collect();
        assert_eq!(gauss_rank(gens), d, "oracle needs full dimensional cones");
    }
    let mut rows = Vec::new();
    for s in 0..t {
        for u in s + 1..t {
            for &ray in maximal[s].iter().filter(|r| maximal[u].contains(r)) {
                let mut row = vec![0i128; d * t];
                for j in 0..d {
                    row[d * s + j] = rays[ray][j] as i128;
                    row[d * u + j] = -(rays[ray][j] as i128);
                }
                rows.push(row);
            }
        }
    }
    if rows.is_empty() {
        return d * t;
    }
    d * t - gauss_rank(rows)
}

/// Number of lattice points of `{m : <m, n_rho> + a_rho >= 0}`.
fn polytope_count_oracle(d: usize, rays: &[Vec<i64>], offsets: &[i64]) -> usize {
    box_points(d, 40)
        .filter(|m| {
            rays.iter()
                .zip(offsets)
                .all(|(n, a)| dot(m, n) + a >= 0)
        })
        .count()
}

// ---------------------------------------------------------------------------

#[test]
fn criterion_01_exact_sequence() {
    for name in ALL_FANS {
        let fan = corpus(name);
        let sl = SupportLattice::compute(&fan).unwrap();
        let iota = sl.iota_matrix();
        assert!(
            kernel_basis(iota).is_empty(),
            "{name}: the character embedding is injective"
        );
        let composed = sl.pic().projection.mul(iota);
        assert!(
            (0..composed.rows())
                .all(|i| (0..composed.cols()).all(|j| composed.get(i, j) == &Int::from(0))),
            "{name}: degree of a character is zero"
        );
        for v in kernel_basis(&sl.pic().projection) {
            assert!(
                solve_integer(iota, &v).is_some(),
                "{name}: a degree zero support function is a character"
            );
        }
        assert_eq!(
            sl.rank(),
            fan.lattice_rank() + sl.pic_rank(),
            "{name}: rank additivity"
        );
    }
}

#[test]
fn criterion_02_reference_presentations() {
    // The projective plane.
    let qp = quotient("p2");
    let halves: Vec<Vec<i64>> = (0..3)
        .map(|r| small(&half_space(qp.support(), r).unwrap()))
        .collect();
    let orthant: BTreeSet<Vec<i64>> =
        [vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]].into_iter().collect();
    assert_eq!(
        dual_rays_oracle(3, &halves),
        orthant,
        "p2: the monoid cone is the positive orthant"
    );
    assert_eq!(vector_set(qp.cone_check().rays()), orthant);
    assert_eq!(vector_set(qp.cone_c().rays()), orthant);
    let facets: Vec<Vec<i64>> = orthant.iter().cloned().collect();
    assert_eq!(
        hilbert_oracle(3, &facets, 8),
        orthant,
        "p2: ring generators are the three variables"
    );
    let gens = qp.ring_generators().unwrap();
    assert_eq!(gens.len(), 3);
    assert!(gens.iter().all(|g| g.degree == gens[0].degree));
    let ideal = qp.irrelevant_ideal().unwrap();
    let minimal: Vec<_> = ideal
        .vanishing_faces
        .iter()
        .filter(|f| {
            !ideal
                .vanishing_faces
                .iter()
                .any(|g| g != *f && g.ray_ids.iter().all(|id| f.ray_ids.contains(id)))
        })
        .collect();
    assert_eq!(minimal.len(), 1, "p2: the removed locus is one orbit closure");
    assert_eq!(minimal[0].dim, 3, "p2: the removed locus is the apex");
    assert_eq!(qp.codim_check().unwrap(), Some(3));

    // The product of two projective lines.
    let qp = quotient("p1xp1");
    let halves: Vec<Vec<i64>> = (0..4)
        .map(|r| small(&half_space(qp.support(), r).unwrap()))
        .collect();
    let orthant4: BTreeSet<Vec<i64>> = (0..4)
        .map(|i| {
            let mut v = vec![0; 4];
            v[i] = 1;
            v
        })
        .collect();
    assert_eq!(dual_rays_oracle(4, &halves), orthant4);
    assert_eq!(vector_set(qp.cone_c().rays()), orthant4);
    let gens = qp.ring_generators().unwrap();
    assert_eq!(gens.len(), 4);
    let mut degrees: Vec<Vec<i64>> = gens.iter().map(|g| small(&g.degree)).collect();
    degrees.sort();
    assert_eq!(degrees[0], degrees[1], "degrees pair up");
    assert_eq!(degrees[2], degrees[3], "degrees pair up");
    assert_ne!(degrees[1], degrees[2], "two distinct degree classes");
    let ideal = qp.irrelevant_ideal().unwrap();
    let minimal: Vec<_> = ideal
        .vanishing_faces
        .iter()
        .filter(|f| {
            !ideal
                .vanishing_faces
                .iter()
                .any(|g| g != *f && g.ray_ids.iter().all(|id| f.ray_ids.contains(id)))
        })
        .collect();
    assert_eq!(minimal.len(), 2, "p1xp1: two minimal removed orbit closures");
    assert!(minimal.iter().all(|f| f.dim == 2));
    assert_eq!(qp.codim_check().unwrap(), Some(2));
}

#[test]
fn criterion_03_enough_cartier_discriminator() {
    for name in CARTIER_FANS {
        let sl = SupportLattice::compute(&corpus(name)).unwrap();
        let report = check_enough_cartier(&sl).unwrap();
        assert!(report.all_ok(), "{name}: every cone has its divisor");
    }
    let fan = corpus("perturbed_cube");
    let rays: Vec<Vec<i64>> = fan.rays().iter().map(|r| small(r)).collect();
    assert_eq!(
        sf_rank_oracle(3, &rays, &fan.maximal_ray_id_sets()),
        3,
        "perturbed cube: only globally linear support functions"
    );
    let sl = SupportLattice::compute(&fan).unwrap();
    assert_eq!(sl.rank(), 3);
    let report = check_enough_cartier(&sl).unwrap();
    let maximal_sets: Vec<Vec<usize>> = fan.maximal_ray_id_sets();
    for entry in &report.entries {
        if maximal_sets.contains(&entry.ray_ids) {
            assert!(
                !entry.ok(),
                "perturbed cube: maximal cone {:?} must fail",
                entry.ray_ids
            );
        }
    }
}

#[test]
fn criterion_04_quotient_cone_geometry() {
    for name in CARTIER_FANS {
        let qp = quotient(name);
        let check = qp.cone_check();
        assert!(check.is_pointed(), "{name}: monoid cone is strongly convex");
        assert!(check.is_full_dimensional(), "{name}: monoid cone is solid");
        let witness = qp.interior_witness();
        for l in qp.l_rays() {
            assert!(
                l.dot(witness) > Int::from(0),
                "{name}: witness is interior"
            );
        }
        let fan = qp.fan();
        assert_eq!(
            qp.l_rays().len(),
            fan.rays().len(),
            "{name}: one extremal ray per fan ray"
        );
        let distinct: BTreeSet<Vec<i64>> = vector_set(qp.l_rays());
        assert_eq!(distinct.len(), fan.rays().len(), "{name}: rays stay distinct");
        assert_eq!(
            distinct,
            vector_set(qp.cone_c().rays()),
            "{name}: the bijection is onto the extremal rays"
        );
        for (r, l) in qp.l_rays().iter().enumerate() {
            assert_eq!(
                l,
                &half_space(qp.support(), r).unwrap(),
                "{name}: the bijection is sign consistent with evaluation"
            );
        }
        for (i, fc) in fan.cones().iter().enumerate() {
            assert_eq!(
                qp.hat_face(i).dim,
                fc.dim(),
                "{name}: lifted rays span a face of matching dimension"
            );
        }
    }
}

#[test]
fn criterion_05_lifted_fan() {
    for name in CARTIER_FANS {
        let qp = quotient(name);
        let hat = qp.hat_fan().unwrap();
        let fan = qp.fan();
        assert_eq!(hat.cones().len(), fan.cones().len(), "{name}: same poset");
        for fc in fan.cones() {
            let hat_cone = hat
                .cone_by_ray_ids(&fc.ray_ids)
                .expect("matching lifted cone");
            assert_eq!(hat_cone.dim(), fc.dim(), "{name}: dimensions agree");
            assert_eq!(
                hat_cone.cone.is_simplicial(),
                fc.cone.is_simplicial(),
                "{name}: simpliciality agrees"
            );
        }
    }
}

#[test]
fn criterion_06_degree_zero_localizations() {
    for name in CARTIER_FANS {
        let qp = quotient(name);
        for &i in qp.maximal_cone_indices() {
            let cert = verify_nagspec(&qp, i, 12).unwrap();
            assert!(
                cert.forward.iter().all(|c| c.exponent <= 12),
                "{name}: forward certificates within bound"
            );
            assert!(
                cert.backward.iter().all(|c| c.shift.abs() <= 12),
                "{name}: backward certificates within bound"
            );
        }
    }
}

#[test]
fn criterion_07_localized_factorization() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for name in CARTIER_FANS {
        let qp = quotient(name);
        let gens = qp.ring_generators().unwrap();
        for &i in qp.maximal_cone_indices() {
            let h = qp.h_dist(i).coords();
            for _ in 0..100 {
                let mut x = LatticeVector::zeros(qp.support().rank());
                for g in gens {
                    let c = rng.gen_range(0..=3i64);
                    x = x.add(&g.exponent.scale(&Int::from(c)));
                }
                let k = rng.gen_range(-2..=2i64);
                x = x.add(&h.scale(&Int::from(k)));
                let f = homunit_factorize(&qp, i, &x, 12).unwrap();
                let recomposed = qp
                    .support()
                    .iota(&f.character)
                    .unwrap()
                    .coords()
                    .add(&f.residual);
                assert_eq!(recomposed, x, "{name}: exact recomposition");
                let rf = qp.support().function_from_coords(&f.residual).unwrap();
                for &id in &qp.fan().cones()[i].ray_ids {
                    assert_eq!(
                        rf.ray_values().0[id],
                        Int::from(0),
                        "{name}: residual vanishes on the cone"
                    );
                }
            }
        }
    }
}

#[test]
fn criterion_08_homogeneous_spectrum() {
    for name in CARTIER_FANS {
        let qp = quotient(name);
        let primes = monomial_primes(&qp).unwrap();
        let faces = qp.cone_c().face_lattice().unwrap().faces.len();
        assert_eq!(primes.len(), faces, "{name}: one prime per face");
        let surviving: Vec<usize> = primes
            .iter()
            .filter_map(|p| p.fan_cone_index)
            .collect();
        let mut sorted = surviving.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), surviving.len(), "{name}: the matching is injective");
        assert_eq!(
            sorted.len(),
            qp.fan().cones().len(),
            "{name}: primes avoiding the irrelevant ideal are the fan cones"
        );
        for a in &primes {
            for b in &primes {
                if a.contains_irrelevant || b.contains_irrelevant {
                    continue;
                }
                let face_incl = a.face_ray_ids.iter().all(|id| b.face_ray_ids.contains(id));
                let cone_incl = {
                    let ca = &qp.fan().cones()[a.fan_cone_index.unwrap()].ray_ids;
                    let cb = &qp.fan().cones()[b.fan_cone_index.unwrap()].ray_ids;
                    ca.iter().all(|id| cb.contains(id))
                };
                assert_eq!(face_incl, cone_incl, "{name}: order isomorphism");
            }
        }
        let gens = qp.ring_generators().unwrap();
        for p in &primes {
            let member = |x: &LatticeVector| {
                p.face_ray_ids
                    .iter()
                    .any(|&id| qp.l_ray(id).dot(x) != Int::from(0))
            };
            for f in gens {
                for g in gens {
                    let fg = f.exponent.add(&g.exponent);
                    assert_eq!(
                        !member(&fg),
                        !member(&f.exponent) && !member(&g.exponent),
                        "{name}: a product lies outside a prime exactly when both factors do"
                    );
                }
            }
        }
        for &i in qp.maximal_cone_indices() {
            chart_contraction(&qp, &primes, i).unwrap();
        }
    }
    let qp = quotient("p2");
    let primes = monomial_primes(&qp).unwrap();
    assert_eq!(primes.len(), 8);
    assert_eq!(primes.iter().filter(|p| !p.contains_irrelevant).count(), 7);
}

#[test]
fn criterion_09_section_spaces() {
    let qp = quotient("p2");
    let gens = qp.ring_generators().unwrap();
    let one = gens[0].degree.clone();
    let values = small(
        qp.support()
            .function_from_coords(&gens[0].exponent)
            .unwrap()
            .ray_values(),
    );
    let rays: Vec<Vec<i64>> = qp.fan().rays().iter().map(|r| small(r)).collect();
    let expected = [1usize, 3, 6, 10, 15];
    for d in 0..=4i64 {
        let alpha = one.scale(&Int::from(d));
        let count = match global_sections(&qp, &alpha).unwrap() {
            SectionSpace::Finite(m) => m.len(),
            SectionSpace::Infinite { .. } => panic!("complete fan"),
        };
        assert_eq!(count, expected[d as usize], "p2 degree {d}");
        let offsets: Vec<i64> = values.iter().map(|v| v * d).collect();
        assert_eq!(
            count,
            polytope_count_oracle(2, &rays, &offsets),
            "p2 degree {d} against the lattice point oracle"
        );
    }
    let negative = one.scale(&Int::from(-1));
    match global_sections(&qp, &negative).unwrap() {
        SectionSpace::Finite(m) => assert!(m.is_empty(), "no sections in negative degree"),
        SectionSpace::Infinite { .. } => panic!("complete fan"),
    }

    let qp = quotient("p1xp1");
    let gens = qp.ring_generators().unwrap();
    let d1 = gens[0].degree.clone();
    let g2 = gens.iter().find(|g| g.degree != d1).unwrap();
    let rays: Vec<Vec<i64>> = qp.fan().rays().iter().map(|r| small(r)).collect();
    let v1 = small(
        qp.support()
            .function_from_coords(&gens[0].exponent)
            .unwrap()
            .ray_values(),
    );
    let v2 = small(
        qp.support()
            .function_from_coords(&g2.exponent)
            .unwrap()
            .ray_values(),
    );
    for a in 0..=3i64 {
        for b in 0..=3i64 {
            let alpha = d1.scale(&Int::from(a)).add(&g2.degree.scale(&Int::from(b)));
            let count = match global_sections(&qp, &alpha).unwrap() {
                SectionSpace::Finite(m) => m.len(),
                SectionSpace::Infinite { .. } => panic!("complete fan"),
            };
            assert_eq!(count, ((a + 1) * (b + 1)) as usize, "p1xp1 degree ({a},{b})");
            let offsets: Vec<i64> = v1
                .iter()
                .zip(&v2)
                .map(|(x, y)| x * a + y * b)
                .collect();
            assert_eq!(
                count,
                polytope_count_oracle(2, &rays, &offsets),
                "p1xp1 degree ({a},{b}) against the lattice point oracle"
            );
        }
    }

    for name in ["p2", "p1xp1"] {
        let qp = quotient(name);
        let alpha = qp.ring_generators().unwrap()[0].degree.clone();
        let charts: Vec<_> = qp
            .maximal_cone_indices()
            .iter()
            .map(|&i| twisted_sections_on_chart(&qp, &alpha, i, 12).unwrap())
            .collect();
        for a in &charts {
            for b in &charts {
                overlap_unit_certificate(&qp, a, b, 12).unwrap();
            }
        }
    }
}

fn random_pointed_cone(rng: &mut ChaCha8Rng, d: usize) -> (Cone, Vec<Vec<i64>>) {
    loop {
        let count = rng.gen_range(d..=d + 2);
        let gens: Vec<Vec<i64>> = (0..count)
            .map(|_| {
                let mut v: Vec<i64> =
                    (0..d - 1).map(|_| rng.gen_range(-4..=4i64)).collect();
                v.push(rng.gen_range(1..=4i64));
                primitive(&v)
            })
            .collect();
        let rank = gauss_rank(
            gens.iter()
                .map(|g| g.iter().map(|&x| x as i128).collect())
                .collect(),
        );
        if rank < d {
            continue;
        }
        let vectors: Vec<LatticeVector> =
            gens.iter().map(|g| LatticeVector::from_i64(g)).collect();
        let cone = Cone::from_generators(d, &vectors);
        return (cone, gens);
    }
}

#[test]
fn criterion_10_kernel_oracles() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    // Dual cones: 25 random pointed full dimensional cones.
    for i in 0..25 {
        let d = if i % 2 == 0 { 3 } else { 2 };
        let (cone, gens) = random_pointed_cone(&mut rng, d);
        assert_eq!(
            vector_set(cone.dual().rays()),
            dual_rays_oracle(d, &gens),
            "dual rays match the box oracle"
        );
    }
    // Hilbert bases: 15 random cones, facet descriptions from the dual
    // oracle, generating sets by subtraction.
    for i in 0..15 {
        let d = if i % 3 == 0 { 2 } else { 3 };
        let (cone, gens) = random_pointed_cone(&mut rng, d);
        let facets: Vec<Vec<i64>> = dual_rays_oracle(d, &gens).into_iter().collect();
        let b = if d == 2 { 8 } else { 12 };
        assert_eq!(
            vector_set(&hilbert_basis(&cone).unwrap()),
            hilbert_oracle(d, &facets, b),
            "Hilbert basis matches the subtraction oracle"
        );
    }
    // Support lattice ranks: 10 random complete surface fans plus the three
    // dimensional corpus fans.
    for _ in 0..10 {
        let fan = random_complete_surface_fan(&mut rng);
        let rays: Vec<Vec<i64>> = fan.rays().iter().map(|r| small(r)).collect();
        let sl = SupportLattice::compute(&fan).unwrap();
        assert_eq!(
            sl.rank(),
            sf_rank_oracle(2, &rays, &fan.maximal_ray_id_sets()),
            "surface fan support rank matches the gluing oracle"
        );
    }
    for name in ["affine_square_cone", "cube_fan", "perturbed_cube"] {
        let fan = corpus(name);
        let rays: Vec<Vec<i64>> = fan.rays().iter().map(|r| small(r)).collect();
        let sl = SupportLattice::compute(&fan).unwrap();
        assert_eq!(
            sl.rank(),
            sf_rank_oracle(3, &rays, &fan.maximal_ray_id_sets()),
            "{name}: support rank matches the gluing oracle"
        );
    }
}

/// A complete fan in the plane: random primitive directions together with
/// the four axes, sorted counterclockwise, consecutive pairs as maximal
/// cones.
fn random_complete_surface_fan(rng: &mut ChaCha8Rng) -> Fan {
    let mut dirs: BTreeSet<Vec<i64>> = [
        vec![1, 0],
        vec![0, 1],
        vec![-1, 0],
        vec![0, -1],
    ]
    .into_iter()
    .collect();
    for _ in 0..rng.gen_range(1..=4) {
        let v = [rng.gen_range(-4..=4i64), rng.gen_range(-4..=4i64)];
        if v != [0, 0] {
            dirs.insert(primitive(&v));
        }
    }
    let mut dirs: Vec<Vec<i64>> = dirs.into_iter().collect();
    dirs.sort_by(|a, b| {
        let half = |v: &Vec<i64>| (v[1], v[0]) < (0, 0) || (v[1] == 0 && v[0] < 0);
        let (ha, hb) = (half(a), half(b));
        if ha != hb {
            return ha.cmp(&hb);
        }
        let cross = a[0] * b[1] - a[1] * b[0];
        cross.cmp(&0).reverse()
    });
    let rays: Vec<LatticeVector> = dirs.iter().map(|v| LatticeVector::from_i64(v)).collect();
    let n = rays.len();
    let cones: Vec<Vec<usize>> = (0..n).map(|i| vec![i, (i + 1) % n]).collect();
    let fan = Fan::from_rays_and_cones(2, rays, cones).unwrap();
    assert!(fan.is_valid(), "generated surface fan is valid");
    fan
}
