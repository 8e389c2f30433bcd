//! Whole-pipeline runs on randomly generated complete surface fans: every
//! such fan admits the quotient presentation, so the construction and its
//! certificates must go through end to end.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use toriq_core::fan::Fan;
use toriq_core::graded::{
    global_sections, homunit_factorize, overlap_unit_certificate, twisted_sections_on_chart,
    verify_nagspec, SectionSpace,
};
use toriq_core::quotient::build_quotient;
use toriq_core::support::SupportLattice;
use toriq_core::{Int, LatticeVector};

fn primitive(v: [i64; 2]) -> Vec<i64> {
    fn gcd(a: i64, b: i64) -> i64 {
        if b == 0 { a } else { gcd(b, a % b) }
    }
    let g = gcd(v[0].abs(), v[1].abs());
    if g > 1 {
        vec![v[0] / g, v[1] / g]
    } else {
        vec![v[0], v[1]]
    }
}

/// Random primitive directions together with the four axes, sorted
/// counterclockwise by quadrant and cross product, consecutive pairs as
/// maximal cones.
fn random_complete_fan(rng: &mut ChaCha8Rng) -> Fan {
    let mut dirs: BTreeSet<Vec<i64>> = [
        vec![1, 0],
        vec![0, 1],
        vec![-1, 0],
        vec![0, -1],
    ]
    .into_iter()
    .collect();
    for _ in 0..rng.gen_range(1..=5) {
        let v = [rng.gen_range(-5..=5i64), rng.gen_range(-5..=5i64)];
        if v != [0, 0] {
            dirs.insert(primitive(v));
        }
    }
    let mut dirs: Vec<Vec<i64>> = dirs.into_iter().collect();
    dirs.sort_by(|a, b| {
        let lower = |v: &Vec<i64>| v[1] < 0 || (v[1] == 0 && v[0] < 0);
        match lower(a).cmp(&lower(b)) {
            std::cmp::Ordering::Equal => (a[0] * b[1] - a[1] * b[0]).cmp(&0).reverse(),
            other => other,
        }
    });
    let rays: Vec<LatticeVector> = dirs.iter().map(|v| LatticeVector::from_i64(v)).collect();
    let n = rays.len();
    let cones: Vec<Vec<usize>> = (0..n).map(|i| vec![i, (i + 1) % n]).collect();
    Fan::from_rays_and_cones(2, rays, cones).expect("consecutive sectors form a fan")
}

#[test]
fn random_complete_fans_present_cleanly() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..6 {
        let fan = random_complete_fan(&mut rng);
        assert!(fan.is_valid());
        let ray_count = fan.rays().len();
        let sl = SupportLattice::compute(&fan).unwrap();
        assert_eq!(sl.rank(), ray_count, "complete surface fan support rank");
        assert_eq!(sl.pic_rank(), ray_count - 2);
        let qp = build_quotient(sl).unwrap();
        qp.hat_fan().unwrap();
        qp.codim_check().unwrap();
        for &i in qp.maximal_cone_indices() {
            verify_nagspec(&qp, i, 12).unwrap();
        }
    }
}

#[test]
fn random_localized_monomials_factor() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let fan = random_complete_fan(&mut rng);
    let qp = build_quotient(SupportLattice::compute(&fan).unwrap()).unwrap();
    let gens = qp.ring_generators().unwrap();
    for &i in qp.maximal_cone_indices() {
        let h = qp.h_dist(i).coords();
        for _ in 0..20 {
            let a = rng.gen_range(0..gens.len());
            let b = rng.gen_range(0..gens.len());
            let k = rng.gen_range(-1..=1i64);
            let x = gens[a]
                .exponent
                .add(&gens[b].exponent)
                .add(&h.scale(&Int::from(k)));
            let f = homunit_factorize(&qp, i, &x, 12).unwrap();
            let back = qp.support().iota(&f.character).unwrap().coords().add(&f.residual);
            assert_eq!(back, x);
        }
    }
}

#[test]
fn random_effective_degrees_have_finite_sections() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    for _ in 0..3 {
        let fan = random_complete_fan(&mut rng);
        let qp = build_quotient(SupportLattice::compute(&fan).unwrap()).unwrap();
        let gens = qp.ring_generators().unwrap();
        let a = rng.gen_range(0..gens.len());
        let b = rng.gen_range(0..gens.len());
        let monomial = gens[a].exponent.add(&gens[b].exponent);
        let degree = qp.support().degree_of_coords(&monomial);
        let sections = match global_sections(&qp, &degree).unwrap() {
            SectionSpace::Finite(m) => m,
            SectionSpace::Infinite { .. } => panic!("complete fan has finite sections"),
        };
        assert!(
            sections.iter().any(|s| s.exponent == monomial),
            "the sampled monomial is a section of its own degree"
        );
        let charts: Vec<_> = qp
            .maximal_cone_indices()
            .iter()
            .map(|&i| twisted_sections_on_chart(&qp, &degree, i, 12).unwrap())
            .collect();
        for a in &charts {
            for b in &charts {
                overlap_unit_certificate(&qp, a, b, 12).unwrap();
            }
        }
    }
}
