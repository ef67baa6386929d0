use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use congrulab::hull::facets4;
use congrulab::synthetic::{
    polytope_with_diameter, random_direction, random_orthogonal, random_vertices,
    star_union_with_diameter,
};
use congrulab::{Body4, BodyKind, Error, Vec4};

fn random_body(seed: u64) -> (Body4, Vec<Vec4>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw = random_vertices(&mut rng, 12, 0.5, 1.0);
    let mut v = raw.clone();
    for i in 0..4 {
        let mut e = Vec4::zeros();
        e[i] = 0.4;
        v.push(e);
        v.push(-e);
    }
    let u = random_orthogonal(&mut rng);
    let a = random_direction(&mut rng).into_vec() * rng.gen_range(0.0..0.2);
    let k = Body4::polytope(BodyKind::Convex, v.clone()).unwrap().apply(&u, &a);
    let moved = v.iter().map(|x| u.apply(x) + a).collect();
    (k, moved)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn support_matches_vertex_maximum(seed in any::<u64>(), dir_seed in any::<u64>()) {
        let (k, v) = random_body(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(dir_seed);
        let x = random_direction(&mut rng).into_vec() * rng.gen_range(0.1..3.0);
        let oracle = v.iter().map(|p| p.dot(&x)).fold(f64::NEG_INFINITY, f64::max);
        prop_assert!((k.support(&x).unwrap() - oracle).abs() < 1e-12);
    }

    #[test]
    fn radial_point_lies_on_boundary(seed in any::<u64>(), dir_seed in any::<u64>()) {
        let (k, v) = random_body(seed);
        let facets = facets4(&v);
        let mut rng = ChaCha8Rng::seed_from_u64(dir_seed);
        let theta = random_direction(&mut rng).into_vec();
        let p = theta * k.radial(&theta).unwrap();
        let gap = facets
            .iter()
            .map(|f| f.normal.dot(&p) - f.offset)
            .fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(gap.abs() < 1e-10, "gap {gap}");
    }

    #[test]
    fn spec_round_trip_preserves_support(seed in any::<u64>()) {
        let (k, _) = random_body(seed);
        let json = serde_json::to_string(&k.spec()).unwrap();
        let back = Body4::from_json(&json).unwrap();
        let canon = Body4::from_spec(&k.canonical_spec()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
        for _ in 0..20 {
            let x = random_direction(&mut rng).into_vec();
            prop_assert!((k.support(&x).unwrap() - back.support(&x).unwrap()).abs() < 1e-12);
            prop_assert!((k.support(&x).unwrap() - canon.support(&x).unwrap()).abs() < 1e-12);
        }
    }
}

#[test]
fn planted_diameter_is_found() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..5 {
        let zeta = random_direction(&mut rng);
        let k = polytope_with_diameter(&mut rng, &zeta, 16, 1.25, 1.15).unwrap();
        let d = k.find_diameters(None).unwrap();
        assert_eq!(d.directions.len(), 1);
        assert!(d.find(&zeta, 1e-8).is_some());
        assert!((d.length - 2.4).abs() < 1e-12);
    }
}

#[test]
fn star_union_has_no_support_function() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let zeta = random_direction(&mut rng);
    let k = star_union_with_diameter(&mut rng, &zeta, 3, 8, 1.25, 1.15).unwrap();
    assert!(matches!(k.support(zeta.vec()), Err(Error::UnsupportedKind(_))));
    let chord = k.radial(zeta.vec()).unwrap() + k.radial(&-zeta.vec()).unwrap();
    assert!((chord - 2.4).abs() < 1e-12);
}

#[test]
fn origin_outside_is_reported() {
    let k = Body4::cube(1.0).translate(&Vec4::new(3.0, 0.0, 0.0, 0.0));
    assert_eq!(k.radial(&Vec4::x()), Err(Error::OriginOutside));
}

#[test]
fn ellipsoid_radial_and_support() {
    let k = Body4::ellipsoid([1.0, 2.0, 3.0, 4.0], None).unwrap();
    for i in 0..4 {
        let mut e = Vec4::zeros();
        e[i] = 1.0;
        assert!((k.radial(&e).unwrap() - (i + 1) as f64).abs() < 1e-12);
        assert!((k.support(&e).unwrap() - (i + 1) as f64).abs() < 1e-12);
    }
}
