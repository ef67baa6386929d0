use std::f64::consts::TAU;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use congrulab::func::Composed;
use congrulab::funk::{even_parts_equal, funk_transform};
use congrulab::sphere::{gauss_legendre, quasi_uniform_great_sphere};
use congrulab::synthetic::{random_direction, random_orthogonal_direction, RandomPolynomial};
use congrulab::transforms::{reflection_o, rotation_fixing_zeta};
use congrulab::{SphereFrame, Vec4};

#[test]
fn constant_function_integrates_to_circumference() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let zeta = random_direction(&mut rng);
    let w = random_orthogonal_direction(&mut rng, &zeta);
    let one = |_: &Vec4| 1.0;
    assert!((funk_transform(&one, &zeta, &w, 16).unwrap() - TAU).abs() < 1e-13);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn transform_ignores_odd_part(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let zeta = random_direction(&mut rng);
        let w = random_orthogonal_direction(&mut rng, &zeta);
        let p = RandomPolynomial::new(&mut rng, 6, 5);
        let o = *reflection_o(&zeta).matrix();
        let even = |x: &Vec4| 0.5 * (p.value(x) + p.value(&(o * x)));
        let a = funk_transform(&p, &zeta, &w, 64).unwrap();
        let b = funk_transform(&even, &zeta, &w, 64).unwrap();
        prop_assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn transform_commutes_with_rotations_fixing_zeta(seed in any::<u64>(), alpha in 0.0f64..2.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let zeta = random_direction(&mut rng);
        let side = random_orthogonal_direction(&mut rng, &zeta);
        let w = random_orthogonal_direction(&mut rng, &zeta);
        // a rotation of ℝ⁴ fixing ζ and `side`
        let u = rotation_fixing_zeta(&SphereFrame::new(zeta, side).unwrap(), alpha).matrix();
        let p = RandomPolynomial::new(&mut rng, 6, 5);
        let pu = Composed { f: &p, m: *u.matrix() };
        let lhs = funk_transform(&pu, &zeta, &w, 64).unwrap();
        let rhs = funk_transform(&p, &zeta, &u.apply_dir(&w), 64).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-11);
    }

    #[test]
    fn reflected_function_has_equal_even_part(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let zeta = random_direction(&mut rng);
        let p = RandomPolynomial::new(&mut rng, 6, 4);
        let po = Composed { f: &p, m: *reflection_o(&zeta).matrix() };
        let (t, _) = gauss_legendre(6);
        let ws = quasi_uniform_great_sphere(&zeta, 12);
        let r = even_parts_equal(&p, &po, &zeta, &t, &ws, 32, 1e-10).unwrap();
        prop_assert!(r.equal);
    }
}

#[test]
fn different_even_parts_are_detected() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let zeta = random_direction(&mut rng);
    let p = RandomPolynomial::new(&mut rng, 6, 4);
    let z = *zeta.vec();
    let q = |x: &Vec4| p.value(x) + 0.1 * x.dot(&z).powi(2);
    let (t, _) = gauss_legendre(6);
    let ws = quasi_uniform_great_sphere(&zeta, 12);
    let r = even_parts_equal(&p, &q, &zeta, &t, &ws, 32, 1e-6).unwrap();
    assert!(!r.equal);
    assert!(!r.direct_ok);
    assert!(!r.transform_ok);
}
