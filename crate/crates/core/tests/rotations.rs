use std::f64::consts::{PI, TAU};

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use congrulab::synthetic::{random_direction, random_orthogonal_direction};
use congrulab::transforms::{compose, pi_rotation_about, reflection_o, rotation_fixing_zeta};
use congrulab::{AxisRotation, Orientation, SphereFrame};

fn frame(seed: u64) -> SphereFrame {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let zeta = random_direction(&mut rng);
    let w = random_orthogonal_direction(&mut rng, &zeta);
    SphereFrame::new(zeta, w).unwrap()
}

proptest! {
    #[test]
    fn frame_is_positively_oriented(seed in any::<u64>()) {
        let b = frame(seed).basis_matrix();
        prop_assert!((b.determinant() - 1.0).abs() < 1e-12);
        prop_assert!((b.transpose() * b - nalgebra::Matrix4::identity()).abs().max() < 1e-12);
    }

    #[test]
    fn coordinates_round_trip(seed in any::<u64>(), t in -0.999f64..0.999, phi in 0.0f64..TAU) {
        let f = frame(seed);
        let (t2, phi2) = f.coordinates(&f.point(t, phi));
        prop_assert!((t - t2).abs() < 1e-12);
        let d = (phi - phi2).rem_euclid(TAU);
        prop_assert!(d.min(TAU - d) < 1e-9);
    }

    #[test]
    fn rotations_act_as_declared(
        seed in any::<u64>(),
        flip in any::<bool>(),
        p in 0.0f64..TAU,
        t in -0.99f64..0.99,
        phi in 0.0f64..TAU,
    ) {
        let f = frame(seed);
        let r = AxisRotation {
            frame: f,
            orientation: if flip { Orientation::FlipZeta } else { Orientation::FixZeta },
            parameter: p,
        };
        let m = r.matrix();
        prop_assert!((m.determinant() - 1.0).abs() < 1e-12);
        prop_assert!((m.apply(f.w.vec()) - f.w.vec()).norm() < 1e-12);
        let sign = if flip { -1.0 } else { 1.0 };
        prop_assert!((m.apply(f.zeta.vec()) - f.zeta.vec() * sign).norm() < 1e-12);
        let (t2, phi2) = r.act_on_coordinates(t, phi);
        prop_assert!((m.apply(&f.point(t, phi)) - f.point(t2, phi2)).norm() < 1e-12);
        let back = compose(&r.inverse().matrix(), &m);
        prop_assert!(back.is_identity(1e-12));
    }

    #[test]
    fn reflection_o_is_an_involution(seed in any::<u64>()) {
        let f = frame(seed);
        let o = reflection_o(&f.zeta);
        prop_assert!(compose(&o, &o).is_identity(1e-12));
        prop_assert!((o.apply(f.w.vec()) + f.w.vec()).norm() < 1e-12);
    }

    #[test]
    fn half_turns_compose_to_rotation(seed in any::<u64>(), a in 0.0f64..PI, b in 0.0f64..PI) {
        let f = frame(seed);
        let prod = compose(&pi_rotation_about(&f, b).matrix(), &pi_rotation_about(&f, a).matrix());
        let rot = rotation_fixing_zeta(&f, 2.0 * (b - a) / PI).matrix();
        prop_assert!((prod.matrix() - rot.matrix()).abs().max() < 1e-12);
    }
}
