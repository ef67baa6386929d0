//! Seeded generators for test instances: band-limited functions on S³,
//! random orthogonal maps and random polytopes.

use nalgebra::Matrix4;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::bodies::{Body4, BodyKind, ShapeSpec};
use crate::error::Result;
use crate::func::SphereFn;
use crate::sphere::{Direction4, Vec4};
use crate::transforms::Orthogonal4;

fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

pub fn random_direction<R: Rng + ?Sized>(rng: &mut R) -> Direction4 {
    loop {
        let v = Vec4::from_fn(|_, _| standard_normal(rng));
        if v.norm() > 1e-6 {
            return Direction4::normalize(v).expect("non-zero");
        }
    }
}

/// Unit vector orthogonal to `zeta`, uniformly distributed on S²(ζ).
pub fn random_orthogonal_direction<R: Rng + ?Sized>(rng: &mut R, zeta: &Direction4) -> Direction4 {
    loop {
        let v = Vec4::from_fn(|_, _| standard_normal(rng));
        let v = v - zeta.vec() * zeta.vec().dot(&v);
        if v.norm() > 1e-6 {
            return Direction4::normalize(v).expect("non-zero");
        }
    }
}

/// Haar-distributed element of O(4).
pub fn random_orthogonal<R: Rng + ?Sized>(rng: &mut R) -> Orthogonal4 {
    let g = Matrix4::from_fn(|_, _| standard_normal(rng));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for i in 0..4 {
        if r[(i, i)] < 0.0 {
            let col = -q.column(i);
            q.set_column(i, &col);
        }
    }
    Orthogonal4::new(q).expect("QR factor is orthogonal")
}

/// `Σ c_m (a_m·θ + b_m)^{k_m}`: a polynomial of degree ≤ `max(k_m)` in θ,
/// hence band-limited on every circle.
#[derive(Clone, Debug)]
pub struct RandomPolynomial {
    terms: Vec<(f64, Vec4, f64, i32)>,
}

impl RandomPolynomial {
    pub fn new<R: Rng + ?Sized>(rng: &mut R, n_terms: usize, max_degree: u32) -> Self {
        let terms = (0..n_terms)
            .map(|_| {
                let c = rng.gen_range(-1.0..1.0);
                let a = *random_direction(rng).vec();
                let b = rng.gen_range(-0.5..0.5);
                let k = rng.gen_range(1..=max_degree as i32);
                (c, a, b, k)
            })
            .collect();
        Self { terms }
    }

    pub fn value(&self, theta: &Vec4) -> f64 {
        self.terms
            .iter()
            .map(|(c, a, b, k)| c * (a.dot(theta) + b).powi(*k))
            .sum()
    }
}

impl SphereFn for RandomPolynomial {
    fn eval(&self, theta: &Vec4) -> Result<f64> {
        Ok(self.value(theta))
    }
}

/// Random vertices `r·u` with `u` uniform on S³ and `r ∈ [r_min, r_max]`.
pub fn random_vertices<R: Rng + ?Sized>(rng: &mut R, n: usize, r_min: f64, r_max: f64) -> Vec<Vec4> {
    (0..n)
        .map(|_| random_direction(rng).into_vec() * rng.gen_range(r_min..=r_max))
        .collect()
}

/// Random convex polytope whose unique longest chord joins `top·ζ` and
/// `−bottom·ζ`: the other vertices lie in the ball of radius `r_max` and
/// `top + bottom > 2 r_max`.
pub fn polytope_with_diameter<R: Rng + ?Sized>(
    rng: &mut R,
    zeta: &Direction4,
    n_other: usize,
    top: f64,
    bottom: f64,
) -> Result<Body4> {
    let mut v = random_vertices(rng, n_other, 0.6, 1.0);
    v.push(zeta.vec() * top);
    v.push(-zeta.vec() * bottom);
    Body4::polytope(BodyKind::Convex, v)
}

/// Random star body: a union of convex polytopes that each contain the
/// origin, the first carrying the chord `[−bottom·ζ, top·ζ]`.
pub fn star_union_with_diameter<R: Rng + ?Sized>(
    rng: &mut R,
    zeta: &Direction4,
    members: usize,
    n_per_member: usize,
    top: f64,
    bottom: f64,
) -> Result<Body4> {
    let mut specs = Vec::with_capacity(members);
    for m in 0..members {
        let mut v = random_vertices(rng, n_per_member, 0.6, 1.0);
        // a small cross-polytope keeps the origin strictly inside
        for i in 0..4 {
            let mut e = Vec4::zeros();
            e[i] = 0.3;
            v.push(e);
            v.push(-e);
        }
        if m == 0 {
            v.push(zeta.vec() * top);
            v.push(-zeta.vec() * bottom);
        }
        specs.push(ShapeSpec::Polytope {
            vertices: v.into_iter().map(Into::into).collect(),
        });
    }
    Body4::star_union(specs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_orthogonal_is_orthogonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let q = random_orthogonal(&mut rng);
            assert!((q.matrix().transpose() * q.matrix() - Matrix4::identity()).norm() < 1e-12);
        }
    }

    #[test]
    fn planted_diameter_is_the_longest_chord() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let zeta = random_direction(&mut rng);
        let k = polytope_with_diameter(&mut rng, &zeta, 14, 1.3, 1.1).unwrap();
        let d = k.find_diameters(None).unwrap();
        assert_eq!(d.directions.len(), 1);
        assert!(d.directions[0].line_angle_to(&zeta) < 1e-12);
        assert!((d.length - 2.4).abs() < 1e-12);
    }
}
