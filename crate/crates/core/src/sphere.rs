//! Coordinates on the unit sphere S³ ⊂ ℝ⁴.
//!
//! A [`SphereFrame`] fixes a pole `zeta` and a direction `w ⟂ zeta`. The great
//! 2-sphere S²(w) then carries latitude/azimuth coordinates `(t, phi)` with
//! poles `±zeta`:
//!
//! ```text
//! theta(t, phi) = sqrt(1 - t²) (cos phi e1 + sin phi e2) + t zeta
//! ```
//!
//! where `{e1, e2, w, zeta}` is a positively oriented orthonormal basis.
//! [`SphereGrid`] samples these coordinates on Gauss–Legendre latitudes and a
//! uniform azimuth ring.

use std::f64::consts::{PI, TAU};

use nalgebra::{Matrix4, Vector3, Vector4};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vec4 = Vector4<f64>;

const UNIT_TOL: f64 = 1e-12;
const ORTHO_TOL: f64 = 1e-10;

/// A point of S³.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 4]", into = "[f64; 4]")]
pub struct Direction4(Vec4);

impl Direction4 {
    /// Accepts `v` only if it already has unit norm (within 1e-12).
    pub fn new(v: Vec4) -> Result<Self> {
        let n = v.norm();
        if (n - 1.0).abs() > UNIT_TOL {
            return Err(Error::NotUnit(n));
        }
        Ok(Self(v))
    }

    /// Normalizes `v`; fails on the zero vector.
    pub fn normalize(v: Vec4) -> Result<Self> {
        let n = v.norm();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::NotUnit(n));
        }
        Ok(Self(v / n))
    }

    pub fn from_array(a: [f64; 4]) -> Result<Self> {
        Self::normalize(Vec4::from(a))
    }

    /// Standard basis vector `e_{i+1}`.
    pub fn axis(i: usize) -> Self {
        let mut v = Vec4::zeros();
        v[i] = 1.0;
        Self(v)
    }

    pub fn vec(&self) -> &Vec4 {
        &self.0
    }

    pub fn into_vec(self) -> Vec4 {
        self.0
    }

    pub fn dot(&self, other: &Direction4) -> f64 {
        self.0.dot(&other.0)
    }

    pub fn neg(&self) -> Self {
        Self(-self.0)
    }

    /// Angle to `other` in radians.
    pub fn angle_to(&self, other: &Direction4) -> f64 {
        // atan2 form stays accurate near 0 and π
        let cross = (self.0 - other.0 * self.dot(other)).norm();
        cross.atan2(self.dot(other))
    }

    /// Angle between the lines spanned by `self` and `other`, in `[0, π/2]`.
    pub fn line_angle_to(&self, other: &Direction4) -> f64 {
        let a = self.angle_to(other);
        a.min(PI - a)
    }
}

impl TryFrom<[f64; 4]> for Direction4 {
    type Error = Error;
    fn try_from(a: [f64; 4]) -> Result<Self> {
        Self::from_array(a)
    }
}

impl From<Direction4> for [f64; 4] {
    fn from(d: Direction4) -> Self {
        [d.0[0], d.0[1], d.0[2], d.0[3]]
    }
}

impl From<Direction4> for Vec4 {
    fn from(d: Direction4) -> Self {
        d.0
    }
}

pub(crate) fn det4(a: &Vec4, b: &Vec4, c: &Vec4, d: &Vec4) -> f64 {
    Matrix4::from_columns(&[*a, *b, *c, *d]).determinant()
}

/// Gram–Schmidt of `v` against the (orthonormal) `basis`.
fn reject(v: &Vec4, basis: &[Vec4]) -> Vec4 {
    let mut r = *v;
    for b in basis {
        r -= b * b.dot(&r);
    }
    // second pass keeps the result orthogonal to rounding
    for b in basis {
        r -= b * b.dot(&r);
    }
    r
}

/// Deterministic completion of an orthonormal set, drawing candidates from
/// the standard basis in order and keeping the first with residual ≥ 0.5.
pub(crate) fn complete_basis(given: &[Vec4], count: usize) -> Vec<Vec4> {
    let mut all: Vec<Vec4> = given.to_vec();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mut best: Option<Vec4> = None;
        let mut best_norm = 0.0;
        for i in 0..4 {
            let mut e = Vec4::zeros();
            e[i] = 1.0;
            let r = reject(&e, &all);
            let n = r.norm();
            if n >= 0.5 {
                best = Some(r / n);
                break;
            }
            if n > best_norm {
                best_norm = n;
                best = Some(r / n);
            }
        }
        let b = best.expect("basis completion in R^4");
        all.push(b);
        out.push(b);
    }
    out
}

/// Orthonormal basis `[b1, b2, b3]` of `zeta⊥`, deterministic in `zeta`.
pub fn orthonormal_complement(zeta: &Direction4) -> [Vec4; 3] {
    let b = complete_basis(&[zeta.0], 3);
    [b[0], b[1], b[2]]
}

/// Pole pair `(zeta, w)` with an azimuthal basis `(e1, e2)` of their common
/// orthogonal complement; `{e1, e2, w, zeta}` is positively oriented.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SphereFrame {
    pub zeta: Direction4,
    pub w: Direction4,
    pub e1: Direction4,
    pub e2: Direction4,
}

impl SphereFrame {
    pub fn new(zeta: Direction4, w: Direction4) -> Result<Self> {
        let d = zeta.dot(&w);
        if d.abs() > ORTHO_TOL {
            return Err(Error::NonOrthogonal(d));
        }
        // re-orthogonalize w so the frame is orthonormal to rounding
        let wv = reject(w.vec(), &[*zeta.vec()]).normalize();
        let b = complete_basis(&[*zeta.vec(), wv], 2);
        let e1 = b[0];
        let mut e2 = b[1];
        if det4(&e1, &e2, &wv, zeta.vec()) < 0.0 {
            e2 = -e2;
        }
        Ok(Self {
            zeta,
            w: Direction4(wv),
            e1: Direction4(e1),
            e2: Direction4(e2),
        })
    }

    /// Frame for `w` given as a unit vector of `zeta⊥` in the coordinates of
    /// [`orthonormal_complement`].
    pub fn from_complement_coords(zeta: Direction4, c: &Vector3<f64>) -> Result<Self> {
        let b = orthonormal_complement(&zeta);
        let w = Direction4::normalize(b[0] * c[0] + b[1] * c[1] + b[2] * c[2])?;
        Self::new(zeta, w)
    }

    /// Point of the great circle S²(w) ∩ S²(ζ) at azimuth `phi`.
    pub fn equator_point(&self, phi: f64) -> Vec4 {
        let (s, c) = phi.sin_cos();
        self.e1.0 * c + self.e2.0 * s
    }

    /// Point of S²(w) at latitude `t` (height along ζ) and azimuth `phi`.
    pub fn point(&self, t: f64, phi: f64) -> Vec4 {
        let r = (1.0 - t * t).max(0.0).sqrt();
        self.equator_point(phi) * r + self.zeta.0 * t
    }

    /// Latitude/azimuth of a point of S²(w).
    pub fn coordinates(&self, theta: &Vec4) -> (f64, f64) {
        let t = theta.dot(self.zeta.vec());
        let phi = theta.dot(self.e2.vec()).atan2(theta.dot(self.e1.vec()));
        (t, phi.rem_euclid(TAU))
    }

    /// Columns `e1, e2, w, zeta`.
    pub fn basis_matrix(&self) -> Matrix4<f64> {
        Matrix4::from_columns(&[self.e1.0, self.e2.0, self.w.0, self.zeta.0])
    }
}

/// `sqrt(1 - t²) x + t zeta` for `x ∈ S²(zeta)`.
pub fn embed_parallel(x: &Direction4, t: f64, zeta: &Direction4) -> Result<Direction4> {
    let d = x.dot(zeta);
    if d.abs() > ORTHO_TOL {
        return Err(Error::NonOrthogonal(d));
    }
    if !(t.abs() <= 1.0) {
        return Err(Error::InvalidGrid(format!("latitude {t} outside [-1, 1]")));
    }
    let v = x.0 * (1.0 - t * t).sqrt() + zeta.0 * t;
    Direction4::normalize(v)
}

/// Gauss–Legendre nodes (ascending) and weights on (-1, 1).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess, then Newton on P_n
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let n = n as f64;
    (p1, n * (x * p1 - p0) / (x * x - 1.0))
}

/// Latitude × azimuth product grid on S²(w).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SphereGrid {
    pub frame: SphereFrame,
    pub t_nodes: Vec<f64>,
    pub t_weights: Vec<f64>,
    pub n_azimuth: usize,
}

pub const DEFAULT_N_T: usize = 64;
pub const DEFAULT_N_AZIMUTH: usize = 256;

impl SphereGrid {
    pub fn new(frame: SphereFrame, n_t: usize, n_azimuth: usize) -> Result<Self> {
        if n_t == 0 {
            return Err(Error::InvalidGrid("no latitude nodes".into()));
        }
        let (t_nodes, t_weights) = gauss_legendre(n_t);
        Self::with_nodes(frame, t_nodes, t_weights, n_azimuth)
    }

    pub fn with_nodes(
        frame: SphereFrame,
        t_nodes: Vec<f64>,
        t_weights: Vec<f64>,
        n_azimuth: usize,
    ) -> Result<Self> {
        if n_azimuth < 8 || !n_azimuth.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!(
                "n_azimuth must be even and >= 8, got {n_azimuth}"
            )));
        }
        if t_nodes.is_empty() || t_nodes.len() != t_weights.len() {
            return Err(Error::InvalidGrid("latitude nodes/weights mismatch".into()));
        }
        if t_nodes.windows(2).any(|p| p[1] <= p[0]) {
            return Err(Error::InvalidGrid("latitude nodes not increasing".into()));
        }
        if t_nodes.iter().any(|t| !(t.abs() < 1.0)) {
            return Err(Error::InvalidGrid("latitude nodes must lie in (-1, 1)".into()));
        }
        if t_weights.iter().any(|w| !(*w > 0.0)) {
            return Err(Error::InvalidGrid("weights must be positive".into()));
        }
        Ok(Self {
            frame,
            t_nodes,
            t_weights,
            n_azimuth,
        })
    }

    pub fn n_t(&self) -> usize {
        self.t_nodes.len()
    }

    pub fn len(&self) -> usize {
        self.n_t() * self.n_azimuth
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn azimuth_step(&self) -> f64 {
        TAU / self.n_azimuth as f64
    }

    pub fn azimuth(&self, j: usize) -> f64 {
        self.azimuth_step() * j as f64
    }

    pub fn grid_point(&self, i_t: usize, j_az: usize) -> Result<Direction4> {
        if i_t >= self.n_t() || j_az >= self.n_azimuth {
            return Err(Error::IndexOutOfRange(i_t, j_az));
        }
        Ok(Direction4(self.point_unchecked(i_t, j_az)))
    }

    pub(crate) fn point_unchecked(&self, i_t: usize, j_az: usize) -> Vec4 {
        self.frame.point(self.t_nodes[i_t], self.azimuth(j_az))
    }

    /// Whether ring `i` and ring `n_t - 1 - i` sit at opposite latitudes.
    pub fn rings_symmetric(&self) -> bool {
        let n = self.n_t();
        (0..n).all(|i| (self.t_nodes[i] + self.t_nodes[n - 1 - i]).abs() <= 1e-13)
    }

    /// Same nodes, same azimuth count, different frame.
    pub fn with_frame(&self, frame: SphereFrame) -> Self {
        Self {
            frame,
            ..self.clone()
        }
    }

    pub fn same_layout(&self, other: &SphereGrid) -> bool {
        self.n_azimuth == other.n_azimuth && self.t_nodes == other.t_nodes
    }
}

/// `n` equispaced points of the great circle S²(w) ∩ S²(ζ), starting at `e1`.
pub fn great_circle_nodes(frame: &SphereFrame, n: usize) -> Vec<Direction4> {
    (0..n)
        .map(|j| Direction4(frame.equator_point(TAU * j as f64 / n as f64)))
        .collect()
}

/// Trapezoidal rule on a full circle of circumference 2π.
pub fn circle_quadrature(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(TAU / values.len() as f64 * values.iter().sum::<f64>())
}

/// Quasi-uniform points on S³: an additive-recurrence (R3) sequence pushed
/// through the Hopf parametrisation, which maps uniform `[0,1)³` to the
/// uniform measure.
pub fn quasi_uniform_s3(n: usize) -> Vec<Direction4> {
    // plastic-number generalisation of the golden ratio for 3 dimensions
    let mut phi: f64 = 2.0;
    for _ in 0..40 {
        phi = (1.0 + phi).powf(1.0 / 4.0);
    }
    let alpha = [1.0 / phi, 1.0 / (phi * phi), 1.0 / (phi * phi * phi)];
    (0..n)
        .map(|k| {
            let k = k as f64 + 0.5;
            let u = (k * alpha[0]).fract();
            let a = (k * alpha[1]).fract() * TAU;
            let b = (k * alpha[2]).fract() * TAU;
            let r1 = u.sqrt();
            let r2 = (1.0 - u).sqrt();
            Direction4(Vec4::new(r1 * a.cos(), r1 * a.sin(), r2 * b.cos(), r2 * b.sin()))
        })
        .collect()
}

/// Fibonacci-spiral points on the unit 2-sphere.
pub fn fibonacci_s2(n: usize) -> Vec<Vector3<f64>> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|k| {
            let z = 1.0 - 2.0 * (k as f64 + 0.5) / n as f64;
            let r = (1.0 - z * z).sqrt();
            let a = golden * k as f64;
            Vector3::new(r * a.cos(), r * a.sin(), z)
        })
        .collect()
}

/// Quasi-uniform directions on the great sphere S²(ζ).
pub fn quasi_uniform_great_sphere(zeta: &Direction4, n: usize) -> Vec<Direction4> {
    let b = orthonormal_complement(zeta);
    fibonacci_s2(n)
        .into_iter()
        .map(|c| Direction4(b[0] * c[0] + b[1] * c[1] + b[2] * c[2]))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frame() -> SphereFrame {
        let zeta = Direction4::from_array([0.3, -0.2, 0.5, 0.7]).unwrap();
        let b = orthonormal_complement(&zeta);
        let w = Direction4::normalize(b[0] * 0.4 - b[2] * 0.9).unwrap();
        SphereFrame::new(zeta, w).unwrap()
    }

    #[test]
    fn embed_parallel_examples() {
        let zeta = Direction4::axis(3);
        let x = Direction4::axis(0);
        assert_eq!(embed_parallel(&x, 0.0, &zeta).unwrap(), x);
        let pole = embed_parallel(&x, 1.0, &zeta).unwrap();
        assert!((pole.vec() - zeta.vec()).norm() < 1e-15);
        let p = embed_parallel(&x, 0.6, &zeta).unwrap();
        assert!((p.vec() - Vec4::new(0.8, 0.0, 0.0, 0.6)).norm() < 1e-15);
        let bad = Direction4::from_array([1.0, 0.0, 0.0, 0.1]).unwrap();
        assert!(matches!(
            embed_parallel(&bad, 0.2, &zeta),
            Err(Error::NonOrthogonal(_))
        ));
    }

    #[test]
    fn frame_is_positively_oriented_orthonormal() {
        let f = frame();
        let m = f.basis_matrix();
        assert!((m.transpose() * m - Matrix4::identity()).norm() < 1e-12);
        assert!((m.determinant() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn frame_rejects_non_orthogonal_pair() {
        let z = Direction4::axis(3);
        let w = Direction4::from_array([0.0, 0.0, 1.0, 0.2]).unwrap();
        assert!(matches!(SphereFrame::new(z, w), Err(Error::NonOrthogonal(_))));
    }

    #[test]
    fn grid_points() {
        let f = frame();
        // odd node count puts t = 0 on the grid
        let g = SphereGrid::new(f, 9, 16).unwrap();
        let mid = 4;
        assert_eq!(g.t_nodes[mid], 0.0);
        assert!((g.grid_point(mid, 0).unwrap().vec() - f.e1.vec()).norm() < 1e-15);
        assert!((g.grid_point(mid, 4).unwrap().vec() - f.e2.vec()).norm() < 1e-15);
        for i in 0..9 {
            for j in 0..16 {
                let p = g.grid_point(i, j).unwrap();
                assert!((p.vec().norm() - 1.0).abs() < 1e-14);
                assert!(p.vec().dot(f.w.vec()).abs() < 1e-14);
            }
        }
        assert!(matches!(g.grid_point(9, 0), Err(Error::IndexOutOfRange(9, 0))));
        assert!(g.rings_symmetric());
    }

    #[test]
    fn grid_rejects_bad_azimuth_counts() {
        assert!(SphereGrid::new(frame(), 8, 6).is_err());
        assert!(SphereGrid::new(frame(), 8, 15).is_err());
    }

    #[test]
    fn great_circle_examples() {
        let f = frame();
        let four = great_circle_nodes(&f, 4);
        let expect = [f.e1.into_vec(), f.e2.into_vec(), -f.e1.into_vec(), -f.e2.into_vec()];
        for (a, b) in four.iter().zip(expect.iter()) {
            assert!((a.vec() - b).norm() < 1e-15);
        }
        let nodes = great_circle_nodes(&f, 32);
        let sum: Vec4 = nodes.iter().map(|d| *d.vec()).sum();
        assert!(sum.norm() < 1e-12);
        for d in &nodes {
            assert!(d.dot(&f.zeta).abs() < 1e-15 && d.dot(&f.w).abs() < 1e-15);
        }
    }

    #[test]
    fn circle_quadrature_examples() {
        let n = 16;
        let az: Vec<f64> = (0..n).map(|j| TAU * j as f64 / n as f64).collect();
        let ones = vec![1.0; n];
        assert!((circle_quadrature(&ones).unwrap() - TAU).abs() < 1e-14);
        let c: Vec<f64> = az.iter().map(|a| a.cos()).collect();
        assert!(circle_quadrature(&c).unwrap().abs() < 1e-12);
        let c2: Vec<f64> = az.iter().map(|a| a.cos().powi(2)).collect();
        assert!((circle_quadrature(&c2).unwrap() - PI).abs() < 1e-12);
        assert_eq!(circle_quadrature(&[]), Err(Error::EmptyInput));
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(64);
        assert!(x.windows(2).all(|p| p[1] > p[0]));
        let s: f64 = w.iter().sum();
        assert!((s - 2.0).abs() < 1e-13);
        // ∫ t^{2k} = 2/(2k+1)
        for k in 0..40 {
            let q: f64 = x.iter().zip(&w).map(|(t, w)| w * t.powi(2 * k)).sum();
            assert!((q - 2.0 / (2 * k + 1) as f64).abs() < 1e-13, "k={k}");
        }
    }

    #[test]
    fn quasi_uniform_points_are_unit_and_balanced() {
        let pts = quasi_uniform_s3(4000);
        let mean: Vec4 = pts.iter().map(|d| *d.vec()).sum::<Vec4>() / 4000.0;
        assert!(mean.norm() < 0.02);
        assert!(pts.iter().all(|p| (p.vec().norm() - 1.0).abs() < 1e-14));
        let z = Direction4::from_array([1.0, 1.0, 0.0, 0.0]).unwrap();
        let ws = quasi_uniform_great_sphere(&z, 100);
        assert!(ws.iter().all(|w| w.dot(&z).abs() < 1e-14));
    }
}
