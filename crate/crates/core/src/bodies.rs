//! Convex and star bodies in ℝ⁴ with exact support and radial evaluation.
//!
//! A [`Body4`] is shape data plus a chain of rigid transforms. The chain is
//! folded into one affine map `x ↦ Mx + c` at construction, so evaluation
//! goes through
//!
//! ```text
//! h_{MK+c}(θ) = h_K(Mᵀθ) + c·θ
//! ρ_{MK+c}(θ) = exit parameter of the ray  −Mᵀc + s·Mᵀθ  from K
//! ```

use std::sync::OnceLock;

use nalgebra::{Matrix3, Matrix4, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::func::{Radial, Support};
use crate::hull::{affine_rank, dedup_points, facets4, Facet4};
use crate::sphere::{complete_basis, quasi_uniform_s3, Direction4, Vec4};
use crate::transforms::Orthogonal4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BodyKind {
    Convex,
    Star,
}

/// `coeff · (direction · θ)^power`, extended 1-homogeneously.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RidgeTerm {
    pub coeff: f64,
    pub direction: Direction4,
    pub power: u32,
}

impl RidgeTerm {
    fn value(&self, x: &Vec4) -> f64 {
        let r = x.norm();
        if r == 0.0 {
            return 0.0;
        }
        let s = self.direction.vec().dot(x) / r;
        self.coeff * r * s.powi(self.power as i32)
    }

    /// Gradient of the homogeneous extension at a unit `theta`.
    fn gradient(&self, theta: &Vec4) -> Vec4 {
        let k = self.power as i32;
        let a = self.direction.vec();
        let s = a.dot(theta);
        let ds = if k == 0 { 0.0 } else { k as f64 * s.powi(k - 1) };
        (a * ds + theta * ((1 - k) as f64 * s.powi(k))) * self.coeff
    }
}

#[derive(Clone, Debug)]
pub struct Polytope {
    vertices: Vec<Vec4>,
    scale: f64,
    facets: OnceLock<Vec<Facet4>>,
}

impl Polytope {
    fn new(vertices: Vec<Vec4>) -> Result<Self> {
        if vertices.len() < 5 {
            return Err(Error::InvalidBody(format!(
                "polytope needs at least 5 vertices, got {}",
                vertices.len()
            )));
        }
        if vertices.iter().any(|v| !v.iter().all(|c| c.is_finite())) {
            return Err(Error::InvalidBody("non-finite vertex".into()));
        }
        if affine_rank(&vertices, 1e-10) < 4 {
            return Err(Error::InvalidBody("polytope vertices do not span R^4".into()));
        }
        let scale = vertices.iter().map(|v| v.norm()).fold(1.0, f64::max);
        Ok(Self {
            vertices,
            scale,
            facets: OnceLock::new(),
        })
    }

    pub fn vertices(&self) -> &[Vec4] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet4] {
        self.facets.get_or_init(|| facets4(&self.vertices))
    }

    fn support(&self, x: &Vec4) -> f64 {
        self.vertices
            .iter()
            .map(|v| v.dot(x))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    fn support_point(&self, x: &Vec4) -> Vec4 {
        let mut best = self.vertices[0];
        let mut val = best.dot(x);
        for v in &self.vertices[1..] {
            let d = v.dot(x);
            if d > val {
                val = d;
                best = *v;
            }
        }
        best
    }

    fn ray_exit(&self, p0: &Vec4, d: &Vec4) -> Result<f64> {
        let mut exit = f64::INFINITY;
        for f in self.facets() {
            let slack = f.offset - f.normal.dot(p0);
            if slack <= 1e-12 * self.scale {
                return Err(Error::OriginOutside);
            }
            let nd = f.normal.dot(d);
            if nd > 0.0 {
                exit = exit.min(slack / nd);
            }
        }
        Ok(exit)
    }
}

#[derive(Clone, Debug)]
pub struct Ellipsoid {
    semiaxes: [f64; 4],
    /// Columns are the principal axes.
    orientation: Matrix4<f64>,
    center: Vec4,
}

impl Ellipsoid {
    fn new(semiaxes: [f64; 4], orientation: Option<Orthogonal4>, center: Vec4) -> Result<Self> {
        if semiaxes.iter().any(|a| !(*a > 0.0) || !a.is_finite()) {
            return Err(Error::InvalidBody("ellipsoid semiaxes must be positive".into()));
        }
        Ok(Self {
            semiaxes,
            orientation: orientation.map(|o| *o.matrix()).unwrap_or_else(Matrix4::identity),
            center,
        })
    }

    fn local(&self, x: &Vec4) -> Vec4 {
        self.orientation.transpose() * x
    }

    fn support(&self, x: &Vec4) -> f64 {
        let y = self.local(x);
        let s: f64 = (0..4).map(|i| (self.semiaxes[i] * y[i]).powi(2)).sum();
        s.sqrt() + self.center.dot(x)
    }

    fn support_point(&self, x: &Vec4) -> Vec4 {
        let y = self.local(x);
        let h: f64 = (0..4)
            .map(|i| (self.semiaxes[i] * y[i]).powi(2))
            .sum::<f64>()
            .sqrt();
        let z = Vec4::from_fn(|i, _| self.semiaxes[i].powi(2) * y[i] / h);
        self.orientation * z + self.center
    }

    fn ray_exit(&self, p0: &Vec4, d: &Vec4) -> Result<f64> {
        let p = self.local(&(p0 - self.center));
        let q = self.local(d);
        let ps = Vec4::from_fn(|i, _| p[i] / self.semiaxes[i]);
        let qs = Vec4::from_fn(|i, _| q[i] / self.semiaxes[i]);
        let a = qs.norm_squared();
        let b = ps.dot(&qs);
        let c = ps.norm_squared() - 1.0;
        if c >= -1e-12 {
            return Err(Error::OriginOutside);
        }
        Ok((-b + (b * b - a * c).sqrt()) / a)
    }
}

#[derive(Clone, Debug)]
pub struct ZonalBump {
    base: Box<Shape>,
    epsilon: f64,
    terms: Vec<RidgeTerm>,
}

impl ZonalBump {
    fn perturbation(&self, x: &Vec4) -> f64 {
        self.terms.iter().map(|t| t.value(x)).sum::<f64>() * self.epsilon
    }

    fn support(&self, x: &Vec4) -> f64 {
        self.base.support(x) + self.perturbation(x)
    }

    fn support_point(&self, x: &Vec4) -> Vec4 {
        let theta = x / x.norm();
        let g: Vec4 = self.terms.iter().map(|t| t.gradient(&theta)).sum();
        self.base.support_point(x) + g * self.epsilon
    }

    /// Smallest eigenvalue of the tangential Hessian of the support function
    /// over a quasi-uniform sample; nonnegative for a convex body.
    fn min_tangent_curvature(&self, samples: usize) -> f64 {
        let s = 1e-3;
        let mut worst = f64::INFINITY;
        for p in quasi_uniform_s3(samples) {
            let th = *p.vec();
            let t = complete_basis(&[th], 3);
            let h = |v: Vec4| self.support(&v);
            let mut m = Matrix3::zeros();
            for i in 0..3 {
                for j in i..3 {
                    let (a, b) = (t[i], t[j]);
                    let v = (h(th + (a + b) * s) - h(th + (a - b) * s) - h(th - (a - b) * s)
                        + h(th - (a + b) * s))
                        / (4.0 * s * s);
                    m[(i, j)] = v;
                    m[(j, i)] = v;
                }
            }
            let ev = SymmetricEigen::new(m).eigenvalues.min();
            worst = worst.min(ev);
        }
        worst
    }
}

#[derive(Clone, Debug)]
pub enum Shape {
    Polytope(Polytope),
    Ellipsoid(Ellipsoid),
    ZonalBump(ZonalBump),
    /// Union of convex members, each containing the origin; a star body that
    /// need not be convex.
    Union(Vec<Shape>),
}

impl Shape {
    /// Support function of the shape (of its convex hull for unions).
    fn support(&self, x: &Vec4) -> f64 {
        match self {
            Shape::Polytope(p) => p.support(x),
            Shape::Ellipsoid(e) => e.support(x),
            Shape::ZonalBump(z) => z.support(x),
            Shape::Union(m) => m
                .iter()
                .map(|s| s.support(x))
                .fold(f64::NEG_INFINITY, f64::max),
        }
    }

    fn support_point(&self, x: &Vec4) -> Vec4 {
        match self {
            Shape::Polytope(p) => p.support_point(x),
            Shape::Ellipsoid(e) => e.support_point(x),
            Shape::ZonalBump(z) => z.support_point(x),
            Shape::Union(m) => {
                let best = m
                    .iter()
                    .max_by(|a, b| a.support(x).total_cmp(&b.support(x)))
                    .expect("non-empty union");
                best.support_point(x)
            }
        }
    }

    fn ray_exit(&self, p0: &Vec4, d: &Vec4) -> Result<f64> {
        match self {
            Shape::Polytope(p) => p.ray_exit(p0, d),
            Shape::Ellipsoid(e) => e.ray_exit(p0, d),
            Shape::ZonalBump(_) => Err(Error::UnsupportedKind(
                "radial function of a support-perturbed body".into(),
            )),
            Shape::Union(m) => {
                let mut best = f64::NEG_INFINITY;
                for s in m {
                    best = best.max(s.ray_exit(p0, d)?);
                }
                Ok(best)
            }
        }
    }

    fn is_smooth(&self) -> bool {
        match self {
            Shape::Polytope(_) => false,
            Shape::Ellipsoid(_) | Shape::ZonalBump(_) => true,
            Shape::Union(m) => m.iter().all(Shape::is_smooth),
        }
    }

    fn hull_points(&self, out: &mut Vec<Vec4>) -> bool {
        match self {
            Shape::Polytope(p) => {
                out.extend_from_slice(&p.vertices);
                true
            }
            Shape::Union(m) => m.iter().all(|s| s.hull_points(out)),
            _ => false,
        }
    }

    fn from_spec(spec: &ShapeSpec) -> Result<Self> {
        Ok(match spec {
            ShapeSpec::Polytope { vertices } => {
                let v: Vec<Vec4> = vertices.iter().map(|a| Vec4::from(*a)).collect();
                let (v, _) = dedup_points(&v, 1e-12);
                Shape::Polytope(Polytope::new(v)?)
            }
            ShapeSpec::Ellipsoid {
                semiaxes,
                orientation,
                center,
            } => Shape::Ellipsoid(Ellipsoid::new(
                *semiaxes,
                *orientation,
                center.map(Vec4::from).unwrap_or_else(Vec4::zeros),
            )?),
            ShapeSpec::ZonalBump {
                base,
                epsilon,
                terms,
            } => {
                let base = Shape::from_spec(base)?;
                if !base.is_smooth() {
                    return Err(Error::InvalidBody("bump base must be smooth".into()));
                }
                let z = ZonalBump {
                    base: Box::new(base),
                    epsilon: *epsilon,
                    terms: terms.clone(),
                };
                let c = z.min_tangent_curvature(600);
                if c < -1e-7 {
                    return Err(Error::InvalidBody(format!(
                        "perturbed support function is not convex (min curvature {c:e})"
                    )));
                }
                Shape::ZonalBump(z)
            }
            ShapeSpec::Union { members } => {
                if members.is_empty() {
                    return Err(Error::InvalidBody("empty union".into()));
                }
                let m = members
                    .iter()
                    .map(Shape::from_spec)
                    .collect::<Result<Vec<_>>>()?;
                if m.iter().any(|s| matches!(s, Shape::Union(_) | Shape::ZonalBump(_))) {
                    return Err(Error::InvalidBody(
                        "union members must be polytopes or ellipsoids".into(),
                    ));
                }
                Shape::Union(m)
            }
        })
    }

    /// Shape spec of `M·self + c`, with the map folded into the data.
    fn folded_spec(&self, m: &Matrix4<f64>, c: &Vec4) -> ShapeSpec {
        match self {
            Shape::Polytope(p) => ShapeSpec::Polytope {
                vertices: p.vertices.iter().map(|v| (m * v + c).into()).collect(),
            },
            Shape::Ellipsoid(e) => {
                let orient = m * e.orientation;
                let center = m * e.center + c;
                ShapeSpec::Ellipsoid {
                    semiaxes: e.semiaxes,
                    orientation: if (orient - Matrix4::identity()).abs().max() == 0.0 {
                        None
                    } else {
                        Some(Orthogonal4::new(orient).expect("product of orthogonal maps"))
                    },
                    center: if center == Vec4::zeros() {
                        None
                    } else {
                        Some(center.into())
                    },
                }
            }
            Shape::ZonalBump(z) => ShapeSpec::ZonalBump {
                base: Box::new(z.base.folded_spec(m, c)),
                epsilon: z.epsilon,
                terms: z
                    .terms
                    .iter()
                    .map(|t| RidgeTerm {
                        direction: Direction4::normalize(m * t.direction.vec())
                            .expect("rotated unit vector"),
                        ..*t
                    })
                    .collect(),
            },
            Shape::Union(members) => ShapeSpec::Union {
                members: members.iter().map(|s| s.folded_spec(m, c)).collect(),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ShapeSpec {
    Polytope {
        vertices: Vec<[f64; 4]>,
    },
    Ellipsoid {
        semiaxes: [f64; 4],
        #[serde(default, skip_serializing_if = "Option::is_none")]
        orientation: Option<Orthogonal4>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        center: Option<[f64; 4]>,
    },
    ZonalBump {
        base: Box<ShapeSpec>,
        epsilon: f64,
        terms: Vec<RidgeTerm>,
    },
    Union {
        members: Vec<ShapeSpec>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Transform {
    Rot(Orthogonal4),
    Shift([f64; 4]),
}

/// JSON body description:
/// `{kind, shape: {type, ...}, transforms: [{rot: [16]} | {shift: [4]}]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BodySpec {
    pub kind: BodyKind,
    pub shape: ShapeSpec,
    #[serde(default)]
    pub transforms: Vec<Transform>,
}

/// A body in ℝ⁴.
#[derive(Clone, Debug)]
pub struct Body4 {
    kind: BodyKind,
    shape: Shape,
    transforms: Vec<Transform>,
    lin: Matrix4<f64>,
    shift: Vec4,
}

/// Longest-chord data of a convex body.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiameterSet {
    /// One representative per line, sign-normalized.
    pub directions: Vec<Direction4>,
    /// Endpoints `(z, y)` with `y − z = length · direction`.
    pub endpoints: Vec<([f64; 4], [f64; 4])>,
    pub length: f64,
    pub tolerance: f64,
}

impl DiameterSet {
    /// Index of the diameter parallel to `dir`, if any, within `angle_tol`.
    pub fn find(&self, dir: &Direction4, angle_tol: f64) -> Option<usize> {
        self.directions
            .iter()
            .position(|d| d.line_angle_to(dir) <= angle_tol)
    }
}

const DIAMETER_SCAN: usize = 4096;
const DEDUP_ANGLE: f64 = 1e-3;

fn sign_normalize(v: Vec4) -> Vec4 {
    match v.iter().find(|c| c.abs() > 1e-9) {
        Some(c) if *c < 0.0 => -v,
        _ => v,
    }
}

impl Body4 {
    pub fn from_spec(spec: &BodySpec) -> Result<Self> {
        let shape = Shape::from_spec(&spec.shape)?;
        if matches!(shape, Shape::Union(_)) && spec.kind == BodyKind::Convex {
            return Err(Error::InvalidBody("a union is a star body, not convex".into()));
        }
        let mut b = Self {
            kind: spec.kind,
            shape,
            transforms: Vec::new(),
            lin: Matrix4::identity(),
            shift: Vec4::zeros(),
        };
        for t in &spec.transforms {
            b.push_transform(*t);
        }
        Ok(b)
    }

    pub fn from_json(s: &str) -> std::result::Result<Self, BodyParseError> {
        let spec: BodySpec = serde_json::from_str(s).map_err(BodyParseError::Json)?;
        Self::from_spec(&spec).map_err(BodyParseError::Body)
    }

    pub fn polytope(kind: BodyKind, vertices: Vec<Vec4>) -> Result<Self> {
        Self::from_spec(&BodySpec {
            kind,
            shape: ShapeSpec::Polytope {
                vertices: vertices.into_iter().map(Into::into).collect(),
            },
            transforms: vec![],
        })
    }

    pub fn ellipsoid(semiaxes: [f64; 4], orientation: Option<Orthogonal4>) -> Result<Self> {
        Self::from_spec(&BodySpec {
            kind: BodyKind::Convex,
            shape: ShapeSpec::Ellipsoid {
                semiaxes,
                orientation,
                center: None,
            },
            transforms: vec![],
        })
    }

    pub fn ball(radius: f64) -> Result<Self> {
        Self::ellipsoid([radius; 4], None)
    }

    /// `[-h, h]⁴`.
    pub fn cube(half: f64) -> Self {
        let v = (0..16)
            .map(|m| Vec4::from_fn(|i, _| if m >> i & 1 == 1 { half } else { -half }))
            .collect();
        Self::polytope(BodyKind::Convex, v).expect("cube is full-dimensional")
    }

    pub fn zonal_bump(base: ShapeSpec, epsilon: f64, terms: Vec<RidgeTerm>) -> Result<Self> {
        Self::from_spec(&BodySpec {
            kind: BodyKind::Convex,
            shape: ShapeSpec::ZonalBump {
                base: Box::new(base),
                epsilon,
                terms,
            },
            transforms: vec![],
        })
    }

    /// Star body formed by the union of convex members.
    pub fn star_union(members: Vec<ShapeSpec>) -> Result<Self> {
        Self::from_spec(&BodySpec {
            kind: BodyKind::Star,
            shape: ShapeSpec::Union { members },
            transforms: vec![],
        })
    }

    fn push_transform(&mut self, t: Transform) {
        match t {
            Transform::Rot(u) => {
                self.lin = u.matrix() * self.lin;
                self.shift = u.matrix() * self.shift;
            }
            Transform::Shift(a) => self.shift += Vec4::from(a),
        }
        self.transforms.push(t);
    }

    /// `U·K + a`.
    pub fn apply(&self, u: &Orthogonal4, a: &Vec4) -> Self {
        let mut b = self.clone();
        b.push_transform(Transform::Rot(*u));
        b.push_transform(Transform::Shift((*a).into()));
        b
    }

    pub fn translate(&self, a: &Vec4) -> Self {
        let mut b = self.clone();
        b.push_transform(Transform::Shift((*a).into()));
        b
    }

    pub fn kind(&self) -> BodyKind {
        self.kind
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn transforms(&self) -> &[Transform] {
        &self.transforms
    }

    pub fn is_polytope(&self) -> bool {
        matches!(self.shape, Shape::Polytope(_))
    }

    pub fn is_smooth(&self) -> bool {
        self.shape.is_smooth()
    }

    pub fn is_convex(&self) -> bool {
        !matches!(self.shape, Shape::Union(_))
    }

    /// Vertices after the transform chain, for polytopes.
    pub fn vertices(&self) -> Option<Vec<Vec4>> {
        match &self.shape {
            Shape::Polytope(p) => Some(p.vertices.iter().map(|v| self.lin * v + self.shift).collect()),
            _ => None,
        }
    }

    /// Points whose convex hull is the hull of the body, when finite.
    pub fn hull_points(&self) -> Option<Vec<Vec4>> {
        let mut pts = Vec::new();
        self.shape
            .hull_points(&mut pts)
            .then(|| pts.iter().map(|v| self.lin * v + self.shift).collect())
    }

    /// Support function of the convex hull; defined for every body.
    pub fn hull_support(&self, x: &Vec4) -> f64 {
        self.shape.support(&(self.lin.transpose() * x)) + self.shift.dot(x)
    }

    /// `h_K(x) = max{x·y : y ∈ K}`, 1-homogeneous in `x`.
    pub fn support(&self, x: &Vec4) -> Result<f64> {
        if !self.is_convex() {
            return Err(Error::UnsupportedKind(
                "support function of a non-convex star body".into(),
            ));
        }
        Ok(self.hull_support(x))
    }

    /// A point of the hull where `x` attains its maximum.
    pub fn support_point(&self, x: &Vec4) -> Vec4 {
        self.lin * self.shape.support_point(&(self.lin.transpose() * x)) + self.shift
    }

    /// `ρ_K(θ) = max{c : cθ ∈ K}` for `θ ≠ 0`.
    pub fn radial(&self, theta: &Vec4) -> Result<f64> {
        let p0 = -(self.lin.transpose() * self.shift);
        let d = self.lin.transpose() * theta;
        let r = self.shape.ray_exit(&p0, &d)?;
        if !(r > 0.0) {
            return Err(Error::OriginOutside);
        }
        Ok(r)
    }

    /// `ω_K(θ) = h_K(θ) + h_K(−θ)`.
    pub fn width(&self, theta: &Vec4) -> Result<f64> {
        Ok(self.support(theta)? + self.support(&-theta)?)
    }

    fn hull_width(&self, theta: &Vec4) -> f64 {
        self.hull_support(theta) + self.hull_support(&-theta)
    }

    /// Diameters of a convex body: scan of the width over S³ followed by the
    /// ascent `θ ← (y⁺ − y⁻)/|y⁺ − y⁻|`, where `y±` are support points at
    /// `±θ`. The ascent never decreases the width.
    pub fn find_diameters(&self, tol: Option<f64>) -> Result<DiameterSet> {
        if !self.is_convex() {
            return Err(Error::UnsupportedKind("diameters of a non-convex body".into()));
        }
        self.hull_diameters(tol)
    }

    /// Diameters of the convex hull of the body.
    pub fn hull_diameters(&self, tol: Option<f64>) -> Result<DiameterSet> {
        let scan = quasi_uniform_s3(DIAMETER_SCAN);
        let widths: Vec<f64> = scan.iter().map(|p| self.hull_width(p.vec())).collect();
        let wmax = widths.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let wmin = widths.iter().cloned().fold(f64::INFINITY, f64::min);
        let rel = if self.is_smooth() { 1e-6 } else { 1e-9 };
        let tol = tol.unwrap_or(rel * wmax);
        if wmax - wmin <= tol {
            return Err(Error::DegenerateBody);
        }
        let ends: Vec<(Vec4, f64)> = scan
            .iter()
            .zip(&widths)
            .filter(|(_, w)| **w >= wmin + 0.5 * (wmax - wmin))
            .map(|(p, _)| self.width_ascent(*p.vec()))
            .collect();
        let best = ends.iter().map(|e| e.1).fold(f64::NEG_INFINITY, f64::max);
        let mut dirs: Vec<Direction4> = Vec::new();
        for (v, w) in &ends {
            if *w < best - tol {
                continue;
            }
            let d = Direction4::normalize(sign_normalize(*v)).expect("unit ascent direction");
            if !dirs.iter().any(|q| q.line_angle_to(&d) < DEDUP_ANGLE) {
                dirs.push(d);
            }
        }
        dirs.sort_by(|a, b| {
            let (a, b) = (a.vec(), b.vec());
            (0..4)
                .map(|i| a[i].total_cmp(&b[i]))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
                .reverse()
        });
        let endpoints = dirs
            .iter()
            .map(|d| {
                let y = self.support_point(d.vec());
                let z = self.support_point(&-d.vec());
                (z.into(), y.into())
            })
            .collect();
        Ok(DiameterSet {
            directions: dirs,
            endpoints,
            length: best,
            tolerance: tol,
        })
    }

    fn width_ascent(&self, mut theta: Vec4) -> (Vec4, f64) {
        let mut w = self.hull_width(&theta);
        for _ in 0..5000 {
            let chord = self.support_point(&theta) - self.support_point(&-theta);
            let n = chord.norm();
            if n == 0.0 {
                break;
            }
            let next = chord / n;
            let wn = self.hull_width(&next);
            if wn < w || (next - theta).norm() < 1e-15 {
                if wn >= w {
                    theta = next;
                    w = wn;
                }
                break;
            }
            theta = next;
            w = wn;
        }
        (theta, w)
    }

    /// Support function of the projection onto `w⊥`, as a function on S²(w).
    pub fn project_support(&self, w: &Direction4) -> Restricted<'_> {
        Restricted {
            body: self,
            w: *w,
            radial: false,
        }
    }

    /// Radial function of the section by `w⊥`, as a function on S²(w).
    pub fn section_radial(&self, w: &Direction4) -> Restricted<'_> {
        Restricted {
            body: self,
            w: *w,
            radial: true,
        }
    }

    pub fn support_fn(&self) -> Support<'_> {
        Support(self)
    }

    pub fn radial_fn(&self) -> Radial<'_> {
        Radial(self)
    }

    /// Canonical spec: the transform chain folded into the shape data.
    pub fn canonical_spec(&self) -> BodySpec {
        BodySpec {
            kind: self.kind,
            shape: self.shape.folded_spec(&self.lin, &self.shift),
            transforms: vec![],
        }
    }

    pub fn spec(&self) -> BodySpec {
        BodySpec {
            kind: self.kind,
            shape: self.shape.folded_spec(&Matrix4::identity(), &Vec4::zeros()),
            transforms: self.transforms.clone(),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum BodyParseError {
    #[error("{0}")]
    Json(serde_json::Error),
    #[error("{0}")]
    Body(Error),
}

/// A body's support or radial function restricted to S²(w).
#[derive(Clone, Copy)]
pub struct Restricted<'a> {
    body: &'a Body4,
    w: Direction4,
    radial: bool,
}

impl Restricted<'_> {
    pub fn w(&self) -> &Direction4 {
        &self.w
    }

    pub fn eval(&self, theta: &Vec4) -> Result<f64> {
        let d = theta.dot(self.w.vec());
        if d.abs() > 1e-10 {
            return Err(Error::NonOrthogonal(d));
        }
        if self.radial {
            self.body.radial(theta)
        } else {
            self.body.support(theta)
        }
    }
}

impl crate::func::SphereFn for Restricted<'_> {
    fn eval(&self, theta: &Vec4) -> Result<f64> {
        Restricted::eval(self, theta)
    }
}
