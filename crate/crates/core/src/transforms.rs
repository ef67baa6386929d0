//! Orthogonal maps of ℝ⁴: rotations of a great 2-sphere S²(w) that fix or
//! flip the pole ζ, and the map 𝒪 = 2ζζᵀ − I.

use std::f64::consts::{PI, TAU};

use nalgebra::Matrix4;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sphere::{Direction4, SphereFrame, Vec4};

const ORTHO_TOL: f64 = 1e-10;

/// 4×4 orthogonal matrix. Serialized as a row-major array of 16 numbers.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Orthogonal4(Matrix4<f64>);

impl Orthogonal4 {
    pub fn new(m: Matrix4<f64>) -> Result<Self> {
        let dev = (m.transpose() * m - Matrix4::identity()).abs().max();
        if !(dev <= ORTHO_TOL) {
            return Err(Error::NotOrthogonal(dev));
        }
        Ok(Self(m))
    }

    pub fn identity() -> Self {
        Self(Matrix4::identity())
    }

    pub fn from_row_major(a: &[f64]) -> Result<Self> {
        if a.len() != 16 {
            return Err(Error::NotOrthogonal(f64::NAN));
        }
        Self::new(Matrix4::from_row_slice(a))
    }

    pub fn to_row_major(&self) -> [f64; 16] {
        let mut out = [0.0; 16];
        for r in 0..4 {
            for c in 0..4 {
                out[4 * r + c] = self.0[(r, c)];
            }
        }
        out
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.0
    }

    pub fn apply(&self, v: &Vec4) -> Vec4 {
        self.0 * v
    }

    pub fn apply_dir(&self, d: &Direction4) -> Direction4 {
        Direction4::normalize(self.0 * d.vec()).expect("orthogonal image of a unit vector")
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn determinant(&self) -> f64 {
        self.0.determinant()
    }

    /// Half-turn about the unit axis `u` inside the hyperplane `fixed⊥`,
    /// leaving `fixed` untouched: `2uuᵀ − I + 2 fixed fixedᵀ`.
    pub fn half_turn(u: &Direction4, fixed: &Direction4) -> Result<Self> {
        let d = u.dot(fixed);
        if d.abs() > ORTHO_TOL {
            return Err(Error::NonOrthogonal(d));
        }
        let u = u.vec();
        let f = fixed.vec();
        Ok(Self(
            u * u.transpose() * 2.0 + f * f.transpose() * 2.0 - Matrix4::identity(),
        ))
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        (self.0 - Matrix4::identity()).abs().max() <= tol
    }
}

impl TryFrom<Vec<f64>> for Orthogonal4 {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::from_row_major(&v)
    }
}

impl From<Orthogonal4> for Vec<f64> {
    fn from(o: Orthogonal4) -> Self {
        o.to_row_major().to_vec()
    }
}

/// Matrix product `a · b` (apply `b` first).
pub fn compose(a: &Orthogonal4, b: &Orthogonal4) -> Orthogonal4 {
    Orthogonal4(a.0 * b.0)
}

/// `𝒪 = 2ζζᵀ − I`: fixes ζ and negates ζ⊥.
pub fn reflection_o(zeta: &Direction4) -> Orthogonal4 {
    let z = zeta.vec();
    Orthogonal4(z * z.transpose() * 2.0 - Matrix4::identity())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Orientation {
    /// ζ ↦ ζ: rotation about ζ inside w⊥.
    FixZeta,
    /// ζ ↦ −ζ: half-turn about an axis of the circle S²(w) ∩ S²(ζ).
    FlipZeta,
}

/// Rotation of S²(w) stored in frame coordinates.
///
/// `parameter` is the rotation angle in radians for [`Orientation::FixZeta`]
/// (positive turns `e1` toward `e2`) and the azimuth of the half-turn axis
/// `u = cos(p) e1 + sin(p) e2` for [`Orientation::FlipZeta`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxisRotation {
    pub frame: SphereFrame,
    pub orientation: Orientation,
    pub parameter: f64,
}

impl AxisRotation {
    pub fn matrix(&self) -> Orthogonal4 {
        let f = &self.frame;
        let (e1, e2, w, z) = (f.e1.vec(), f.e2.vec(), f.w.vec(), f.zeta.vec());
        let ww = w * w.transpose();
        let m = match self.orientation {
            Orientation::FixZeta => {
                let (s, c) = self.parameter.sin_cos();
                ww + z * z.transpose()
                    + (e1 * e1.transpose() + e2 * e2.transpose()) * c
                    + (e2 * e1.transpose() - e1 * e2.transpose()) * s
            }
            Orientation::FlipZeta => {
                let u = f.equator_point(self.parameter);
                ww + u * u.transpose() * 2.0
                    - e1 * e1.transpose()
                    - e2 * e2.transpose()
                    - z * z.transpose()
            }
        };
        Orthogonal4(m)
    }

    pub fn apply(&self, v: &Vec4) -> Vec4 {
        self.matrix().apply(v)
    }

    /// Action in `(t, azimuth)` coordinates of S²(w).
    pub fn act_on_coordinates(&self, t: f64, phi: f64) -> (f64, f64) {
        match self.orientation {
            Orientation::FixZeta => (t, (phi + self.parameter).rem_euclid(TAU)),
            Orientation::FlipZeta => (-t, (2.0 * self.parameter - phi).rem_euclid(TAU)),
        }
    }

    /// The inverse rotation, in the same family.
    pub fn inverse(&self) -> Self {
        match self.orientation {
            Orientation::FixZeta => Self {
                parameter: (-self.parameter).rem_euclid(TAU),
                ..*self
            },
            Orientation::FlipZeta => *self,
        }
    }
}

/// Rotation of S²(w) by the angle `alpha·π` about ζ.
pub fn rotation_fixing_zeta(frame: &SphereFrame, alpha: f64) -> AxisRotation {
    AxisRotation {
        frame: *frame,
        orientation: Orientation::FixZeta,
        parameter: (alpha * PI).rem_euclid(TAU),
    }
}

/// Half-turn of S²(w) about `u = cos(u_azimuth) e1 + sin(u_azimuth) e2`.
pub fn pi_rotation_about(frame: &SphereFrame, u_azimuth: f64) -> AxisRotation {
    AxisRotation {
        frame: *frame,
        orientation: Orientation::FlipZeta,
        parameter: u_azimuth.rem_euclid(PI),
    }
}
