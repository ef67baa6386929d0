//! Geometric tomography toolkit for bodies in ℝ⁴ whose three-dimensional
//! projections or sections are directly congruent.
//!
//! The crate evaluates support and radial functions exactly, splits functions
//! on S³ into parts even and odd under the map 𝒪 = 2ζζᵀ − I, registers
//! functions on great 2-spheres S²(w) against rotations that fix or flip ζ,
//! and assembles these into end-to-end verifiers that decide whether
//! `K = L + b` or `K = 𝒪L + b`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bodies;
pub mod error;
pub mod func;
pub mod funk;
pub mod hull;
pub mod lab;
pub mod registration;
pub mod sphere;
pub mod synthetic;
pub mod transforms;
pub mod verifier;

pub use bodies::{Body4, BodyKind, BodySpec, DiameterSet, ShapeSpec};
pub use error::{Error, Result};
pub use func::SphereFn;
pub use sphere::{Direction4, SphereFrame, SphereGrid, Vec4};
pub use transforms::{AxisRotation, Orientation, Orthogonal4};
