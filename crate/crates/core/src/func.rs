//! Scalar functions on S³.
//!
//! Plain closures `Fn(&Vec4) -> f64` implement [`SphereFn`] directly; body
//! evaluations, which can fail, are wrapped in [`Support`] and [`Radial`].

use nalgebra::Matrix4;

use crate::bodies::Body4;
use crate::error::Result;
use crate::sphere::{Direction4, Vec4};
use crate::transforms::reflection_o;

pub trait SphereFn: Sync {
    fn eval(&self, theta: &Vec4) -> Result<f64>;
}

impl<F> SphereFn for F
where
    F: Fn(&Vec4) -> f64 + Sync,
{
    fn eval(&self, theta: &Vec4) -> Result<f64> {
        Ok(self(theta))
    }
}

/// Support function `h_K`.
#[derive(Clone, Copy)]
pub struct Support<'a>(pub &'a Body4);

impl SphereFn for Support<'_> {
    fn eval(&self, theta: &Vec4) -> Result<f64> {
        self.0.support(theta)
    }
}

/// Radial function `ρ_K`.
#[derive(Clone, Copy)]
pub struct Radial<'a>(pub &'a Body4);

impl SphereFn for Radial<'_> {
    fn eval(&self, theta: &Vec4) -> Result<f64> {
        self.0.radial(theta)
    }
}

/// `θ ↦ f(Mθ)`.
pub struct Composed<'a> {
    pub f: &'a dyn SphereFn,
    pub m: Matrix4<f64>,
}

impl SphereFn for Composed<'_> {
    fn eval(&self, theta: &Vec4) -> Result<f64> {
        self.f.eval(&(self.m * theta))
    }
}

/// `(f(θ) + f(𝒪θ)) / 2`.
pub struct EvenPart<'a> {
    pub f: &'a dyn SphereFn,
    pub o: Matrix4<f64>,
}

/// `(f(θ) − f(𝒪θ)) / 2`.
pub struct OddPart<'a> {
    pub f: &'a dyn SphereFn,
    pub o: Matrix4<f64>,
}

impl SphereFn for EvenPart<'_> {
    fn eval(&self, theta: &Vec4) -> Result<f64> {
        Ok(0.5 * (self.f.eval(theta)? + self.f.eval(&(self.o * theta))?))
    }
}

impl SphereFn for OddPart<'_> {
    fn eval(&self, theta: &Vec4) -> Result<f64> {
        Ok(0.5 * (self.f.eval(theta)? - self.f.eval(&(self.o * theta))?))
    }
}

/// Even and odd parts of `f` with respect to 𝒪 = 𝒪_ζ.
pub fn parity_decompose<'a>(f: &'a dyn SphereFn, zeta: &Direction4) -> (EvenPart<'a>, OddPart<'a>) {
    let o = *reflection_o(zeta).matrix();
    (EvenPart { f, o }, OddPart { f, o })
}
