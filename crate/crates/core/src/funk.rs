//! Grid sampling, parity decomposition with respect to 𝒪, and the Funk
//! transform on S²(ζ).
//!
//! For a function `f` on S³ and a height `t`, `F_t(x) = f(√(1−t²)x + tζ)` is
//! the restriction of `f` to the parallel S²_t(ζ), viewed as a function on
//! S²(ζ). The Funk transform integrates `F_t` over the great circle
//! S²(w) ∩ S²(ζ) with arclength measure (total length 2π).

use std::fmt::Write as _;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::func::{parity_decompose, SphereFn};
use crate::sphere::{
    circle_quadrature, great_circle_nodes, quasi_uniform_great_sphere, Direction4, SphereFrame,
    SphereGrid, Vec4,
};
use crate::transforms::reflection_o;

/// Samples on a [`SphereGrid`], row-major by latitude ring.
#[derive(Clone, Debug)]
pub struct GridFunction {
    grid: Arc<SphereGrid>,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(grid: Arc<SphereGrid>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "expected {} values, got {}",
                grid.len(),
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidGrid("non-finite sample".into()));
        }
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &Arc<SphereGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn ring(&self, i: usize) -> &[f64] {
        let n = self.grid.n_azimuth;
        &self.values[i * n..(i + 1) * n]
    }

    pub fn get(&self, i_t: usize, j_az: usize) -> f64 {
        self.values[i_t * self.grid.n_azimuth + j_az]
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `sup |self − other|` on a shared grid.
    pub fn sup_distance(&self, other: &GridFunction) -> Result<f64> {
        if !self.grid.same_layout(&other.grid) {
            return Err(Error::GridMismatch);
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs())))
    }

    /// CSV rows `t,azimuth,value` with 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("t,azimuth,value\n");
        for i in 0..self.grid.n_t() {
            for j in 0..self.grid.n_azimuth {
                let _ = writeln!(
                    s,
                    "{:.16e},{:.16e},{:.16e}",
                    self.grid.t_nodes[i],
                    self.grid.azimuth(j),
                    self.get(i, j)
                );
            }
        }
        s
    }
}

/// `values[i][j] = f(grid_point(i, j))`.
pub fn sample_on_sphere(f: &dyn SphereFn, grid: &Arc<SphereGrid>) -> Result<GridFunction> {
    let n = grid.n_azimuth;
    let rows: Vec<Vec<f64>> = (0..grid.n_t())
        .into_par_iter()
        .map(|i| {
            (0..n)
                .map(|j| f.eval(&grid.point_unchecked(i, j)))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;
    GridFunction::new(grid.clone(), rows.concat())
}

/// Even and odd parts (with respect to 𝒪) sampled on one grid.
#[derive(Clone, Debug)]
pub struct ParityPair {
    pub even: GridFunction,
    pub odd: GridFunction,
}

impl ParityPair {
    pub fn sample(f: &dyn SphereFn, grid: &Arc<SphereGrid>) -> Result<Self> {
        let (e, o) = parity_decompose(f, &grid.frame.zeta);
        Ok(Self {
            even: sample_on_sphere(&e, grid)?,
            odd: sample_on_sphere(&o, grid)?,
        })
    }
}

/// `R_ζ F(w) = ∫_{S²(w)∩S²(ζ)} F`, trapezoidal rule with `n` nodes.
pub fn funk_transform(f: &dyn SphereFn, zeta: &Direction4, w: &Direction4, n: usize) -> Result<f64> {
    let frame = SphereFrame::new(*zeta, *w)?;
    funk_transform_in_frame(f, &frame, n)
}

fn funk_transform_in_frame(f: &dyn SphereFn, frame: &SphereFrame, n: usize) -> Result<f64> {
    let values = great_circle_nodes(frame, n)
        .iter()
        .map(|p| f.eval(p.vec()))
        .collect::<Result<Vec<f64>>>()?;
    circle_quadrature(&values)
}

/// Outcome of comparing the 𝒪-even parts of two functions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvenPartReport {
    /// Both checks pass.
    pub equal: bool,
    /// `|R F_t(w) − R G_t(w)| ≤ 2π·tol` for every sampled `(t, w)`.
    pub transform_ok: bool,
    /// `|f_e − g_e| ≤ tol` at every sampled point.
    pub direct_ok: bool,
    pub transform_deviation: f64,
    pub direct_deviation: f64,
    /// Largest transform deviation per latitude, aligned with the `t` nodes.
    pub transform_deviation_by_t: Vec<f64>,
}

/// Default spread of great circles on S²(ζ).
pub fn default_w_nodes(zeta: &Direction4) -> Vec<Direction4> {
    quasi_uniform_great_sphere(zeta, 128)
}

/// Compares `f_e` and `g_e` two ways on the points `√(1−t²)x + tζ`, `x` on the
/// great circles S²(w) ∩ S²(ζ): through the Funk transforms of `F_t`, `G_t`
/// and directly.
pub fn even_parts_equal(
    f: &dyn SphereFn,
    g: &dyn SphereFn,
    zeta: &Direction4,
    t_nodes: &[f64],
    w_nodes: &[Direction4],
    n_circle: usize,
    tol: f64,
) -> Result<EvenPartReport> {
    if t_nodes.is_empty() || w_nodes.is_empty() || n_circle == 0 {
        return Err(Error::EmptyInput);
    }
    let o = *reflection_o(zeta).matrix();
    let frames = w_nodes
        .iter()
        .map(|w| SphereFrame::new(*zeta, *w))
        .collect::<Result<Vec<_>>>()?;
    let per_t: Vec<(f64, f64)> = t_nodes
        .par_iter()
        .map(|&t| -> Result<(f64, f64)> {
            let r = (1.0 - t * t).max(0.0).sqrt();
            let mut transform_dev: f64 = 0.0;
            let mut direct_dev: f64 = 0.0;
            for frame in &frames {
                let mut fv = Vec::with_capacity(n_circle);
                let mut gv = Vec::with_capacity(n_circle);
                for x in great_circle_nodes(frame, n_circle) {
                    let p: Vec4 = x.vec() * r + zeta.vec() * t;
                    let op = o * p;
                    let (f0, f1) = (f.eval(&p)?, f.eval(&op)?);
                    let (g0, g1) = (g.eval(&p)?, g.eval(&op)?);
                    direct_dev = direct_dev.max((0.5 * (f0 + f1) - 0.5 * (g0 + g1)).abs());
                    fv.push(f0);
                    gv.push(g0);
                }
                let d = (circle_quadrature(&fv)? - circle_quadrature(&gv)?).abs();
                transform_dev = transform_dev.max(d);
            }
            Ok((transform_dev, direct_dev))
        })
        .collect::<Result<_>>()?;
    let transform_deviation = per_t.iter().map(|p| p.0).fold(0.0, f64::max);
    let direct_deviation = per_t.iter().map(|p| p.1).fold(0.0, f64::max);
    let transform_ok = transform_deviation <= std::f64::consts::TAU * tol;
    let direct_ok = direct_deviation <= tol;
    Ok(EvenPartReport {
        equal: transform_ok && direct_ok,
        transform_ok,
        direct_ok,
        transform_deviation,
        direct_deviation,
        transform_deviation_by_t: per_t.iter().map(|p| p.0).collect(),
    })
}
