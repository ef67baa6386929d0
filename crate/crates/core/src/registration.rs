//! Registration of two functions on a great sphere S²(w) under the rotations
//! that fix ζ (rotations about ζ) or flip it (half-turns about an axis of the
//! equator S²(w) ∩ S²(ζ)).
//!
//! A [`RotationWitness`] with rotation φ certifies `f∘φ ≈ g` on S²(w). In grid
//! coordinates a rotation about ζ by `a` is the azimuth shift `φ ↦ φ + a`, and
//! the half-turn about the axis at azimuth `σ` is `(t, φ) ↦ (−t, 2σ − φ)`, so
//! both searches reduce to circular correlations along latitude rings.

use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;
use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::func::SphereFn;
use crate::funk::{sample_on_sphere, GridFunction};
use crate::sphere::{Direction4, SphereFrame, SphereGrid, Vec4, DEFAULT_N_AZIMUTH, DEFAULT_N_T};
use crate::transforms::{AxisRotation, Orientation};

/// Angular distance (in units of π) within which a rotation angle is snapped
/// to 0 or π.
pub const SNAP_TOL: f64 = 1e-2;

/// Grid resolution used when sampling on S²(w).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n_t: usize,
    pub n_azimuth: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            n_t: DEFAULT_N_T,
            n_azimuth: DEFAULT_N_AZIMUTH,
        }
    }
}

impl GridSpec {
    pub fn build(&self, frame: SphereFrame) -> Result<SphereGrid> {
        SphereGrid::new(frame, self.n_t, self.n_azimuth)
    }
}

/// Second-best distinct candidate of a search.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunnerUp {
    pub parameter: f64,
    pub residual: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RotationWitness {
    pub frame: SphereFrame,
    pub orientation: Orientation,
    /// Rotation angle in `[0, 2π)` for `FixZeta`, axis azimuth in `[0, π)`
    /// for `FlipZeta`.
    pub parameter: f64,
    /// Best parameter on the integer-shift lattice, before refinement.
    pub grid_parameter: f64,
    /// `sup |f∘φ − g|` over the grid.
    pub residual: f64,
    pub runner_up: Option<RunnerUp>,
}

impl RotationWitness {
    pub fn rotation(&self) -> AxisRotation {
        AxisRotation {
            frame: self.frame,
            orientation: self.orientation,
            parameter: self.parameter,
        }
    }

    /// Rotation angle in units of π (fix family only).
    pub fn alpha(&self) -> Option<f64> {
        match self.orientation {
            Orientation::FixZeta => Some(self.parameter / PI),
            Orientation::FlipZeta => None,
        }
    }
}

struct Spectra {
    n: usize,
    rings: Vec<Vec<Complex<f64>>>,
}

fn spectra(f: &GridFunction, planner: &mut FftPlanner<f64>) -> Spectra {
    let n = f.grid().n_azimuth;
    let fft = planner.plan_fft_forward(n);
    let rings = (0..f.grid().n_t())
        .map(|i| {
            let mut buf: Vec<Complex<f64>> =
                f.ring(i).iter().map(|&v| Complex::new(v, 0.0)).collect();
            fft.process(&mut buf);
            buf
        })
        .collect();
    Spectra { n, rings }
}

/// Value, slope and curvature of the trigonometric objective
/// `S(a) = (1/n)[A₀ + 2Σ Re(A_k e^{ika}) + A_{n/2} cos(n a/2)]`, `0 < k < n/2`.
fn objective(a_half: &[Complex<f64>], n: usize, x: f64) -> (f64, f64, f64) {
    let m = n / 2;
    let mut s = a_half[0].re;
    let mut ds = 0.0;
    let mut dds = 0.0;
    for (k, ak) in a_half.iter().enumerate().take(m).skip(1) {
        let kf = k as f64;
        let e = Complex::from_polar(1.0, kf * x);
        let z = ak * e;
        s += 2.0 * z.re;
        ds -= 2.0 * kf * z.im;
        dds -= 2.0 * kf * kf * z.re;
    }
    let mf = m as f64;
    let (sn, cs) = (mf * x).sin_cos();
    s += a_half[m].re * cs;
    ds -= a_half[m].re * mf * sn;
    dds -= a_half[m].re * mf * mf * cs;
    let nf = n as f64;
    (s / nf, ds / nf, dds / nf)
}

/// Values of ring `src` after the continuous shift (fix) or reflection
/// (flip) with parameter `x`, reconstructed from its spectrum.
fn transformed_ring(
    spec: &[Complex<f64>],
    orientation: Orientation,
    x: f64,
    ifft: &dyn rustfft::Fft<f64>,
) -> Vec<f64> {
    let n = spec.len();
    let m = n / 2;
    let mut h = vec![Complex::new(0.0, 0.0); n];
    h[0] = spec[0];
    for k in 1..m {
        let kf = k as f64;
        let v = match orientation {
            Orientation::FixZeta => spec[k] * Complex::from_polar(1.0, kf * x),
            Orientation::FlipZeta => spec[k].conj() * Complex::from_polar(1.0, -kf * x),
        };
        h[k] = v;
        h[n - k] = v.conj();
    }
    h[m] = Complex::new(spec[m].re * (m as f64 * x).cos(), 0.0);
    ifft.process(&mut h);
    h.iter().map(|c| c.re / n as f64).collect()
}

fn source_ring(orientation: Orientation, n_t: usize, i: usize) -> usize {
    match orientation {
        Orientation::FixZeta => i,
        Orientation::FlipZeta => n_t - 1 - i,
    }
}

/// `sup |f∘φ − g|` for the integer shift `s`, read directly off the grid.
fn integer_residual(f: &GridFunction, g: &GridFunction, orientation: Orientation, s: usize) -> f64 {
    let n = f.grid().n_azimuth;
    let n_t = f.grid().n_t();
    let mut r: f64 = 0.0;
    for i in 0..n_t {
        let fr = f.ring(source_ring(orientation, n_t, i));
        let gr = g.ring(i);
        for j in 0..n {
            let src = match orientation {
                Orientation::FixZeta => (j + s) % n,
                Orientation::FlipZeta => (s + n - j) % n,
            };
            r = r.max((fr[src] - gr[j]).abs());
        }
    }
    r
}

fn check_pair(f: &GridFunction, g: &GridFunction, orientation: Orientation) -> Result<()> {
    if !f.grid().same_layout(g.grid()) || f.grid().frame != g.grid().frame {
        return Err(Error::GridMismatch);
    }
    if orientation == Orientation::FlipZeta && !f.grid().rings_symmetric() {
        return Err(Error::AsymmetricRings);
    }
    Ok(())
}

fn register(f: &GridFunction, g: &GridFunction, orientation: Orientation) -> Result<RotationWitness> {
    check_pair(f, g, orientation)?;
    let n = f.grid().n_azimuth;
    let n_t = f.grid().n_t();
    let m = n / 2;
    let step = TAU / n as f64;
    let mut planner = FftPlanner::new();
    let fs = spectra(f, &mut planner);
    let gs = spectra(g, &mut planner);
    debug_assert_eq!(fs.n, n);

    let mut acc = vec![Complex::new(0.0, 0.0); n];
    for i in 0..n_t {
        let fr = &fs.rings[source_ring(orientation, n_t, i)];
        let gr = &gs.rings[i];
        for k in 0..n {
            acc[k] += match orientation {
                Orientation::FixZeta => fr[k] * gr[k].conj(),
                Orientation::FlipZeta => fr[k] * gr[k],
            };
        }
    }
    let a_half: Vec<Complex<f64>> = acc[..=m].to_vec();
    let ifft = planner.plan_fft_inverse(n);
    let mut corr = acc.clone();
    ifft.process(&mut corr);
    let c: Vec<f64> = corr.iter().map(|z| z.re / n as f64).collect();

    let energy: f64 = f.values().iter().chain(g.values()).map(|v| v * v).sum();
    let tie = 1e-12 * energy.max(f64::MIN_POSITIVE);
    let cmax = c.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let cmin = c.iter().cloned().fold(f64::INFINITY, f64::min);
    let best = c.iter().position(|&v| v >= cmax - tie).unwrap_or(0);
    let flat = cmax - cmin <= tie;

    // Angle of the objective variable; half of it is the flip axis azimuth.
    let to_param = |x: f64| match orientation {
        Orientation::FixZeta => x.rem_euclid(TAU),
        Orientation::FlipZeta => (0.5 * x).rem_euclid(PI),
    };

    let int_res = integer_residual(f, g, orientation, best);
    let grid_x = best as f64 * step;
    let mut x_best = grid_x;
    let mut res_best = int_res;
    if !flat {
        let cm = c[(best + n - 1) % n];
        let cp = c[(best + 1) % n];
        let denom = cm - 2.0 * c[best] + cp;
        let delta = if denom < 0.0 {
            (0.5 * (cm - cp) / denom).clamp(-0.5, 0.5)
        } else {
            0.0
        };
        let mut x = grid_x + delta * step;
        for _ in 0..50 {
            let (_, d1, d2) = objective(&a_half, n, x);
            if d2 >= 0.0 {
                break;
            }
            let dx = -d1 / d2;
            let next = (x + dx).clamp(grid_x - step, grid_x + step);
            let moved = (next - x).abs();
            x = next;
            if moved < 1e-15 {
                break;
            }
        }
        let mut res: f64 = 0.0;
        for i in 0..n_t {
            let vals = transformed_ring(&fs.rings[source_ring(orientation, n_t, i)], orientation, x, &*ifft);
            for (v, gv) in vals.iter().zip(g.ring(i)) {
                res = res.max((v - gv).abs());
            }
        }
        if res < res_best {
            res_best = res;
            x_best = x;
        }
    }

    let runner_up = {
        let near = |s: usize| {
            let d = (s + n - best) % n;
            d <= 1 || d >= n - 1
        };
        let mut cand: Option<usize> = None;
        for s in 0..n {
            if near(s) {
                continue;
            }
            let l = c[(s + n - 1) % n];
            let r = c[(s + 1) % n];
            if c[s] >= l && c[s] >= r && cand.is_none_or(|b| c[s] > c[b] + tie) {
                cand = Some(s);
            }
        }
        cand.map(|s| RunnerUp {
            parameter: to_param(s as f64 * step),
            residual: integer_residual(f, g, orientation, s),
        })
    };

    Ok(RotationWitness {
        frame: f.grid().frame,
        orientation,
        parameter: to_param(x_best),
        grid_parameter: to_param(grid_x),
        residual: res_best,
        runner_up,
    })
}

/// Best rotation about ζ with `f∘φ ≈ g`.
pub fn register_fix_zeta(f: &GridFunction, g: &GridFunction) -> Result<RotationWitness> {
    register(f, g, Orientation::FixZeta)
}

/// Best half-turn about an axis of S²(w) ∩ S²(ζ) with `f∘φ ≈ g`.
pub fn register_flip_zeta(f: &GridFunction, g: &GridFunction) -> Result<RotationWitness> {
    register(f, g, Orientation::FlipZeta)
}

/// `sup |f∘φ − g|` over the grid points, evaluated with the callables.
pub fn exact_residual(
    f: &dyn SphereFn,
    g: &GridFunction,
    rotation: &AxisRotation,
) -> Result<f64> {
    use rayon::prelude::*;
    let grid = g.grid();
    let m = *rotation.matrix().matrix();
    let n = grid.n_azimuth;
    let rows: Vec<f64> = (0..grid.n_t())
        .into_par_iter()
        .map(|i| -> Result<f64> {
            let mut r: f64 = 0.0;
            for j in 0..n {
                let p: Vec4 = m * grid.point_unchecked(i, j);
                r = r.max((f.eval(&p)? - g.get(i, j)).abs());
            }
            Ok(r)
        })
        .collect::<Result<_>>()?;
    Ok(rows.into_iter().fold(0.0, f64::max))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Label {
    /// Rotation about ζ by `alpha·π`.
    Xi { alpha: f64 },
    /// Half-turn flipping ζ, axis at the given azimuth.
    Psi { axis_azimuth: f64 },
    None,
}

impl Label {
    pub fn name(&self) -> String {
        match self {
            Label::Xi { alpha } => format!("Xi({alpha})"),
            Label::Psi { axis_azimuth } => format!("Psi({axis_azimuth})"),
            Label::None => "None".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub w: Direction4,
    pub label: Label,
    pub witness: RotationWitness,
    /// Best witness of the other family.
    pub alternative: RotationWitness,
    pub tol: f64,
    /// `max(sup|f|, sup|g|)` on the grid.
    pub signal: f64,
    /// Two distinct half-turn axes both register within `tol`.
    pub symmetry_violation: bool,
    /// The angle stayed away from 0 and π, which is only consistent with
    /// both functions vanishing on S²(w).
    pub expect_zero: bool,
}

/// Maps `alpha ∈ [0, 2)` to 0 or 1 when within [`SNAP_TOL`].
pub fn snap_alpha(alpha: f64) -> f64 {
    let a = alpha.rem_euclid(2.0);
    if a < SNAP_TOL || 2.0 - a < SNAP_TOL {
        0.0
    } else if (a - 1.0).abs() < SNAP_TOL {
        1.0
    } else {
        a
    }
}

/// Re-scores a grid witness with the callables; keeps the better of the
/// refined and lattice parameters. Lattice rotations map the grid onto
/// itself, so their residual is read off the samples.
fn rescore(
    f: &dyn SphereFn,
    fg: &GridFunction,
    g: &GridFunction,
    w: RotationWitness,
) -> Result<RotationWitness> {
    let refined = exact_residual(f, g, &w.rotation())?;
    if w.parameter == w.grid_parameter {
        return Ok(RotationWitness { residual: refined, ..w });
    }
    let n = g.grid().n_azimuth;
    let x = match w.orientation {
        Orientation::FixZeta => w.grid_parameter,
        Orientation::FlipZeta => 2.0 * w.grid_parameter,
    };
    let s = (x / g.grid().azimuth_step()).round() as usize % n;
    let lattice = integer_residual(fg, g, w.orientation, s);
    Ok(if lattice <= refined {
        RotationWitness {
            parameter: w.grid_parameter,
            residual: lattice,
            ..w
        }
    } else {
        RotationWitness { residual: refined, ..w }
    })
}

/// Samples `f`, `g` on S²(w) and labels `w` by the best witness under `tol`
/// (absolute).
pub fn classify_direction(
    f: &dyn SphereFn,
    g: &dyn SphereFn,
    frame: &SphereFrame,
    grid: GridSpec,
    tol: f64,
) -> Result<Classification> {
    let grid = Arc::new(grid.build(*frame)?);
    let fg = sample_on_sphere(f, &grid)?;
    let gg = sample_on_sphere(g, &grid)?;
    let fix = rescore(f, &fg, &gg, register_fix_zeta(&fg, &gg)?)?;
    let flip = rescore(f, &fg, &gg, register_flip_zeta(&fg, &gg)?)?;
    let signal = fg.sup_norm().max(gg.sup_norm());
    let symmetry_violation = flip.residual <= tol
        && flip.runner_up.is_some_and(|r| r.residual <= tol);
    let (witness, alternative) = if fix.residual <= flip.residual {
        (fix, flip)
    } else {
        (flip, fix)
    };
    let mut expect_zero = false;
    let label = if witness.residual > tol {
        Label::None
    } else {
        match witness.orientation {
            Orientation::FixZeta => {
                let alpha = snap_alpha(witness.parameter / PI);
                expect_zero = alpha != 0.0 && alpha != 1.0;
                Label::Xi { alpha }
            }
            Orientation::FlipZeta => Label::Psi {
                axis_azimuth: witness.parameter,
            },
        }
    };
    Ok(Classification {
        w: frame.w,
        label,
        witness,
        alternative,
        tol,
        signal,
        symmetry_violation,
        expect_zero,
    })
}

/// Whether `f∘φ = f` on S²(ξ) for the rotation φ by `alpha·π` about ζ.
pub fn detect_zeta_symmetry(
    f: &dyn SphereFn,
    xi: &Direction4,
    zeta: &Direction4,
    alpha: f64,
    grid: GridSpec,
    tol: f64,
) -> Result<bool> {
    Ok(zeta_symmetry_residual(f, xi, zeta, alpha, grid)? <= tol)
}

/// `sup |f∘φ − f|` on the grid over S²(ξ).
pub fn zeta_symmetry_residual(
    f: &dyn SphereFn,
    xi: &Direction4,
    zeta: &Direction4,
    alpha: f64,
    grid: GridSpec,
) -> Result<f64> {
    let frame = SphereFrame::new(*zeta, *xi)?;
    if alpha.rem_euclid(2.0) == 0.0 {
        return Ok(0.0);
    }
    let grid = Arc::new(grid.build(frame)?);
    let fg = sample_on_sphere(f, &grid)?;
    let rot = crate::transforms::rotation_fixing_zeta(&frame, alpha);
    exact_residual(f, &fg, &rot)
}

/// A half-turn symmetry `f∘φ = f` found on S²(w).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PiSymmetry {
    pub axis_azimuth: f64,
    pub residual: f64,
    /// A second, distinct axis also works (e.g. rotation-invariant `f`).
    pub degenerate: bool,
}

/// Best half-turn axis `u` of S²(w) ∩ S²(ζ) with `f∘φ_u = f`, if within `tol`.
pub fn detect_u_pi_symmetry(
    f: &dyn SphereFn,
    frame: &SphereFrame,
    grid: GridSpec,
    tol: f64,
) -> Result<Option<PiSymmetry>> {
    let grid = Arc::new(grid.build(*frame)?);
    let fg = sample_on_sphere(f, &grid)?;
    let w = rescore(f, &fg, &fg, register_flip_zeta(&fg, &fg)?)?;
    if w.residual > tol {
        return Ok(None);
    }
    Ok(Some(PiSymmetry {
        axis_azimuth: w.parameter,
        residual: w.residual,
        degenerate: w.runner_up.is_some_and(|r| r.residual <= tol),
    }))
}

/// CSV rows `w1,w2,w3,w4,label,parameter,residual`.
pub fn classifications_csv(rows: &[Classification]) -> String {
    let mut s = String::from("w1,w2,w3,w4,label,parameter,residual\n");
    for c in rows {
        let w = c.w.vec();
        let label = match c.label {
            Label::Xi { .. } => "Xi",
            Label::Psi { .. } => "Psi",
            Label::None => "None",
        };
        let _ = writeln!(
            s,
            "{:.16e},{:.16e},{:.16e},{:.16e},{},{:.16e},{:.16e}",
            w[0], w[1], w[2], w[3], label, c.witness.parameter, c.witness.residual
        );
    }
    s
}
