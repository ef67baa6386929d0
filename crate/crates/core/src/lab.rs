//! Polytope experiments: Hausdorff distance, inscribed approximation of
//! smooth bodies, 3D projections of 4-polytopes and their rigid symmetries.

use std::collections::HashSet;

use nalgebra::{Matrix3, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bodies::{Body4, BodyKind};
use crate::error::{Error, Result};
use crate::hull::{affine_rank, dedup_points, extreme_points3, scale_of};
use crate::sphere::{complete_basis, quasi_uniform_s3, Vec4};
use crate::synthetic::random_orthogonal;

/// `δ(K, L) = max_θ |h_K(θ) − h_L(θ)|`: the maximum over `n_sample`
/// quasi-uniform directions, refined by pattern search from the best few.
pub fn hausdorff_distance(k: &Body4, l: &Body4, n_sample: usize) -> Result<f64> {
    if n_sample == 0 {
        return Err(Error::EmptyInput);
    }
    let gap = |x: &Vec4| -> Result<f64> {
        let t = x.normalize();
        Ok((k.support(&t)? - l.support(&t)?).abs())
    };
    let pts = quasi_uniform_s3(n_sample);
    let mut vals: Vec<(f64, Vec4)> = pts
        .par_iter()
        .map(|p| Ok((gap(p.vec())?, *p.vec())))
        .collect::<Result<_>>()?;
    vals.sort_by(|a, b| b.0.total_cmp(&a.0));
    let spacing = (2.0 * std::f64::consts::PI.powi(2) / n_sample as f64).cbrt();
    let refined: Vec<f64> = vals
        .par_iter()
        .take(8)
        .map(|(v, p)| pattern_ascent(&gap, *p, *v, spacing))
        .collect::<Result<_>>()?;
    Ok(refined.into_iter().fold(vals[0].0, f64::max))
}

fn pattern_ascent(
    f: &(dyn Fn(&Vec4) -> Result<f64> + Sync),
    mut x: Vec4,
    mut fx: f64,
    mut step: f64,
) -> Result<f64> {
    while step > 1e-9 {
        let basis = complete_basis(&[x], 3);
        let mut improved = false;
        for b in &basis {
            for s in [step, -step] {
                let y = (x + b * s).normalize();
                let fy = f(&y)?;
                if fy > fx {
                    x = y;
                    fx = fy;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    Ok(fx)
}

/// Polytope with `v` vertices on the boundary of a smooth convex body.
///
/// Vertices are support points `x_K(u)`, spread by farthest-point selection
/// among candidate normals followed by Lloyd iterations, distances measured
/// between boundary points.
pub fn inscribe_polytope(k: &Body4, v: usize, seed: u64) -> Result<Body4> {
    if !k.is_smooth() {
        return Err(Error::UnsupportedKind("inscribed polytopes need a smooth body".into()));
    }
    if v < 5 {
        return Err(Error::InvalidBody(format!("need at least 5 vertices, got {v}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_cand = (40 * v).max(4000);
    // Random rotation of the candidate cloud decorrelates runs with different seeds.
    let rot = random_orthogonal(&mut rng);
    let normals: Vec<Vec4> = quasi_uniform_s3(n_cand)
        .iter()
        .map(|p| rot.apply(p.vec()))
        .collect();
    let cand: Vec<Vec4> = normals.par_iter().map(|u| k.support_point(u)).collect();

    // farthest-point selection
    let first = rng.gen_range(0..n_cand);
    let mut chosen = vec![first];
    let mut dist: Vec<f64> = cand.iter().map(|p| (p - cand[first]).norm_squared()).collect();
    while chosen.len() < v {
        let (idx, _) = dist
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |b, (i, d)| if *d > b.1 { (i, *d) } else { b });
        chosen.push(idx);
        let c = cand[idx];
        dist.par_iter_mut()
            .zip(cand.par_iter())
            .for_each(|(d, p)| *d = d.min((p - c).norm_squared()));
    }

    // Lloyd: each vertex moves to the support point of the mean normal of its cell
    let mut centers: Vec<Vec4> = chosen.iter().map(|&i| normals[i]).collect();
    for _ in 0..8 {
        let pts: Vec<Vec4> = centers.iter().map(|u| k.support_point(u)).collect();
        let owner: Vec<usize> = cand
            .par_iter()
            .map(|p| {
                let mut best = (0, f64::INFINITY);
                for (j, q) in pts.iter().enumerate() {
                    let d = (p - q).norm_squared();
                    if d < best.1 {
                        best = (j, d);
                    }
                }
                best.0
            })
            .collect();
        let mut sums = vec![Vec4::zeros(); v];
        for (i, &o) in owner.iter().enumerate() {
            sums[o] += normals[i];
        }
        for (c, s) in centers.iter_mut().zip(&sums) {
            if s.norm() > 1e-12 {
                *c = s.normalize();
            }
        }
    }
    let verts: Vec<Vec4> = centers.iter().map(|u| k.support_point(u)).collect();
    Body4::polytope(BodyKind::Convex, verts)
}

/// Least-squares fit of `log δ = c + e·log v`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    pub exponent: f64,
    pub stderr: f64,
    pub intercept: f64,
    /// `(v, δ)` per polytope size.
    pub points: Vec<(usize, f64)>,
}

/// Sample size used for δ in the rate experiment.
pub const RATE_SAMPLES: usize = 20_000;

pub fn approximation_rate(k: &Body4, v_list: &[usize], seed: u64) -> Result<RateFit> {
    if v_list.len() < 4 {
        return Err(Error::InsufficientData(format!(
            "need at least 4 polytope sizes, got {}",
            v_list.len()
        )));
    }
    let mut points = Vec::with_capacity(v_list.len());
    for &v in v_list {
        let p = inscribe_polytope(k, v, seed)?;
        points.push((v, hausdorff_distance(k, &p, RATE_SAMPLES)?));
    }
    let xs: Vec<f64> = points.iter().map(|p| (p.0 as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let (exponent, intercept, stderr) = fit_line(&xs, &ys)?;
    Ok(RateFit {
        exponent,
        stderr,
        intercept,
        points,
    })
}

fn fit_line(xs: &[f64], ys: &[f64]) -> Result<(f64, f64, f64)> {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx <= 0.0 {
        return Err(Error::InsufficientData("polytope sizes must differ".into()));
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let stderr = if xs.len() > 2 {
        (sse / (n - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    Ok((slope, intercept, stderr))
}

/// Vertices of a 3D projection `P|H`, in the coordinates of an orthonormal
/// basis of `H`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Polytope3 {
    pub basis: [[f64; 4]; 3],
    pub vertices: Vec<[f64; 3]>,
}

impl Polytope3 {
    /// Polytope from 3D points; non-extreme points are dropped.
    pub fn from_points(basis: [Vec4; 3], points: &[Vector3<f64>]) -> Result<Self> {
        let scale = scale_of(points);
        let (pts, _) = dedup_points(points, 1e-10 * scale);
        let rank = affine_rank(&pts, 1e-10);
        if rank < 3 {
            return Err(Error::DegenerateProjection(rank));
        }
        let ext = extreme_points3(&pts);
        Ok(Self {
            basis: basis.map(Into::into),
            vertices: ext.iter().map(|&i| pts[i].into()).collect(),
        })
    }

    pub fn points(&self) -> Vec<Vector3<f64>> {
        self.vertices.iter().map(|v| Vector3::from(*v)).collect()
    }

    pub fn support(&self, x: &Vector3<f64>) -> f64 {
        self.points()
            .iter()
            .map(|v| v.dot(x))
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

fn check_basis(h: &[Vec4; 3]) -> Result<()> {
    for i in 0..3 {
        for j in 0..3 {
            let target = if i == j { 1.0 } else { 0.0 };
            let d = h[i].dot(&h[j]) - target;
            if d.abs() > 1e-10 {
                return Err(Error::NotOrthogonal(d));
            }
        }
    }
    Ok(())
}

/// `P|H` for `H` spanned by the orthonormal rows of `h`.
pub fn project_polytope(p: &Body4, h: &[Vec4; 3]) -> Result<Polytope3> {
    check_basis(h)?;
    let verts = p
        .vertices()
        .ok_or_else(|| Error::UnsupportedKind("projection of a non-polytope".into()))?;
    let pts: Vec<Vector3<f64>> = verts
        .iter()
        .map(|v| Vector3::new(h[0].dot(v), h[1].dot(v), h[2].dot(v)))
        .collect();
    Polytope3::from_points(*h, &pts)
}

/// `q_i = φ(q_{j(i)}) + a` for all vertices `i`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymmetryRecord {
    /// Row-major 3×3 orthogonal matrix.
    pub phi: [[f64; 3]; 3],
    pub a: [f64; 3],
    pub permutation: Vec<usize>,
}

impl SymmetryRecord {
    pub fn matrix(&self) -> Matrix3<f64> {
        Matrix3::from_fn(|r, c| self.phi[r][c])
    }

    /// `max_i |φ(q_{j(i)}) + a − q_i|`.
    pub fn residual(&self, q: &Polytope3) -> f64 {
        let m = self.matrix();
        let a = Vector3::from(self.a);
        let pts = q.points();
        pts.iter()
            .enumerate()
            .map(|(i, qi)| (m * pts[self.permutation[i]] + a - qi).norm())
            .fold(0.0, f64::max)
    }
}

fn nearest_orthogonal(m: &Matrix3<f64>) -> Option<Matrix3<f64>> {
    let svd = m.svd(true, true);
    Some(svd.u? * svd.v_t?)
}

/// Linearly independent centered base vertices, chosen for conditioning.
fn base_triple(p: &[Vector3<f64>]) -> [usize; 3] {
    let norm = |i: usize| p[i].norm();
    let i0 = (0..p.len()).max_by(|&a, &b| norm(a).total_cmp(&norm(b))).unwrap_or(0);
    let cross = |i: usize| p[i0].cross(&p[i]).norm();
    let i1 = (0..p.len()).max_by(|&a, &b| cross(a).total_cmp(&cross(b))).unwrap_or(0);
    let det = |i: usize| Matrix3::from_columns(&[p[i0], p[i1], p[i]]).determinant().abs();
    let i2 = (0..p.len()).max_by(|&a, &b| det(a).total_cmp(&det(b))).unwrap_or(0);
    [i0, i1, i2]
}

/// Maps vertex `i` to the vertex matching `φ p_i` within `tol`; `None` unless
/// this is a bijection.
fn vertex_map(p: &[Vector3<f64>], phi: &Matrix3<f64>, tol: f64) -> Option<Vec<usize>> {
    let mut image = Vec::with_capacity(p.len());
    let mut used = vec![false; p.len()];
    for pi in p {
        let q = phi * pi;
        let k = (0..p.len()).find(|&k| !used[k] && (p[k] - q).norm() <= tol)?;
        used[k] = true;
        image.push(k);
    }
    Some(image)
}

/// All non-identity `(φ, a)` with `φ(Q) + a = Q`, φ ∈ O(3).
pub fn detect_rigid_symmetries(q: &Polytope3, tol: f64) -> Result<Vec<SymmetryRecord>> {
    let pts = q.points();
    let n = pts.len();
    if n < 4 {
        return Err(Error::TooFewVertices(n));
    }
    let c = pts.iter().sum::<Vector3<f64>>() / n as f64;
    let p: Vec<Vector3<f64>> = pts.iter().map(|x| x - c).collect();
    let [i0, i1, i2] = base_triple(&p);
    let base = Matrix3::from_columns(&[p[i0], p[i1], p[i2]]);
    let base_inv = base
        .try_inverse()
        .ok_or_else(|| Error::DegenerateProjection(affine_rank(&pts, 1e-10)))?;
    let r: Vec<f64> = p.iter().map(|x| x.norm()).collect();
    let d = |a: usize, b: usize| (p[a] - p[b]).norm();

    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut out = Vec::new();
    for j0 in (0..n).filter(|&j| (r[j] - r[i0]).abs() <= tol) {
        for j1 in (0..n).filter(|&j| {
            j != j0 && (r[j] - r[i1]).abs() <= tol && (d(j, j0) - d(i1, i0)).abs() <= 2.0 * tol
        }) {
            for j2 in (0..n).filter(|&j| {
                j != j0
                    && j != j1
                    && (r[j] - r[i2]).abs() <= tol
                    && (d(j, j0) - d(i2, i0)).abs() <= 2.0 * tol
                    && (d(j, j1) - d(i2, i1)).abs() <= 2.0 * tol
            }) {
                let target = Matrix3::from_columns(&[p[j0], p[j1], p[j2]]);
                let Some(phi) = nearest_orthogonal(&(target * base_inv)) else {
                    continue;
                };
                let Some(image) = vertex_map(&p, &phi, tol) else {
                    continue;
                };
                if image.iter().enumerate().all(|(i, &k)| i == k) || !seen.insert(image.clone()) {
                    continue;
                }
                // q_k = φ(q_{j(k)}) + a with j the inverse of the image map
                let mut perm = vec![0; n];
                for (i, &k) in image.iter().enumerate() {
                    perm[k] = i;
                }
                let a = c - phi * c;
                out.push(SymmetryRecord {
                    phi: [0, 1, 2].map(|row| [phi[(row, 0)], phi[(row, 1)], phi[(row, 2)]]),
                    a: a.into(),
                    permutation: perm,
                });
            }
        }
    }
    Ok(out)
}

/// Smallest vertex-set mismatch `max_i min_k |φ p_i − p_k|` over orthogonal
/// maps sending the base triple to any other ordered triple of (centered)
/// vertices. Positive margin beyond the tolerance certifies asymmetry.
pub fn symmetry_margin(q: &Polytope3) -> Result<f64> {
    let pts = q.points();
    let n = pts.len();
    if n < 4 {
        return Err(Error::TooFewVertices(n));
    }
    let c = pts.iter().sum::<Vector3<f64>>() / n as f64;
    let p: Vec<Vector3<f64>> = pts.iter().map(|x| x - c).collect();
    let [i0, i1, i2] = base_triple(&p);
    let base_inv = Matrix3::from_columns(&[p[i0], p[i1], p[i2]])
        .try_inverse()
        .ok_or(Error::DegenerateProjection(2))?;
    let margin = (0..n)
        .into_par_iter()
        .map(|j0| {
            let mut best = f64::INFINITY;
            for j1 in (0..n).filter(|&j| j != j0) {
                for j2 in (0..n).filter(|&j| j != j0 && j != j1) {
                    if (j0, j1, j2) == (i0, i1, i2) {
                        continue;
                    }
                    let t = Matrix3::from_columns(&[p[j0], p[j1], p[j2]]);
                    let Some(phi) = nearest_orthogonal(&(t * base_inv)) else {
                        continue;
                    };
                    let mut worst: f64 = 0.0;
                    for pi in &p {
                        let y = phi * pi;
                        let near = p.iter().map(|pk| (pk - y).norm()).fold(f64::INFINITY, f64::min);
                        worst = worst.max(near);
                        if worst >= best {
                            break;
                        }
                    }
                    best = best.min(worst);
                }
            }
            best
        })
        .reduce(|| f64::INFINITY, f64::min);
    Ok(margin)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubspaceCertificate {
    pub basis: [[f64; 4]; 3],
    pub min_symmetry_residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsymmetryCertificate {
    pub delta: f64,
    pub epsilon_final: f64,
    pub iterations: usize,
    pub subspaces: Vec<SubspaceCertificate>,
}

/// Random 3D subspaces of ℝ⁴ as orthonormal row triples.
pub fn random_subspaces(n: usize, seed: u64) -> Vec<[Vec4; 3]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let q = random_orthogonal(&mut rng);
            let m = q.matrix();
            [m.column(0).into_owned(), m.column(1).into_owned(), m.column(2).into_owned()]
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PerturbOptions {
    pub subspaces: usize,
    pub tol: f64,
    /// Bound on `δ(P, P′)`; defaults to `1e−2·diam(P)`.
    pub max_delta: Option<f64>,
    pub budget: usize,
    pub seed: u64,
}

impl Default for PerturbOptions {
    fn default() -> Self {
        Self {
            subspaces: 50,
            tol: 1e-8,
            max_delta: None,
            budget: 30,
            seed: 0,
        }
    }
}

fn asymmetric_everywhere(p: &Body4, hs: &[[Vec4; 3]], tol: f64) -> Result<bool> {
    let results: Vec<bool> = hs
        .par_iter()
        .map(|h| Ok(detect_rigid_symmetries(&project_polytope(p, h)?, tol)?.is_empty()))
        .collect::<Result<_>>()?;
    Ok(results.into_iter().all(|b| b))
}

fn certificate(
    p: &Body4,
    p2: &Body4,
    hs: &[[Vec4; 3]],
    eps: f64,
    iterations: usize,
) -> Result<AsymmetryCertificate> {
    let subspaces = hs
        .par_iter()
        .map(|h| {
            Ok(SubspaceCertificate {
                basis: h.map(Into::into),
                min_symmetry_residual: symmetry_margin(&project_polytope(p2, h)?)?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(AsymmetryCertificate {
        delta: hausdorff_distance(p, p2, 4096)?,
        epsilon_final: eps,
        iterations,
        subspaces,
    })
}

fn diameter_of(v: &[Vec4]) -> f64 {
    let mut d: f64 = 0.0;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            d = d.max((v[i] - v[j]).norm());
        }
    }
    d
}

/// Random radial vertex perturbation removing rigid symmetries from the
/// projections onto `opts.subspaces` random 3D subspaces.
pub fn perturb_to_asymmetric(p: &Body4, opts: &PerturbOptions) -> Result<(Body4, AsymmetryCertificate)> {
    let verts = p
        .vertices()
        .ok_or_else(|| Error::UnsupportedKind("perturbation of a non-polytope".into()))?;
    let hs = random_subspaces(opts.subspaces, opts.seed);
    if asymmetric_everywhere(p, &hs, opts.tol)? {
        let cert = certificate(p, p, &hs, 0.0, 0)?;
        return Ok((p.clone(), cert));
    }
    let diam = diameter_of(&verts);
    let bound = opts.max_delta.unwrap_or(1e-2 * diam);
    let centroid = verts.iter().sum::<Vec4>() / verts.len() as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut eps = 1e-2 * diam;
    for it in 1..=opts.budget {
        let moved: Vec<Vec4> = verts
            .iter()
            .map(|v| {
                let dir = (v - centroid).normalize();
                v + dir * (eps * rng.gen_range(-1.0..1.0))
            })
            .collect();
        let cand = Body4::polytope(BodyKind::Convex, moved)?;
        if hausdorff_distance(p, &cand, 4096)? > bound {
            eps *= 0.5;
            continue;
        }
        if asymmetric_everywhere(&cand, &hs, opts.tol)? {
            let cert = certificate(p, &cand, &hs, eps, it)?;
            return Ok((cand, cert));
        }
        eps *= 0.5;
    }
    Err(Error::BudgetExhausted(opts.budget))
}
