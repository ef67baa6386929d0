//! Small-polytope hull helpers.
//!
//! Facets are found by enumerating vertex subsets that span a supporting
//! hyperplane. This is quadratic-to-quartic in the vertex count and meant for
//! the tens-of-vertices polytopes used throughout the crate.

use nalgebra::{DMatrix, Matrix3, SVector, Vector3};

use crate::sphere::Vec4;

/// Supporting halfspace `normal · x ≤ offset` with unit normal.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Facet4 {
    pub normal: Vec4,
    pub offset: f64,
}

pub(crate) fn scale_of<const D: usize>(points: &[SVector<f64, D>]) -> f64 {
    points.iter().map(|p| p.norm()).fold(0.0, f64::max).max(1.0)
}

/// Affine rank of a point set, with singular values below `tol·scale`
/// treated as zero.
pub fn affine_rank<const D: usize>(points: &[SVector<f64, D>], tol: f64) -> usize {
    if points.len() < 2 {
        return 0;
    }
    let base = points[0];
    let m = DMatrix::from_fn(points.len() - 1, D, |r, c| points[r + 1][c] - base[c]);
    let scale = scale_of(points);
    m.singular_values()
        .iter()
        .filter(|s| **s > tol * scale)
        .count()
}

/// Unit normal of the hyperplane through four points of ℝ⁴, via the
/// generalized cross product of the three edge vectors.
fn hyperplane_normal(a: &Vec4, b: &Vec4, c: &Vec4, d: &Vec4) -> Option<Vec4> {
    let u = b - a;
    let v = c - a;
    let w = d - a;
    let minor = |i: usize| {
        let idx: Vec<usize> = (0..4).filter(|&k| k != i).collect();
        Matrix3::new(
            u[idx[0]], u[idx[1]], u[idx[2]],
            v[idx[0]], v[idx[1]], v[idx[2]],
            w[idx[0]], w[idx[1]], w[idx[2]],
        )
        .determinant()
    };
    let n = Vec4::new(minor(0), -minor(1), minor(2), -minor(3));
    let scale = u.norm() * v.norm() * w.norm();
    let len = n.norm();
    if len <= 1e-10 * scale.max(1e-300) {
        None
    } else {
        Some(n / len)
    }
}

/// All facet hyperplanes of `conv(points)` for a full-dimensional point set.
pub fn facets4(points: &[Vec4]) -> Vec<Facet4> {
    let n = points.len();
    let scale = scale_of(points);
    let tol = 1e-10 * scale;
    let mut out: Vec<Facet4> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                for l in k + 1..n {
                    let Some(mut normal) =
                        hyperplane_normal(&points[i], &points[j], &points[k], &points[l])
                    else {
                        continue;
                    };
                    let mut offset = normal.dot(&points[i]);
                    let mut above = false;
                    let mut below = false;
                    for p in points {
                        let s = normal.dot(p) - offset;
                        if s > tol {
                            above = true;
                        } else if s < -tol {
                            below = true;
                        }
                        if above && below {
                            break;
                        }
                    }
                    if above && below {
                        continue;
                    }
                    if above {
                        normal = -normal;
                        offset = -offset;
                    }
                    let dup = out.iter().any(|f| {
                        (f.normal - normal).norm() < 1e-9 && (f.offset - offset).abs() < tol * 10.0
                    });
                    if !dup {
                        out.push(Facet4 { normal, offset });
                    }
                }
            }
        }
    }
    out
}

/// Removes points closer than `tol` to an earlier point; returns the kept
/// points and the number removed.
pub fn dedup_points<const D: usize>(
    points: &[SVector<f64, D>],
    tol: f64,
) -> (Vec<SVector<f64, D>>, usize) {
    let mut kept: Vec<SVector<f64, D>> = Vec::with_capacity(points.len());
    for p in points {
        if !kept.iter().any(|q| (q - p).norm() <= tol) {
            kept.push(*p);
        }
    }
    let removed = points.len() - kept.len();
    (kept, removed)
}

/// Facet planes `n·x ≤ b` of the hull of a full-dimensional 3D point set.
pub fn facets3(points: &[Vector3<f64>]) -> Vec<(Vector3<f64>, f64)> {
    let n = points.len();
    let tol = 1e-10 * scale_of(points);
    let mut out: Vec<(Vector3<f64>, f64)> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let e1 = points[j] - points[i];
                let e2 = points[k] - points[i];
                let c = e1.cross(&e2);
                let len = c.norm();
                if len <= 1e-10 * (e1.norm() * e2.norm()).max(1e-300) {
                    continue;
                }
                let mut normal = c / len;
                let mut offset = normal.dot(&points[i]);
                let mut above = false;
                let mut below = false;
                for p in points {
                    let s = normal.dot(p) - offset;
                    if s > tol {
                        above = true;
                    } else if s < -tol {
                        below = true;
                    }
                }
                if above && below {
                    continue;
                }
                if above {
                    normal = -normal;
                    offset = -offset;
                }
                if !out
                    .iter()
                    .any(|(m, b)| (m - normal).norm() < 1e-9 && (b - offset).abs() < tol * 10.0)
                {
                    out.push((normal, offset));
                }
            }
        }
    }
    out
}

/// Indices of the extreme points of a full-dimensional 3D point set: a point
/// is a vertex iff the facet normals through it span ℝ³.
pub fn extreme_points3(points: &[Vector3<f64>]) -> Vec<usize> {
    let facets = facets3(points);
    let tol = 1e-9 * scale_of(points);
    (0..points.len())
        .filter(|&i| {
            let normals: Vec<Vector3<f64>> = facets
                .iter()
                .filter(|(n, b)| (n.dot(&points[i]) - b).abs() <= tol)
                .map(|(n, _)| *n)
                .collect();
            if normals.len() < 3 {
                return false;
            }
            let m = DMatrix::from_fn(normals.len(), 3, |r, c| normals[r][c]);
            m.singular_values().iter().filter(|s| **s > 1e-8).count() == 3
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cube4() -> Vec<Vec4> {
        (0..16)
            .map(|m| {
                Vec4::from_fn(|i, _| if m >> i & 1 == 1 { 1.0 } else { -1.0 })
            })
            .collect()
    }

    #[test]
    fn cube_has_eight_facets() {
        let f = facets4(&cube4());
        assert_eq!(f.len(), 8);
        for facet in &f {
            assert!((facet.offset - 1.0).abs() < 1e-12);
            assert!((facet.normal.abs().max() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn simplex_has_five_facets() {
        let mut pts: Vec<Vec4> = (0..4)
            .map(|i| {
                let mut v = Vec4::zeros();
                v[i] = 1.0;
                v
            })
            .collect();
        pts.push(Vec4::repeat(-0.5));
        assert_eq!(facets4(&pts).len(), 5);
    }

    #[test]
    fn interior_points_are_not_extreme() {
        let mut pts: Vec<Vector3<f64>> = (0..8)
            .map(|m| Vector3::from_fn(|i, _| if m >> i & 1 == 1 { 1.0 } else { -1.0 }))
            .collect();
        pts.push(Vector3::new(0.1, 0.2, 0.3));
        // centre of a face
        pts.push(Vector3::new(1.0, 0.0, 0.0));
        // midpoint of an edge
        pts.push(Vector3::new(1.0, 1.0, 0.0));
        let ext = extreme_points3(&pts);
        assert_eq!(ext, (0..8).collect::<Vec<_>>());
    }

    #[test]
    fn rank_and_dedup() {
        let pts = cube4();
        assert_eq!(affine_rank(&pts, 1e-10), 4);
        let flat: Vec<Vec4> = pts.iter().map(|p| Vec4::new(p[0], p[1], 0.0, 0.0)).collect();
        let (kept, removed) = dedup_points(&flat, 1e-12);
        assert_eq!(kept.len(), 4);
        assert_eq!(removed, 12);
        assert_eq!(affine_rank(&kept, 1e-10), 2);
    }
}
