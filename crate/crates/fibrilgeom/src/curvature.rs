//! Discrete curvature and torsion from osculating circles.
//!
//! Each window of four consecutive vertices `(γ_{i-1}, γ_i, γ_{i+1}, γ_{i+2})`
//! yields four concyclic inserting points via the diagonal-point construction;
//! the circle through them is the osculating circle at `γ_i`, its inverse
//! radius the discrete curvature, and the torsion couples the window's
//! cross-ratio to the circle normal:
//!
//! `τ_i = −9 ⟨Im cr(γ_{i-1}, γ_i, γ_{i+1}, γ_{i+2}), N_i⟩ / (2 κ_i ‖γ_i − γ_{i+1}‖²)`
//!
//! Both quantities approximate their smooth counterparts to second order in
//! the sampling step. Degenerate windows (collinear, branch failure, singular
//! circle solve) are flagged in-band and excluded from summary statistics.

use crate::curve::{AtomClass, DiscreteCurve};
use crate::quat::{cross_ratio, diagonal_point, QuatError};
use crate::Vec3;
use nalgebra::Matrix3;
use serde::Serialize;
use thiserror::Error;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CurvatureError {
    #[error("curve labels do not repeat N, CA, C (vertex {0})")]
    LabelPatternViolation(usize),
    #[error("curve of {0} vertices has no complete window")]
    CurveTooShort(usize),
}

/// Why a window produced no curvature/torsion values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DegenerateReason {
    /// Window vertices coincide or nearly so.
    CoincidentVertices,
    /// The four inserting points are collinear (straight window).
    Collinear,
    /// The permuted cross-ratio fell on the non-positive real branch.
    BranchFailure,
    /// The circumcenter solve was singular.
    SingularSystem,
}

impl DegenerateReason {
    pub fn label(self) -> &'static str {
        match self {
            DegenerateReason::CoincidentVertices => "coincident_vertices",
            DegenerateReason::Collinear => "collinear",
            DegenerateReason::BranchFailure => "branch_failure",
            DegenerateReason::SingularSystem => "singular_system",
        }
    }
}

/// Which inserting point anchors the circle normal. The definition uses B;
/// the pseudocode variant anchors at A.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NormalAnchor {
    #[default]
    B,
    A,
}

/// Circle through the four inserting points of a window.
#[derive(Debug, Clone, PartialEq)]
pub struct OsculatingCircle {
    pub center: Vec3,
    pub radius: f64,
    pub plane_normal: Vec3,
    /// The concyclic inserting points A, B, C, D.
    pub points: [Vec3; 4],
}

/// Outcome of one window evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WindowResult {
    Values { curvature: f64, torsion: f64 },
    Degenerate(DegenerateReason),
}

impl WindowResult {
    pub fn values(&self) -> Option<(f64, f64)> {
        match self {
            WindowResult::Values { curvature, torsion } => Some((*curvature, *torsion)),
            WindowResult::Degenerate(_) => None,
        }
    }

    pub fn degenerate_reason(&self) -> Option<DegenerateReason> {
        match self {
            WindowResult::Degenerate(r) => Some(*r),
            WindowResult::Values { .. } => None,
        }
    }
}

/// Curvature/torsion record at one curve vertex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VertexGeometry {
    pub vertex_index: usize,
    pub atom_class: AtomClass,
    pub result: WindowResult,
}

/// Mean and unbiased variance of |κ| and |τ| over one atom class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Default)]
pub struct ClassStats {
    pub count: usize,
    pub mean_abs_curvature: f64,
    pub mean_abs_torsion: f64,
    pub var_abs_curvature: f64,
    pub var_abs_torsion: f64,
}

/// The 16 summary statistics: overall plus per atom class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Default)]
pub struct ProfileSummary {
    pub overall: ClassStats,
    pub n: ClassStats,
    pub ca: ClassStats,
    pub c: ClassStats,
}

/// Per-vertex geometry of a backbone curve plus summary statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometryProfile {
    pub entries: Vec<VertexGeometry>,
    pub summary: ProfileSummary,
    pub degenerate_count: usize,
}

fn window_scale(w: &[Vec3; 4]) -> f64 {
    let mut scale = 0.0f64;
    for i in 0..4 {
        for j in (i + 1)..4 {
            scale = scale.max((w[i] - w[j]).norm());
        }
    }
    scale
}

/// Four inserting points of a window, cyclic evaluations of the diagonal
/// point: `A = f(γ_{i+2}, γ_{i-1}, γ_i, γ_{i+1})`, `B = f(γ_{i-1}, γ_i,
/// γ_{i+1}, γ_{i+2})`, `C = f(γ_i, γ_{i+1}, γ_{i+2}, γ_{i-1})`,
/// `D = f(γ_{i+1}, γ_{i+2}, γ_{i-1}, γ_i)`.
///
/// The result is concyclic with `cr(A,B,C,D) = −1`.
pub fn inserting_points(w: &[Vec3; 4]) -> Result<[Vec3; 4], DegenerateReason> {
    let map_err = |e: QuatError| match e {
        QuatError::BranchFailure | QuatError::NonPositiveRealBranch => {
            DegenerateReason::BranchFailure
        }
        _ => DegenerateReason::CoincidentVertices,
    };
    let a = diagonal_point(w[3], w[0], w[1], w[2]).map_err(map_err)?;
    let b = diagonal_point(w[0], w[1], w[2], w[3]).map_err(map_err)?;
    let c = diagonal_point(w[1], w[2], w[3], w[0]).map_err(map_err)?;
    let d = diagonal_point(w[2], w[3], w[0], w[1]).map_err(map_err)?;
    Ok([a, b, c, d])
}

/// Circle through (at least) the first three of four concyclic points, by the
/// direct 3×3 solve for the circumcenter:
/// `(X−(A+B)/2)·(B−A) = 0`, `(X−(A+C)/2)·(C−A) = 0`,
/// `((B−A)×(C−A))·(X−A) = 0`.
pub fn osculating_circle(points: &[Vec3; 4]) -> Result<OsculatingCircle, DegenerateReason> {
    let [a, b, c, _] = *points;
    let ab = b - a;
    let ac = c - a;
    let n = ab.cross(&ac);
    let scale = window_scale(points);
    if n.norm() <= 1e-12 * scale * scale {
        return Err(DegenerateReason::Collinear);
    }
    // Solve for X − A with a unit plane row; keeping the system in the
    // A-translated frame avoids cancellation against large absolute offsets.
    let n_hat = n.normalize();
    let m = Matrix3::from_rows(&[ab.transpose(), ac.transpose(), n_hat.transpose()]);
    let rhs = Vec3::new(ab.norm_squared() / 2.0, ac.norm_squared() / 2.0, 0.0);
    if m.determinant().abs() < 1e-12 * scale * scale {
        return Err(DegenerateReason::SingularSystem);
    }
    let offset = m.lu().solve(&rhs).ok_or(DegenerateReason::SingularSystem)?;
    Ok(OsculatingCircle {
        center: a + offset,
        radius: offset.norm(),
        plane_normal: n_hat,
        points: *points,
    })
}

/// Curvature and torsion of the window `(γ_{i-1}, γ_i, γ_{i+1}, γ_{i+2})`,
/// evaluated at `γ_i`. Degeneracies are reported in-band.
pub fn curvature_torsion_at(w: &[Vec3; 4], anchor: NormalAnchor) -> WindowResult {
    let inserted = match inserting_points(w) {
        Ok(p) => p,
        Err(r) => return WindowResult::Degenerate(r),
    };
    let circle = match osculating_circle(&inserted) {
        Ok(c) => c,
        Err(r) => return WindowResult::Degenerate(r),
    };
    if circle.radius < f64::MIN_POSITIVE {
        return WindowResult::Degenerate(DegenerateReason::SingularSystem);
    }
    let kappa = 1.0 / circle.radius;
    let anchor_point = match anchor {
        NormalAnchor::B => circle.points[1],
        NormalAnchor::A => circle.points[0],
    };
    let radial = circle.center - anchor_point;
    if radial.norm() < f64::MIN_POSITIVE {
        return WindowResult::Degenerate(DegenerateReason::SingularSystem);
    }
    let normal = radial.normalize();
    let cr = match cross_ratio(w[0], w[1], w[2], w[3]) {
        Ok(q) => q,
        Err(_) => return WindowResult::Degenerate(DegenerateReason::CoincidentVertices),
    };
    let torsion = -9.0 * cr.im.dot(&normal) / (2.0 * kappa * (w[1] - w[2]).norm_squared());
    WindowResult::Values {
        curvature: kappa,
        torsion,
    }
}

fn class_stats<'a, I>(entries: I) -> ClassStats
where
    I: Iterator<Item = &'a VertexGeometry>,
{
    let values: Vec<(f64, f64)> = entries.filter_map(|e| e.result.values()).collect();
    let n = values.len();
    if n == 0 {
        return ClassStats::default();
    }
    let mean_k = values.iter().map(|(k, _)| k.abs()).sum::<f64>() / n as f64;
    let mean_t = values.iter().map(|(_, t)| t.abs()).sum::<f64>() / n as f64;
    let (var_k, var_t) = if n > 1 {
        (
            values
                .iter()
                .map(|(k, _)| (k.abs() - mean_k).powi(2))
                .sum::<f64>()
                / (n - 1) as f64,
            values
                .iter()
                .map(|(_, t)| (t.abs() - mean_t).powi(2))
                .sum::<f64>()
                / (n - 1) as f64,
        )
    } else {
        (0.0, 0.0)
    };
    ClassStats {
        count: n,
        mean_abs_curvature: mean_k,
        mean_abs_torsion: mean_t,
        var_abs_curvature: var_k,
        var_abs_torsion: var_t,
    }
}

/// Per-vertex curvature/torsion profile of an N, Cα, C backbone curve.
///
/// The window at vertex `i` spans `γ_{i-1}..γ_{i+2}`, so the first vertex and
/// the last two have no value. Summary statistics pool non-degenerate entries
/// per atom class and overall.
pub fn profile_backbone(
    curve: &DiscreteCurve,
    anchor: NormalAnchor,
) -> Result<GeometryProfile, CurvatureError> {
    let expected = [AtomClass::N, AtomClass::Ca, AtomClass::C];
    for (i, label) in curve.labels.iter().enumerate() {
        if label.atom_class != expected[i % 3] {
            return Err(CurvatureError::LabelPatternViolation(i));
        }
    }
    if curve.len() < 4 {
        return Err(CurvatureError::CurveTooShort(curve.len()));
    }

    let eval = |v: usize| -> VertexGeometry {
        let w = [
            curve.vertices[v - 1],
            curve.vertices[v],
            curve.vertices[v + 1],
            curve.vertices[v + 2],
        ];
        VertexGeometry {
            vertex_index: v,
            atom_class: curve.labels[v].atom_class,
            result: curvature_torsion_at(&w, anchor),
        }
    };

    let range = 1..curve.len() - 2;
    #[cfg(feature = "parallel")]
    let entries: Vec<VertexGeometry> = range.into_par_iter().map(eval).collect();
    #[cfg(not(feature = "parallel"))]
    let entries: Vec<VertexGeometry> = range.map(eval).collect();

    Ok(assemble_profile(entries))
}

/// Single-threaded reference path for [`profile_backbone`].
pub fn profile_backbone_seq(
    curve: &DiscreteCurve,
    anchor: NormalAnchor,
) -> Result<GeometryProfile, CurvatureError> {
    let expected = [AtomClass::N, AtomClass::Ca, AtomClass::C];
    for (i, label) in curve.labels.iter().enumerate() {
        if label.atom_class != expected[i % 3] {
            return Err(CurvatureError::LabelPatternViolation(i));
        }
    }
    if curve.len() < 4 {
        return Err(CurvatureError::CurveTooShort(curve.len()));
    }
    let entries: Vec<VertexGeometry> = (1..curve.len() - 2)
        .map(|v| {
            let w = [
                curve.vertices[v - 1],
                curve.vertices[v],
                curve.vertices[v + 1],
                curve.vertices[v + 2],
            ];
            VertexGeometry {
                vertex_index: v,
                atom_class: curve.labels[v].atom_class,
                result: curvature_torsion_at(&w, anchor),
            }
        })
        .collect();
    Ok(assemble_profile(entries))
}

fn assemble_profile(entries: Vec<VertexGeometry>) -> GeometryProfile {
    let degenerate_count = entries
        .iter()
        .filter(|e| e.result.degenerate_reason().is_some())
        .count();
    let summary = ProfileSummary {
        overall: class_stats(entries.iter()),
        n: class_stats(entries.iter().filter(|e| e.atom_class == AtomClass::N)),
        ca: class_stats(entries.iter().filter(|e| e.atom_class == AtomClass::Ca)),
        c: class_stats(entries.iter().filter(|e| e.atom_class == AtomClass::C)),
    };
    GeometryProfile {
        entries,
        summary,
        degenerate_count,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::VertexLabel;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn v(x: f64, y: f64, z: f64) -> Vec3 {
        Vec3::new(x, y, z)
    }

    fn square_window() -> [Vec3; 4] {
        [
            v(0.0, 0.0, 0.0),
            v(1.0, 0.0, 0.0),
            v(1.0, 1.0, 0.0),
            v(0.0, 1.0, 0.0),
        ]
    }

    #[test]
    fn square_window_inserting_points() {
        let pts = inserting_points(&square_window()).unwrap();
        // All four lie on the circumscribed circle of the square.
        let center = v(0.5, 0.5, 0.0);
        let radius = std::f64::consts::FRAC_1_SQRT_2;
        for p in &pts {
            assert_abs_diff_eq!((p - center).norm(), radius, epsilon = 1e-12);
        }
        // B is the arc midpoint of side bc.
        assert_abs_diff_eq!(
            (pts[1] - v((1.0 + std::f64::consts::SQRT_2) / 2.0, 0.5, 0.0)).norm(),
            0.0,
            epsilon = 1e-12
        );
        let cr = cross_ratio(pts[0], pts[1], pts[2], pts[3]).unwrap();
        assert_abs_diff_eq!(cr.re, -1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(cr.im.norm(), 0.0, epsilon = 1e-10);
    }

    #[test]
    fn concyclic_window_keeps_its_circle() {
        let r = 3.0;
        let angles: [f64; 4] = [0.2, 1.1, 2.3, 4.0];
        let w: [Vec3; 4] =
            std::array::from_fn(|i| v(r * angles[i].cos(), r * angles[i].sin(), 0.0));
        let pts = inserting_points(&w).unwrap();
        for p in &pts {
            assert_abs_diff_eq!(p.norm(), r, epsilon = 1e-9);
            assert_abs_diff_eq!(p.z, 0.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn collinear_window_is_degenerate() {
        let w = [
            v(0.0, 0.0, 0.0),
            v(1.0, 0.0, 0.0),
            v(2.0, 0.0, 0.0),
            v(3.5, 0.0, 0.0),
        ];
        assert_eq!(
            curvature_torsion_at(&w, NormalAnchor::B),
            WindowResult::Degenerate(DegenerateReason::Collinear)
        );
    }

    #[test]
    fn circle_solve_matches_square() {
        let pts = inserting_points(&square_window()).unwrap();
        let circle = osculating_circle(&pts).unwrap();
        assert_abs_diff_eq!(
            (circle.center - v(0.5, 0.5, 0.0)).norm(),
            0.0,
            epsilon = 1e-10
        );
        // The fourth point is equidistant as well.
        assert_abs_diff_eq!(
            (pts[3] - circle.center).norm(),
            circle.radius,
            epsilon = 1e-8 * circle.radius
        );
    }

    #[test]
    fn nearly_collinear_triple_is_singular() {
        let pts = [
            v(0.0, 0.0, 0.0),
            v(1.0, 1e-15, 0.0),
            v(2.0, -1e-15, 0.0),
            v(3.0, 0.0, 0.0),
        ];
        assert!(osculating_circle(&pts).is_err());
    }

    #[test]
    fn circle_window_curvature_is_exact() {
        let r = 2.0;
        let angles: [f64; 4] = [0.3, 0.8, 1.5, 2.2];
        let w: [Vec3; 4] =
            std::array::from_fn(|i| v(r * angles[i].cos(), r * angles[i].sin(), 0.0));
        let WindowResult::Values { curvature, torsion } = curvature_torsion_at(&w, NormalAnchor::B)
        else {
            panic!("degenerate circle window");
        };
        assert_abs_diff_eq!(curvature, 0.5, epsilon = 1e-10);
        assert_abs_diff_eq!(torsion, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn planar_window_torsion_vanishes() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..200 {
            let w: [Vec3; 4] = std::array::from_fn(|_| {
                v(
                    rng.random_range(-3.0..3.0),
                    rng.random_range(-3.0..3.0),
                    0.0,
                )
            });
            if let WindowResult::Values { torsion, .. } = curvature_torsion_at(&w, NormalAnchor::B)
            {
                assert_abs_diff_eq!(torsion, 0.0, epsilon = 1e-9);
            }
        }
    }

    fn helix(t: f64, r: f64, c: f64) -> Vec3 {
        v(r * t.cos(), r * t.sin(), c * t)
    }

    fn helix_window(mu: f64, eps: f64) -> [Vec3; 4] {
        std::array::from_fn(|i| helix(mu + (2.0 * (i as f64 - 1.0) - 1.0) * eps, 1.0, 0.5))
    }

    #[test]
    fn helix_matches_frenet_values() {
        // kappa = r/(r²+c²) = 0.8, |tau| = c/(r²+c²) = 0.4 for r=1, c=0.5.
        let eps = 0.05;
        let mut max_dk = 0.0f64;
        let mut max_dt = 0.0f64;
        let mut signs = Vec::new();
        for step in 0..16 {
            let mu = step as f64 * 0.4;
            let WindowResult::Values { curvature, torsion } =
                curvature_torsion_at(&helix_window(mu, eps), NormalAnchor::B)
            else {
                panic!("degenerate helix window");
            };
            max_dk = max_dk.max((curvature - 0.8).abs());
            max_dt = max_dt.max((torsion.abs() - 0.4).abs());
            signs.push(torsion.signum());
        }
        assert!(max_dk < 10.0 * eps * eps, "kappa error {max_dk}");
        assert!(max_dt < 10.0 * eps * eps, "tau error {max_dt}");
        // Sign is consistent along a uniform helix.
        assert!(signs.windows(2).all(|s| s[0] == s[1]));
    }

    #[test]
    fn second_order_convergence_on_helix() {
        let epsilons = [0.2, 0.1, 0.05, 0.025];
        let mut errs_k = Vec::new();
        let mut errs_t = Vec::new();
        for &eps in &epsilons {
            let mut ek = 0.0f64;
            let mut et = 0.0f64;
            for step in 0..16 {
                let mu = step as f64 * 0.4;
                let WindowResult::Values { curvature, torsion } =
                    curvature_torsion_at(&helix_window(mu, eps), NormalAnchor::B)
                else {
                    panic!("degenerate helix window");
                };
                ek = ek.max((curvature - 0.8).abs());
                et = et.max((torsion.abs() - 0.4).abs());
            }
            errs_k.push(ek);
            errs_t.push(et);
        }
        let slope = |errs: &[f64]| {
            let xs: Vec<f64> = epsilons.iter().map(|e| e.ln()).collect();
            let ys: Vec<f64> = errs.iter().map(|e| e.ln()).collect();
            let xm = xs.iter().sum::<f64>() / xs.len() as f64;
            let ym = ys.iter().sum::<f64>() / ys.len() as f64;
            let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xm) * (y - ym)).sum();
            let sxx: f64 = xs.iter().map(|x| (x - xm).powi(2)).sum();
            sxy / sxx
        };
        assert!(slope(&errs_k) >= 1.9, "kappa slope {}", slope(&errs_k));
        assert!(slope(&errs_t) >= 1.9, "tau slope {}", slope(&errs_t));
    }

    #[test]
    fn rigid_motion_invariance_and_reflection_sign() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..50 {
            let w: [Vec3; 4] = std::array::from_fn(|_| {
                v(
                    rng.random_range(-2.0..2.0),
                    rng.random_range(-2.0..2.0),
                    rng.random_range(-2.0..2.0),
                )
            });
            let WindowResult::Values { curvature, torsion } =
                curvature_torsion_at(&w, NormalAnchor::B)
            else {
                continue;
            };
            let axis = nalgebra::Unit::new_normalize(v(
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
            ));
            let rot = nalgebra::Rotation3::from_axis_angle(
                &axis,
                rng.random_range(0.0..std::f64::consts::TAU),
            );
            let t = v(4.0, -7.0, 2.0);
            let moved: [Vec3; 4] = std::array::from_fn(|i| rot * w[i] + t);
            let WindowResult::Values {
                curvature: k2,
                torsion: t2,
            } = curvature_torsion_at(&moved, NormalAnchor::B)
            else {
                panic!("rigid motion broke the window");
            };
            assert_abs_diff_eq!(k2, curvature, epsilon = 1e-9 * curvature.abs().max(1.0));
            assert_abs_diff_eq!(
                t2.abs(),
                torsion.abs(),
                epsilon = 1e-9 * torsion.abs().max(1.0)
            );

            let mirrored: [Vec3; 4] = std::array::from_fn(|i| v(-w[i].x, w[i].y, w[i].z));
            let WindowResult::Values { torsion: t3, .. } =
                curvature_torsion_at(&mirrored, NormalAnchor::B)
            else {
                panic!("reflection broke the window");
            };
            assert_abs_diff_eq!(t3, -torsion, epsilon = 1e-9 * torsion.abs().max(1.0));
        }
    }

    #[test]
    fn harmonicity_and_normal_in_plane() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..100 {
            let w: [Vec3; 4] = std::array::from_fn(|_| {
                v(
                    rng.random_range(-3.0..3.0),
                    rng.random_range(-3.0..3.0),
                    rng.random_range(-3.0..3.0),
                )
            });
            let Ok(pts) = inserting_points(&w) else {
                continue;
            };
            let cr = cross_ratio(pts[0], pts[1], pts[2], pts[3]).unwrap();
            assert_abs_diff_eq!(cr.re, -1.0, epsilon = 1e-8);
            assert_abs_diff_eq!(cr.im.norm(), 0.0, epsilon = 1e-8);
            let Ok(circle) = osculating_circle(&pts) else {
                continue;
            };
            let normal = (circle.center - pts[1]).normalize();
            assert_abs_diff_eq!(normal.dot(&circle.plane_normal), 0.0, epsilon = 1e-9);
        }
    }

    fn synthetic_backbone(n_res: usize, planar: bool) -> DiscreteCurve {
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        let mut vertices = Vec::new();
        let mut labels = Vec::new();
        for i in 0..n_res {
            for (j, class) in [AtomClass::N, AtomClass::Ca, AtomClass::C]
                .into_iter()
                .enumerate()
            {
                let t = (i * 3 + j) as f64 * 0.9;
                let z = if planar {
                    0.0
                } else {
                    rng.random_range(-0.6..0.6)
                };
                vertices.push(v(t, (t * 1.3).sin() * 1.5, z));
                labels.push(VertexLabel {
                    chain_id: 'A',
                    residue_seq: i as i32 + 1,
                    atom_class: class,
                });
            }
        }
        DiscreteCurve::new(vertices, labels, false).unwrap()
    }

    #[test]
    fn nine_vertex_curve_profiles_six() {
        let curve = synthetic_backbone(3, false);
        let profile = profile_backbone(&curve, NormalAnchor::B).unwrap();
        assert_eq!(profile.entries.len(), 6);
        assert_eq!(profile.entries[0].vertex_index, 1);
        assert_eq!(profile.entries.last().unwrap().vertex_index, 6);
    }

    #[test]
    fn planar_backbone_has_zero_torsion() {
        let curve = synthetic_backbone(12, true);
        let profile = profile_backbone(&curve, NormalAnchor::B).unwrap();
        for entry in &profile.entries {
            if let Some((_, tau)) = entry.result.values() {
                assert_abs_diff_eq!(tau, 0.0, epsilon = 1e-9);
            }
        }
        assert_abs_diff_eq!(
            profile.summary.overall.mean_abs_torsion,
            0.0,
            epsilon = 1e-9
        );
        assert_abs_diff_eq!(profile.summary.n.mean_abs_torsion, 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(profile.summary.ca.mean_abs_torsion, 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(profile.summary.c.mean_abs_torsion, 0.0, epsilon = 1e-9);
    }

    #[test]
    fn label_pattern_enforced() {
        let curve = DiscreteCurve::from_points(
            (0..6)
                .map(|i| v(i as f64, (i as f64).sin(), 0.3 * i as f64))
                .collect(),
        )
        .unwrap();
        assert!(matches!(
            profile_backbone(&curve, NormalAnchor::B),
            Err(CurvatureError::LabelPatternViolation(0))
        ));
    }

    #[test]
    fn summary_matches_streaming_recomputation() {
        let curve = synthetic_backbone(20, false);
        let profile = profile_backbone(&curve, NormalAnchor::B).unwrap();
        // Welford's online algorithm as an independent pass.
        let mut count = 0usize;
        let (mut mean_k, mut m2_k) = (0.0f64, 0.0f64);
        let (mut mean_t, mut m2_t) = (0.0f64, 0.0f64);
        for e in &profile.entries {
            if let Some((k, t)) = e.result.values() {
                count += 1;
                let dk = k.abs() - mean_k;
                mean_k += dk / count as f64;
                m2_k += dk * (k.abs() - mean_k);
                let dt = t.abs() - mean_t;
                mean_t += dt / count as f64;
                m2_t += dt * (t.abs() - mean_t);
            }
        }
        let s = &profile.summary.overall;
        assert_eq!(s.count, count);
        assert_abs_diff_eq!(s.mean_abs_curvature, mean_k, epsilon = 1e-12);
        assert_abs_diff_eq!(s.mean_abs_torsion, mean_t, epsilon = 1e-12);
        assert_abs_diff_eq!(
            s.var_abs_curvature,
            m2_k / (count - 1) as f64,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            s.var_abs_torsion,
            m2_t / (count - 1) as f64,
            epsilon = 1e-12
        );
    }

    #[test]
    fn parallel_and_seq_profiles_agree() {
        let curve = synthetic_backbone(15, false);
        assert_eq!(
            profile_backbone(&curve, NormalAnchor::B).unwrap(),
            profile_backbone_seq(&curve, NormalAnchor::B).unwrap()
        );
    }

    #[test]
    fn anchor_switch_changes_normal_only() {
        let w = helix_window(0.7, 0.1);
        let WindowResult::Values { curvature: kb, .. } = curvature_torsion_at(&w, NormalAnchor::B)
        else {
            panic!()
        };
        let WindowResult::Values { curvature: ka, .. } = curvature_torsion_at(&w, NormalAnchor::A)
        else {
            panic!()
        };
        assert_abs_diff_eq!(ka, kb, epsilon = 1e-12);
    }
}
