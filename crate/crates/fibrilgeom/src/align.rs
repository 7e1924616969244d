//! Kabsch superposition and RMSD.

use crate::Vec3;
use nalgebra::Matrix3;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlignError {
    #[error("point lists differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("degenerate configuration: {0}")]
    DegenerateConfiguration(&'static str),
}

/// Optimal rigid superposition of one point list onto another.
#[derive(Debug, Clone, PartialEq)]
pub struct AlignmentResult {
    /// Proper rotation (det +1) mapping centered `p` onto centered `q`.
    pub rotation: Matrix3<f64>,
    /// Translation such that `rotation * p + translation ≈ q`.
    pub translation: Vec3,
    /// RMSD of the aligned coordinates, in Å.
    pub rmsd: f64,
}

fn centroid(points: &[Vec3]) -> Vec3 {
    points.iter().sum::<Vec3>() / points.len() as f64
}

fn all_collinear(points: &[Vec3]) -> bool {
    let c = centroid(points);
    let scale = points.iter().map(|p| (p - c).norm()).fold(0.0f64, f64::max);
    if scale == 0.0 {
        return true;
    }
    let dir = points
        .iter()
        .map(|p| p - c)
        .max_by(|a, b| a.norm_squared().total_cmp(&b.norm_squared()))
        .unwrap()
        .normalize();
    points
        .iter()
        .all(|p| (p - c).cross(&dir).norm() <= 1e-9 * scale)
}

/// Root mean square deviation of corresponding coordinates, as given (no
/// alignment is performed).
pub fn rmsd(p: &[Vec3], q: &[Vec3]) -> Result<f64, AlignError> {
    if p.len() != q.len() {
        return Err(AlignError::LengthMismatch(p.len(), q.len()));
    }
    if p.is_empty() {
        return Err(AlignError::DegenerateConfiguration("empty point lists"));
    }
    let ss: f64 = p.iter().zip(q).map(|(a, b)| (a - b).norm_squared()).sum();
    Ok((ss / p.len() as f64).sqrt())
}

/// Optimal proper rotation and translation mapping `p` onto `q` (Kabsch),
/// with the RMSD of the aligned coordinates.
///
/// Reflections are corrected via the determinant sign of the SVD factors, so
/// the rotation always has determinant +1.
pub fn kabsch_align(p: &[Vec3], q: &[Vec3]) -> Result<AlignmentResult, AlignError> {
    if p.len() != q.len() {
        return Err(AlignError::LengthMismatch(p.len(), q.len()));
    }
    if p.len() < 3 {
        return Err(AlignError::DegenerateConfiguration("fewer than 3 points"));
    }
    if all_collinear(p) || all_collinear(q) {
        return Err(AlignError::DegenerateConfiguration("all points collinear"));
    }

    let pc = centroid(p);
    let qc = centroid(q);
    let mut h = Matrix3::zeros();
    for (a, b) in p.iter().zip(q) {
        h += (b - qc) * (a - pc).transpose();
    }
    // h maps p-space to q-space: h = Σ q̂ p̂ᵀ; rotation = U D Vᵀ from h = U S Vᵀ.
    let svd = nalgebra::SVD::new(h, true, true);
    let u = svd
        .u
        .ok_or(AlignError::DegenerateConfiguration("SVD failed"))?;
    let v_t = svd
        .v_t
        .ok_or(AlignError::DegenerateConfiguration("SVD failed"))?;
    let d = (u * v_t).determinant().signum();
    let rotation = u * Matrix3::from_diagonal(&Vec3::new(1.0, 1.0, d)) * v_t;
    let translation = qc - rotation * pc;
    let aligned: Vec<Vec3> = p.iter().map(|x| rotation * x + translation).collect();
    let rmsd = rmsd(&aligned, q)?;
    Ok(AlignmentResult {
        rotation,
        translation,
        rmsd,
    })
}
