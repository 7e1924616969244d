//! Hop distances along discrete curves, truncated hop-distance matrices and
//! binary threshold maps.

use crate::curve::DiscreteCurve;
use thiserror::Error;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HopError {
    #[error("vertex index {index} with offset {offset} is outside the curve (length {len})")]
    IndexOutOfRange {
        index: usize,
        offset: i64,
        len: usize,
    },
    #[error("curve has {len} vertices, {needed} required")]
    CurveTooShort { len: usize, needed: usize },
}

/// Symmetric matrix of absolute hop-distance differences, zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct HopDistanceMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl HopDistanceMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.entries.chunks(self.n)
    }
}

/// Boolean map of matrix entries strictly above a cutoff.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryMap {
    n: usize,
    pub cutoff: f64,
    entries: Vec<bool>,
}

impl BinaryMap {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[bool]> {
        self.entries.chunks(self.n)
    }
}

/// Euclidean distance between vertex `i` and vertex `i + k` (the k-hop
/// distance). `k` may be negative.
pub fn hop_distance(curve: &DiscreteCurve, i: usize, k: i64) -> Result<f64, HopError> {
    let len = curve.len();
    let j = i as i64 + k;
    if i >= len || j < 0 || j as usize >= len {
        return Err(HopError::IndexOutOfRange {
            index: i,
            offset: k,
            len,
        });
    }
    Ok((curve.vertices[i] - curve.vertices[j as usize]).norm())
}

fn hop_row(a: &[crate::Vec3], b: &[crate::Vec3], i: usize, n: usize) -> Vec<f64> {
    (0..n)
        .map(|j| {
            let d1 = (a[i] - a[j]).norm();
            let d2 = (b[i] - b[j]).norm();
            (d1 - d2).abs()
        })
        .collect()
}

/// Truncated hop-distance matrix `D_ij = |d(γ_i, γ_j) − d(γ'_i, γ'_j)|` over
/// the first `n` vertices of each curve.
///
/// The caller is responsible for restricting both curves to the same sequence
/// fragment so that vertex indices correspond.
pub fn truncated_hop_matrix(
    curve1: &DiscreteCurve,
    curve2: &DiscreteCurve,
    n: usize,
) -> Result<HopDistanceMatrix, HopError> {
    for curve in [curve1, curve2] {
        if curve.len() < n {
            return Err(HopError::CurveTooShort {
                len: curve.len(),
                needed: n,
            });
        }
    }
    let a = &curve1.vertices[..n];
    let b = &curve2.vertices[..n];

    #[cfg(feature = "parallel")]
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| hop_row(a, b, i, n))
        .collect();
    #[cfg(not(feature = "parallel"))]
    let rows: Vec<Vec<f64>> = (0..n).map(|i| hop_row(a, b, i, n)).collect();

    Ok(HopDistanceMatrix {
        n,
        entries: rows.concat(),
    })
}

/// Single-threaded reference path for [`truncated_hop_matrix`].
pub fn truncated_hop_matrix_seq(
    curve1: &DiscreteCurve,
    curve2: &DiscreteCurve,
    n: usize,
) -> Result<HopDistanceMatrix, HopError> {
    for curve in [curve1, curve2] {
        if curve.len() < n {
            return Err(HopError::CurveTooShort {
                len: curve.len(),
                needed: n,
            });
        }
    }
    let a = &curve1.vertices[..n];
    let b = &curve2.vertices[..n];
    let rows: Vec<Vec<f64>> = (0..n).map(|i| hop_row(a, b, i, n)).collect();
    Ok(HopDistanceMatrix {
        n,
        entries: rows.concat(),
    })
}

/// Binary map with entries set exactly where `D_ij > cutoff`.
pub fn threshold_map(matrix: &HopDistanceMatrix, cutoff: f64) -> BinaryMap {
    debug_assert!(cutoff > 0.0);
    BinaryMap {
        n: matrix.n,
        cutoff,
        entries: matrix.entries.iter().map(|&d| d > cutoff).collect(),
    }
}
