//! Vietoris–Rips persistent homology over Z/2 and persistence-diagram
//! distances.
//!
//! Filtration convention: a simplex enters at parameter ε once all pairwise
//! vertex distances are ≤ 2ε, i.e. its filtration value is half its largest
//! pairwise distance. This is the radius convention; it halves every value
//! relative to the diameter convention used by some other tools.

mod distance;
mod reduction;

pub use distance::{bottleneck, wasserstein, DiagramDistance, DistanceKind, Pairing};
pub use reduction::compute_persistence;

use crate::Vec3;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PhError {
    #[error("points {0} and {1} coincide")]
    DuplicatePoints(usize, usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("essential class counts differ in dimension {dim} ({first} vs {second})")]
    EssentialMismatch {
        dim: u8,
        first: usize,
        second: usize,
    },
}

/// Simplex of dimension ≤ 2 with its filtration value. Vertices are sorted
/// ascending; unused slots hold `u32::MAX`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Simplex {
    pub vertices: [u32; 3],
    pub dim: u8,
    pub value: f64,
}

impl Simplex {
    fn vertex(v: u32) -> Self {
        Simplex {
            vertices: [v, u32::MAX, u32::MAX],
            dim: 0,
            value: 0.0,
        }
    }

    fn edge(i: u32, j: u32, value: f64) -> Self {
        Simplex {
            vertices: [i.min(j), i.max(j), u32::MAX],
            dim: 1,
            value,
        }
    }

    fn triangle(mut v: [u32; 3], value: f64) -> Self {
        v.sort_unstable();
        Simplex {
            vertices: v,
            dim: 2,
            value,
        }
    }

    pub fn vertex_slice(&self) -> &[u32] {
        &self.vertices[..=self.dim as usize]
    }
}

/// Simplices of a Vietoris–Rips filtration sorted by
/// (filtration value, dimension, lexicographic vertex order).
#[derive(Debug, Clone, PartialEq)]
pub struct FilteredComplex {
    simplices: Vec<Simplex>,
    n_vertices: usize,
    max_dim: usize,
    max_eps: f64,
}

impl FilteredComplex {
    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    /// Every face of every simplex is present with a value no larger than the
    /// simplex's own; scan-checkable.
    pub fn is_face_monotone(&self) -> bool {
        use std::collections::HashMap;
        let mut value_of: HashMap<&[u32], f64> = HashMap::new();
        for s in &self.simplices {
            value_of.insert(s.vertex_slice(), s.value);
        }
        self.simplices.iter().all(|s| {
            faces_of(s).iter().all(|f| {
                value_of
                    .get(f.vertex_slice())
                    .is_some_and(|&fv| fv <= s.value)
            })
        })
    }
}

/// Proper faces of a simplex (one dimension down).
pub(crate) fn faces_of(s: &Simplex) -> Vec<Simplex> {
    match s.dim {
        0 => Vec::new(),
        1 => vec![
            Simplex::vertex(s.vertices[0]),
            Simplex::vertex(s.vertices[1]),
        ],
        _ => {
            let [a, b, c] = s.vertices;
            vec![
                Simplex::edge(a, b, 0.0),
                Simplex::edge(a, c, 0.0),
                Simplex::edge(b, c, 0.0),
            ]
        }
    }
}

fn simplex_order(a: &Simplex, b: &Simplex) -> std::cmp::Ordering {
    a.value
        .total_cmp(&b.value)
        .then(a.dim.cmp(&b.dim))
        .then(a.vertices.cmp(&b.vertices))
}

fn edge_rows(points: &[Vec3], i: usize, max_eps: f64) -> Vec<Simplex> {
    (i + 1..points.len())
        .filter_map(|j| {
            let half = (points[i] - points[j]).norm() / 2.0;
            (half <= max_eps).then(|| Simplex::edge(i as u32, j as u32, half))
        })
        .collect()
}

fn triangle_rows(points: &[Vec3], i: usize, max_eps: f64) -> Vec<Simplex> {
    let n = points.len();
    let mut out = Vec::new();
    for j in i + 1..n {
        let dij = (points[i] - points[j]).norm() / 2.0;
        if dij > max_eps {
            continue;
        }
        for k in j + 1..n {
            let dik = (points[i] - points[k]).norm() / 2.0;
            if dik > max_eps {
                continue;
            }
            let djk = (points[j] - points[k]).norm() / 2.0;
            if djk > max_eps {
                continue;
            }
            let value = dij.max(dik).max(djk);
            out.push(Simplex::triangle([i as u32, j as u32, k as u32], value));
        }
    }
    out
}

/// Vietoris–Rips filtration of a point cloud: all simplices of dimension
/// ≤ `max_dim` (at most 2) whose half-diameter is ≤ `max_eps`.
pub fn vr_filtration(
    points: &[Vec3],
    max_dim: usize,
    max_eps: f64,
) -> Result<FilteredComplex, PhError> {
    if points.is_empty() {
        return Err(PhError::InvalidParameter("empty point cloud"));
    }
    if max_dim > 2 {
        return Err(PhError::InvalidParameter(
            "max_dim above 2 is not supported",
        ));
    }
    if max_eps.is_nan() || max_eps <= 0.0 {
        return Err(PhError::InvalidParameter("max_eps must be positive"));
    }
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if (points[i] - points[j]).norm_squared() < f64::MIN_POSITIVE {
                return Err(PhError::DuplicatePoints(i, j));
            }
        }
    }

    let mut simplices: Vec<Simplex> = (0..points.len() as u32).map(Simplex::vertex).collect();

    if max_dim >= 1 {
        #[cfg(feature = "parallel")]
        let edge_lists: Vec<Vec<Simplex>> = {
            use rayon::prelude::*;
            (0..points.len())
                .into_par_iter()
                .map(|i| edge_rows(points, i, max_eps))
                .collect()
        };
        #[cfg(not(feature = "parallel"))]
        let edge_lists: Vec<Vec<Simplex>> = (0..points.len())
            .map(|i| edge_rows(points, i, max_eps))
            .collect();
        simplices.extend(edge_lists.into_iter().flatten());
    }

    if max_dim >= 2 {
        #[cfg(feature = "parallel")]
        let tri_lists: Vec<Vec<Simplex>> = {
            use rayon::prelude::*;
            (0..points.len())
                .into_par_iter()
                .map(|i| triangle_rows(points, i, max_eps))
                .collect()
        };
        #[cfg(not(feature = "parallel"))]
        let tri_lists: Vec<Vec<Simplex>> = (0..points.len())
            .map(|i| triangle_rows(points, i, max_eps))
            .collect();
        simplices.extend(tri_lists.into_iter().flatten());
    }

    simplices.sort_by(simplex_order);
    Ok(FilteredComplex {
        simplices,
        n_vertices: points.len(),
        max_dim,
        max_eps,
    })
}

/// Single-threaded reference path for [`vr_filtration`].
pub fn vr_filtration_seq(
    points: &[Vec3],
    max_dim: usize,
    max_eps: f64,
) -> Result<FilteredComplex, PhError> {
    if points.is_empty() {
        return Err(PhError::InvalidParameter("empty point cloud"));
    }
    if max_dim > 2 {
        return Err(PhError::InvalidParameter(
            "max_dim above 2 is not supported",
        ));
    }
    if max_eps.is_nan() || max_eps <= 0.0 {
        return Err(PhError::InvalidParameter("max_eps must be positive"));
    }
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if (points[i] - points[j]).norm_squared() < f64::MIN_POSITIVE {
                return Err(PhError::DuplicatePoints(i, j));
            }
        }
    }
    let mut simplices: Vec<Simplex> = (0..points.len() as u32).map(Simplex::vertex).collect();
    if max_dim >= 1 {
        for i in 0..points.len() {
            simplices.extend(edge_rows(points, i, max_eps));
        }
    }
    if max_dim >= 2 {
        for i in 0..points.len() {
            simplices.extend(triangle_rows(points, i, max_eps));
        }
    }
    simplices.sort_by(simplex_order);
    Ok(FilteredComplex {
        simplices,
        n_vertices: points.len(),
        max_dim,
        max_eps,
    })
}

/// One birth/death interval. Essential classes carry an infinite death.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiagramPoint {
    pub dim: u8,
    pub birth: f64,
    pub death: f64,
}

impl DiagramPoint {
    pub fn is_essential(&self) -> bool {
        self.death.is_infinite()
    }

    pub fn persistence(&self) -> f64 {
        self.death - self.birth
    }
}

/// Multiset of birth/death intervals; the diagonal is implicit.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PersistenceDiagram {
    pub points: Vec<DiagramPoint>,
}

impl PersistenceDiagram {
    pub fn in_dim(&self, dim: u8) -> impl Iterator<Item = &DiagramPoint> {
        self.points.iter().filter(move |p| p.dim == dim)
    }

    pub fn essential_count(&self, dim: u8) -> usize {
        self.in_dim(dim).filter(|p| p.is_essential()).count()
    }

    /// Copy with every infinite death replaced by `l`; points whose birth
    /// already equals `l` drop to the diagonal and are removed.
    pub fn replace_infinite(&self, l: f64) -> PersistenceDiagram {
        let mut points: Vec<DiagramPoint> = self
            .points
            .iter()
            .map(|p| DiagramPoint {
                dim: p.dim,
                birth: p.birth,
                death: if p.is_essential() { l } else { p.death },
            })
            .filter(|p| p.death > p.birth)
            .collect();
        points.sort_by(|a, b| {
            a.dim
                .cmp(&b.dim)
                .then(a.birth.total_cmp(&b.birth))
                .then(a.death.total_cmp(&b.death))
        });
        PersistenceDiagram { points }
    }
}

/// Bottleneck and Wasserstein-q distances of one homology dimension.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DimDistances {
    pub bottleneck: f64,
    pub wasserstein: f64,
}

/// Output of the full two-cloud comparison pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub diagram1: PersistenceDiagram,
    pub diagram2: PersistenceDiagram,
    pub max_eps: f64,
    pub q: f64,
    pub dim0: DimDistances,
    pub dim1: DimDistances,
}

/// Compare two point clouds: build both VR filtrations to dimension 2,
/// compute H0/H1 diagrams, replace infinite deaths by `max_eps`, and return
/// bottleneck and Wasserstein-q distances per dimension.
pub fn compare_structures(
    p1: &[Vec3],
    p2: &[Vec3],
    max_eps: f64,
    q: f64,
) -> Result<ComparisonReport, PhError> {
    if q.is_nan() || q < 1.0 {
        return Err(PhError::InvalidParameter("q must be at least 1"));
    }
    let pipeline = |points: &[Vec3]| -> Result<PersistenceDiagram, PhError> {
        Ok(compute_persistence(&vr_filtration(points, 2, max_eps)?))
    };

    #[cfg(feature = "parallel")]
    let (d1, d2) = rayon::join(|| pipeline(p1), || pipeline(p2));
    #[cfg(not(feature = "parallel"))]
    let (d1, d2) = (pipeline(p1), pipeline(p2));
    let (diagram1, diagram2) = (d1?, d2?);

    let f1 = diagram1.replace_infinite(max_eps);
    let f2 = diagram2.replace_infinite(max_eps);
    let mut dists = [DimDistances {
        bottleneck: 0.0,
        wasserstein: 0.0,
    }; 2];
    for dim in 0..2u8 {
        dists[dim as usize] = DimDistances {
            bottleneck: bottleneck(&f1, &f2, dim)?.value,
            wasserstein: wasserstein(&f1, &f2, dim, q)?.value,
        };
    }
    Ok(ComparisonReport {
        diagram1,
        diagram2,
        max_eps,
        q,
        dim0: dists[0],
        dim1: dists[1],
    })
}
