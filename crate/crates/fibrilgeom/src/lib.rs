//! Geometric and topological analysis of protein backbones modeled as discrete
//! space curves.
//!
//! - **PDB ingestion** — fixed-column ATOM parsing into [`pdb::Structure`] and
//!   backbone curve extraction in [`curve`]
//! - **Hop distances** — truncated hop-distance matrices and binary threshold
//!   maps in [`hop`]
//! - **Quaternion geometry** — cross-ratios, polar square roots and diagonal
//!   points in [`quat`]
//! - **Curvature / torsion** — osculating circles from four inserting points,
//!   per-atom profiles and summary statistics in [`curvature`]
//! - **Hydrogen-bond statistics** — layer-to-layer squared distance differences
//!   and torsion regression in [`hbond`] and [`stats`]
//! - **Persistent homology** — Vietoris–Rips filtrations, Z/2 reduction,
//!   bottleneck and Wasserstein-q diagram distances in [`ph`]
//! - **Alignment** — Kabsch superposition and RMSD in [`align`]
//!
//! All coordinates are in Ångström throughout. The `parallel` feature (on by
//! default) routes the data-parallel inner loops through rayon; every hot path
//! also ships a `*_seq` single-threaded reference used as the fallback and by
//! the bench suite.

pub mod align;
pub mod curvature;
pub mod curve;
pub mod hbond;
pub mod hop;
pub mod io;
pub mod pdb;
pub mod ph;
pub mod quat;
pub mod stats;

/// 3-vector in Ångström.
pub type Vec3 = nalgebra::Vector3<f64>;

pub use align::{kabsch_align, rmsd, AlignmentResult};
pub use curvature::{profile_backbone, GeometryProfile, NormalAnchor, VertexGeometry};
pub use curve::{extract_curve, AtomClass, AtomSelection, DiscreteCurve};
pub use hop::{threshold_map, truncated_hop_matrix, BinaryMap, HopDistanceMatrix};
pub use pdb::{parse_structure, Structure};
pub use ph::{compare_structures, compute_persistence, vr_filtration, PersistenceDiagram};
pub use quat::Quaternion;
pub use stats::RegressionResult;
