//! Layer-to-layer squared distance differences and the torsion-vs-distance
//! regression join.
//!
//! In a fibril stack the carbonyl oxygen `O_i` of layer `*` hydrogen-bonds to
//! the amino nitrogen `N_{i+1}` of layer `*−1` or `*+1`. The squared distance
//! difference `d̃_i = |d_−² − d_+²|` measures how asymmetric that contact is;
//! its correlation with the carbonyl-carbon torsion is the regression target.

use crate::curvature::{profile_backbone, NormalAnchor};
use crate::curve::{extract_curve, AtomClass, AtomSelection, CurveError};
use crate::pdb::Structure;
use crate::stats::{regress, RegressionResult, StatsError};
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HbondError {
    #[error("layer list has {0} chains, at least 3 required")]
    LayerListTooShort(usize),
    #[error("layer chain '{0}' not found")]
    ChainNotFound(char),
    #[error("layer chain '{chain}': {source}")]
    Profile {
        chain: char,
        source: crate::curvature::CurvatureError,
    },
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Stats(#[from] StatsError),
}

/// Distances from one carbonyl oxygen to the donor nitrogens of the two
/// neighboring layers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LayerPairDistance {
    /// Position of the layer in the user-supplied stacking order.
    pub layer_index: usize,
    pub residue_seq: i32,
    /// ‖O_i^* − N_{i+1}^(*−1)‖ in Å.
    pub d_minus: f64,
    /// ‖O_i^* − N_{i+1}^(*+1)‖ in Å.
    pub d_plus: f64,
    /// |d_minus² − d_plus²| in Å².
    pub dtilde: f64,
}

/// Distance records plus skip accounting.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerDistanceReport {
    pub records: Vec<LayerPairDistance>,
    /// First and last layers have only one neighbor and are skipped.
    pub skipped_boundary_layers: usize,
    /// Residues lacking O or a neighbor-layer N_{i+1}.
    pub skipped_residues: usize,
}

/// Squared distance differences for every interior layer of the stack.
///
/// `layer_order` lists chain ids bottom-to-top; PDB files do not encode
/// stacking order, so it is caller-supplied.
pub fn squared_distance_differences(
    structure: &Structure,
    layer_order: &[char],
) -> Result<LayerDistanceReport, HbondError> {
    if layer_order.len() < 3 {
        return Err(HbondError::LayerListTooShort(layer_order.len()));
    }
    for &id in layer_order {
        if structure.chain(id).is_none() {
            return Err(HbondError::ChainNotFound(id));
        }
    }
    let mut records = Vec::new();
    let mut skipped_residues = 0usize;
    for (offset, trio) in layer_order.windows(3).enumerate() {
        let idx = offset + 1;
        let below = structure.chain(trio[0]).unwrap();
        let chain = structure.chain(trio[1]).unwrap();
        let above = structure.chain(trio[2]).unwrap();
        for residue in &chain.residues {
            let Some(oxygen) = residue.atom("O") else {
                skipped_residues += 1;
                continue;
            };
            let donor = |c: &crate::pdb::Chain| {
                c.residue(residue.seq + 1)
                    .and_then(|r| r.atom("N"))
                    .map(|a| a.position)
            };
            let (Some(n_below), Some(n_above)) = (donor(below), donor(above)) else {
                skipped_residues += 1;
                continue;
            };
            let d_minus = (oxygen.position - n_below).norm();
            let d_plus = (oxygen.position - n_above).norm();
            records.push(LayerPairDistance {
                layer_index: idx,
                residue_seq: residue.seq,
                d_minus,
                d_plus,
                dtilde: (d_minus * d_minus - d_plus * d_plus).abs(),
            });
        }
    }
    Ok(LayerDistanceReport {
        records,
        skipped_boundary_layers: 2,
        skipped_residues,
    })
}

/// One joined (|τ| at carbonyl carbon, d̃) observation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TorsionDistanceSample {
    pub layer_index: usize,
    pub residue_seq: i32,
    pub abs_torsion: f64,
    pub dtilde: f64,
}

/// Joined samples plus exclusion accounting for the regression.
#[derive(Debug, Clone, PartialEq)]
pub struct TorsionDistanceJoin {
    pub samples: Vec<TorsionDistanceSample>,
    pub distances: LayerDistanceReport,
    /// Distance records without a matching non-degenerate carbonyl torsion.
    pub unmatched_records: usize,
    /// Degenerate curvature windows encountered across the joined layers.
    pub degenerate_windows: usize,
}

/// Join carbonyl-carbon torsions with the squared distance differences,
/// keyed by (layer, residue).
pub fn torsion_distance_join(
    structure: &Structure,
    layer_order: &[char],
    anchor: NormalAnchor,
) -> Result<TorsionDistanceJoin, HbondError> {
    let distances = squared_distance_differences(structure, layer_order)?;

    // |τ| at carbonyl carbons per (layer, residue).
    let mut torsion_of: BTreeMap<(usize, i32), f64> = BTreeMap::new();
    let mut degenerate_windows = 0usize;
    for (offset, &layer) in layer_order[1..layer_order.len() - 1].iter().enumerate() {
        let idx = offset + 1;
        let curve = extract_curve(structure, layer, AtomSelection::NCaC)?;
        let profile = profile_backbone(&curve, anchor)
            .map_err(|source| HbondError::Profile { chain: layer, source })?;
        degenerate_windows += profile.degenerate_count;
        for entry in &profile.entries {
            if entry.atom_class != AtomClass::C {
                continue;
            }
            if let Some((_, tau)) = entry.result.values() {
                let seq = curve.labels[entry.vertex_index].residue_seq;
                torsion_of.insert((idx, seq), tau.abs());
            }
        }
    }

    let mut samples = Vec::new();
    let mut unmatched_records = 0usize;
    for record in &distances.records {
        match torsion_of.get(&(record.layer_index, record.residue_seq)) {
            Some(&abs_torsion) => samples.push(TorsionDistanceSample {
                layer_index: record.layer_index,
                residue_seq: record.residue_seq,
                abs_torsion,
                dtilde: record.dtilde,
            }),
            None => unmatched_records += 1,
        }
    }
    Ok(TorsionDistanceJoin {
        samples,
        distances,
        unmatched_records,
        degenerate_windows,
    })
}

/// OLS of |τ| at carbonyl carbons against matched squared distance
/// differences.
pub fn regress_torsion_vs_distance(
    taus: &[f64],
    dtildes: &[f64],
) -> Result<RegressionResult, StatsError> {
    regress(dtildes, taus)
}
