//! CSV and JSON emission for the analysis artifacts.
//!
//! Formatting is fixed so repeated runs produce byte-identical files: hop
//! matrices use 3 decimals, other reals use shortest round-trip formatting,
//! and JSON objects serialize with deterministic key order.

use crate::align::AlignmentResult;
use crate::curvature::GeometryProfile;
use crate::curve::DiscreteCurve;
use crate::hbond::{LayerPairDistance, TorsionDistanceSample};
use crate::hop::{BinaryMap, HopDistanceMatrix};
use crate::ph::{ComparisonReport, PersistenceDiagram};
use crate::stats::RegressionResult;
use serde_json::json;
use std::fmt::Write as _;

/// Residue label of one curve vertex, `chain:resseq` for Cα traces and
/// `chain:resseq:atom` otherwise.
pub fn vertex_labels(curve: &DiscreteCurve, ca_only: bool) -> Vec<String> {
    curve
        .labels
        .iter()
        .map(|l| {
            if ca_only {
                format!("{}:{}", l.chain_id, l.residue_seq)
            } else {
                format!("{}:{}:{}", l.chain_id, l.residue_seq, l.atom_class.label())
            }
        })
        .collect()
}

/// Hop matrix as CSV with a label header row and column, values in Å with 3
/// decimals.
pub fn hop_matrix_csv(labels: &[String], matrix: &HopDistanceMatrix) -> String {
    let n = matrix.n();
    let mut out = String::new();
    out.push_str("label");
    for label in &labels[..n] {
        let _ = write!(out, ",{label}");
    }
    out.push('\n');
    for (i, row) in matrix.rows().enumerate() {
        let _ = write!(out, "{}", labels[i]);
        for value in row {
            let _ = write!(out, ",{value:.3}");
        }
        out.push('\n');
    }
    out
}

/// Binary threshold map as 0/1 CSV with the same label layout.
pub fn binary_map_csv(labels: &[String], map: &BinaryMap) -> String {
    let n = map.n();
    let mut out = String::new();
    out.push_str("label");
    for label in &labels[..n] {
        let _ = write!(out, ",{label}");
    }
    out.push('\n');
    for (i, row) in map.rows().enumerate() {
        let _ = write!(out, "{}", labels[i]);
        for &value in row {
            let _ = write!(out, ",{}", u8::from(value));
        }
        out.push('\n');
    }
    out
}

/// Hop matrix as `{"labels": [...], "matrix": [[...]]}`.
pub fn hop_matrix_json(labels: &[String], matrix: &HopDistanceMatrix) -> serde_json::Value {
    json!({
        "labels": &labels[..matrix.n()],
        "matrix": matrix.rows().map(|r| r.to_vec()).collect::<Vec<_>>(),
    })
}

/// Per-vertex geometry as CSV:
/// chain, residue_seq, atom_class, curvature, torsion, degenerate_reason.
pub fn geometry_csv(curve: &DiscreteCurve, profile: &GeometryProfile) -> String {
    let mut out =
        String::from("chain,residue_seq,atom_class,curvature,torsion,degenerate_reason\n");
    for entry in &profile.entries {
        let label = &curve.labels[entry.vertex_index];
        match entry.result.values() {
            Some((kappa, tau)) => {
                let _ = writeln!(
                    out,
                    "{},{},{},{kappa},{tau},",
                    label.chain_id,
                    label.residue_seq,
                    entry.atom_class.label()
                );
            }
            None => {
                let reason = entry.result.degenerate_reason().unwrap();
                let _ = writeln!(
                    out,
                    "{},{},{},,,{}",
                    label.chain_id,
                    label.residue_seq,
                    entry.atom_class.label(),
                    reason.label()
                );
            }
        }
    }
    out
}

/// The 16 summary statistics plus exclusion count.
pub fn geometry_summary_json(profile: &GeometryProfile) -> serde_json::Value {
    json!({
        "summary": profile.summary,
        "degenerate_count": profile.degenerate_count,
    })
}

/// Layer distance records with the joined carbonyl torsion where available:
/// layer, residue, d_minus, d_plus, dtilde, abs_torsion_C.
pub fn hbond_csv(records: &[LayerPairDistance], samples: &[TorsionDistanceSample]) -> String {
    let mut out = String::from("layer,residue,d_minus,d_plus,dtilde,abs_torsion_C\n");
    for r in records {
        let torsion = samples
            .iter()
            .find(|s| s.layer_index == r.layer_index && s.residue_seq == r.residue_seq)
            .map(|s| s.abs_torsion.to_string())
            .unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{torsion}",
            r.layer_index, r.residue_seq, r.d_minus, r.d_plus, r.dtilde
        );
    }
    out
}

/// Regression report with the Table-3 shaped columns.
pub fn regression_json(
    result: &RegressionResult,
    exclusions: serde_json::Value,
) -> serde_json::Value {
    json!({
        "slope": result.slope,
        "intercept": result.intercept,
        "pearson": result.pearson_r,
        "p_value": result.p_value,
        "p_value_one_sided": result.p_value_one_sided,
        "se_slope": result.se_slope,
        "se_intercept": result.se_intercept,
        "n": result.n,
        "exclusions": exclusions,
    })
}

/// Diagram as CSV with columns dimension, birth, death; infinite deaths are
/// the literal token `inf`.
pub fn diagram_csv(diagram: &PersistenceDiagram) -> String {
    let mut out = String::from("dimension,birth,death\n");
    for p in &diagram.points {
        let death = if p.is_essential() {
            "inf".to_string()
        } else {
            p.death.to_string()
        };
        let _ = writeln!(out, "{},{},{death}", p.dim, p.birth);
    }
    out
}

/// Distances as `{"dim0": {"bottleneck":…, "wasserstein":…, "q":…}, "dim1": {…}}`.
pub fn distances_json(report: &ComparisonReport) -> serde_json::Value {
    json!({
        "dim0": {
            "bottleneck": report.dim0.bottleneck,
            "wasserstein": report.dim0.wasserstein,
            "q": report.q,
        },
        "dim1": {
            "bottleneck": report.dim1.bottleneck,
            "wasserstein": report.dim1.wasserstein,
            "q": report.q,
        },
    })
}

/// Alignment result with the rotation as nested rows.
pub fn alignment_json(result: &AlignmentResult) -> serde_json::Value {
    let r = &result.rotation;
    json!({
        "rotation": [
            [r[(0, 0)], r[(0, 1)], r[(0, 2)]],
            [r[(1, 0)], r[(1, 1)], r[(1, 2)]],
            [r[(2, 0)], r[(2, 1)], r[(2, 2)]],
        ],
        "translation": [result.translation.x, result.translation.y, result.translation.z],
        "rmsd": result.rmsd,
    })
}
