//! Command execution: resolved configs, artifact writing, manifests and the
//! error-to-exit-code mapping.

use fibrilgeom::align::{kabsch_align, rmsd, AlignError};
use fibrilgeom::curvature::{profile_backbone, CurvatureError, NormalAnchor};
use fibrilgeom::curve::{extract_curve, AtomSelection, CurveError, DiscreteCurve};
use fibrilgeom::hbond::{regress_torsion_vs_distance, torsion_distance_join, HbondError};
use fibrilgeom::hop::{threshold_map, truncated_hop_matrix, HopError};
use fibrilgeom::io;
use fibrilgeom::pdb::{parse_structure, PdbError, Structure};
use fibrilgeom::ph::{compute_persistence, vr_filtration, PhError};
use fibrilgeom::stats::StatsError;
use serde::{Deserialize, Serialize};
use serde_json::json;
use std::path::{Path, PathBuf};

/// Exit categories: input errors exit 2, numeric degeneracies 3, everything
/// else 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    Input,
    Degeneracy,
    Internal,
}

impl ErrorCategory {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorCategory::Input => 2,
            ErrorCategory::Degeneracy => 3,
            ErrorCategory::Internal => 4,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ErrorCategory::Input => "input",
            ErrorCategory::Degeneracy => "degeneracy",
            ErrorCategory::Internal => "internal",
        }
    }
}

#[derive(Debug)]
pub struct AppError {
    pub category: ErrorCategory,
    pub message: String,
}

impl AppError {
    pub fn input(message: impl Into<String>) -> Self {
        AppError {
            category: ErrorCategory::Input,
            message: message.into(),
        }
    }

    fn degeneracy(message: impl Into<String>) -> Self {
        AppError {
            category: ErrorCategory::Degeneracy,
            message: message.into(),
        }
    }

    fn internal(message: impl Into<String>) -> Self {
        AppError {
            category: ErrorCategory::Internal,
            message: message.into(),
        }
    }
}

impl From<PdbError> for AppError {
    fn from(e: PdbError) -> Self {
        AppError::input(e.to_string())
    }
}

impl From<CurveError> for AppError {
    fn from(e: CurveError) -> Self {
        match e {
            CurveError::CoincidentVertices(_) => AppError::degeneracy(e.to_string()),
            _ => AppError::input(e.to_string()),
        }
    }
}

impl From<HopError> for AppError {
    fn from(e: HopError) -> Self {
        AppError::input(e.to_string())
    }
}

impl From<AlignError> for AppError {
    fn from(e: AlignError) -> Self {
        match e {
            AlignError::LengthMismatch(..) => AppError::input(e.to_string()),
            AlignError::DegenerateConfiguration(_) => AppError::degeneracy(e.to_string()),
        }
    }
}

impl From<CurvatureError> for AppError {
    fn from(e: CurvatureError) -> Self {
        AppError::input(e.to_string())
    }
}

impl From<HbondError> for AppError {
    fn from(e: HbondError) -> Self {
        match e {
            HbondError::Stats(inner) => inner.into(),
            HbondError::Curve(inner) => inner.into(),
            _ => AppError::input(e.to_string()),
        }
    }
}

impl From<StatsError> for AppError {
    fn from(e: StatsError) -> Self {
        AppError::degeneracy(e.to_string())
    }
}

impl From<PhError> for AppError {
    fn from(e: PhError) -> Self {
        match e {
            PhError::InvalidParameter(_) => AppError::input(e.to_string()),
            _ => AppError::degeneracy(e.to_string()),
        }
    }
}

impl From<std::io::Error> for AppError {
    fn from(e: std::io::Error) -> Self {
        AppError::internal(e.to_string())
    }
}

/// Which backbone atoms to use as curve vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum AtomsArg {
    #[default]
    Ca,
    Ncac,
}

impl From<AtomsArg> for AtomSelection {
    fn from(a: AtomsArg) -> Self {
        match a {
            AtomsArg::Ca => AtomSelection::CaOnly,
            AtomsArg::Ncac => AtomSelection::NCaC,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum AnchorArg {
    #[default]
    B,
    A,
}

impl From<AnchorArg> for NormalAnchor {
    fn from(a: AnchorArg) -> Self {
        match a {
            AnchorArg::B => NormalAnchor::B,
            AnchorArg::A => NormalAnchor::A,
        }
    }
}

/// Inclusive residue range `start:end`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueRange {
    pub start: i32,
    pub end: i32,
}

impl std::str::FromStr for ResidueRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (a, b) = s
            .split_once(':')
            .ok_or_else(|| format!("range '{s}' is not of the form start:end"))?;
        let start: i32 = a
            .trim()
            .parse()
            .map_err(|_| format!("bad range start '{a}'"))?;
        let end: i32 = b
            .trim()
            .parse()
            .map_err(|_| format!("bad range end '{b}'"))?;
        if start > end {
            return Err(format!("range start {start} exceeds end {end}"));
        }
        Ok(ResidueRange { start, end })
    }
}

/// Resolved run configuration; serialized verbatim into the manifest so a run
/// can be reproduced from it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum RunConfig {
    Hop {
        a: PathBuf,
        b: PathBuf,
        chain: char,
        chain_b: Option<char>,
        atoms: AtomsArg,
        range: Option<ResidueRange>,
        cutoff: Option<f64>,
    },
    Geometry {
        input: PathBuf,
        chain: char,
        range: Option<ResidueRange>,
        normal_anchor: AnchorArg,
    },
    Regress {
        input: PathBuf,
        layers: Vec<char>,
        normal_anchor: AnchorArg,
    },
    Ph {
        input: PathBuf,
        chain: char,
        atoms: AtomsArg,
        range: Option<ResidueRange>,
        max_eps: f64,
    },
    Compare {
        a: PathBuf,
        b: PathBuf,
        chain: char,
        chain_b: Option<char>,
        atoms: AtomsArg,
        range: Option<ResidueRange>,
        max_eps: f64,
        q: f64,
    },
    Rmsd {
        a: PathBuf,
        b: PathBuf,
        chain: char,
        chain_b: Option<char>,
        atoms: AtomsArg,
        range: Option<ResidueRange>,
    },
}

impl RunConfig {
    /// Require the numeric parameters to be positive and finite before
    /// touching inputs.
    pub fn validate(&self) -> Result<(), AppError> {
        let positive = |value: f64, what: &str| -> Result<(), AppError> {
            if value.is_finite() && value > 0.0 {
                Ok(())
            } else {
                Err(AppError::input(format!("{what} must be positive")))
            }
        };
        match self {
            RunConfig::Hop {
                cutoff: Some(c), ..
            } => positive(*c, "cutoff"),
            RunConfig::Ph { max_eps, .. } => positive(*max_eps, "max-eps"),
            RunConfig::Compare { max_eps, q, .. } => {
                positive(*max_eps, "max-eps")?;
                if q.is_finite() && *q >= 1.0 {
                    Ok(())
                } else {
                    Err(AppError::input("q must be at least 1"))
                }
            }
            _ => Ok(()),
        }
    }
}

fn load_structure(path: &Path) -> Result<Structure, AppError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| AppError::input(format!("{}: {e}", path.display())))?;
    Ok(parse_structure(&text)?)
}

fn load_curve(
    path: &Path,
    chain: char,
    atoms: AtomsArg,
    range: Option<ResidueRange>,
) -> Result<DiscreteCurve, AppError> {
    let structure = load_structure(path)?;
    let mut curve = extract_curve(&structure, chain, atoms.into())?;
    if let Some(r) = range {
        curve = curve.restrict_residues(r.start, r.end)?;
    }
    Ok(curve)
}

fn write_artifact(out: &Path, name: &str, contents: &str) -> Result<(), AppError> {
    std::fs::write(out.join(name), contents)?;
    Ok(())
}

fn write_json(out: &Path, name: &str, value: &serde_json::Value) -> Result<(), AppError> {
    let mut text =
        serde_json::to_string_pretty(value).map_err(|e| AppError::internal(e.to_string()))?;
    text.push('\n');
    write_artifact(out, name, &text)
}

fn write_manifest(
    out: &Path,
    config: &RunConfig,
    exclusions: serde_json::Value,
) -> Result<(), AppError> {
    let manifest = json!({
        "config": config,
        "version": env!("CARGO_PKG_VERSION"),
        "exclusions": exclusions,
    });
    write_json(out, "manifest.json", &manifest)
}

/// Execute one resolved configuration, writing artifacts into `out`.
pub fn run(config: &RunConfig, out: &Path) -> Result<(), AppError> {
    config.validate()?;
    std::fs::create_dir_all(out)?;
    match config {
        RunConfig::Hop {
            a,
            b,
            chain,
            chain_b,
            atoms,
            range,
            cutoff,
        } => {
            let curve_a = load_curve(a, *chain, *atoms, *range)?;
            let curve_b = load_curve(b, chain_b.unwrap_or(*chain), *atoms, *range)?;
            let n = curve_a.len().min(curve_b.len());
            let matrix = truncated_hop_matrix(&curve_a, &curve_b, n)?;
            let labels = io::vertex_labels(&curve_a, *atoms == AtomsArg::Ca);
            write_artifact(out, "hop_matrix.csv", &io::hop_matrix_csv(&labels, &matrix))?;
            write_json(
                out,
                "hop_matrix.json",
                &io::hop_matrix_json(&labels, &matrix),
            )?;
            if let Some(cutoff) = cutoff {
                let map = threshold_map(&matrix, *cutoff);
                write_artifact(out, "binary_map.csv", &io::binary_map_csv(&labels, &map))?;
            }
            let exclusions = json!({
                "gaps_in_a": curve_a.has_gaps,
                "gaps_in_b": curve_b.has_gaps,
                "vertices_truncated_to": n,
            });
            write_manifest(out, config, exclusions)
        }
        RunConfig::Geometry {
            input,
            chain,
            range,
            normal_anchor,
        } => {
            let structure = load_structure(input)?;
            let mut curve = extract_curve(&structure, *chain, AtomSelection::NCaC)?;
            if let Some(r) = range {
                curve = curve.restrict_residues(r.start, r.end)?;
            }
            let profile = profile_backbone(&curve, (*normal_anchor).into())?;
            write_artifact(out, "geometry.csv", &io::geometry_csv(&curve, &profile))?;
            write_json(
                out,
                "geometry_summary.json",
                &io::geometry_summary_json(&profile),
            )?;
            let exclusions = json!({
                "degenerate_windows": profile.degenerate_count,
                "gaps": curve.has_gaps,
            });
            write_manifest(out, config, exclusions)
        }
        RunConfig::Regress {
            input,
            layers,
            normal_anchor,
        } => {
            let structure = load_structure(input)?;
            let join = torsion_distance_join(&structure, layers, (*normal_anchor).into())?;
            let taus: Vec<f64> = join.samples.iter().map(|s| s.abs_torsion).collect();
            let dtildes: Vec<f64> = join.samples.iter().map(|s| s.dtilde).collect();
            let result = regress_torsion_vs_distance(&taus, &dtildes)?;
            let exclusions = json!({
                "skipped_boundary_layers": join.distances.skipped_boundary_layers,
                "skipped_residues": join.distances.skipped_residues,
                "unmatched_records": join.unmatched_records,
                "degenerate_windows": join.degenerate_windows,
            });
            write_artifact(
                out,
                "hbond.csv",
                &io::hbond_csv(&join.distances.records, &join.samples),
            )?;
            write_json(
                out,
                "regression.json",
                &io::regression_json(&result, exclusions.clone()),
            )?;
            write_manifest(out, config, exclusions)
        }
        RunConfig::Ph {
            input,
            chain,
            atoms,
            range,
            max_eps,
        } => {
            let curve = load_curve(input, *chain, *atoms, *range)?;
            let complex = vr_filtration(&curve.vertices, 2, *max_eps)?;
            let diagram = compute_persistence(&complex);
            write_artifact(out, "diagram.csv", &io::diagram_csv(&diagram))?;
            let exclusions = json!({ "gaps": curve.has_gaps, "simplices": complex.len() });
            write_manifest(out, config, exclusions)
        }
        RunConfig::Compare {
            a,
            b,
            chain,
            chain_b,
            atoms,
            range,
            max_eps,
            q,
        } => {
            let curve_a = load_curve(a, *chain, *atoms, *range)?;
            let curve_b = load_curve(b, chain_b.unwrap_or(*chain), *atoms, *range)?;
            let report = fibrilgeom::ph::compare_structures(
                &curve_a.vertices,
                &curve_b.vertices,
                *max_eps,
                *q,
            )?;
            write_artifact(out, "diagram_a.csv", &io::diagram_csv(&report.diagram1))?;
            write_artifact(out, "diagram_b.csv", &io::diagram_csv(&report.diagram2))?;
            write_json(out, "distances.json", &io::distances_json(&report))?;
            let exclusions = json!({
                "gaps_in_a": curve_a.has_gaps,
                "gaps_in_b": curve_b.has_gaps,
            });
            write_manifest(out, config, exclusions)
        }
        RunConfig::Rmsd {
            a,
            b,
            chain,
            chain_b,
            atoms,
            range,
        } => {
            let curve_a = load_curve(a, *chain, *atoms, *range)?;
            let curve_b = load_curve(b, chain_b.unwrap_or(*chain), *atoms, *range)?;
            let n = curve_a.len().min(curve_b.len());
            let alignment = kabsch_align(&curve_a.vertices[..n], &curve_b.vertices[..n])?;
            let unaligned = rmsd(&curve_a.vertices[..n], &curve_b.vertices[..n])?;
            let mut report = io::alignment_json(&alignment);
            report["rmsd_unaligned"] = json!(unaligned);
            report["n"] = json!(n);
            write_json(out, "rmsd.json", &report)?;
            let exclusions = json!({
                "gaps_in_a": curve_a.has_gaps,
                "gaps_in_b": curve_b.has_gaps,
                "vertices_truncated_to": n,
            });
            write_manifest(out, config, exclusions)
        }
    }
}

/// Reload the config of a previous run from its manifest.
pub fn config_from_manifest(path: &Path) -> Result<RunConfig, AppError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| AppError::input(format!("{}: {e}", path.display())))?;
    let manifest: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| AppError::input(format!("bad manifest: {e}")))?;
    serde_json::from_value(manifest["config"].clone())
        .map_err(|e| AppError::input(format!("bad manifest config: {e}")))
}
