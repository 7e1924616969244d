//! Discrete curves extracted from backbone atoms.
//!
//! A peptide chain becomes a polygonal curve either through its Cα trace or
//! through the full N, Cα, C backbone sequence (three vertices per residue).

use crate::pdb::Structure;
use crate::Vec3;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CurveError {
    #[error("chain '{0}' not found")]
    ChainNotFound(char),
    #[error("residue {residue_seq} lacks backbone atom {atom}")]
    MissingBackboneAtom {
        residue_seq: i32,
        atom: &'static str,
    },
    #[error("consecutive curve vertices coincide at index {0}")]
    CoincidentVertices(usize),
    #[error("curve has no vertices")]
    Empty,
    #[error("residue range {start}:{end} selects no vertices")]
    EmptyRange { start: i32, end: i32 },
}

/// Backbone atom role carried by each curve vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AtomClass {
    N,
    Ca,
    C,
}

impl AtomClass {
    pub fn label(self) -> &'static str {
        match self {
            AtomClass::N => "N",
            AtomClass::Ca => "CA",
            AtomClass::C => "C",
        }
    }
}

/// Which backbone atoms become curve vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AtomSelection {
    /// One vertex per residue at the alpha-carbon.
    CaOnly,
    /// Three vertices per residue: N, Cα, C in order.
    NCaC,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VertexLabel {
    pub chain_id: char,
    pub residue_seq: i32,
    pub atom_class: AtomClass,
}

/// Ordered polygonal curve in R³ with per-vertex provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteCurve {
    pub vertices: Vec<Vec3>,
    pub labels: Vec<VertexLabel>,
    /// Set when the source chain had gaps in residue numbering.
    pub has_gaps: bool,
}

impl DiscreteCurve {
    pub fn new(
        vertices: Vec<Vec3>,
        labels: Vec<VertexLabel>,
        has_gaps: bool,
    ) -> Result<Self, CurveError> {
        if vertices.is_empty() {
            return Err(CurveError::Empty);
        }
        debug_assert_eq!(vertices.len(), labels.len());
        for (i, pair) in vertices.windows(2).enumerate() {
            if (pair[0] - pair[1]).norm_squared() < f64::MIN_POSITIVE {
                return Err(CurveError::CoincidentVertices(i + 1));
            }
        }
        Ok(DiscreteCurve {
            vertices,
            labels,
            has_gaps,
        })
    }

    /// Curve from bare points with synthetic labels, for tests and benchmarks.
    pub fn from_points(points: Vec<Vec3>) -> Result<Self, CurveError> {
        let labels = (0..points.len())
            .map(|i| VertexLabel {
                chain_id: '-',
                residue_seq: i as i32,
                atom_class: AtomClass::Ca,
            })
            .collect();
        DiscreteCurve::new(points, labels, false)
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Sub-curve of vertices whose residue number lies in `start..=end`.
    pub fn restrict_residues(&self, start: i32, end: i32) -> Result<DiscreteCurve, CurveError> {
        let keep: Vec<usize> = (0..self.len())
            .filter(|&i| (start..=end).contains(&self.labels[i].residue_seq))
            .collect();
        if keep.is_empty() {
            return Err(CurveError::EmptyRange { start, end });
        }
        DiscreteCurve::new(
            keep.iter().map(|&i| self.vertices[i]).collect(),
            keep.iter().map(|&i| self.labels[i]).collect(),
            self.has_gaps,
        )
    }
}

/// Extract a discrete curve from one chain of a parsed structure.
///
/// `CaOnly` yields one vertex per residue; `NCaC` yields the N, Cα, C triple
/// per residue in backbone order. A residue missing a selected atom is an
/// error; gaps in residue numbering only set the `has_gaps` flag.
pub fn extract_curve(
    structure: &Structure,
    chain_id: char,
    selection: AtomSelection,
) -> Result<DiscreteCurve, CurveError> {
    let chain = structure
        .chain(chain_id)
        .ok_or(CurveError::ChainNotFound(chain_id))?;
    let mut vertices = Vec::new();
    let mut labels = Vec::new();
    let mut has_gaps = false;
    let mut prev_seq: Option<i32> = None;

    for residue in &chain.residues {
        if let Some(prev) = prev_seq {
            if residue.seq > prev + 1 {
                has_gaps = true;
            }
        }
        prev_seq = Some(residue.seq);

        let wanted: &[(&'static str, AtomClass)] = match selection {
            AtomSelection::CaOnly => &[("CA", AtomClass::Ca)],
            AtomSelection::NCaC => &[
                ("N", AtomClass::N),
                ("CA", AtomClass::Ca),
                ("C", AtomClass::C),
            ],
        };
        for &(name, class) in wanted {
            let atom = residue.atom(name).ok_or(CurveError::MissingBackboneAtom {
                residue_seq: residue.seq,
                atom: name,
            })?;
            vertices.push(atom.position);
            labels.push(VertexLabel {
                chain_id,
                residue_seq: residue.seq,
                atom_class: class,
            });
        }
    }

    DiscreteCurve::new(vertices, labels, has_gaps)
}
