//! Column reduction of the Z/2 boundary matrix in filtration order.
//!
//! Standard algorithm with the twist (clearing) optimization: dimensions are
//! processed top-down, and the column of a simplex already paired as a birth
//! is known to reduce to zero, so it is skipped.

use super::{faces_of, DiagramPoint, FilteredComplex, PersistenceDiagram};
use std::collections::HashMap;

/// Symmetric difference of two ascending index lists (Z/2 column addition).
fn add_columns(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Persistence diagram of a filtered complex by boundary-matrix reduction.
///
/// Zero-persistence pairs are dropped from the emitted diagram; classes of
/// the complex's top dimension are truncation artifacts of the Vietoris–Rips
/// cutoff and are not reported (`max_dim` 2 yields H0 and H1).
pub fn compute_persistence(complex: &FilteredComplex) -> PersistenceDiagram {
    let simplices = complex.simplices();
    let n = simplices.len();

    let mut index_of: HashMap<(u8, [u32; 3]), usize> = HashMap::with_capacity(n);
    for (i, s) in simplices.iter().enumerate() {
        index_of.insert((s.dim, s.vertices), i);
    }

    let mut pivot_of_row: Vec<Option<usize>> = vec![None; n];
    let mut reduced: Vec<Option<Vec<usize>>> = vec![None; n];
    let mut is_death = vec![false; n];
    let mut is_paired_birth = vec![false; n];
    let mut cleared = vec![false; n];
    let mut pairs: Vec<(usize, usize)> = Vec::new();

    let top_dim = complex.max_dim() as u8;
    for dim in (1..=top_dim).rev() {
        for j in 0..n {
            if simplices[j].dim != dim || cleared[j] {
                continue;
            }
            let mut col: Vec<usize> = faces_of(&simplices[j])
                .iter()
                .map(|f| index_of[&(f.dim, f.vertices)])
                .collect();
            col.sort_unstable();
            while let Some(&low) = col.last() {
                match pivot_of_row[low] {
                    Some(k) => {
                        col = add_columns(&col, reduced[k].as_deref().unwrap_or(&[]));
                    }
                    None => {
                        pivot_of_row[low] = Some(j);
                        is_death[j] = true;
                        is_paired_birth[low] = true;
                        cleared[low] = true;
                        pairs.push((low, j));
                        break;
                    }
                }
            }
            reduced[j] = Some(col);
        }
    }

    let emit_dim = |d: u8| -> bool { (d as usize) < complex.max_dim() || complex.max_dim() == 0 };

    let mut points = Vec::new();
    for (birth_idx, death_idx) in pairs {
        let s = &simplices[birth_idx];
        if !emit_dim(s.dim) {
            continue;
        }
        let (birth, death) = (s.value, simplices[death_idx].value);
        if death > birth {
            points.push(DiagramPoint {
                dim: s.dim,
                birth,
                death,
            });
        }
    }
    for (i, s) in simplices.iter().enumerate() {
        if !is_death[i] && !is_paired_birth[i] && emit_dim(s.dim) {
            points.push(DiagramPoint {
                dim: s.dim,
                birth: s.value,
                death: f64::INFINITY,
            });
        }
    }
    points.sort_by(|a, b| {
        a.dim
            .cmp(&b.dim)
            .then(a.birth.total_cmp(&b.birth))
            .then(a.death.total_cmp(&b.death))
    });
    PersistenceDiagram { points }
}
