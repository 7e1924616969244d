//! Exact bottleneck and Wasserstein-q distances between persistence diagrams.
//!
//! Bottleneck: binary search over the O(n²) candidate values (all inter-point
//! ℓ∞ distances and all diagonal gaps) with a maximum-bipartite-matching
//! feasibility test. Wasserstein: min-cost perfect matching on the
//! diagonal-augmented bipartite graph via the Hungarian algorithm with
//! potentials.
//!
//! Diagrams with infinite deaths are matched strictly: essential counts must
//! agree per dimension and essentials pair by birth (sorted order is optimal
//! for the ℓ∞ ground cost). Use
//! [`PersistenceDiagram::replace_infinite`](super::PersistenceDiagram::replace_infinite)
//! first for the truncated convention.

use super::{PersistenceDiagram, PhError};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DistanceKind {
    Bottleneck,
    Wasserstein,
}

/// One assignment in an optimal matching; indices refer to the per-dimension
/// point lists of the two diagrams in their stored order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Pairing {
    Points { first: usize, second: usize },
    FirstToDiagonal { first: usize },
    SecondToDiagonal { second: usize },
}

/// Diagram distance value together with a matching that achieves it.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagramDistance {
    pub value: f64,
    pub kind: DistanceKind,
    pub q: Option<f64>,
    pub matching: Vec<Pairing>,
}

#[derive(Debug, Clone, Copy)]
struct Bar {
    birth: f64,
    death: f64,
    /// Index into the per-dimension point list.
    index: usize,
}

impl Bar {
    fn diagonal_gap(&self) -> f64 {
        (self.death - self.birth) / 2.0
    }
}

fn linf(a: &Bar, b: &Bar) -> f64 {
    (a.birth - b.birth).abs().max((a.death - b.death).abs())
}

/// Split one dimension of a diagram into finite bars and essential births.
fn split_dim(diagram: &PersistenceDiagram, dim: u8) -> (Vec<Bar>, Vec<(f64, usize)>) {
    let mut finite = Vec::new();
    let mut essential = Vec::new();
    for (index, p) in diagram.in_dim(dim).enumerate() {
        if p.is_essential() {
            essential.push((p.birth, index));
        } else {
            finite.push(Bar {
                birth: p.birth,
                death: p.death,
                index,
            });
        }
    }
    (finite, essential)
}

/// Pair essential points across diagrams by sorted birth, which is optimal
/// for both the max and the sum objective. Errors when counts differ.
fn pair_essentials(
    dim: u8,
    mut e1: Vec<(f64, usize)>,
    mut e2: Vec<(f64, usize)>,
) -> Result<Vec<(f64, usize, usize)>, PhError> {
    if e1.len() != e2.len() {
        return Err(PhError::EssentialMismatch {
            dim,
            first: e1.len(),
            second: e2.len(),
        });
    }
    e1.sort_by(|a, b| a.0.total_cmp(&b.0));
    e2.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(e1
        .into_iter()
        .zip(e2)
        .map(|((b1, i1), (b2, i2))| ((b1 - b2).abs(), i1, i2))
        .collect())
}

/// Kuhn's augmenting-path maximum bipartite matching.
fn max_matching(adjacency: &[Vec<usize>], n_right: usize) -> (usize, Vec<Option<usize>>) {
    let n_left = adjacency.len();
    let mut right_match: Vec<Option<usize>> = vec![None; n_right];
    let mut size = 0;

    fn try_augment(
        u: usize,
        adjacency: &[Vec<usize>],
        visited: &mut [bool],
        right_match: &mut [Option<usize>],
    ) -> bool {
        for &v in &adjacency[u] {
            if visited[v] {
                continue;
            }
            visited[v] = true;
            if right_match[v].is_none()
                || try_augment(right_match[v].unwrap(), adjacency, visited, right_match)
            {
                right_match[v] = Some(u);
                return true;
            }
        }
        false
    }

    for u in 0..n_left {
        let mut visited = vec![false; n_right];
        if try_augment(u, adjacency, &mut visited, &mut right_match) {
            size += 1;
        }
    }
    (size, right_match)
}

/// Build the proxy-augmented adjacency at threshold `delta`.
///
/// Left nodes: the n1 bars of the first diagram followed by n2 proxies.
/// Right nodes: the n2 bars of the second diagram followed by n1 proxies.
/// Bar i pairs with its own proxy when its diagonal gap fits; proxy–proxy
/// edges are free.
fn adjacency_at(b1: &[Bar], b2: &[Bar], delta: f64) -> Vec<Vec<usize>> {
    let (n1, n2) = (b1.len(), b2.len());
    let mut adjacency = vec![Vec::new(); n1 + n2];
    for (i, bar) in b1.iter().enumerate() {
        for (j, other) in b2.iter().enumerate() {
            if linf(bar, other) <= delta {
                adjacency[i].push(j);
            }
        }
        if bar.diagonal_gap() <= delta {
            adjacency[i].push(n2 + i);
        }
    }
    for (j, other) in b2.iter().enumerate() {
        if other.diagonal_gap() <= delta {
            adjacency[n1 + j].push(j);
        }
        for i in 0..n1 {
            adjacency[n1 + j].push(n2 + i);
        }
    }
    adjacency
}

fn matching_from_assignment(
    b1: &[Bar],
    b2: &[Bar],
    right_match: &[Option<usize>],
    essentials: &[(f64, usize, usize)],
) -> Vec<Pairing> {
    let (n1, n2) = (b1.len(), b2.len());
    let mut matching = Vec::new();
    for (right, left) in right_match.iter().enumerate() {
        let Some(left) = *left else { continue };
        match (left < n1, right < n2) {
            (true, true) => matching.push(Pairing::Points {
                first: b1[left].index,
                second: b2[right].index,
            }),
            (true, false) => matching.push(Pairing::FirstToDiagonal {
                first: b1[left].index,
            }),
            (false, true) => matching.push(Pairing::SecondToDiagonal {
                second: b2[right].index,
            }),
            (false, false) => {}
        }
    }
    for &(_, i1, i2) in essentials {
        matching.push(Pairing::Points {
            first: i1,
            second: i2,
        });
    }
    matching.sort_by_key(|p| match *p {
        Pairing::Points { first, .. } => (0, first),
        Pairing::FirstToDiagonal { first } => (1, first),
        Pairing::SecondToDiagonal { second } => (2, second),
    });
    matching
}

/// Exact bottleneck distance `W_∞` of one diagram dimension.
pub fn bottleneck(
    p1: &PersistenceDiagram,
    p2: &PersistenceDiagram,
    dim: u8,
) -> Result<DiagramDistance, PhError> {
    let (b1, e1) = split_dim(p1, dim);
    let (b2, e2) = split_dim(p2, dim);
    let essentials = pair_essentials(dim, e1, e2)?;
    let essential_floor = essentials.iter().map(|e| e.0).fold(0.0f64, f64::max);

    let mut candidates: Vec<f64> = vec![0.0, essential_floor];
    for a in &b1 {
        candidates.push(a.diagonal_gap());
        for b in &b2 {
            candidates.push(linf(a, b));
        }
    }
    for b in &b2 {
        candidates.push(b.diagonal_gap());
    }
    candidates.retain(|c| *c >= essential_floor);
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();

    let target = b1.len() + b2.len();
    let feasible = |delta: f64| -> (bool, Vec<Option<usize>>) {
        let adjacency = adjacency_at(&b1, &b2, delta);
        let (size, right_match) = max_matching(&adjacency, target);
        (size == target, right_match)
    };

    // Binary search the smallest feasible candidate.
    let (mut lo, mut hi) = (0usize, candidates.len() - 1);
    debug_assert!(feasible(candidates[hi]).0);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if feasible(candidates[mid]).0 {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let value = candidates[lo];
    let (_, right_match) = feasible(value);
    Ok(DiagramDistance {
        value,
        kind: DistanceKind::Bottleneck,
        q: None,
        matching: matching_from_assignment(&b1, &b2, &right_match, &essentials),
    })
}

/// Hungarian algorithm with potentials on a square cost matrix; returns the
/// column assigned to each row.
fn hungarian(cost: &[Vec<f64>]) -> Vec<usize> {
    let n = cost.len();
    if n == 0 {
        return Vec::new();
    }
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut p = vec![0usize; n + 1]; // p[j]: row assigned to column j (1-based rows)
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assignment = vec![0usize; n];
    for j in 1..=n {
        if p[j] > 0 {
            assignment[p[j] - 1] = j - 1;
        }
    }
    assignment
}

/// Exact Wasserstein-q distance of one diagram dimension (`q ≥ 1`).
pub fn wasserstein(
    p1: &PersistenceDiagram,
    p2: &PersistenceDiagram,
    dim: u8,
    q: f64,
) -> Result<DiagramDistance, PhError> {
    if q.is_nan() || q < 1.0 {
        return Err(PhError::InvalidParameter("q must be at least 1"));
    }
    let (b1, e1) = split_dim(p1, dim);
    let (b2, e2) = split_dim(p2, dim);
    let essentials = pair_essentials(dim, e1, e2)?;
    let essential_sum: f64 = essentials.iter().map(|e| e.0.powf(q)).sum();

    let (n1, n2) = (b1.len(), b2.len());
    let n = n1 + n2;
    if n == 0 {
        // Adding +0.0 normalizes the -0.0 that empty f64 sums produce.
        return Ok(DiagramDistance {
            value: (essential_sum + 0.0).powf(1.0 / q),
            kind: DistanceKind::Wasserstein,
            q: Some(q),
            matching: matching_from_assignment(&b1, &b2, &[], &essentials),
        });
    }

    // Diagonal-augmented square cost matrix: each side padded with one proxy
    // per opposing point, proxy-proxy cost 0. A bar may use any proxy at its
    // own diagonal cost.
    let cost: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| match (i < n1, j < n2) {
                    (true, true) => linf(&b1[i], &b2[j]).powf(q),
                    (true, false) => b1[i].diagonal_gap().powf(q),
                    (false, true) => b2[j].diagonal_gap().powf(q),
                    (false, false) => 0.0,
                })
                .collect()
        })
        .collect();
    let assignment = hungarian(&cost);
    let finite_sum: f64 = assignment
        .iter()
        .enumerate()
        .map(|(i, &j)| cost[i][j])
        .sum();

    let mut right_match: Vec<Option<usize>> = vec![None; n];
    for (i, &j) in assignment.iter().enumerate() {
        right_match[j] = Some(i);
    }
    Ok(DiagramDistance {
        value: (finite_sum + essential_sum + 0.0).powf(1.0 / q),
        kind: DistanceKind::Wasserstein,
        q: Some(q),
        matching: matching_from_assignment(&b1, &b2, &right_match, &essentials),
    })
}
