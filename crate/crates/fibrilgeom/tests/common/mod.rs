//! Independent oracles shared by the integration and acceptance suites.
//!
//! The persistence oracle computes persistent Betti numbers from GF(2) ranks
//! of boundary operators at every critical value and turns them into a
//! diagram by inclusion-exclusion; it never runs the column reduction it
//! checks. The distance oracles enumerate every matching.

#![allow(dead_code)] // shared by several test binaries, each using a subset

use fibrilgeom::ph::{FilteredComplex, Simplex};

/// Column-bitmask GF(2) rank; each column is a u128 over at most 128 rows.
fn gf2_rank(columns: &mut [u128]) -> usize {
    let mut rank = 0;
    let mut pivot_with_leading_bit: [u128; 128] = [0; 128];
    for &original in columns.iter() {
        let mut col = original;
        while col != 0 {
            let lead = 127 - col.leading_zeros() as usize;
            let pivot = pivot_with_leading_bit[lead];
            if pivot == 0 {
                pivot_with_leading_bit[lead] = col;
                rank += 1;
                break;
            }
            col ^= pivot;
        }
    }
    rank
}

struct DimData {
    /// Simplices of this dimension in filtration order.
    simplices: Vec<Simplex>,
    /// Row index of each simplex keyed by its sorted vertex tuple.
    row_of: std::collections::HashMap<Vec<u32>, usize>,
}

fn collect_dim(complex: &FilteredComplex, dim: u8) -> DimData {
    let simplices: Vec<Simplex> = complex
        .simplices()
        .iter()
        .filter(|s| s.dim == dim)
        .copied()
        .collect();
    let row_of = simplices
        .iter()
        .enumerate()
        .map(|(i, s)| (s.vertex_slice().to_vec(), i))
        .collect();
    DimData { simplices, row_of }
}

fn count_at(data: &DimData, value: f64) -> usize {
    data.simplices.iter().filter(|s| s.value <= value).count()
}

/// Boundary columns of (n+1)-simplices with value ≤ t, as row bitmasks over
/// all n-simplices.
fn boundary_columns(upper: &DimData, lower: &DimData, t: f64) -> Vec<u128> {
    upper
        .simplices
        .iter()
        .filter(|s| s.value <= t)
        .map(|s| {
            let verts = s.vertex_slice();
            let mut col = 0u128;
            for omit in 0..verts.len() {
                let face: Vec<u32> = verts
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| *k != omit)
                    .map(|(_, &v)| v)
                    .collect();
                col ^= 1u128 << lower.row_of[&face];
            }
            col
        })
        .collect()
}

/// Persistent Betti number β_n^{v_s → v_t} from ranks:
/// dim Z_n at s minus dim(B_n at t ∩ C_n at s).
fn persistent_betti(
    n_data: &DimData,
    lower: Option<&DimData>,
    upper: Option<&DimData>,
    v_s: f64,
    v_t: f64,
) -> usize {
    let c_s = count_at(n_data, v_s);
    let rank_boundary_s = match lower {
        Some(low) => {
            let mut cols: Vec<u128> = boundary_columns(n_data, low, v_s);
            gf2_rank(&mut cols)
        }
        None => 0,
    };
    let z_s = c_s - rank_boundary_s;

    let b_cap = match upper {
        Some(up) => {
            let m_cols = boundary_columns(up, n_data, v_t);
            let rank_m = gf2_rank(&mut m_cols.clone());
            // dim(B ∩ C_n^s) = rank(M) + |C_n^s| − rank([M | E_s]).
            let mut combined = m_cols;
            for (row, s) in n_data.simplices.iter().enumerate() {
                if s.value <= v_s {
                    combined.push(1u128 << row);
                }
            }
            let rank_combined = gf2_rank(&mut combined);
            rank_m + c_s - rank_combined
        }
        None => 0,
    };
    z_s - b_cap
}

/// Brute-force persistence diagram as (dim, birth, death) triples with
/// `f64::INFINITY` deaths for essential classes. Matches the reduction output
/// for dimensions below the complex's top dimension.
pub fn brute_force_diagram(complex: &FilteredComplex) -> Vec<(u8, f64, f64)> {
    let mut values: Vec<f64> = complex.simplices().iter().map(|s| s.value).collect();
    values.sort_by(f64::total_cmp);
    values.dedup();
    let m = values.len();

    let data: Vec<DimData> = (0..=complex.max_dim() as u8)
        .map(|d| collect_dim(complex, d))
        .collect();
    let mut out = Vec::new();

    let emit_max = if complex.max_dim() == 0 {
        0
    } else {
        complex.max_dim() - 1
    };
    for n in 0..=emit_max {
        let n_data = &data[n];
        let lower = n.checked_sub(1).map(|k| &data[k]);
        let upper = data.get(n + 1);
        let betti = |s: isize, t: usize| -> isize {
            if s < 0 {
                return 0;
            }
            persistent_betti(n_data, lower, upper, values[s as usize], values[t]) as isize
        };
        for i in 0..m {
            // Essential classes born at v_i.
            let essential = betti(i as isize, m - 1) - betti(i as isize - 1, m - 1);
            for _ in 0..essential {
                out.push((n as u8, values[i], f64::INFINITY));
            }
            for j in i + 1..m {
                let mult = betti(i as isize, j - 1)
                    - betti(i as isize, j)
                    - (betti(i as isize - 1, j - 1) - betti(i as isize - 1, j));
                for _ in 0..mult {
                    out.push((n as u8, values[i], values[j]));
                }
            }
        }
    }
    out.sort_by(|a, b| {
        a.0.cmp(&b.0)
            .then(a.1.total_cmp(&b.1))
            .then(a.2.total_cmp(&b.2))
    });
    out
}

/// ℓ∞ ground distance between two finite bars.
fn linf(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - b.0).abs().max((a.1 - b.1).abs())
}

fn diagonal_gap(p: (f64, f64)) -> f64 {
    (p.1 - p.0) / 2.0
}

/// Costs of one padded assignment under a permutation: left side is d1 bars
/// then d2 diagonal proxies, right side is d2 bars then d1 proxies.
fn assignment_costs(d1: &[(f64, f64)], d2: &[(f64, f64)], perm: &[usize]) -> Vec<f64> {
    let (n1, n2) = (d1.len(), d2.len());
    perm.iter()
        .enumerate()
        .filter_map(|(left, &right)| match (left < n1, right < n2) {
            (true, true) => Some(linf(d1[left], d2[right])),
            (true, false) => Some(diagonal_gap(d1[left])),
            (false, true) => Some(diagonal_gap(d2[right])),
            (false, false) => None,
        })
        .collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    heap_permute(&mut current, n, &mut out);
    out
}

fn heap_permute(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(items.clone());
        return;
    }
    for i in 0..k {
        heap_permute(items, k - 1, out);
        if k.is_multiple_of(2) {
            items.swap(i, k - 1);
        } else {
            items.swap(0, k - 1);
        }
    }
}

/// Bottleneck distance by full matching enumeration (finite diagrams only).
pub fn exhaustive_bottleneck(d1: &[(f64, f64)], d2: &[(f64, f64)]) -> f64 {
    let n = d1.len() + d2.len();
    if n == 0 {
        return 0.0;
    }
    permutations(n)
        .iter()
        .map(|perm| {
            assignment_costs(d1, d2, perm)
                .into_iter()
                .fold(0.0f64, f64::max)
        })
        .fold(f64::INFINITY, f64::min)
}

/// Wasserstein-q distance by full matching enumeration (finite diagrams
/// only).
pub fn exhaustive_wasserstein(d1: &[(f64, f64)], d2: &[(f64, f64)], q: f64) -> f64 {
    let n = d1.len() + d2.len();
    if n == 0 {
        return 0.0;
    }
    permutations(n)
        .iter()
        .map(|perm| {
            assignment_costs(d1, d2, perm)
                .iter()
                .map(|c| c.powf(q))
                .sum::<f64>()
        })
        .fold(f64::INFINITY, f64::min)
        .powf(1.0 / q)
}

/// Diagram of one dimension as finite (birth, death) pairs, with infinite
/// deaths replaced beforehand by the caller when needed.
pub fn finite_pairs(diagram: &fibrilgeom::ph::PersistenceDiagram, dim: u8) -> Vec<(f64, f64)> {
    diagram
        .in_dim(dim)
        .filter(|p| !p.is_essential())
        .map(|p| (p.birth, p.death))
        .collect()
}

/// Reduction diagram flattened to comparable triples.
pub fn diagram_triples(diagram: &fibrilgeom::ph::PersistenceDiagram) -> Vec<(u8, f64, f64)> {
    let mut out: Vec<(u8, f64, f64)> = diagram
        .points
        .iter()
        .map(|p| (p.dim, p.birth, p.death))
        .collect();
    out.sort_by(|a, b| {
        a.0.cmp(&b.0)
            .then(a.1.total_cmp(&b.1))
            .then(a.2.total_cmp(&b.2))
    });
    out
}
