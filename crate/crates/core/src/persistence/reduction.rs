//! Coboundary-matrix column reduction over F₂.
//!
//! Columns of one dimension are reduced at a time, rows being the simplices
//! of the dimension above in filtration order. Columns are sorted index
//! lists; the pivot is the first entry.

use std::collections::HashMap;

use crate::filtration::{Filtration, Simplex};

const ABSENT: u32 = u32::MAX;
/// Largest dense rank table, in entries.
const DENSE_LIMIT: u64 = 1 << 27;

/// Maps a simplex of one fixed dimension to its position among the
/// simplices of that dimension.
pub(crate) enum SimplexIndex {
    Dense { binom: Vec<Vec<u64>>, table: Vec<u32> },
    Sparse(HashMap<Simplex, u32>),
}

impl SimplexIndex {
    pub(crate) fn new(filtration: &Filtration, cells: &[u32], dim: usize) -> Self {
        let n = filtration.cloud_size();
        let k = dim + 1;
        let binom = binomials(n, k);
        let total = binom.get(n).and_then(|row| row.get(k)).copied();
        match total {
            Some(total) if total <= DENSE_LIMIT && total <= 64 * cells.len() as u64 + 1024 => {
                let mut table = vec![ABSENT; total as usize];
                for (pos, &c) in cells.iter().enumerate() {
                    let r = rank(&binom, filtration.cells()[c as usize].simplex.vertices());
                    table[r as usize] = pos as u32;
                }
                SimplexIndex::Dense { binom, table }
            }
            _ => SimplexIndex::Sparse(
                cells
                    .iter()
                    .enumerate()
                    .map(|(pos, &c)| (filtration.cells()[c as usize].simplex.clone(), pos as u32))
                    .collect(),
            ),
        }
    }

    /// Position of the simplex spanned by `vertices` (sorted).
    pub(crate) fn get(&self, vertices: &[u32]) -> Option<u32> {
        match self {
            SimplexIndex::Dense { binom, table } => {
                let p = table[rank(binom, vertices) as usize];
                (p != ABSENT).then_some(p)
            }
            SimplexIndex::Sparse(map) => Simplex::new(vertices.iter().copied()).and_then(|s| map.get(&s).copied()),
        }
    }
}

/// `binom[v][t] = C(v, t)` for `v ≤ n`, `t ≤ k`, saturating.
fn binomials(n: usize, k: usize) -> Vec<Vec<u64>> {
    let mut b = vec![vec![0u64; k + 1]; n + 1];
    for v in 0..=n {
        b[v][0] = 1;
        for t in 1..=k.min(v) {
            b[v][t] = b[v - 1][t - 1].saturating_add(if t < v { b[v - 1][t] } else { 0 });
        }
    }
    b
}

/// Combinatorial number system rank of a sorted vertex list.
fn rank(binom: &[Vec<u64>], vertices: &[u32]) -> u64 {
    vertices
        .iter()
        .enumerate()
        .map(|(t, &v)| binom[v as usize][t + 1])
        .sum()
}

/// Pairs found by reducing the coboundary columns of one dimension.
pub(crate) struct CoboundaryReduction {
    /// `(column, row)`: an `s`-simplex position and the `(s+1)`-simplex
    /// position that kills its class.
    pub pairs: Vec<(u32, u32)>,
    /// Columns that reduce to zero: classes that never die.
    pub essential: usize,
}

/// Reduces the coboundary matrix of dimension `s` (persistent cohomology).
///
/// Columns are the `s`-simplices `cols` (global cell indices, filtration
/// order) taken in reverse order; rows are the `(s+1)`-simplices indexed by
/// `rows`, and a column's pivot is its earliest row. Columns flagged in
/// `cleared` kill a class of dimension `s − 1` and are known to be zero.
/// The pairing equals the one from reducing the boundary matrix.
pub(crate) fn reduce_coboundary(
    filtration: &Filtration,
    cols: &[u32],
    rows: &SimplexIndex,
    n_rows: usize,
    cleared: &[bool],
) -> CoboundaryReduction {
    let n = filtration.cloud_size() as u32;
    let mut owner = vec![ABSENT; n_rows];
    let mut stored: Vec<Vec<u32>> = Vec::new();
    let mut pairs = Vec::new();
    let mut essential = 0;
    let mut column: Vec<u32> = Vec::new();
    let mut scratch: Vec<u32> = Vec::new();
    let mut coface: Vec<u32> = Vec::new();

    for j in (0..cols.len()).rev() {
        if cleared[j] {
            continue;
        }
        let vertices = filtration.cells()[cols[j] as usize].simplex.vertices();
        column.clear();
        let mut slot = 0;
        for v in 0..n {
            if vertices.get(slot) == Some(&v) {
                slot += 1;
                continue;
            }
            coface.clear();
            coface.extend_from_slice(&vertices[..slot]);
            coface.push(v);
            coface.extend_from_slice(&vertices[slot..]);
            if let Some(row) = rows.get(&coface) {
                column.push(row);
            }
        }
        column.sort_unstable();

        while let Some(&pivot) = column.first() {
            let other = owner[pivot as usize];
            if other == ABSENT {
                break;
            }
            symmetric_difference(&column, &stored[other as usize], &mut scratch);
            std::mem::swap(&mut column, &mut scratch);
        }
        match column.first() {
            Some(&pivot) => {
                owner[pivot as usize] = stored.len() as u32;
                stored.push(column.clone());
                pairs.push((j as u32, pivot));
            }
            None => essential += 1,
        }
    }
    CoboundaryReduction { pairs, essential }
}

fn symmetric_difference(a: &[u32], b: &[u32], out: &mut Vec<u32>) {
    out.clear();
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
}
