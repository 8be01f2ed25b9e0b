//! Persistence diagrams of filtrations.
//!
//! Dimension 0 comes from a union-find sweep over the edges. Higher
//! dimensions come from F₂ reduction of the coboundary matrix, one dimension
//! at a time from the bottom up: a simplex that killed a class in the
//! dimension below has a zero column and is skipped (clearing). Most
//! remaining columns pair with their earliest coface immediately, which is
//! what makes the full 2-skeleton of a few hundred points tractable.

mod reduction;
mod union_find;

use crate::error::{Error, Result};
use crate::filtration::{Filtration, FiltrationKind};
use crate::geometry::PointCloud;

use reduction::{reduce_coboundary, SimplexIndex};
pub use union_find::UnionFind;

/// Which plane a diagram's points live in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coordinates {
    /// `(birth, death)`.
    BirthDeath,
    /// `(birth, death − birth)`.
    BirthPersistence,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PersistenceDiagram {
    pub hom_dim: usize,
    pub pairs: Vec<(f64, f64)>,
    /// Classes that never die in the filtration.
    pub discarded_infinite: usize,
    /// Pairs with birth = death, removed from `pairs`.
    pub dropped_zero: usize,
    pub coordinates: Coordinates,
}

impl PersistenceDiagram {
    pub fn new(hom_dim: usize, pairs: Vec<(f64, f64)>) -> Self {
        PersistenceDiagram {
            hom_dim,
            pairs,
            discarded_infinite: 0,
            dropped_zero: 0,
            coordinates: Coordinates::BirthDeath,
        }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// `(birth, death)` of every pair, whatever the stored coordinates.
    pub fn intervals(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let transformed = self.coordinates == Coordinates::BirthPersistence;
        self.pairs
            .iter()
            .map(move |&(b, y)| if transformed { (b, b + y) } else { (b, y) })
    }

    /// Sorted copy of the pairs, for comparisons.
    pub fn sorted_pairs(&self) -> Vec<(f64, f64)> {
        let mut pairs = self.pairs.clone();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        pairs
    }

    fn push_pair(&mut self, birth: f64, death: f64) {
        if birth < death {
            self.pairs.push((birth, death));
        } else {
            self.dropped_zero += 1;
        }
    }
}

/// Diagrams of dimensions `0..=max_hom_dim`.
pub fn compute_persistence(filtration: &Filtration, max_hom_dim: usize) -> Result<Vec<PersistenceDiagram>> {
    if filtration.max_dim() < max_hom_dim + 1 {
        return Err(Error::MaxDimTooSmall {
            max_dim: filtration.max_dim(),
            hom_dim: max_hom_dim,
        });
    }
    let cells = filtration.cells();
    let by_dim = cells_by_dim(filtration, max_hom_dim + 1);
    let value = |c: u32| cells[c as usize].value;

    let mut diagrams: Vec<PersistenceDiagram> =
        (0..=max_hom_dim).map(|s| PersistenceDiagram::new(s, Vec::new())).collect();

    let zero = zero_dim_union_find(filtration);
    let positive_edges = zero.positive_edges;
    diagrams[0] = zero.diagram;
    if max_hom_dim == 0 {
        return Ok(diagrams);
    }

    // Dimension-1 columns of negative edges are cleared by the sweep.
    let mut cleared: Vec<bool> = positive_edges.iter().map(|&p| !p).collect();
    for s in 1..=max_hom_dim {
        let rows = SimplexIndex::new(filtration, &by_dim[s + 1], s + 1);
        let reduction = reduce_coboundary(filtration, &by_dim[s], &rows, by_dim[s + 1].len(), &cleared);
        let mut next_cleared = vec![false; by_dim[s + 1].len()];
        // Columns were visited in reverse; report pairs in filtration order.
        for &(col, row) in reduction.pairs.iter().rev() {
            next_cleared[row as usize] = true;
            diagrams[s].push_pair(value(by_dim[s][col as usize]), value(by_dim[s + 1][row as usize]));
        }
        diagrams[s].discarded_infinite = reduction.essential;
        cleared = next_cleared;
    }
    Ok(diagrams)
}

/// Diagram of dimension `hom_dim` of the full filtration of `cloud`.
pub fn cloud_diagram(cloud: &PointCloud, kind: FiltrationKind, hom_dim: usize) -> Result<PersistenceDiagram> {
    let filtration = Filtration::build(kind, cloud, hom_dim + 1, f64::INFINITY);
    let mut diagrams = compute_persistence(&filtration, hom_dim)?;
    Ok(diagrams.swap_remove(hom_dim))
}

fn cells_by_dim(filtration: &Filtration, max_dim: usize) -> Vec<Vec<u32>> {
    let mut by_dim = vec![Vec::new(); max_dim + 1];
    for (k, cell) in filtration.cells().iter().enumerate() {
        let d = cell.simplex.dim();
        if d <= max_dim {
            by_dim[d].push(k as u32);
        }
    }
    by_dim
}

pub(crate) struct ZeroDim {
    pub diagram: PersistenceDiagram,
    /// Per edge in filtration order: true when the edge closes a cycle.
    pub positive_edges: Vec<bool>,
}

/// Dimension-0 persistence by a union-find sweep over the edges. The
/// component whose oldest vertex entered later dies (elder rule), which is
/// exactly the pairing produced by matrix reduction.
pub(crate) fn zero_dim_union_find(filtration: &Filtration) -> ZeroDim {
    let n = filtration.cloud_size();
    let mut birth_order = vec![u32::MAX; n];
    let mut birth_value = vec![0.0; n];
    let mut uf = UnionFind::new(n);
    // Oldest vertex of each component, indexed by root.
    let mut oldest: Vec<u32> = (0..n as u32).collect();
    let mut diagram = PersistenceDiagram::new(0, Vec::new());
    let mut positive_edges = Vec::new();
    let mut vertices_seen = 0usize;

    for (k, cell) in filtration.cells().iter().enumerate() {
        match *cell.simplex.vertices() {
            [v] => {
                birth_order[v as usize] = k as u32;
                birth_value[v as usize] = cell.value;
                vertices_seen += 1;
            }
            [a, b] => {
                let (ra, rb) = (uf.find(a), uf.find(b));
                if ra == rb {
                    positive_edges.push(true);
                    continue;
                }
                positive_edges.push(false);
                let (oa, ob) = (oldest[ra as usize], oldest[rb as usize]);
                let (elder, younger) = if birth_order[oa as usize] < birth_order[ob as usize] {
                    (oa, ob)
                } else {
                    (ob, oa)
                };
                diagram.push_pair(birth_value[younger as usize], cell.value);
                let root = uf.union(ra, rb).expect("distinct roots");
                oldest[root as usize] = elder;
            }
            _ => {}
        }
    }
    diagram.discarded_infinite = vertices_seen - diagram.pairs.len() - diagram.dropped_zero;
    ZeroDim {
        diagram,
        positive_edges,
    }
}

/// Reference pairing: standard left-to-right reduction of the full boundary
/// matrix in filtration order, without clearing or union-find. Returns
/// diagrams of dimensions `0..max_dim` of the filtration.
pub fn persistence_by_reduction(filtration: &Filtration) -> Vec<PersistenceDiagram> {
    let cells = filtration.cells();
    let index: std::collections::HashMap<&[u32], u32> = cells
        .iter()
        .enumerate()
        .map(|(k, c)| (c.simplex.vertices(), k as u32))
        .collect();
    let mut low_owner: std::collections::HashMap<u32, usize> = std::collections::HashMap::new();
    let mut reduced: Vec<Vec<u32>> = Vec::with_capacity(cells.len());
    let mut paired = vec![false; cells.len()];
    let top = filtration.max_dim();
    let mut diagrams: Vec<PersistenceDiagram> = (0..top).map(|s| PersistenceDiagram::new(s, Vec::new())).collect();

    for (j, cell) in cells.iter().enumerate() {
        let mut column: Vec<u32> = cell
            .simplex
            .facets()
            .map(|f| index[f.vertices()])
            .collect();
        column.sort_unstable();
        while let Some(&pivot) = column.last() {
            match low_owner.get(&pivot) {
                Some(&other) => {
                    let mut next = Vec::new();
                    reduction_xor(&column, &reduced[other], &mut next);
                    column = next;
                }
                None => break,
            }
        }
        if let Some(&pivot) = column.last() {
            low_owner.insert(pivot, j);
            paired[pivot as usize] = true;
            paired[j] = true;
            let s = cells[pivot as usize].simplex.dim();
            diagrams[s].push_pair(cells[pivot as usize].value, cell.value);
        }
        reduced.push(column);
    }
    for (k, cell) in cells.iter().enumerate() {
        let s = cell.simplex.dim();
        if s < top && !paired[k] && reduced[k].is_empty() {
            diagrams[s].discarded_infinite += 1;
        }
    }
    diagrams
}

fn reduction_xor(a: &[u32], b: &[u32], out: &mut Vec<u32>) {
    let mut merged: Vec<u32> = a.iter().chain(b).copied().collect();
    merged.sort_unstable();
    let mut i = 0;
    while i < merged.len() {
        if i + 1 < merged.len() && merged[i] == merged[i + 1] {
            i += 2;
        } else {
            out.push(merged[i]);
            i += 1;
        }
    }
}

/// Number of pairs with `birth ≤ r ≤ death` at each radius (closed
/// intervals). For dimension 0 the infinite bar is not included.
pub fn betti_curve(diagrams: &[PersistenceDiagram], s: usize, r_grid: &[f64]) -> Result<Vec<usize>> {
    let diagram = diagrams
        .iter()
        .find(|d| d.hom_dim == s)
        .ok_or(Error::MissingDimension(s))?;
    Ok(r_grid
        .iter()
        .map(|&r| diagram.intervals().filter(|&(b, d)| b <= r && r <= d).count())
        .collect())
}

/// Maps every pair `(b, d)` to `(b, d − b)`.
pub fn transform_birth_persistence(diagram: &PersistenceDiagram) -> Result<PersistenceDiagram> {
    if diagram.coordinates == Coordinates::BirthPersistence {
        return Err(Error::AlreadyTransformed);
    }
    Ok(PersistenceDiagram {
        pairs: diagram.pairs.iter().map(|&(b, d)| (b, d - b)).collect(),
        coordinates: Coordinates::BirthPersistence,
        ..diagram.clone()
    })
}
