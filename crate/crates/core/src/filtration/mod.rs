//! Vietoris-Rips and Čech filtrations of point clouds.
//!
//! A filtration stores every simplex up to `max_dim` together with its
//! filtering value, sorted by `(value, dimension, vertices)`. That order is
//! total, so the boundary-matrix reduction downstream is deterministic even
//! when values tie.

mod meb;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::geometry::{squared_distance, PointCloud};

pub use meb::{cayley_menger_circumradius, circumsphere, meb_radius, minimal_enclosing_ball, Ball};

/// A simplex as a strictly increasing list of point indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Simplex(SmallVec<[u32; 4]>);

impl Simplex {
    /// Sorts the vertices; returns `None` for an empty or repeating list.
    pub fn new(vertices: impl IntoIterator<Item = u32>) -> Option<Self> {
        let mut v: SmallVec<[u32; 4]> = vertices.into_iter().collect();
        v.sort_unstable();
        if v.is_empty() || v.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        Some(Simplex(v))
    }

    pub(crate) fn from_sorted(v: SmallVec<[u32; 4]>) -> Self {
        debug_assert!(!v.is_empty() && v.windows(2).all(|w| w[0] < w[1]));
        Simplex(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn vertices(&self) -> &[u32] {
        &self.0
    }

    /// Codimension-one faces, the `k`-th omitting vertex `k`.
    pub fn facets(&self) -> impl Iterator<Item = Simplex> + '_ {
        let n = if self.0.len() > 1 { self.0.len() } else { 0 };
        (0..n).map(move |skip| {
            Simplex(
                self.0
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != skip)
                    .map(|(_, &v)| v)
                    .collect(),
            )
        })
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        self.0.iter().all(|v| other.0.binary_search(v).is_ok())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub simplex: Simplex,
    pub value: f64,
}

fn cell_order(a: &Cell, b: &Cell) -> Ordering {
    a.value
        .total_cmp(&b.value)
        .then(a.simplex.dim().cmp(&b.simplex.dim()))
        .then_with(|| a.simplex.vertices().cmp(b.simplex.vertices()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FiltrationKind {
    Rips,
    Cech,
}

impl fmt::Display for FiltrationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FiltrationKind::Rips => "rips",
            FiltrationKind::Cech => "cech",
        })
    }
}

impl FromStr for FiltrationKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rips" => Ok(FiltrationKind::Rips),
            "cech" => Ok(FiltrationKind::Cech),
            other => Err(Error::Config(format!("unknown filtration `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Filtration {
    cloud_size: usize,
    max_dim: usize,
    cells: Vec<Cell>,
}

impl Filtration {
    /// Builds a filtration from arbitrary cells, sorting them. Fails if a
    /// face is missing or monotonicity is violated.
    pub fn from_cells(cloud_size: usize, max_dim: usize, mut cells: Vec<Cell>) -> Result<Self> {
        cells.sort_unstable_by(cell_order);
        let filtration = Filtration {
            cloud_size,
            max_dim,
            cells,
        };
        filtration.validate()?;
        Ok(filtration)
    }

    pub fn build(kind: FiltrationKind, cloud: &PointCloud, max_dim: usize, max_value: f64) -> Self {
        match kind {
            FiltrationKind::Rips => rips_filtration(cloud, max_dim, max_value),
            FiltrationKind::Cech => cech_filtration(cloud, max_dim, max_value),
        }
    }

    pub fn cloud_size(&self) -> usize {
        self.cloud_size
    }

    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Checks that every face is present, that values are monotone under
    /// inclusion and that cells are in filtration order.
    pub fn validate(&self) -> Result<()> {
        let index: std::collections::HashMap<&Simplex, f64> =
            self.cells.iter().map(|c| (&c.simplex, c.value)).collect();
        for (k, cell) in self.cells.iter().enumerate() {
            if cell.simplex.dim() > self.max_dim
                || cell.simplex.vertices().iter().any(|&v| v as usize >= self.cloud_size)
            {
                return Err(Error::InvalidFiltration(format!("cell {k} out of range")));
            }
            if k > 0 && cell_order(&self.cells[k - 1], cell) != Ordering::Less {
                return Err(Error::InvalidFiltration(format!("cell {k} out of order")));
            }
            for facet in cell.simplex.facets() {
                match index.get(&facet) {
                    Some(&v) if v <= cell.value => {}
                    Some(_) => return Err(Error::InvalidFiltration(format!("cell {k} not monotone"))),
                    None => return Err(Error::InvalidFiltration(format!("cell {k} misses a face"))),
                }
            }
        }
        Ok(())
    }
}

/// Rips filtration: a simplex enters at the largest pairwise distance of its
/// vertices. Simplices above `max_value` are left out.
pub fn rips_filtration(cloud: &PointCloud, max_dim: usize, max_value: f64) -> Filtration {
    let mut builder = Builder::new(cloud, max_dim, max_value, max_value);
    builder.enumerate(|b, simplex, prev, v| {
        let far = simplex
            .iter()
            .map(|&u| squared_distance(b.cloud.point(u as usize), b.cloud.point(v as usize)))
            .fold(0.0, f64::max)
            .sqrt();
        prev.max(far)
    });
    builder.finish()
}

/// Čech filtration: a simplex enters at the radius of the minimal enclosing
/// ball of its vertices, i.e. the first radius at which the balls around its
/// vertices share a point.
pub fn cech_filtration(cloud: &PointCloud, max_dim: usize, max_value: f64) -> Filtration {
    let mut builder = Builder::new(cloud, max_dim, max_value, 2.0 * max_value);
    builder.enumerate(|b, simplex, _prev, v| cech_value_with(b.cloud, simplex, v));
    builder.finish()
}

/// Čech value of an arbitrary vertex set of `cloud`.
///
/// The value depends only on the point set, not on vertex labels or order,
/// and is never below the value of a face, so rounding cannot break
/// monotonicity.
pub fn cech_value(cloud: &PointCloud, vertices: &[u32]) -> f64 {
    let p = |i: u32| cloud.point(i as usize);
    match *vertices {
        [] | [_] => 0.0,
        [a, b] => 0.5 * squared_distance(p(a), p(b)).sqrt(),
        [a, b, c] => meb::triangle_meb_radius(
            squared_distance(p(a), p(b)),
            squared_distance(p(b), p(c)),
            squared_distance(p(a), p(c)),
        ),
        _ => {
            let mut pts: Vec<&[f64]> = vertices.iter().map(|&i| p(i)).collect();
            pts.sort_by(|x, y| {
                x.iter()
                    .zip(y.iter())
                    .map(|(u, v)| u.total_cmp(v))
                    .find(|o| o.is_ne())
                    .unwrap_or(Ordering::Equal)
            });
            let mut facet: SmallVec<[u32; 4]> = SmallVec::new();
            (0..vertices.len()).fold(meb_radius(&pts), |acc, skip| {
                facet.clear();
                facet.extend(vertices.iter().enumerate().filter(|&(k, _)| k != skip).map(|(_, &v)| v));
                acc.max(cech_value(cloud, &facet))
            })
        }
    }
}

fn cech_value_with(cloud: &PointCloud, simplex: &[u32], v: u32) -> f64 {
    let mut vertices: SmallVec<[u32; 4]> = SmallVec::from_slice(simplex);
    vertices.push(v);
    cech_value(cloud, &vertices)
}

struct Builder<'a> {
    cloud: &'a PointCloud,
    max_dim: usize,
    max_value: f64,
    edge_limit_squared: f64,
    cells: Vec<Cell>,
}

impl<'a> Builder<'a> {
    fn new(cloud: &'a PointCloud, max_dim: usize, max_value: f64, edge_limit: f64) -> Self {
        Builder {
            cloud,
            max_dim,
            max_value,
            edge_limit_squared: edge_limit * edge_limit,
            cells: Vec::new(),
        }
    }

    /// Depth-first clique enumeration. `value(builder, σ, value(σ), v)`
    /// returns the value of σ ∪ {v}; values are monotone, so a simplex over
    /// the limit prunes all of its cofaces.
    fn enumerate(&mut self, value: impl Fn(&Self, &[u32], f64, u32) -> f64) {
        let n = self.cloud.len() as u32;
        let mut simplex: SmallVec<[u32; 4]> = SmallVec::new();
        let all: Vec<u32> = (0..n).collect();
        self.extend(&mut simplex, 0.0, &all, &value);
    }

    fn extend(
        &mut self,
        simplex: &mut SmallVec<[u32; 4]>,
        current: f64,
        candidates: &[u32],
        value: &impl Fn(&Self, &[u32], f64, u32) -> f64,
    ) {
        for (k, &v) in candidates.iter().enumerate() {
            let val = value(self, simplex, current, v);
            if val > self.max_value {
                continue;
            }
            simplex.push(v);
            self.cells.push(Cell {
                simplex: Simplex::from_sorted(simplex.clone()),
                value: val,
            });
            if simplex.len() <= self.max_dim {
                let pv = self.cloud.point(v as usize);
                let next: Vec<u32> = candidates[k + 1..]
                    .iter()
                    .copied()
                    .filter(|&u| squared_distance(pv, self.cloud.point(u as usize)) <= self.edge_limit_squared)
                    .collect();
                if !next.is_empty() {
                    self.extend(simplex, val, &next, value);
                }
            }
            simplex.pop();
        }
    }

    fn finish(mut self) -> Filtration {
        self.cells.sort_unstable_by(cell_order);
        Filtration {
            cloud_size: self.cloud.len(),
            max_dim: self.max_dim,
            cells: self.cells,
        }
    }
}
