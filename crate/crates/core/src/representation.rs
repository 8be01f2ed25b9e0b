//! Diagrams as weighted discrete measures, and their persistence surfaces.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::persistence::{Coordinates, PersistenceDiagram};

/// Weight attached to each diagram point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Weight {
    /// w ≡ 1.
    One,
    /// w = (death − birth)³.
    Pers3,
}

impl Weight {
    pub fn eval(self, birth: f64, death: f64) -> f64 {
        match self {
            Weight::One => 1.0,
            Weight::Pers3 => (death - birth).powi(3),
        }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Weight::One => "one",
            Weight::Pers3 => "pers3",
        })
    }
}

impl FromStr for Weight {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "one" => Ok(Weight::One),
            "pers3" => Ok(Weight::Pers3),
            other => Err(Error::UnknownWeight(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub x: f64,
    pub y: f64,
    pub mass: f64,
}

/// A finite sum of weighted Dirac masses in the plane.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagramMeasure {
    pub atoms: Vec<Atom>,
    pub coordinates: Coordinates,
}

impl DiagramMeasure {
    pub fn new(atoms: Vec<Atom>, coordinates: Coordinates) -> Self {
        debug_assert!(atoms.iter().all(|a| a.mass > 0.0 && a.x.is_finite() && a.y.is_finite()));
        DiagramMeasure { atoms, coordinates }
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.mass).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Multiplies every mass by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> DiagramMeasure {
        DiagramMeasure {
            atoms: self
                .atoms
                .iter()
                .map(|a| Atom {
                    mass: a.mass * factor,
                    ..*a
                })
                .collect(),
            coordinates: self.coordinates,
        }
    }
}

/// One atom per diagram point, of mass `weight(birth, death)`; zero-mass
/// atoms are dropped. Locations stay in the diagram's coordinates.
pub fn as_measure(diagram: &PersistenceDiagram, weight: Weight) -> DiagramMeasure {
    let atoms = diagram
        .pairs
        .iter()
        .zip(diagram.intervals())
        .filter_map(|(&(x, y), (b, d))| {
            let mass = weight.eval(b, d);
            (mass > 0.0).then_some(Atom { x, y, mass })
        })
        .collect();
    DiagramMeasure {
        atoms,
        coordinates: diagram.coordinates,
    }
}

/// Rescales a measure to total mass 1.
pub fn normalize(measure: &DiagramMeasure) -> Result<DiagramMeasure> {
    let total = measure.total_mass();
    if total <= 0.0 {
        return Err(Error::ZeroMass);
    }
    Ok(measure.scaled(1.0 / total))
}

/// Symmetric positive definite 2×2 bandwidth matrix `[[a, b], [b, c]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bandwidth {
    a: f64,
    b: f64,
    c: f64,
}

impl Bandwidth {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        let det = a * c - b * b;
        if !(a > 0.0 && c > 0.0 && det > 0.0 && det.is_finite()) {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(Bandwidth { a, b, c })
    }

    /// `h² I`.
    pub fn isotropic(h: f64) -> Result<Self> {
        Self::new(h * h, 0.0, h * h)
    }

    pub fn matrix(&self) -> [[f64; 2]; 2] {
        [[self.a, self.b], [self.b, self.c]]
    }

    pub fn det(&self) -> f64 {
        self.a * self.c - self.b * self.b
    }

    /// `uᵀ H⁻¹ u`.
    pub fn quadratic_form(&self, ux: f64, uy: f64) -> f64 {
        (self.c * ux * ux - 2.0 * self.b * ux * uy + self.a * uy * uy) / self.det()
    }

    pub fn max_eigenvalue(&self) -> f64 {
        let mean = 0.5 * (self.a + self.c);
        let half_gap = (0.25 * (self.a - self.c).powi(2) + self.b * self.b).sqrt();
        mean + half_gap
    }

    /// `h` for `H = h² I`, `None` for anisotropic matrices.
    pub fn isotropic_scale(&self) -> Option<f64> {
        (self.b == 0.0 && self.a == self.c).then(|| self.a.sqrt())
    }
}

/// Gaussian kernel with unit integral, `K_H(u) = (2π)⁻¹ det(H)^{-1/2}
/// exp(−uᵀH⁻¹u / 2)`.
pub fn kernel_value(h: &Bandwidth, ux: f64, uy: f64) -> f64 {
    (-0.5 * h.quadratic_form(ux, uy)).exp() / (2.0 * PI * h.det().sqrt())
}

/// Layout of a cell-centered raster over a rectangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    pub fn new(x_range: (f64, f64), y_range: (f64, f64), nx: usize, ny: usize) -> Result<Self> {
        let ok = |r: (f64, f64)| r.0.is_finite() && r.1.is_finite() && r.0 < r.1;
        if !ok(x_range) || !ok(y_range) || nx == 0 || ny == 0 {
            return Err(Error::InvalidGrid(format!(
                "{x_range:?} × {y_range:?} with {nx}×{ny} cells"
            )));
        }
        Ok(GridSpec {
            x_range,
            y_range,
            nx,
            ny,
        })
    }

    /// Bounding box of all atoms, padded by `4√λ_max(H)` on every side.
    pub fn covering(measures: &[DiagramMeasure], h: &Bandwidth, nx: usize, ny: usize) -> Result<Self> {
        let mut atoms = measures.iter().flat_map(|m| &m.atoms).peekable();
        if atoms.peek().is_none() {
            return Err(Error::Empty("no atoms to cover"));
        }
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for a in atoms {
            x0 = x0.min(a.x);
            x1 = x1.max(a.x);
            y0 = y0.min(a.y);
            y1 = y1.max(a.y);
        }
        let pad = 4.0 * h.max_eigenvalue().sqrt();
        Self::new((x0 - pad, x1 + pad), (y0 - pad, y1 + pad), nx, ny)
    }

    pub fn dx(&self) -> f64 {
        (self.x_range.1 - self.x_range.0) / self.nx as f64
    }

    pub fn dy(&self) -> f64 {
        (self.y_range.1 - self.y_range.0) / self.ny as f64
    }

    pub fn cell_area(&self) -> f64 {
        self.dx() * self.dy()
    }

    pub fn center(&self, ix: usize, iy: usize) -> (f64, f64) {
        (
            self.x_range.0 + (ix as f64 + 0.5) * self.dx(),
            self.y_range.0 + (iy as f64 + 0.5) * self.dy(),
        )
    }

    /// Cell containing `(x, y)`; cells are half-open except the last row and
    /// column, which include the upper edge.
    pub fn cell_of(&self, x: f64, y: f64) -> Option<(usize, usize)> {
        let locate = |v: f64, (lo, hi): (f64, f64), n: usize| {
            if !(lo..=hi).contains(&v) {
                return None;
            }
            Some((((v - lo) / (hi - lo) * n as f64) as usize).min(n - 1))
        };
        Some((locate(x, self.x_range, self.nx)?, locate(y, self.y_range, self.ny)?))
    }
}

/// Real values on the cells of a [`GridSpec`], row-major (`iy * nx + ix`).
#[derive(Debug, Clone, PartialEq)]
pub struct DensityGrid {
    pub spec: GridSpec,
    pub values: Vec<f64>,
}

impl DensityGrid {
    pub fn zeros(spec: GridSpec) -> Self {
        DensityGrid {
            spec,
            values: vec![0.0; spec.nx * spec.ny],
        }
    }

    pub fn from_fn(spec: GridSpec, f: impl Fn(f64, f64) -> f64 + Sync) -> Self {
        let values = (0..spec.nx * spec.ny)
            .into_par_iter()
            .map(|k| {
                let (x, y) = spec.center(k % spec.nx, k / spec.nx);
                f(x, y)
            })
            .collect();
        DensityGrid { spec, values }
    }

    pub fn get(&self, ix: usize, iy: usize) -> f64 {
        self.values[iy * self.spec.nx + ix]
    }

    /// Midpoint-rule integral over the grid.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.spec.cell_area()
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Bilinear interpolation between cell centers, clamped to the outer
    /// half cells.
    pub fn interpolate(&self, x: f64, y: f64) -> Result<f64> {
        let s = &self.spec;
        if !(s.x_range.0..=s.x_range.1).contains(&x) || !(s.y_range.0..=s.y_range.1).contains(&y) {
            return Err(Error::OutsideDomain(x, y));
        }
        let axis = |v: f64, lo: f64, step: f64, n: usize| {
            let t = ((v - lo) / step - 0.5).clamp(0.0, (n - 1) as f64);
            let i = (t.floor() as usize).min(n.saturating_sub(2));
            (i, (i + 1).min(n - 1), t - i as f64)
        };
        let (i0, i1, tx) = axis(x, s.x_range.0, s.dx(), s.nx);
        let (j0, j1, ty) = axis(y, s.y_range.0, s.dy(), s.ny);
        let bottom = self.get(i0, j0) * (1.0 - tx) + self.get(i1, j0) * tx;
        let top = self.get(i0, j1) * (1.0 - tx) + self.get(i1, j1) * tx;
        Ok(bottom * (1.0 - ty) + top * ty)
    }

    /// Strict local maxima (8-neighbourhood) whose value is at least
    /// `fraction` of the global maximum.
    pub fn dominant_modes(&self, fraction: f64) -> Vec<(usize, usize)> {
        let (nx, ny) = (self.spec.nx, self.spec.ny);
        let threshold = fraction * self.max();
        let mut modes = Vec::new();
        for iy in 0..ny {
            for ix in 0..nx {
                let v = self.get(ix, iy);
                if v < threshold || v <= 0.0 {
                    continue;
                }
                let mut is_max = true;
                for dy in -1i64..=1 {
                    for dx in -1i64..=1 {
                        let (jx, jy) = (ix as i64 + dx, iy as i64 + dy);
                        if (dx, dy) == (0, 0) || jx < 0 || jy < 0 || jx >= nx as i64 || jy >= ny as i64 {
                            continue;
                        }
                        let w = self.get(jx as usize, jy as usize);
                        // Ties broken towards the lower index so a flat top counts once.
                        if w > v || (w == v && (jy, jx) < (iy as i64, ix as i64)) {
                            is_max = false;
                        }
                    }
                }
                if is_max {
                    modes.push((ix, iy));
                }
            }
        }
        modes
    }
}

/// `ρ(u) = Σ mass · K_H(u − location)` at every cell center.
pub fn persistence_surface(measure: &DiagramMeasure, h: &Bandwidth, spec: GridSpec) -> DensityGrid {
    DensityGrid::from_fn(spec, |x, y| {
        measure
            .atoms
            .iter()
            .map(|a| a.mass * kernel_value(h, x - a.x, y - a.y))
            .sum()
    })
}

/// Pointwise mean of the surfaces of `measures`: the kernel density
/// estimator of the weighted expected diagram.
pub fn mean_surface(measures: &[DiagramMeasure], h: &Bandwidth, spec: GridSpec) -> Result<DensityGrid> {
    let pooled = pool(measures)?;
    Ok(persistence_surface(&pooled, h, spec))
}

/// All atoms of `measures` with masses divided by their number.
pub fn pool(measures: &[DiagramMeasure]) -> Result<DiagramMeasure> {
    let first = measures.first().ok_or(Error::Empty("no measures"))?;
    if measures.iter().any(|m| m.coordinates != first.coordinates) {
        return Err(Error::MixedCoordinates);
    }
    let scale = 1.0 / measures.len() as f64;
    Ok(DiagramMeasure {
        atoms: measures
            .iter()
            .flat_map(|m| &m.atoms)
            .map(|a| Atom {
                mass: a.mass * scale,
                ..*a
            })
            .collect(),
        coordinates: first.coordinates,
    })
}

/// `Σ mass · f(location)` with `f` sampled on a grid.
pub fn linear_functional(measure: &DiagramMeasure, f: &DensityGrid) -> Result<f64> {
    measure
        .atoms
        .iter()
        .map(|a| Ok(a.mass * f.interpolate(a.x, a.y)?))
        .sum()
}

/// `Σ mass · f(location)` for a function given in closed form.
pub fn linear_functional_with(measure: &DiagramMeasure, f: impl Fn(f64, f64) -> f64) -> f64 {
    measure.atoms.iter().map(|a| a.mass * f(a.x, a.y)).sum()
}
