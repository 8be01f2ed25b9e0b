//! Cross-validated bandwidth selection for kernel density estimation from
//! random measures, and a Monte Carlo histogram of the expected diagram to
//! compare estimators against.
//!
//! With observations `μ₁, …, μ_N` the criterion is
//!
//! ```text
//! Ĵ(H) = 1/N² Σ_{i,j} ∬ K⁽²⁾_H(x − y) μᵢ(dx) μⱼ(dy)
//!      − 2/(N(N−1)) Σ_{i≠j} ∬ K_H(x − y) μᵢ(dx) μⱼ(dy)
//! ```
//!
//! where `K⁽²⁾ = K ∗ K`. It estimates `MISE(H) − ‖p‖²` without bias, so its
//! minimizer over a grid of bandwidths approximates the MISE-optimal one.

use std::f64::consts::PI;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::filtration::FiltrationKind;
use crate::geometry::Sampler;
use crate::persistence::{cloud_diagram, transform_birth_persistence, PersistenceDiagram};
use crate::representation::{as_measure, Atom, Bandwidth, DensityGrid, DiagramMeasure, GridSpec, Weight};
use crate::rng::{substream, StreamRng};

/// `K⁽²⁾_H(u)`: for the unit Gaussian the self-convolution is the Gaussian
/// with bandwidth `2H`, `(4π)⁻¹ det(H)^{-1/2} exp(−uᵀH⁻¹u / 4)`.
pub fn k2_value(h: &Bandwidth, ux: f64, uy: f64) -> f64 {
    (-0.25 * h.quadratic_form(ux, uy)).exp() / (4.0 * PI * h.det().sqrt())
}

/// Scores of every bandwidth, by pair of measures: `(Σ K⁽²⁾, Σ K)` summed
/// over atom pairs.
fn pair_sums(a: &DiagramMeasure, b: &DiagramMeasure, hs: &[Bandwidth], out: &mut [(f64, f64)]) {
    let norms: Vec<(f64, f64)> = hs
        .iter()
        .map(|h| {
            let root = h.det().sqrt();
            (1.0 / (4.0 * PI * root), 1.0 / (2.0 * PI * root))
        })
        .collect();
    for p in &a.atoms {
        for q in &b.atoms {
            let (ux, uy) = (p.x - q.x, p.y - q.y);
            let mass = p.mass * q.mass;
            for ((h, &(c2, c1)), acc) in hs.iter().zip(&norms).zip(out.iter_mut()) {
                let quarter = (-0.25 * h.quadratic_form(ux, uy)).exp();
                if quarter == 0.0 {
                    continue;
                }
                acc.0 += mass * c2 * quarter;
                acc.1 += mass * c1 * quarter * quarter;
            }
        }
    }
}

/// Ĵ(H) for every bandwidth of `hs`, with an exact O(T²) double sum over
/// the atoms. Work is split over pairs of measures; partial sums are added
/// in a fixed order so results do not depend on the thread count.
pub fn cv_scores(measures: &[DiagramMeasure], hs: &[Bandwidth]) -> Result<Vec<f64>> {
    let n = measures.len();
    if n < 2 {
        return Err(Error::LeaveOneOut(n));
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let partial: Vec<Vec<(f64, f64)>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let mut acc = vec![(0.0, 0.0); hs.len()];
            pair_sums(&measures[i], &measures[j], hs, &mut acc);
            acc
        })
        .collect();

    let nf = n as f64;
    let mut scores = vec![0.0; hs.len()];
    for (k, score) in scores.iter_mut().enumerate() {
        let (mut conv, mut cross) = (0.0, 0.0);
        for (&(i, j), acc) in pairs.iter().zip(&partial) {
            if i == j {
                conv += acc[k].0;
            } else {
                conv += 2.0 * acc[k].0;
                cross += 2.0 * acc[k].1;
            }
        }
        *score = conv / (nf * nf) - 2.0 * cross / (nf * (nf - 1.0));
    }
    Ok(scores)
}

pub fn cv_score(measures: &[DiagramMeasure], h: &Bandwidth) -> Result<f64> {
    Ok(cv_scores(measures, std::slice::from_ref(h))?[0])
}

/// Scores over a bandwidth grid and the index of the minimum.
#[derive(Debug, Clone, PartialEq)]
pub struct CvResult {
    pub grid: Vec<(Bandwidth, f64)>,
    pub selected: usize,
}

impl CvResult {
    pub fn selected_bandwidth(&self) -> Bandwidth {
        self.grid[self.selected].0
    }
}

/// Evaluates Ĵ on every bandwidth; the first minimum wins, so on an
/// ascending grid ties go to the smallest `h`.
pub fn select_bandwidth(measures: &[DiagramMeasure], grid: &[Bandwidth]) -> Result<CvResult> {
    if grid.is_empty() {
        return Err(Error::Empty("bandwidth grid"));
    }
    let scores = cv_scores(measures, grid)?;
    let mut selected = 0;
    for (k, s) in scores.iter().enumerate() {
        if *s < scores[selected] {
            selected = k;
        }
    }
    Ok(CvResult {
        grid: grid.iter().copied().zip(scores).collect(),
        selected,
    })
}

/// `count` values from `h_min` to `h_max` inclusive, evenly spaced on a log
/// scale.
pub fn log_spaced(h_min: f64, h_max: f64, count: usize) -> Result<Vec<f64>> {
    if !(h_min > 0.0 && h_min < h_max && h_max.is_finite()) || count < 2 {
        return Err(Error::InvalidRange(format!("[{h_min}, {h_max}] with {count} values")));
    }
    let (lo, hi) = (h_min.ln(), h_max.ln());
    let step = (hi - lo) / (count - 1) as f64;
    let mut hs: Vec<f64> = (0..count).map(|k| (lo + k as f64 * step).exp()).collect();
    hs[0] = h_min;
    hs[count - 1] = h_max;
    Ok(hs)
}

/// Isotropic bandwidths `h² I` on a log-spaced grid of `h`.
pub fn log_grid(h_min: f64, h_max: f64, count: usize) -> Result<Vec<Bandwidth>> {
    log_spaced(h_min, h_max, count)?
        .into_iter()
        .map(Bandwidth::isotropic)
        .collect()
}

/// Keeps each atom with probability `fraction` and divides kept masses by
/// it, so every integral against the measures stays unbiased.
pub fn subsample(measures: &[DiagramMeasure], fraction: f64, rng: &mut StreamRng) -> Vec<DiagramMeasure> {
    assert!(fraction > 0.0 && fraction <= 1.0, "subsampling fraction must lie in (0, 1]");
    measures
        .iter()
        .map(|m| DiagramMeasure {
            atoms: m
                .atoms
                .iter()
                .filter(|_| rng.random::<f64>() < fraction)
                .map(|a| Atom {
                    mass: a.mass / fraction,
                    ..*a
                })
                .collect(),
            coordinates: m.coordinates,
        })
        .collect()
}

/// Integrated squared difference of two rasters over their common grid.
pub fn ise(a: &DensityGrid, b: &DensityGrid) -> Result<f64> {
    if a.spec != b.spec {
        return Err(Error::GridMismatch);
    }
    let sum: f64 = a.values.iter().zip(&b.values).map(|(x, y)| (x - y) * (x - y)).sum();
    Ok(sum * a.spec.cell_area())
}

/// Settings for the Monte Carlo estimate of the expected diagram's density.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleConfig {
    pub sampler: Sampler,
    pub n: usize,
    pub filtration: FiltrationKind,
    pub hom_dim: usize,
    pub weight: Weight,
    pub grid: GridSpec,
    pub replications: usize,
    pub seed: u64,
}

/// Histogram estimate of the density of the weighted expected diagram, in
/// birth-persistence coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleDensity {
    pub grid: DensityGrid,
    pub replications: usize,
    pub hom_dim: usize,
    pub weight: Weight,
    /// Mean weighted mass per replication falling outside the grid.
    pub outside_mass: f64,
    /// Mean total weighted mass per replication.
    pub mean_total_mass: f64,
}

/// The transformed diagrams of the oracle's replications; replication `j`
/// draws its cloud from substream `oracle/rep_j`.
pub fn oracle_diagrams(config: &OracleConfig) -> Result<Vec<PersistenceDiagram>> {
    (0..config.replications)
        .into_par_iter()
        .map(|j| {
            let mut rng = substream(config.seed, &format!("oracle/rep_{j}"));
            let cloud = config.sampler.sample_with(config.n, &mut rng)?;
            transform_birth_persistence(&cloud_diagram(&cloud, config.filtration, config.hom_dim)?)
        })
        .collect()
}

/// Averages mass-weighted 2-D histograms of `diagrams`: each cell holds
/// `(1/M) Σ (mass in cell) / (cell area)`.
pub fn histogram_density(diagrams: &[PersistenceDiagram], weight: Weight, spec: GridSpec, hom_dim: usize) -> OracleDensity {
    let mut grid = DensityGrid::zeros(spec);
    let (mut outside, mut total) = (0.0, 0.0);
    for diagram in diagrams {
        for atom in as_measure(diagram, weight).atoms {
            total += atom.mass;
            match spec.cell_of(atom.x, atom.y) {
                Some((ix, iy)) => grid.values[iy * spec.nx + ix] += atom.mass,
                None => outside += atom.mass,
            }
        }
    }
    let m = diagrams.len().max(1) as f64;
    let scale = 1.0 / (m * spec.cell_area());
    grid.values.iter_mut().for_each(|v| *v *= scale);
    OracleDensity {
        grid,
        replications: diagrams.len(),
        hom_dim,
        weight,
        outside_mass: outside / m,
        mean_total_mass: total / m,
    }
}

/// Monte Carlo estimate of the expected diagram's weighted density.
pub fn mc_expected_density(config: &OracleConfig) -> Result<OracleDensity> {
    if config.replications == 0 {
        return Err(Error::Empty("oracle replications"));
    }
    let diagrams = oracle_diagrams(config)?;
    Ok(histogram_density(&diagrams, config.weight, config.grid, config.hom_dim))
}
