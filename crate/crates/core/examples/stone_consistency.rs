//! Cross-validation on the simplest random measures, a single Dirac mass at a
//! standard Gaussian point. The true density is known, so the integrated
//! squared error of every bandwidth can be computed in closed form and the
//! selected bandwidth compared with the best one on the grid.
//!
//!     cargo run --release --example stone_consistency

use std::f64::consts::PI;

use rand_distr::{Distribution, StandardNormal};

use persistence_surfaces::bandwidth::{log_spaced, select_bandwidth};
use persistence_surfaces::persistence::Coordinates;
use persistence_surfaces::representation::{Atom, Bandwidth, DiagramMeasure};
use persistence_surfaces::rng::substream;
use persistence_surfaces::Result;

fn gaussian(var: f64, x: f64, y: f64) -> f64 {
    (-(x * x + y * y) / (2.0 * var)).exp() / (2.0 * PI * var)
}

/// ∫(φ − p̂_h)² for the standard Gaussian φ and the kernel estimate p̂_h.
fn ise(points: &[(f64, f64)], h: f64) -> f64 {
    let n = points.len() as f64;
    let cross = points.iter().map(|&(x, y)| gaussian(1.0 + h * h, x, y)).sum::<f64>() / n;
    let mut square = 0.0;
    for &(a, b) in points {
        for &(c, d) in points {
            square += gaussian(2.0 * h * h, a - c, b - d);
        }
    }
    1.0 / (4.0 * PI) - 2.0 * cross + square / (n * n)
}

fn main() -> Result<()> {
    let hs = log_spaced(0.02, 2.0, 30)?;
    let grid: Vec<Bandwidth> = hs.iter().map(|&h| Bandwidth::isotropic(h)).collect::<Result<_>>()?;
    for n in [50, 200, 800] {
        let mut ratios = Vec::new();
        for trial in 0..20 {
            let mut rng = substream(17, &format!("stone/{n}/{trial}"));
            let points: Vec<(f64, f64)> = (0..n)
                .map(|_| (StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng)))
                .collect();
            let measures: Vec<DiagramMeasure> = points
                .iter()
                .map(|&(x, y)| DiagramMeasure::new(vec![Atom { x, y, mass: 1.0 }], Coordinates::BirthDeath))
                .collect();
            let selected = select_bandwidth(&measures, &grid)?.selected;
            let errors: Vec<f64> = hs.iter().map(|&h| ise(&points, h)).collect();
            ratios.push(errors[selected] / errors.iter().copied().fold(f64::INFINITY, f64::min));
        }
        ratios.sort_by(f64::total_cmp);
        let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
        println!("N = {n:4}: ISE(ĥ)/best ISE mean {mean:.3}, median {:.3}, worst {:.3}", ratios[10], ratios[19]);
    }
    Ok(())
}
