//! Mean Betti curves `r ↦ E[β_r]` from the diagrams of many realizations,
//! for the uniform and clustered processes.
//!
//!     cargo run --release --example betti_curves

use persistence_surfaces::filtration::FiltrationKind;
use persistence_surfaces::geometry::Sampler;
use persistence_surfaces::persistence::{betti_curve, cloud_diagram, PersistenceDiagram};
use persistence_surfaces::Result;

fn mean_curve(diagrams: &[PersistenceDiagram], radii: &[f64]) -> Result<Vec<f64>> {
    let mut mean = vec![0.0; radii.len()];
    for d in diagrams {
        for (m, b) in mean.iter_mut().zip(betti_curve(std::slice::from_ref(d), d.hom_dim, radii)?) {
            *m += b as f64 / diagrams.len() as f64;
        }
    }
    Ok(mean)
}

fn main() -> Result<()> {
    let radii: Vec<f64> = (0..=20).map(|k| 0.01 * k as f64).collect();
    for sampler in [Sampler::UniformSquare, Sampler::Clustered] {
        let diagrams = (0..50)
            .map(|i| cloud_diagram(&sampler.realization(99, 3, i)?, FiltrationKind::Cech, 1))
            .collect::<Result<Vec<_>>>()?;
        let curve = mean_curve(&diagrams, &radii)?;
        println!("{sampler}, mean β₁:");
        for (r, b) in radii.iter().zip(&curve).step_by(2) {
            println!("  r = {r:.2}  {b:6.2}  {}", "#".repeat((b * 4.0).round() as usize));
        }
    }
    Ok(())
}
