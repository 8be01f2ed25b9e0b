//! Monte Carlo histogram of the expected persistence diagram, used as ground
//! truth to see how the integrated squared error of a persistence surface
//! depends on the bandwidth.
//!
//!     cargo run --release --example expected_diagram_oracle

use rayon::prelude::*;

use persistence_surfaces::bandwidth::{ise, log_spaced, mc_expected_density, OracleConfig};
use persistence_surfaces::filtration::FiltrationKind;
use persistence_surfaces::geometry::Sampler;
use persistence_surfaces::persistence::{cloud_diagram, transform_birth_persistence};
use persistence_surfaces::representation::{as_measure, mean_surface, Bandwidth, GridSpec, Weight};
use persistence_surfaces::Result;

fn main() -> Result<()> {
    let spec = GridSpec::new((0.0, 0.15), (0.0, 0.08), 300, 160)?;
    let config = OracleConfig {
        sampler: Sampler::UniformSquare,
        n: 80,
        filtration: FiltrationKind::Cech,
        hom_dim: 1,
        weight: Weight::One,
        grid: spec,
        replications: 400,
        seed: 11,
    };
    let oracle = mc_expected_density(&config)?;
    println!(
        "oracle from {} replications: {:.2} H1 points per diagram, {:.3} outside the grid",
        oracle.replications, oracle.mean_total_mass, oracle.outside_mass
    );

    // Thirty fresh realizations, smoothed at a range of bandwidths.
    let measures = (0..30)
        .into_par_iter()
        .map(|i| {
            let cloud = Sampler::UniformSquare.realization(80, 99, i)?;
            Ok(as_measure(&transform_birth_persistence(&cloud_diagram(&cloud, FiltrationKind::Cech, 1)?)?, Weight::One))
        })
        .collect::<Result<Vec<_>>>()?;
    for h in log_spaced(1e-4, 0.1, 13)? {
        let surface = mean_surface(&measures, &Bandwidth::isotropic(h)?, spec)?;
        println!("h = {h:.4}  ISE against the oracle = {:.4e}", ise(&surface, &oracle.grid)?);
    }
    Ok(())
}
