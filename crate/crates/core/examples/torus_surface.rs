//! Mean persistence surface of Čech H1 diagrams of points on a torus, with
//! the bandwidth chosen by cross-validation. The two holes of the torus show
//! up as two separated bumps; the raster is written as CSV and 16-bit PGM.
//!
//!     cargo run --release --example torus_surface [OUT_DIR] [N] [n]

use std::path::PathBuf;

use rayon::prelude::*;

use persistence_surfaces::bandwidth::{log_grid, select_bandwidth};
use persistence_surfaces::filtration::FiltrationKind;
use persistence_surfaces::geometry::Sampler;
use persistence_surfaces::io::{write_grid, write_pgm};
use persistence_surfaces::persistence::{cloud_diagram, transform_birth_persistence};
use persistence_surfaces::representation::{as_measure, mean_surface, GridSpec, Weight};
use persistence_surfaces::Result;

fn main() -> Result<()> {
    let mut args = std::env::args().skip(1);
    let out = args.next().map(PathBuf::from).unwrap_or_else(|| std::env::temp_dir().join("torus-surface"));
    let clouds: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(20);
    let points: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(200);
    std::fs::create_dir_all(&out).map_err(|e| persistence_surfaces::Error::Io { path: out.clone(), source: e })?;

    let measures = (0..clouds)
        .into_par_iter()
        .map(|i| {
            let cloud = Sampler::Torus.realization(points, 1, i)?;
            let diagram = transform_birth_persistence(&cloud_diagram(&cloud, FiltrationKind::Cech, 1)?)?;
            Ok(as_measure(&diagram, Weight::Pers3))
        })
        .collect::<Result<Vec<_>>>()?;

    let cv = select_bandwidth(&measures, &log_grid(1e-5, 1.0, 50)?)?;
    let h = cv.selected_bandwidth();
    println!("{clouds} clouds of {points} points, selected h = {:.5}", h.isotropic_scale().unwrap());

    let spec = GridSpec::covering(&measures, &h, 256, 256)?;
    let surface = mean_surface(&measures, &h, spec)?;
    let modes = surface.dominant_modes(0.5);
    println!("local maxima above half the peak: {}", modes.len());
    for (ix, iy) in modes {
        let (b, p) = spec.center(ix, iy);
        println!("  birth {b:.3}, persistence {p:.3}, height {:.3e}", surface.get(ix, iy));
    }
    write_grid(&surface, &out.join("torus_surface.csv"))?;
    write_pgm(&surface, &out.join("torus_surface.pgm"))?;
    println!("wrote {}", out.join("torus_surface.pgm").display());
    Ok(())
}
