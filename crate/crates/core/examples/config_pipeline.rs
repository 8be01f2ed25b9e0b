//! The whole file-based pipeline from a flat configuration: sample clouds,
//! compute diagrams, select the bandwidth, then write the surface, the mean
//! Betti curve and the Monte Carlo oracle. The `psurf` binary runs the same
//! stages.
//!
//!     cargo run --release --example config_pipeline [OUT_DIR]

use std::path::PathBuf;

use persistence_surfaces::experiment::{pipeline, ExperimentConfig};
use persistence_surfaces::io::read_cv;
use persistence_surfaces::Result;

const CONFIG: &str = "
# class (b) at reduced size
sampler = clustered
N = 10
n = 150
filtration = cech
hom_dim = 1
max_dim = 2
weight = pers3
h_min = 1e-5
h_max = 1
h_count = 50
grid_nx = 128
grid_ny = 128
replications = 20
seed = 5
";

fn main() -> Result<()> {
    let out = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| std::env::temp_dir().join("psurf-pipeline"));
    let config = ExperimentConfig::parse(CONFIG)?;
    let report = pipeline(&config, &out)?;
    println!("{} clouds, selected h = {}, {} dominant modes", report.clouds, report.selected_h, report.surface_modes);

    let (scores, selected) = read_cv(&out.join("cv.csv"))?;
    let best = scores.iter().find(|(h, _)| *h == selected).map(|(_, s)| *s);
    println!("cv.csv: {} bandwidths, Ĵ at the selection {best:?}", scores.len());
    for entry in std::fs::read_dir(&out).into_iter().flatten().flatten() {
        println!("  {}", entry.path().display());
    }
    Ok(())
}
