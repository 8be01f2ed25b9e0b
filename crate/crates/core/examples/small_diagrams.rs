//! Persistence diagrams of tiny point clouds whose answers are known by hand.
//!
//!     cargo run --example small_diagrams

use persistence_surfaces::filtration::{cech_filtration, rips_filtration};
use persistence_surfaces::geometry::PointCloud;
use persistence_surfaces::persistence::{betti_curve, compute_persistence, transform_birth_persistence};
use persistence_surfaces::Result;

fn main() -> Result<()> {
    // Four corners of the unit square: one loop, born when the sides appear
    // at 1 and filled when the diagonals appear at √2.
    let square = PointCloud::new(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0]])?;
    let rips = compute_persistence(&rips_filtration(&square, 2, f64::INFINITY), 1)?;
    println!("square, Rips H0: {:?} (+{} infinite)", rips[0].sorted_pairs(), rips[0].discarded_infinite);
    println!("square, Rips H1: {:?}", rips[1].pairs);

    // Under Čech the loop is born at 1/2 (half a side) and dies at √2/2,
    // the circumradius of the right triangles.
    let cech = compute_persistence(&cech_filtration(&square, 2, f64::INFINITY), 1)?;
    println!("square, Čech H1: {:?}", cech[1].pairs);
    println!("transformed to (birth, persistence): {:?}", transform_birth_persistence(&rips[1])?.pairs);

    // Three points on a line: components merge at 1 and 2.
    let line = PointCloud::new(vec![vec![0.0], vec![1.0], vec![3.0]])?;
    let h0 = compute_persistence(&rips_filtration(&line, 1, f64::INFINITY), 0)?;
    println!("collinear H0: {:?} (+{} infinite)", h0[0].sorted_pairs(), h0[0].discarded_infinite);
    let radii = [0.5, 1.5, 2.5];
    println!("finite H0 bars alive at {radii:?}: {:?}", betti_curve(&h0, 0, &radii)?);
    Ok(())
}
