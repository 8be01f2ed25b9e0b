//! Čech values come from exact minimal enclosing balls; Rips values from the
//! longest edge. This prints both for a few simplices and checks the
//! interleaving `čech ≤ rips ≤ 2·čech`.
//!
//!     cargo run --example cech_vs_rips

use persistence_surfaces::filtration::{cayley_menger_circumradius, cech_value, minimal_enclosing_ball};
use persistence_surfaces::geometry::{sample_uniform_square, PointCloud};
use persistence_surfaces::Result;

fn rips_value(cloud: &PointCloud, vertices: &[u32]) -> f64 {
    let mut longest = 0.0f64;
    for (k, &a) in vertices.iter().enumerate() {
        for &b in &vertices[k + 1..] {
            longest = longest.max(cloud.distance(a as usize, b as usize));
        }
    }
    longest
}

fn main() -> Result<()> {
    let triangle = PointCloud::new(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.5, 3f64.sqrt() / 2.0]])?;
    let (r, barycentric) = cayley_menger_circumradius(&triangle.points().collect::<Vec<_>>())?;
    println!("equilateral triangle: Čech {:.6}, circumradius {r:.6}, barycentric {barycentric:.3?}", cech_value(&triangle, &[0, 1, 2]));

    // An obtuse triangle: the enclosing ball is the one on the longest side,
    // smaller than the circumscribed ball.
    let obtuse = PointCloud::new(vec![vec![0.0, 0.0], vec![2.0, 0.0], vec![1.0, 0.2]])?;
    let points: Vec<&[f64]> = obtuse.points().collect();
    let ball = minimal_enclosing_ball(&points);
    let (circumradius, _) = cayley_menger_circumradius(&points)?;
    println!(
        "obtuse triangle: enclosing ball radius {:.4} centred at {:.3?}, circumradius {circumradius:.4}",
        ball.radius(),
        ball.center
    );

    let cloud = sample_uniform_square(12, 7);
    let simplices: [&[u32]; 4] = [&[0, 1], &[2, 3, 4], &[5, 6, 7, 8], &[0, 3, 6, 9, 11]];
    for vertices in simplices {
        let (c, r) = (cech_value(&cloud, vertices), rips_value(&cloud, vertices));
        println!("{vertices:?}: Čech {c:.4}, Rips {r:.4}, ratio {:.3}", r / c);
        assert!(c <= r && r <= 2.0 * c);
    }
    Ok(())
}
