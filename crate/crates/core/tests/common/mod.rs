//! Brute-force oracles shared by the integration tests. None of them reuse
//! the library's fast paths.
#![allow(dead_code)]

use std::f64::consts::PI;

use persistence_surfaces::filtration::{cayley_menger_circumradius, Filtration};
use persistence_surfaces::geometry::PointCloud;

/// Smallest enclosing ball radius by trying the circumsphere of every subset
/// and keeping the smallest one that contains all points.
pub fn brute_force_meb_radius(points: &[&[f64]]) -> f64 {
    let k = points.len();
    let scale = points
        .iter()
        .flat_map(|p| p.iter())
        .fold(0.0f64, |m, x| m.max(x.abs()))
        .max(1.0);
    let mut best = f64::INFINITY;
    for mask in 1u32..(1 << k) {
        let subset: Vec<&[f64]> = (0..k).filter(|i| mask & (1 << i) != 0).map(|i| points[i]).collect();
        let (radius, center) = if subset.len() == 1 {
            (0.0, subset[0].to_vec())
        } else {
            let Ok((r, bary)) = cayley_menger_circumradius(&subset) else {
                continue;
            };
            let dim = subset[0].len();
            let center: Vec<f64> = (0..dim)
                .map(|axis| subset.iter().zip(&bary).map(|(p, w)| w * p[axis]).sum())
                .collect();
            (r, center)
        };
        let encloses = points.iter().all(|p| {
            let d2: f64 = p.iter().zip(&center).map(|(a, b)| (a - b).powi(2)).sum();
            d2.sqrt() <= radius + 1e-10 * scale
        });
        if encloses {
            best = best.min(radius);
        }
    }
    best
}

/// Rank over F₂ of a set of bit columns.
fn f2_rank(mut columns: Vec<Vec<u64>>) -> usize {
    let mut rank = 0;
    let words = columns.first().map_or(0, Vec::len);
    let mut row = 0;
    while row < words * 64 {
        let (w, bit) = (row / 64, 1u64 << (row % 64));
        if let Some(p) = (rank..columns.len()).find(|&c| columns[c][w] & bit != 0) {
            columns.swap(rank, p);
            let pivot = columns[rank].clone();
            for c in rank + 1..columns.len() {
                if columns[c][w] & bit != 0 {
                    for (x, y) in columns[c].iter_mut().zip(&pivot) {
                        *x ^= y;
                    }
                }
            }
            rank += 1;
        }
        row += 1;
    }
    rank
}

/// `β_s` of the subcomplex `{σ : value(σ) ≤ r}` from boundary-matrix ranks.
pub fn f2_betti(filtration: &Filtration, s: usize, r: f64) -> usize {
    let alive: Vec<_> = filtration.cells().iter().filter(|c| c.value <= r).collect();
    let of_dim = |k: usize| -> Vec<&[u32]> {
        alive
            .iter()
            .filter(|c| c.simplex.dim() == k)
            .map(|c| c.simplex.vertices())
            .collect()
    };
    let boundary_rank = |k: usize| -> usize {
        if k == 0 {
            return 0;
        }
        let rows = of_dim(k - 1);
        let cols = of_dim(k);
        if cols.is_empty() || rows.is_empty() {
            return 0;
        }
        let words = rows.len().div_ceil(64);
        let matrix = cols
            .iter()
            .map(|simplex| {
                let mut bits = vec![0u64; words];
                for skip in 0..simplex.len() {
                    let face: Vec<u32> = simplex
                        .iter()
                        .enumerate()
                        .filter(|&(i, _)| i != skip)
                        .map(|(_, &v)| v)
                        .collect();
                    let row = rows.iter().position(|f| *f == face.as_slice()).expect("closed complex");
                    bits[row / 64] ^= 1 << (row % 64);
                }
                bits
            })
            .collect();
        f2_rank(matrix)
    };
    of_dim(s).len() - boundary_rank(s) - boundary_rank(s + 1)
}

/// Isotropic 2-D Gaussian density with variance `var` per axis.
pub fn gaussian(var: f64, x: f64, y: f64) -> f64 {
    (-(x * x + y * y) / (2.0 * var)).exp() / (2.0 * PI * var)
}

/// `∫(φ − p̂_h)²` in closed form, where `φ` is the standard 2-D Gaussian and
/// `p̂_h` the kernel estimator with bandwidth `h²I` on `points`.
pub fn gaussian_ise(points: &[(f64, f64)], h: f64) -> f64 {
    let n = points.len() as f64;
    let h2 = h * h;
    let p_sq = 1.0 / (4.0 * PI);
    let cross: f64 = points.iter().map(|&(x, y)| gaussian(1.0 + h2, x, y)).sum::<f64>() / n;
    let mut est_sq = 0.0;
    for &(x1, y1) in points {
        for &(x2, y2) in points {
            est_sq += gaussian(2.0 * h2, x1 - x2, y1 - y2);
        }
    }
    p_sq - 2.0 * cross + est_sq / (n * n)
}

pub fn cloud(points: &[&[f64]]) -> PointCloud {
    PointCloud::new(points.iter().map(|p| p.to_vec()).collect()).unwrap()
}
