//! Minimal enclosing balls and circumspheres.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::geometry::squared_distance;

/// A ball given by its center and squared radius.
#[derive(Debug, Clone, PartialEq)]
pub struct Ball {
    pub center: Vec<f64>,
    pub radius_squared: f64,
}

impl Ball {
    pub fn radius(&self) -> f64 {
        self.radius_squared.max(0.0).sqrt()
    }

    fn contains(&self, p: &[f64]) -> bool {
        let slack = 1e-12 * self.radius_squared.max(f64::MIN_POSITIVE);
        squared_distance(&self.center, p) <= self.radius_squared + slack
    }
}

/// Circumcenter of `points` inside their affine hull, as barycentric
/// coordinates, together with the squared circumradius. `None` when the
/// points are affinely dependent.
pub fn circumsphere(points: &[&[f64]]) -> Option<(Vec<f64>, f64)> {
    let k = points.len().checked_sub(1)?;
    if k == 0 {
        return Some((vec![1.0], 0.0));
    }
    let origin = points[0];
    let edges: Vec<Vec<f64>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(origin).map(|(a, b)| a - b).collect())
        .collect();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    // Gram system G λ = ½ diag(G): the circumcenter is origin + Σ λᵢ eᵢ.
    let mut gram = vec![0.0; k * (k + 1)];
    let mut scale: f64 = 0.0;
    for i in 0..k {
        for j in 0..k {
            gram[i * (k + 1) + j] = dot(&edges[i], &edges[j]);
        }
        gram[i * (k + 1) + k] = 0.5 * gram[i * (k + 1) + i];
        scale = scale.max(gram[i * (k + 1) + i]);
    }
    let lambda = solve_augmented(&mut gram, k, 1e-12 * scale)?;
    let mut offset = vec![0.0; origin.len()];
    for (l, e) in lambda.iter().zip(&edges) {
        for (o, x) in offset.iter_mut().zip(e) {
            *o += l * x;
        }
    }
    let radius_squared = dot(&offset, &offset);
    let mut barycentric = Vec::with_capacity(k + 1);
    barycentric.push(1.0 - lambda.iter().sum::<f64>());
    barycentric.extend(lambda);
    Some((barycentric, radius_squared))
}

/// Gaussian elimination with partial pivoting on a k×(k+1) augmented
/// matrix stored row-major.
fn solve_augmented(m: &mut [f64], k: usize, tol: f64) -> Option<Vec<f64>> {
    let w = k + 1;
    for col in 0..k {
        let pivot = (col..k).max_by(|&a, &b| m[a * w + col].abs().total_cmp(&m[b * w + col].abs()))?;
        if m[pivot * w + col].abs() <= tol {
            return None;
        }
        if pivot != col {
            for c in 0..w {
                m.swap(pivot * w + c, col * w + c);
            }
        }
        for row in col + 1..k {
            let factor = m[row * w + col] / m[col * w + col];
            for c in col..w {
                m[row * w + c] -= factor * m[col * w + c];
            }
        }
    }
    let mut x = vec![0.0; k];
    for row in (0..k).rev() {
        let tail: f64 = (row + 1..k).map(|c| m[row * w + c] * x[c]).sum();
        x[row] = (m[row * w + k] - tail) / m[row * w + row];
    }
    Some(x)
}

fn ball_from_support(points: &[&[f64]], support: &[usize]) -> Ball {
    let dim = points[0].len();
    match support {
        [] => Ball {
            center: vec![0.0; dim],
            radius_squared: -1.0,
        },
        [i] => Ball {
            center: points[*i].to_vec(),
            radius_squared: 0.0,
        },
        _ => {
            let pts: Vec<&[f64]> = support.iter().map(|&i| points[i]).collect();
            match circumsphere(&pts) {
                Some((bary, radius_squared)) => {
                    let mut center = vec![0.0; dim];
                    for (b, p) in bary.iter().zip(&pts) {
                        for (c, x) in center.iter_mut().zip(p.iter()) {
                            *c += b * x;
                        }
                    }
                    Ball {
                        center,
                        radius_squared,
                    }
                }
                // Affinely dependent support only arises from rounding; the
                // diametral pair then encloses the support.
                None => {
                    let mut best = (0, 0, -1.0);
                    for (a, &i) in support.iter().enumerate() {
                        for &j in &support[a + 1..] {
                            let d = squared_distance(points[i], points[j]);
                            if d > best.2 {
                                best = (i, j, d);
                            }
                        }
                    }
                    let center = points[best.0]
                        .iter()
                        .zip(points[best.1])
                        .map(|(a, b)| 0.5 * (a + b))
                        .collect();
                    Ball {
                        center,
                        radius_squared: best.2 / 4.0,
                    }
                }
            }
        }
    }
}

fn move_to_front(points: &[&[f64]], order: &mut [usize], end: usize, support: &mut Vec<usize>) -> Ball {
    let mut ball = ball_from_support(points, support);
    if support.len() == points[0].len() + 1 {
        return ball;
    }
    for i in 0..end {
        let p = order[i];
        if !ball.contains(points[p]) {
            support.push(p);
            ball = move_to_front(points, order, i, support);
            support.pop();
            order[..=i].rotate_right(1);
        }
    }
    ball
}

/// Minimal enclosing ball by Welzl's move-to-front recursion.
pub fn minimal_enclosing_ball(points: &[&[f64]]) -> Ball {
    assert!(!points.is_empty(), "minimal enclosing ball of no points");
    let mut order: Vec<usize> = (0..points.len()).collect();
    let mut support = Vec::with_capacity(points[0].len() + 1);
    move_to_front(points, &mut order, points.len(), &mut support)
}

pub fn meb_radius(points: &[&[f64]]) -> f64 {
    minimal_enclosing_ball(points).radius()
}

/// Circumradius and circumcenter barycentric coordinates read off the
/// inverse Cayley-Menger matrix: `(M⁻¹)₀₀ = −2r²`, and the rest of the first
/// row holds the barycentric coordinates.
pub fn cayley_menger_circumradius(points: &[&[f64]]) -> Result<(f64, Vec<f64>)> {
    let k = points.len();
    if k == 0 {
        return Err(Error::DegenerateSimplex);
    }
    let mut m = DMatrix::<f64>::zeros(k + 1, k + 1);
    let mut scale: f64 = 0.0;
    for i in 0..k {
        m[(0, i + 1)] = 1.0;
        m[(i + 1, 0)] = 1.0;
        for j in 0..i {
            let d = squared_distance(points[i], points[j]);
            m[(i + 1, j + 1)] = d;
            m[(j + 1, i + 1)] = d;
            scale = scale.max(d);
        }
    }
    let lu = m.lu();
    // det M scales like (squared length)^(k-1).
    let det = lu.determinant();
    if !det.is_finite() || det.abs() <= 1e-12 * scale.powi(k as i32 - 1) {
        return Err(Error::DegenerateSimplex);
    }
    let inv = lu.try_inverse().ok_or(Error::DegenerateSimplex)?;
    let radius_squared = -inv[(0, 0)] / 2.0;
    if radius_squared < 0.0 {
        return Err(Error::DegenerateSimplex);
    }
    let barycentric = (1..=k).map(|j| inv[(0, j)]).collect();
    Ok((radius_squared.sqrt(), barycentric))
}

/// Čech value of a triangle from its squared side lengths: half the
/// longest side when the triangle is right or obtuse, its circumradius
/// otherwise.
pub(crate) fn triangle_meb_radius(a: f64, b: f64, c: f64) -> f64 {
    // Sorted sides make the result independent of vertex order.
    let mut sides = [a, b, c];
    sides.sort_by(f64::total_cmp);
    let [a, b, c] = sides;
    let half_longest = 0.5 * c.sqrt();
    if 2.0 * c >= a + b + c {
        return half_longest;
    }
    // 16·area² = 2ab + 2bc + 2ca − a² − b² − c² (Heron on squared sides).
    let area16 = 2.0 * (a * b + b * c + c * a) - a * a - b * b - c * c;
    if area16 <= 0.0 {
        return half_longest;
    }
    (a * b * c / area16).sqrt().max(half_longest)
}
