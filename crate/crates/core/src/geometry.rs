//! Point clouds, the three synthetic point processes, and sliding-window
//! delay embedding of multichannel time series.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::rng::{substream, StreamRng};

/// Center-circle radius of the sampled torus (inner radius 1, outer radius 2).
pub const TORUS_MAJOR_RADIUS: f64 = 1.5;
/// Tube radius of the sampled torus.
pub const TORUS_MINOR_RADIUS: f64 = 0.5;

/// A finite sequence of points in R^dim, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    dim: usize,
    coords: Vec<f64>,
    pub label: Option<String>,
}

impl PointCloud {
    /// Builds a cloud from explicit points. Every point must have the same
    /// number of finite coordinates.
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        let dim = points.first().map(Vec::len).ok_or(Error::NoPoints)?;
        Self::from_rows(dim, points)
    }

    /// Like [`PointCloud::new`] but with an explicit dimension, so an empty
    /// point list is allowed.
    pub fn from_rows(dim: usize, points: Vec<Vec<f64>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DimensionMismatch {
                index: 0,
                expected: 1,
                found: 0,
            });
        }
        let mut coords = Vec::with_capacity(points.len() * dim);
        for (index, p) in points.into_iter().enumerate() {
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    index,
                    expected: dim,
                    found: p.len(),
                });
            }
            if p.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFinite(index));
            }
            coords.extend(p);
        }
        Ok(Self {
            dim,
            coords,
            label: None,
        })
    }

    pub fn from_flat(dim: usize, coords: Vec<f64>) -> Result<Self> {
        assert!(dim > 0 && coords.len().is_multiple_of(dim));
        if let Some(i) = coords.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite(i / dim));
        }
        Ok(Self {
            dim,
            coords,
            label: None,
        })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        squared_distance(self.point(i), self.point(j)).sqrt()
    }

    /// Applies `f` to every coordinate, e.g. for scaling or perturbation.
    pub fn map_coords(&self, mut f: impl FnMut(usize, usize, f64) -> f64) -> PointCloud {
        let coords = self
            .coords
            .iter()
            .enumerate()
            .map(|(k, &x)| f(k / self.dim, k % self.dim, x))
            .collect();
        PointCloud {
            dim: self.dim,
            coords,
            label: self.label.clone(),
        }
    }

    /// Returns the cloud with its points reordered so that point `k` of the
    /// result is point `order[k]` of `self`.
    pub fn permuted(&self, order: &[usize]) -> PointCloud {
        assert_eq!(order.len(), self.len());
        let mut coords = Vec::with_capacity(self.coords.len());
        for &i in order {
            coords.extend_from_slice(self.point(i));
        }
        PointCloud {
            dim: self.dim,
            coords,
            label: self.label.clone(),
        }
    }
}

pub(crate) fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// A multichannel series sampled at regular times.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    channels: usize,
    samples: Vec<f64>,
    pub sample_rate: Option<f64>,
}

impl TimeSeries {
    pub fn new(channels: usize, samples: Vec<Vec<f64>>) -> Result<Self> {
        let cloud = PointCloud::from_rows(channels, samples)?;
        Ok(Self {
            channels,
            samples: cloud.coords,
            sample_rate: None,
        })
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn len(&self) -> usize {
        self.samples.len() / self.channels
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn sample(&self, t: usize) -> &[f64] {
        &self.samples[t * self.channels..(t + 1) * self.channels]
    }
}

/// Cuts `series` into consecutive non-overlapping windows of `window`
/// samples and embeds each window with delay 1: an embedded point stacks
/// `embed_dim / channels` consecutive samples. A window of length `w` with
/// stack depth `k` yields `w - k + 1` points.
pub fn delay_embedding(
    series: &TimeSeries,
    window: usize,
    embed_dim: usize,
) -> Result<Vec<PointCloud>> {
    let channels = series.channels();
    if embed_dim == 0 || !embed_dim.is_multiple_of(channels) {
        return Err(Error::InvalidEmbedding(format!(
            "embedding dimension {embed_dim} is not a positive multiple of {channels} channels"
        )));
    }
    let depth = embed_dim / channels;
    if window == 0 || depth > window {
        return Err(Error::InvalidEmbedding(format!(
            "window {window} cannot hold {depth} stacked samples"
        )));
    }
    let windows = series.len() / window;
    if windows == 0 {
        return Err(Error::SeriesTooShort {
            len: series.len(),
            window,
        });
    }
    let clouds = (0..windows)
        .map(|w| {
            let start = w * window;
            let points = window - depth + 1;
            let mut coords = Vec::with_capacity(points * embed_dim);
            for p in 0..points {
                for lag in 0..depth {
                    coords.extend_from_slice(series.sample(start + p + lag));
                }
            }
            PointCloud {
                dim: embed_dim,
                coords,
                label: Some(format!("window_{w}")),
            }
        })
        .collect();
    Ok(clouds)
}

/// The synthetic point processes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sampler {
    /// i.i.d. uniform points in the unit square.
    UniformSquare,
    /// n/3 uniform centers, each replaced by 3 Gaussian points of standard
    /// deviation 0.01/√n.
    Clustered,
    /// Area-uniform points on the torus with radii 1.5 and 0.5.
    Torus,
}

impl Sampler {
    pub fn name(self) -> &'static str {
        match self {
            Sampler::UniformSquare => "uniform-square",
            Sampler::Clustered => "clustered",
            Sampler::Torus => "torus",
        }
    }

    pub fn sample_with(self, n: usize, rng: &mut StreamRng) -> Result<PointCloud> {
        match self {
            Sampler::UniformSquare => Ok(uniform_square_with(n, rng)),
            Sampler::Clustered => clustered_with(n, rng),
            Sampler::Torus => Ok(torus_with(n, rng)),
        }
    }

    /// The `index`-th realization of the process under `seed`, drawn from
    /// the `sampler/{index}` substream.
    pub fn realization(self, n: usize, seed: u64, index: usize) -> Result<PointCloud> {
        let mut rng = substream(seed, &format!("sampler/{index}"));
        Ok(self
            .sample_with(n, &mut rng)?
            .with_label(format!("{}_{index}", self.name())))
    }
}

impl fmt::Display for Sampler {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Sampler {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform-square" | "a" => Ok(Sampler::UniformSquare),
            "clustered" | "b" => Ok(Sampler::Clustered),
            "torus" | "c" => Ok(Sampler::Torus),
            other => Err(Error::Config(format!("unknown sampler `{other}`"))),
        }
    }
}

pub fn sample_uniform_square(n: usize, seed: u64) -> PointCloud {
    uniform_square_with(n, &mut substream(seed, "uniform-square"))
}

pub fn sample_clustered(n: usize, seed: u64) -> Result<PointCloud> {
    clustered_with(n, &mut substream(seed, "clustered"))
}

pub fn sample_torus(n: usize, seed: u64) -> PointCloud {
    torus_with(n, &mut substream(seed, "torus"))
}

fn uniform_square_with(n: usize, rng: &mut StreamRng) -> PointCloud {
    let coords = (0..2 * n).map(|_| rng.random::<f64>()).collect();
    PointCloud {
        dim: 2,
        coords,
        label: None,
    }
}

fn clustered_with(n: usize, rng: &mut StreamRng) -> Result<PointCloud> {
    if !n.is_multiple_of(3) {
        return Err(Error::NotDivisibleByThree(n));
    }
    let sd = 0.01 / (n as f64).sqrt();
    let normal = Normal::new(0.0, sd).expect("positive standard deviation");
    let mut coords = Vec::with_capacity(2 * n);
    for _ in 0..n / 3 {
        let cx: f64 = rng.random();
        let cy: f64 = rng.random();
        for _ in 0..3 {
            coords.push(cx + normal.sample(rng));
            coords.push(cy + normal.sample(rng));
        }
    }
    Ok(PointCloud {
        dim: 2,
        coords,
        label: None,
    })
}

fn torus_with(n: usize, rng: &mut StreamRng) -> PointCloud {
    let (big, small) = (TORUS_MAJOR_RADIUS, TORUS_MINOR_RADIUS);
    let ratio = small / big;
    let mut coords = Vec::with_capacity(3 * n);
    for _ in 0..n {
        // The area element is proportional to 1 + (ρ/R)cos θ.
        let theta = loop {
            let theta = TAU * rng.random::<f64>();
            let u: f64 = rng.random();
            if u * (1.0 + ratio) <= 1.0 + ratio * theta.cos() {
                break theta;
            }
        };
        let phi = TAU * rng.random::<f64>();
        let ring = big + small * theta.cos();
        coords.extend([ring * phi.cos(), ring * phi.sin(), small * theta.sin()]);
    }
    PointCloud {
        dim: 3,
        coords,
        label: None,
    }
}
