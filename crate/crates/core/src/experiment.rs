//! Experiment configuration and the file-based pipeline stages behind the
//! command-line tool.
//!
//! A configuration is a flat `key = value` text file (`#` starts a comment).
//! Every stage validates the configuration before it reads or writes
//! anything, and all randomness derives from the single `seed`, so running
//! the same configuration twice produces byte-identical files.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;

use crate::bandwidth::{histogram_density, log_grid, oracle_diagrams, select_bandwidth, subsample, CvResult, OracleConfig};
use crate::error::{Error, Result};
use crate::filtration::FiltrationKind;
use crate::geometry::{delay_embedding, PointCloud, Sampler};
use crate::io;
use crate::persistence::{betti_curve, cloud_diagram, transform_birth_persistence, PersistenceDiagram};
use crate::representation::{as_measure, mean_surface, Bandwidth, DiagramMeasure, GridSpec, Weight};
use crate::rng::substream;

/// Where point clouds come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Synthetic(Sampler),
    /// One cloud per CSV file; `input` is a file or a directory.
    CsvInput,
    /// Windows of a time-series CSV, delay-embedded.
    DelayEmbedding,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::Synthetic(s) => write!(f, "{s}"),
            Source::CsvInput => f.write_str("csv-input"),
            Source::DelayEmbedding => f.write_str("delay-embedding"),
        }
    }
}

impl FromStr for Source {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv-input" => Ok(Source::CsvInput),
            "delay-embedding" => Ok(Source::DelayEmbedding),
            other => other
                .parse()
                .map(Source::Synthetic)
                .map_err(|_| Error::Config(format!("unknown sampler `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub sampler: Source,
    /// Number of point clouds (`N`).
    pub clouds: usize,
    /// Points per cloud (`n`).
    pub points: usize,
    pub filtration: FiltrationKind,
    pub max_dim: usize,
    pub hom_dim: usize,
    pub weight: Weight,
    pub h_min: f64,
    pub h_max: f64,
    pub h_count: usize,
    /// Fixed surface bandwidth; when absent the CV selection is used.
    pub h: Option<f64>,
    pub grid_nx: usize,
    pub grid_ny: usize,
    pub seed: u64,
    pub input: Option<PathBuf>,
    pub window: usize,
    pub embed_dim: usize,
    pub replications: usize,
    pub threads: Option<usize>,
    /// Atom subsampling fraction for the CV score.
    pub subsample: Option<f64>,
    pub r_min: f64,
    /// Upper end of the Betti grid; defaults to the largest death time.
    pub r_max: Option<f64>,
    pub r_count: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            sampler: Source::Synthetic(Sampler::UniformSquare),
            clouds: 40,
            points: 300,
            filtration: FiltrationKind::Cech,
            max_dim: 2,
            hom_dim: 1,
            weight: Weight::Pers3,
            h_min: 1e-5,
            h_max: 1.0,
            h_count: 50,
            h: None,
            grid_nx: 256,
            grid_ny: 256,
            seed: 0,
            input: None,
            window: 100,
            embed_dim: 3,
            replications: 100,
            threads: None,
            subsample: None,
            r_min: 0.0,
            r_max: None,
            r_count: 100,
        }
    }
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("invalid value `{value}` for `{key}`")))
}

impl ExperimentConfig {
    /// Parses `key = value` lines on top of the defaults.
    pub fn parse(text: &str) -> Result<Self> {
        let mut config = ExperimentConfig::default();
        for (k, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", k + 1)))?;
            config.set(key.trim(), value.trim())?;
        }
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    /// Sets one key; the same names are used in files and as flag overrides.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "sampler" => self.sampler = value.parse()?,
            "N" => self.clouds = parse_value(key, value)?,
            "n" => self.points = parse_value(key, value)?,
            "filtration" => {
                self.filtration = value
                    .parse()
                    .map_err(|_| Error::Config(format!("unknown filtration `{value}`")))?
            }
            "max_dim" => self.max_dim = parse_value(key, value)?,
            "hom_dim" => self.hom_dim = parse_value(key, value)?,
            "weight" => self.weight = value.parse()?,
            "h_min" => self.h_min = parse_value(key, value)?,
            "h_max" => self.h_max = parse_value(key, value)?,
            "h_count" => self.h_count = parse_value(key, value)?,
            "h" => self.h = Some(parse_value(key, value)?),
            "grid_nx" => self.grid_nx = parse_value(key, value)?,
            "grid_ny" => self.grid_ny = parse_value(key, value)?,
            "seed" => self.seed = parse_value(key, value)?,
            "input" => self.input = Some(PathBuf::from(value)),
            "window" => self.window = parse_value(key, value)?,
            "embed_dim" => self.embed_dim = parse_value(key, value)?,
            "replications" => self.replications = parse_value(key, value)?,
            "threads" => self.threads = Some(parse_value(key, value)?),
            "subsample" => self.subsample = Some(parse_value(key, value)?),
            "r_min" => self.r_min = parse_value(key, value)?,
            "r_max" => self.r_max = Some(parse_value(key, value)?),
            "r_count" => self.r_count = parse_value(key, value)?,
            other => return Err(Error::Config(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::Config(msg.to_string()));
        if !(self.h_min > 0.0 && self.h_min < self.h_max && self.h_max.is_finite()) {
            return bad("need 0 < h_min < h_max");
        }
        if self.h_count < 2 {
            return bad("h_count must be at least 2");
        }
        if let Some(h) = self.h {
            if !(h > 0.0 && h.is_finite()) {
                return bad("h must be positive");
            }
        }
        if self.grid_nx == 0 || self.grid_ny == 0 {
            return bad("grid sizes must be positive");
        }
        if let Some(f) = self.subsample {
            if !(f > 0.0 && f <= 1.0) {
                return bad("subsample must lie in (0, 1]");
            }
        }
        if self.threads == Some(0) {
            return bad("threads must be positive");
        }
        if self.r_count == 0 || self.r_max.is_some_and(|r| r.partial_cmp(&self.r_min) != Some(std::cmp::Ordering::Greater)) {
            return bad("need r_count ≥ 1 and r_max > r_min");
        }
        match self.sampler {
            Source::Synthetic(_) if self.clouds == 0 || self.points == 0 => return bad("N and n must be positive"),
            Source::CsvInput | Source::DelayEmbedding if self.input.is_none() => {
                return bad("this sampler needs an `input` path")
            }
            Source::DelayEmbedding if self.window == 0 || self.embed_dim == 0 => {
                return bad("window and embed_dim must be positive")
            }
            _ => {}
        }
        if self.max_dim < self.hom_dim + 1 {
            return Err(Error::MaxDimTooSmall {
                max_dim: self.max_dim,
                hom_dim: self.hom_dim,
            });
        }
        Ok(())
    }

    pub fn bandwidth_grid(&self) -> Result<Vec<Bandwidth>> {
        log_grid(self.h_min, self.h_max, self.h_count)
    }

    /// Runs `f` on a pool of `threads` workers, or the global pool.
    pub fn install<T: Send>(&self, f: impl FnOnce() -> T + Send) -> Result<T> {
        match self.threads {
            Some(t) => rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map(|pool| pool.install(f))
                .map_err(|e| Error::Config(e.to_string())),
            None => Ok(f()),
        }
    }
}

impl fmt::Display for ExperimentConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "sampler = {}", self.sampler)?;
        writeln!(f, "N = {}", self.clouds)?;
        writeln!(f, "n = {}", self.points)?;
        writeln!(f, "filtration = {}", self.filtration)?;
        writeln!(f, "max_dim = {}", self.max_dim)?;
        writeln!(f, "hom_dim = {}", self.hom_dim)?;
        writeln!(f, "weight = {}", self.weight)?;
        writeln!(f, "h_min = {}", self.h_min)?;
        writeln!(f, "h_max = {}", self.h_max)?;
        writeln!(f, "h_count = {}", self.h_count)?;
        if let Some(h) = self.h {
            writeln!(f, "h = {h}")?;
        }
        writeln!(f, "grid_nx = {}", self.grid_nx)?;
        writeln!(f, "grid_ny = {}", self.grid_ny)?;
        writeln!(f, "seed = {}", self.seed)?;
        if let Some(input) = &self.input {
            writeln!(f, "input = {}", input.display())?;
        }
        writeln!(f, "window = {}", self.window)?;
        writeln!(f, "embed_dim = {}", self.embed_dim)?;
        writeln!(f, "replications = {}", self.replications)?;
        if let Some(t) = self.threads {
            writeln!(f, "threads = {t}")?;
        }
        if let Some(s) = self.subsample {
            writeln!(f, "subsample = {s}")?;
        }
        writeln!(f, "r_min = {}", self.r_min)?;
        if let Some(r) = self.r_max {
            writeln!(f, "r_max = {r}")?;
        }
        writeln!(f, "r_count = {}", self.r_count)
    }
}

fn create_dir(path: &Path) -> Result<()> {
    fs::create_dir_all(path).map_err(|e| Error::io(path, e))
}

/// CSV files of a directory in name order.
fn csv_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "csv"))
        .collect();
    files.sort();
    Ok(files)
}

fn file_stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

/// The point clouds a configuration describes.
pub fn load_clouds(config: &ExperimentConfig) -> Result<Vec<PointCloud>> {
    config.validate()?;
    match config.sampler {
        Source::Synthetic(sampler) => (0..config.clouds)
            .map(|i| Ok(sampler.realization(config.points, config.seed, i)?.with_label(format!("{sampler}/{i}"))))
            .collect(),
        Source::CsvInput => {
            let input = config.input.as_deref().expect("validated");
            let files = if input.is_dir() { csv_files(input)? } else { vec![input.to_path_buf()] };
            if files.is_empty() {
                return Err(Error::Empty("point cloud files"));
            }
            files.iter().map(|f| io::read_point_cloud(f)).collect()
        }
        Source::DelayEmbedding => {
            let series = io::read_time_series(config.input.as_deref().expect("validated"))?;
            delay_embedding(&series, config.window, config.embed_dim)
        }
    }
}

/// Writes `clouds/cloud_XXXX.csv` and `clouds/manifest.txt` under `out`.
pub fn generate(config: &ExperimentConfig, out: &Path) -> Result<Vec<PathBuf>> {
    let clouds = load_clouds(config)?;
    let dir = out.join("clouds");
    create_dir(&dir)?;
    let mut manifest = format!("{config}\n");
    let mut paths = Vec::with_capacity(clouds.len());
    for (i, cloud) in clouds.iter().enumerate() {
        let name = format!("cloud_{i:04}.csv");
        io::write_point_cloud(cloud, &dir.join(&name))?;
        manifest.push_str(&format!("# {name} points={}\n", cloud.len()));
        paths.push(dir.join(name));
    }
    let manifest_path = dir.join("manifest.txt");
    fs::write(&manifest_path, manifest).map_err(|e| Error::io(&manifest_path, e))?;
    Ok(paths)
}

/// Computes one transformed diagram per cloud file in `clouds_dir` and writes
/// them to `out/diagrams`.
pub fn diagrams(config: &ExperimentConfig, clouds_dir: &Path, out: &Path) -> Result<Vec<PersistenceDiagram>> {
    config.validate()?;
    let files = csv_files(clouds_dir)?;
    if files.is_empty() {
        return Err(Error::Empty("point cloud directory"));
    }
    let clouds = files.iter().map(|f| io::read_point_cloud(f)).collect::<Result<Vec<_>>>()?;
    let diagrams = config.install(|| {
        clouds
            .par_iter()
            .map(|c| transform_birth_persistence(&cloud_diagram(c, config.filtration, config.hom_dim)?))
            .collect::<Result<Vec<_>>>()
    })??;
    let dir = out.join("diagrams");
    create_dir(&dir)?;
    for (file, diagram) in files.iter().zip(&diagrams) {
        let name = format!("{}_dim{}.csv", file_stem(file), config.hom_dim);
        io::write_diagram(diagram, &dir.join(name))?;
    }
    Ok(diagrams)
}

pub fn read_diagrams(config: &ExperimentConfig, dir: &Path) -> Result<Vec<PersistenceDiagram>> {
    let files = csv_files(dir)?;
    if files.is_empty() {
        return Err(Error::Empty("diagram directory"));
    }
    files.iter().map(|f| io::read_diagram(f, config.hom_dim)).collect()
}

fn measures(config: &ExperimentConfig, diagrams: &[PersistenceDiagram]) -> Vec<DiagramMeasure> {
    diagrams.iter().map(|d| as_measure(d, config.weight)).collect()
}

/// Cross-validated bandwidth selection over the configured grid; writes
/// `out/cv.csv`.
pub fn cv(config: &ExperimentConfig, diagram_dir: &Path, out: &Path) -> Result<CvResult> {
    config.validate()?;
    let grid = config.bandwidth_grid()?;
    let mut measures = measures(config, &read_diagrams(config, diagram_dir)?);
    if let Some(fraction) = config.subsample {
        measures = subsample(&measures, fraction, &mut substream(config.seed, "cv/subsample"));
    }
    let result = config.install(|| select_bandwidth(&measures, &grid))??;
    create_dir(out)?;
    io::write_cv(&result, &out.join("cv.csv"))?;
    Ok(result)
}

/// Mean persistence surface at bandwidth `h²I`; writes `out/surface.csv` and
/// `out/surface.pgm`.
pub fn surface(config: &ExperimentConfig, diagram_dir: &Path, h: f64, out: &Path) -> Result<crate::representation::DensityGrid> {
    config.validate()?;
    let h = Bandwidth::isotropic(h)?;
    let measures = measures(config, &read_diagrams(config, diagram_dir)?);
    let spec = GridSpec::covering(&measures, &h, config.grid_nx, config.grid_ny)?;
    let grid = config.install(|| mean_surface(&measures, &h, spec))??;
    create_dir(out)?;
    io::write_grid(&grid, &out.join("surface.csv"))?;
    io::write_pgm(&grid, &out.join("surface.pgm"))?;
    Ok(grid)
}

/// The Betti grid: `r_count` evenly spaced radii from `r_min` to `r_max`.
pub fn betti_grid(config: &ExperimentConfig, diagrams: &[PersistenceDiagram]) -> Vec<f64> {
    let r_max = config.r_max.unwrap_or_else(|| {
        diagrams
            .iter()
            .flat_map(|d| d.intervals())
            .map(|(_, death)| death)
            .fold(config.r_min, f64::max)
    });
    if config.r_count == 1 {
        return vec![config.r_min];
    }
    let step = (r_max - config.r_min) / (config.r_count - 1) as f64;
    (0..config.r_count).map(|k| config.r_min + step * k as f64).collect()
}

/// Mean Betti curve of the diagrams; writes `out/betti.csv`.
pub fn betti(config: &ExperimentConfig, diagram_dir: &Path, out: &Path) -> Result<(Vec<f64>, Vec<f64>)> {
    config.validate()?;
    let diagrams = read_diagrams(config, diagram_dir)?;
    let r_grid = betti_grid(config, &diagrams);
    let m = diagrams.len() as f64;
    let mut mean = vec![0.0; r_grid.len()];
    for d in &diagrams {
        for (acc, b) in mean.iter_mut().zip(betti_curve(std::slice::from_ref(d), config.hom_dim, &r_grid)?) {
            *acc += b as f64 / m;
        }
    }
    create_dir(out)?;
    io::write_betti(&r_grid, &mean, &out.join("betti.csv"))?;
    Ok((r_grid, mean))
}

/// Monte Carlo histogram of the expected diagram over a grid covering every
/// replication's atoms; writes `out/oracle.csv` and `out/oracle.pgm`.
pub fn oracle(config: &ExperimentConfig, out: &Path) -> Result<crate::bandwidth::OracleDensity> {
    config.validate()?;
    let Source::Synthetic(sampler) = config.sampler else {
        return Err(Error::Config("the oracle needs a synthetic sampler".into()));
    };
    if config.replications == 0 {
        return Err(Error::Config("replications must be positive".into()));
    }
    let placeholder = GridSpec::new((0.0, 1.0), (0.0, 1.0), config.grid_nx, config.grid_ny)?;
    let oracle_config = OracleConfig {
        sampler,
        n: config.points,
        filtration: config.filtration,
        hom_dim: config.hom_dim,
        weight: config.weight,
        grid: placeholder,
        replications: config.replications,
        seed: config.seed,
    };
    let diagrams = config.install(|| oracle_diagrams(&oracle_config))??;
    let (mut x1, mut y1) = (0.0f64, 0.0f64);
    for d in &diagrams {
        for &(b, p) in &d.pairs {
            x1 = x1.max(b);
            y1 = y1.max(p);
        }
    }
    // Widen by a hair so the largest atoms fall inside the closed last cell.
    let spec = GridSpec::new(
        (0.0, if x1 > 0.0 { x1 * (1.0 + 1e-9) } else { 1.0 }),
        (0.0, if y1 > 0.0 { y1 * (1.0 + 1e-9) } else { 1.0 }),
        config.grid_nx,
        config.grid_ny,
    )?;
    let density = histogram_density(&diagrams, config.weight, spec, config.hom_dim);
    create_dir(out)?;
    io::write_grid(&density.grid, &out.join("oracle.csv"))?;
    io::write_pgm(&density.grid, &out.join("oracle.pgm"))?;
    Ok(density)
}

/// Summary of a full pipeline run.
#[derive(Debug, Clone)]
pub struct PipelineReport {
    pub clouds: usize,
    pub selected_h: f64,
    pub surface_modes: usize,
}

/// generate → diagrams → cv → surface → betti, plus the oracle for
/// synthetic samplers when `replications > 0`.
pub fn pipeline(config: &ExperimentConfig, out: &Path) -> Result<PipelineReport> {
    config.validate()?;
    let clouds = generate(config, out)?;
    diagrams(config, &out.join("clouds"), out)?;
    let diagram_dir = out.join("diagrams");
    let selected = cv(config, &diagram_dir, out)?.selected_bandwidth();
    let h = config.h.or(selected.isotropic_scale()).expect("isotropic grid");
    let grid = surface(config, &diagram_dir, h, out)?;
    betti(config, &diagram_dir, out)?;
    if matches!(config.sampler, Source::Synthetic(_)) && config.replications > 0 {
        oracle(config, out)?;
    }
    Ok(PipelineReport {
        clouds: clouds.len(),
        selected_h: h,
        surface_modes: grid.dominant_modes(0.5).len(),
    })
}
