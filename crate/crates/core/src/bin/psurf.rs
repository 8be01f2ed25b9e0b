//! `psurf`: persistence surfaces and bandwidth selection from the command line.
//!
//! Exit codes: 0 ok, 2 configuration error, 3 precondition error, 4 I/O error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use persistence_surfaces::experiment::{self, ExperimentConfig};
use persistence_surfaces::Result;

#[derive(Parser)]
#[command(name = "psurf", version, about = "Persistence surfaces with cross-validated bandwidths")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample or load point clouds into OUT/clouds.
    Generate(Common),
    /// Persistence diagrams of every cloud into OUT/diagrams.
    Diagrams(Staged),
    /// Cross-validation scores over the bandwidth grid into OUT/cv.csv.
    Cv(Staged),
    /// Mean persistence surface into OUT/surface.{csv,pgm}.
    Surface {
        #[command(flatten)]
        staged: Staged,
        /// Bandwidth scale h (H = h²I); defaults to the selection in OUT/cv.csv.
        #[arg(long)]
        h: Option<f64>,
    },
    /// Mean Betti curve into OUT/betti.csv.
    Betti {
        #[command(flatten)]
        staged: Staged,
        #[arg(long)]
        r_min: Option<f64>,
        #[arg(long)]
        r_max: Option<f64>,
        #[arg(long)]
        r_count: Option<usize>,
    },
    /// Monte Carlo histogram of the expected diagram into OUT/oracle.{csv,pgm}.
    Oracle {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        replications: Option<usize>,
    },
    /// generate, diagrams, cv, surface, betti and oracle in one go.
    Pipeline(Common),
}

#[derive(Args)]
struct Common {
    /// Flat `key = value` configuration file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value = "psurf-out")]
    out: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    /// uniform-square, clustered, torus, csv-input or delay-embedding.
    #[arg(long)]
    sampler: Option<String>,
    /// Points per cloud.
    #[arg(long = "n")]
    points: Option<usize>,
    /// Number of clouds.
    #[arg(long = "N")]
    clouds: Option<usize>,
    #[arg(long)]
    filtration: Option<String>,
    #[arg(long)]
    max_dim: Option<usize>,
    #[arg(long)]
    hom_dim: Option<usize>,
    /// `one` or `pers3`.
    #[arg(long)]
    weight: Option<String>,
    #[arg(long)]
    h_min: Option<f64>,
    #[arg(long)]
    h_max: Option<f64>,
    #[arg(long)]
    h_count: Option<usize>,
    #[arg(long)]
    grid_nx: Option<usize>,
    #[arg(long)]
    grid_ny: Option<usize>,
    #[arg(long)]
    threads: Option<usize>,
    /// Atom subsampling fraction for the CV score.
    #[arg(long)]
    subsample: Option<f64>,
    /// Input CSV file or directory for csv-input and delay-embedding.
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Args)]
struct Staged {
    #[command(flatten)]
    common: Common,
    /// Directory read by this stage; defaults to the previous stage's output under OUT.
    #[arg(long)]
    from: Option<PathBuf>,
}

impl Common {
    fn config(&self) -> Result<ExperimentConfig> {
        let mut config = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        let overrides = [
            ("seed", self.seed.map(|v| v.to_string())),
            ("sampler", self.sampler.clone()),
            ("n", self.points.map(|v| v.to_string())),
            ("N", self.clouds.map(|v| v.to_string())),
            ("filtration", self.filtration.clone()),
            ("max_dim", self.max_dim.map(|v| v.to_string())),
            ("hom_dim", self.hom_dim.map(|v| v.to_string())),
            ("weight", self.weight.clone()),
            ("h_min", self.h_min.map(|v| v.to_string())),
            ("h_max", self.h_max.map(|v| v.to_string())),
            ("h_count", self.h_count.map(|v| v.to_string())),
            ("grid_nx", self.grid_nx.map(|v| v.to_string())),
            ("grid_ny", self.grid_ny.map(|v| v.to_string())),
            ("threads", self.threads.map(|v| v.to_string())),
            ("subsample", self.subsample.map(|v| v.to_string())),
            ("input", self.input.as_ref().map(|p| p.display().to_string())),
        ];
        for (key, value) in overrides {
            if let Some(value) = value {
                config.set(key, &value)?;
            }
        }
        config.validate()?;
        Ok(config)
    }
}

impl Staged {
    fn input(&self, default: &str) -> PathBuf {
        self.from.clone().unwrap_or_else(|| self.common.out.join(default))
    }
}

fn set_opt<T: ToString>(config: &mut ExperimentConfig, key: &str, value: Option<T>) -> Result<()> {
    match value {
        Some(v) => config.set(key, &v.to_string()),
        None => Ok(()),
    }
}

fn selected_h(out: &Path) -> Result<f64> {
    persistence_surfaces::io::read_cv(&out.join("cv.csv")).map(|(_, h)| h)
}

fn run(cli: Cli) -> Result<String> {
    match cli.command {
        Command::Generate(common) => {
            let paths = experiment::generate(&common.config()?, &common.out)?;
            Ok(format!("wrote {} clouds to {}", paths.len(), common.out.join("clouds").display()))
        }
        Command::Diagrams(staged) => {
            let config = staged.common.config()?;
            let diagrams = experiment::diagrams(&config, &staged.input("clouds"), &staged.common.out)?;
            let pairs: usize = diagrams.iter().map(|d| d.len()).sum();
            Ok(format!("wrote {} diagrams with {pairs} pairs", diagrams.len()))
        }
        Command::Cv(staged) => {
            let config = staged.common.config()?;
            let result = experiment::cv(&config, &staged.input("diagrams"), &staged.common.out)?;
            let h = result.selected_bandwidth().isotropic_scale().unwrap_or(f64::NAN);
            Ok(format!("selected h = {h}"))
        }
        Command::Surface { staged, h } => {
            let mut config = staged.common.config()?;
            set_opt(&mut config, "h", h)?;
            let h = match config.h {
                Some(h) => h,
                None => selected_h(&staged.common.out)?,
            };
            let grid = experiment::surface(&config, &staged.input("diagrams"), h, &staged.common.out)?;
            Ok(format!("surface at h = {h}: {} dominant modes", grid.dominant_modes(0.5).len()))
        }
        Command::Betti {
            staged,
            r_min,
            r_max,
            r_count,
        } => {
            let mut config = staged.common.config()?;
            set_opt(&mut config, "r_min", r_min)?;
            set_opt(&mut config, "r_max", r_max)?;
            set_opt(&mut config, "r_count", r_count)?;
            config.validate()?;
            let (r, _) = experiment::betti(&config, &staged.input("diagrams"), &staged.common.out)?;
            Ok(format!("wrote mean Betti curve at {} radii", r.len()))
        }
        Command::Oracle { common, replications } => {
            let mut config = common.config()?;
            set_opt(&mut config, "replications", replications)?;
            let density = experiment::oracle(&config, &common.out)?;
            Ok(format!(
                "oracle from {} replications, mean mass {}",
                density.replications, density.mean_total_mass
            ))
        }
        Command::Pipeline(common) => {
            let report = experiment::pipeline(&common.config()?, &common.out)?;
            Ok(format!(
                "{} clouds, selected h = {}, {} dominant surface modes",
                report.clouds, report.selected_h, report.surface_modes
            ))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(message) => {
            println!("{message}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
