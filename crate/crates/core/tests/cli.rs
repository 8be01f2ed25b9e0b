//! End-to-end runs of the `psurf` binary.

use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use persistence_surfaces::io::{read_cv, read_grid, read_point_cloud};

fn psurf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_psurf")).args(args).output().expect("binary runs")
}

fn code(output: &Output) -> i32 {
    output.status.code().unwrap_or(-1)
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn generate_writes_one_file_per_cloud() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("a");
    let run = psurf(&["generate", "--out", path(&out), "--sampler", "uniform-square", "--N", "40", "--n", "300"]);
    assert_eq!(code(&run), 0, "{}", String::from_utf8_lossy(&run.stderr));
    let clouds: Vec<_> = fs::read_dir(out.join("clouds"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "csv"))
        .collect();
    assert_eq!(clouds.len(), 40);
    assert!(clouds.iter().all(|p| read_point_cloud(p).unwrap().len() == 300));
    assert!(out.join("clouds/manifest.txt").exists());

    let single = dir.path().join("single");
    assert_eq!(code(&psurf(&["generate", "--out", path(&single), "--N", "1", "--n", "10"])), 0);
    assert_eq!(fs::read_dir(single.join("clouds")).unwrap().count(), 2);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x");
    // Unknown weight and bad ranges are configuration errors.
    assert_eq!(code(&psurf(&["generate", "--out", path(&out), "--weight", "pers9"])), 2);
    assert_eq!(code(&psurf(&["generate", "--out", path(&out), "--h-min", "1", "--h-max", "1"])), 2);
    // H1 without triangles violates a precondition.
    assert_eq!(code(&psurf(&["diagrams", "--out", path(&out), "--max-dim", "1"])), 3);
    // Nothing was written by the rejected runs.
    assert!(!out.exists());
    // Missing inputs and unwritable outputs are I/O errors.
    assert_eq!(code(&psurf(&["cv", "--out", path(&out)])), 4);
    let blocker = dir.path().join("file");
    fs::write(&blocker, "").unwrap();
    assert_eq!(code(&psurf(&["generate", "--out", path(&blocker.join("sub")), "--N", "1", "--n", "5"])), 4);
    // An empty cloud directory is a precondition failure.
    let empty = dir.path().join("empty");
    fs::create_dir(&empty).unwrap();
    assert_eq!(code(&psurf(&["diagrams", "--out", path(&out), "--from", path(&empty)])), 3);
}

#[test]
fn flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.conf");
    fs::write(&config, "sampler = torus\nN = 5\nn = 20\n").unwrap();
    let out = dir.path().join("o");
    let run = psurf(&["generate", "--config", path(&config), "--out", path(&out), "--N", "2"]);
    assert_eq!(code(&run), 0);
    assert_eq!(fs::read_dir(out.join("clouds")).unwrap().count(), 3);
    let manifest = fs::read_to_string(out.join("clouds/manifest.txt")).unwrap();
    assert!(manifest.contains("sampler = torus") && manifest.contains("N = 2"));
}

#[test]
fn square_diagram_then_surface_and_betti() {
    let dir = tempfile::tempdir().unwrap();
    let clouds = dir.path().join("clouds");
    fs::create_dir(&clouds).unwrap();
    fs::write(clouds.join("square.csv"), "x0,x1\n0,0\n1,0\n1,1\n0,1\n").unwrap();
    let out = dir.path().join("out");
    let run = psurf(&["diagrams", "--out", path(&out), "--from", path(&clouds), "--filtration", "rips"]);
    assert_eq!(code(&run), 0, "{}", String::from_utf8_lossy(&run.stderr));
    let text = fs::read_to_string(out.join("diagrams/square_dim1.csv")).unwrap();
    assert!(text.contains("1,1,0.41421356"));

    // One atom of mass (√2 − 1)³ at (1, √2 − 1): the surface peaks there.
    let h = 0.05;
    let run = psurf(&["surface", "--out", path(&out), "--h", "0.05", "--grid-nx", "101", "--grid-ny", "101"]);
    assert_eq!(code(&run), 0, "{}", String::from_utf8_lossy(&run.stderr));
    let grid = read_grid(&out.join("surface.csv")).unwrap();
    let (ix, iy) = grid.dominant_modes(0.5)[0];
    let (x, y) = grid.spec.center(ix, iy);
    assert!((x - 1.0).abs() < grid.spec.dx() && (y - (SQRT2_MINUS_1)).abs() < grid.spec.dy());
    let peak = SQRT2_MINUS_1.powi(3) / (2.0 * PI * h * h);
    assert!((grid.max() - peak).abs() / peak < 1e-12);
    assert!(out.join("surface.pgm").exists());

    let run = psurf(&["betti", "--out", path(&out), "--r-min", "0.5", "--r-max", "2.5", "--r-count", "3"]);
    assert_eq!(code(&run), 0);
    assert_eq!(fs::read_to_string(out.join("betti.csv")).unwrap(), "r,mean_betti\n0.5,0\n1.5,0\n2.5,0\n");
    let run = psurf(&["betti", "--out", path(&out), "--r-min", "1.2", "--r-max", "1.3", "--r-count", "2"]);
    assert_eq!(code(&run), 0);
    assert_eq!(fs::read_to_string(out.join("betti.csv")).unwrap(), "r,mean_betti\n1.2,1\n1.3,1\n");
}

const SQRT2_MINUS_1: f64 = std::f64::consts::SQRT_2 - 1.0;

#[test]
fn cv_of_two_coincident_atoms() {
    let dir = tempfile::tempdir().unwrap();
    let diagrams = dir.path().join("d");
    fs::create_dir(&diagrams).unwrap();
    let text = "# coordinates=birth-persistence\ndim,birth,death\n1,0.5,0.5\n# discarded_infinite_dim1=0\n";
    fs::write(diagrams.join("a.csv"), text).unwrap();
    fs::write(diagrams.join("b.csv"), text).unwrap();
    let out = dir.path().join("out");
    let run = psurf(&[
        "cv", "--out", path(&out), "--from", path(&diagrams), "--weight", "one", "--h-min", "0.5", "--h-max", "2",
        "--h-count", "3",
    ]);
    assert_eq!(code(&run), 0, "{}", String::from_utf8_lossy(&run.stderr));
    let (scores, selected) = read_cv(&out.join("cv.csv")).unwrap();
    // Ĵ(h) = −3/(4πh²) for two identical unit atoms: the smallest h wins.
    for (h, score) in &scores {
        assert!((score + 3.0 / (4.0 * PI * h * h)).abs() < 1e-12);
    }
    assert_eq!(selected, 0.5);
}

#[test]
fn pipeline_and_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("p");
    let args = [
        "pipeline", "--out", path(&out), "--sampler", "clustered", "--N", "4", "--n", "60", "--h-count", "10",
        "--grid-nx", "32", "--grid-ny", "32", "--seed", "3", "--threads", "2",
    ];
    let run = psurf(&args);
    assert_eq!(code(&run), 0, "{}", String::from_utf8_lossy(&run.stderr));
    for file in ["cv.csv", "surface.csv", "surface.pgm", "betti.csv", "oracle.csv", "oracle.pgm"] {
        assert!(out.join(file).exists(), "{file}");
    }
    let oracle_out = dir.path().join("o");
    let run = psurf(&["oracle", "--out", path(&oracle_out), "--n", "30", "--replications", "5", "--grid-nx", "16", "--grid-ny", "16"]);
    assert_eq!(code(&run), 0);
    assert!(read_grid(&oracle_out.join("oracle.csv")).unwrap().values.iter().all(|&v| v >= 0.0));
}
