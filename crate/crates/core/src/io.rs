//! Plain-text file formats: point clouds, time series, diagrams,
//! filtrations, rasters, CV scores, and 16-bit PGM images.
//!
//! Every table is comma separated with one header line. Lines starting with
//! `#` carry metadata as `key=value`. Floats are written in Rust's shortest
//! round-trip form, so write → read is the identity.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::bandwidth::CvResult;
use crate::error::{Error, Result};
use crate::filtration::Filtration;
use crate::geometry::{PointCloud, TimeSeries};
use crate::persistence::{Coordinates, PersistenceDiagram};
use crate::representation::{DensityGrid, GridSpec};

struct Table {
    comments: Vec<String>,
    header: Vec<String>,
    rows: Vec<Vec<f64>>,
}

impl Table {
    fn meta(&self, key: &str) -> Option<&str> {
        self.comments.iter().find_map(|c| {
            let (k, v) = c.split_once('=')?;
            (k.trim() == key).then(|| v.trim())
        })
    }
}

fn read_table(path: &Path, fixed_arity: bool) -> Result<Table> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let parse_err = |line: usize, msg: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        msg,
    };
    let mut table = Table {
        comments: Vec::new(),
        header: Vec::new(),
        rows: Vec::new(),
    };
    for (k, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            table.comments.push(comment.trim().to_string());
            continue;
        }
        if table.header.is_empty() {
            table.header = line.split(',').map(|s| s.trim().to_string()).collect();
            continue;
        }
        let row = line
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<f64>, _>>()
            .map_err(|e| parse_err(k + 1, e.to_string()))?;
        if fixed_arity && row.len() != table.header.len() {
            return Err(parse_err(
                k + 1,
                format!("{} fields, header has {}", row.len(), table.header.len()),
            ));
        }
        table.rows.push(row);
    }
    Ok(table)
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn write_point_cloud(cloud: &PointCloud, path: &Path) -> Result<()> {
    let mut out = String::new();
    if let Some(label) = &cloud.label {
        writeln!(out, "# label={label}").unwrap();
    }
    let header: Vec<String> = (0..cloud.dim()).map(|k| format!("x{k}")).collect();
    writeln!(out, "{}", header.join(",")).unwrap();
    for p in cloud.points() {
        write_row(&mut out, p);
    }
    write_text(path, &out)
}

pub fn read_point_cloud(path: &Path) -> Result<PointCloud> {
    let table = read_table(path, true)?;
    if table.rows.is_empty() {
        return Err(Error::NoPoints);
    }
    let label = table.meta("label").map(str::to_string);
    let mut cloud = PointCloud::from_rows(table.header.len(), table.rows)?;
    cloud.label = label;
    Ok(cloud)
}

pub fn write_time_series(series: &TimeSeries, path: &Path) -> Result<()> {
    let mut out = String::new();
    let mut header = vec!["t".to_string()];
    header.extend((0..series.channels()).map(|k| format!("c{k}")));
    writeln!(out, "{}", header.join(",")).unwrap();
    let rate = series.sample_rate.unwrap_or(1.0);
    for t in 0..series.len() {
        let mut row = vec![t as f64 / rate];
        row.extend_from_slice(series.sample(t));
        write_row(&mut out, &row);
    }
    write_text(path, &out)
}

/// Reads `t,c0,…,c{k-1}`; the sample rate is inferred from the first two
/// time stamps.
pub fn read_time_series(path: &Path) -> Result<TimeSeries> {
    let table = read_table(path, true)?;
    if table.header.len() < 2 {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            line: 1,
            msg: "expected a time column and at least one channel".into(),
        });
    }
    if table.rows.is_empty() {
        return Err(Error::NoPoints);
    }
    let rate = match table.rows.as_slice() {
        [a, b, ..] if b[0] > a[0] => Some(1.0 / (b[0] - a[0])),
        _ => None,
    };
    let channels = table.header.len() - 1;
    let samples = table.rows.into_iter().map(|r| r[1..].to_vec()).collect();
    let mut series = TimeSeries::new(channels, samples)?;
    series.sample_rate = rate;
    Ok(series)
}

fn coordinates_name(c: Coordinates) -> &'static str {
    match c {
        Coordinates::BirthDeath => "birth-death",
        Coordinates::BirthPersistence => "birth-persistence",
    }
}

/// `dim,birth,death`, one row per finite pair. In birth-persistence
/// coordinates the third column holds the persistence; a header comment says
/// which.
pub fn diagram_to_string(diagram: &PersistenceDiagram) -> String {
    let mut out = String::new();
    writeln!(out, "# coordinates={}", coordinates_name(diagram.coordinates)).unwrap();
    writeln!(out, "dim,birth,death").unwrap();
    for &(b, d) in &diagram.pairs {
        writeln!(out, "{},{},{}", diagram.hom_dim, b, d).unwrap();
    }
    writeln!(
        out,
        "# discarded_infinite_dim{}={}",
        diagram.hom_dim, diagram.discarded_infinite
    )
    .unwrap();
    out
}

pub fn write_diagram(diagram: &PersistenceDiagram, path: &Path) -> Result<()> {
    write_text(path, &diagram_to_string(diagram))
}

/// Reads a single-dimension diagram file. `hom_dim` is needed when the file
/// has no rows.
pub fn read_diagram(path: &Path, hom_dim: usize) -> Result<PersistenceDiagram> {
    let table = read_table(path, true)?;
    let coordinates = match table.meta("coordinates") {
        Some("birth-persistence") => Coordinates::BirthPersistence,
        _ => Coordinates::BirthDeath,
    };
    let mut diagram = PersistenceDiagram::new(hom_dim, Vec::new());
    diagram.coordinates = coordinates;
    for (k, row) in table.rows.iter().enumerate() {
        if row[0] != hom_dim as f64 {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line: k + 1,
                msg: format!("row of dimension {} in a dimension-{hom_dim} diagram", row[0]),
            });
        }
        diagram.pairs.push((row[1], row[2]));
    }
    diagram.discarded_infinite = table
        .meta(&format!("discarded_infinite_dim{hom_dim}"))
        .and_then(|v| v.parse().ok())
        .unwrap_or(0);
    Ok(diagram)
}

/// Debug dump, `dim,value,v0,v1,…` in filtration order.
pub fn write_filtration(filtration: &Filtration, path: &Path) -> Result<()> {
    let mut out = String::new();
    let mut header = vec!["dim".to_string(), "value".to_string()];
    header.extend((0..=filtration.max_dim()).map(|k| format!("v{k}")));
    writeln!(out, "{}", header.join(",")).unwrap();
    for cell in filtration.cells() {
        write!(out, "{},{}", cell.simplex.dim(), cell.value).unwrap();
        for v in cell.simplex.vertices() {
            write!(out, ",{v}").unwrap();
        }
        out.push('\n');
    }
    write_text(path, &out)
}

/// `u1,u2,value` at cell centers, row-major; the layout is recorded as
/// comments so the raster can be read back.
pub fn write_grid(grid: &DensityGrid, path: &Path) -> Result<()> {
    let s = &grid.spec;
    let mut out = String::new();
    writeln!(out, "# x_range={},{}", s.x_range.0, s.x_range.1).unwrap();
    writeln!(out, "# y_range={},{}", s.y_range.0, s.y_range.1).unwrap();
    writeln!(out, "# nx={}", s.nx).unwrap();
    writeln!(out, "# ny={}", s.ny).unwrap();
    writeln!(out, "u1,u2,value").unwrap();
    for iy in 0..s.ny {
        for ix in 0..s.nx {
            let (x, y) = s.center(ix, iy);
            writeln!(out, "{},{},{}", x, y, grid.get(ix, iy)).unwrap();
        }
    }
    write_text(path, &out)
}

pub fn read_grid(path: &Path) -> Result<DensityGrid> {
    let table = read_table(path, true)?;
    let bad = |msg: &str| Error::Parse {
        path: path.to_path_buf(),
        line: 0,
        msg: msg.to_string(),
    };
    let range = |key: &str| -> Result<(f64, f64)> {
        let (a, b) = table
            .meta(key)
            .and_then(|v| v.split_once(','))
            .ok_or_else(|| bad(&format!("missing {key}")))?;
        Ok((
            a.parse().map_err(|_| bad(key))?,
            b.parse().map_err(|_| bad(key))?,
        ))
    };
    let count = |key: &str| -> Result<usize> {
        table
            .meta(key)
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| bad(&format!("missing {key}")))
    };
    let spec = GridSpec::new(range("x_range")?, range("y_range")?, count("nx")?, count("ny")?)?;
    if table.rows.len() != spec.nx * spec.ny {
        return Err(bad("row count does not match the grid"));
    }
    Ok(DensityGrid {
        spec,
        values: table.rows.iter().map(|r| r[2]).collect(),
    })
}

pub fn write_cv(result: &CvResult, path: &Path) -> Result<()> {
    let mut out = String::new();
    writeln!(out, "h,score").unwrap();
    for (h, score) in &result.grid {
        let scale = h.isotropic_scale().unwrap_or_else(|| h.det().powf(0.25));
        writeln!(out, "{scale},{score}").unwrap();
    }
    let selected = result.selected_bandwidth();
    let h = selected.isotropic_scale().unwrap_or_else(|| selected.det().powf(0.25));
    writeln!(out, "# selected_h={h}").unwrap();
    write_text(path, &out)
}

/// Reads `(h, score)` rows and the selected `h` of a CV file.
pub fn read_cv(path: &Path) -> Result<(Vec<(f64, f64)>, f64)> {
    let table = read_table(path, true)?;
    let selected = table
        .meta("selected_h")
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| Error::Parse {
            path: path.to_path_buf(),
            line: 0,
            msg: "missing selected_h".into(),
        })?;
    Ok((table.rows.iter().map(|r| (r[0], r[1])).collect(), selected))
}

pub fn write_betti(r_grid: &[f64], mean: &[f64], path: &Path) -> Result<()> {
    let mut out = String::from("r,mean_betti\n");
    for (r, b) in r_grid.iter().zip(mean) {
        writeln!(out, "{r},{b}").unwrap();
    }
    write_text(path, &out)
}

/// 16-bit binary PGM. Values map affinely from `[min, max]` onto
/// `[0, 65535]`; the first row is the top of the grid (largest `u2`).
pub fn grid_to_pgm(grid: &DensityGrid) -> Vec<u8> {
    let s = &grid.spec;
    let min = grid.values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = grid.max();
    let span = max - min;
    let mut out = format!("P5\n# min_value={min}\n# max_value={max}\n{} {}\n65535\n", s.nx, s.ny).into_bytes();
    for iy in (0..s.ny).rev() {
        for ix in 0..s.nx {
            let level = if span > 0.0 {
                ((grid.get(ix, iy) - min) / span * 65535.0).round() as u16
            } else {
                0
            };
            out.extend_from_slice(&level.to_be_bytes());
        }
    }
    out
}

pub fn write_pgm(grid: &DensityGrid, path: &Path) -> Result<()> {
    fs::write(path, grid_to_pgm(grid)).map_err(|e| Error::io(path, e))
}

fn write_row(out: &mut String, row: &[f64]) {
    for (k, x) in row.iter().enumerate() {
        if k > 0 {
            out.push(',');
        }
        write!(out, "{x}").unwrap();
    }
    out.push('\n');
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::sample_torus;
    use crate::persistence::transform_birth_persistence;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn cloud_round_trip(points in prop::collection::vec(prop::collection::vec(-1e6f64..1e6, 3), 1..40)) {
            let dir = tempfile::tempdir().unwrap();
            let path = dir.path().join("cloud.csv");
            let cloud = PointCloud::new(points).unwrap();
            write_point_cloud(&cloud, &path).unwrap();
            prop_assert_eq!(read_point_cloud(&path).unwrap(), cloud);
        }
    }

    #[test]
    fn sampled_cloud_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("torus.csv");
        let cloud = sample_torus(50, 4).with_label("torus");
        write_point_cloud(&cloud, &path).unwrap();
        assert_eq!(read_point_cloud(&path).unwrap(), cloud);
    }

    #[test]
    fn malformed_clouds() {
        let dir = tempfile::tempdir().unwrap();
        let ragged = dir.path().join("ragged.csv");
        fs::write(&ragged, "x0,x1\n1,2\n3\n").unwrap();
        assert!(matches!(read_point_cloud(&ragged), Err(Error::Parse { line: 3, .. })));
        let garbage = dir.path().join("garbage.csv");
        fs::write(&garbage, "x0,x1\n1,abc\n").unwrap();
        assert!(read_point_cloud(&garbage).is_err());
        let empty = dir.path().join("empty.csv");
        fs::write(&empty, "").unwrap();
        let err = read_point_cloud(&empty).unwrap_err();
        assert_eq!(err.to_string(), "no points");
    }

    #[test]
    fn diagram_file_layout() {
        let d = PersistenceDiagram::new(1, vec![(1.0, 2.0f64.sqrt())]);
        let t = transform_birth_persistence(&d).unwrap();
        let text = diagram_to_string(&t);
        assert!(text.contains("1,1,0.41421356"));
        assert!(text.contains("# coordinates=birth-persistence"));
        assert!(text.contains("# discarded_infinite_dim1=0"));

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("d.csv");
        write_diagram(&t, &path).unwrap();
        assert_eq!(read_diagram(&path, 1).unwrap(), t);
    }

    #[test]
    fn grid_round_trip_and_pgm() {
        let spec = GridSpec::new((0.0, 1.0), (-1.0, 1.0), 3, 2).unwrap();
        let grid = DensityGrid::from_fn(spec, |x, y| x + 10.0 * y);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.csv");
        write_grid(&grid, &path).unwrap();
        assert_eq!(read_grid(&path).unwrap(), grid);

        let pgm = grid_to_pgm(&grid);
        let header = "P5\n# min_value=";
        assert!(pgm.starts_with(header.as_bytes()));
        let body = &pgm[pgm.len() - 12..];
        // Rows run from the top of the grid (largest y) down.
        let pixel = |k: usize| u16::from_be_bytes([body[2 * k], body[2 * k + 1]]);
        assert_eq!(pixel(2), 65535);
        assert_eq!(pixel(3), 0);
    }

    #[test]
    fn time_series_round_trip() {
        let mut series = TimeSeries::new(3, (0..10).map(|t| vec![t as f64, 1.0, -0.5]).collect()).unwrap();
        series.sample_rate = Some(4.0);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ts.csv");
        write_time_series(&series, &path).unwrap();
        assert_eq!(read_time_series(&path).unwrap(), series);
    }
}
