//! JSON and CSV artifacts. Files are written to a temporary sibling first and
//! renamed into place.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::domain::{GridDomain, SampledFunction, Shape};
use crate::error::{Error, Result};
use crate::stepfn::{MonotoneStep, StepFunction};

/// Writes `bytes` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let name = path.file_name().ok_or_else(|| Error::Io(format!("{} has no file name", path.display())))?;
    let tmp: PathBuf = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    {
        let mut file = fs::File::create(&tmp)?;
        file.write_all(bytes)?;
        file.sync_all()?;
    }
    fs::rename(&tmp, path).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })?;
    Ok(())
}

pub fn write_json<S: Serialize>(path: &Path, value: &S) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::Format(e.to_string()))?;
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

pub fn read_json<D: for<'de> Deserialize<'de>>(path: &Path) -> Result<D> {
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}

/// CSV text with a header row.
pub fn csv_string(header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn write_csv(path: &Path, header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> Result<()> {
    write_atomic(path, csv_string(header, rows).as_bytes())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepFunctionJson {
    pub breakpoints: Vec<f64>,
    pub values: Vec<f64>,
}

impl From<&StepFunction<f64>> for StepFunctionJson {
    fn from(f: &StepFunction<f64>) -> Self {
        Self { breakpoints: f.breakpoints().to_vec(), values: f.values().to_vec() }
    }
}

impl From<&MonotoneStep<f64>> for StepFunctionJson {
    fn from(f: &MonotoneStep<f64>) -> Self {
        f.as_step().into()
    }
}

impl TryFrom<StepFunctionJson> for StepFunction<f64> {
    type Error = Error;

    fn try_from(j: StepFunctionJson) -> Result<Self> {
        StepFunction::new(j.breakpoints, j.values)
    }
}

pub fn read_step(path: &Path) -> Result<StepFunction<f64>> {
    read_json::<StepFunctionJson>(path)?.try_into()
}

pub fn write_step(path: &Path, f: &StepFunction<f64>) -> Result<()> {
    write_json(path, &StepFunctionJson::from(f))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellJson {
    pub center: Vec<f64>,
    pub measure: f64,
}

/// A sampled function together with its domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainJson {
    pub shape: String,
    pub n: usize,
    /// Lattice spacing; inferred from the centers when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spacing: Option<f64>,
    pub cells: Vec<CellJson>,
    pub values: Vec<f64>,
}

impl From<&SampledFunction<f64>> for DomainJson {
    fn from(f: &SampledFunction<f64>) -> Self {
        let d = f.domain();
        let cells = d
            .centers()
            .iter()
            .zip(d.measures())
            .map(|(c, &m)| CellJson { center: c[..d.dim()].to_vec(), measure: m })
            .collect();
        Self {
            shape: d.shape().to_string(),
            n: d.dim(),
            spacing: Some(d.spacing()),
            cells,
            values: f.values().to_vec(),
        }
    }
}

/// Smallest positive gap between distinct center coordinates.
fn infer_spacing(cells: &[CellJson], n: usize) -> Option<f64> {
    let mut best = f64::INFINITY;
    for axis in 0..n {
        let mut xs: Vec<f64> = cells.iter().map(|c| c.center[axis]).collect();
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for w in xs.windows(2) {
            let d = w[1] - w[0];
            if d > 1e-12 {
                best = best.min(d);
            }
        }
    }
    if best.is_finite() {
        Some(best)
    } else if cells.len() == 1 {
        Some(1.0)
    } else {
        None
    }
}

impl TryFrom<DomainJson> for SampledFunction<f64> {
    type Error = Error;

    fn try_from(j: DomainJson) -> Result<Self> {
        let shape: Shape<f64> = j.shape.parse()?;
        if shape.dim() != j.n {
            return Err(Error::Format(format!("shape {} has dimension {}, file says {}", j.shape, shape.dim(), j.n)));
        }
        if j.cells.len() != j.values.len() {
            return Err(Error::Format(format!("{} cells but {} values", j.cells.len(), j.values.len())));
        }
        if j.cells.iter().any(|c| c.center.len() != j.n) {
            return Err(Error::Format(format!("cell centers must have {} coordinates", j.n)));
        }
        let h = j
            .spacing
            .or_else(|| infer_spacing(&j.cells, j.n))
            .ok_or_else(|| Error::Format("cannot infer the lattice spacing".into()))?;
        let mut centers = Vec::with_capacity(j.cells.len());
        let mut lattice = Vec::with_capacity(j.cells.len());
        for c in &j.cells {
            let y = if j.n == 2 { c.center[1] } else { 0.0 };
            centers.push([c.center[0], y]);
            let idx = |v: f64| (v / h - 0.5).round() as i64;
            lattice.push([idx(c.center[0]), if j.n == 2 { idx(y) } else { 0 }]);
        }
        let measures = j.cells.iter().map(|c| c.measure).collect();
        let domain = GridDomain::from_cells(shape, h, centers, lattice, measures)?;
        SampledFunction::new(Arc::new(domain), j.values)
    }
}

pub fn read_sampled(path: &Path) -> Result<SampledFunction<f64>> {
    read_json::<DomainJson>(path)?.try_into()
}

pub fn write_sampled(path: &Path, f: &SampledFunction<f64>) -> Result<()> {
    write_json(path, &DomainJson::from(f))
}

/// Cell-wise CSV: `x[,y],measure,value`.
pub fn sampled_csv(f: &SampledFunction<f64>) -> String {
    let d = f.domain();
    let header: &[&str] = if d.dim() == 2 { &["x", "y", "measure", "value"] } else { &["x", "measure", "value"] };
    let rows = (0..d.len()).map(|c| {
        let mut row = d.centers()[c][..d.dim()].to_vec();
        row.push(d.measures()[c]);
        row.push(f.values()[c]);
        row
    });
    csv_string(header, rows)
}

/// `t, f*, f**, f** − f*` on `grid`.
pub fn rearrangement_csv(f: &MonotoneStep<f64>, grid: &[f64]) -> String {
    csv_string(&["t", "f_star", "f_double_star", "oscillation"], f.table(grid).into_iter().map(|r| r.to_vec()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::make_domain;

    #[test]
    fn step_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("f.json");
        let f = StepFunction::new(vec![0.0, 0.1, 1.0 / 3.0, 1.0], vec![1.5, -0.25, 1e-300]).unwrap();
        write_step(&p, &f).unwrap();
        assert_eq!(read_step(&p).unwrap(), f);
    }

    #[test]
    fn sampled_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        for shape in [Shape::Interval, Shape::Disk, Shape::BetaCusp(2.0)] {
            let d = Arc::new(make_domain(shape, 16).unwrap());
            let f = SampledFunction::from_fn(d, |[x, y]: [f64; 2]| (3.0 * x).sin() + y * y / 7.0).unwrap();
            let p = dir.path().join("d.json");
            write_sampled(&p, &f).unwrap();
            let back = read_sampled(&p).unwrap();
            assert_eq!(back.values(), f.values());
            assert_eq!(back.domain().lattice(), f.domain().lattice());
            assert_eq!(back.domain().centers(), f.domain().centers());
            assert_eq!(back.domain().measures(), f.domain().measures());
            assert_eq!(DomainJson::from(&back), DomainJson::from(&f));
        }
    }

    #[test]
    fn lattice_is_inferred_without_spacing() {
        let d = Arc::new(make_domain(Shape::Square, 8).unwrap());
        let f = SampledFunction::constant(d, 2.0).unwrap();
        let mut j = DomainJson::from(&f);
        j.spacing = None;
        let back: SampledFunction<f64> = j.try_into().unwrap();
        assert_eq!(back.domain().lattice(), f.domain().lattice());
        assert_eq!(back.domain().neighbors(0), f.domain().neighbors(0));
    }

    #[test]
    fn malformed_inputs() {
        let j = DomainJson { shape: "blob".into(), n: 2, spacing: None, cells: vec![], values: vec![] };
        assert!(SampledFunction::try_from(j).is_err());
        let j = StepFunctionJson { breakpoints: vec![0.0, 0.5], values: vec![1.0] };
        assert!(StepFunction::try_from(j).is_err());
    }

    #[test]
    fn csv_has_header() {
        let s = csv_string(&["t", "v"], vec![vec![0.5, 1.0]]);
        assert_eq!(s, "t,v\n0.5,1\n");
    }
}
