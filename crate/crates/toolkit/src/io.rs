//! On-disk formats.
//!
//! Matrices are header-less CSV, one row per line. Vectors hold one value
//! per line. Supports on disk are 1-based. An instance directory holds
//! `phi.csv`, `y.csv`, `xstar.csv` and `meta.json`.

use std::fs;
use std::path::Path;

use lire_core::model::SparseInstance;
use lire_core::{DesignMatrix, SupportVector};
use serde::{Deserialize, Serialize};

use crate::error::{io_err, Result, ToolkitError};

pub const PHI_FILE: &str = "phi.csv";
pub const Y_FILE: &str = "y.csv";
pub const XSTAR_FILE: &str = "xstar.csv";
pub const META_FILE: &str = "meta.json";

/// Contents of `meta.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceMeta {
    pub d: usize,
    pub n: usize,
    pub m: usize,
    pub sigma2: f64,
    pub seed: u64,
    pub normalize_columns: bool,
    /// 1-based.
    pub s_star: Vec<usize>,
}

/// A loaded instance directory.
#[derive(Debug, Clone, PartialEq)]
pub struct StoredInstance {
    pub phi: DesignMatrix,
    pub y: Vec<f64>,
    pub x_star: Vec<f64>,
    pub meta: InstanceMeta,
    /// 0-based, validated against `d`.
    pub s_star: SupportVector,
}

fn parse_err(path: &Path, msg: impl Into<String>) -> ToolkitError {
    ToolkitError::Parse {
        path: path.to_path_buf(),
        msg: msg.into(),
    }
}

fn parse_f64(path: &Path, line: usize, field: &str) -> Result<f64> {
    field
        .trim()
        .parse::<f64>()
        .map_err(|e| parse_err(path, format!("line {line}: {e} ({field:?})")))
}

pub fn read_matrix_csv(path: &Path) -> Result<DesignMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| parse_err(path, e.to_string()))?;
    let mut rows = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| parse_err(path, e.to_string()))?;
        let row = rec
            .iter()
            .map(|f| parse_f64(path, i + 1, f))
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(parse_err(path, "empty matrix"));
    }
    Ok(DesignMatrix::from_rows(&rows)?)
}

pub fn write_matrix_csv(path: &Path, phi: &DesignMatrix) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_path(path)?;
    for r in 0..phi.rows() {
        w.write_record((0..phi.cols()).map(|c| format_f64(phi.get(r, c))))?;
    }
    w.flush().map_err(io_err(path))?;
    Ok(())
}

/// Shortest representation that round-trips exactly.
fn format_f64(v: f64) -> String {
    format!("{v:?}")
}

pub fn read_vector(path: &Path) -> Result<Vec<f64>> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| parse_f64(path, i + 1, l))
        .collect()
}

pub fn write_vector(path: &Path, v: &[f64]) -> Result<()> {
    let mut out = String::with_capacity(v.len() * 24);
    for x in v {
        out.push_str(&format_f64(*x));
        out.push('\n');
    }
    fs::write(path, out).map_err(io_err(path))
}

/// Reads 1-based indices separated by newlines, commas or whitespace.
pub fn read_support(path: &Path, d: usize) -> Result<SupportVector> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let idx = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<usize>()
                .map_err(|e| parse_err(path, format!("{e} ({t:?})")))
        })
        .collect::<Result<Vec<_>>>()?;
    if let Some(&bad) = idx.iter().find(|&&i| i == 0 || i > d) {
        return Err(lire_core::Error::IndexOutOfRange { index: bad, cols: d }.into());
    }
    Ok(SupportVector::from_unsorted(idx.iter().map(|i| i - 1).collect(), d)?)
}

pub fn write_instance(dir: &Path, inst: &SparseInstance, normalize_columns: bool) -> Result<InstanceMeta> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    write_matrix_csv(&dir.join(PHI_FILE), &inst.phi)?;
    write_vector(&dir.join(Y_FILE), &inst.y)?;
    write_vector(&dir.join(XSTAR_FILE), &inst.x_star)?;
    let meta = InstanceMeta {
        d: inst.phi.cols(),
        n: inst.phi.rows(),
        m: inst.s_star.len(),
        sigma2: inst.sigma2,
        seed: inst.seed,
        normalize_columns,
        s_star: inst.s_star.to_one_based(),
    };
    let path = dir.join(META_FILE);
    fs::write(&path, serde_json::to_string_pretty(&meta)? + "\n").map_err(io_err(&path))?;
    Ok(meta)
}

pub fn read_instance(dir: &Path) -> Result<StoredInstance> {
    let meta_path = dir.join(META_FILE);
    let meta: InstanceMeta = serde_json::from_str(&fs::read_to_string(&meta_path).map_err(io_err(&meta_path))?)
        .map_err(|e| parse_err(&meta_path, e.to_string()))?;
    let phi = read_matrix_csv(&dir.join(PHI_FILE))?;
    let y = read_vector(&dir.join(Y_FILE))?;
    let x_path = dir.join(XSTAR_FILE);
    let x_star = if x_path.exists() { read_vector(&x_path)? } else { vec![0.0; phi.cols()] };
    if phi.rows() != meta.n || phi.cols() != meta.d {
        return Err(parse_err(
            &meta_path,
            format!("meta says {}x{}, phi.csv is {}x{}", meta.n, meta.d, phi.rows(), phi.cols()),
        ));
    }
    if y.len() != meta.n {
        return Err(parse_err(&dir.join(Y_FILE), format!("expected {} entries, found {}", meta.n, y.len())));
    }
    if x_star.len() != meta.d {
        return Err(parse_err(&x_path, format!("expected {} entries, found {}", meta.d, x_star.len())));
    }
    let s_star = SupportVector::from_one_based(&meta.s_star, meta.d)?;
    Ok(StoredInstance {
        phi,
        y,
        x_star,
        meta,
        s_star,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use lire_core::model::{generate_instance, EnsembleConfig};

    #[test]
    fn instance_round_trip_is_bit_exact() {
        let dir = tempfile::tempdir().unwrap();
        let inst = generate_instance(&EnsembleConfig::new(12, 6, 2, 3).with_noise(0.001)).unwrap();
        write_instance(dir.path(), &inst, false).unwrap();
        let back = read_instance(dir.path()).unwrap();
        assert_eq!(back.phi, inst.phi);
        assert_eq!(back.y, inst.y);
        assert_eq!(back.x_star, inst.x_star);
        assert_eq!(back.s_star, inst.s_star);
        assert_eq!(back.meta.s_star, inst.s_star.to_one_based());
    }

    #[test]
    fn support_files_are_one_based() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("s.txt");
        fs::write(&p, "3, 1\n7\n").unwrap();
        assert_eq!(read_support(&p, 8).unwrap().as_ref(), &[0, 2, 6]);
        fs::write(&p, "0\n").unwrap();
        assert!(read_support(&p, 8).is_err());
    }

    #[test]
    fn ragged_matrix_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("m.csv");
        fs::write(&p, "1,2\n3\n").unwrap();
        assert!(read_matrix_csv(&p).is_err());
        fs::write(&p, "1,x\n").unwrap();
        assert!(read_matrix_csv(&p).is_err());
    }
}
