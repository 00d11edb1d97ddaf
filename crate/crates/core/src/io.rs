//! JSON file formats: matrices, matrix polynomials and run configuration.
//!
//! Output is produced through `serde_json::Value`, whose maps keep keys in
//! lexicographic order, and floats use shortest round-trip formatting, so
//! identical inputs give byte-identical files and every written matrix
//! re-parses to the same bits.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hardy::SymbolPoly;
use crate::linalg::{ComplexMatrix, Tolerance};

/// Environment variable naming a default [`RunConfig`] file.
pub const CONFIG_ENV: &str = "BIDISC_CONFIG";

/// `{"rows": r, "cols": c, "data": [[re, im], ...]}`, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
}

impl MatrixFile {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        let mut data = Vec::with_capacity(m.len());
        for r in 0..m.nrows() {
            for c in 0..m.ncols() {
                let z = m[(r, c)];
                data.push([z.re, z.im]);
            }
        }
        MatrixFile { rows: m.nrows(), cols: m.ncols(), data }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        if self.data.len() != self.rows * self.cols {
            return Err(Error::InvalidInput(format!(
                "matrix file declares {}×{} but holds {} entries",
                self.rows,
                self.cols,
                self.data.len()
            )));
        }
        if self.data.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(ComplexMatrix::from_fn(self.rows, self.cols, |r, c| {
            let [re, im] = self.data[r * self.cols + c];
            Complex64::new(re, im)
        }))
    }
}

/// `{"coeffs": [M₀, M₁, ...]}`: the polynomial `Σ M_k z^k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyFile {
    pub coeffs: Vec<MatrixFile>,
}

impl PolyFile {
    pub fn from_poly(p: &SymbolPoly) -> Self {
        PolyFile { coeffs: p.coeffs().iter().map(MatrixFile::from_matrix).collect() }
    }

    pub fn to_poly(&self) -> Result<SymbolPoly> {
        SymbolPoly::new(self.coeffs.iter().map(MatrixFile::to_matrix).collect::<Result<_>>()?)
    }
}

/// Settings shared by all subcommands. Missing fields take their defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub rank_tol: f64,
    pub residual_tol: f64,
    pub convergence_tol: f64,
    pub wr_slack: f64,
    /// Hardy-space truncation degree; `None` picks one from `ρ(P)`.
    pub truncation: Option<usize>,
    pub seed: u64,
    /// Boundary grid per axis for von Neumann probes.
    pub grid: usize,
    /// Number of random polynomials in von Neumann probes.
    pub probes: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        let t = Tolerance::default();
        RunConfig {
            rank_tol: t.rank_tol,
            residual_tol: t.residual_tol,
            convergence_tol: t.convergence_tol,
            wr_slack: t.wr_slack,
            truncation: None,
            seed: 20240601,
            grid: 64,
            probes: 100,
        }
    }
}

impl RunConfig {
    pub fn tolerance(&self) -> Result<Tolerance> {
        Tolerance::new(self.rank_tol, self.residual_tol, self.convergence_tol, self.wr_slack)
    }

    pub fn validate(&self) -> Result<()> {
        self.tolerance()?;
        if let Some(n) = self.truncation {
            if n < 2 {
                return Err(Error::TruncationTooSmall { degree: n, required: 2 });
            }
        }
        if self.grid < 2 || self.probes == 0 {
            return Err(Error::InvalidInput("grid must be at least 2 and probes positive".into()));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

fn parse<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    serde_json::from_str(&read_text(path)?).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

pub fn read_matrix(path: &Path) -> Result<ComplexMatrix> {
    parse::<MatrixFile>(path)?.to_matrix()
}

pub fn read_poly(path: &Path) -> Result<SymbolPoly> {
    parse::<PolyFile>(path)?.to_poly()
}

pub fn read_config(path: &Path) -> Result<RunConfig> {
    RunConfig::from_json(&read_text(path)?)
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let value = serde_json::to_value(value).expect("plain data serializes");
    let mut out = serde_json::to_string_pretty(&value).expect("values serialize");
    out.push('\n');
    out
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    std::fs::write(path, to_json(value)).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}
