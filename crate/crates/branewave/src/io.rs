//! Deterministic CSV tables with a `#`-prefixed JSON header line.
//!
//! Numbers are written with 17 significant digits so files round-trip
//! bit-for-bit; rereading a table and writing it again produces identical
//! bytes.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::RhoQuadratureConfig;
use crate::spectrum::{
    ContinuousBasis, GeneralizedEigenfunction, OperatorSpec, PointSpectrum, SpectralBasis,
};

/// 17-significant-digit scientific form; parses back to the same f64.
pub fn g17(x: f64) -> String {
    format!("{x:.16e}")
}

/// A column table with a JSON header.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: serde_json::Value,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(header: impl Serialize, columns: &[&str]) -> Result<Self> {
        let header = serde_json::to_value(header)
            .map_err(|e| Error::Config { field: "header".into(), message: e.to_string() })?;
        Ok(Table { header, columns: columns.iter().map(|s| s.to_string()).collect(), rows: vec![] })
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write_to(&self, mut w: impl Write) -> std::io::Result<()> {
        writeln!(w, "#{}", self.header)?;
        writeln!(w, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(|&v| g17(v)).collect();
            writeln!(w, "{}", line.join(","))?;
        }
        Ok(())
    }

    pub fn write_path(&self, path: impl AsRef<Path>) -> Result<()> {
        let f = File::create(path.as_ref()).map_err(|e| Error::Config {
            field: path.as_ref().display().to_string(),
            message: e.to_string(),
        })?;
        self.write_to(BufWriter::new(f)).map_err(|e| Error::Config {
            field: path.as_ref().display().to_string(),
            message: e.to_string(),
        })
    }

    pub fn read_from(r: impl std::io::Read) -> Result<Table> {
        let mut lines = BufReader::new(r).lines();
        let bad = |m: &str| Error::Config { field: "table".into(), message: m.to_string() };
        let head = lines.next().ok_or_else(|| bad("empty file"))?.map_err(|e| bad(&e.to_string()))?;
        let head = head.strip_prefix('#').ok_or_else(|| bad("missing JSON header line"))?;
        let header: serde_json::Value =
            serde_json::from_str(head).map_err(|e| bad(&e.to_string()))?;
        let cols = lines.next().ok_or_else(|| bad("missing column line"))?.map_err(|e| bad(&e.to_string()))?;
        let columns: Vec<String> = cols.split(',').map(|s| s.to_string()).collect();
        let mut rows = Vec::new();
        for line in lines {
            let line = line.map_err(|e| bad(&e.to_string()))?;
            if line.is_empty() {
                continue;
            }
            let row: std::result::Result<Vec<f64>, _> =
                line.split(',').map(|t| t.parse::<f64>()).collect();
            rows.push(row.map_err(|e| bad(&e.to_string()))?);
        }
        Ok(Table { header, columns, rows })
    }

    pub fn read_path(path: impl AsRef<Path>) -> Result<Table> {
        let f = File::open(path.as_ref()).map_err(|e| Error::Config {
            field: path.as_ref().display().to_string(),
            message: e.to_string(),
        })?;
        Self::read_from(f)
    }

    pub fn header_as<T: DeserializeOwned>(&self) -> Result<T> {
        serde_json::from_value(self.header.clone())
            .map_err(|e| Error::Config { field: "header".into(), message: e.to_string() })
    }
}

/// Header of a portable basis table: everything needed to rebuild the grids.
#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct BasisHeader {
    pub kind: String,
    pub spec: OperatorSpec,
    pub quad: RhoQuadratureConfig,
    pub m_max: f64,
    pub n_point: usize,
    pub n_continuous: usize,
    pub n_rho: usize,
}

// Row tags of the long-form basis table.
const TAG_EIGENVALUE: f64 = 0.0; // (tag, j, 0, lambda_j), (tag, j, 1, residual), (tag, j, 2, w(rho0))
const TAG_EIGENFUNCTION: f64 = 1.0; // (tag, j, i, w_j(rho_i))
const TAG_M_NODE: f64 = 2.0; // (tag, k, 0, m), (.,1,weight), (.,2,w(rho0)), (.,3,w'(rho0)), (.,4,imag defect)
const TAG_CONTINUOUS: f64 = 3.0; // (tag, k, i, w_k(rho_i))

/// Serialize a basis into one long-form table (grids in the header,
/// values in tagged rows).
pub fn basis_to_table(basis: &SpectralBasis) -> Result<Table> {
    let header = BasisHeader {
        kind: "spectral_basis".into(),
        spec: basis.spec,
        quad: basis.quad.config,
        m_max: basis.m_max,
        n_point: basis.n_point(),
        n_continuous: basis.n_continuous(),
        n_rho: basis.quad.len(),
    };
    let mut t = Table::new(header, &["tag", "outer", "inner", "value"])?;
    for (j, &l) in basis.point.eigenvalues.iter().enumerate() {
        t.push(vec![TAG_EIGENVALUE, j as f64, 0.0, l]);
        t.push(vec![TAG_EIGENVALUE, j as f64, 1.0, basis.point.residuals[j]]);
        t.push(vec![TAG_EIGENVALUE, j as f64, 2.0, basis.point.boundary_values[j]]);
        for (i, &w) in basis.point.eigenfunctions[j].iter().enumerate() {
            t.push(vec![TAG_EIGENFUNCTION, j as f64, i as f64, w]);
        }
    }
    for (k, g) in basis.continuous.functions.iter().enumerate() {
        t.push(vec![TAG_M_NODE, k as f64, 0.0, g.m]);
        t.push(vec![TAG_M_NODE, k as f64, 1.0, basis.continuous.m_weights[k]]);
        t.push(vec![TAG_M_NODE, k as f64, 2.0, g.w_at_brane]);
        t.push(vec![TAG_M_NODE, k as f64, 3.0, g.w_prime_at_brane]);
        t.push(vec![TAG_M_NODE, k as f64, 4.0, g.imag_defect]);
        for (i, &w) in g.w.iter().enumerate() {
            t.push(vec![TAG_CONTINUOUS, k as f64, i as f64, w]);
        }
    }
    Ok(t)
}

/// Rebuild a basis from its table; grids are recomputed deterministically
/// from the header, values are taken verbatim from the rows.
pub fn basis_from_table(table: &Table) -> Result<SpectralBasis> {
    let header: BasisHeader = table.header_as()?;
    if header.kind != "spectral_basis" {
        return Err(Error::Config { field: "kind".into(), message: header.kind });
    }
    let quad = crate::quadrature::RhoQuadrature::new(header.spec.geometry, header.quad)?;
    if quad.len() != header.n_rho {
        return Err(Error::GridMismatch("basis table: rho grid size".into()));
    }
    let mut point = PointSpectrum {
        eigenvalues: vec![0.0; header.n_point],
        residuals: vec![0.0; header.n_point],
        eigenfunctions: vec![vec![0.0; header.n_rho]; header.n_point],
        boundary_values: vec![0.0; header.n_point],
    };
    let mut continuous = ContinuousBasis {
        m_nodes: vec![0.0; header.n_continuous],
        m_weights: vec![0.0; header.n_continuous],
        functions: (0..header.n_continuous)
            .map(|_| GeneralizedEigenfunction {
                m: 0.0,
                w: vec![0.0; header.n_rho],
                w_at_brane: 0.0,
                w_prime_at_brane: 0.0,
                imag_defect: 0.0,
            })
            .collect(),
    };
    for row in &table.rows {
        let [tag, outer, inner, value] = row[..] else {
            return Err(Error::Config { field: "row".into(), message: "need 4 columns".into() });
        };
        let (j, i) = (outer as usize, inner as usize);
        if tag == TAG_EIGENVALUE {
            match i {
                0 => point.eigenvalues[j] = value,
                1 => point.residuals[j] = value,
                _ => point.boundary_values[j] = value,
            }
        } else if tag == TAG_EIGENFUNCTION {
            point.eigenfunctions[j][i] = value;
        } else if tag == TAG_M_NODE {
            match i {
                0 => {
                    continuous.m_nodes[j] = value;
                    continuous.functions[j].m = value;
                }
                1 => continuous.m_weights[j] = value,
                2 => continuous.functions[j].w_at_brane = value,
                3 => continuous.functions[j].w_prime_at_brane = value,
                _ => continuous.functions[j].imag_defect = value,
            }
        } else if tag == TAG_CONTINUOUS {
            continuous.functions[j].w[i] = value;
        } else {
            return Err(Error::Config { field: "tag".into(), message: format!("{tag}") });
        }
    }
    Ok(SpectralBasis { spec: header.spec, quad, point, continuous, m_max: header.m_max })
}
