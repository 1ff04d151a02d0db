use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};

use polariton_core::liouvillian::SectorIndexing;
use polariton_core::SystemParams;
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::CliError;

/// Column-oriented table written as CSV with a single header row.
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(header: Vec<String>) -> Self {
        Table {
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        let mut w = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
        w.write_record(&self.header).map_err(|e| csv_error(path, e))?;
        for row in &self.rows {
            // Display gives the shortest string that parses back to the same f64
            w.write_record(row.iter().map(|v| v.to_string()))
                .map_err(|e| csv_error(path, e))?;
        }
        w.flush().map_err(|e| CliError::io(path, e))
    }
}

fn csv_error(path: &Path, e: csv::Error) -> CliError {
    CliError::io(path, std::io::Error::other(e))
}

#[derive(Serialize)]
pub struct Software {
    pub name: &'static str,
    pub version: &'static str,
}

pub const SOFTWARE: Software = Software {
    name: env!("CARGO_PKG_NAME"),
    version: env!("CARGO_PKG_VERSION"),
};

#[derive(Serialize)]
pub struct Derived {
    /// Thermal solvent occupation per molecule.
    pub thermal_occupation: Vec<f64>,
    /// sqrt(Σ g_i²) in cm⁻¹.
    pub collective_coupling: f64,
    pub liouvillian_dim: usize,
    pub solvent_configurations: usize,
    /// Photon loss rate ω_c/Q in cm⁻¹.
    pub photon_loss: f64,
}

impl Derived {
    pub fn new(p: &SystemParams) -> Self {
        let ix = SectorIndexing::new(p.n());
        Derived {
            thermal_occupation: (0..p.n()).map(|i| p.thermal_occupation(i)).collect(),
            collective_coupling: p.collective_coupling(),
            liouvillian_dim: ix.excited_dim(),
            solvent_configurations: ix.configs(),
            photon_loss: p.cavity().loss_rate(),
        }
    }
}

#[derive(Serialize)]
pub struct Sidecar<'a> {
    pub software: Software,
    pub config: &'a RunConfig,
    pub derived: Derived,
    pub outputs: Vec<String>,
    pub results: serde_json::Value,
    pub threads: usize,
    /// Seconds.
    pub wall_time: f64,
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut f = File::create(path).map_err(|e| CliError::io(path, e))?;
    serde_json::to_writer_pretty(&mut f, value)
        .map_err(|e| CliError::io(path, std::io::Error::other(e)))?;
    f.write_all(b"\n").map_err(|e| CliError::io(path, e))
}

pub fn ensure_dir(dir: &Path) -> Result<PathBuf, CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    Ok(dir.to_path_buf())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip_through_csv() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        let mut t = Table::new(vec!["a".into(), "b".into()]);
        let v = [0.1 + 0.2, -1.0e-300];
        t.push(v.to_vec());
        t.write(&path).unwrap();
        let mut r = csv::Reader::from_path(&path).unwrap();
        let row = r.records().next().unwrap().unwrap();
        for (k, x) in v.iter().enumerate() {
            assert_eq!(row[k].parse::<f64>().unwrap().to_bits(), x.to_bits());
        }
    }
}
