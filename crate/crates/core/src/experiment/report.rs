use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::run::RunSummary;
use super::sweep::{format_cell, SweepManifest};
use crate::error::{usage, Error, Result};

/// A merged results table: one row per axis value (or run), one column per
/// `<dataset>:<model>`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ResultsTable {
    pub row_header: String,
    pub columns: Vec<String>,
    pub rows: Vec<(String, Vec<String>)>,
}

impl ResultsTable {
    fn set(&mut self, row: &str, column: &str, value: String) {
        let c = match self.columns.iter().position(|x| x == column) {
            Some(c) => c,
            None => {
                self.columns.push(column.to_string());
                for (_, cells) in &mut self.rows {
                    cells.push(String::new());
                }
                self.columns.len() - 1
            }
        };
        let r = match self.rows.iter().position(|(k, _)| k == row) {
            Some(r) => r,
            None => {
                self.rows.push((row.to_string(), vec![String::new(); self.columns.len()]));
                self.rows.len() - 1
            }
        };
        self.rows[r].1[c] = value;
    }

    pub fn render(&self) -> String {
        let mut widths = vec![self.row_header.len()];
        widths.extend(self.columns.iter().map(String::len));
        for (k, cells) in &self.rows {
            widths[0] = widths[0].max(k.len());
            for (i, c) in cells.iter().enumerate() {
                widths[i + 1] = widths[i + 1].max(c.len());
            }
        }
        let mut s = String::new();
        let line = |s: &mut String, cells: Vec<&str>| {
            let parts: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
            let _ = writeln!(s, "{}", parts.join("  "));
        };
        let mut header = vec![self.row_header.as_str()];
        header.extend(self.columns.iter().map(String::as_str));
        line(&mut s, header);
        for (k, cells) in &self.rows {
            let mut row = vec![k.as_str()];
            row.extend(cells.iter().map(String::as_str));
            line(&mut s, row);
        }
        s
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        let mut header = vec![self.row_header.clone()];
        header.extend(self.columns.iter().cloned());
        w.write_record(&header)?;
        for (k, cells) in &self.rows {
            let mut row = vec![k.clone()];
            row.extend(cells.iter().cloned());
            w.write_record(&row)?;
        }
        w.flush().map_err(|e| Error::io(path, e))
    }
}

/// Merges sweep directories (holding `sweep.json`) and run directories
/// (holding `summary.json`) into one table. Sweeps must share an axis.
pub fn collect_results(paths: &[PathBuf]) -> Result<ResultsTable> {
    if paths.is_empty() {
        return Err(usage!("report needs at least one sweep or run directory"));
    }
    let mut table = ResultsTable::default();
    for p in paths {
        let sweep = p.join("sweep.json");
        let summary = p.join("summary.json");
        if sweep.is_file() {
            let text = std::fs::read_to_string(&sweep).map_err(|e| Error::io(&sweep, e))?;
            let m: SweepManifest = serde_json::from_str(&text)?;
            let axis = m.axis.to_string();
            if table.row_header.is_empty() {
                table.row_header = axis;
            } else if table.row_header != axis {
                return Err(usage!("cannot merge a {axis} sweep into a {} table", table.row_header));
            }
            let columns = m.columns();
            for &v in &m.values {
                for (&model, column) in m.models.iter().zip(&columns) {
                    table.set(&v.to_string(), column, format_cell(m.cell(v, model)));
                }
            }
        } else if summary.is_file() {
            let text = std::fs::read_to_string(&summary).map_err(|e| Error::io(&summary, e))?;
            let s: RunSummary = serde_json::from_str(&text)?;
            if table.row_header.is_empty() {
                table.row_header = "run".into();
            }
            let column = format!("{}:{}", s.dataset_label, s.model.name());
            table.set(&format!("run-{}", &s.config_hash[..12]), &column, format!("{:.4}", s.mean_val_accuracy));
        } else {
            return Err(usage!("{} holds neither sweep.json nor summary.json", p.display()));
        }
    }
    Ok(table)
}
