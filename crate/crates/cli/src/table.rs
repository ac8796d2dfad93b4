//! CSV export and re-import of trajectories.
//!
//! Values are written with `{:e}`, the shortest scientific representation that parses back to
//! the same `f64`, so a round trip is bit-exact.

use std::io::{Read, Write};
use std::path::Path;

use crate::error::CliError;
use crate::trajectory::{Row, Trajectory, CSV_HEADER};

pub fn write_rows<W: Write>(rows: &[Row], out: W) -> csv::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(CSV_HEADER)?;
    for row in rows {
        w.write_record(row.values().iter().map(|v| format!("{v:e}")))?;
    }
    w.flush()?;
    Ok(())
}

pub fn export_csv(traj: &Trajectory, path: &Path) -> Result<(), CliError> {
    let file = std::fs::File::create(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    write_rows(&traj.rows(), std::io::BufWriter::new(file)).map_err(|source| CliError::Csv {
        path: path.to_path_buf(),
        source,
    })
}

#[derive(Debug, thiserror::Error)]
pub enum ReadError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("header does not match the trajectory layout")]
    Header,
    #[error("row {row}, column {column}: `{value}` is not a number")]
    Value {
        row: usize,
        column: &'static str,
        value: String,
    },
    #[error("row {row} has {found} fields")]
    Width { row: usize, found: usize },
}

pub fn read_rows<R: Read>(input: R) -> Result<Vec<Row>, ReadError> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    if r.headers()?.iter().ne(CSV_HEADER) {
        return Err(ReadError::Header);
    }
    let mut rows = Vec::new();
    for (i, record) in r.records().enumerate() {
        let record = record?;
        if record.len() != CSV_HEADER.len() {
            return Err(ReadError::Width {
                row: i,
                found: record.len(),
            });
        }
        let mut values = [0.0; 10];
        for (k, field) in record.iter().enumerate() {
            values[k] = field.parse().map_err(|_| ReadError::Value {
                row: i,
                column: CSV_HEADER[k],
                value: field.to_string(),
            })?;
        }
        rows.push(Row::from_values(values));
    }
    Ok(rows)
}
