use std::fs::File;
use std::io::Read;
use std::path::Path;

use decomposable::dataset::Dataset;

use crate::error::{CliError, Result};

/// Reads a comma-separated file whose first row names the columns.
pub fn ingest(path: &Path) -> Result<Dataset> {
    let file = File::open(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })?;
    ingest_reader(file)
}

pub fn ingest_reader<R: Read>(reader: R) -> Result<Dataset> {
    let mut csv = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(reader);
    let names: Vec<String> = csv.headers()?.iter().map(str::to_owned).collect();
    if names.is_empty() {
        return Err(CliError::EmptyFile);
    }
    let mut rows = Vec::new();
    for record in csv.records() {
        let record = record?;
        if record.len() != names.len() {
            return Err(CliError::RaggedRow {
                line: record.position().map_or(0, |p| p.line()),
                expected: names.len(),
                found: record.len(),
            });
        }
        rows.push(record.iter().map(str::to_owned).collect::<Vec<_>>());
    }
    if rows.is_empty() {
        return Err(CliError::EmptyFile);
    }
    Dataset::from_string_rows(names, rows).map_err(|e| match e {
        decomposable::Error::DuplicateColumn(name) => CliError::DuplicateColumn(name),
        other => CliError::Engine(other),
    })
}
