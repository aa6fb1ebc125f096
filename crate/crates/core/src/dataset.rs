use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::vertex_set::VertexSet;

/// A categorical table: `n` columns, `N` rows, each cell a dense code into its
/// column's dictionary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    names: Vec<String>,
    columns: Vec<Vec<u32>>,
    dictionaries: Vec<Vec<String>>,
    rows: usize,
}

impl Dataset {
    /// Builds a dataset from string cells. Dictionaries are assigned in
    /// first-occurrence order; the empty string is an ordinary category.
    pub fn from_string_rows<R, S>(names: Vec<String>, rows: R) -> Result<Self>
    where
        R: IntoIterator,
        R::Item: AsRef<[S]>,
        S: AsRef<str>,
    {
        let mut seen = HashSet::new();
        for name in &names {
            if !seen.insert(name.as_str()) {
                return Err(Error::DuplicateColumn(name.clone()));
            }
        }
        let n = names.len();
        let mut lookup: Vec<HashMap<String, u32>> = vec![HashMap::new(); n];
        let mut dictionaries: Vec<Vec<String>> = vec![Vec::new(); n];
        let mut columns: Vec<Vec<u32>> = vec![Vec::new(); n];
        let mut count = 0;
        for (row, record) in rows.into_iter().enumerate() {
            let record = record.as_ref();
            if record.len() != n {
                return Err(Error::RaggedRow {
                    row,
                    expected: n,
                    found: record.len(),
                });
            }
            for (j, cell) in record.iter().enumerate() {
                let cell = cell.as_ref();
                let code = match lookup[j].get(cell) {
                    Some(&c) => c,
                    None => {
                        let c = dictionaries[j].len() as u32;
                        dictionaries[j].push(cell.to_owned());
                        lookup[j].insert(cell.to_owned(), c);
                        c
                    }
                };
                columns[j].push(code);
            }
            count += 1;
        }
        Ok(Self {
            names,
            columns,
            dictionaries,
            rows: count,
        })
    }

    /// Builds a dataset directly from codes. Column `j`'s dictionary becomes
    /// `"0", "1", ...` up to its largest code.
    pub fn from_codes(names: Vec<String>, columns: Vec<Vec<u32>>) -> Result<Self> {
        let rows = columns.first().map_or(0, Vec::len);
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::RaggedRow {
                    row: j,
                    expected: rows,
                    found: col.len(),
                });
            }
        }
        if names.len() != columns.len() {
            return Err(Error::ColumnMismatch {
                data: columns.len(),
                graph: names.len(),
            });
        }
        let dictionaries = columns
            .iter()
            .map(|col| {
                let size = col.iter().max().map_or(0, |&m| m + 1);
                (0..size).map(|c| c.to_string()).collect()
            })
            .collect();
        Ok(Self {
            names,
            columns,
            dictionaries,
            rows,
        })
    }

    /// Like [`Dataset::from_codes`] with columns named `x0, x1, ...`.
    pub fn from_unnamed_codes(columns: Vec<Vec<u32>>) -> Result<Self> {
        let names = (0..columns.len()).map(|j| format!("x{j}")).collect();
        Self::from_codes(names, columns)
    }

    pub fn n_columns(&self) -> usize {
        self.columns.len()
    }

    pub fn n_rows(&self) -> usize {
        self.rows
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn column(&self, j: usize) -> &[u32] {
        &self.columns[j]
    }

    pub fn domain_size(&self, j: usize) -> usize {
        self.dictionaries[j].len()
    }

    pub fn dictionary(&self, j: usize) -> &[String] {
        &self.dictionaries[j]
    }

    /// Cell counts of the projection onto `s`, in first-occurrence order of
    /// the projected rows.
    pub fn projection_counts(&self, s: &VertexSet) -> Vec<u32> {
        if self.rows == 0 {
            return Vec::new();
        }
        let mut members = s.iter();
        let Some(first) = members.next() else {
            return vec![self.rows as u32];
        };
        // Re-code row keys densely after each column so keys stay below N * |D|.
        let mut keys: Vec<u32> = self.columns[first].clone();
        let mut groups = self.domain_size(first) as u64;
        for j in members {
            let dom = self.domain_size(j) as u64;
            let mut dense: HashMap<u64, u32> = HashMap::new();
            for (key, &code) in keys.iter_mut().zip(&self.columns[j]) {
                let combined = u64::from(*key) * dom + u64::from(code);
                let next = dense.len() as u32;
                *key = *dense.entry(combined).or_insert(next);
            }
            groups = dense.len() as u64;
        }
        let mut order: HashMap<u32, usize> = HashMap::with_capacity(groups as usize);
        let mut counts = Vec::new();
        for &key in &keys {
            let next = counts.len();
            let slot = *order.entry(key).or_insert(next);
            if slot == counts.len() {
                counts.push(0);
            }
            counts[slot] += 1;
        }
        counts
    }
}
