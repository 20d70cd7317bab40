use std::io::Read;
use std::path::Path;

use super::{ClassifierOracle, OracleError, OracleQuery};
use crate::model::{Probability, ValueTerm};
use crate::par::{self, Exec};

/// A table of raw string cells with named columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    columns: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    /// Rejects duplicate column names, ragged rows and empty cells.
    pub fn new(columns: Vec<String>, rows: Vec<Vec<String>>) -> Result<Self, OracleError> {
        for (i, c) in columns.iter().enumerate() {
            if columns[..i].contains(c) {
                return Err(OracleError::Load(format!("duplicate column `{c}`")));
            }
        }
        for (r, row) in rows.iter().enumerate() {
            if row.len() != columns.len() {
                return Err(OracleError::Load(format!(
                    "row {} has {} cells, expected {}",
                    r + 1,
                    row.len(),
                    columns.len()
                )));
            }
            if let Some(c) = row.iter().position(|cell| cell.is_empty()) {
                return Err(OracleError::Load(format!("row {} has an empty `{}` cell", r + 1, columns[c])));
            }
        }
        Ok(Table { columns, rows })
    }

    pub fn from_reader(reader: impl Read) -> Result<Self, OracleError> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
        let load = |e: csv::Error| OracleError::Load(e.to_string());
        let columns = rdr.headers().map_err(load)?.iter().map(|h| h.trim().to_string()).collect();
        let rows = rdr
            .records()
            .map(|r| r.map(|rec| rec.iter().map(|c| c.trim().to_string()).collect()))
            .collect::<Result<_, _>>()
            .map_err(load)?;
        Table::new(columns, rows)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self, OracleError> {
        let file = std::fs::File::open(path.as_ref())
            .map_err(|e| OracleError::Load(format!("{}: {e}", path.as_ref().display())))?;
        Table::from_reader(file)
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<String>] {
        &self.rows
    }

    fn column(&self, name: &str) -> Result<usize, OracleError> {
        self.columns
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| OracleError::UnknownColumn(name.to_string()))
    }
}

/// Empirical `P(target | attributions)`: matching target rows over rows
/// matching every attribution.
pub fn csv_frequency_query(table: &Table, q: &OracleQuery) -> Result<Probability, OracleError> {
    csv_frequency_query_with(table, q, Exec::default())
}

pub fn csv_frequency_query_with(
    table: &Table,
    q: &OracleQuery,
    exec: Exec,
) -> Result<Probability, OracleError> {
    let filters: Vec<(usize, &ValueTerm)> = q
        .attributions()
        .attributions()
        .iter()
        .map(|a| Ok((table.column(a.var.as_str())?, &a.value)))
        .collect::<Result<_, OracleError>>()?;
    let target = table.column(q.target().as_str())?;
    let target_value = q.target_value();

    let (num, den) = par::sum_by(exec, &table.rows, |row| {
        if filters.iter().all(|(c, t)| t.matches(&row[*c])) {
            (target_value.matches(&row[target]) as u64, 1)
        } else {
            (0, 0)
        }
    });
    if den == 0 {
        return Err(OracleError::UndefinedProbability);
    }
    Probability::from_ratio(num, den).map_err(|e| OracleError::Range(e.to_string()))
}

/// Frequency oracle over a loaded table.
#[derive(Debug, Clone)]
pub struct CsvOracle {
    table: Table,
    exec: Exec,
}

impl CsvOracle {
    pub fn new(table: Table) -> Self {
        CsvOracle { table, exec: Exec::default() }
    }

    pub fn with_exec(mut self, exec: Exec) -> Self {
        self.exec = exec;
        self
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self, OracleError> {
        Table::from_path(path).map(CsvOracle::new)
    }

    pub fn table(&self) -> &Table {
        &self.table
    }
}

impl ClassifierOracle for CsvOracle {
    fn query(&self, q: &OracleQuery) -> Result<Probability, OracleError> {
        csv_frequency_query_with(&self.table, q, self.exec)
    }
}
