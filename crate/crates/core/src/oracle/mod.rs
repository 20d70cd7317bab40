//! Classifier oracles: anything that answers "probability that `t = β` given
//! these attributions".

mod command;
mod csv_freq;
mod db;

use thiserror::Error;

use crate::model::{DataPoint, ModelError, Probability, ValueTerm, VariableId};

pub use command::{decode_response, encode_request, CommandOracle, DEFAULT_TIMEOUT};
pub use csv_freq::{csv_frequency_query, csv_frequency_query_with, CsvOracle, Table};
pub use db::{judgment_db_query, JudgmentDb};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleQuery {
    attributions: DataPoint,
    target: VariableId,
    target_value: ValueTerm,
}

impl OracleQuery {
    pub fn new(
        attributions: DataPoint,
        target: VariableId,
        target_value: ValueTerm,
    ) -> Result<Self, ModelError> {
        if attributions.get(&target).is_some() {
            return Err(ModelError::TargetInContext(target));
        }
        Ok(OracleQuery { attributions, target, target_value })
    }

    pub fn attributions(&self) -> &DataPoint {
        &self.attributions
    }

    pub fn target(&self) -> &VariableId {
        &self.target
    }

    pub fn target_value(&self) -> &ValueTerm {
        &self.target_value
    }
}

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("unknown column `{0}`")]
    UnknownColumn(String),
    #[error("undefined probability: no row matches the attributions")]
    UndefinedProbability,
    #[error("no judgment in the database matches the query")]
    NoMatch,
    #[error("conflicting judgments in the database: {0}")]
    Conflict(String),
    #[error("failed to load oracle data: {0}")]
    Load(String),
    #[error("classifier command failed: {0}")]
    Command(String),
    #[error("classifier command timed out after {0} ms")]
    Timeout(u128),
    #[error("malformed classifier response: {0}")]
    Malformed(String),
    #[error("classifier probability out of range: {0}")]
    Range(String),
}

/// A classifier seen only through its answers. Answers must be deterministic
/// within a session.
pub trait ClassifierOracle: Send + Sync {
    fn query(&self, q: &OracleQuery) -> Result<Probability, OracleError>;
}

impl<T: ClassifierOracle + ?Sized> ClassifierOracle for Box<T> {
    fn query(&self, q: &OracleQuery) -> Result<Probability, OracleError> {
        (**self).query(q)
    }
}

impl<T: ClassifierOracle + ?Sized> ClassifierOracle for &T {
    fn query(&self, q: &OracleQuery) -> Result<Probability, OracleError> {
        (**self).query(q)
    }
}
