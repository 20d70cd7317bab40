use std::path::Path;

use super::{ClassifierOracle, OracleError, OracleQuery};
use crate::dsl::parse_judgment_db;
use crate::model::{Judgment, Probability};

/// Classifier decisions recorded as judgments over attribution-only contexts.
#[derive(Debug, Clone, Default)]
pub struct JudgmentDb {
    judgments: Vec<Judgment>,
}

impl JudgmentDb {
    pub fn new(judgments: Vec<Judgment>) -> Result<Self, OracleError> {
        for j in &judgments {
            if j.context().intervention().is_some() || !j.context().edges().is_empty() {
                return Err(OracleError::Load(format!("judgment `{j}` has a non-attribution context")));
            }
        }
        Ok(JudgmentDb { judgments })
    }

    pub fn parse(text: &str) -> Result<Self, OracleError> {
        let js = parse_judgment_db(text).map_err(|e| OracleError::Load(e.to_string()))?;
        JudgmentDb::new(js)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self, OracleError> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| OracleError::Load(format!("{}: {e}", path.as_ref().display())))?;
        JudgmentDb::parse(&text)
    }

    pub fn judgments(&self) -> &[Judgment] {
        &self.judgments
    }
}

/// Looks up the judgment whose context equals the query's attributions as a
/// set and whose conclusion is the queried target value.
pub fn judgment_db_query(db: &[Judgment], q: &OracleQuery) -> Result<Probability, OracleError> {
    let wanted = q.attributions().attributions();
    let mut found: Vec<&Probability> = db
        .iter()
        .filter(|j| j.target() == q.target() && j.value() == q.target_value())
        .filter(|j| {
            let have = j.context().attributions();
            have.len() == wanted.len() && wanted.iter().all(|a| have.contains(a))
        })
        .map(|j| j.prob())
        .collect();
    found.sort();
    found.dedup();
    match found.as_slice() {
        [] => Err(OracleError::NoMatch),
        [p] => Ok((*p).clone()),
        many => Err(OracleError::Conflict(
            many.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" vs "),
        )),
    }
}

impl ClassifierOracle for JudgmentDb {
    fn query(&self, q: &OracleQuery) -> Result<Probability, OracleError> {
        judgment_db_query(&self.judgments, q)
    }
}
