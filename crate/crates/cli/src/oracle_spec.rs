use std::time::Duration;

use cfproof::oracle::{ClassifierOracle, CommandOracle, CsvOracle, JudgmentDb, DEFAULT_TIMEOUT};

pub const TIMEOUT_VAR: &str = "CF_ORACLE_TIMEOUT_MS";

/// `csv:PATH`, `db:PATH` or `cmd:PROGRAM ARGS`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleSpec {
    Csv(String),
    Db(String),
    Cmd(String),
}

impl std::str::FromStr for OracleSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (kind, rest) = s
            .split_once(':')
            .ok_or_else(|| format!("oracle `{s}` must look like csv:PATH, db:PATH or cmd:PROGRAM"))?;
        if rest.trim().is_empty() {
            return Err(format!("oracle `{s}` has nothing after `{kind}:`"));
        }
        match kind {
            "csv" => Ok(OracleSpec::Csv(rest.to_string())),
            "db" => Ok(OracleSpec::Db(rest.to_string())),
            "cmd" => Ok(OracleSpec::Cmd(rest.to_string())),
            other => Err(format!("unknown oracle kind `{other}` (expected csv, db or cmd)")),
        }
    }
}

fn timeout_from_env() -> Result<Duration, String> {
    match std::env::var(TIMEOUT_VAR) {
        Ok(ms) => ms
            .trim()
            .parse::<u64>()
            .map(Duration::from_millis)
            .map_err(|_| format!("{TIMEOUT_VAR}=`{ms}` is not a number of milliseconds")),
        Err(_) => Ok(DEFAULT_TIMEOUT),
    }
}

/// Loads the backend. Failures here are configuration errors.
pub fn load(spec: &OracleSpec) -> Result<Box<dyn ClassifierOracle>, String> {
    Ok(match spec {
        OracleSpec::Csv(path) => Box::new(CsvOracle::from_path(path).map_err(|e| e.to_string())?),
        OracleSpec::Db(path) => Box::new(JudgmentDb::from_path(path).map_err(|e| e.to_string())?),
        OracleSpec::Cmd(cmd) => Box::new(CommandOracle::new(cmd.clone()).with_timeout(timeout_from_env()?)),
    })
}
