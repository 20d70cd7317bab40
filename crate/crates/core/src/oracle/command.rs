use std::io::{Read, Write};
use std::process::{Command, Stdio};
use std::sync::Mutex;
use std::thread;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use wait_timeout::ChildExt;

use super::{ClassifierOracle, OracleError, OracleQuery};
use crate::model::Probability;

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(10);

#[derive(Serialize)]
struct WireAttribution<'a> {
    var: &'a str,
    value: String,
}

#[derive(Serialize)]
struct WireRequest<'a> {
    attributions: Vec<WireAttribution<'a>>,
    target: &'a str,
    value: String,
}

#[derive(Deserialize)]
struct WireResponse {
    probability: String,
}

/// Encodes a query as one request line (no trailing newline).
pub fn encode_request(q: &OracleQuery) -> String {
    let req = WireRequest {
        attributions: q
            .attributions()
            .attributions()
            .iter()
            .map(|a| WireAttribution { var: a.var.as_str(), value: a.value.to_string() })
            .collect(),
        target: q.target().as_str(),
        value: q.target_value().to_string(),
    };
    serde_json::to_string(&req).expect("request serializes")
}

/// Decodes the first non-empty response line.
pub fn decode_response(out: &str) -> Result<Probability, OracleError> {
    let line = out
        .lines()
        .find(|l| !l.trim().is_empty())
        .ok_or_else(|| OracleError::Malformed("empty response".into()))?;
    let resp: WireResponse =
        serde_json::from_str(line.trim()).map_err(|e| OracleError::Malformed(format!("{e}: {line}")))?;
    Probability::parse(&resp.probability).map_err(|e| match e {
        crate::model::ModelError::ProbabilityRange(_) => OracleError::Range(resp.probability.clone()),
        other => OracleError::Malformed(other.to_string()),
    })
}

/// Runs a shell command per query, writing one JSON request line to its
/// stdin and reading one JSON response line from its stdout. One query is in
/// flight at a time.
#[derive(Debug)]
pub struct CommandOracle {
    command: String,
    timeout: Duration,
    lock: Mutex<()>,
}

impl CommandOracle {
    pub fn new(command: impl Into<String>) -> Self {
        CommandOracle { command: command.into(), timeout: DEFAULT_TIMEOUT, lock: Mutex::new(()) }
    }

    pub fn with_timeout(mut self, timeout: Duration) -> Self {
        self.timeout = timeout;
        self
    }

    pub fn command(&self) -> &str {
        &self.command
    }

    fn run(&self, request: &str) -> Result<String, OracleError> {
        let failed = |e: std::io::Error| OracleError::Command(format!("`{}`: {e}", self.command));
        let mut child = Command::new("sh")
            .arg("-c")
            .arg(&self.command)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::piped())
            .spawn()
            .map_err(failed)?;

        let mut stdin = child.stdin.take().expect("piped stdin");
        let line = format!("{request}\n");
        // the child may exit without reading; a broken pipe is not our error
        let writer = thread::spawn(move || {
            let _ = stdin.write_all(line.as_bytes());
        });
        let mut stdout = child.stdout.take().expect("piped stdout");
        let reader = thread::spawn(move || {
            let mut s = String::new();
            let _ = stdout.read_to_string(&mut s);
            s
        });
        let mut stderr = child.stderr.take().expect("piped stderr");
        let err_reader = thread::spawn(move || {
            let mut s = String::new();
            let _ = stderr.read_to_string(&mut s);
            s
        });

        let status = match child.wait_timeout(self.timeout).map_err(failed)? {
            Some(status) => status,
            None => {
                let _ = child.kill();
                let _ = child.wait();
                return Err(OracleError::Timeout(self.timeout.as_millis()));
            }
        };
        let _ = writer.join();
        let out = reader.join().unwrap_or_default();
        let err = err_reader.join().unwrap_or_default();
        if !status.success() {
            return Err(OracleError::Command(format!(
                "`{}` exited with {status}: {}",
                self.command,
                err.trim()
            )));
        }
        Ok(out)
    }
}

impl ClassifierOracle for CommandOracle {
    fn query(&self, q: &OracleQuery) -> Result<Probability, OracleError> {
        let _guard = self.lock.lock().unwrap_or_else(|e| e.into_inner());
        let out = self.run(&encode_request(q))?;
        decode_response(&out)
    }
}
