//! JSON transition-table files.
//!
//! ```json
//! {"states": ["a", "b"], "initial": ["a"], "P": 2,
//!  "clock": {"a": 0, "b": 1}, "message": {"a": "x", "b": "y"},
//!  "mode": "set",
//!  "delta": [{"state": "a", "recv": {"x": 1}, "next": "b"}]}
//! ```
//!
//! `mode` is `"set"` or `{"saturating": k}`. A `recv` count is an integer
//! or the string `"≥k"` (also `">=k"`), which must name the cap.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;
use syncsmith_core::zoo::{Abstraction, TableAlgorithm, TableRow, TableSpec};

use crate::error::{CliError, CliResult};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FsmFile {
    #[serde(default)]
    pub name: Option<String>,
    pub states: Vec<String>,
    pub initial: Vec<String>,
    #[serde(rename = "P")]
    pub period: u64,
    pub clock: BTreeMap<String, u64>,
    pub message: BTreeMap<String, String>,
    pub mode: Mode,
    pub delta: Vec<Row>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum Mode {
    Named(String),
    Saturating { saturating: u32 },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Row {
    pub state: String,
    pub recv: BTreeMap<String, Count>,
    pub next: String,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum Count {
    Exact(u32),
    AtLeast(String),
}

impl Count {
    fn resolve(&self, cap: u32) -> Result<u32, String> {
        match self {
            Count::Exact(c) => Ok(*c),
            Count::AtLeast(s) => {
                let digits = s
                    .strip_prefix('≥')
                    .or_else(|| s.strip_prefix(">="))
                    .ok_or_else(|| format!("count {s:?} is neither an integer nor \"≥k\""))?;
                let k: u32 = digits
                    .trim()
                    .parse()
                    .map_err(|_| format!("bad count {s:?}"))?;
                if k != cap {
                    return Err(format!(
                        "count {s:?} does not match the saturation cap {cap}"
                    ));
                }
                Ok(k)
            }
        }
    }
}

impl FsmFile {
    pub fn parse(text: &str, context: &str) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|e| CliError::format(context, e))
    }

    pub fn into_spec(self, default_name: &str) -> CliResult<TableSpec> {
        let ctx = |m: String| CliError::format(default_name, m);
        let mode = match self.mode {
            Mode::Named(s) if s == "set" => Abstraction::Set,
            Mode::Named(s) => return Err(ctx(format!("unknown mode {s:?}"))),
            Mode::Saturating { saturating } => Abstraction::Saturating(saturating),
        };
        let cap = match mode {
            Abstraction::Set => 1,
            Abstraction::Saturating(k) => k,
        };
        let mut rows = Vec::with_capacity(self.delta.len());
        for row in self.delta {
            let mut received = BTreeMap::new();
            for (msg, count) in row.recv {
                let c = count.resolve(cap).map_err(ctx)?;
                if c > 0 {
                    received.insert(msg, c);
                }
            }
            rows.push(TableRow {
                state: row.state,
                received,
                next: row.next,
            });
        }
        Ok(TableSpec {
            name: self.name.unwrap_or_else(|| default_name.to_string()),
            states: self.states,
            initial: self.initial,
            period: self.period,
            clock: self.clock,
            message: self.message,
            mode,
            rows,
        })
    }
}

/// Parses and validates a transition-table document.
pub fn load_fsm_str(text: &str, name: &str) -> CliResult<TableAlgorithm> {
    let spec = FsmFile::parse(text, name)?.into_spec(name)?;
    Ok(TableAlgorithm::new(spec)?)
}

pub fn load_fsm(path: &Path) -> CliResult<TableAlgorithm> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "fsm".into());
    load_fsm_str(&text, &name)
}
