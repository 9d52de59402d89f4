//! Graph arguments: shorthand specs or JSON files of the form
//! `{"n": 3, "prefix": [[[0, 0], [0, 1]], ...], "period": [...], "starts": [1, 1, 1]}`.
//!
//! Shorthands: `ring:directed:L`, `ring:bidir:m`, `thm4:L` (the two-group
//! schedule on `2L` nodes).

use std::path::Path;

use serde::{Deserialize, Serialize};
use syncsmith_core::graph::{
    build_bidirectional_ring, build_directed_ring, build_two_group_schedule, ActivationSchedule,
    DirectedGraph, DynamicGraph,
};

use crate::error::{CliError, CliResult};

type Round = Vec<[usize; 2]>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub n: usize,
    pub prefix: Vec<Round>,
    pub period: Vec<Round>,
    pub starts: Vec<usize>,
}

impl GraphFile {
    pub fn from_graph(g: &DynamicGraph) -> Self {
        let rounds = |rs: &[DirectedGraph]| -> Vec<Round> {
            rs.iter()
                .map(|r| r.arcs().map(|(i, j)| [i, j]).collect())
                .collect()
        };
        Self {
            n: g.n(),
            prefix: rounds(g.prefix()),
            period: rounds(g.period()),
            starts: g.schedule().starts().to_vec(),
        }
    }

    pub fn to_graph(&self) -> CliResult<DynamicGraph> {
        let rounds = |rs: &[Round]| -> CliResult<Vec<DirectedGraph>> {
            rs.iter()
                .map(|r| {
                    Ok(DirectedGraph::from_arcs(
                        self.n,
                        r.iter().map(|&[i, j]| (i, j)),
                    )?)
                })
                .collect()
        };
        let schedule = ActivationSchedule::new(self.starts.clone())?;
        Ok(DynamicGraph::new(
            self.n,
            rounds(&self.prefix)?,
            rounds(&self.period)?,
            schedule,
        )?)
    }
}

fn size_arg(spec: &str, text: &str) -> CliResult<usize> {
    text.parse()
        .map_err(|_| CliError::usage(format!("graph spec {spec:?}: {text:?} is not a size")))
}

/// Parses a shorthand, or returns `None` when `spec` is not one.
pub fn parse_shorthand(spec: &str) -> Option<CliResult<DynamicGraph>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let built = match parts.as_slice() {
        ["ring", "directed", l] => size_arg(spec, l).and_then(|l| Ok(build_directed_ring(l)?)),
        ["ring", "bidir", m] => size_arg(spec, m).and_then(|m| Ok(build_bidirectional_ring(m)?)),
        ["thm4", l] => size_arg(spec, l).and_then(|l| Ok(build_two_group_schedule(l)?)),
        ["ring", ..] | ["thm4", ..] => Err(CliError::usage(format!(
            "unknown graph spec {spec:?}; expected ring:directed:L, ring:bidir:m or thm4:L"
        ))),
        _ => return None,
    };
    Some(built)
}

pub fn load_graph_file(path: &Path) -> CliResult<DynamicGraph> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let file: GraphFile =
        serde_json::from_str(&text).map_err(|e| CliError::format(path.display().to_string(), e))?;
    file.to_graph()
}

/// Resolves a shorthand spec or a path to a graph file.
pub fn resolve_graph(spec: &str) -> CliResult<DynamicGraph> {
    match parse_shorthand(spec) {
        Some(g) => g,
        None => load_graph_file(Path::new(spec)),
    }
}
