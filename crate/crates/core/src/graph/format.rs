//! JSON graph and fault-domain files.
//!
//! Graph: `{"n":4,"source":0,"edges":[[0,1],[1,2],[2,3],[3,0]]}` with edges
//! sorted lexicographically in canonical output. Fault domain:
//! `{"sets":[[1],[2,3]]}`.

use serde::{Deserialize, Serialize};

use super::{Digraph, FaultDomain, GraphError, NodeId, NodeSet};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub n: usize,
    pub source: usize,
    pub edges: Vec<[usize; 2]>,
}

impl GraphFile {
    pub fn from_graph(g: &Digraph) -> Self {
        GraphFile {
            n: g.n(),
            source: g.source().0,
            edges: g.edges().into_iter().map(|(a, b)| [a.0, b.0]).collect(),
        }
    }

    pub fn into_graph(self) -> Result<Digraph, GraphError> {
        let field = |name: &str, e: GraphError| GraphError::Parse {
            location: format!("field `{name}`"),
            message: e.to_string(),
        };
        let mut g = Digraph::empty(self.n, NodeId(self.source)).map_err(|e| match e {
            GraphError::NodeOutOfRange { .. } => field("source", e),
            e => field("n", e),
        })?;
        for (i, [a, b]) in self.edges.into_iter().enumerate() {
            g.add_edge(NodeId(a), NodeId(b)).map_err(|e| GraphError::Parse {
                location: format!("edges[{i}] = [{a},{b}]"),
                message: e.to_string(),
            })?;
        }
        Ok(g)
    }
}

fn json_error(e: serde_json::Error) -> GraphError {
    GraphError::Parse {
        location: format!("line {} column {}", e.line(), e.column()),
        message: json_message(&e),
    }
}

/// serde_json's message without its trailing position.
pub(crate) fn json_message(e: &serde_json::Error) -> String {
    let text = e.to_string();
    let suffix = format!(" at line {} column {}", e.line(), e.column());
    text.strip_suffix(&suffix).map(str::to_string).unwrap_or(text)
}

pub fn parse_graph(text: &str) -> Result<Digraph, GraphError> {
    let file: GraphFile = serde_json::from_str(text).map_err(json_error)?;
    file.into_graph()
}

/// Canonical single-line form.
pub fn serialize_graph(g: &Digraph) -> String {
    serde_json::to_string(&GraphFile::from_graph(g)).expect("graph serializes")
}

/// Parses a fault-domain file and checks every member against `n`.
pub fn parse_fault_domain(text: &str, n: usize) -> Result<FaultDomain, GraphError> {
    let d: FaultDomain = serde_json::from_str(text).map_err(json_error)?;
    for (i, s) in d.sets.iter().enumerate() {
        if let Some(v) = s.max() {
            if v.0 >= n {
                return Err(GraphError::Parse {
                    location: format!("sets[{i}]"),
                    message: GraphError::NodeOutOfRange { node: v.0, n }.to_string(),
                });
            }
        }
    }
    Ok(d)
}

pub fn serialize_fault_domain(d: &FaultDomain) -> String {
    let mut sorted = d.clone();
    sorted.sets.sort_by(NodeSet::canonical_cmp);
    serde_json::to_string(&sorted).expect("domain serializes")
}
