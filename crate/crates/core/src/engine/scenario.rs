use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Delivery, EngineError, Schedule};
use crate::adversary::Strategy;
use crate::graph::{json_message, Digraph, GraphFile, NodeId, NodeSet};
use crate::protocol::{ProtocolKind, Value};

/// Everything needed to reproduce one execution.
#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub graph: Digraph,
    pub protocol: ProtocolKind,
    /// Faulty nodes other than the source.
    pub fault_set: NodeSet,
    /// Exactly one strategy per node of `fault_set`.
    pub strategies: BTreeMap<NodeId, Strategy>,
    /// Behavior of a faulty source; radio broadcast only.
    pub source_fault: Option<Strategy>,
    pub source_input: Value,
    pub delivery: Delivery,
    /// Synchronous round limit; `n` when absent.
    pub max_rounds: Option<u32>,
    pub seed: u64,
    /// Asynchronous schedule; seeded fair with `seed` when absent.
    pub schedule: Option<Schedule>,
}

impl Scenario {
    /// Fault-free run of `protocol` with source input `x`.
    pub fn honest(graph: Digraph, protocol: ProtocolKind, x: Value) -> Self {
        let delivery = match protocol {
            ProtocolKind::RadioBb { .. } => Delivery::Radio,
            _ => Delivery::PointToPoint,
        };
        Scenario {
            graph,
            protocol,
            fault_set: NodeSet::empty(),
            strategies: BTreeMap::new(),
            source_fault: None,
            source_input: x,
            delivery,
            max_rounds: None,
            seed: 0,
            schedule: None,
        }
    }

    /// Assigns `strategy` to `node`, adding it to the fault set.
    pub fn with_fault(mut self, node: NodeId, strategy: Strategy) -> Self {
        self.fault_set.insert(node);
        self.strategies.insert(node, strategy);
        self
    }

    pub fn horizon(&self) -> u32 {
        self.max_rounds.unwrap_or(self.graph.n() as u32)
    }

    /// Fault-free nodes, excluding a faulty source.
    pub fn honest_nodes(&self) -> NodeSet {
        let mut h = self.graph.nodes().difference(self.fault_set);
        if self.source_fault.is_some() {
            h.remove(self.graph.source());
        }
        h
    }

    pub fn validate(&self) -> Result<(), EngineError> {
        let g = &self.graph;
        let bad = |m: String| Err(EngineError::InvalidScenario(m));
        g.check_set(self.fault_set)?;
        if self.fault_set.contains(g.source()) {
            return bad("the source cannot be in the fault set; use source_fault for a faulty radio source".into());
        }
        let covered: NodeSet = self.strategies.keys().copied().collect();
        if covered != self.fault_set || self.strategies.len() != covered.len() {
            return bad(format!(
                "strategies cover {covered} but the fault set is {}",
                self.fault_set
            ));
        }
        if self.source_input.is_null() {
            return bad("source input cannot be null".into());
        }
        if self.protocol.is_async() && self.delivery == Delivery::Radio {
            return bad("asynchronous CPA runs on point-to-point links only".into());
        }
        if matches!(self.protocol, ProtocolKind::RadioBb { .. }) && self.delivery != Delivery::Radio {
            return bad("radio broadcast requires radio delivery".into());
        }
        if let ProtocolKind::CpaG { domain } = &self.protocol {
            for s in &domain.sets {
                g.check_set(*s)?;
            }
        }
        for (node, s) in &self.strategies {
            if s.is_source_strategy() {
                return bad(format!("{} is a source-only strategy but was given to node {node}", s.name()));
            }
            s.validate(g, *node, self.delivery, &self.protocol)?;
        }
        if let Some(s) = &self.source_fault {
            if !s.is_source_strategy() {
                return bad(format!("source_fault must be silent_source or source_value, got {}", s.name()));
            }
            s.validate(g, g.source(), self.delivery, &self.protocol)?;
        }
        if self.schedule.is_some() && !self.protocol.is_async() {
            return bad("a schedule only applies to asynchronous CPA".into());
        }
        Ok(())
    }

    pub fn to_file(&self) -> ScenarioFile {
        ScenarioFile {
            graph: GraphRef::Inline(GraphFile::from_graph(&self.graph)),
            protocol: self.protocol.clone(),
            fault_set: self.fault_set,
            strategies: self.strategies.clone(),
            source_fault: self.source_fault.clone(),
            source_input: self.source_input,
            delivery: self.delivery,
            max_rounds: self.max_rounds,
            seed: self.seed,
            schedule: self.schedule.clone(),
        }
    }

    /// Canonical JSON, suitable for re-running with `simulate`.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("scenario serializes")
    }
}

/// The graph of a scenario file: inline, or a path relative to the file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GraphRef {
    Inline(GraphFile),
    Path(String),
}

/// On-disk scenario format.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub graph: GraphRef,
    pub protocol: ProtocolKind,
    #[serde(default)]
    pub fault_set: NodeSet,
    #[serde(default)]
    pub strategies: BTreeMap<NodeId, Strategy>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source_fault: Option<Strategy>,
    pub source_input: Value,
    #[serde(default)]
    pub delivery: Delivery,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_rounds: Option<u32>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<Schedule>,
}

/// Parses a scenario; graph paths resolve against `base_dir`.
pub fn parse_scenario(text: &str, base_dir: &Path) -> Result<Scenario, EngineError> {
    let file: ScenarioFile = serde_json::from_str(text)
        .map_err(|e| EngineError::Parse(format!("line {} column {}: {}", e.line(), e.column(), json_message(&e))))?;
    let graph = match file.graph {
        GraphRef::Inline(g) => g.into_graph()?,
        GraphRef::Path(p) => {
            let path = base_dir.join(&p);
            let text = std::fs::read_to_string(&path).map_err(|source| EngineError::Io {
                path: path.display().to_string(),
                source,
            })?;
            crate::graph::parse_graph(&text)?
        }
    };
    let scn = Scenario {
        graph,
        protocol: file.protocol,
        fault_set: file.fault_set,
        strategies: file.strategies,
        source_fault: file.source_fault,
        source_input: file.source_input,
        delivery: file.delivery,
        max_rounds: file.max_rounds,
        seed: file.seed,
        schedule: file.schedule,
    };
    scn.validate()?;
    Ok(scn)
}

pub fn load_scenario(path: &Path) -> Result<Scenario, EngineError> {
    let text = std::fs::read_to_string(path).map_err(|source| EngineError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_scenario(&text, path.parent().unwrap_or(Path::new(".")))
}
