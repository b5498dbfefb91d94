use serde::{Deserialize, Serialize};

use super::{ExecutionTrace, Halt, Scenario};
use crate::graph::{NodeId, NodeSet};
use crate::protocol::{ProtocolKind, Value};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Termination {
    Ok { last_commit_round: u32 },
    Violated { stuck_nodes: NodeSet },
    /// Asynchronous event cap hit; not a protocol verdict.
    EventCapReached { stuck_nodes: NodeSet },
    /// Explicit schedule ended with messages in flight; not a protocol verdict.
    ScheduleExhausted { stuck_nodes: NodeSet },
}

impl Termination {
    pub fn stuck(&self) -> NodeSet {
        match self {
            Termination::Ok { .. } => NodeSet::empty(),
            Termination::Violated { stuck_nodes }
            | Termination::EventCapReached { stuck_nodes }
            | Termination::ScheduleExhausted { stuck_nodes } => *stuck_nodes,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Validity {
    Ok,
    Violated { node: NodeId, value: Value },
    /// Faulty source: nothing to compare against.
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Agreement {
    /// `value` is absent when no fault-free node committed.
    Ok { value: Option<Value> },
    Violated { first: (NodeId, Value), second: (NodeId, Value) },
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub termination: Termination,
    pub validity: Validity,
    pub agreement: Agreement,
    pub anomaly: bool,
}

impl Verdict {
    pub fn is_ok(&self) -> bool {
        matches!(self.termination, Termination::Ok { .. })
            && !matches!(self.validity, Validity::Violated { .. })
            && !matches!(self.agreement, Agreement::Violated { .. })
    }
}

/// Judges a finished trace. Only fault-free nodes count; a faulty radio
/// source is not fault-free.
pub fn evaluate(trace: &ExecutionTrace, scn: &Scenario) -> Verdict {
    let honest = scn.honest_nodes();
    let commits: Vec<(NodeId, Value, u32)> = honest
        .iter()
        .filter_map(|v| trace.commits[v.0].map(|c| (v, c.value, c.round)))
        .collect();
    let stuck: NodeSet = honest.iter().filter(|v| trace.commits[v.0].is_none()).collect();

    let termination = if stuck.is_empty() {
        Termination::Ok {
            last_commit_round: commits.iter().map(|c| c.2).max().unwrap_or(0),
        }
    } else {
        match trace.halt {
            Halt::EventCap => Termination::EventCapReached { stuck_nodes: stuck },
            Halt::ScheduleExhausted => Termination::ScheduleExhausted { stuck_nodes: stuck },
            Halt::Quiescent | Halt::Horizon => Termination::Violated { stuck_nodes: stuck },
        }
    };

    let validity = if scn.source_fault.is_some() {
        Validity::NotApplicable
    } else {
        match commits.iter().find(|c| c.1 != scn.source_input) {
            Some(&(node, value, _)) => Validity::Violated { node, value },
            None => Validity::Ok,
        }
    };

    let agreement = if matches!(scn.protocol, ProtocolKind::RadioBb { .. }) {
        match commits.first() {
            None => Agreement::Ok { value: None },
            Some(&(a, va, _)) => match commits.iter().find(|c| c.1 != va) {
                Some(&(b, vb, _)) => Agreement::Violated {
                    first: (a, va),
                    second: (b, vb),
                },
                None => Agreement::Ok { value: Some(va) },
            },
        }
    } else {
        Agreement::NotApplicable
    };

    Verdict {
        termination,
        validity,
        agreement,
        anomaly: trace.anomaly,
    }
}
