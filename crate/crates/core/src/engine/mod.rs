//! Deterministic execution of scenarios.
//!
//! [`run_sync`] drives lock-step rounds `1..=max_rounds` (default `n`). In
//! round `r` every node first produces its transmissions, the engine checks
//! them against the edge set and delivers them, then every fault-free node
//! evaluates its commit rules on the cumulative support. [`run_async`]
//! delivers one message per event under an explicit or seeded fair schedule.
//! Both produce an [`ExecutionTrace`] which [`evaluate`] turns into a
//! [`Verdict`].
//!
//! The asynchronous engine exists to exercise the claim that the same
//! topology condition governs CPA without rounds. That claim is checked
//! empirically here, not proven.

mod asynch;
mod scenario;
mod search;
mod sync;
mod trace;
mod verdict;

pub use asynch::{run_async, run_async_with, Schedule, DEFAULT_DELAY_FACTOR};
pub use scenario::{load_scenario, parse_scenario, GraphRef, Scenario, ScenarioFile};
pub use search::{for_each_scenario, search_violation, Coverage, SearchConfig, SearchOutcome, Visit};
pub use sync::{run_sync, run_sync_with};
pub use trace::{Commit, EventKind, ExecutionTrace, Halt, TraceEvent};
pub use verdict::{evaluate, Agreement, Termination, Validity, Verdict};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::adversary::AdversaryError;
use crate::graph::GraphError;
use crate::protocol::{NodeState, ProtocolError};

/// How one transmission reaches the out-neighbors.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Delivery {
    /// Independent links; a sender may address each out-neighbor differently.
    #[default]
    PointToPoint,
    /// Every transmission reaches all out-neighbors identically.
    Radio,
}

/// Whether to keep the full event list.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Record {
    Full,
    /// Commits and halt reason only; used by searches.
    Off,
}

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
    #[error("integrity violation: {0}")]
    Integrity(String),
    #[error("invalid schedule: {0}")]
    Schedule(String),
    #[error("scenario file: {0}")]
    Parse(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Adversary(#[from] AdversaryError),
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Result of running one scenario.
#[derive(Clone, Debug)]
pub struct Execution {
    pub trace: ExecutionTrace,
    pub verdict: Verdict,
    /// Final state per node; `None` for faulty nodes.
    pub states: Vec<Option<NodeState>>,
}
