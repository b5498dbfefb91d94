use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::graph::NodeId;
use crate::protocol::{Payload, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    Sent,
    Delivered,
    Committed,
    Terminated,
}

/// One trace line. `round` is the round number in synchronous runs and the
/// delivery-event index in asynchronous ones. `peer` is the recipient of a
/// `sent` event and the sender of a `delivered` event.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEvent {
    pub round: u32,
    pub node: NodeId,
    pub event: EventKind,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub peer: Option<NodeId>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub value: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub tag: Option<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Commit {
    pub value: Value,
    pub round: u32,
}

/// Why the run stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Halt {
    /// Nothing left to do: every fault-free node terminated, or no message in flight.
    Quiescent,
    /// Synchronous round limit reached.
    Horizon,
    /// Asynchronous event cap reached with messages still in flight.
    EventCap,
    /// Explicit schedule ran out with messages still in flight.
    ScheduleExhausted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExecutionTrace {
    /// Empty when recording was off.
    pub events: Vec<TraceEvent>,
    /// Per node; always `None` for faulty nodes.
    pub commits: Vec<Option<Commit>>,
    pub halt: Halt,
    /// Rounds executed (sync) or delivery events processed (async).
    pub steps: u32,
    /// Some fault-free node broke a same-round tie between values.
    pub anomaly: bool,
}

impl ExecutionTrace {
    /// Event stream, one JSON object per line with a fixed field order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.events {
            out.push_str(&serde_json::to_string(e).expect("trace event serializes"));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Vec<TraceEvent>, serde_json::Error> {
        text.lines()
            .filter(|l| !l.trim().is_empty())
            .map(serde_json::from_str)
            .collect()
    }

    /// Replays `sent`/`delivered` pairs and checks that every link is FIFO and
    /// delivers each message exactly once. With `same_round`, every delivery
    /// must also happen in the round of its send.
    pub fn check_links(&self, same_round: bool) -> Result<(), String> {
        let mut queues: BTreeMap<(NodeId, NodeId), VecDeque<(u32, Payload)>> = BTreeMap::new();
        for e in &self.events {
            let payload = Payload {
                value: e.value.unwrap_or(Value::Null),
                tag: e.tag,
            };
            match e.event {
                EventKind::Sent => {
                    let to = e.peer.ok_or("sent event without recipient")?;
                    queues.entry((e.node, to)).or_default().push_back((e.round, payload));
                }
                EventKind::Delivered => {
                    let from = e.peer.ok_or("delivered event without sender")?;
                    let (sent_round, sent) = queues
                        .get_mut(&(from, e.node))
                        .and_then(|q| q.pop_front())
                        .ok_or_else(|| format!("delivery {from}->{} at {} was never sent", e.node, e.round))?;
                    if sent != payload {
                        return Err(format!(
                            "link {from}->{} delivered {:?} out of order (expected {:?})",
                            e.node, payload, sent
                        ));
                    }
                    if same_round && sent_round != e.round {
                        return Err(format!("link {from}->{} delivered a round-{sent_round} message in round {}", e.node, e.round));
                    }
                    if e.round < sent_round {
                        return Err(format!("link {from}->{} delivered before it was sent", e.node));
                    }
                }
                _ => {}
            }
        }
        if let Some(((a, b), q)) = queues.iter().find(|(_, q)| !q.is_empty()) {
            if self.halt == Halt::Quiescent || self.halt == Halt::Horizon {
                return Err(format!("{} message(s) on link {a}->{b} were never delivered", q.len()));
            }
        }
        Ok(())
    }

    /// Values committed per node, read back from the event list.
    pub fn committed_events(&self) -> Vec<(NodeId, Value, u32)> {
        self.events
            .iter()
            .filter(|e| e.event == EventKind::Committed)
            .map(|e| (e.node, e.value.expect("commit carries a value"), e.round))
            .collect()
    }
}
