//! Per-node protocol state machines.
//!
//! Each fault-free node is a [`NodeState`]. The synchronous engine drives a
//! round `r` in two phases: [`NodeState::emit`] produces what the node sends
//! in round `r` (a function of what it committed in round `r - 1`), then
//! [`NodeState::receive`] folds the messages delivered in round `r` into the
//! cumulative support and applies the commit rules at end of round. The
//! asynchronous variant is driven one delivery at a time through
//! [`NodeState::on_deliver`].
//!
//! Commit rules, in priority order:
//! 1. a message received directly from the source commits its value;
//! 2. a value supported by enough distinct in-neighbors commits
//!    (`f + 1` of them for CPA, a support set outside the fault domain for
//!    CPA-G, `t + 1` for tag `t` of CPA-P).
//!
//! Two values crossing the threshold in the same round is impossible under a
//! feasible fault set on a graph that satisfies the condition. If it happens
//! anyway the smallest value wins and `anomaly` is raised.

use std::fmt;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::graph::{Digraph, FaultDomain, NodeId, NodeSet};

/// A broadcast value. `Data` values are the ordinary input domain; `Default`
/// is the fallback adopted by radio Byzantine broadcast when the source stays
/// silent; `Null` is the unset marker of the CPA-P vector and is never sent.
///
/// Ordering: every `Data` value, then `Default`, then `Null`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Data(u32),
    Default,
    Null,
}

impl Value {
    pub fn is_null(self) -> bool {
        self == Value::Null
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Data(x) => write!(f, "{x}"),
            Value::Default => write!(f, "default"),
            Value::Null => write!(f, "null"),
        }
    }
}

impl From<u32> for Value {
    fn from(x: u32) -> Self {
        Value::Data(x)
    }
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Value::Data(x) => s.serialize_u32(*x),
            Value::Default => s.serialize_str("default"),
            Value::Null => s.serialize_unit(),
        }
    }
}

impl<'de> Deserialize<'de> for Value {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = Value;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a non-negative integer, \"default\" or null")
            }

            fn visit_u64<E: de::Error>(self, x: u64) -> Result<Value, E> {
                u32::try_from(x)
                    .map(Value::Data)
                    .map_err(|_| E::custom(format!("value {x} out of range")))
            }

            fn visit_i64<E: de::Error>(self, x: i64) -> Result<Value, E> {
                u32::try_from(x)
                    .map(Value::Data)
                    .map_err(|_| E::custom(format!("value {x} out of range")))
            }

            fn visit_str<E: de::Error>(self, s: &str) -> Result<Value, E> {
                match s {
                    "default" => Ok(Value::Default),
                    "null" => Ok(Value::Null),
                    other => Err(E::custom(format!("unknown value `{other}`"))),
                }
            }

            fn visit_unit<E: de::Error>(self) -> Result<Value, E> {
                Ok(Value::Null)
            }

            fn visit_none<E: de::Error>(self) -> Result<Value, E> {
                Ok(Value::Null)
            }
        }
        d.deserialize_any(V)
    }
}

/// What a node puts on the wire; the engine addresses it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Payload {
    pub value: Value,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub tag: Option<u32>,
}

impl Payload {
    pub fn plain(value: Value) -> Self {
        Payload { value, tag: None }
    }

    pub fn tagged(value: Value, tag: u32) -> Self {
        Payload { value, tag: Some(tag) }
    }
}

/// A delivered message.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Message {
    pub sender: NodeId,
    pub value: Value,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub tag: Option<u32>,
}

impl Message {
    pub fn new(sender: NodeId, payload: Payload) -> Self {
        Message {
            sender,
            value: payload.value,
            tag: payload.tag,
        }
    }

    pub fn payload(&self) -> Payload {
        Payload {
            value: self.value,
            tag: self.tag,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProtocolKind {
    /// Certified propagation with known local bound `f`.
    Cpa { f: usize },
    /// Parameter-free variant running `n + 1` tagged instances.
    CpaP,
    /// Fault-domain variant: commit when the support set is not feasible.
    CpaG { domain: FaultDomain },
    /// Radio-model Byzantine broadcast with a default value for a silent source.
    RadioBb { f: usize },
    /// Event-driven CPA without rounds.
    AsyncCpa { f: usize },
}

impl ProtocolKind {
    pub fn name(&self) -> &'static str {
        match self {
            ProtocolKind::Cpa { .. } => "cpa",
            ProtocolKind::CpaP => "cpa_p",
            ProtocolKind::CpaG { .. } => "cpa_g",
            ProtocolKind::RadioBb { .. } => "radio_bb",
            ProtocolKind::AsyncCpa { .. } => "async_cpa",
        }
    }

    pub fn is_async(&self) -> bool {
        matches!(self, ProtocolKind::AsyncCpa { .. })
    }

    /// Whether `support` (distinct senders of one value) crosses the commit
    /// threshold. Not meaningful for CPA-P, whose threshold depends on the tag.
    fn accepts(&self, support: NodeSet) -> bool {
        match self {
            ProtocolKind::Cpa { f } | ProtocolKind::RadioBb { f } | ProtocolKind::AsyncCpa { f } => support.len() > *f,
            ProtocolKind::CpaG { domain } => !domain.admits(support),
            ProtocolKind::CpaP => false,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProtocolError {
    #[error("node {node} received a message from {sender}, which is not an in-neighbor")]
    NotInNeighbor { node: NodeId, sender: NodeId },
    #[error("{expected} step called on a {actual} node")]
    WrongProtocol { expected: &'static str, actual: &'static str },
}

/// Distinct senders seen for one `(value, tag)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Support {
    pub value: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tag: Option<u32>,
    pub senders: NodeSet,
}

/// State of one fault-free node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeState {
    pub id: NodeId,
    pub protocol: ProtocolKind,
    pub committed: Option<Value>,
    pub commit_round: Option<u32>,
    pub terminated: bool,
    /// Cumulative support, in first-seen order.
    pub support: Vec<Support>,
    /// CPA-P estimate vector `v[0..=n]`; absent for other protocols and for
    /// the source and its out-neighbors.
    pub vec: Option<Vec<Value>>,
    vec_round: Vec<Option<u32>>,
    pub anomaly: bool,
    source: NodeId,
    n: usize,
    ins: NodeSet,
}

impl NodeState {
    /// Fresh state. Pass `Some(x_s)` for a fault-free source, which commits in
    /// round 0.
    pub fn new(g: &Digraph, id: NodeId, protocol: ProtocolKind, source_input: Option<Value>) -> Self {
        let source = g.source();
        let is_source = id == source;
        let needs_vec = matches!(protocol, ProtocolKind::CpaP) && !is_source && !g.ins(id).contains(source);
        let n = g.n();
        let (committed, commit_round) = match (is_source, source_input) {
            (true, Some(x)) => (Some(x), Some(0)),
            _ => (None, None),
        };
        NodeState {
            id,
            protocol,
            committed,
            commit_round,
            terminated: false,
            support: Vec::new(),
            vec: needs_vec.then(|| vec![Value::Null; n + 1]),
            vec_round: if needs_vec { vec![None; n + 1] } else { Vec::new() },
            anomaly: false,
            source,
            n,
            ins: g.ins(id),
        }
    }

    fn is_source(&self) -> bool {
        self.id == self.source
    }

    fn hears_source(&self) -> bool {
        self.ins.contains(self.source)
    }

    /// Round at which CPA-P nodes outside the source's out-neighborhood decide.
    pub fn decision_round(&self) -> u32 {
        self.n as u32
    }

    /// Transmissions for `round`, each addressed to every out-neighbor.
    pub fn emit(&mut self, round: u32) -> Vec<Payload> {
        if self.terminated || self.protocol.is_async() {
            return Vec::new();
        }
        let just_committed = self.commit_round.is_some_and(|r| r + 1 == round);
        match self.protocol {
            ProtocolKind::CpaP if !self.is_source() => {
                if self.vec.is_none() {
                    // out-neighbor of the source: relay every instance once
                    if just_committed {
                        self.terminated = true;
                        let x = self.committed.expect("commit_round implies committed");
                        return (0..=self.n as u32).map(|t| Payload::tagged(x, t)).collect();
                    }
                    return Vec::new();
                }
                let vec = self.vec.as_ref().expect("checked above");
                self.vec_round
                    .iter()
                    .enumerate()
                    .filter(|(_, set)| set.is_some_and(|r| r + 1 == round))
                    .map(|(t, _)| Payload::tagged(vec[t], t as u32))
                    .collect()
            }
            _ => {
                if just_committed {
                    self.terminated = true;
                    vec![Payload::plain(self.committed.expect("commit_round implies committed"))]
                } else {
                    Vec::new()
                }
            }
        }
    }

    fn check_sender(&self, m: &Message) -> Result<bool, ProtocolError> {
        if m.sender == self.id {
            // self-delivery is allowed but never counts
            return Ok(false);
        }
        if !self.ins.contains(m.sender) {
            return Err(ProtocolError::NotInNeighbor {
                node: self.id,
                sender: m.sender,
            });
        }
        Ok(!m.value.is_null())
    }

    fn add_support(&mut self, m: &Message) {
        match self
            .support
            .iter_mut()
            .find(|s| s.value == m.value && s.tag == m.tag)
        {
            Some(s) => {
                s.senders.insert(m.sender);
            }
            None => self.support.push(Support {
                value: m.value,
                tag: m.tag,
                senders: NodeSet::singleton(m.sender),
            }),
        }
    }

    fn commit(&mut self, value: Value, round: u32) -> Option<Value> {
        debug_assert!(self.committed.is_none());
        self.committed = Some(value);
        self.commit_round = Some(round);
        Some(value)
    }

    /// Smallest untagged value crossing the threshold; raises `anomaly` on ties.
    fn threshold_pick(&mut self) -> Option<Value> {
        let mut winners = self
            .support
            .iter()
            .filter(|s| s.tag.is_none() && self.protocol.accepts(s.senders))
            .map(|s| s.value);
        let first = winners.next()?;
        let mut best = first;
        let mut tie = false;
        for v in winners {
            tie = true;
            best = best.min(v);
        }
        if tie {
            self.anomaly = true;
        }
        Some(best)
    }

    /// Folds the messages delivered in `round` and applies the end-of-round
    /// commit rules. Returns the value committed in this round, if any.
    pub fn receive(&mut self, round: u32, inbox: &[Message]) -> Result<Option<Value>, ProtocolError> {
        let mut from_source = None;
        for m in inbox {
            if !self.check_sender(m)? {
                continue;
            }
            if m.sender == self.source && m.tag.is_none() && from_source.is_none() {
                from_source = Some(m.value);
            }
            self.add_support(m);
        }
        if self.committed.is_some() || self.terminated {
            return Ok(None);
        }
        match self.protocol {
            ProtocolKind::CpaP => Ok(self.receive_cpap(round, from_source)),
            ProtocolKind::AsyncCpa { .. } => Ok(None),
            ProtocolKind::RadioBb { .. } if round == 1 && self.hears_source() => {
                Ok(self.commit(from_source.unwrap_or(Value::Default), round))
            }
            _ => {
                if let Some(x) = from_source {
                    return Ok(self.commit(x, round));
                }
                match self.threshold_pick() {
                    Some(x) => Ok(self.commit(x, round)),
                    None => Ok(None),
                }
            }
        }
    }

    fn receive_cpap(&mut self, round: u32, from_source: Option<Value>) -> Option<Value> {
        if self.vec.is_none() {
            return from_source.and_then(|x| self.commit(x, round));
        }
        let n = self.n;
        for t in 0..=n {
            if !self.vec.as_ref().expect("cpa-p vector")[t].is_null() {
                continue;
            }
            let mut winners = self
                .support
                .iter()
                .filter(|s| s.tag == Some(t as u32) && s.senders.len() > t)
                .map(|s| s.value);
            if let Some(first) = winners.next() {
                let mut best = first;
                for v in winners {
                    self.anomaly = true;
                    best = best.min(v);
                }
                self.vec.as_mut().expect("cpa-p vector")[t] = best;
                self.vec_round[t] = Some(round);
            }
        }
        if round >= self.decision_round() {
            self.terminated = true;
            let pick = self
                .vec
                .as_ref()
                .expect("cpa-p vector")
                .iter()
                .rev()
                .copied()
                .find(|v| !v.is_null());
            return pick.and_then(|x| self.commit(x, round));
        }
        None
    }

    /// Initial transmission of an asynchronous node: the source sends its
    /// input once and terminates.
    pub fn start(&mut self) -> Vec<Payload> {
        match (self.protocol.is_async(), self.committed) {
            (true, Some(x)) if !self.terminated => {
                self.terminated = true;
                vec![Payload::plain(x)]
            }
            _ => Vec::new(),
        }
    }

    /// Asynchronous delivery of one message at event index `step`. On commit
    /// the node sends its value once and terminates.
    pub fn on_deliver(&mut self, step: u32, msg: &Message) -> Result<Vec<Payload>, ProtocolError> {
        if !self.check_sender(msg)? || self.committed.is_some() {
            return Ok(Vec::new());
        }
        let value = if msg.sender == self.source && msg.tag.is_none() {
            Some(msg.value)
        } else {
            self.add_support(msg);
            self.threshold_pick()
        };
        match value {
            Some(x) => {
                self.commit(x, step);
                self.terminated = true;
                Ok(vec![Payload::plain(x)])
            }
            None => Ok(Vec::new()),
        }
    }

    /// Supporters of `(value, tag)` so far.
    pub fn supporters(&self, value: Value, tag: Option<u32>) -> NodeSet {
        self.support
            .iter()
            .find(|s| s.value == value && s.tag == tag)
            .map_or(NodeSet::empty(), |s| s.senders)
    }
}

fn expect_kind(state: &NodeState, want: &'static str) -> Result<(), ProtocolError> {
    if state.protocol.name() == want {
        Ok(())
    } else {
        Err(ProtocolError::WrongProtocol {
            expected: want,
            actual: state.protocol.name(),
        })
    }
}

fn step(state: &mut NodeState, round: u32, inbox: &[Message]) -> Result<Vec<Payload>, ProtocolError> {
    let out = state.emit(round);
    state.receive(round, inbox)?;
    Ok(out)
}

/// One CPA round with a known inbox: emit, then receive.
pub fn cpa_step(state: &mut NodeState, round: u32, inbox: &[Message]) -> Result<Vec<Payload>, ProtocolError> {
    expect_kind(state, "cpa")?;
    step(state, round, inbox)
}

pub fn cpap_step(state: &mut NodeState, round: u32, inbox: &[Message]) -> Result<Vec<Payload>, ProtocolError> {
    expect_kind(state, "cpa_p")?;
    step(state, round, inbox)
}

pub fn cpag_step(state: &mut NodeState, round: u32, inbox: &[Message]) -> Result<Vec<Payload>, ProtocolError> {
    expect_kind(state, "cpa_g")?;
    step(state, round, inbox)
}

pub fn radio_bb_step(state: &mut NodeState, round: u32, inbox: &[Message]) -> Result<Vec<Payload>, ProtocolError> {
    expect_kind(state, "radio_bb")?;
    step(state, round, inbox)
}

pub fn async_cpa_on_deliver(state: &mut NodeState, step: u32, msg: &Message) -> Result<Vec<Payload>, ProtocolError> {
    expect_kind(state, "async_cpa")?;
    state.on_deliver(step, msg)
}
