//! Byzantine behaviors for faulty nodes and the bounded strategy family used
//! by exhaustive searches.
//!
//! Faulty nodes may send in every round and receive normally. Values they
//! send are shaped to the protocol's message format: under CPA-P a value `v`
//! goes out as the tagged messages `<v,0> .. <v,n>`, otherwise as a plain
//! message.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::Delivery;
use crate::graph::{Digraph, NodeId, NodeSet};
use crate::protocol::{Message, NodeState, Payload, ProtocolError, ProtocolKind, Value};

/// One scripted transmission.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ScriptEntry {
    pub round: u32,
    pub to: NodeId,
    pub value: Value,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum Strategy {
    /// Follows the protocol honestly before `from_round`, silent from then on.
    /// `Crash { from_round: 0 }` never sends anything.
    Crash { from_round: u32 },
    /// Sends `value` to every out-neighbor in every round.
    FixedValue { value: Value },
    /// Sends a fixed per-recipient value in every round. Point-to-point only.
    Equivocate { assignment: BTreeMap<NodeId, Value> },
    /// Runs the protocol but substitutes `input_override` for every value it relays.
    FollowProtocol { input_override: Value },
    /// Sends exactly the listed messages; silent otherwise.
    Scripted { table: Vec<ScriptEntry> },
    /// Faulty radio source that never transmits.
    SilentSource,
    /// Faulty radio source that announces `value` in round 1.
    SourceValue { value: Value },
}

impl Strategy {
    pub fn name(&self) -> &'static str {
        match self {
            Strategy::Crash { .. } => "crash",
            Strategy::FixedValue { .. } => "fixed_value",
            Strategy::Equivocate { .. } => "equivocate",
            Strategy::FollowProtocol { .. } => "follow_protocol",
            Strategy::Scripted { .. } => "scripted",
            Strategy::SilentSource => "silent_source",
            Strategy::SourceValue { .. } => "source_value",
        }
    }

    pub fn is_source_strategy(&self) -> bool {
        matches!(self, Strategy::SilentSource | Strategy::SourceValue { .. })
    }

    fn values(&self) -> Vec<Value> {
        match self {
            Strategy::Crash { .. } | Strategy::SilentSource => Vec::new(),
            Strategy::FixedValue { value } | Strategy::SourceValue { value } => vec![*value],
            Strategy::FollowProtocol { input_override } => vec![*input_override],
            Strategy::Equivocate { assignment } => assignment.values().copied().collect(),
            Strategy::Scripted { table } => table.iter().map(|e| e.value).collect(),
        }
    }

    /// Construction-time checks against the topology and delivery mode.
    pub fn validate(
        &self,
        g: &Digraph,
        node: NodeId,
        delivery: Delivery,
        protocol: &ProtocolKind,
    ) -> Result<(), AdversaryError> {
        g.check(node).map_err(|_| AdversaryError::UnknownNode(node))?;
        if self.values().iter().any(|v| v.is_null()) {
            return Err(AdversaryError::NullValue(node));
        }
        let outs = g.outs(node);
        match self {
            Strategy::SilentSource | Strategy::SourceValue { .. } => {
                if node != g.source() || !matches!(protocol, ProtocolKind::RadioBb { .. }) || delivery != Delivery::Radio {
                    return Err(AdversaryError::SourceOnly(node));
                }
            }
            Strategy::Equivocate { assignment } => {
                if delivery == Delivery::Radio {
                    return Err(AdversaryError::RadioEquivocation(node));
                }
                if let Some(to) = assignment.keys().find(|to| !outs.contains(**to)) {
                    return Err(AdversaryError::NotOutNeighbor { node, to: *to });
                }
            }
            Strategy::Scripted { table } => {
                if let Some(e) = table.iter().find(|e| !outs.contains(e.to)) {
                    return Err(AdversaryError::NotOutNeighbor { node, to: e.to });
                }
                if table.iter().any(|e| e.round == 0) {
                    return Err(AdversaryError::InvalidScript(node, "rounds start at 1".into()));
                }
                if delivery == Delivery::Radio {
                    let mut per_round: BTreeMap<u32, (NodeSet, Vec<Value>)> = BTreeMap::new();
                    for e in table {
                        let slot = per_round.entry(e.round).or_default();
                        slot.0.insert(e.to);
                        slot.1.push(e.value);
                    }
                    for (to, values) in per_round.values() {
                        if *to != outs || values.windows(2).any(|w| w[0] != w[1]) {
                            return Err(AdversaryError::RadioEquivocation(node));
                        }
                    }
                }
            }
            _ => {}
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AdversaryError {
    #[error("node {0} is not in the graph")]
    UnknownNode(NodeId),
    #[error("node {0} would send different values to different out-neighbors in radio mode")]
    RadioEquivocation(NodeId),
    #[error("node {node} cannot send to {to}: not an out-neighbor")]
    NotOutNeighbor { node: NodeId, to: NodeId },
    #[error("node {0} would send the null value")]
    NullValue(NodeId),
    #[error("source-only strategy assigned to node {0} outside a radio broadcast with faulty source")]
    SourceOnly(NodeId),
    #[error("invalid script for node {0}: {1}")]
    InvalidScript(NodeId, String),
    #[error("strategy family has {} members, cap is {cap}", size.map_or_else(|| "more than 2^128".to_string(), |s| s.to_string()))]
    FamilyTooLarge { size: Option<u128>, cap: u128 },
}

/// A message addressed to one out-neighbor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Outgoing {
    pub to: NodeId,
    pub payload: Payload,
}

/// Runtime state of a faulty node executing a [`Strategy`].
#[derive(Clone, Debug)]
pub struct FaultyNode {
    pub id: NodeId,
    pub strategy: Strategy,
    shadow: Option<NodeState>,
    outs: NodeSet,
    max_tag: Option<u32>,
}

impl FaultyNode {
    pub fn new(g: &Digraph, id: NodeId, strategy: Strategy, protocol: &ProtocolKind) -> Self {
        let shadow = matches!(strategy, Strategy::Crash { .. } | Strategy::FollowProtocol { .. })
            .then(|| NodeState::new(g, id, protocol.clone(), None));
        FaultyNode {
            id,
            strategy,
            shadow,
            outs: g.outs(id),
            max_tag: matches!(protocol, ProtocolKind::CpaP).then_some(g.n() as u32),
        }
    }

    fn shaped(&self, to: NodeId, value: Value, out: &mut Vec<Outgoing>) {
        match self.max_tag {
            Some(n) => out.extend((0..=n).map(|t| Outgoing {
                to,
                payload: Payload::tagged(value, t),
            })),
            None => out.push(Outgoing {
                to,
                payload: Payload::plain(value),
            }),
        }
    }

    fn to_all(&self, payloads: &[Payload], out: &mut Vec<Outgoing>) {
        for to in self.outs {
            out.extend(payloads.iter().map(|p| Outgoing { to, payload: *p }));
        }
    }

    /// Messages sent in synchronous `round`.
    pub fn adversary_outbox(&mut self, round: u32) -> Vec<Outgoing> {
        let mut out = Vec::new();
        match &self.strategy {
            Strategy::Crash { from_round } => {
                let alive = round < *from_round;
                let shadow = self.shadow.as_mut().expect("crash keeps a shadow");
                let payloads = shadow.emit(round);
                if alive {
                    self.to_all(&payloads, &mut out);
                }
            }
            Strategy::FixedValue { value } => {
                for to in self.outs {
                    self.shaped(to, *value, &mut out);
                }
            }
            Strategy::Equivocate { assignment } => {
                for (to, v) in assignment {
                    self.shaped(*to, *v, &mut out);
                }
            }
            Strategy::FollowProtocol { input_override } => {
                let v = *input_override;
                let shadow = self.shadow.as_mut().expect("follow keeps a shadow");
                let payloads: Vec<Payload> = shadow
                    .emit(round)
                    .into_iter()
                    .map(|p| Payload { value: v, tag: p.tag })
                    .collect();
                self.to_all(&payloads, &mut out);
            }
            Strategy::Scripted { table } => {
                for e in table.iter().filter(|e| e.round == round) {
                    self.shaped(e.to, e.value, &mut out);
                }
            }
            Strategy::SilentSource => {}
            Strategy::SourceValue { value } => {
                if round == 1 {
                    self.to_all(&[Payload::plain(*value)], &mut out);
                }
            }
        }
        out
    }

    /// Delivers the synchronous inbox of `round`.
    pub fn observe(&mut self, round: u32, inbox: &[Message]) -> Result<(), ProtocolError> {
        if let Some(shadow) = self.shadow.as_mut() {
            shadow.receive(round, inbox)?;
        }
        Ok(())
    }

    /// Asynchronous start: everything a non-reactive strategy will ever send,
    /// in round order.
    pub fn start_async(&mut self) -> Vec<Outgoing> {
        let mut out = Vec::new();
        match &self.strategy {
            Strategy::FixedValue { value } | Strategy::SourceValue { value } => {
                for to in self.outs {
                    self.shaped(to, *value, &mut out);
                }
            }
            Strategy::Equivocate { assignment } => {
                for (to, v) in assignment {
                    self.shaped(*to, *v, &mut out);
                }
            }
            Strategy::Scripted { table } => {
                let mut sorted = table.clone();
                sorted.sort();
                for e in sorted {
                    self.shaped(e.to, e.value, &mut out);
                }
            }
            Strategy::Crash { .. } | Strategy::FollowProtocol { .. } | Strategy::SilentSource => {}
        }
        out
    }

    /// Asynchronous delivery at event index `step`; reactive strategies
    /// answer through their shadow machine. `Crash { from_round }` is read as
    /// "honest before event `from_round`".
    pub fn on_deliver_async(&mut self, step: u32, msg: &Message) -> Result<Vec<Outgoing>, ProtocolError> {
        let mut out = Vec::new();
        let (alive, replace) = match &self.strategy {
            Strategy::Crash { from_round } => (step < *from_round, None),
            Strategy::FollowProtocol { input_override } => (true, Some(*input_override)),
            _ => return Ok(out),
        };
        let shadow = self.shadow.as_mut().expect("reactive strategies keep a shadow");
        let payloads = shadow.on_deliver(step, msg)?;
        if alive {
            let payloads: Vec<Payload> = payloads
                .into_iter()
                .map(|p| Payload {
                    value: replace.unwrap_or(p.value),
                    tag: p.tag,
                })
                .collect();
            self.to_all(&payloads, &mut out);
        }
        Ok(out)
    }
}

/// Per-node strategy list: named strategies first, then every scripted table.
#[derive(Clone, Debug)]
struct NodeFamily {
    node: NodeId,
    named: Vec<Strategy>,
    /// `(round, recipient)`; `None` recipient means a radio broadcast.
    slots: Vec<(u32, Option<NodeId>)>,
    outs: NodeSet,
    scripted: u128,
}

impl NodeFamily {
    fn len(&self) -> u128 {
        self.named.len() as u128 + self.scripted
    }

    fn get(&self, i: u128, domain: &[Value]) -> Strategy {
        if i < self.named.len() as u128 {
            return self.named[i as usize].clone();
        }
        let base = domain.len() as u128 + 1;
        let mut rest = i - self.named.len() as u128;
        let mut digits = vec![0usize; self.slots.len()];
        // last slot is the least significant digit
        for d in digits.iter_mut().rev() {
            *d = (rest % base) as usize;
            rest /= base;
        }
        let mut table = Vec::new();
        for ((round, to), d) in self.slots.iter().zip(digits) {
            if d == 0 {
                continue;
            }
            let value = domain[d - 1];
            match to {
                Some(to) => table.push(ScriptEntry { round: *round, to: *to, value }),
                None => table.extend(self.outs.iter().map(|to| ScriptEntry { round: *round, to, value })),
            }
        }
        Strategy::Scripted { table }
    }
}

/// Bounded, canonically ordered family of strategy assignments over a fault set.
///
/// Per faulty node: `Crash(r)` for `r ≤ depth`, `FixedValue(v)` and
/// `FollowProtocol(v)` for every `v` in the value domain, then every scripted
/// table over rounds `1..=depth` with entries in `domain ∪ {silence}`.
/// Point-to-point scripts address the node's fault-free out-neighbors other
/// than the source; radio scripts carry one value-or-silence per round.
/// Assignments enumerate the product over faulty nodes in ascending id order,
/// the first node varying slowest.
#[derive(Clone, Debug)]
pub struct StrategyFamily {
    nodes: Vec<NodeFamily>,
    domain: Vec<Value>,
    size: u128,
}

impl StrategyFamily {
    pub fn len(&self) -> u128 {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn get(&self, mut i: u128) -> BTreeMap<NodeId, Strategy> {
        assert!(i < self.size, "family index {i} out of range");
        let mut picks = vec![0u128; self.nodes.len()];
        for (k, nf) in self.nodes.iter().enumerate().rev() {
            picks[k] = i % nf.len();
            i /= nf.len();
        }
        self.nodes
            .iter()
            .zip(picks)
            .map(|(nf, p)| (nf.node, nf.get(p, &self.domain)))
            .collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = BTreeMap<NodeId, Strategy>> + '_ {
        (0..self.size).map(move |i| self.get(i))
    }

    /// Number of members per faulty node, in node order.
    pub fn per_node(&self) -> Vec<(NodeId, u128)> {
        self.nodes.iter().map(|nf| (nf.node, nf.len())).collect()
    }
}

/// Builds the strategy family for fault set `faulty`, refusing when it has
/// more than `cap` members.
pub fn strategy_family(
    g: &Digraph,
    faulty: NodeSet,
    value_domain: &[Value],
    depth_bound: u32,
    delivery: Delivery,
    cap: u128,
) -> Result<StrategyFamily, AdversaryError> {
    let mut nodes = Vec::new();
    let mut size: Option<u128> = Some(1);
    for node in faulty {
        g.check(node).map_err(|_| AdversaryError::UnknownNode(node))?;
        let mut named: Vec<Strategy> = (0..=depth_bound).map(|r| Strategy::Crash { from_round: r }).collect();
        named.extend(value_domain.iter().map(|v| Strategy::FixedValue { value: *v }));
        named.extend(value_domain.iter().map(|v| Strategy::FollowProtocol { input_override: *v }));
        let outs = g.outs(node);
        let slots: Vec<(u32, Option<NodeId>)> = match delivery {
            Delivery::Radio if outs.is_empty() => Vec::new(),
            Delivery::Radio => (1..=depth_bound).map(|r| (r, None)).collect(),
            Delivery::PointToPoint => {
                let mut recipients = outs.difference(faulty);
                recipients.remove(g.source());
                (1..=depth_bound)
                    .flat_map(|r| recipients.iter().map(move |to| (r, Some(to))))
                    .collect()
            }
        };
        let base = value_domain.len() as u128 + 1;
        let scripted = u32::try_from(slots.len())
            .ok()
            .and_then(|k| base.checked_pow(k));
        let node_len = scripted.and_then(|s| s.checked_add(named.len() as u128));
        size = size.zip(node_len).and_then(|(a, b)| a.checked_mul(b));
        nodes.push(NodeFamily {
            node,
            named,
            slots,
            outs,
            scripted: scripted.unwrap_or(0),
        });
    }
    match size {
        Some(s) if s <= cap => Ok(StrategyFamily {
            nodes,
            domain: value_domain.to_vec(),
            size: s,
        }),
        other => Err(AdversaryError::FamilyTooLarge { size: other, cap }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, GraphKind};

    const BITS: [Value; 2] = [Value::Data(0), Value::Data(1)];

    /// 0 -> 1, 1 -> {2, 3}
    fn fork() -> Digraph {
        Digraph::new(4, NodeId(0), [(0, 1), (1, 2), (1, 3)].map(|(a, b)| (NodeId(a), NodeId(b)))).unwrap()
    }

    #[test]
    fn crash_zero_is_silent() {
        let g = fork();
        let mut node = FaultyNode::new(&g, NodeId(1), Strategy::Crash { from_round: 0 }, &ProtocolKind::Cpa { f: 1 });
        for r in 1..=4 {
            node.observe(r, &[Message::new(NodeId(0), Payload::plain(Value::Data(1)))]).unwrap();
            assert!(node.adversary_outbox(r).is_empty());
        }
    }

    #[test]
    fn crash_later_follows_protocol_first() {
        let g = fork();
        let p = ProtocolKind::Cpa { f: 1 };
        let mut node = FaultyNode::new(&g, NodeId(1), Strategy::Crash { from_round: 3 }, &p);
        assert!(node.adversary_outbox(1).is_empty());
        node.observe(1, &[Message::new(NodeId(0), Payload::plain(Value::Data(1)))]).unwrap();
        assert_eq!(node.adversary_outbox(2).len(), 2);
        let mut node = FaultyNode::new(&g, NodeId(1), Strategy::Crash { from_round: 2 }, &p);
        node.adversary_outbox(1);
        node.observe(1, &[Message::new(NodeId(0), Payload::plain(Value::Data(1)))]).unwrap();
        assert!(node.adversary_outbox(2).is_empty());
    }

    #[test]
    fn equivocation_by_recipient() {
        let g = fork();
        let assignment = BTreeMap::from([(NodeId(2), Value::Data(0)), (NodeId(3), Value::Data(1))]);
        let s = Strategy::Equivocate { assignment };
        s.validate(&g, NodeId(1), Delivery::PointToPoint, &ProtocolKind::Cpa { f: 1 }).unwrap();
        let mut node = FaultyNode::new(&g, NodeId(1), s.clone(), &ProtocolKind::Cpa { f: 1 });
        let out = node.adversary_outbox(2);
        assert_eq!(
            out,
            vec![
                Outgoing { to: NodeId(2), payload: Payload::plain(Value::Data(0)) },
                Outgoing { to: NodeId(3), payload: Payload::plain(Value::Data(1)) },
            ]
        );
        assert_eq!(
            s.validate(&g, NodeId(1), Delivery::Radio, &ProtocolKind::RadioBb { f: 1 }),
            Err(AdversaryError::RadioEquivocation(NodeId(1)))
        );
    }

    #[test]
    fn fixed_value_every_round_and_cpap_shaping() {
        let g = fork();
        let s = Strategy::FixedValue { value: Value::Data(0) };
        let mut node = FaultyNode::new(&g, NodeId(1), s.clone(), &ProtocolKind::Cpa { f: 1 });
        for r in 1..=4 {
            assert_eq!(node.adversary_outbox(r).len(), 2);
        }
        let mut node = FaultyNode::new(&g, NodeId(1), s, &ProtocolKind::CpaP);
        assert_eq!(node.adversary_outbox(1).len(), 2 * 5);
    }

    #[test]
    fn follow_protocol_rewrites_relayed_value() {
        let g = fork();
        let mut node = FaultyNode::new(
            &g,
            NodeId(1),
            Strategy::FollowProtocol { input_override: Value::Data(0) },
            &ProtocolKind::Cpa { f: 1 },
        );
        node.adversary_outbox(1);
        node.observe(1, &[Message::new(NodeId(0), Payload::plain(Value::Data(1)))]).unwrap();
        let out = node.adversary_outbox(2);
        assert_eq!(out.len(), 2);
        assert!(out.iter().all(|o| o.payload.value == Value::Data(0)));
        assert!(node.adversary_outbox(3).is_empty());
    }

    #[test]
    fn validation_rejects_bad_strategies() {
        let g = fork();
        let p = ProtocolKind::Cpa { f: 1 };
        let bad = Strategy::Scripted {
            table: vec![ScriptEntry { round: 1, to: NodeId(0), value: Value::Data(0) }],
        };
        assert!(matches!(
            bad.validate(&g, NodeId(1), Delivery::PointToPoint, &p),
            Err(AdversaryError::NotOutNeighbor { .. })
        ));
        assert_eq!(
            Strategy::FixedValue { value: Value::Null }.validate(&g, NodeId(1), Delivery::PointToPoint, &p),
            Err(AdversaryError::NullValue(NodeId(1)))
        );
        assert_eq!(
            Strategy::SilentSource.validate(&g, NodeId(1), Delivery::Radio, &ProtocolKind::RadioBb { f: 1 }),
            Err(AdversaryError::SourceOnly(NodeId(1)))
        );
        Strategy::SilentSource
            .validate(&g, NodeId(0), Delivery::Radio, &ProtocolKind::RadioBb { f: 1 })
            .unwrap();
        let split = Strategy::Scripted {
            table: vec![
                ScriptEntry { round: 1, to: NodeId(2), value: Value::Data(0) },
                ScriptEntry { round: 1, to: NodeId(3), value: Value::Data(1) },
            ],
        };
        assert_eq!(
            split.validate(&g, NodeId(1), Delivery::Radio, &ProtocolKind::RadioBb { f: 1 }),
            Err(AdversaryError::RadioEquivocation(NodeId(1)))
        );
    }

    #[test]
    fn serde_shape() {
        let s = Strategy::FixedValue { value: Value::Data(1) };
        assert_eq!(serde_json::to_string(&s).unwrap(), r#"{"kind":"fixed_value","params":{"value":1}}"#);
        let back: Strategy = serde_json::from_str(r#"{"kind":"silent_source"}"#).unwrap();
        assert_eq!(back, Strategy::SilentSource);
        let e: Strategy =
            serde_json::from_str(r#"{"kind":"equivocate","params":{"assignment":{"2":0,"3":1}}}"#).unwrap();
        assert!(matches!(e, Strategy::Equivocate { .. }));
    }

    #[test]
    fn empty_fault_set_has_one_empty_assignment() {
        let g = fork();
        let fam = strategy_family(&g, NodeSet::empty(), &BITS, 3, Delivery::PointToPoint, 1000).unwrap();
        assert_eq!(fam.len(), 1);
        assert!(fam.get(0).is_empty());
    }

    #[test]
    fn family_count_one_node_two_recipients() {
        let g = fork();
        let fam = strategy_family(&g, NodeSet::from([1]), &BITS, 2, Delivery::PointToPoint, 1000).unwrap();
        // Crash(0..=2), FixedValue x2, FollowProtocol x2, then 3^(2*2) tables
        assert_eq!(fam.len(), 7 + 81);
        let all: Vec<_> = fam.iter().collect();
        assert_eq!(all[0][&NodeId(1)], Strategy::Crash { from_round: 0 });
        assert_eq!(all[7][&NodeId(1)], Strategy::Scripted { table: vec![] });
        let last = match &all[87][&NodeId(1)] {
            Strategy::Scripted { table } => table.clone(),
            other => panic!("{other:?}"),
        };
        assert_eq!(last.len(), 4);
        assert!(last.iter().all(|e| e.value == Value::Data(1)));
        // all tables are distinct
        let mut tables: Vec<String> = all.iter().map(|a| serde_json::to_string(&a[&NodeId(1)]).unwrap()).collect();
        tables.sort();
        tables.dedup();
        assert_eq!(tables.len(), 88);
    }

    #[test]
    fn radio_family_collapses_per_round() {
        let g = fork();
        let fam = strategy_family(&g, NodeSet::from([1]), &BITS, 2, Delivery::Radio, 1000).unwrap();
        assert_eq!(fam.len(), 7 + 9);
        for a in fam.iter() {
            a[&NodeId(1)]
                .validate(&g, NodeId(1), Delivery::Radio, &ProtocolKind::RadioBb { f: 1 })
                .unwrap();
        }
    }

    #[test]
    fn family_cap_refuses() {
        let g = generate(GraphKind::Complete { n: 12 }, 0).unwrap();
        let err = strategy_family(&g, NodeSet::from([1, 2]), &BITS, 3, Delivery::PointToPoint, 1_000_000).unwrap_err();
        assert!(matches!(err, AdversaryError::FamilyTooLarge { .. }));
        assert!(err.to_string().contains("cap is 1000000"));
    }

    #[test]
    fn product_order_first_node_slowest() {
        let g = fork();
        let fam = strategy_family(&g, NodeSet::from([2, 3]), &BITS, 1, Delivery::PointToPoint, 1000).unwrap();
        // leaves have no out-neighbors: 2 crash + 2 fixed + 2 follow + 1 empty table
        assert_eq!(fam.per_node(), vec![(NodeId(2), 7), (NodeId(3), 7)]);
        assert_eq!(fam.len(), 49);
        let second = fam.get(1);
        assert_eq!(second[&NodeId(2)], Strategy::Crash { from_round: 0 });
        assert_eq!(second[&NodeId(3)], Strategy::Crash { from_round: 1 });
    }
}
