use super::{evaluate, Commit, Delivery, EngineError, EventKind, Execution, ExecutionTrace, Halt, Record, Scenario, TraceEvent};
use crate::adversary::{FaultyNode, Outgoing};
use crate::graph::{Digraph, NodeId};
use crate::protocol::{Message, NodeState, Payload, Value};

struct Recorder {
    on: bool,
    events: Vec<TraceEvent>,
}

impl Recorder {
    fn push(&mut self, round: u32, node: NodeId, event: EventKind, peer: Option<NodeId>, payload: Option<Payload>) {
        if self.on {
            self.events.push(TraceEvent {
                round,
                node,
                event,
                peer,
                value: payload.map(|p| p.value),
                tag: payload.and_then(|p| p.tag),
            });
        }
    }
}

/// Checks a faulty node's round output against the edge set and, in radio
/// mode, that every out-neighbor gets the same single value.
fn check_faulty_outbox(g: &Digraph, from: NodeId, outbox: &[Outgoing], delivery: Delivery) -> Result<(), EngineError> {
    let outs = g.outs(from);
    for o in outbox {
        if !outs.contains(o.to) {
            return Err(EngineError::Integrity(format!("node {from} sent to {}, which is not an out-neighbor", o.to)));
        }
        if o.payload.value.is_null() {
            return Err(EngineError::Integrity(format!("node {from} sent the null value")));
        }
    }
    if delivery == Delivery::Radio && !outbox.is_empty() {
        let first = outbox[0].payload.value;
        if outbox.iter().any(|o| o.payload.value != first) {
            return Err(EngineError::Integrity(format!("radio transmitter {from} used more than one value in a round")));
        }
        let copies = |to: NodeId| {
            let mut v: Vec<Payload> = outbox.iter().filter(|o| o.to == to).map(|o| o.payload).collect();
            v.sort();
            v
        };
        let mut recipients = outs.iter();
        let reference = copies(recipients.next().expect("non-empty outbox implies out-neighbors"));
        if recipients.any(|to| copies(to) != reference) {
            return Err(EngineError::Integrity(format!(
                "radio transmitter {from} delivered non-identical copies"
            )));
        }
    }
    Ok(())
}

/// Runs a synchronous scenario with full trace recording.
pub fn run_sync(scn: &Scenario) -> Result<Execution, EngineError> {
    run_sync_with(scn, Record::Full)
}

pub fn run_sync_with(scn: &Scenario, record: Record) -> Result<Execution, EngineError> {
    scn.validate()?;
    if scn.protocol.is_async() {
        return Err(EngineError::InvalidScenario("asynchronous CPA runs under run_async".into()));
    }
    let g = &scn.graph;
    let n = g.n();
    let src = g.source();
    let mut rec = Recorder {
        on: record == Record::Full,
        events: Vec::new(),
    };

    let mut honest: Vec<Option<NodeState>> = vec![None; n];
    let mut faulty: Vec<Option<FaultyNode>> = vec![None; n];
    for v in g.nodes_iter() {
        if let Some(s) = scn.strategies.get(&v) {
            faulty[v.0] = Some(FaultyNode::new(g, v, s.clone(), &scn.protocol));
        } else if v == src && scn.source_fault.is_some() {
            let s = scn.source_fault.clone().expect("checked");
            faulty[v.0] = Some(FaultyNode::new(g, v, s, &scn.protocol));
        } else {
            let input = (v == src).then_some(scn.source_input);
            honest[v.0] = Some(NodeState::new(g, v, scn.protocol.clone(), input));
        }
    }
    if let Some(s) = honest[src.0].as_ref() {
        rec.push(0, src, EventKind::Committed, None, s.committed.map(Payload::plain));
    }

    let horizon = scn.horizon();
    let mut halt = Halt::Horizon;
    let mut rounds = 0;
    let mut sends: Vec<(NodeId, NodeId, Payload)> = Vec::new();
    let mut inboxes: Vec<Vec<Message>> = vec![Vec::new(); n];
    for round in 1..=horizon {
        if honest.iter().flatten().all(|s| s.terminated) {
            halt = Halt::Quiescent;
            break;
        }
        rounds = round;
        sends.clear();
        for v in g.nodes_iter() {
            if let Some(st) = honest[v.0].as_mut() {
                let was_done = st.terminated;
                for p in st.emit(round) {
                    for to in g.outs(v) {
                        sends.push((v, to, p));
                    }
                }
                if st.terminated && !was_done {
                    rec.push(round, v, EventKind::Terminated, None, None);
                }
            } else if let Some(fnode) = faulty[v.0].as_mut() {
                let outbox = fnode.adversary_outbox(round);
                check_faulty_outbox(g, v, &outbox, scn.delivery)?;
                sends.extend(outbox.into_iter().map(|o| (v, o.to, o.payload)));
            }
        }
        for inbox in inboxes.iter_mut() {
            inbox.clear();
        }
        for &(from, to, p) in &sends {
            rec.push(round, from, EventKind::Sent, Some(to), Some(p));
        }
        for &(from, to, p) in &sends {
            rec.push(round, to, EventKind::Delivered, Some(from), Some(p));
            inboxes[to.0].push(Message::new(from, p));
        }
        for v in g.nodes_iter() {
            if let Some(st) = honest[v.0].as_mut() {
                let was_done = st.terminated;
                if let Some(x) = st.receive(round, &inboxes[v.0])? {
                    rec.push(round, v, EventKind::Committed, None, Some(Payload::plain(x)));
                }
                if st.terminated && !was_done {
                    rec.push(round, v, EventKind::Terminated, None, None);
                }
            } else if let Some(fnode) = faulty[v.0].as_mut() {
                fnode.observe(round, &inboxes[v.0])?;
            }
        }
    }
    if rounds == horizon && honest.iter().flatten().all(|s| s.terminated) {
        halt = Halt::Quiescent;
    }

    let commits = honest
        .iter()
        .map(|s| {
            s.as_ref().and_then(|s| {
                s.committed.map(|value: Value| Commit {
                    value,
                    round: s.commit_round.expect("commit has a round"),
                })
            })
        })
        .collect();
    let trace = ExecutionTrace {
        events: rec.events,
        commits,
        halt,
        steps: rounds,
        anomaly: honest.iter().flatten().any(|s| s.anomaly),
    };
    let verdict = evaluate(&trace, scn);
    Ok(Execution {
        trace,
        verdict,
        states: honest,
    })
}
