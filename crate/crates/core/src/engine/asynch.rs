use std::collections::{BTreeMap, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{evaluate, Commit, EngineError, EventKind, Execution, ExecutionTrace, Halt, Record, Scenario, TraceEvent};
use crate::adversary::{FaultyNode, Outgoing};
use crate::graph::NodeId;
use crate::protocol::{Message, NodeState, Payload};

/// Fair schedules force delivery of the oldest in-flight message once it has
/// waited `DEFAULT_DELAY_FACTOR × (messages in flight)` delivery events.
pub const DEFAULT_DELAY_FACTOR: u32 = 2;

fn default_delay_factor() -> u32 {
    DEFAULT_DELAY_FACTOR
}

/// Order in which in-flight messages are delivered.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Schedule {
    /// Each entry names a link; its oldest pending message is delivered.
    Explicit { order: Vec<(NodeId, NodeId)> },
    /// Uniformly random link choice, with forced delivery of the oldest
    /// message once its age reaches `delay_factor × in-flight count`.
    SeededFair {
        seed: u64,
        #[serde(default = "default_delay_factor")]
        delay_factor: u32,
    },
}

impl Schedule {
    pub fn seeded(seed: u64) -> Self {
        Schedule::SeededFair {
            seed,
            delay_factor: DEFAULT_DELAY_FACTOR,
        }
    }
}

struct Network {
    links: BTreeMap<(NodeId, NodeId), VecDeque<(Payload, u32)>>,
    in_flight: usize,
    events: Option<Vec<TraceEvent>>,
}

impl Network {
    fn send(&mut self, step: u32, from: NodeId, to: NodeId, p: Payload) {
        self.links.entry((from, to)).or_default().push_back((p, step));
        self.in_flight += 1;
        self.log(step, from, EventKind::Sent, Some(to), Some(p));
    }

    fn log(&mut self, step: u32, node: NodeId, event: EventKind, peer: Option<NodeId>, p: Option<Payload>) {
        if let Some(events) = self.events.as_mut() {
            events.push(TraceEvent {
                round: step,
                node,
                event,
                peer,
                value: p.map(|p| p.value),
                tag: p.and_then(|p| p.tag),
            });
        }
    }

    fn oldest(&self) -> Option<((NodeId, NodeId), u32)> {
        self.links
            .iter()
            .filter_map(|(k, q)| q.front().map(|(_, sent)| (*k, *sent)))
            .min_by_key(|(k, sent)| (*sent, *k))
    }
}

/// Runs an asynchronous CPA scenario with the scenario's schedule, or a
/// seeded fair schedule from `scn.seed` when none is given.
pub fn run_async(scn: &Scenario) -> Result<Execution, EngineError> {
    let schedule = scn.schedule.clone().unwrap_or(Schedule::seeded(scn.seed));
    run_async_with(scn, &schedule, Record::Full)
}

/// Event loop: one delivery per step until nothing is in flight, the event
/// cap `10·n²` is hit, or an explicit schedule runs out.
pub fn run_async_with(scn: &Scenario, schedule: &Schedule, record: Record) -> Result<Execution, EngineError> {
    scn.validate()?;
    if !scn.protocol.is_async() {
        return Err(EngineError::InvalidScenario("run_async requires asynchronous CPA".into()));
    }
    let g = &scn.graph;
    let n = g.n();
    let src = g.source();
    let cap = 10 * (n as u32) * (n as u32);
    let mut net = Network {
        links: BTreeMap::new(),
        in_flight: 0,
        events: (record == Record::Full).then(Vec::new),
    };

    let mut honest: Vec<Option<NodeState>> = vec![None; n];
    let mut faulty: Vec<Option<FaultyNode>> = vec![None; n];
    for v in g.nodes_iter() {
        match scn.strategies.get(&v) {
            Some(s) => faulty[v.0] = Some(FaultyNode::new(g, v, s.clone(), &scn.protocol)),
            None => {
                let input = (v == src).then_some(scn.source_input);
                honest[v.0] = Some(NodeState::new(g, v, scn.protocol.clone(), input));
            }
        }
    }

    let emit_faulty = |net: &mut Network, step: u32, from: NodeId, out: Vec<Outgoing>| -> Result<(), EngineError> {
        for o in out {
            if !g.outs(from).contains(o.to) || o.payload.value.is_null() {
                return Err(EngineError::Integrity(format!("node {from} produced an invalid message to {}", o.to)));
            }
            net.send(step, from, o.to, o.payload);
        }
        Ok(())
    };

    // step 0: the source commits and sends, non-reactive adversaries fire
    for v in g.nodes_iter() {
        if let Some(st) = honest[v.0].as_mut() {
            if let Some(x) = st.committed {
                net.log(0, v, EventKind::Committed, None, Some(Payload::plain(x)));
            }
            let out = st.start();
            for p in out {
                for to in g.outs(v) {
                    net.send(0, v, to, p);
                }
            }
            if st.terminated {
                net.log(0, v, EventKind::Terminated, None, None);
            }
        } else if let Some(fnode) = faulty[v.0].as_mut() {
            let out = fnode.start_async();
            emit_faulty(&mut net, 0, v, out)?;
        }
    }

    let mut rng = match schedule {
        Schedule::SeededFair { seed, .. } => Some(ChaCha8Rng::seed_from_u64(*seed)),
        Schedule::Explicit { .. } => None,
    };
    let mut explicit = match schedule {
        Schedule::Explicit { order } => Some(order.iter()),
        Schedule::SeededFair { .. } => None,
    };
    let mut step = 0u32;
    let halt = loop {
        if net.in_flight == 0 {
            break Halt::Quiescent;
        }
        if step >= cap {
            break Halt::EventCap;
        }
        let link = match (&mut explicit, schedule) {
            (Some(order), _) => match order.next() {
                None => break Halt::ScheduleExhausted,
                Some(&link) => {
                    if net.links.get(&link).map_or(true, |q| q.is_empty()) {
                        return Err(EngineError::Schedule(format!(
                            "step {}: link {}->{} has nothing in flight",
                            step + 1,
                            link.0,
                            link.1
                        )));
                    }
                    link
                }
            },
            (None, Schedule::SeededFair { delay_factor, .. }) => {
                let (oldest, sent) = net.oldest().expect("in_flight > 0");
                let bound = delay_factor * net.in_flight as u32;
                if step - sent >= bound {
                    oldest
                } else {
                    let busy: Vec<(NodeId, NodeId)> = net
                        .links
                        .iter()
                        .filter(|(_, q)| !q.is_empty())
                        .map(|(k, _)| *k)
                        .collect();
                    let rng = rng.as_mut().expect("seeded schedule has an rng");
                    busy[rng.gen_range(0..busy.len())]
                }
            }
            (None, Schedule::Explicit { .. }) => unreachable!("explicit schedules carry an iterator"),
        };
        step += 1;
        let (p, _) = net
            .links
            .get_mut(&link)
            .and_then(|q| q.pop_front())
            .expect("chosen link is non-empty");
        net.in_flight -= 1;
        let (from, to) = link;
        net.log(step, to, EventKind::Delivered, Some(from), Some(p));
        let msg = Message::new(from, p);
        if let Some(st) = honest[to.0].as_mut() {
            let was_committed = st.committed.is_some();
            let out = st.on_deliver(step, &msg)?;
            if !was_committed {
                if let Some(x) = st.committed {
                    net.log(step, to, EventKind::Committed, None, Some(Payload::plain(x)));
                }
            }
            for p in &out {
                for next in g.outs(to) {
                    net.send(step, to, next, *p);
                }
            }
            if !out.is_empty() {
                net.log(step, to, EventKind::Terminated, None, None);
            }
        } else if let Some(fnode) = faulty[to.0].as_mut() {
            let out = fnode.on_deliver_async(step, &msg)?;
            emit_faulty(&mut net, step, to, out)?;
        }
    };

    let commits = honest
        .iter()
        .map(|s| {
            s.as_ref().and_then(|s| {
                s.committed.map(|value| Commit {
                    value,
                    round: s.commit_round.expect("commit has a step"),
                })
            })
        })
        .collect();
    let trace = ExecutionTrace {
        events: net.events.unwrap_or_default(),
        commits,
        halt,
        steps: step,
        anomaly: honest.iter().flatten().any(|s| s.anomaly),
    };
    let verdict = evaluate(&trace, scn);
    Ok(Execution {
        trace,
        verdict,
        states: honest,
    })
}
