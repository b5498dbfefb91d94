//! Event-driven CPA under many fair schedules. The verdict should not depend
//! on the seed.

use std::collections::BTreeMap;

use cpa::adversary::Strategy;
use cpa::engine::{run_async_with, Record, Scenario, Schedule};
use cpa::graph::{generate, GraphKind, NodeId};
use cpa::protocol::{ProtocolKind, Value};

fn main() {
    let g = generate(GraphKind::Complete { n: 5 }, 0).unwrap();
    let scn = Scenario::honest(g, ProtocolKind::AsyncCpa { f: 1 }, Value::Data(1))
        .with_fault(NodeId(4), Strategy::FixedValue { value: Value::Data(0) });
    let mut tally: BTreeMap<String, u32> = BTreeMap::new();
    let mut steps = Vec::new();
    for seed in 0..200 {
        let ex = run_async_with(&scn, &Schedule::seeded(seed), Record::Off).unwrap();
        *tally.entry(format!("{:?} / {:?}", ex.verdict.termination.stuck(), ex.verdict.validity)).or_default() += 1;
        steps.push(ex.trace.steps);
    }
    println!("stuck / validity: {tally:?}");
    println!("delivery events: min {} max {}", steps.iter().min().unwrap(), steps.iter().max().unwrap());
}
