//! One synchronous CPA run on K4 with a node that relays the wrong value.
//! Prints the JSON-lines trace and the verdict.

use cpa::adversary::Strategy;
use cpa::engine::{run_sync, Scenario};
use cpa::graph::{generate, GraphKind, NodeId};
use cpa::protocol::{ProtocolKind, Value};

fn main() {
    let g = generate(GraphKind::Complete { n: 4 }, 0).unwrap();
    let scn = Scenario::honest(g, ProtocolKind::Cpa { f: 1 }, Value::Data(1))
        .with_fault(NodeId(2), Strategy::FollowProtocol { input_override: Value::Data(0) });
    let ex = run_sync(&scn).unwrap();
    print!("{}", ex.trace.to_text());
    println!("{:?}", ex.verdict);
}
