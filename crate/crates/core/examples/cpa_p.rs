//! The parameter-free variant: no fault bound is given to the protocol.
//! Shows each node's decision and its per-tag estimate vector.

use cpa::adversary::Strategy;
use cpa::engine::{run_sync, Scenario};
use cpa::graph::{Digraph, NodeId};
use cpa::protocol::{ProtocolKind, Value};

fn main() {
    // node i hears the source or its three predecessors
    let edges = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (1, 4), (2, 4), (3, 4), (2, 5), (3, 5), (4, 5)];
    let g = Digraph::new(6, NodeId(0), edges.iter().map(|&(a, b)| (NodeId(a), NodeId(b)))).unwrap();
    let scn = Scenario::honest(g, ProtocolKind::CpaP, Value::Data(1))
        .with_fault(NodeId(3), Strategy::FixedValue { value: Value::Data(0) });
    let ex = run_sync(&scn).unwrap();
    for (i, st) in ex.states.iter().enumerate() {
        let Some(st) = st else {
            println!("node {i}: faulty");
            continue;
        };
        let vec = st
            .vec
            .as_ref()
            .map(|v| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
            .unwrap_or_else(|| "-".into());
        println!("node {i}: output {:?}  v = [{vec}]", st.committed);
    }
    println!("{:?}", ex.verdict);
}
