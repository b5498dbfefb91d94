//! Fault domains instead of a numeric bound. Node 4 hears from 1, 2 and 3.
//! If 1 and 2 may fail together, their lie is indistinguishable from the
//! truth relayed by 3 alone, and node 4 never commits.

use cpa::adversary::Strategy;
use cpa::condition::check_condition;
use cpa::engine::{run_sync, Scenario};
use cpa::graph::{Digraph, FaultDomain, FaultModel, NodeId, NodeSet};
use cpa::protocol::{ProtocolKind, Value};

fn set(ids: &[usize]) -> NodeSet {
    ids.iter().map(|&i| NodeId(i)).collect()
}

fn main() {
    let edges = [(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)];
    let g = Digraph::new(5, NodeId(0), edges.iter().map(|&(a, b)| (NodeId(a), NodeId(b)))).unwrap();
    let domains = [
        ("singletons", FaultDomain::new([set(&[1]), set(&[2]), set(&[3])])),
        ("{1,2} together", FaultDomain::new([set(&[1, 2]), set(&[3])])),
    ];
    for (name, domain) in domains {
        let report = check_condition(&g, &FaultModel::generalized(domain.clone())).unwrap();
        // the largest allowed coalition containing node 1 lies
        let coalition = domain.sets.iter().filter(|s| s.contains(NodeId(1))).max_by_key(|s| s.len()).copied().unwrap();
        let mut scn = Scenario::honest(g.clone(), ProtocolKind::CpaG { domain }, Value::Data(1));
        for v in coalition {
            scn = scn.with_fault(v, Strategy::FixedValue { value: Value::Data(0) });
        }
        let ex = run_sync(&scn).unwrap();
        println!("{name}: condition holds = {}; faulty {coalition}: {:?}", report.holds, ex.verdict.termination);
    }
}
