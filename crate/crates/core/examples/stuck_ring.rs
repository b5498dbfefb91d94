//! CPA on a ring with one crashed node: everything behind the crash waits
//! forever, exactly the R side of the blocking partition.

use cpa::adversary::Strategy;
use cpa::condition::check_condition;
use cpa::engine::{run_sync, Scenario};
use cpa::graph::{generate, FaultModel, GraphKind};
use cpa::protocol::{ProtocolKind, Value};

fn main() {
    let g = generate(GraphKind::Ring { n: 5 }, 0).unwrap();
    let w = check_condition(&g, &FaultModel::f_local(1)).unwrap().witness.unwrap();
    let mut scn = Scenario::honest(g, ProtocolKind::Cpa { f: 1 }, Value::Data(7));
    for v in w.faulty {
        scn = scn.with_fault(v, Strategy::Crash { from_round: 0 });
    }
    let ex = run_sync(&scn).unwrap();
    println!("witness R = {}", w.right);
    println!("stuck     = {}", ex.verdict.termination.stuck());
}
