//! Radio broadcast: every transmission reaches all out-neighbors alike.
//! A silent source makes everyone settle on the default value.

use cpa::adversary::Strategy;
use cpa::engine::{run_sync, Scenario};
use cpa::graph::{generate, GraphKind};
use cpa::protocol::{ProtocolKind, Value};

fn main() {
    let g = generate(GraphKind::Complete { n: 5 }, 0).unwrap();
    let honest = Scenario::honest(g.clone(), ProtocolKind::RadioBb { f: 1 }, Value::Data(3));
    let mut silent = honest.clone();
    silent.source_fault = Some(Strategy::SilentSource);
    for (name, scn) in [("honest source", honest), ("silent source", silent)] {
        let ex = run_sync(&scn).unwrap();
        println!("{name}: {:?}", ex.verdict.agreement);
    }
}
