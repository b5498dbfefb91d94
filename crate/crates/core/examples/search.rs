//! Exhaustive adversary search. On the ring it finds a counterexample
//! scenario and prints it as a replayable file; on K4 it finds none.

use cpa::engine::{search_violation, SearchConfig, SearchOutcome};
use cpa::graph::{generate, FaultModel, GraphKind};
use cpa::protocol::ProtocolKind;

fn main() {
    let config = SearchConfig {
        depth_bound: 2,
        ..SearchConfig::default()
    };
    for kind in [GraphKind::Ring { n: 4 }, GraphKind::Complete { n: 4 }] {
        let g = generate(kind.clone(), 0).unwrap();
        let out = search_violation(&g, &FaultModel::f_local(1), &ProtocolKind::Cpa { f: 1 }, &config).unwrap();
        match out {
            SearchOutcome::Violation { scenario, scenarios_run, .. } => {
                println!("{kind:?}: violation after {scenarios_run} runs");
                println!("{}", serde_json::to_string_pretty(&scenario).unwrap());
            }
            other => println!("{kind:?}: {}", serde_json::to_string(&other).unwrap()),
        }
    }
}
