//! Decide whether broadcast is possible on a few graphs, and print the
//! blocking partition when it is not.

use cpa::condition::check_condition;
use cpa::graph::{generate, FaultModel, GraphKind};

fn main() {
    let graphs = [
        ("ring of 4", GraphKind::Ring { n: 4 }),
        ("complete on 4", GraphKind::Complete { n: 4 }),
        ("3x3 torus", GraphKind::GridTorus { rows: 3, cols: 3 }),
    ];
    for (name, kind) in graphs {
        let g = generate(kind, 0).unwrap();
        for f in 0..=2 {
            let report = check_condition(&g, &FaultModel::f_local(f)).unwrap();
            match report.witness {
                None => println!("{name}, f={f}: holds"),
                Some(w) => println!("{name}, f={f}: fails  F={} L={} R={}", w.faulty, w.left, w.right),
            }
        }
    }
}
