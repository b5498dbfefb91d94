//! Largest local fault bound each generator family tolerates.

use cpa::condition::max_tolerable_f;
use cpa::graph::{generate, GraphKind};

fn main() {
    let kinds = [
        GraphKind::Star { n: 6 },
        GraphKind::Ring { n: 6 },
        GraphKind::Complete { n: 6 },
        GraphKind::GridTorus { rows: 3, cols: 3 },
        GraphKind::RandomDigraph { n: 7, p: 0.7 },
    ];
    for kind in kinds {
        let g = generate(kind.clone(), 1).unwrap();
        let m = max_tolerable_f(&g);
        let shown = if m.all_f { "any".to_string() } else { m.f.to_string() };
        println!("{kind:?}: max f = {shown}");
    }
}
