//! Writes a small seeded corpus of random digraphs to a temp directory,
//! tagged with the largest f each tolerates.

use cpa::condition::max_tolerable_f;
use cpa::graph::{generate, serialize_graph, GraphKind};

fn main() {
    let dir = std::env::temp_dir().join("cpa-corpus");
    std::fs::create_dir_all(&dir).unwrap();
    for seed in 0..6 {
        let g = generate(GraphKind::RandomDigraph { n: 7, p: 0.6 }, seed).unwrap();
        let path = dir.join(format!("random_{seed}.json"));
        std::fs::write(&path, serialize_graph(&g)).unwrap();
        println!("{}  edges={} max_f={}", path.display(), g.edge_count(), max_tolerable_f(&g).f);
    }
}
