#![allow(dead_code)]

pub mod golden;

use cpa::graph::{generate, Digraph, GraphKind, NodeId};

pub struct Entry {
    pub name: String,
    pub graph: Digraph,
}

fn edges(n: usize, list: &[(usize, usize)]) -> Digraph {
    Digraph::new(n, NodeId(0), list.iter().map(|&(a, b)| (NodeId(a), NodeId(b)))).unwrap()
}

/// Hand-built graphs where some nodes are two or more hops from the source.
pub fn layered() -> Vec<Entry> {
    let mut out = vec![
        Entry {
            name: "fan_in5".into(),
            graph: edges(5, &[(0, 1), (0, 2), (1, 3), (2, 3), (4, 3)]),
        },
        Entry {
            // three relays feed two sinks
            name: "two_layer6".into(),
            graph: edges(6, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4), (1, 5), (2, 5), (3, 5)]),
        },
        Entry {
            // a chain of triangles: each node hears from the previous three
            name: "band6".into(),
            graph: edges(
                6,
                &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (1, 4), (2, 4), (3, 4), (2, 5), (3, 5), (4, 5)],
            ),
        },
        Entry {
            name: "diamond4".into(),
            graph: edges(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]),
        },
        Entry {
            name: "path4".into(),
            graph: edges(4, &[(0, 1), (1, 2), (2, 3)]),
        },
    ];
    // bidirected versions exercise back edges into the source
    let bidir = |name: &str, g: &Digraph| {
        let mut h = g.clone();
        for (a, b) in g.edges() {
            if !h.has_edge(b, a) {
                h.add_edge(b, a).unwrap();
            }
        }
        Entry {
            name: format!("{name}_bidir"),
            graph: h,
        }
    };
    let extra: Vec<Entry> = out.iter().take(3).map(|e| bidir(&e.name, &e.graph)).collect();
    out.extend(extra);
    out
}

/// Desk-scale corpus: generator families, seeded random digraphs and the
/// layered graphs above.
pub fn corpus() -> Vec<Entry> {
    let mut out = Vec::new();
    let mut push = |kind: GraphKind, seed: u64, name: String| {
        out.push(Entry {
            name,
            graph: generate(kind, seed).unwrap(),
        })
    };
    for n in 3..=5 {
        push(GraphKind::Complete { n }, 0, format!("complete{n}"));
        push(GraphKind::Ring { n }, 0, format!("ring{n}"));
        push(GraphKind::Star { n }, 0, format!("star{n}"));
    }
    push(GraphKind::GridTorus { rows: 2, cols: 2 }, 0, "torus2x2".into());
    push(GraphKind::GridTorus { rows: 2, cols: 3 }, 0, "torus2x3".into());
    push(GraphKind::GridTorus { rows: 3, cols: 3 }, 0, "torus3x3".into());
    for n in 4..=6 {
        for p in [0.5, 0.8] {
            for seed in 0..4 {
                push(GraphKind::RandomDigraph { n, p }, seed, format!("random_n{n}_p{p}_s{seed}"));
            }
        }
    }
    out.extend(layered());
    out
}

/// Small seeded fault domains over the non-source nodes: one to three
/// members of one or two nodes each.
pub fn random_domains(g: &Digraph, seed: u64, count: usize) -> Vec<cpa::graph::FaultDomain> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let others: Vec<NodeId> = g.nodes_iter().filter(|v| *v != g.source()).collect();
    if others.is_empty() {
        return Vec::new();
    }
    (0..count)
        .map(|_| {
            let members = rng.gen_range(1..=3);
            cpa::graph::FaultDomain::new((0..members).map(|_| {
                let size = rng.gen_range(1..=2.min(others.len()));
                let mut s = cpa::graph::NodeSet::empty();
                while s.len() < size {
                    s.insert(others[rng.gen_range(0..others.len())]);
                }
                s
            }))
        })
        .collect()
}
