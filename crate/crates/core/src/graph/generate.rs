use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Digraph, GraphError, NodeId};

/// Generator families. Node 0 is always the source.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GraphKind {
    /// Every ordered pair of distinct nodes.
    Complete { n: usize },
    /// `0 -> 1 -> ... -> n-1 -> 0`.
    Ring { n: usize },
    /// `0 -> i` for every other node.
    Star { n: usize },
    /// Bidirected 4-neighbour torus, row-major ids.
    GridTorus { rows: usize, cols: usize },
    /// Each ordered pair independently with probability `p`.
    RandomDigraph { n: usize, p: f64 },
}

/// Deterministic in `(kind, seed)`; only `RandomDigraph` consumes the seed.
pub fn generate(kind: GraphKind, seed: u64) -> Result<Digraph, GraphError> {
    let src = NodeId(0);
    match kind {
        GraphKind::Complete { n } => {
            let mut g = Digraph::empty(n, src)?;
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        g.add_edge(NodeId(i), NodeId(j))?;
                    }
                }
            }
            Ok(g)
        }
        GraphKind::Ring { n } => {
            let mut g = Digraph::empty(n, src)?;
            for i in 0..n {
                let j = (i + 1) % n;
                if !g.has_edge(NodeId(i), NodeId(j)) {
                    g.add_edge(NodeId(i), NodeId(j))?;
                }
            }
            Ok(g)
        }
        GraphKind::Star { n } => {
            let mut g = Digraph::empty(n, src)?;
            for i in 1..n {
                g.add_edge(src, NodeId(i))?;
            }
            Ok(g)
        }
        GraphKind::GridTorus { rows, cols } => {
            if rows == 0 || cols == 0 {
                return Err(GraphError::InvalidParams(format!(
                    "grid_torus needs positive dimensions, got {rows}x{cols}"
                )));
            }
            let mut g = Digraph::empty(rows * cols, src)?;
            for r in 0..rows {
                for c in 0..cols {
                    let me = NodeId(r * cols + c);
                    let nbrs = [
                        ((r + 1) % rows) * cols + c,
                        ((r + rows - 1) % rows) * cols + c,
                        r * cols + (c + 1) % cols,
                        r * cols + (c + cols - 1) % cols,
                    ];
                    for other in nbrs.map(NodeId) {
                        if other != me && !g.has_edge(me, other) {
                            g.add_edge(me, other)?;
                        }
                    }
                }
            }
            Ok(g)
        }
        GraphKind::RandomDigraph { n, p } => {
            if !(0.0..=1.0).contains(&p) {
                return Err(GraphError::InvalidParams(format!(
                    "edge probability must lie in [0,1], got {p}"
                )));
            }
            let mut g = Digraph::empty(n, src)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for i in 0..n {
                for j in 0..n {
                    if i != j && rng.gen::<f64>() < p {
                        g.add_edge(NodeId(i), NodeId(j))?;
                    }
                }
            }
            Ok(g)
        }
    }
}
