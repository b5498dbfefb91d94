//! Directed communication topology, fault models and fault-set feasibility.
//!
//! A [`Digraph`] is a simple directed graph on nodes `0..n` with a designated
//! source. Self-loops and duplicate edges are rejected at construction. Fault
//! sets never contain the source in broadcast contexts; callers pass
//! `exclude_source = true` to [`enumerate_feasible_fault_sets`] for that.

mod format;
mod generate;
mod nodeset;

pub use format::{parse_fault_domain, parse_graph, serialize_fault_domain, serialize_graph, GraphFile};
pub(crate) use format::json_message;
pub use generate::{generate, GraphKind};
pub use nodeset::{Iter as NodeSetIter, NodeId, NodeSet, MAX_NODES};

pub(crate) use nodeset::{subsets_canonical, Combinations};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph needs at least 2 nodes, got {0}")]
    TooFewNodes(usize),
    #[error("graph has {0} nodes; at most {MAX_NODES} are supported")]
    TooManyNodes(usize),
    #[error("node {node} out of range for a graph with {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },
    #[error("self-loop ({0},{0}) is not allowed")]
    SelfLoop(usize),
    #[error("duplicate edge ({0},{1})")]
    DuplicateEdge(usize, usize),
    #[error("{location}: {message}")]
    Parse { location: String, message: String },
    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),
}

/// A simple directed graph `G(V, E)` with designated source `s`.
#[derive(Clone, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    source: NodeId,
    out: Vec<NodeSet>,
    inn: Vec<NodeSet>,
}

impl Digraph {
    pub fn new(
        n: usize,
        source: NodeId,
        edges: impl IntoIterator<Item = (NodeId, NodeId)>,
    ) -> Result<Self, GraphError> {
        let mut g = Digraph::empty(n, source)?;
        for (a, b) in edges {
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    /// Graph on `n` nodes with no edges.
    pub fn empty(n: usize, source: NodeId) -> Result<Self, GraphError> {
        if n < 2 {
            return Err(GraphError::TooFewNodes(n));
        }
        if n > MAX_NODES {
            return Err(GraphError::TooManyNodes(n));
        }
        if source.0 >= n {
            return Err(GraphError::NodeOutOfRange { node: source.0, n });
        }
        Ok(Digraph {
            n,
            source,
            out: vec![NodeSet::empty(); n],
            inn: vec![NodeSet::empty(); n],
        })
    }

    /// Build from adjacency bitmask over ordered pairs `(i, j)`, `i != j`,
    /// enumerated row-major. Used for exhaustive corpora.
    pub fn from_pair_mask(n: usize, source: NodeId, mask: u64) -> Result<Self, GraphError> {
        if n * n.saturating_sub(1) > 64 {
            return Err(GraphError::InvalidParams(format!(
                "pair mask covers at most 8 nodes, got {n}"
            )));
        }
        let mut g = Digraph::empty(n, source)?;
        let mut bit = 0;
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                if mask & (1 << bit) != 0 {
                    g.add_edge(NodeId(i), NodeId(j))?;
                }
                bit += 1;
            }
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, from: NodeId, to: NodeId) -> Result<(), GraphError> {
        self.check(from)?;
        self.check(to)?;
        if from == to {
            return Err(GraphError::SelfLoop(from.0));
        }
        if self.out[from.0].contains(to) {
            return Err(GraphError::DuplicateEdge(from.0, to.0));
        }
        self.out[from.0].insert(to);
        self.inn[to.0].insert(from);
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn source(&self) -> NodeId {
        self.source
    }

    pub fn nodes(&self) -> NodeSet {
        NodeSet::full(self.n)
    }

    pub fn nodes_iter(&self) -> impl Iterator<Item = NodeId> {
        (0..self.n).map(NodeId)
    }

    pub fn contains_node(&self, v: NodeId) -> bool {
        v.0 < self.n
    }

    pub fn check(&self, v: NodeId) -> Result<(), GraphError> {
        if v.0 < self.n {
            Ok(())
        } else {
            Err(GraphError::NodeOutOfRange { node: v.0, n: self.n })
        }
    }

    pub fn check_set(&self, s: NodeSet) -> Result<(), GraphError> {
        match s.max() {
            Some(v) => self.check(v),
            None => Ok(()),
        }
    }

    /// `N⁻(v)`: nodes with an edge into `v`.
    pub fn in_neighbors(&self, v: NodeId) -> Result<NodeSet, GraphError> {
        self.check(v)?;
        Ok(self.inn[v.0])
    }

    /// `N⁺(v)`: nodes `v` has an edge to.
    pub fn out_neighbors(&self, v: NodeId) -> Result<NodeSet, GraphError> {
        self.check(v)?;
        Ok(self.out[v.0])
    }

    /// Unchecked in-neighborhood; panics if `v` is out of range.
    pub fn ins(&self, v: NodeId) -> NodeSet {
        self.inn[v.0]
    }

    /// Unchecked out-neighborhood; panics if `v` is out of range.
    pub fn outs(&self, v: NodeId) -> NodeSet {
        self.out[v.0]
    }

    /// `N⁻(B)`: nodes outside `b` with an edge into some node of `b`.
    pub fn in_neighbors_of_set(&self, b: NodeSet) -> NodeSet {
        b.iter()
            .fold(NodeSet::empty(), |acc, v| acc.union(self.inn[v.0]))
            .difference(b)
    }

    pub fn has_edge(&self, from: NodeId, to: NodeId) -> bool {
        from.0 < self.n && self.out[from.0].contains(to)
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> Vec<(NodeId, NodeId)> {
        self.nodes_iter()
            .flat_map(|a| self.out[a.0].iter().map(move |b| (a, b)))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().map(|s| s.len()).sum()
    }

    /// Nodes reachable from the source by directed paths (source included).
    pub fn reachable_from_source(&self) -> NodeSet {
        let mut seen = NodeSet::singleton(self.source);
        let mut frontier = seen;
        while !frontier.is_empty() {
            let next = frontier
                .iter()
                .fold(NodeSet::empty(), |acc, v| acc.union(self.out[v.0]))
                .difference(seen);
            seen = seen.union(next);
            frontier = next;
        }
        seen
    }
}

impl std::fmt::Debug for Digraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", serialize_graph(self))
    }
}

/// Explicit fault domain: the family of maximal corruptible node sets.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaultDomain {
    pub sets: Vec<NodeSet>,
}

impl FaultDomain {
    pub fn new(sets: impl IntoIterator<Item = NodeSet>) -> Self {
        FaultDomain {
            sets: sets.into_iter().collect(),
        }
    }

    /// `{F ⊆ V : |F| ≤ f}`, listed through its maximal members.
    pub fn cardinality(n: usize, f: usize) -> Self {
        let k = f.min(n);
        FaultDomain::new(Combinations::new(NodeSet::full(n), k))
    }

    /// Subset-of-some-member test. An empty domain admits only the empty set.
    pub fn admits(&self, s: NodeSet) -> bool {
        s.is_empty() || self.sets.iter().any(|m| s.is_subset(*m))
    }
}

/// Which node sets may be faulty.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FaultModel {
    /// At most `f` faulty in-neighbors at every fault-free node.
    FLocal { f: usize },
    Generalized { domain: FaultDomain },
}

impl FaultModel {
    pub fn f_local(f: usize) -> Self {
        FaultModel::FLocal { f }
    }

    pub fn generalized(domain: FaultDomain) -> Self {
        FaultModel::Generalized { domain }
    }

    pub fn validate(&self, g: &Digraph) -> Result<(), GraphError> {
        if let FaultModel::Generalized { domain } = self {
            for s in &domain.sets {
                g.check_set(*s)?;
            }
        }
        Ok(())
    }
}

/// Whether `faulty` is a feasible fault set under `model`.
pub fn is_feasible(g: &Digraph, model: &FaultModel, faulty: NodeSet) -> Result<bool, GraphError> {
    g.check_set(faulty)?;
    Ok(feasible_unchecked(g, model, faulty))
}

pub(crate) fn feasible_unchecked(g: &Digraph, model: &FaultModel, faulty: NodeSet) -> bool {
    match model {
        FaultModel::FLocal { f } => g
            .nodes()
            .difference(faulty)
            .iter()
            .all(|v| g.ins(v).intersection(faulty).len() <= *f),
        FaultModel::Generalized { domain } => domain.admits(faulty),
    }
}

/// Lazily yields the feasible fault sets in canonical order
/// (cardinality, then lexicographic). The empty set always comes first.
pub fn feasible_fault_sets<'a>(
    g: &'a Digraph,
    model: &'a FaultModel,
    exclude_source: bool,
) -> impl Iterator<Item = NodeSet> + 'a {
    let mut pool = g.nodes();
    if exclude_source {
        pool.remove(g.source());
    }
    subsets_canonical(pool).filter(move |s| feasible_unchecked(g, model, *s))
}

/// Every feasible fault set, in canonical order. Exponential in `n`.
pub fn enumerate_feasible_fault_sets(
    g: &Digraph,
    model: &FaultModel,
    exclude_source: bool,
) -> Vec<NodeSet> {
    feasible_fault_sets(g, model, exclude_source).collect()
}
