//! Decision procedures for the tight topology condition.
//!
//! The condition: for every partition `(F, L, R)` of the nodes with the source
//! in `L`, `R` non-empty and `F` a feasible fault set, either some node of `R`
//! has more than `f` in-neighbors in `L` (`L ⇒ R`) or `R` contains an
//! out-neighbor of the source.
//!
//! [`check_condition`] is the production path: for each feasible `F` it grows
//! the commit closure from the source and reports the first `F` whose closure
//! misses a fault-free node. [`check_condition_bruteforce`] enumerates the
//! partitions directly and serves as an independent oracle.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{feasible_fault_sets, subsets_canonical, Digraph, FaultDomain, FaultModel, GraphError, NodeSet};

/// Default node bound for the partition enumerator.
pub const BRUTEFORCE_DEFAULT_BOUND: usize = 10;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConditionError {
    #[error("sets must be non-empty: {0}")]
    EmptySet(&'static str),
    #[error("sets must be disjoint; both contain {0}")]
    Overlap(NodeSet),
    #[error("the source {0} cannot be in the fault set")]
    SourceInFaultSet(usize),
    #[error("partition enumeration refused: graph has {n} nodes, bound is {bound}")]
    BoundExceeded { n: usize, bound: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A split of the node set into faulty, committed and remaining nodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    #[serde(rename = "F")]
    pub faulty: NodeSet,
    #[serde(rename = "L")]
    pub left: NodeSet,
    #[serde(rename = "R")]
    pub right: NodeSet,
}

impl Partition {
    /// Checks the partition invariants and that both disjuncts of the
    /// condition fail for it. Returns a description of the first problem.
    pub fn validate_witness(&self, g: &Digraph, model: &FaultModel) -> Result<(), String> {
        let (f, l, r) = (self.faulty, self.left, self.right);
        if !f.is_disjoint(l) || !f.is_disjoint(r) || !l.is_disjoint(r) {
            return Err("sets are not pairwise disjoint".into());
        }
        if f.union(l).union(r) != g.nodes() {
            return Err("sets do not cover the node set".into());
        }
        if !l.contains(g.source()) {
            return Err("source is not in L".into());
        }
        if r.is_empty() {
            return Err("R is empty".into());
        }
        if !crate::graph::feasible_unchecked(g, model, f) {
            return Err("F is not a feasible fault set".into());
        }
        if !g.outs(g.source()).is_disjoint(r) {
            return Err("R contains an out-neighbor of the source".into());
        }
        if partition_propagates(g, model, l, r) {
            return Err("L reaches R under the commit threshold".into());
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub holds: bool,
    pub witness: Option<Partition>,
    pub fault_sets_examined: usize,
}

/// `A ⇒ B`: some node of `B` has at least `f + 1` in-neighbors in `A`.
pub fn implies(g: &Digraph, a: NodeSet, b: NodeSet, f: usize) -> Result<bool, ConditionError> {
    g.check_set(a)?;
    g.check_set(b)?;
    if a.is_empty() {
        return Err(ConditionError::EmptySet("A"));
    }
    if b.is_empty() {
        return Err(ConditionError::EmptySet("B"));
    }
    if !a.is_disjoint(b) {
        return Err(ConditionError::Overlap(a.intersection(b)));
    }
    Ok(implies_unchecked(g, a, b, f))
}

fn implies_unchecked(g: &Digraph, a: NodeSet, b: NodeSet, f: usize) -> bool {
    b.iter().any(|v| g.ins(v).intersection(a).len() > f)
}

/// Generalized relation: for every member `F*` of the domain,
/// `N⁻(B) ∩ A ⊄ F*`.
///
/// This is the literal set-level definition. With an empty domain it is
/// vacuously true, even when `N⁻(B) ∩ A` is empty.
pub fn implies_generalized(
    g: &Digraph,
    a: NodeSet,
    b: NodeSet,
    domain: &FaultDomain,
) -> Result<bool, ConditionError> {
    g.check_set(a)?;
    g.check_set(b)?;
    if b.is_empty() {
        return Err(ConditionError::EmptySet("B"));
    }
    if !a.is_disjoint(b) {
        return Err(ConditionError::Overlap(a.intersection(b)));
    }
    let entering = g.in_neighbors_of_set(b).intersection(a);
    Ok(domain.sets.iter().all(|m| !entering.is_subset(*m)))
}

/// Whether some node of `r` would accept support from `l` under the model's
/// commit rule: `> f` supporters for f-local, an infeasible support set for
/// a fault domain.
fn partition_propagates(g: &Digraph, model: &FaultModel, l: NodeSet, r: NodeSet) -> bool {
    match model {
        FaultModel::FLocal { f } => implies_unchecked(g, l, r, *f),
        FaultModel::Generalized { domain } => r
            .iter()
            .any(|v| !domain.admits(g.ins(v).intersection(l))),
    }
}

fn closure_with(g: &Digraph, faulty: NodeSet, accepts: impl Fn(NodeSet) -> bool) -> NodeSet {
    let s = g.source();
    let mut reached = NodeSet::singleton(s);
    let candidates = g.nodes().difference(faulty);
    loop {
        let mut grew = false;
        for v in candidates.difference(reached) {
            if g.outs(s).contains(v) || accepts(g.ins(v).intersection(reached)) {
                reached.insert(v);
                grew = true;
            }
        }
        if !grew {
            return reached;
        }
    }
}

/// Least set containing the source and closed under the CPA commit rule with
/// `faulty` removed: a node joins if it is an out-neighbor of the source or
/// has at least `f + 1` in-neighbors already inside.
pub fn closure(g: &Digraph, faulty: NodeSet, f: usize) -> Result<NodeSet, ConditionError> {
    g.check_set(faulty)?;
    if faulty.contains(g.source()) {
        return Err(ConditionError::SourceInFaultSet(g.source().0));
    }
    Ok(closure_with(g, faulty, |support| support.len() > f))
}

/// Closure under the fault-domain rule: a node joins if its support inside
/// the closure is not a feasible fault set.
pub fn closure_generalized(
    g: &Digraph,
    faulty: NodeSet,
    domain: &FaultDomain,
) -> Result<NodeSet, ConditionError> {
    g.check_set(faulty)?;
    if faulty.contains(g.source()) {
        return Err(ConditionError::SourceInFaultSet(g.source().0));
    }
    Ok(closure_with(g, faulty, |support| !domain.admits(support)))
}

/// Closure for whichever fault model is active.
pub fn closure_for(g: &Digraph, model: &FaultModel, faulty: NodeSet) -> Result<NodeSet, ConditionError> {
    match model {
        FaultModel::FLocal { f } => closure(g, faulty, *f),
        FaultModel::Generalized { domain } => closure_generalized(g, faulty, domain),
    }
}

/// Closure-based decision of the condition. The witness, when present, is
/// built from the first feasible fault set (canonical order) whose closure
/// misses a fault-free node.
pub fn check_condition(g: &Digraph, model: &FaultModel) -> Result<ConditionReport, ConditionError> {
    model.validate(g)?;
    let mut examined = 0;
    for faulty in feasible_fault_sets(g, model, true) {
        examined += 1;
        let reached = closure_for(g, model, faulty)?;
        let alive = g.nodes().difference(faulty);
        if reached != alive {
            return Ok(ConditionReport {
                holds: false,
                witness: Some(Partition {
                    faulty,
                    left: reached,
                    right: alive.difference(reached),
                }),
                fault_sets_examined: examined,
            });
        }
    }
    Ok(ConditionReport {
        holds: true,
        witness: None,
        fault_sets_examined: examined,
    })
}

/// Partition-enumerating oracle with the default node bound.
pub fn check_condition_bruteforce(g: &Digraph, model: &FaultModel) -> Result<ConditionReport, ConditionError> {
    check_condition_bruteforce_bounded(g, model, BRUTEFORCE_DEFAULT_BOUND)
}

/// Enumerates every `(F, L, R)` with the source in `L`, `R` non-empty and
/// `F` feasible, in canonical order of `F` then of `L`. Refuses graphs with
/// more than `bound` nodes.
pub fn check_condition_bruteforce_bounded(
    g: &Digraph,
    model: &FaultModel,
    bound: usize,
) -> Result<ConditionReport, ConditionError> {
    if g.n() > bound {
        return Err(ConditionError::BoundExceeded { n: g.n(), bound });
    }
    model.validate(g)?;
    let s = g.source();
    let source_outs = g.outs(s);
    let mut examined = 0;
    for faulty in feasible_fault_sets(g, model, true) {
        examined += 1;
        let mut rest = g.nodes().difference(faulty);
        rest.remove(s);
        for extra in subsets_canonical(rest) {
            let right = rest.difference(extra);
            if right.is_empty() {
                continue;
            }
            let mut left = extra;
            left.insert(s);
            if !source_outs.is_disjoint(right) {
                continue;
            }
            if !partition_propagates(g, model, left, right) {
                return Ok(ConditionReport {
                    holds: false,
                    witness: Some(Partition { faulty, left, right }),
                    fault_sets_examined: examined,
                });
            }
        }
    }
    Ok(ConditionReport {
        holds: true,
        witness: None,
        fault_sets_examined: examined,
    })
}

/// Largest tolerable `f` for the f-local model.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaxF {
    /// `-1` when the condition fails already at `f = 0`.
    pub f: i64,
    /// Set when the condition holds at `f = n`, i.e. the source reaches
    /// every node directly.
    pub all_f: bool,
    /// Report for the first failing `f` (`f + 1`), if any.
    pub failing: Option<ConditionReport>,
}

/// Linear scan upward from `f = 0`; stops at the first failure.
pub fn max_tolerable_f(g: &Digraph) -> MaxF {
    for f in 0..=g.n() {
        let report = check_condition(g, &FaultModel::f_local(f)).expect("f-local model is always valid");
        if !report.holds {
            return MaxF {
                f: f as i64 - 1,
                all_f: false,
                failing: Some(report),
            };
        }
    }
    MaxF {
        f: g.n() as i64,
        all_f: true,
        failing: None,
    }
}
