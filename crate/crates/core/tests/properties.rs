use proptest::prelude::*;

use cpa::condition::{check_condition, closure, closure_generalized};
use cpa::engine::{run_sync, Scenario};
use cpa::graph::{enumerate_feasible_fault_sets, is_feasible, Digraph, FaultDomain, FaultModel, NodeId, NodeSet};
use cpa::protocol::{ProtocolKind, Value};

fn graph() -> impl Strategy<Value = Digraph> {
    (2usize..=7).prop_flat_map(|n| {
        let pairs = n * (n - 1);
        (Just(n), 0u64..(1u64 << pairs)).prop_map(|(n, mask)| Digraph::from_pair_mask(n, NodeId(0), mask).unwrap())
    })
}

fn subset(g: &Digraph, bits: u64) -> NodeSet {
    g.nodes_iter().filter(|v| bits >> v.0 & 1 == 1).collect()
}

/// Fixpoint that adds one qualifying node at a time, picking in the order
/// given by `order`.
fn closure_in_order(g: &Digraph, faulty: NodeSet, f: usize, order: &[usize]) -> NodeSet {
    let mut inside = NodeSet::singleton(g.source());
    loop {
        let next = order.iter().map(|&i| NodeId(i)).find(|&v| {
            !inside.contains(v)
                && !faulty.contains(v)
                && (g.has_edge(g.source(), v) || g.ins(v).intersection(inside).len() > f)
        });
        match next {
            Some(v) => {
                inside.insert(v);
            }
            None => return inside,
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    /// Shrinking a feasible local fault set can only break the bound at the
    /// nodes that just became fault-free.
    #[test]
    fn shrinking_a_local_fault_set_only_exposes_removed_nodes(g in graph(), f in 0usize..3, bits in any::<u64>()) {
        let model = FaultModel::f_local(f);
        let s = subset(&g, bits);
        if is_feasible(&g, &model, s).unwrap() {
            for v in s {
                let mut smaller = s;
                smaller.remove(v);
                let expected = s.iter().filter(|u| !smaller.contains(*u)).all(|u| g.ins(u).intersection(smaller).len() <= f);
                prop_assert_eq!(is_feasible(&g, &model, smaller).unwrap(), expected);
            }
        }
    }

    #[test]
    fn domain_feasibility_is_downward_closed(g in graph(), members in proptest::collection::vec(any::<u64>(), 0..4), bits in any::<u64>()) {
        let domain = FaultDomain::new(members.iter().map(|b| subset(&g, *b)));
        let model = FaultModel::generalized(domain);
        let s = subset(&g, bits);
        if is_feasible(&g, &model, s).unwrap() {
            for v in s {
                let mut smaller = s;
                smaller.remove(v);
                prop_assert!(is_feasible(&g, &model, smaller).unwrap());
            }
        }
    }

    #[test]
    fn enumeration_matches_filtered_powerset(g in graph(), f in 0usize..3) {
        let model = FaultModel::f_local(f);
        let listed = enumerate_feasible_fault_sets(&g, &model, false);
        let mut expected: Vec<NodeSet> = (0..1u64 << g.n())
            .map(|bits| subset(&g, bits))
            .filter(|s| {
                g.nodes().difference(*s).iter().all(|v| g.ins(v).intersection(*s).len() <= f)
            })
            .collect();
        prop_assert_eq!(listed.len(), expected.len());
        let mut sorted = listed.clone();
        sorted.sort_by_key(|s| (s.len(), s.iter().map(|v| v.0).collect::<Vec<_>>()));
        expected.sort_by_key(|s| (s.len(), s.iter().map(|v| v.0).collect::<Vec<_>>()));
        prop_assert_eq!(&sorted, &expected);
        prop_assert_eq!(listed.first().copied(), Some(NodeSet::empty()));
    }

    #[test]
    fn in_and_out_neighbors_are_dual(g in graph()) {
        for u in g.nodes_iter() {
            for v in g.nodes_iter() {
                prop_assert_eq!(g.outs(u).contains(v), g.ins(v).contains(u));
                prop_assert_eq!(g.outs(u).contains(v), g.has_edge(u, v));
            }
        }
    }

    #[test]
    fn closure_does_not_depend_on_visit_order(g in graph(), f in 0usize..3, bits in any::<u64>(), seed in any::<u64>()) {
        let mut faulty = subset(&g, bits);
        faulty.remove(g.source());
        let mut order: Vec<usize> = (0..g.n()).collect();
        let mut x = seed | 1;
        for i in (1..order.len()).rev() {
            x ^= x << 13;
            x ^= x >> 7;
            x ^= x << 17;
            order.swap(i, (x % (i as u64 + 1)) as usize);
        }
        let reference = closure(&g, faulty, f).unwrap();
        prop_assert_eq!(closure_in_order(&g, faulty, f, &order), reference);
        let rev: Vec<usize> = order.iter().rev().copied().collect();
        prop_assert_eq!(closure_in_order(&g, faulty, f, &rev), reference);
    }

    #[test]
    fn cardinality_domain_closure_matches_local_bound(g in graph(), f in 0usize..3, bits in any::<u64>()) {
        let mut faulty = subset(&g, bits);
        faulty.remove(g.source());
        let domain = FaultDomain::cardinality(g.n(), f);
        prop_assert_eq!(closure(&g, faulty, f).unwrap(), closure_generalized(&g, faulty, &domain).unwrap());
    }

    #[test]
    fn cardinality_domain_runs_match_cpa(g in graph(), f in 0usize..3, x in 0u32..3) {
        let cpa = Scenario::honest(g.clone(), ProtocolKind::Cpa { f }, Value::Data(x));
        let mut cpag = cpa.clone();
        cpag.protocol = ProtocolKind::CpaG { domain: FaultDomain::cardinality(g.n(), f) };
        let a = run_sync(&cpa).unwrap();
        let b = run_sync(&cpag).unwrap();
        prop_assert_eq!(a.trace.to_text(), b.trace.to_text());
        prop_assert_eq!(a.verdict, b.verdict);
    }

    #[test]
    fn condition_is_monotone_in_f(g in graph()) {
        let holds: Vec<bool> = (0..=g.n()).map(|f| check_condition(&g, &FaultModel::f_local(f)).unwrap().holds).collect();
        for f in 1..holds.len() {
            prop_assert!(!holds[f] || holds[f - 1]);
        }
    }
}

#[test]
fn local_feasibility_is_not_downward_closed() {
    // node 3 is fine while faulty, but once fault-free it has a faulty in-neighbor
    let g = Digraph::new(4, NodeId(0), [(NodeId(1), NodeId(3))]).unwrap();
    let model = FaultModel::f_local(0);
    let both: NodeSet = [NodeId(1), NodeId(3)].into_iter().collect();
    assert!(is_feasible(&g, &model, both).unwrap());
    assert!(!is_feasible(&g, &model, NodeSet::singleton(NodeId(1))).unwrap());
}
