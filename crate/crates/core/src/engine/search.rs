use serde::Serialize;

use super::{run_async_with, run_sync_with, EngineError, Execution, Record, Scenario, ScenarioFile, Schedule, Verdict};
use crate::adversary::{strategy_family, AdversaryError, Strategy};
use crate::graph::{feasible_fault_sets, Digraph, FaultModel};
use crate::protocol::{ProtocolKind, Value};

/// Bounds for an exhaustive scenario search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Values for the source input and for adversary strategies.
    pub value_domain: Vec<Value>,
    /// Rounds covered by scripted tables.
    pub depth_bound: u32,
    /// Larger fault sets are skipped and counted.
    pub max_fault_size: Option<usize>,
    /// Refuse a fault set whose strategy family is larger than this.
    pub family_cap: u128,
    /// Maximum number of executions.
    pub budget: u64,
    /// Fair-schedule seed for asynchronous protocols.
    pub async_seed: u64,
    /// Synchronous horizon; `n` when absent. A longer horizon makes commits
    /// after round `n` observable.
    pub max_rounds: Option<u32>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            value_domain: vec![Value::Data(0), Value::Data(1)],
            depth_bound: 3,
            max_fault_size: None,
            family_cap: 1 << 20,
            budget: 1_000_000,
            async_seed: 0,
            max_rounds: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum SearchOutcome {
    /// The first scenario, in canonical order, that violates a required property.
    Violation {
        scenario: ScenarioFile,
        verdict: Verdict,
        scenarios_run: u64,
    },
    /// Every scenario in scope ran without a violation.
    NoViolation {
        scenarios_run: u64,
        fault_sets: u64,
        /// Feasible fault sets above `max_fault_size`, not searched.
        fault_sets_skipped: u64,
    },
    /// The search stopped early; absence of a witness means nothing.
    Inconclusive { scenarios_run: u64, reason: String },
}

/// Returned by a [`for_each_scenario`] visitor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Visit {
    Continue,
    Stop,
}

/// What the visitor driver ended with.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coverage {
    Complete { scenarios_run: u64, fault_sets: u64, fault_sets_skipped: u64 },
    Stopped { scenarios_run: u64 },
    Inconclusive { scenarios_run: u64, reason: String },
}

fn source_behaviors(protocol: &ProtocolKind, domain: &[Value]) -> Vec<Option<Strategy>> {
    let mut out = vec![None];
    if matches!(protocol, ProtocolKind::RadioBb { .. }) {
        out.push(Some(Strategy::SilentSource));
        let mut announced = domain.to_vec();
        if !announced.contains(&Value::Default) {
            announced.push(Value::Default);
        }
        out.extend(announced.into_iter().map(|value| Some(Strategy::SourceValue { value })));
    }
    out
}

/// Runs every scenario in scope, in canonical order, and hands each execution
/// to `visit`.
///
/// Order: feasible fault sets excluding the source (by size, then
/// lexicographic) × strategy family index × source behavior (radio only:
/// honest, silent, then each announced value) × source input.
/// Traces are not recorded.
pub fn for_each_scenario<V>(
    g: &Digraph,
    model: &FaultModel,
    protocol: &ProtocolKind,
    config: &SearchConfig,
    mut visit: V,
) -> Result<Coverage, EngineError>
where
    V: FnMut(&Scenario, &Execution) -> Visit,
{
    model.validate(g)?;
    if config.value_domain.is_empty() {
        return Err(EngineError::InvalidScenario("the value domain is empty".into()));
    }
    let base = Scenario::honest(g.clone(), protocol.clone(), config.value_domain[0]);
    let delivery = base.delivery;
    let schedule = Schedule::seeded(config.async_seed);
    let sources = source_behaviors(protocol, &config.value_domain);
    let mut scn = base;
    scn.seed = config.async_seed;
    scn.max_rounds = config.max_rounds;

    let mut run = 0u64;
    let mut fault_sets = 0u64;
    let mut skipped = 0u64;
    for faulty in feasible_fault_sets(g, model, true) {
        if config.max_fault_size.is_some_and(|k| faulty.len() > k) {
            skipped += 1;
            continue;
        }
        fault_sets += 1;
        let family = match strategy_family(g, faulty, &config.value_domain, config.depth_bound, delivery, config.family_cap) {
            Ok(f) => f,
            Err(AdversaryError::FamilyTooLarge { size, cap }) => {
                let size = size.map_or("more than 2^128".to_string(), |s| s.to_string());
                return Ok(Coverage::Inconclusive {
                    scenarios_run: run,
                    reason: format!("strategy family for fault set {faulty} has {size} members, cap is {cap}"),
                });
            }
            Err(e) => return Err(e.into()),
        };
        scn.fault_set = faulty;
        for assignment in family.iter() {
            scn.strategies = assignment;
            for source in &sources {
                scn.source_fault = source.clone();
                // a faulty source ignores its input, so one run covers all of them
                let inputs = if source.is_some() { &config.value_domain[..1] } else { &config.value_domain[..] };
                for &x in inputs {
                    if run >= config.budget {
                        return Ok(Coverage::Inconclusive {
                            scenarios_run: run,
                            reason: format!("budget of {} executions exhausted", config.budget),
                        });
                    }
                    scn.source_input = x;
                    let ex = if protocol.is_async() {
                        run_async_with(&scn, &schedule, Record::Off)?
                    } else {
                        run_sync_with(&scn, Record::Off)?
                    };
                    run += 1;
                    if visit(&scn, &ex) == Visit::Stop {
                        return Ok(Coverage::Stopped { scenarios_run: run });
                    }
                }
            }
        }
    }
    Ok(Coverage::Complete {
        scenarios_run: run,
        fault_sets,
        fault_sets_skipped: skipped,
    })
}

/// Looks for the canonically first scenario whose verdict has a termination,
/// validity or agreement violation.
pub fn search_violation(
    g: &Digraph,
    model: &FaultModel,
    protocol: &ProtocolKind,
    config: &SearchConfig,
) -> Result<SearchOutcome, EngineError> {
    let mut found: Option<(Scenario, Verdict)> = None;
    let coverage = for_each_scenario(g, model, protocol, config, |scn, ex| {
        if ex.verdict.is_ok() {
            Visit::Continue
        } else {
            found = Some((scn.clone(), ex.verdict.clone()));
            Visit::Stop
        }
    })?;
    Ok(match (coverage, found) {
        (Coverage::Stopped { scenarios_run }, Some((scn, verdict))) => SearchOutcome::Violation {
            scenario: scn.to_file(),
            verdict,
            scenarios_run,
        },
        (
            Coverage::Complete {
                scenarios_run,
                fault_sets,
                fault_sets_skipped,
            },
            _,
        ) => SearchOutcome::NoViolation {
            scenarios_run,
            fault_sets,
            fault_sets_skipped,
        },
        (Coverage::Inconclusive { scenarios_run, reason }, _) => SearchOutcome::Inconclusive { scenarios_run, reason },
        (Coverage::Stopped { .. }, None) => unreachable!("the visitor only stops on a violation"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::Termination;
    use crate::graph::{generate, GraphKind, NodeSet};

    fn small() -> SearchConfig {
        SearchConfig {
            depth_bound: 2,
            ..SearchConfig::default()
        }
    }

    #[test]
    fn ring_violation_is_fault_free() {
        let g = generate(GraphKind::Ring { n: 4 }, 0).unwrap();
        let out = search_violation(&g, &FaultModel::f_local(1), &ProtocolKind::Cpa { f: 1 }, &small()).unwrap();
        match out {
            SearchOutcome::Violation {
                scenario,
                verdict,
                scenarios_run,
            } => {
                assert_eq!(scenarios_run, 1);
                assert!(scenario.fault_set.is_empty());
                assert_eq!(verdict.termination, Termination::Violated { stuck_nodes: NodeSet::from([2, 3]) });
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn complete_graph_has_no_violation() {
        let g = generate(GraphKind::Complete { n: 4 }, 0).unwrap();
        let out = search_violation(&g, &FaultModel::f_local(1), &ProtocolKind::Cpa { f: 1 }, &small()).unwrap();
        match out {
            SearchOutcome::NoViolation {
                scenarios_run,
                fault_sets,
                fault_sets_skipped,
            } => {
                // F = ∅ and three singletons; each singleton has 2 recipients
                let per = 3 + 2 + 2 + 81;
                assert_eq!(fault_sets, 4);
                assert_eq!(fault_sets_skipped, 0);
                assert_eq!(scenarios_run, 2 * (1 + 3 * per));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn budget_and_cap_are_inconclusive() {
        let g = generate(GraphKind::Complete { n: 4 }, 0).unwrap();
        let cfg = SearchConfig { budget: 10, ..small() };
        let out = search_violation(&g, &FaultModel::f_local(1), &ProtocolKind::Cpa { f: 1 }, &cfg).unwrap();
        assert_eq!(
            out,
            SearchOutcome::Inconclusive {
                scenarios_run: 10,
                reason: "budget of 10 executions exhausted".into()
            }
        );
        let cfg = SearchConfig { family_cap: 5, ..small() };
        let out = search_violation(&g, &FaultModel::f_local(1), &ProtocolKind::Cpa { f: 1 }, &cfg).unwrap();
        assert!(matches!(out, SearchOutcome::Inconclusive { scenarios_run: 2, .. }));
    }

    #[test]
    fn radio_source_behaviors() {
        let b = source_behaviors(&ProtocolKind::RadioBb { f: 1 }, &[Value::Data(0), Value::Data(1)]);
        assert_eq!(
            b,
            vec![
                None,
                Some(Strategy::SilentSource),
                Some(Strategy::SourceValue { value: Value::Data(0) }),
                Some(Strategy::SourceValue { value: Value::Data(1) }),
                Some(Strategy::SourceValue { value: Value::Default }),
            ]
        );
        assert_eq!(source_behaviors(&ProtocolKind::Cpa { f: 1 }, &[Value::Data(0)]), vec![None]);
    }

    #[test]
    fn radio_search_on_complete_graph() {
        let g = generate(GraphKind::Complete { n: 4 }, 0).unwrap();
        let out = search_violation(&g, &FaultModel::f_local(1), &ProtocolKind::RadioBb { f: 1 }, &small()).unwrap();
        assert!(matches!(out, SearchOutcome::NoViolation { .. }), "{out:?}");
    }

    #[test]
    fn max_fault_size_skips() {
        let g = generate(GraphKind::Complete { n: 4 }, 0).unwrap();
        let cfg = SearchConfig {
            max_fault_size: Some(0),
            ..small()
        };
        let out = search_violation(&g, &FaultModel::f_local(1), &ProtocolKind::Cpa { f: 1 }, &cfg).unwrap();
        assert_eq!(
            out,
            SearchOutcome::NoViolation {
                scenarios_run: 2,
                fault_sets: 1,
                fault_sets_skipped: 3
            }
        );
    }
}
