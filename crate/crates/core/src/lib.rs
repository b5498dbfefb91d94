//! Certified propagation broadcast on directed graphs under locally bounded
//! Byzantine faults.
//!
//! - [`graph`]: digraphs, node sets, fault models, generators and file formats.
//! - [`condition`]: the partition condition that decides whether CPA can
//!   succeed on a topology, via fixed-point closures, with a brute-force
//!   partition enumerator as an independent cross-check.
//! - [`protocol`]: per-node state machines for CPA, its parameter-free,
//!   fault-domain, radio and asynchronous variants.
//! - [`adversary`]: faulty-node behaviors and bounded exhaustive families.
//! - [`engine`]: deterministic synchronous and asynchronous execution,
//!   traces, verdicts and violation search.
//! - [`cli`]: the `cpa` command.
//!
//! ```
//! use cpa::condition::check_condition;
//! use cpa::graph::{generate, FaultModel, GraphKind};
//!
//! let ring = generate(GraphKind::Ring { n: 4 }, 0).unwrap();
//! let report = check_condition(&ring, &FaultModel::f_local(1)).unwrap();
//! assert!(!report.holds);
//! ```

pub mod adversary;
pub mod cli;
pub mod condition;
pub mod engine;
pub mod graph;
pub mod protocol;
