//! Compatibility relations and team formation on signed social networks.
//!
//! Users are nodes of an undirected graph whose edges are labelled friend
//! (`+1`) or foe (`-1`). Two users are *compatible* under one of seven
//! relations derived from structural balance (see [`compat`]); a team must be
//! pairwise compatible, cover every skill of a task, and keep its largest
//! pairwise distance small (see [`team`]).
//!
//! Runnable walkthroughs live in `examples/`:
//! ```bash
//! cargo run --example relation_stats
//! ```

pub mod balance;
pub mod compat;
pub mod fixtures;
pub mod graph;
pub mod harness;
pub mod oracle;
pub mod team;

pub use compat::{build_relation, sp_sign_counts, Compat, CompatibilityRelation, RelationKind, RelationOptions};
pub use graph::{load_graph, load_skills, LoadOptions, NodeId, Sign, SignedGraph, SkillAssignment, SkillId, Task};
pub use team::{form_team, PolicyConfig, Team, TeamError};
