//! Covering chains: universal coverings followed or preceded by purely
//! inseparable degree-p steps, and equivariance of derivations.

mod chain;
mod equivariance;
mod graph;
mod special;

pub use chain::{plan_chain, verify_chain, ChainPlan, ChainReport, Mode, PlanOutcome, Step, StepKind, StepReport};
pub use equivariance::{verify_equivariance, EquivarianceReport};
pub use graph::{connected_by_inseparable, inseparable_edges, inseparable_graph_dot, Edge};
pub use special::{verify_e81_special_chain, SpecialChainReport, StageCheck, SPECIAL_CHAIN_ORDER};
