//! Transition systems: terms, mailboxes, forwarders, compositions and
//! subset constructions, all explored into finite [`Graph`]s.

mod compose;
mod det;
mod forward;
mod graph;
mod multiset;
mod scc;
mod term;

pub use compose::{compose_step, ComposedLts};
pub use det::{det_step, tau_closure, waiting_states, DetState, ToSetLts};
pub use forward::{fw_graph, mail_capacity, mail_universe, output_width, FwLts, FwState};
pub use graph::{explore, Graph, GraphDocument, Lts, StateId, Transition};
pub use multiset::{multiset_step, Multiset, MultisetLts};
pub use scc::{divergence, diverges, is_cyclic, tarjan};
pub use term::{term_graph, term_step, TermLts};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SemanticsError {
    #[error("open term: {0}")]
    OpenTerm(String),
    #[error("exploration bound must be positive")]
    ZeroBound,
    #[error("state space exceeds the bound of {bound} states")]
    Incomplete { bound: usize },
    #[error("divergence after trace '{0}'")]
    Divergent(String),
    #[error("mail capacity reached after trace '{0}'")]
    Saturated(String),
}
