//! Boolean automata networks: definition, dynamics and observation analysis.
//!
//! A network is a finite set of automata, each carrying a Boolean state and a
//! local function from the global state to its next value — and nothing else:
//! update timing is deliberately kept out of [`network`] and lives in
//! [`dynamics`]. On top of the two sit [`perspective`], which derives the
//! network an observer effectively sees when some automata are hidden and
//! updates follow a fixed periodic rhythm, and [`audit`], which checks update
//! schedules against the interaction structure.

pub mod audit;
pub mod dynamics;
mod error;
pub mod expr;
pub mod network;
mod parse;
pub mod perspective;
mod schedule;
mod state;
mod table;

pub use dynamics::{
    Attractor, AttractorKind, BitOrder, GraphOptions, TransitionGraph, UpdateMode,
    DEFAULT_MAX_EXHAUSTIVE,
};
pub use error::{Error, Result};
pub use expr::{BoolExpr, ConnectorUsage, InfluenceSign, VarId, VarNames, DEFAULT_MAX_SUPPORT};
pub use network::{MonotonyReport, MonotonyWitness, Network, SignedArc, SignedDigraph};
pub use schedule::Schedule;
pub use state::State;
