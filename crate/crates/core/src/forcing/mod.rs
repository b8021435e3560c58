//! Periodic points forced by a given orbit.

mod context;
mod graph;
mod tail;
mod witnesses;

pub use context::{orbit_context, orbit_context_with_budget, OrbitContext};
pub use graph::{cover_graph, parse_pattern, CoverGraph};
pub use tail::{verify_tail_property, TailReport};
pub use witnesses::{
    even_period_witness, lemma1_witnesses, realize_cycle, unified_witnesses, EvenPeriodWitness,
    Lemma1Witness, Orientation, UnifiedWitnesses,
};
