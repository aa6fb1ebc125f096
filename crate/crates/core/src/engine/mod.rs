//! Incremental stepwise selection over chordal models.

pub mod eligibility;
mod selection;
mod state;

pub use eligibility::{eligible_additions, eligible_deletions, DeleteEligibility, ForwardEligibility};
pub use selection::{run, Action, Mode, RunResult, SelectionConfig, Selector, StepRecord, DELTA_TOLERANCE};
pub use state::{AddOutcome, DeleteOutcome, FaultInjection, ModelState};
