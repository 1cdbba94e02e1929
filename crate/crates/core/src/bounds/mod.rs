//! Closed-form bounds and measured-versus-bound reports.

mod formulas;
mod query;
mod report;

pub use formulas::*;
pub use query::{evaluate, BoundQuery, BoundRow, Family, THEOREM_TAGS};
pub use report::{BoundEntry, BoundReport, PASS_TOLERANCE};
