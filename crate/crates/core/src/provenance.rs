//! Labels attached to every reported quantity.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// Computed in exact arithmetic (or certified by it).
    Exact,
    /// Produced by a randomized or generic-position argument.
    Heuristic,
    /// Estimated from finitely many terms of a sequence.
    Fitted,
    /// Taken from the input without verification.
    UserSupplied,
}
