//! Check outcomes shared by the Cat, Pos, and Met engines.

use serde::Serialize;

/// Outcome of a judgement, model, or closure check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    /// The judgement holds (or the obligation is satisfied).
    Holds,
    /// Everything was interpretable but the required equality failed.
    Fails,
    /// Some term involved was not interpretable over the structure.
    NotInterpretable,
}

/// A status together with the evidence for a non-`Holds` outcome.
///
/// The witness type varies by engine: a point of a functor category for
/// Cat equations, a valuation for Pos/Met checks, an assembly obligation
/// for interpretability failures.
#[derive(Debug, Clone, Serialize)]
pub struct Verdict<W> {
    pub status: Status,
    pub witness: Option<W>,
}

impl<W> Verdict<W> {
    pub fn holds() -> Self {
        Verdict { status: Status::Holds, witness: None }
    }

    pub fn fails(witness: W) -> Self {
        Verdict { status: Status::Fails, witness: Some(witness) }
    }

    pub fn not_interpretable(witness: W) -> Self {
        Verdict { status: Status::NotInterpretable, witness: Some(witness) }
    }

    pub fn is_holds(&self) -> bool {
        self.status == Status::Holds
    }

    pub fn map_witness<V>(self, f: impl FnOnce(W) -> V) -> Verdict<V> {
        Verdict { status: self.status, witness: self.witness.map(f) }
    }
}
