//! Resource limits for the exhaustive engines.
//!
//! Every materializing operation (functor categories, term enumeration,
//! presentation closure, corpus generation) is potentially exponential, so
//! each one checks against an explicit budget and reports exhaustion as a
//! distinct error instead of running away.

use serde::Serialize;
use thiserror::Error;

/// Limits shared by all engines. `Default` gives conservative desk-scale
/// values; the CLI exposes each field as a flag and an environment variable.
#[derive(Debug, Clone, Serialize)]
pub struct Budget {
    /// Maximum number of functors a materialized functor category may have.
    pub max_hom_objects: usize,
    /// Maximum number of natural transformations a materialized functor
    /// category may have.
    pub max_hom_arrows: usize,
    /// Maximum number of distinct arrows a presentation may close into.
    pub max_presentation_arrows: usize,
    /// Maximum number of terms an enumeration may produce.
    pub max_terms: usize,
    /// Maximum number of categories a corpus generation may emit.
    pub max_corpus: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_hom_objects: 4096,
            max_hom_arrows: 50_000,
            max_presentation_arrows: 10_000,
            max_terms: 20_000,
            max_corpus: 4_000_000,
        }
    }
}

impl Budget {
    /// A budget with every limit set high enough to be irrelevant in tests.
    pub fn unlimited() -> Self {
        Budget {
            max_hom_objects: usize::MAX,
            max_hom_arrows: usize::MAX,
            max_presentation_arrows: usize::MAX,
            max_terms: usize::MAX,
            max_corpus: usize::MAX,
        }
    }
}

/// A budget was exhausted. Carries what overflowed and the limit in force.
#[derive(Debug, Clone, Error, Serialize)]
#[error("size bound exceeded: {what} (limit {limit})")]
pub struct BudgetExceeded {
    pub what: String,
    pub limit: usize,
}

impl BudgetExceeded {
    pub fn new(what: impl Into<String>, limit: usize) -> Self {
        BudgetExceeded { what: what.into(), limit }
    }
}
