use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Resource caps for the exhaustive searches.
///
/// Exceeding a cap is always an error; no search ever truncates silently.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budgets {
    /// Largest ring order a constructor may produce.
    pub max_order: usize,
    /// Largest number of right ideals (or submodules) in a lattice.
    pub max_ideals: usize,
    /// Largest number of partial assignments in one hom search.
    pub max_assignments: u64,
    /// Largest module order accepted by the module engine.
    pub max_module_order: usize,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            max_order: 4096,
            max_ideals: 200_000,
            max_assignments: 1_000_000,
            max_module_order: 1024,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[error("budget exceeded: {what} (limit {limit})")]
pub struct BudgetExceeded {
    pub what: &'static str,
    pub limit: u64,
}
