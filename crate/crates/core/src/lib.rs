//! Finite-ring laboratory: build rings from operation tables and decide, by
//! exhaustive search, the clean / almost clean / Rickart family of properties,
//! the (C1)-(C3) lattice conditions, and endomorphism-ring questions for
//! finite modules.

pub mod analysis;
pub mod budget;
pub mod construct;
pub mod decomp;
pub mod dsl;
pub mod elements;
pub mod fingerprint;
pub mod lattice;
pub mod modlab;
pub mod report;
pub mod ring;
pub mod set;
pub mod verify;

pub use analysis::RingReport;
pub use budget::{BudgetExceeded, Budgets};
pub use construct::{attach_involution, construct, Environment};
pub use dsl::{parse_module_expr, parse_program, parse_spec, InvolutionKind, ModuleExpr, RingExpr, RingSpec};
pub use ring::{validate_ring, Elem, FinRing, RingError, RingTables};
pub use set::ElemSet;
pub use fingerprint::{fingerprint, Fingerprint};
