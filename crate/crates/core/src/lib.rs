//! Finite nilspaces over abelian groups and their Gowers-norm applications.
//!
//! Every structural claim is decided by exact, exhaustive search at small
//! scale: cube sets are membership oracles, morphisms and sections are found
//! by pruned backtracking, and phase polynomials use exact rational phases.

pub mod abelian;
pub mod bundle;
pub mod cubes;
pub mod error;
pub mod extension;
pub mod free;
pub mod gowers;
pub mod limits;
pub mod phase;
mod search;
pub mod space;

pub use error::{Error, Result};
pub use limits::Limits;
