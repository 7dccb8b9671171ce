//! Property testers for functions on finite groups.
//!
//! The crate is organised bottom-up:
//!
//! * [`group`]: finite groups from Cayley tables, conjugacy classes, builtins.
//! * [`rep`]: unitary irreps, characters, the Fourier transform, distances,
//!   Haar-random unitaries.
//! * [`testers`]: the randomized testers, run through a query-counting oracle.
//! * [`oracle`]: exact brute-force ground truth for distances and identities.
//! * [`harness`]: report schemas, instance families, and experiment sweeps.

pub mod error;
pub mod group;
pub mod harness;
pub mod oracle;
pub mod rep;
pub mod testers;

pub use error::{GroupError, HarnessError, RepError, TesterError};
pub use group::{Builtin, Element, FiniteGroup};
pub use rep::{CMatrix, IrrepBasis, MatrixFunction, ScalarFunction};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
