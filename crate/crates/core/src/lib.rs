//! Numerical semigroups, Apéry sets and the identities that telescope along
//! the path from a semigroup to the nonnegative integers.
//!
//! Exact arithmetic uses big rationals throughout; only the q-Bernoulli
//! module works in floating point.

pub mod error;
pub mod identities;
pub mod partition;
pub mod qbernoulli;
pub mod rational;
pub mod report;
pub mod root_identities;
pub mod roots;
pub mod sampling;
pub mod semigroup;
pub mod suite;
pub mod symmetric;
pub mod tree_path;

pub use error::{Error, Result};
pub use identities::{FunctionTable, SymmetricKind, SymmetricSpec, Verifier};
pub use rational::Rational;
pub use report::{IdentityReport, InstanceRecord, ReportValue, SuiteReport};
pub use roots::{RootLabel, RootSystem, RootType};
pub use semigroup::{AperySet, HeightPartition, NumericalSemigroup};
pub use symmetric::Poly;
pub use tree_path::CanonicalPath;
