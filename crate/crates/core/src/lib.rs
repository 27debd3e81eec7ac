pub mod arith;
pub mod element;
pub mod engine;
pub mod error;
pub mod group;
pub mod gset;
pub mod linalg;
pub mod marks;
pub mod pairs;
pub mod job;
pub mod plocal;
pub mod report;
pub mod scalar;
pub mod selftest;
pub mod store;

pub use element::{tilde_quotient, BurnsideElement, ElementDoc, TildeElement};
pub use engine::{Engine, IpSplitting};
pub use error::{Error, Result};
pub use group::{named_group, FiniteGroup, GroupSpec, Homomorphism, Subgroup};
pub use marks::{KernelReport, MarkVariant, MarksVector};
pub use pairs::{GKPair, PairClass, PairSpace};
pub use plocal::IdempotentReport;
pub use scalar::{PLocalScalar, Rational, ScalarMode};
