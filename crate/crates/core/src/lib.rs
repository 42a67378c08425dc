//! Exact quantum propositions for a nested Wigner's-friend thought experiment.
//!
//! The crate is layered bottom-up:
//!
//! - [`field`]: exact arithmetic in Q(√2, √3);
//! - [`linear`]: kets, operators, tensor products and basis expansions;
//! - [`propositions`]: observables, Born probabilities, certified conditionals;
//! - [`audit`]: inference chains, Boolean-embeddability audits and
//!   hidden-variable enumeration;
//! - [`scenario`]: the `.scn` text format and the built-in scenario.

pub mod field;
pub mod linear;

pub use field::{sqrt_rational, ExactScalar, FieldError};
pub use linear::{Ket, LinearError, LinearOperator, SpaceLayout, Subsystem};
pub mod propositions;
pub mod audit;
pub mod scenario;
