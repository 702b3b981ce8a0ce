//! Lifts of the projective congruence groups Γ̄0(N), Γ̄1(N) and Γ̄(N) to SL2(Z).
//!
//! The crate counts congruence lifts two ways (closed formula and explicit
//! computation in SL2(Z/2N)), builds Farey-symbol presentations of Γ̄0(N) and
//! Γ̄1(N), enumerates every lift as a sign character on the free generators,
//! and decides for each lift whether it is a congruence subgroup.
//!
//! Modules:
//! - [`matrix`], [`factor`], [`crt`]: exact 2×2 arithmetic over Z and Z/n
//! - [`group`], [`quotient`]: finite subgroups of SL2(Z/n) and `G/G'G²`
//! - [`counting`]: lift counts and classification predicates
//! - [`presentation`]: coset actions, cusp widths, Farey symbols, generators
//! - [`lifts`]: sign characters, lift generators, congruence certificates
//! - [`suite`]: the self-check scoreboard used by `liftlab verify`

pub mod config;
pub mod counting;
pub mod crt;
pub mod error;
pub mod factor;
pub mod gf2;
pub mod group;
pub mod kind;
pub mod lifts;
pub mod matrix;
pub mod presentation;
pub mod quotient;
pub(crate) mod serde_biguint;
pub mod suite;

pub use config::EngineConfig;
pub use error::{Error, Result};
pub use kind::GroupKind;
pub use matrix::{IntegerMatrix, ResidueMatrix};
