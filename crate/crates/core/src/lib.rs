//! Finite computational algebra for involutive quantales.
//!
//! The crate works entirely with finite structures whose elements are dense
//! indices ([`Elem`]). Two kinds of carriers exist: table-backed ones
//! ([`lattice::FiniteLattice`], [`quantale::TableQuantale`]) and symbolic
//! powerset carriers ([`quantale::RelQuantale`], [`groupoid::OpensQuantale`])
//! whose element index *is* a bitmask.
//!
//! On top of that sit inverse semigroups and their compatible-ideal
//! completions ([`pseudogroup`]), the pseudogroup of a projection and the
//! homomorphism it induces ([`projection`]), finite groupoids ([`groupoid`])
//! and maps of involutive quantales ([`maps`]). [`enumerate`] generates small
//! instances for exhaustive testing and counterexample search.

pub mod config;
pub mod corpus;
pub mod enumerate;
pub mod error;
mod exhaust;
pub mod groupoid;
pub mod lattice;
pub mod maps;
pub mod projection;
pub mod pseudogroup;
pub mod quantale;
pub mod report;

pub use config::Config;
pub use error::{Error, Result};
pub use lattice::{FiniteLattice, Lattice};
pub use quantale::{Quantale, RelQuantale, TableQuantale};

/// Index of an element in a finite carrier.
pub type Elem = usize;
