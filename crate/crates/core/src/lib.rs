//! Covering polynomials for congruences modulo prime powers, and the search
//! problems built on top of them.
//!
//! The crate is `no_std` (it needs `alloc`). Everything is exact integer
//! arithmetic; there is no floating point anywhere.
//!
//! * [`ivpoly`]: integer-valued polynomials in the binomial basis and in
//!   p-power-scaled factored form.
//! * [`covering`]: residue sets, the κ bound and constructive covering
//!   families.
//! * [`lift`]: coefficient-1 monomial sums, the Ψ lifts and the
//!   Nullstellensatz polynomial, plus the explicit-form F2 solver.
//! * [`olson`]: Olson-type zero-sum subset problems.
//! * [`ppa`]: the End-of-the-Line graph for general-form F2 polynomials
//!   and its path follower.
//! * [`graphs`]: divisible and degree-constrained subgraphs.

#![no_std]

extern crate alloc;

pub mod arith;
pub mod covering;
mod error;
pub mod graphs;
pub mod ivpoly;
pub mod lift;
pub mod monomial;
pub mod olson;
pub mod ppa;

pub use covering::{CoveringFamily, ResidueSet};
pub use error::{Error, Result};
pub use ivpoly::{FactoredIvp, IntegerValued, IvPoly};
pub use lift::{IntMultiPoly, UnitSumPoly};
pub use monomial::Monomial;
pub use olson::{Engine, OlsonInstance};
pub use ppa::{GeneralFormPoly, Node, TermTuple};
