//! Eisenstein-local Hecke algebras of prime level from modular symbols.
//!
//! The numerical core is generic over a [`ring::Ring`]; the aliases below fix
//! the scalar types used in practice.

pub mod arith;
pub mod error;
pub mod hecke;
pub mod invariants;
pub mod linalg;
pub mod modsym;
pub mod ring;

pub use error::{Error, Result};
pub use linalg::Matrix;
pub use ring::{Integers, LocalRing, PadicTruncation, Pir, PrimeField, Rationals, Ring};

pub type IntMatrix = Matrix<Integers>;
pub type RatMatrix = Matrix<Rationals>;
pub type FpMatrix = Matrix<PrimeField>;
pub type ZpnMatrix = Matrix<PadicTruncation>;
