//! Exact polynomial arithmetic over prime fields and Q, a Buchberger engine
//! for ideals and modules, and the invariant-theory pipelines built on it:
//! Frobenius-twisted vector invariants of `SL2` and `Ga`, regular-sequence
//! scanning and certified Cohen-Macaulay defect bounds.

pub mod actions;
pub mod budget;
pub mod depth_lab;
pub mod error;
pub mod field;
pub mod frobenius;
pub mod groebner;
pub mod invariants_sl2;
pub mod linalg;
pub mod monomial;
pub mod ops;
pub mod order;
pub mod poly;
pub mod ring;
pub mod subalgebra;
pub mod text;

pub use error::{Error, Result};
pub use field::{CoefficientField, Field, PrimeField, Rationals};
pub use monomial::{Exp, Monomial};
pub use order::MonomialOrder;
pub use poly::Polynomial;
pub use ring::{Ring, RingRef, Weight};
