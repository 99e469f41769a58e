//! Frobenius roots, ν-invariants, test ideals and F-jumping numbers of ideals
//! in F_p[x_1..x_n], together with the p-adic machinery that turns
//! ν-invariants into Bernstein-Sato roots.
//!
//! The modules build on each other bottom-up: [`fparith`] and [`polyring`]
//! give the ring, [`groebner`] gives ideal arithmetic, [`frobroot`] the
//! Cartier operation, [`invariants`] everything defined through chains of
//! Frobenius roots, and [`bsroots`] the p-adic search on top of [`padic`].
//! [`monomial_oracle`] is an independent combinatorial check for monomial
//! ideals.

pub mod bsroots;
pub mod error;
pub mod fparith;
pub mod frobroot;
pub mod groebner;
pub mod invariants;
pub mod laws;
pub mod monomial_oracle;
pub mod padic;
pub mod polyring;

pub use error::{Error, Result};
pub use fparith::{FpScalar, PrimeModulus};
pub use groebner::Ideal;
pub use polyring::{parse_poly, MonomialOrder, Polynomial, Ring, VariableContext};

/// Exact rational numbers used for thresholds, jumping numbers and λ.
pub type Fraction = num_rational::Ratio<i128>;
