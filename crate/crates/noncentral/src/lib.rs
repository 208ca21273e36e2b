//! Mixture representations of noncentral distributions.
//!
//! For a symmetric random variable `X` and a shift `delta != 0`, the laws of
//! `|X + delta|` and `(X + delta)^2` admit mixture representations of the form
//! `sum_n w(n) h_n` with a probability mass function `w` on the nonnegative
//! integers and a family of densities `h_n` on the positive half-line. The
//! canonical example is the noncentral chi-squared distribution as a Poisson
//! mixture of central chi-squared distributions with odd degrees of freedom.
//!
//! This crate builds those representations for the normal, logistic and
//! hyperbolic secant base laws, a two-series family of alternative normal
//! representations, and the induced non-canonical mixtures of the Poisson
//! family. Every representation carries a certified truncation bound, and the
//! [`verify`] module cross-checks each identity numerically (pointwise density
//! comparison, coefficient identities, seeded Monte Carlo, and a two-state
//! Markov chain local-time simulation).

pub mod cli;
pub mod distributions;
pub mod mixtures;
pub mod quad;
pub mod rng;
pub mod series;
pub mod special;
pub mod verify;

mod error;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
