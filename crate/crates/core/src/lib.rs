//! Exact local analysis of `A_n` surface singularities, curve classes and
//! Picard lattices of chains of rational curves.

pub mod catalog;
pub mod divisors;
pub mod ideals;
pub mod lattice;
pub mod linalg;
pub mod parse;
pub mod rational;
pub mod recognizer;
pub mod series;
pub mod uni;

pub use rational::Rational;
pub use series::{CoordChange, Monomial, Series, SeriesError, Var};
pub use uni::Uni;
