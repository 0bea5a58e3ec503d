//! Exact computations behind divisorial instability and automorphism
//! finiteness for blowups of Fano threefolds along curves.
//!
//! * [`arith`]: rationals, polynomials, piecewise polynomials.
//! * [`geometry`]: divisor and curve lattices of a blowup, triple intersections.
//! * [`positivity`]: nefness, Zariski decomposition, piecewise volume.
//! * [`stability`]: `A`, `S` and `β` of a divisor and the resulting verdict.
//! * [`autforms`]: infinitesimal and finite stabilizers of quadric configurations.
//! * [`classify`]: invariant tables and the smooth-limit argument.

pub mod arith;
pub mod autforms;
pub mod classify;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod positivity;
pub mod stability;

pub use error::{Error, Result};
