//! Exponential sums weighted by additive functions, and a numerical
//! Hardy–Littlewood pipeline for the ternary problem
//! `r_Ω(N) = Σ_{n₁+n₂+n₃=N} Ω(n₁)Ω(n₂)Ω(n₃)`.
//!
//! Module map:
//!
//! * [`ntcore`]: smallest-prime-factor sieve and exact arithmetic kernels.
//! * [`additive`]: additive functions by prime-power rule, value tables.
//! * [`expsum`]: `S_f(α; X)`, grid evaluation, exact power integrals.
//! * [`diophantine`]: continued fractions, Farey sequences, arc dissection.
//! * [`bounds`]: closed-form bounds and the ratio scanner.
//! * [`circle`]: congruence sums, fitted coefficients, singular series,
//!   arc integrals and the `r_Ω` prediction.
//! * [`convolve`]: exact `r_f(N)` by direct and transform routes.
//! * [`verify`]: the invariant suite behind `omega verify`.

pub mod additive;
pub mod bounds;
pub mod circle;
pub mod convolve;
pub mod diophantine;
pub mod error;
pub mod expsum;
pub mod ntcore;
mod ntt;
pub mod numeric;
pub mod verify;

pub use additive::{AdditiveFunction, ValueTable};
pub use error::{Error, Result};
pub use ntcore::FactorTable;
