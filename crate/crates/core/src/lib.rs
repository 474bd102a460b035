//! Numerical laboratory for polynomial exponential sums with modular
//! coefficients.
//!
//! The crate computes the objects behind a Bourgain–Sarnak–Ziegler style
//! orthogonality argument for sums `S_a(x, P) = Σ_{n≤x} a(n) e(P(n))`, where
//! `a(n)` is a Hecke eigenform coefficient sequence (here the normalized
//! Ramanujan tau, `λ(n) = τ(n)/n^{11/2}`) or its Dirichlet inverse `μ_f(n)`,
//! and `P` is a real polynomial held in 192-bit fixed point.
//!
//! Modules:
//! - [`coefficients`]: exact τ table, λ and μ_f sequences, divisor functions,
//!   Dirichlet algebra, mean-square reports.
//! - [`sieve`]: the block decomposition of `[1,x]` into prime-times-rough
//!   products and its complement classes, with split sums.
//! - [`phase`]: fixed-point polynomial phases, exponential-sum kernels and
//!   prime-pair correlation sums.
//! - [`arcs`]: Dirichlet rational approximation, major/minor classification,
//!   polynomial splitting and exact progression-sum identities.
//! - [`weyl`]: Weyl differencing sums, reciprocal-distance sums, divisor
//!   moments and the associated envelope reports.
//! - [`verifier`]: orthogonality-criterion assumption checks and decay sweeps.
//!
//! None of the asymptotic inequalities are "verified" as theorems; every
//! bound is reported as a `(lhs, envelope, ratio)` record so that stability
//! can be judged empirically. Exact finite identities (progression splits,
//! character expansions, partitions) are checked hard.

pub mod arcs;
pub mod coefficients;
pub mod error;
pub mod fixed;
pub mod phase;
pub mod primes;
pub mod report;
pub mod sieve;
pub mod verifier;
pub mod weyl;

pub use error::{Error, Result};
pub use report::BoundReport;
