//! folnerlab: computational ergodic theory over countable discrete amenable
//! groups.
//!
//! The crate makes a body of mean/pointwise ergodic theory concrete at desk
//! scale:
//!
//! * [`group`] — exact algebra for Z, Z^d, the discrete Heisenberg group and
//!   their direct products; counting measure stands in for Haar measure.
//! * [`folner`] — Folner sequences with exact invariance and
//!   Tempelman/Shulman temperedness diagnostics, perturbations, and an
//!   adversarial construction showing divergence for an unbounded L^1
//!   observable.
//! * [`systems`] — rotations, shifts, the two-circle non-ergodic fixture,
//!   observables with sup-bound metadata, and seeded measure samplers.
//! * [`averaging`] — ergodic averages over finite subsets, multiple and
//!   iterated product-group averages, translation and perturbation checks.
//! * [`meanlin`] — finite-dimensional mean ergodic operator theory.
//! * [`decomposition`] — empirical ergodic disintegration.
//! * [`recurrence`] — Khintchine density sets, visit and return densities,
//!   the dissipativity probe.
//! * [`experiment`] — the batch runner behind the `folnerlab` binary.
//!
//! Scope restriction stated once and prominently: groups are countable and
//! discrete (sums, never integrals) and all limits are taken along
//! sequences indexed by the natural numbers, never along general nets.
//!
//! See the `examples/` directory for one runnable example per capability.

pub mod averaging;
pub mod decomposition;
pub mod error;
pub mod experiment;
pub mod folner;
pub mod group;
pub mod meanlin;
pub mod recurrence;
pub mod systems;

pub use error::{Error, Result};
