//! Cut machinery for the mixing set with a knapsack constraint,
//!
//! ```text
//! Q = { (y, z) ∈ R+ × {0,1}^n : Σ a_j z_j ≤ p,  y + h_j z_j ≥ h_j  for all j }
//! ```
//!
//! which arises from chance-constrained programs with a random right-hand
//! side over a finite distribution. The crate provides
//!
//! * the instance model and the chance-constraint front end ([`instance`]),
//! * exact optimization over the nested knapsack sets ([`knapsack`]),
//! * the coefficient-polyhedron membership test for cuts
//!   `y + Σ α_j z_j ≥ β` ([`cut`]),
//! * an exact rational simplex ([`lp`]),
//! * exact separation by row generation ([`separation`]),
//! * the explicit facet families and their tight points ([`fdi`]),
//! * polynomial separation over a structured facet subfamily
//!   ([`structured`]),
//! * sign-pattern (heuristic) separation ([`heuristic`]),
//! * a brute-force hull oracle for small instances ([`hull`]).
//!
//! All arithmetic is exact ([`Rational`]). Scenario indices are 0-based
//! throughout; a prefix count `k` means "scenarios `0..k`". The crate is
//! `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;

pub mod cut;
pub mod error;
pub mod fdi;
pub mod heuristic;
pub mod hull;
pub mod instance;
pub mod knapsack;
pub mod linalg;
pub mod lp;
pub mod rational;
pub mod separation;
pub mod structured;

pub use cut::{GMembershipReport, MixingCut, Provenance};
pub use error::{Error, Result};
pub use fdi::FdiSpec;
pub use heuristic::SignPattern;
pub use hull::HullPoint;
pub use instance::{MixKnapInstance, ScenarioSource};
pub use lp::{LpProblem, LpSolution, LpStatus};
pub use rational::Rational;
pub use separation::{SeparationQuery, SeparationResult, Verdict};
