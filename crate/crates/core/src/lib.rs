//! Weight distributions of irreducible cyclic codes over finite fields.
//!
//! The code of length `n = (r-1)/N` over GF(q) is
//! `{ (Tr_{r/q}(beta * theta^i))_{i<n} : beta in GF(r) }` with `theta = alpha^N`.
//! Its weights are governed by Gaussian periods of order
//! `N1 = gcd((r-1)/(q-1), N)`; this crate evaluates them in closed form where
//! a formula is known and falls back to exact enumeration otherwise.

pub mod closed_forms;
pub mod cyclotomy;
pub mod error;
pub mod ff;
pub mod numtheory;
pub mod oracle;
pub mod weights;

pub use error::{Error, Result};
pub use ff::{FieldElement, FieldTower, TowerConfig, TraceLevel};

pub use weights::{code_params, weight_distribution, CodeSpec, Method, Strategy, WeightDistribution};
