//! Generalized Riemann-Lebesgue decomposition integrals.
//!
//! A non-negative function `f` on a finite ground set is integrated against a
//! pair of set functions: a capacity `mu` on the ground set and a set function
//! `nu` on the level axis `[0, inf)`. The integral is the Riemann-Lebesgue
//! integral, with respect to `nu`, of the survival profile
//! `alpha -> mu({s in A : f(s) >= alpha})`.
//!
//! Everything on finite spaces is computed with exact rationals. Only the
//! distorted-power families with non-integer exponents fall back to `f64`,
//! and those values carry an explicit error bound.
//!
//! The crate is `no_std` (it needs `alloc`). File formats, reports and the
//! command line live in the companion `grl` crate.
#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod alpha;
pub mod capacity;
pub mod choquet;
mod error;
pub mod generate;
pub mod grl;
pub mod interval;
pub mod partition;
pub mod rational;
pub mod rl;
pub mod step;
pub mod suite;

pub use alpha::{AlphaCapacity, Atom, Segment};
pub use capacity::{Capacity, GroundSpace, PropertyFlags, Subset};
pub use choquet::choquet;
pub use error::Error;
pub use generate::{random_capacity, CapacityKind};
pub use grl::{grl_integrate, restrict_indicator, survival_finite, GrlReport, ScenarioFinite};
pub use interval::{survival_interval, ScenarioInterval};
pub use partition::{AlphaPartition, Cell, EnvelopeConfig, EnvelopeTrace, TaggedPartition, Verdict};
pub use rational::{Extended, Magnitude, Q};
pub use rl::{rl_integrable_flag, rl_integrate, Method, RlResult};
pub use step::StepFunction;

pub type Result<T, E = Error> = core::result::Result<T, E>;
