//! Exact-transition, event-driven simulation of fully connected excitatory
//! noisy leaky integrate-and-fire networks, together with closed-form
//! synchronization bounds and Monte Carlo estimators to check them against.

#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![cfg_attr(test, allow(clippy::excessive_precision))]

pub mod bounds;
pub mod cascade;
pub mod error;
pub mod io;
pub mod model;
pub mod montecarlo;
pub mod rng;
pub mod simulator;

pub use cascade::{resolve_firing, FiringOutcome};
pub use error::{Error, Result};
pub use model::{NetworkParams, NetworkState, WeightMatrix};
pub use simulator::{InitialCondition, SimConfig, TrialRecord};
