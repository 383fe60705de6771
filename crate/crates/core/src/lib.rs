//! Secrecy outage analysis for multi-user scheduling in underlay cognitive
//! radio networks.
//!
//! A set of cognitive users (CUs) share a licensed band with a primary link.
//! Each CU runs at the largest power that keeps its interference at the
//! primary receiver below a tolerable level `I`, and a set of eavesdroppers
//! listen to the uplink towards the cognitive base station. The eavesdroppers
//! either act independently (uncoordinated) or combine their observations with
//! maximal ratio combining (coordinated).
//!
//! The crate evaluates the secrecy outage probability of round-robin, optimal
//! and suboptimal user scheduling in three independent ways:
//!
//! * [`closed_form`]: exact closed-form expressions,
//! * [`oracle`]: direct numerical quadrature of the outage integrals,
//! * [`montecarlo`]: seeded, worker-count independent simulation.
//!
//! [`asymptotics`] derives the outage floors reached as `I` grows without
//! bound and the secrecy diversity orders obtained from their slope against
//! the main-to-eavesdropper ratio.

pub mod asymptotics;
pub mod closed_form;
mod error;
pub mod model;
pub mod montecarlo;
pub mod numeric;
pub mod oracle;
pub mod quadrature;

pub use error::{Error, Result};
pub use model::{ChannelDraw, EavesdropperMode, MerParameterization, Scheme, SystemConfig};
