//! Link budget engine for bidirectional hollow-core fiber submarine cables.
//!
//! The model combines ASE, GN-model nonlinear interference, inter-modal
//! interference and Rayleigh backscatter into a GSNR, maps it to net
//! throughput through a transceiver model, and checks power feed and
//! latency. [`explore`] runs the design-space studies on top of it.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod contour;
pub mod error;
pub mod explore;
pub mod impairments;
pub mod report;
pub mod system;
pub mod transceiver;
pub mod units;

pub use config::{parse_config, RunConfig};
pub use error::{Error, Result};
pub use impairments::{AmplifierSpec, FiberSpec, InverseSnr, SnrBudget};
pub use system::{LinkPlan, OperatingPoint, PowerFeedSpec};
pub use transceiver::{TransceiverModel, TransceiverTable};
