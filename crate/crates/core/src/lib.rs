//! Sampled-data bilateral teleoperation: discrete controllers, frequency-domain
//! passivity checks, and a time-domain simulator with energy monitoring.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod control;
pub mod error;
pub mod freq;
pub mod model;
pub mod sim;

pub use error::{Error, Result};
