//! Simulation harness, file formats and command-line plumbing around
//! `rrs-core`.
//!
//! - [`alist`] reads and writes sparse parity-check matrices.
//! - [`codes`] resolves code presets and files.
//! - [`harness`] runs the reconciliation protocol, mutual-information
//!   sweeps, coded BER sweeps and leakage audits.
//! - [`stats`] and [`interp`] hold the small statistical helpers they need.
//! - [`config`] and [`cli`] implement the `rrs` binary.

pub mod alist;
pub mod cli;
pub mod codes;
pub mod config;
pub mod harness;
pub mod interp;
pub mod output;
pub mod stats;

mod error;

pub use error::{Error, Result};
