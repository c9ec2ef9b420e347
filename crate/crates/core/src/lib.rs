//! Monte Carlo uncertainty analysis and global sensitivity analysis.
//!
//! The crate follows the classic five-step workflow: define uncertain factors
//! ([`distributions`]), generate a sample ([`design`], optionally reordered by
//! [`correlate`]), evaluate a model over it ([`models`], [`runner`]), then
//! summarize the output ([`uncertainty`]) and apportion its variance to the
//! inputs ([`sensitivity`]). The [`cli`] module drives the same pipeline from
//! a JSON configuration file.

pub mod cli;
pub mod correlate;
pub mod design;
pub mod distributions;
mod error;
pub mod models;
pub mod runner;
pub mod sensitivity;
pub mod stats;
pub mod uncertainty;

pub use error::{Error, Result};
