//! Command-line front end, file formats and parallel drivers.

pub mod cli;
pub mod error;
pub mod formats;
pub mod parallel;
pub mod report;
pub mod sim;
