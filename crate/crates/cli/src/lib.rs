//! Library surface of the experiment runner, used by the binary and by
//! the acceptance suite.

pub mod config;
pub mod experiments;
