//! Library half of the `qbias` experiment runner; the binary in `main.rs` is
//! a thin argument-parsing wrapper around [`runner::run`].

pub mod config;
pub mod error;
pub mod runner;
