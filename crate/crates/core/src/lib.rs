pub mod bench;
pub mod cli;
pub mod config;
pub mod error;
pub mod log;
pub mod meta;
pub mod persistence;
pub mod problem;
pub mod smgo;
pub mod surrogate;
