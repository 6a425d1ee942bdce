//! Library half of the command-line workbench: sweep configuration and
//! execution, deterministic emission, and figure-data generation. The binary
//! in `main.rs` is a thin argument layer over these modules.

pub mod config;
pub mod figures;
pub mod output;
pub mod sweep;
