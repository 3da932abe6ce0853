//! Command-line workbench and HTTP session service for CSP with a silent
//! `nil` event, built on [`nilcsp_core`].

pub mod animate;
pub mod cli;
pub mod json;
pub mod server;
pub mod session;

pub use nilcsp_core as core;
