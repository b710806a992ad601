//! Scenario configs, CSV/SVG output, and the command pipelines behind the
//! `lenspoint` binary.

pub mod commands;
pub mod config;
pub mod manifest;
pub mod svg;
pub mod table;
