//! Experiment harness around the entropy-greedy library: flat key-value
//! configs, reproducible experiment runs with hard/soft verdicts, CSV tables,
//! and standalone SVG plots with the data embedded as comments.

pub mod config;
pub mod experiments;
pub mod report;
pub mod svg;
