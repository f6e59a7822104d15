//! Proper h-conflict-free colourings.
//!
//! A proper colouring is *h-conflict-free* (h-pcf) when every vertex sees at
//! least `min(h, deg(v))` colours exactly once in its neighbourhood. This crate
//! builds such colourings (greedy, randomized nibble recolouring, and a
//! large-minimum-degree pipeline), verifies them, and computes the exact
//! h-pcf and h-odd chromatic numbers of small graphs.

pub mod colouring;
pub mod error;
pub mod graph;
pub mod greedy;
pub mod mindeg;
pub mod nibble;
pub mod oracle;
pub mod pipeline;
pub mod probtools;
pub mod seed;

pub use colouring::{Colouring, ThresholdSpec, WitnessReport};
pub use error::{Error, Result};
pub use graph::Graph;
