//! Finite-size crossbar channel: selector-failure patterns, sneak paths and
//! noisy readback.

mod array;
mod params;
mod pattern;
mod sneak;

pub use array::{DataArray, IndicatorArray, ReadbackArray};
pub use params::{r0_prime, ResistiveParams};
pub use pattern::{sample_sf_pattern, SfPattern};
pub use sneak::{active_sf_count, readback, sneak_or_terms, sneak_path_indicators, sp_rate};
