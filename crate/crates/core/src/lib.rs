//! Channel model, achievable-rate computations and Monte Carlo checks for
//! resistive crossbar memories with failed selector devices.
//!
//! A failed selector at `(i, j)` opens sneak paths that lower the resistance
//! read at other cells. [`channel`] simulates the arrays and sneak indicators,
//! [`infotheory`] evaluates the information spectrum and the rates built on
//! it, and [`montecarlo`] checks the asymptotics on finite arrays.

pub mod channel;
pub mod error;
pub mod infotheory;
pub mod montecarlo;
pub mod optimize;
pub mod quad;

pub use channel::{
    active_sf_count, r0_prime, readback, sample_sf_pattern, sneak_or_terms, sneak_path_indicators,
    sp_rate, DataArray, IndicatorArray, ReadbackArray, ResistiveParams, SfPattern,
};
pub use error::{Error, Result};
pub use infotheory::{
    across_array_rate, binary_entropy, binary_input_mi, clean_and_degraded, cq, ln_binomial,
    single_array_rate, spectrum, tin_rate, tin_sp_probability, RateMode, RatePoint, SfDistribution,
    SpectrumAtom, TinMode, TinSingleVariant, Truncation,
};
pub use montecarlo::{
    estimate_scattered, estimate_sneak_fraction, estimate_sp_rate, estimate_spectrum,
    exact_scattered_probability, mi_density_given_sf, sp_rate_tolerance, trial_rng, McEstimate,
    MiDensity, SimRng, SpectrumEstimate, ValidationCheck,
};
pub use optimize::{golden_section_max, optimize_q, OptimizeOptions, QOptimum};
pub use quad::{integrate, QuadOptions};
