//! Finite-array Monte Carlo checks of the asymptotic results: scattered
//! failure patterns, the SP rate, and the conditional information density.
//!
//! Every trial draws from its own ChaCha stream keyed by `(seed, check)` and
//! indexed by the trial number, and per-trial results are reduced in trial
//! order. Estimates are therefore identical for any rayon pool size.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{
    readback, sample_sf_pattern, sneak_or_terms, sneak_path_indicators, sp_rate, DataArray,
    ReadbackArray, ResistiveParams, SfPattern,
};
use crate::error::{check_probability, invalid, Error, Result};
use crate::infotheory::{log_add, spectrum, SfDistribution, SpectrumAtom};
use crate::quad::QuadOptions;

/// Random source used throughout the simulations.
pub type SimRng = ChaCha8Rng;

/// Independent stream for trial `index` of the experiment tagged `stream`.
pub fn trial_rng(seed: u64, stream: u64, index: u64) -> SimRng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&stream.to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(index);
    rng
}

pub(crate) mod streams {
    pub const SCATTERED: u64 = 1;
    pub const SP_RATE: u64 = 2;
    pub const SPECTRUM: u64 = 3;
    pub const SNEAK_FRACTION: u64 = 4;
}

/// Neumaier-compensated sum.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0f64;
    let mut carry = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            carry += (sum - t) + v;
        } else {
            carry += (v - t) + sum;
        }
        sum = t;
    }
    sum + carry
}

/// Sample mean of a Monte Carlo experiment against its closed-form prediction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub trials: usize,
    pub target: f64,
    pub z_score: f64,
}

fn z_score(mean: f64, std_error: f64, target: f64) -> f64 {
    if std_error > 0.0 {
        (mean - target) / std_error
    } else if mean == target {
        0.0
    } else {
        (mean - target).signum() * f64::INFINITY
    }
}

impl McEstimate {
    pub fn from_samples(samples: &[f64], target: f64) -> Self {
        let trials = samples.len();
        let t = trials as f64;
        let mean = compensated_sum(samples.iter().copied()) / t;
        let std_error = if trials > 1 {
            let ss = compensated_sum(samples.iter().map(|v| (v - mean) * (v - mean)));
            (ss / (t - 1.0) / t).sqrt()
        } else {
            0.0
        };
        Self {
            mean,
            std_error,
            trials,
            target,
            z_score: z_score(mean, std_error, target),
        }
    }

    /// The usual 3-sigma acceptance rule.
    pub fn within_three_sigma(&self) -> bool {
        self.z_score.abs() <= 3.0
    }
}

/// Probability that a uniformly drawn `k`-failure pattern in an `n x n` array
/// is scattered: `k! C(n,k)^2 / C(n^2,k)`.
///
/// Evaluated as the product of the ratios `(n - i)^2 / (n^2 - i)`, each in
/// `(0, 1]`, which neither overflows nor loses the exact small cases.
pub fn exact_scattered_probability(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let nn = (n * n) as f64;
    (0..k).fold(1.0, |acc, i| {
        let side = (n - i) as f64;
        acc * (side * side / (nn - i as f64))
    })
}

/// Frequency of scattered patterns among `trials` uniform `k`-subsets.
pub fn estimate_scattered(n: usize, k: usize, trials: usize, seed: u64) -> Result<McEstimate> {
    check_trials(trials)?;
    let hits = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, streams::SCATTERED, t);
            SfPattern::sample_uniform(n, k, &mut rng).map(|p| p.is_scattered() as u8 as f64)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(McEstimate::from_samples(
        &hits,
        exact_scattered_probability(n, k),
    ))
}

/// Absolute tolerance for the finite-`n` SP-rate check, `max(0.02, 5 / sqrt(n))`.
///
/// The SP-rate limit carries no finite-size rate; the `1/sqrt(n)` shape comes
/// from the Chebyshev step of its convergence argument.
pub fn sp_rate_tolerance(n: usize) -> f64 {
    (5.0 / (n as f64).sqrt()).max(0.02)
}

/// SP rate of random scattered patterns with exactly `k_active` active
/// failures (their cells forced to 1), against `1 - (1 - q^2)^k_active`.
pub fn estimate_sp_rate(
    n: usize,
    q: f64,
    k_active: usize,
    trials: usize,
    seed: u64,
) -> Result<McEstimate> {
    check_probability("q", q)?;
    check_trials(trials)?;
    if k_active > n {
        return Err(invalid(
            "k_active",
            format!("{k_active} scattered failures exceed n = {n}"),
        ));
    }
    let rates = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, streams::SP_RATE, t);
            let phi = SfPattern::sample_scattered(n, k_active, &mut rng)?;
            let mut x = DataArray::sample(n, q, &mut rng)?;
            for &(i, j) in phi.cells() {
                x.set(i, j, true);
            }
            sp_rate(&x, &phi)
        })
        .collect::<Result<Vec<f64>>>()?;
    let target = 1.0 - (1.0 - q * q).powi(k_active as i32);
    Ok(McEstimate::from_samples(&rates, target))
}

/// Fraction of logical-0 cells hit by a sneak path when the pattern is drawn
/// from `dist`, against the closed form `1 - sum_k p_k (1 - q^3)^k`.
pub fn estimate_sneak_fraction(
    n: usize,
    q: f64,
    dist: &SfDistribution,
    trials: usize,
    seed: u64,
) -> Result<McEstimate> {
    check_probability("q", q)?;
    check_trials(trials)?;
    let fractions = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, streams::SNEAK_FRACTION, t);
            let phi = sample_sf_pattern(dist, n, &mut rng)?;
            let x = DataArray::sample(n, q, &mut rng)?;
            let v = sneak_path_indicators(&x, &phi)?;
            let zeros = n * n - x.count_ones();
            Ok(if zeros == 0 {
                0.0
            } else {
                v.count() as f64 / zeros as f64
            })
        })
        .collect::<Result<Vec<f64>>>()?;
    let clear: f64 = dist
        .probs()
        .iter()
        .enumerate()
        .map(|(k, p)| p * (1.0 - q * q * q).powi(k as i32))
        .sum();
    Ok(McEstimate::from_samples(&fractions, 1.0 - clear))
}

/// Log-likelihood ratio of one array read, split by where the information sits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MiDensity {
    /// `log2 P(y | x, phi) - log2 P(y | x_sf, phi)` over the whole array.
    pub log_ratio_bits: f64,
    /// `n^2`.
    pub cells: usize,
    /// Cells outside every failure row and column.
    pub informative_cells: usize,
}

impl MiDensity {
    /// The density rate normalised by the full array size.
    pub fn per_cell(&self) -> f64 {
        self.log_ratio_bits / self.cells as f64
    }

    /// The density rate over the cells that actually carry a ratio; same
    /// limit as [`Self::per_cell`], without the `(2kN - k^2)/N^2` shortfall.
    pub fn per_informative_cell(&self) -> f64 {
        if self.informative_cells == 0 {
            0.0
        } else {
            self.log_ratio_bits / self.informative_cells as f64
        }
    }
}

/// Conditional information density of one read given the failure pattern and
/// the bits on the failure rows and columns.
///
/// For a cell off every failure line, its sneak status is fixed by those bits,
/// so its output law given `x_sf` is the two-input mixture at that status.
/// Cells on a failure line are part of `x_sf` and their likelihood ratio is
/// exactly one.
pub fn mi_density_given_sf(
    x: &DataArray,
    y: &ReadbackArray,
    phi: &SfPattern,
    q: f64,
    params: &ResistiveParams,
) -> Result<MiDensity> {
    check_probability("q", q)?;
    let n = x.n();
    for (what, found) in [("readback array", y.n()), ("SF pattern", phi.n())] {
        if found != n {
            return Err(Error::DimensionMismatch {
                what,
                expected: n,
                found,
            });
        }
    }
    let terms = sneak_or_terms(x, phi)?;
    let (sf_rows, sf_cols) = phi.sf_lines();
    let two_var = 2.0 * params.sigma() * params.sigma();
    let (ln_q, ln_p) = (q.ln(), (-q).ln_1p());
    let mut informative = 0usize;
    let ratios = (0..n)
        .filter(|&r| !sf_rows[r])
        .flat_map(|r| (0..n).filter(|&c| !sf_cols[c]).map(move |c| (r, c)))
        .map(|(r, c)| {
            informative += 1;
            let sneak = terms[r * n + c] == 1;
            let yv = y.get(r, c);
            let e0 = -(yv - params.level(0, sneak)).powi(2) / two_var;
            let e1 = -(yv - params.r1()).powi(2) / two_var;
            let mix = log_add(ln_p + e0, ln_q + e1);
            let own = if x.get(r, c) == 1 { e1 } else { e0 };
            (own - mix) / std::f64::consts::LN_2
        });
    let log_ratio_bits = compensated_sum(ratios);
    Ok(MiDensity {
        log_ratio_bits,
        cells: n * n,
        informative_cells: informative,
    })
}

/// Empirical information spectrum of `trials` independent arrays.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEstimate {
    /// Theoretical atoms, `k'` ascending.
    pub atoms: Vec<SpectrumAtom>,
    /// Per-trial density rate (per informative cell), in trial order.
    pub values: Vec<f64>,
    /// Trials assigned to each atom by nearest location.
    pub counts: Vec<usize>,
}

impl SpectrumEstimate {
    pub fn trials(&self) -> usize {
        self.values.len()
    }

    /// Index of the nearest atom, i.e. midpoint thresholds between neighbours.
    pub fn nearest_atom(&self, value: f64) -> usize {
        nearest(&self.atoms, value)
    }

    pub fn empirical_weights(&self) -> Vec<f64> {
        let t = self.trials() as f64;
        self.counts.iter().map(|&c| c as f64 / t).collect()
    }

    /// Mean and standard error of the values assigned to atom `index`.
    pub fn cluster(&self, index: usize) -> Option<McEstimate> {
        let members: Vec<f64> = self
            .values
            .iter()
            .copied()
            .filter(|&v| self.nearest_atom(v) == index)
            .collect();
        (!members.is_empty())
            .then(|| McEstimate::from_samples(&members, self.atoms[index].location))
    }

    /// Atom weight as a Bernoulli frequency, with the multinomial marginal
    /// standard error `sqrt(w (1 - w) / trials)` of the theoretical weight.
    pub fn weight_estimate(&self, index: usize) -> McEstimate {
        let t = self.trials() as f64;
        let w = self.atoms[index].weight;
        let mean = self.counts[index] as f64 / t;
        let std_error = (w * (1.0 - w) / t).sqrt();
        McEstimate {
            mean,
            std_error,
            trials: self.trials(),
            target: w,
            z_score: z_score(mean, std_error, w),
        }
    }
}

fn nearest(atoms: &[SpectrumAtom], value: f64) -> usize {
    atoms
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |(best, dist), (i, a)| {
            let d = (value - a.location).abs();
            if d < dist {
                (i, d)
            } else {
                (best, dist)
            }
        })
        .0
}

/// Simulates `trials` arrays (fresh pattern, data and noise each) and
/// clusters their conditional density rates around the theoretical atoms.
pub fn estimate_spectrum(
    n: usize,
    q: f64,
    params: &ResistiveParams,
    dist: &SfDistribution,
    trials: usize,
    seed: u64,
    quad: &QuadOptions,
) -> Result<SpectrumEstimate> {
    check_trials(trials)?;
    let atoms = spectrum(q, params, dist, quad)?;
    let values = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, streams::SPECTRUM, t);
            let phi = sample_sf_pattern(dist, n, &mut rng)?;
            let x = DataArray::sample(n, q, &mut rng)?;
            let v = sneak_path_indicators(&x, &phi)?;
            let y = readback(&x, &v, params, &mut rng)?;
            Ok(mi_density_given_sf(&x, &y, &phi, q, params)?.per_informative_cell())
        })
        .collect::<Result<Vec<f64>>>()?;
    let mut counts = vec![0; atoms.len()];
    for &v in &values {
        counts[nearest(&atoms, v)] += 1;
    }
    Ok(SpectrumEstimate {
        atoms,
        values,
        counts,
    })
}

fn check_trials(trials: usize) -> Result<()> {
    if trials == 0 {
        Err(invalid("trials", "needs at least one trial"))
    } else {
        Ok(())
    }
}

/// One line of a validation report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationCheck {
    pub check: String,
    pub n: usize,
    pub q: f64,
    pub trials: usize,
    pub mean: f64,
    pub std_error: f64,
    pub target: f64,
    pub z_score: f64,
    pub pass: bool,
}

impl ValidationCheck {
    /// Exact finite-`n` target: passes when `|z| <= 3`.
    pub fn exact(check: impl Into<String>, n: usize, q: f64, est: &McEstimate) -> Self {
        Self::with_pass(check, n, q, est, est.within_three_sigma())
    }

    /// Asymptotic target: passes when `|mean - target| <= tolerance`.
    pub fn asymptotic(
        check: impl Into<String>,
        n: usize,
        q: f64,
        est: &McEstimate,
        tolerance: f64,
    ) -> Self {
        Self::with_pass(check, n, q, est, (est.mean - est.target).abs() <= tolerance)
    }

    fn with_pass(check: impl Into<String>, n: usize, q: f64, est: &McEstimate, pass: bool) -> Self {
        Self {
            check: check.into(),
            n,
            q,
            trials: est.trials,
            mean: est.mean,
            std_error: est.std_error,
            target: est.target,
            z_score: est.z_score,
            pass,
        }
    }
}
