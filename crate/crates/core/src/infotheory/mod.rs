//! Mutual information of the binary-input Gaussian read channel, the
//! asymptotic information spectrum of the sneak-path channel, and the rates
//! that follow from it.
//!
//! All rates are in bits per cell. Integrals run in normalised output units
//! `u = (y - (R0 + R1) / 2) / sigma`, where a logical 1 reads at `-gamma`, a
//! clean logical 0 at `+gamma` and a sneak-degraded logical 0 at
//! `2 gamma' - gamma`.

mod dist;

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

pub use dist::{ln_binomial, SfDistribution, Truncation};

use crate::channel::ResistiveParams;
use crate::error::{check_probability, invalid, Result};
use crate::quad::{integrate, QuadOptions};

pub(crate) use dist::binomial;

/// One Dirac mass of the asymptotic information spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumAtom {
    /// Number of active selector failures `k'` this status corresponds to.
    pub active_sfs: usize,
    /// Information rate of the status, bits per cell.
    pub location: f64,
    pub weight: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RateMode {
    Single,
    Across,
    TinSingle,
    TinAcross,
}

/// One sample of a rate curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatePoint {
    pub q: f64,
    pub rate: f64,
    pub mode: RateMode,
}

/// Which interference probability the single-array TIN decoder assumes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TinSingleVariant {
    /// Worst status: all K failures active, `A = 1 - (1 - q^2)^K`.
    #[default]
    WorstK,
    /// Worst cardinality, active count averaged: `A = 1 - (1 - q^3)^K`.
    Ergodic,
}

/// Source of the sneak-path probability seen by a TIN decoder.
#[derive(Debug, Clone, Copy)]
pub enum TinMode<'a> {
    Across(&'a SfDistribution),
    Single {
        kmax: usize,
        variant: TinSingleVariant,
    },
}

#[inline]
pub(crate) fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Log of a unit-variance Gaussian mixture, dropping the `ln sqrt(2 pi)` constant.
#[inline]
fn ln_mixture(u: f64, comps: &[(f64, f64)]) -> f64 {
    comps.iter().fold(f64::NEG_INFINITY, |acc, &(ln_w, mean)| {
        let d = u - mean;
        log_add(acc, ln_w - 0.5 * d * d)
    })
}

fn ln_weights(comps: &[(f64, f64)]) -> Vec<(f64, f64)> {
    comps
        .iter()
        .filter(|(w, _)| *w > 0.0)
        .map(|&(w, m)| (w.ln(), m))
        .collect()
}

/// I(X; Y) in bits for `P(X = 1) = q`, where each input selects a mixture of
/// unit-variance Gaussians given as `(weight, mean)` components.
pub fn binary_input_mi(
    q: f64,
    zero: &[(f64, f64)],
    one: &[(f64, f64)],
    quad: &QuadOptions,
) -> Result<f64> {
    check_probability("q", q)?;
    if q == 0.0 || q == 1.0 {
        return Ok(0.0);
    }
    let zero = ln_weights(zero);
    let one = ln_weights(one);
    let means = zero.iter().chain(&one).map(|c| c.1);
    let lo = means.clone().fold(f64::INFINITY, f64::min) - quad.truncation_sigmas;
    let hi = means.fold(f64::NEG_INFINITY, f64::max) + quad.truncation_sigmas;
    let (ln_q, ln_p) = (q.ln(), (-q).ln_1p());
    let norm = (2.0 * std::f64::consts::PI).sqrt().recip();
    let f = |u: f64| {
        let l0 = ln_mixture(u, &zero);
        let l1 = ln_mixture(u, &one);
        let lg = log_add(ln_p + l0, ln_q + l1);
        let mut acc = 0.0;
        if l0 > f64::NEG_INFINITY {
            acc += (1.0 - q) * l0.exp() * (l0 - lg);
        }
        if l1 > f64::NEG_INFINITY {
            acc += q * l1.exp() * (l1 - lg);
        }
        acc * norm
    };
    // quadrature error may push the value just outside [0, H2(q)]
    Ok((integrate(f, lo, hi, quad)? / LN_2).clamp(0.0, binary_entropy(q)))
}

/// `C_q(gamma)`: mutual information of the binary-input channel with outputs
/// `N(+gamma, 1)` for a 0 and `N(-gamma, 1)` for a 1, `P(1) = q`, in bits.
pub fn cq(q: f64, gamma: f64, quad: &QuadOptions) -> Result<f64> {
    check_probability("q", q)?;
    if !(gamma >= 0.0 && gamma.is_finite()) {
        return Err(invalid(
            "gamma",
            format!("{gamma} is not a finite non-negative number"),
        ));
    }
    if gamma == 0.0 {
        return Ok(0.0);
    }
    binary_input_mi(q, &[(1.0, gamma)], &[(1.0, -gamma)], quad)
}

/// `C_q` of the clean and of the sneak-degraded channel, `(C_q(gamma), C_q(gamma'))`.
pub fn clean_and_degraded(
    q: f64,
    params: &ResistiveParams,
    quad: &QuadOptions,
) -> Result<(f64, f64)> {
    Ok((
        cq(q, params.gamma(), quad)?,
        cq(q, params.gamma_prime(), quad)?,
    ))
}

fn status_rate(clean: f64, degraded: f64, q: f64, active: usize) -> f64 {
    degraded + (1.0 - q * q).powi(active as i32) * (clean - degraded)
}

/// Probability that `k` failures leave exactly `k'` active when each cell holds a 1 w.p. `q`.
fn active_pmf(k: usize, active: usize, q: f64) -> f64 {
    binomial(k, active) * q.powi(active as i32) * (1.0 - q).powi((k - active) as i32)
}

/// The K+1 atoms of the limiting information spectrum, `k'` ascending
/// (locations descending).
pub fn spectrum(
    q: f64,
    params: &ResistiveParams,
    dist: &SfDistribution,
    quad: &QuadOptions,
) -> Result<Vec<SpectrumAtom>> {
    let (clean, degraded) = clean_and_degraded(q, params, quad)?;
    let p = dist.probs();
    Ok((0..=dist.kmax())
        .map(|active| SpectrumAtom {
            active_sfs: active,
            location: status_rate(clean, degraded, q, active),
            weight: (active..=dist.kmax())
                .map(|k| p[k] * active_pmf(k, active, q))
                .sum(),
        })
        .collect())
}

/// Spectral inf-information rate of single-array coding at fixed `q`: the
/// rate of the worst status, all `kmax` failures active.
pub fn single_array_rate(
    q: f64,
    params: &ResistiveParams,
    kmax: usize,
    quad: &QuadOptions,
) -> Result<f64> {
    let (clean, degraded) = clean_and_degraded(q, params, quad)?;
    Ok(status_rate(clean, degraded, q, kmax))
}

/// `sum_k p_k (1 - q^3)^k`, the probability that a logical-0 cell escapes every sneak path.
fn sneak_free_probability(q: f64, dist: &SfDistribution) -> f64 {
    let clear = 1.0 - q * q * q;
    dist.probs()
        .iter()
        .enumerate()
        .map(|(k, p)| p * clear.powi(k as i32))
        .sum()
}

/// Ergodic rate of across-array coding at fixed `q`: the spectrum mean.
pub fn across_array_rate(
    q: f64,
    params: &ResistiveParams,
    dist: &SfDistribution,
    quad: &QuadOptions,
) -> Result<f64> {
    let (clean, degraded) = clean_and_degraded(q, params, quad)?;
    Ok(degraded + (clean - degraded) * sneak_free_probability(q, dist))
}

/// Rate of a decoder that treats sneak paths as i.i.d. noise: each logical-0
/// read is `R0'` with probability `sp_probability`, `R0` otherwise.
pub fn tin_rate(
    q: f64,
    params: &ResistiveParams,
    sp_probability: f64,
    quad: &QuadOptions,
) -> Result<f64> {
    check_probability("sp_probability", sp_probability)?;
    let gamma = params.gamma();
    let sneak_mean = 2.0 * params.gamma_prime() - gamma;
    binary_input_mi(
        q,
        &[(1.0 - sp_probability, gamma), (sp_probability, sneak_mean)],
        &[(1.0, -gamma)],
        quad,
    )
}

/// Interference probability `A` fed to [`tin_rate`].
pub fn tin_sp_probability(q: f64, mode: TinMode<'_>) -> f64 {
    match mode {
        TinMode::Across(dist) => 1.0 - sneak_free_probability(q, dist),
        TinMode::Single { kmax, variant } => {
            let escape = match variant {
                TinSingleVariant::WorstK => 1.0 - q * q,
                TinSingleVariant::Ergodic => 1.0 - q * q * q,
            };
            1.0 - escape.powi(kmax as i32)
        }
    }
}

/// Binary entropy in bits.
pub fn binary_entropy(q: f64) -> f64 {
    let h = |p: f64| if p > 0.0 { -p * p.log2() } else { 0.0 };
    h(q) + h(1.0 - q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quad() -> QuadOptions {
        QuadOptions::default()
    }

    #[test]
    fn reference_capacities() {
        assert!((cq(0.5, 9.0, &quad()).unwrap() - 1.0).abs() < 1e-3);
        assert!((cq(0.5, 1.0, &quad()).unwrap() - 0.4861).abs() < 1e-3);
    }

    #[test]
    fn zero_gap_carries_nothing() {
        for q in [0.0, 0.2, 0.5, 0.9] {
            assert_eq!(cq(q, 0.0, &quad()).unwrap(), 0.0);
        }
        assert_eq!(cq(0.0, 3.0, &quad()).unwrap(), 0.0);
        assert!(cq(1.2, 3.0, &quad()).is_err());
        assert!(cq(0.5, -1.0, &quad()).is_err());
    }

    #[test]
    fn bounded_by_input_entropy() {
        for q in [0.05, 0.2, 0.5, 0.77] {
            let h = binary_entropy(q);
            for g in [0.1, 0.5, 1.0, 3.0, 9.0] {
                let c = cq(q, g, &quad()).unwrap();
                assert!((0.0..=h + 1e-9).contains(&c), "q={q} g={g}: {c}");
            }
            assert!((cq(q, 20.0, &quad()).unwrap() - h).abs() < 1e-6);
        }
    }

    #[test]
    fn spectrum_without_failures_is_one_atom() {
        let params = ResistiveParams::reference(50.0).unwrap();
        let atoms = spectrum(0.5, &params, &SfDistribution::point(0), &quad()).unwrap();
        assert_eq!(atoms.len(), 1);
        assert_eq!(atoms[0].weight, 1.0);
        assert_eq!(atoms[0].location, cq(0.5, 9.0, &quad()).unwrap());
    }

    #[test]
    fn spectrum_weights_match_double_sum() {
        let params = ResistiveParams::reference(80.0).unwrap();
        let p = [0.2, 0.3, 0.5];
        let q: f64 = 0.4;
        let dist = SfDistribution::new(p.to_vec()).unwrap();
        let atoms = spectrum(q, &params, &dist, &quad()).unwrap();
        // enumerate (k, k') pairs and accumulate mass per active count
        let mut want = [0.0; 3];
        for (k, pk) in p.iter().enumerate() {
            for active in 0..=k {
                let c = [[1.0, 0.0, 0.0], [1.0, 1.0, 0.0], [1.0, 2.0, 1.0]][k][active];
                want[active] +=
                    pk * c * q.powi(active as i32) * (1.0 - q).powi((k - active) as i32);
            }
        }
        for (a, w) in atoms.iter().zip(want) {
            assert!((a.weight - w).abs() < 1e-15);
        }
    }

    #[test]
    fn rate_limits_in_k() {
        let params = ResistiveParams::reference(100.0).unwrap();
        let q = 0.3;
        let clean = cq(q, params.gamma(), &quad()).unwrap();
        let degraded = cq(q, params.gamma_prime(), &quad()).unwrap();
        assert_eq!(single_array_rate(q, &params, 0, &quad()).unwrap(), clean);
        let far = single_array_rate(q, &params, 2000, &quad()).unwrap();
        assert!((far - degraded).abs() < 1e-12);
        let across = across_array_rate(q, &params, &SfDistribution::point(0), &quad()).unwrap();
        assert_eq!(across, clean);
    }

    #[test]
    fn tin_endpoints() {
        let params = ResistiveParams::reference(100.0).unwrap();
        let q = 0.35;
        let clean = cq(q, params.gamma(), &quad()).unwrap();
        let degraded = cq(q, params.gamma_prime(), &quad()).unwrap();
        assert!((tin_rate(q, &params, 0.0, &quad()).unwrap() - clean).abs() < 1e-9);
        assert!((tin_rate(q, &params, 1.0, &quad()).unwrap() - degraded).abs() < 1e-9);
        for a in [0.05, 0.25, 0.5, 0.75, 0.95] {
            let r = tin_rate(q, &params, a, &quad()).unwrap();
            assert!(degraded <= r && r <= clean, "A={a}: {r}");
        }
    }

    #[test]
    fn tin_probability_edges() {
        let dist = SfDistribution::truncated_binomial(65536, 1e-4, 8).unwrap();
        let single = |variant| TinMode::Single { kmax: 8, variant };
        for mode in [
            TinMode::Across(&dist),
            single(TinSingleVariant::WorstK),
            single(TinSingleVariant::Ergodic),
        ] {
            assert_eq!(tin_sp_probability(0.0, mode), 0.0);
        }
        assert_eq!(
            tin_sp_probability(0.5, TinMode::Across(&SfDistribution::point(0))),
            0.0
        );
        let worst = tin_sp_probability(0.5, single(TinSingleVariant::WorstK));
        assert!((worst - (1.0 - 0.75f64.powi(8))).abs() < 1e-15);
        let erg = tin_sp_probability(0.5, single(TinSingleVariant::Ergodic));
        assert!((erg - (1.0 - 0.875f64.powi(8))).abs() < 1e-15);
    }
}
