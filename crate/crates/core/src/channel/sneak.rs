//! Length-3 sneak paths through failed selectors, and the noisy read channel.
//!
//! A cell `(m, n)` sees a sneak path through the failed selector at `(i, j)`
//! when `x[m][j] = x[i][j] = x[i][n] = 1`. Only single paths of length three
//! are modelled and overlapping paths do not add up: the degraded reading is
//! always the fixed parallel combination `R0'`.

use rand::Rng;
use rand_distr::StandardNormal;

use super::array::{DataArray, IndicatorArray, ReadbackArray};
use super::params::ResistiveParams;
use super::pattern::SfPattern;
use crate::error::{Error, Result};

fn same_side(what: &'static str, expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            what,
            expected,
            found,
        })
    }
}

/// The OR over `φ` of `x[m][j]·x[i][j]·x[i][n]` for every cell, regardless of
/// the bit stored at `(m, n)`. Row-major, one byte per cell.
pub fn sneak_or_terms(x: &DataArray, phi: &SfPattern) -> Result<Vec<u8>> {
    same_side("SF pattern", x.n(), phi.n())?;
    let n = x.n();
    let mut terms = vec![0u8; n * n];
    let mut cols = Vec::with_capacity(n);
    for &(i, j) in phi.cells() {
        if x.get(i, j) == 0 {
            continue;
        }
        cols.clear();
        cols.extend((0..n).filter(|&c| x.get(i, c) == 1));
        for m in (0..n).filter(|&m| x.get(m, j) == 1) {
            let row = &mut terms[m * n..(m + 1) * n];
            for &c in &cols {
                row[c] = 1;
            }
        }
    }
    Ok(terms)
}

/// Marks the logical-0 cells whose read is disturbed by at least one sneak path.
pub fn sneak_path_indicators(x: &DataArray, phi: &SfPattern) -> Result<IndicatorArray> {
    let mut v = sneak_or_terms(x, phi)?;
    for (t, &b) in v.iter_mut().zip(x.as_slice()) {
        *t &= 1 - b;
    }
    Ok(IndicatorArray::from_raw(x.n(), v))
}

/// Number of failed selectors sitting on a logical-1 cell.
pub fn active_sf_count(x: &DataArray, phi: &SfPattern) -> Result<usize> {
    same_side("SF pattern", x.n(), phi.n())?;
    Ok(phi
        .cells()
        .iter()
        .filter(|&&(i, j)| x.get(i, j) == 1)
        .count())
}

/// Fraction of cells whose sneak-path OR term fires, 1-cells included.
pub fn sp_rate(x: &DataArray, phi: &SfPattern) -> Result<f64> {
    let terms = sneak_or_terms(x, phi)?;
    let fired: usize = terms.iter().map(|&t| t as usize).sum();
    Ok(fired as f64 / terms.len() as f64)
}

/// One read of the whole array: `y = R_x(v) + z`, fresh Gaussian `z` per cell.
pub fn readback<R: Rng + ?Sized>(
    x: &DataArray,
    v: &IndicatorArray,
    params: &ResistiveParams,
    rng: &mut R,
) -> Result<ReadbackArray> {
    same_side("indicator array", x.n(), v.n())?;
    let sigma = params.sigma();
    let y = x
        .as_slice()
        .iter()
        .zip(v.as_slice())
        .map(|(&b, &s)| {
            let z: f64 = rng.sample(StandardNormal);
            params.level(b, s == 1) + sigma * z
        })
        .collect();
    ReadbackArray::new(x.n(), y)
}
