//! Maximisation of a rate over the input probability `q`.
//!
//! The rate objectives are not known to be unimodal, so a coarse grid over
//! `[0, 1]` picks the best bracket before golden-section refinement.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptimizeOptions {
    pub grid_step: f64,
    /// Final bracket width of the golden-section stage.
    pub tol: f64,
}

impl Default for OptimizeOptions {
    fn default() -> Self {
        Self {
            grid_step: 0.005,
            tol: 1e-4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QOptimum {
    pub grid_q: f64,
    pub grid_rate: f64,
    pub q_star: f64,
    pub rate_star: f64,
}

/// Golden-section search for a maximum of `f` on `[a, b]`, stopping once the
/// bracket is narrower than `tol`. Returns `(x, f(x))` for the better interior point.
pub fn golden_section_max<F>(f: F, mut a: f64, mut b: f64, tol: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while b - a > tol {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2)?;
        }
    }
    Ok(if f1 >= f2 { (x1, f1) } else { (x2, f2) })
}

/// Grid search with step `opts.grid_step` followed by golden-section refinement
/// on the two grid cells around the best grid point.
///
/// Grid points are evaluated in parallel on the current rayon pool; the result
/// does not depend on the pool size.
pub fn optimize_q<F>(rate_fn: F, opts: &OptimizeOptions) -> Result<QOptimum>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    if !(opts.grid_step > 0.0 && opts.grid_step <= 0.5) {
        return Err(invalid(
            "grid_step",
            format!("{} is not in (0, 0.5]", opts.grid_step),
        ));
    }
    if opts.tol.is_nan() || opts.tol <= 0.0 {
        return Err(invalid("tol", "must be positive"));
    }
    let steps = (1.0 / opts.grid_step).round() as usize;
    let grid: Vec<f64> = (0..=steps)
        .map(|i| (i as f64 * opts.grid_step).min(1.0))
        .collect();
    let rates = grid
        .par_iter()
        .map(|&q| rate_fn(q))
        .collect::<Result<Vec<f64>>>()?;
    let best = rates
        .iter()
        .enumerate()
        .fold(0, |best, (i, &r)| if r > rates[best] { i } else { best });
    let lo = grid[best.saturating_sub(1)];
    let hi = grid[(best + 1).min(grid.len() - 1)];
    let (q_ref, r_ref) = golden_section_max(&rate_fn, lo, hi, opts.tol)?;
    let (q_star, rate_star) = if r_ref >= rates[best] {
        (q_ref, r_ref)
    } else {
        (grid[best], rates[best])
    };
    Ok(QOptimum {
        grid_q: grid[best],
        grid_rate: rates[best],
        q_star,
        rate_star,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parabola() {
        let (x, fx) =
            golden_section_max(|x| Ok(-(x - 0.3) * (x - 0.3) + 2.0), 0.0, 1.0, 1e-8).unwrap();
        assert!((x - 0.3).abs() < 1e-7);
        assert!((fx - 2.0).abs() < 1e-12);
    }

    #[test]
    fn grid_escapes_local_maximum() {
        // local bump at 0.2, global peak at 0.8
        let f = |q: f64| {
            Ok(0.5 * (-(q - 0.2).powi(2) / 0.002).exp() + (-(q - 0.8).powi(2) / 0.002).exp())
        };
        let opt = optimize_q(f, &OptimizeOptions::default()).unwrap();
        assert!((opt.q_star - 0.8).abs() < 1e-4);
        assert!(opt.rate_star >= opt.grid_rate);
    }

    #[test]
    fn maximum_on_the_boundary() {
        let opt = optimize_q(Ok, &OptimizeOptions::default()).unwrap();
        assert!(opt.q_star > 1.0 - 1e-4);
        assert_eq!(opt.grid_q, 1.0);
    }

    #[test]
    fn rejects_bad_options() {
        let bad = OptimizeOptions {
            grid_step: 0.0,
            ..Default::default()
        };
        assert!(optimize_q(Ok, &bad).is_err());
    }
}
