//! Adaptive Simpson quadrature with Richardson correction.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Quadrature settings shared by every entropy integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadOptions {
    /// Absolute error target for the whole integral.
    pub tol: f64,
    /// Maximum bisection depth below each unit-width starting panel.
    pub max_depth: u32,
    /// Half-width margin, in noise standard deviations, beyond the outermost means.
    pub truncation_sigmas: f64,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            max_depth: 40,
            truncation_sigmas: 10.0,
        }
    }
}

struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

fn refine<F: Fn(f64) -> f64>(
    f: &F,
    p: Panel,
    tol: f64,
    depth: u32,
    max_depth: u32,
) -> std::result::Result<f64, f64> {
    let m = 0.5 * (p.a + p.b);
    let lm = 0.5 * (p.a + m);
    let rm = 0.5 * (m + p.b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(p.a, m, p.fa, flm, p.fm);
    let right = simpson(m, p.b, p.fm, frm, p.fb);
    let delta = left + right - p.whole;
    if delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    if depth >= max_depth {
        return Err(delta.abs() / 15.0);
    }
    let l = refine(
        f,
        Panel {
            a: p.a,
            b: m,
            fa: p.fa,
            fm: flm,
            fb: p.fm,
            whole: left,
        },
        0.5 * tol,
        depth + 1,
        max_depth,
    )?;
    let r = refine(
        f,
        Panel {
            a: m,
            b: p.b,
            fa: p.fm,
            fm: frm,
            fb: p.fb,
            whole: right,
        },
        0.5 * tol,
        depth + 1,
        max_depth,
    )?;
    Ok(l + r)
}

/// Integrates `f` over `[a, b]` to absolute accuracy `opts.tol`.
///
/// The interval is first cut into panels of width at most one, each refined
/// adaptively with a share of the tolerance proportional to its width, so that
/// narrow features of width ~1 cannot slip between the initial sample points.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, opts: &QuadOptions) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let panels = (hi - lo).ceil().max(1.0) as usize;
    let width = (hi - lo) / panels as f64;
    let panel_tol = opts.tol / panels as f64;
    let mut total = 0.0;
    let mut fa = f(lo);
    for i in 0..panels {
        let pa = lo + i as f64 * width;
        let pb = if i + 1 == panels {
            hi
        } else {
            lo + (i + 1) as f64 * width
        };
        let fm = f(0.5 * (pa + pb));
        let fb = f(pb);
        let whole = simpson(pa, pb, fa, fm, fb);
        let panel = Panel {
            a: pa,
            b: pb,
            fa,
            fm,
            fb,
            whole,
        };
        total += refine(&f, panel, panel_tol, 0, opts.max_depth).map_err(|residual| {
            Error::NonConvergence {
                lo: pa,
                hi: pb,
                max_depth: opts.max_depth,
                residual,
            }
        })?;
        fa = fb;
    }
    Ok(sign * total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomials_and_gaussians() {
        let o = QuadOptions::default();
        let cubic = integrate(|x| x * x * x - 2.0 * x, -1.0, 3.0, &o).unwrap();
        assert!((cubic - 12.0).abs() < 1e-12);
        let gauss = integrate(|x| (-x * x / 2.0).exp(), -12.0, 12.0, &o).unwrap();
        assert!((gauss - (2.0 * PI).sqrt()).abs() < 1e-9);
        let rev = integrate(|x| x, 2.0, 0.0, &o).unwrap();
        assert!((rev + 2.0).abs() < 1e-14);
        assert_eq!(integrate(|x| x, 1.0, 1.0, &o).unwrap(), 0.0);
    }

    #[test]
    fn depth_budget_is_enforced() {
        let o = QuadOptions {
            tol: 1e-14,
            max_depth: 2,
            ..QuadOptions::default()
        };
        let err = integrate(|x| (50.0 * x).sin().abs(), 0.0, 1.0, &o).unwrap_err();
        assert!(matches!(err, Error::NonConvergence { max_depth: 2, .. }));
    }
}
