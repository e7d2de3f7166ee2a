use std::path::Path;

use rayon::prelude::*;
use sneakpath_core::{
    across_array_rate, estimate_scattered, estimate_sp_rate, estimate_spectrum, optimize_q,
    readback, sample_sf_pattern, single_array_rate, sneak_path_indicators, sp_rate_tolerance,
    spectrum, tin_rate, tin_sp_probability, trial_rng, DataArray, ResistiveParams, SfDistribution,
    SfPattern, TinMode, TinSingleVariant, ValidationCheck,
};

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::output::{CurveRow, SigmaRow, SpectrumRow};

/// Active failures used by the SP-rate check.
const SP_CHECK_ACTIVE: usize = 2;
/// Largest distance of a spectrum cluster mean from its atom, in bits.
pub const CLUSTER_TOLERANCE: f64 = 0.02;
const SIMULATE_STREAM: u64 = 16;

pub fn spectrum_rows(cfg: &RunConfig) -> CliResult<Vec<SpectrumRow>> {
    let q = cfg.single_q()?;
    let atoms = spectrum(q, &cfg.resistive()?, &cfg.distribution()?, &cfg.quad)?;
    Ok(atoms
        .into_iter()
        .map(|a| SpectrumRow {
            k_prime: a.active_sfs,
            location_bits: a.location,
            weight: a.weight,
        })
        .collect())
}

fn tin_single(kmax: usize, variant: TinSingleVariant) -> TinMode<'static> {
    TinMode::Single { kmax, variant }
}

pub fn rate_curve_rows(cfg: &RunConfig) -> CliResult<Vec<CurveRow>> {
    let params = cfg.resistive()?;
    let dist = cfg.distribution()?;
    let quad = &cfg.quad;
    let kmax = dist.kmax();
    let single_mode = tin_single(kmax, cfg.tin_variant);
    let rows = cfg
        .q_grid()?
        .par_iter()
        .map(|&q| {
            Ok(CurveRow {
                q,
                single: single_array_rate(q, &params, kmax, quad)?,
                across: across_array_rate(q, &params, &dist, quad)?,
                tin_single: tin_rate(q, &params, tin_sp_probability(q, single_mode), quad)?,
                tin_across: tin_rate(
                    q,
                    &params,
                    tin_sp_probability(q, TinMode::Across(&dist)),
                    quad,
                )?,
            })
        })
        .collect::<sneakpath_core::Result<Vec<_>>>()?;
    Ok(rows)
}

fn optimized_rates(
    params: &ResistiveParams,
    dist: &SfDistribution,
    cfg: &RunConfig,
) -> CliResult<SigmaRow> {
    let quad = &cfg.quad;
    let opts = &cfg.optimize;
    let kmax = dist.kmax();
    let single_mode = tin_single(kmax, cfg.tin_variant);
    let single = optimize_q(|q| single_array_rate(q, params, kmax, quad), opts)?;
    let across = optimize_q(|q| across_array_rate(q, params, dist, quad), opts)?;
    let tin_s = optimize_q(
        |q| tin_rate(q, params, tin_sp_probability(q, single_mode), quad),
        opts,
    )?;
    let tin_a = optimize_q(
        |q| {
            tin_rate(
                q,
                params,
                tin_sp_probability(q, TinMode::Across(dist)),
                quad,
            )
        },
        opts,
    )?;
    Ok(SigmaRow {
        sigma: params.sigma(),
        R_single: single.rate_star,
        q_single: single.q_star,
        R_across: across.rate_star,
        q_across: across.q_star,
        R_tin_single: tin_s.rate_star,
        R_tin_across: tin_a.rate_star,
    })
}

pub fn rate_vs_sigma_rows(cfg: &RunConfig) -> CliResult<Vec<SigmaRow>> {
    let base = cfg.resistive()?;
    let dist = cfg.distribution()?;
    cfg.sigmas()?
        .into_iter()
        .map(|sigma| {
            let params = base
                .with_sigma(sigma)
                .map_err(|e| CliError::Usage(format!("sigma_grid: {e}")))?;
            optimized_rates(&params, &dist, cfg)
        })
        .collect()
}

/// Runs the Monte Carlo suite on `n x n` arrays.
///
/// Checks against exact finite-`n` values (scattered frequency, spectrum
/// weights) pass at `|z| <= 3`. Checks against asymptotic values (SP rate,
/// spectrum cluster locations) carry a finite-size bias that does not shrink
/// with more trials, so they pass on an absolute tolerance instead.
pub fn validation_checks(cfg: &RunConfig) -> CliResult<Vec<ValidationCheck>> {
    if cfg.trials < 100 {
        return Err(CliError::Usage(format!(
            "trials: validation needs at least 100, got {}",
            cfg.trials
        )));
    }
    let q = cfg.single_q()?;
    let params = cfg.resistive()?;
    let dist = cfg.distribution()?;
    let (n, trials, seed) = (cfg.n, cfg.trials, cfg.seed);
    let mut checks = Vec::new();

    let k = dist.kmax().min(n);
    let scattered = estimate_scattered(n, k, trials, seed)?;
    checks.push(ValidationCheck::exact(
        format!("scattered_k{k}"),
        n,
        q,
        &scattered,
    ));

    let k_active = SP_CHECK_ACTIVE.min(n);
    let sp = estimate_sp_rate(n, q, k_active, trials, seed)?;
    checks.push(ValidationCheck::asymptotic(
        format!("sp_rate_k{k_active}"),
        n,
        q,
        &sp,
        sp_rate_tolerance(n),
    ));

    let spec = estimate_spectrum(n, q, &params, &dist, trials, seed, &cfg.quad)?;
    for (i, atom) in spec.atoms.iter().enumerate() {
        let k = atom.active_sfs;
        checks.push(ValidationCheck::exact(
            format!("spectrum_weight_k{k}"),
            n,
            q,
            &spec.weight_estimate(i),
        ));
        if let Some(cluster) = spec.cluster(i) {
            checks.push(ValidationCheck::asymptotic(
                format!("spectrum_location_k{k}"),
                n,
                q,
                &cluster,
                CLUSTER_TOLERANCE,
            ));
        }
    }
    Ok(checks)
}

fn parse_rows(rows: &[String]) -> CliResult<DataArray> {
    DataArray::from_grid_str(&rows.join("\n"))
        .map_err(|e| CliError::Usage(format!("simulate.data: {e}")))
}

/// Writes `x.txt`, `phi.json`, `v.txt` and `y.csv` into `dir`.
pub fn simulate(cfg: &RunConfig, dir: &Path) -> CliResult<Vec<String>> {
    let params = cfg.resistive()?;
    let q = cfg.single_q()?;
    let mut rng = trial_rng(cfg.seed, SIMULATE_STREAM, 0);
    let given = cfg.simulate.data.as_deref().map(parse_rows).transpose()?;
    let n = given.as_ref().map_or(cfg.n, DataArray::n);
    let phi = match &cfg.simulate.phi {
        Some(cells) => {
            let cells: Vec<(usize, usize)> = cells.iter().map(|&[r, c]| (r, c)).collect();
            SfPattern::from_one_based(n, &cells)
                .map_err(|e| CliError::Usage(format!("simulate.phi: {e}")))?
        }
        None => sample_sf_pattern(&cfg.distribution()?, n, &mut rng)?,
    };
    let x = match given {
        Some(x) => x,
        None => DataArray::sample(n, q, &mut rng)?,
    };
    let v = sneak_path_indicators(&x, &phi)?;
    let y = readback(&x, &v, &params, &mut rng)?;

    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let files = [
        ("x.txt", x.to_grid_string()),
        ("phi.json", phi.to_json() + "\n"),
        ("v.txt", v.to_grid_string()),
        ("y.csv", y.to_csv_string()),
    ];
    let mut written = Vec::new();
    for (name, body) in files {
        let path = dir.join(name);
        std::fs::write(&path, body).map_err(|e| CliError::io(&path, e))?;
        written.push(path.display().to_string());
    }
    Ok(written)
}
