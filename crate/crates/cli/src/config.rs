//! Run configuration read from JSON. Every field is optional; the defaults
//! describe the reference device (1000/100/250 ohm) with a Binomial(65536, 1e-4)
//! failure count bounded at 8.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use sneakpath_core::{
    OptimizeOptions, QuadOptions, ResistiveParams, SfDistribution, TinSingleVariant, Truncation,
};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ParamsConfig {
    pub r0: f64,
    pub r1: f64,
    pub rs: f64,
    pub sigma: f64,
}

impl Default for ParamsConfig {
    fn default() -> Self {
        Self {
            r0: 1000.0,
            r1: 100.0,
            rs: 250.0,
            sigma: 50.0,
        }
    }
}

/// Either the bounded-binomial triple or an explicit `p` vector.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SfConfig {
    pub n: Option<u64>,
    pub mu: Option<f64>,
    pub kmax: Option<usize>,
    pub truncation: Option<Truncation>,
    pub p: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum GridSpec {
    Value(f64),
    List(Vec<f64>),
    Range(Grid),
}

impl GridSpec {
    /// Grid points; ranges are rounded to 12 decimals so that e.g. 0.07
    /// prints as such.
    pub fn values(&self, field: &str) -> CliResult<Vec<f64>> {
        let bad = |message: String| CliError::Usage(format!("{field}: {message}"));
        let values = match self {
            GridSpec::Value(v) => vec![*v],
            GridSpec::List(v) => v.clone(),
            GridSpec::Range(g) => {
                if !(g.step > 0.0 && g.step.is_finite()) {
                    return Err(bad(format!("step {} must be positive", g.step)));
                }
                if g.start.is_nan() || g.stop.is_nan() || g.start > g.stop {
                    return Err(bad(format!("start {} exceeds stop {}", g.start, g.stop)));
                }
                let count = ((g.stop - g.start) / g.step + 1e-9).floor() as usize + 1;
                (0..count)
                    .map(|i| ((g.start + i as f64 * g.step) * 1e12).round() / 1e12)
                    .collect()
            }
        };
        if values.is_empty() {
            return Err(bad("grid is empty".into()));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(bad(format!("{v} is not finite")));
        }
        Ok(values)
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub path: Option<PathBuf>,
    pub format: Option<Format>,
}

/// Hand-built arrays for `simulate`: rows of binary digits and 1-based
/// `[row, col]` failure coordinates.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulateConfig {
    pub data: Option<Vec<String>>,
    pub phi: Option<Vec<[usize; 2]>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub params: ParamsConfig,
    pub sf: SfConfig,
    pub q: Option<GridSpec>,
    pub sigma_grid: Option<GridSpec>,
    pub seed: u64,
    pub trials: usize,
    /// Array side for the Monte Carlo checks and `simulate`.
    pub n: usize,
    pub tin_variant: TinSingleVariant,
    pub output: OutputConfig,
    pub quad: QuadOptions,
    pub optimize: OptimizeOptions,
    pub simulate: SimulateConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            params: ParamsConfig::default(),
            sf: SfConfig::default(),
            q: None,
            sigma_grid: None,
            seed: 0,
            trials: 2000,
            n: 256,
            tin_variant: TinSingleVariant::default(),
            output: OutputConfig::default(),
            quad: QuadOptions::default(),
            optimize: OptimizeOptions::default(),
            simulate: SimulateConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str, origin: &str) -> CliResult<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let field = e.path().to_string();
            let message = if field == "." {
                e.inner().to_string()
            } else {
                format!("field `{field}`: {}", e.inner())
            };
            CliError::Config {
                path: origin.to_string(),
                message,
            }
        })
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_json(&text, &path.display().to_string())
    }

    pub fn resistive(&self) -> CliResult<ResistiveParams> {
        let p = &self.params;
        ResistiveParams::new(p.r0, p.r1, p.rs, p.sigma).map_err(|e| field_error("params", e))
    }

    pub fn distribution(&self) -> CliResult<SfDistribution> {
        let sf = &self.sf;
        let triple =
            sf.n.is_some() || sf.mu.is_some() || sf.kmax.is_some() || sf.truncation.is_some();
        match (&sf.p, triple) {
            (Some(_), true) => Err(CliError::Usage(
                "sf: give either {n, mu, kmax} or p, not both".into(),
            )),
            (Some(p), false) => SfDistribution::new(p.clone()).map_err(|e| field_error("sf.p", e)),
            (None, _) => SfDistribution::truncated_binomial_with(
                sf.n.unwrap_or(65536),
                sf.mu.unwrap_or(1e-4),
                sf.kmax.unwrap_or(8),
                sf.truncation.unwrap_or_default(),
            )
            .map_err(|e| field_error("sf", e)),
        }
    }

    pub fn single_q(&self) -> CliResult<f64> {
        match &self.q {
            None => Ok(0.5),
            Some(spec) => match spec.values("q")?.as_slice() {
                [q] => Ok(*q),
                _ => Err(CliError::Usage(
                    "q: this command needs a single value".into(),
                )),
            },
        }
    }

    pub fn q_grid(&self) -> CliResult<Vec<f64>> {
        match &self.q {
            None => GridSpec::Range(Grid {
                start: 0.0,
                stop: 1.0,
                step: 0.01,
            })
            .values("q"),
            Some(spec) => spec.values("q"),
        }
    }

    pub fn sigmas(&self) -> CliResult<Vec<f64>> {
        match &self.sigma_grid {
            None => GridSpec::Range(Grid {
                start: 10.0,
                stop: 200.0,
                step: 10.0,
            })
            .values("sigma_grid"),
            Some(spec) => spec.values("sigma_grid"),
        }
    }
}

fn field_error(field: &str, e: sneakpath_core::Error) -> CliError {
    CliError::Usage(format!("{field}: {e}"))
}
