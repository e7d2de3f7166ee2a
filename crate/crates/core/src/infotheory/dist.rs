use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// ln C(n, k), summed term by term so that it stays accurate for n up to 2^32.
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    let k = k.min(n - k);
    (0..k)
        .map(|i| ((n - i) as f64).ln() - ((i + 1) as f64).ln())
        .sum()
}

/// C(n, k) as a float; exact for small arguments.
pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// How a binomial failure count is bounded to at most K failures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Truncation {
    /// Condition on `X <= K`: the pmf over `0..=K` rescaled to unit mass.
    #[default]
    Renormalize,
    /// Keep the pmf below `K` and put the whole tail `P(X >= K)` on `K`.
    LumpTail,
}

/// Law of the number of failed selectors in one array, `p_0 ..= p_K`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SfDistribution {
    p: Vec<f64>,
}

impl SfDistribution {
    /// Validates `p_k >= 0`, `sum p_k = 1` (within 1e-12) and `p_K > 0`.
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.is_empty() {
            return Err(invalid("p", "needs at least p_0"));
        }
        if let Some(bad) = p.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(invalid("p", format!("{bad} is not a probability")));
        }
        let total: f64 = p.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(invalid("p", format!("masses sum to {total}, not 1")));
        }
        if *p.last().unwrap() <= 0.0 {
            return Err(invalid("p", "the top cardinality p_K must be positive"));
        }
        Ok(Self { p })
    }

    /// All mass on exactly `k` failures.
    pub fn point(k: usize) -> Self {
        let mut p = vec![0.0; k + 1];
        p[k] = 1.0;
        Self { p }
    }

    /// Binomial(n, mu) failure count bounded at `kmax`, renormalised over `0..=kmax`.
    pub fn truncated_binomial(n: u64, mu: f64, kmax: usize) -> Result<Self> {
        Self::truncated_binomial_with(n, mu, kmax, Truncation::Renormalize)
    }

    pub fn truncated_binomial_with(
        n: u64,
        mu: f64,
        kmax: usize,
        truncation: Truncation,
    ) -> Result<Self> {
        if n == 0 {
            return Err(invalid("n", "needs at least one trial"));
        }
        if !(mu > 0.0 && mu < 1.0) {
            return Err(invalid("mu", format!("{mu} is not in (0, 1)")));
        }
        if kmax as u64 > n {
            return Err(invalid(
                "kmax",
                format!("{kmax} exceeds the trial count {n}"),
            ));
        }
        let ln_mu = mu.ln();
        let ln_miss = (-mu).ln_1p();
        let mut ln_c = 0.0;
        let ln_pmf: Vec<f64> = (0..=kmax as u64)
            .map(|k| {
                if k > 0 {
                    ln_c += ((n - k + 1) as f64).ln() - (k as f64).ln();
                }
                ln_c + k as f64 * ln_mu + (n - k) as f64 * ln_miss
            })
            .collect();

        let p = match truncation {
            Truncation::Renormalize => {
                let top = ln_pmf.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                let scale: f64 = ln_pmf.iter().map(|l| (l - top).exp()).sum();
                ln_pmf.iter().map(|l| (l - top).exp() / scale).collect()
            }
            Truncation::LumpTail => {
                let mut p: Vec<f64> = ln_pmf[..kmax].iter().map(|l| l.exp()).collect();
                let head: f64 = p.iter().sum();
                let tail = 1.0 - head;
                let tail = if tail > 1e-12 {
                    tail
                } else {
                    binomial_tail(n, mu, kmax as u64, ln_pmf[kmax])
                };
                p.push(tail);
                p
            }
        };
        Self::new(p).map_err(|e| invalid("kmax", format!("truncated law is degenerate: {e}")))
    }

    /// Largest possible number of failures, K.
    pub fn kmax(&self) -> usize {
        self.p.len() - 1
    }

    pub fn probs(&self) -> &[f64] {
        &self.p
    }

    pub fn mean(&self) -> f64 {
        self.p.iter().enumerate().map(|(k, p)| k as f64 * p).sum()
    }

    /// Inverse-CDF draw of a failure count.
    pub fn sample_cardinality<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        for (k, &p) in self.p.iter().enumerate() {
            acc += p;
            if u < acc {
                return k;
            }
        }
        self.kmax()
    }
}

/// Direct sum of the upper tail when `1 - head` has lost all precision.
fn binomial_tail(n: u64, mu: f64, from: u64, ln_first: f64) -> f64 {
    let ratio = mu / (1.0 - mu);
    let mut term = ln_first.exp();
    let mut sum = 0.0;
    let mut k = from;
    while term > 0.0 && k <= n {
        sum += term;
        if term < sum * 1e-18 {
            break;
        }
        term *= (n - k) as f64 / (k + 1) as f64 * ratio;
        k += 1;
    }
    sum
}

impl<'de> Deserialize<'de> for SfDistribution {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            p: Vec<f64>,
        }
        let raw = Raw::deserialize(d)?;
        SfDistribution::new(raw.p).map_err(serde::de::Error::custom)
    }
}
