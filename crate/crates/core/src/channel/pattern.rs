use std::collections::HashSet;

use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::infotheory::SfDistribution;

/// Set of failed-selector coordinates in an N×N array.
///
/// Cells are stored 0-based and sorted row-major; the JSON form is 1-based:
/// `{"n": 4, "cells": [[1, 4], [3, 2]]}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SfPattern {
    n: usize,
    cells: Vec<(usize, usize)>,
}

impl SfPattern {
    /// Builds a pattern from 0-based coordinates.
    pub fn new(n: usize, cells: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(invalid("n", "array side must be at least 1"));
        }
        let mut cells: Vec<_> = cells.into_iter().collect();
        if let Some(&(r, c)) = cells.iter().find(|&&(r, c)| r >= n || c >= n) {
            return Err(invalid(
                "cells",
                format!("({r}, {c}) outside a {n}x{n} array"),
            ));
        }
        cells.sort_unstable();
        if cells.windows(2).any(|w| w[0] == w[1]) {
            return Err(invalid("cells", "duplicate coordinates"));
        }
        Ok(Self { n, cells })
    }

    /// Builds a pattern from 1-based coordinates, as written in the JSON form.
    pub fn from_one_based(n: usize, cells: &[(usize, usize)]) -> Result<Self> {
        if let Some(&(r, c)) = cells.iter().find(|&&(r, c)| r == 0 || c == 0) {
            return Err(invalid(
                "cells",
                format!("({r}, {c}) is not a 1-based coordinate"),
            ));
        }
        Self::new(n, cells.iter().map(|&(r, c)| (r - 1, c - 1)))
    }

    pub fn empty(n: usize) -> Result<Self> {
        Self::new(n, [])
    }

    /// Uniformly random `k`-subset of the `n * n` cells.
    pub fn sample_uniform<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Result<Self> {
        let total = n * n;
        if k > total {
            return Err(invalid(
                "k",
                format!("{k} failures do not fit in {total} cells"),
            ));
        }
        let cells = index::sample(rng, total, k)
            .into_iter()
            .map(|i| (i / n, i % n));
        Self::new(n, cells)
    }

    /// Random scattered pattern: `k` distinct rows paired with `k` distinct columns.
    pub fn sample_scattered<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Result<Self> {
        if k > n {
            return Err(invalid(
                "k",
                format!("a scattered pattern holds at most {n} cells"),
            ));
        }
        let rows = index::sample(rng, n, k);
        let cols = index::sample(rng, n, k);
        Self::new(n, rows.into_iter().zip(cols))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// 0-based coordinates, sorted row-major.
    pub fn cells(&self) -> &[(usize, usize)] {
        &self.cells
    }

    /// True when no two failures share a row or a column.
    pub fn is_scattered(&self) -> bool {
        let mut rows = HashSet::with_capacity(self.cells.len());
        let mut cols = HashSet::with_capacity(self.cells.len());
        self.cells
            .iter()
            .all(|&(r, c)| rows.insert(r) && cols.insert(c))
    }

    /// Marks of the rows and columns that hold at least one failure.
    pub fn sf_lines(&self) -> (Vec<bool>, Vec<bool>) {
        let mut rows = vec![false; self.n];
        let mut cols = vec![false; self.n];
        for &(r, c) in &self.cells {
            rows[r] = true;
            cols[c] = true;
        }
        (rows, cols)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("pattern serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Draws a pattern: cardinality `k` with probability `p_k`, then a uniform `k`-subset.
pub fn sample_sf_pattern<R: Rng + ?Sized>(
    dist: &SfDistribution,
    n: usize,
    rng: &mut R,
) -> Result<SfPattern> {
    if n * n < dist.kmax() {
        return Err(invalid(
            "n",
            format!("{n}x{n} array cannot hold {} failures", dist.kmax()),
        ));
    }
    let k = dist.sample_cardinality(rng);
    SfPattern::sample_uniform(n, k, rng)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PatternJson {
    n: usize,
    cells: Vec<[usize; 2]>,
}

impl Serialize for SfPattern {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PatternJson {
            n: self.n,
            cells: self.cells.iter().map(|&(r, c)| [r + 1, c + 1]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SfPattern {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = PatternJson::deserialize(d)?;
        let cells: Vec<_> = raw.cells.iter().map(|&[r, c]| (r, c)).collect();
        SfPattern::from_one_based(raw.n, &cells).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn scattered_definition() {
        let p = |c: &[(usize, usize)]| SfPattern::from_one_based(4, c).unwrap();
        assert!(p(&[(1, 2), (3, 4)]).is_scattered());
        assert!(!p(&[(1, 2), (1, 4)]).is_scattered());
        assert!(!p(&[(1, 2), (3, 2)]).is_scattered());
        assert!(p(&[]).is_scattered());
    }

    #[test]
    fn rejects_bad_cells() {
        assert!(SfPattern::new(4, [(0, 4)]).is_err());
        assert!(SfPattern::new(4, [(1, 1), (1, 1)]).is_err());
        assert!(SfPattern::from_one_based(4, &[(0, 1)]).is_err());
        assert!(SfPattern::from_json(r#"{"n":4,"cells":[[5,1]]}"#).is_err());
        assert!(SfPattern::from_json(r#"{"n":4,"cells":[[1,1]],"k":1}"#).is_err());
    }

    #[test]
    fn json_is_one_based() {
        let p = SfPattern::new(4, [(2, 1), (0, 3)]).unwrap();
        assert_eq!(p.to_json(), r#"{"n":4,"cells":[[1,4],[3,2]]}"#);
        assert_eq!(SfPattern::from_json(&p.to_json()).unwrap(), p);
    }

    #[test]
    fn degenerate_distribution_gives_empty_pattern() {
        let dist = SfDistribution::new(vec![1.0]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            assert!(sample_sf_pattern(&dist, 8, &mut rng).unwrap().is_empty());
        }
    }

    #[test]
    fn scattered_sampler_is_scattered() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for k in 0..=6 {
            let p = SfPattern::sample_scattered(6, k, &mut rng).unwrap();
            assert_eq!(p.len(), k);
            assert!(p.is_scattered());
        }
        assert!(SfPattern::sample_scattered(6, 7, &mut rng).is_err());
    }

    #[test]
    fn precondition_on_capacity() {
        let dist = SfDistribution::new(vec![0.0; 5].into_iter().chain([1.0]).collect()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert!(sample_sf_pattern(&dist, 2, &mut rng).is_err());
        assert_eq!(sample_sf_pattern(&dist, 3, &mut rng).unwrap().len(), 5);
    }
}
