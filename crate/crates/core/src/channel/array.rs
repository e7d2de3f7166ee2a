//! Dense N×N grids: stored bits, sneak-path indicators and analog readback.
//!
//! Indices are 0-based `(row, col)` in memory. The text forms are row-major:
//! binary grids are one line of `0`/`1` digits per row, readback arrays are one
//! comma-separated line of reals per row.

use std::fmt::Write as _;

use rand::Rng;

use crate::error::{check_probability, invalid, Error, Result};

fn check_side(n: usize) -> Result<()> {
    if n == 0 {
        Err(invalid("n", "array side must be at least 1"))
    } else {
        Ok(())
    }
}

fn parse_bit_grid(s: &str) -> Result<(usize, Vec<u8>)> {
    let rows: Vec<&str> = s.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
    let n = rows.len();
    check_side(n)?;
    let mut bits = Vec::with_capacity(n * n);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(Error::Parse(format!(
                "row {} has {} digits, expected {n}",
                i + 1,
                row.len()
            )));
        }
        for ch in row.bytes() {
            match ch {
                b'0' => bits.push(0),
                b'1' => bits.push(1),
                other => {
                    return Err(Error::Parse(format!(
                        "row {}: unexpected character {:?}",
                        i + 1,
                        other as char
                    )))
                }
            }
        }
    }
    Ok((n, bits))
}

fn bit_grid_string(n: usize, bits: &[u8]) -> String {
    let mut out = String::with_capacity(n * (n + 1));
    for row in bits.chunks(n) {
        out.extend(row.iter().map(|&b| if b == 1 { '1' } else { '0' }));
        out.push('\n');
    }
    out
}

/// An N×N array of stored data bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DataArray {
    n: usize,
    bits: Vec<u8>,
}

impl DataArray {
    pub fn new(n: usize, bits: Vec<u8>) -> Result<Self> {
        check_side(n)?;
        if bits.len() != n * n {
            return Err(invalid(
                "bits",
                format!("expected {} entries, got {}", n * n, bits.len()),
            ));
        }
        if let Some(b) = bits.iter().find(|&&b| b > 1) {
            return Err(invalid("bits", format!("entry {b} is not a bit")));
        }
        Ok(Self { n, bits })
    }

    pub fn filled(n: usize, bit: bool) -> Result<Self> {
        check_side(n)?;
        Ok(Self {
            n,
            bits: vec![bit as u8; n * n],
        })
    }

    /// Draws every bit independently, `1` with probability `q`.
    pub fn sample<R: Rng + ?Sized>(n: usize, q: f64, rng: &mut R) -> Result<Self> {
        check_side(n)?;
        check_probability("q", q)?;
        let bits = (0..n * n).map(|_| rng.random_bool(q) as u8).collect();
        Ok(Self { n, bits })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.bits[row * self.n + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, bit: bool) {
        self.bits[row * self.n + col] = bit as u8;
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.bits
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().map(|&b| b as usize).sum()
    }

    pub fn to_grid_string(&self) -> String {
        bit_grid_string(self.n, &self.bits)
    }

    pub fn from_grid_str(s: &str) -> Result<Self> {
        let (n, bits) = parse_bit_grid(s)?;
        Ok(Self { n, bits })
    }
}

/// Per-cell sneak-path indicators `v`; a set entry marks an SP cell.
///
/// Only produced by [`crate::sneak_path_indicators`] (or parsed back from its
/// text form), so a set entry always sits on a logical-0 cell of the array it
/// was computed from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndicatorArray {
    n: usize,
    v: Vec<u8>,
}

impl IndicatorArray {
    pub(crate) fn from_raw(n: usize, v: Vec<u8>) -> Self {
        debug_assert_eq!(v.len(), n * n);
        Self { n, v }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> bool {
        self.v[row * self.n + col] == 1
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.v
    }

    pub fn count(&self) -> usize {
        self.v.iter().map(|&b| b as usize).sum()
    }

    /// Fraction of all cells that are SP cells.
    pub fn mean(&self) -> f64 {
        self.count() as f64 / (self.n * self.n) as f64
    }

    pub fn to_grid_string(&self) -> String {
        bit_grid_string(self.n, &self.v)
    }

    pub fn from_grid_str(s: &str) -> Result<Self> {
        let (n, v) = parse_bit_grid(s)?;
        Ok(Self { n, v })
    }
}

/// Analog readback values `y`, in ohms.
#[derive(Debug, Clone, PartialEq)]
pub struct ReadbackArray {
    n: usize,
    y: Vec<f64>,
}

impl ReadbackArray {
    pub fn new(n: usize, y: Vec<f64>) -> Result<Self> {
        check_side(n)?;
        if y.len() != n * n {
            return Err(invalid(
                "y",
                format!("expected {} entries, got {}", n * n, y.len()),
            ));
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(invalid("y", "readback values must be finite"));
        }
        Ok(Self { n, y })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.y[row * self.n + col]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.y
    }

    /// Row-major CSV with shortest round-trip formatting of each value.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        for row in self.y.chunks(self.n) {
            for (i, v) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write!(out, "{v:?}").unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn from_csv_str(s: &str) -> Result<Self> {
        let rows: Vec<&str> = s.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
        let n = rows.len();
        let mut y = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            let before = y.len();
            for field in row.split(',') {
                let v: f64 = field
                    .trim()
                    .parse()
                    .map_err(|e| Error::Parse(format!("row {}: {field:?}: {e}", i + 1)))?;
                y.push(v);
            }
            if y.len() - before != n {
                return Err(Error::Parse(format!(
                    "row {} has {} values, expected {n}",
                    i + 1,
                    y.len() - before
                )));
            }
        }
        Self::new(n, y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn degenerate_probabilities() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(DataArray::sample(7, 0.0, &mut rng).unwrap().count_ones(), 0);
        assert_eq!(
            DataArray::sample(7, 1.0, &mut rng).unwrap().count_ones(),
            49
        );
        assert!(DataArray::sample(7, 1.5, &mut rng).is_err());
        assert!(DataArray::sample(7, -0.1, &mut rng).is_err());
        assert!(DataArray::sample(0, 0.5, &mut rng).is_err());
    }

    #[test]
    fn bernoulli_mean_within_three_sigma() {
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        let (n, q) = (256usize, 0.3);
        let x = DataArray::sample(n, q, &mut rng).unwrap();
        let mean = x.count_ones() as f64 / (n * n) as f64;
        let bound = 3.0 * (q * (1.0 - q) / (n * n) as f64).sqrt();
        assert!((mean - q).abs() < bound, "mean {mean}");
    }

    #[test]
    fn same_seed_same_array() {
        let a = DataArray::sample(32, 0.4, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let b = DataArray::sample(32, 0.4, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn grid_text_form() {
        let x = DataArray::new(2, vec![0, 1, 1, 1]).unwrap();
        assert_eq!(x.to_grid_string(), "01\n11\n");
        assert_eq!(DataArray::from_grid_str("01\n11\n").unwrap(), x);
        assert!(DataArray::from_grid_str("01\n1\n").is_err());
        assert!(DataArray::from_grid_str("02\n11\n").is_err());
        assert!(DataArray::new(2, vec![0, 1, 2, 1]).is_err());
    }

    #[test]
    fn readback_csv_round_trips_exactly() {
        let y = ReadbackArray::new(2, vec![1000.25, -3.0, 0.1 + 0.2, 1e-300]).unwrap();
        let back = ReadbackArray::from_csv_str(&y.to_csv_string()).unwrap();
        assert_eq!(back, y);
        assert!(ReadbackArray::new(1, vec![f64::NAN]).is_err());
        assert!(ReadbackArray::from_csv_str("1,2\n3\n").is_err());
    }
}
