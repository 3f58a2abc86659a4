use std::io::Write;

use crate::error::{Error, Result};

/// Largest number of outcomes an exact enumeration may produce.
pub const MAX_OUTCOMES: u128 = 20_000;

pub(crate) fn check_capacity(symbols: u128, sites: usize) -> Result<usize> {
    let outcomes = symbols.checked_pow(sites as u32).unwrap_or(u128::MAX);
    if outcomes > MAX_OUTCOMES {
        return Err(Error::Capacity {
            outcomes,
            limit: MAX_OUTCOMES,
        });
    }
    Ok(outcomes as usize)
}

/// How configuration entries are printed in dumps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Alphabet {
    /// Ising spins: `1` for +1, `0` for -1.
    Spin,
    /// Lattice gas: `0` empty, `1` plus, `2` minus.
    Occupancy,
    /// Edges or sites: `1` open/occupied, `0` closed/empty.
    Bit,
}

impl Alphabet {
    fn symbol(self, v: i8) -> char {
        match (self, v) {
            (Alphabet::Spin, 1) => '1',
            (Alphabet::Spin, _) => '0',
            (Alphabet::Occupancy, 1) => '1',
            (Alphabet::Occupancy, -1) => '2',
            (Alphabet::Occupancy, _) => '0',
            (Alphabet::Bit, 0) => '0',
            (Alphabet::Bit, _) => '1',
        }
    }
}

/// Exhaustively enumerated distribution over configurations.
#[derive(Clone, Debug)]
pub struct ExactDistribution {
    alphabet: Alphabet,
    configs: Vec<Vec<i8>>,
    probs: Vec<f64>,
    cdf: Vec<f64>,
}

impl ExactDistribution {
    /// Normalizes nonnegative weights given in log space (`-inf` for zero weight).
    pub(crate) fn from_log_weights(alphabet: Alphabet, configs: Vec<Vec<i8>>, log_w: Vec<f64>) -> Self {
        let max = log_w.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let w: Vec<f64> = log_w.iter().map(|&l| (l - max).exp()).collect();
        let total: f64 = w.iter().sum();
        let probs: Vec<f64> = w.iter().map(|x| x / total).collect();
        let cdf = probs
            .iter()
            .scan(0.0, |acc, p| {
                *acc += p;
                Some(*acc)
            })
            .collect();
        Self {
            alphabet,
            configs,
            probs,
            cdf,
        }
    }

    pub fn len(&self) -> usize {
        self.configs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.configs.is_empty()
    }

    pub fn configs(&self) -> &[Vec<i8>] {
        &self.configs
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[i8], f64)> {
        self.configs.iter().map(|c| c.as_slice()).zip(self.probs.iter().copied())
    }

    pub fn expectation<F: Fn(&[i8]) -> f64>(&self, f: F) -> f64 {
        self.iter().map(|(c, p)| p * f(c)).sum()
    }

    pub fn probability<F: Fn(&[i8]) -> bool>(&self, event: F) -> f64 {
        self.iter().filter(|(c, _)| event(c)).map(|(_, p)| p).sum()
    }

    pub fn index_of(&self, config: &[i8]) -> Option<usize> {
        self.configs.iter().position(|c| c == config)
    }

    /// Inverse-CDF draw from a uniform `u` in `[0, 1)`.
    pub fn sample_index(&self, u: f64) -> usize {
        let i = self.cdf.partition_point(|&c| c <= u);
        if i < self.probs.len() && self.probs[i] > 0.0 {
            return i;
        }
        // Round-off: fall back to the nearest outcome below with positive mass.
        self.probs[..i.min(self.probs.len())]
            .iter()
            .rposition(|&p| p > 0.0)
            .unwrap_or(0)
    }

    /// One line per outcome: `config_bits probability`.
    pub fn write_dump<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for (c, p) in self.iter() {
            let bits: String = c.iter().map(|&v| self.alphabet.symbol(v)).collect();
            writeln!(out, "{bits} {p}")?;
        }
        Ok(())
    }
}

/// All `symbols.len()^sites` configurations, first site fastest.
pub(crate) fn all_configs(symbols: &[i8], sites: usize) -> Result<Vec<Vec<i8>>> {
    let total = check_capacity(symbols.len() as u128, sites)?;
    let base = symbols.len();
    Ok((0..total)
        .map(|mut code| {
            (0..sites)
                .map(|_| {
                    let s = symbols[code % base];
                    code /= base;
                    s
                })
                .collect()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_and_dumps() {
        let d = ExactDistribution::from_log_weights(
            Alphabet::Spin,
            vec![vec![1, -1], vec![-1, 1]],
            vec![0.0, 1f64.ln()],
        );
        assert!((d.probs().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let mut buf = Vec::new();
        d.write_dump(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "10 0.5\n01 0.5\n");
    }

    #[test]
    fn zero_weights_are_excluded() {
        let d = ExactDistribution::from_log_weights(
            Alphabet::Occupancy,
            vec![vec![0], vec![1], vec![-1]],
            vec![0.0, 2f64.ln(), f64::NEG_INFINITY],
        );
        assert_eq!(d.probs()[2], 0.0);
        assert_eq!(d.sample_index(0.999_999_999_999), 1);
    }

    #[test]
    fn capacity_limit() {
        assert!(all_configs(&[-1, 0, 1], 9).is_ok());
        assert!(matches!(
            all_configs(&[-1, 0, 1], 10),
            Err(Error::Capacity { .. })
        ));
    }
}
