use crate::error::{Error, Result};

/// Bounds that gate exhaustive computation.
///
/// Every verification in this crate is exact. When a check would exceed one of
/// these bounds it returns [`Error::Resource`] instead of sampling.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Config {
    /// Largest carrier that element-wise checks will stream.
    pub max_carrier: usize,
    /// Largest carrier that may be materialized as operation tables.
    pub max_table_carrier: usize,
    /// Above this size a [`crate::FiniteLattice`] computes joins and meets per
    /// call instead of storing them.
    pub lattice_table_threshold: usize,
    /// Largest number of (a, b, c) triples a law check will visit.
    pub max_triples: u64,
}

pub const MAX_CARRIER_ENV: &str = "QLAB_MAX_CARRIER";

impl Default for Config {
    fn default() -> Self {
        Config {
            max_carrier: 1 << 16,
            max_table_carrier: 4096,
            lattice_table_threshold: 1024,
            max_triples: 1 << 31,
        }
    }
}

impl Config {
    /// Default configuration with `QLAB_MAX_CARRIER` applied when set.
    pub fn from_env() -> Result<Self> {
        let mut cfg = Config::default();
        if let Ok(v) = std::env::var(MAX_CARRIER_ENV) {
            cfg.max_carrier = v
                .trim()
                .parse()
                .map_err(|_| Error::input(format!("{MAX_CARRIER_ENV}={v:?} is not a number")))?;
        }
        Ok(cfg)
    }

    pub(crate) fn ensure_carrier(&self, what: &str, size: usize) -> Result<()> {
        if size > self.max_carrier {
            return Err(Error::Resource {
                what: what.to_string(),
                size,
                limit: self.max_carrier,
            });
        }
        Ok(())
    }

    pub(crate) fn ensure_table(&self, what: &str, size: usize) -> Result<()> {
        if size > self.max_table_carrier {
            return Err(Error::Resource {
                what: what.to_string(),
                size,
                limit: self.max_table_carrier,
            });
        }
        Ok(())
    }

    pub(crate) fn ensure_triples(&self, what: &str, size: usize) -> Result<()> {
        self.ensure_carrier(what, size)?;
        let n = size as u64;
        let triples = n.saturating_mul(n).saturating_mul(n);
        if triples > self.max_triples {
            return Err(Error::Resource {
                what: format!("{what} (triples)"),
                size: triples.min(usize::MAX as u64) as usize,
                limit: self.max_triples.min(usize::MAX as u64) as usize,
            });
        }
        Ok(())
    }
}
