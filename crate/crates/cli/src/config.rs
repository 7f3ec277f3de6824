use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use charmean_core::fp::{is_prime, MAX_MODULUS};
use charmean_core::identities::DEFAULT_MAX_CUBIC_PRIME;
use charmean_core::{IdentityId, Tolerance};
use serde::{Serialize, Serializer};

use crate::error::SweepError;

/// Inclusive range of moduli, written `A..B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeRange {
    pub lo: u64,
    pub hi: u64,
}

impl PrimeRange {
    pub fn new(lo: u64, hi: u64) -> Self {
        Self { lo, hi }
    }

    pub fn primes(&self) -> Vec<u32> {
        (self.lo..=self.hi).filter(|&n| is_prime(n)).map(|n| n as u32).collect()
    }
}

impl fmt::Display for PrimeRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.lo, self.hi)
    }
}

impl FromStr for PrimeRange {
    type Err = SweepError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SweepError::InvalidRange(format!("expected A..B, got `{s}`"));
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (a.trim(), b.trim().trim_start_matches('=')),
            None => (s.trim(), s.trim()),
        };
        Ok(Self {
            lo: lo.parse().map_err(|_| bad())?,
            hi: hi.parse().map_err(|_| bad())?,
        })
    }
}

impl Serialize for PrimeRange {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

/// Parses `all` or a comma-separated list of identity ids.
pub fn parse_identities(s: &str) -> Result<Vec<IdentityId>, SweepError> {
    if s.trim().eq_ignore_ascii_case("all") {
        return Ok(IdentityId::ALL.to_vec());
    }
    let mut ids = s
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.parse::<IdentityId>().map_err(|e| SweepError::UnknownIdentity(e.0)))
        .collect::<Result<Vec<_>, _>>()?;
    if ids.is_empty() {
        return Err(SweepError::UnknownIdentity(s.to_string()));
    }
    ids.sort_unstable();
    ids.dedup();
    Ok(ids)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepConfig {
    pub primes: PrimeRange,
    pub identities: Vec<IdentityId>,
    pub tolerance: Tolerance,
    pub jobs: usize,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
    pub cache_dir: Option<PathBuf>,
    pub n: u32,
    pub k: u32,
    pub max_cubic_prime: u32,
    /// Re-run the `(n, k)`-independent identities at extra random pairs.
    pub vary_nk: bool,
    pub seed: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            primes: PrimeRange::new(5, 97),
            identities: IdentityId::ALL.to_vec(),
            tolerance: Tolerance::default(),
            jobs: 1,
            format: OutputFormat::Json,
            out: None,
            cache_dir: None,
            n: 1,
            k: 1,
            max_cubic_prime: DEFAULT_MAX_CUBIC_PRIME,
            vary_nk: false,
            seed: 0,
        }
    }
}

impl SweepConfig {
    /// Checks the invariants and returns the primes to sweep.
    pub fn validate(&self) -> Result<Vec<u32>, SweepError> {
        let PrimeRange { lo, hi } = self.primes;
        if lo < 5 {
            return Err(SweepError::InvalidRange(format!(
                "{}: lower bound must be at least 5",
                self.primes
            )));
        }
        if lo > hi {
            return Err(SweepError::InvalidRange(format!("{}: empty range", self.primes)));
        }
        if hi > MAX_MODULUS {
            return Err(SweepError::InvalidRange(format!(
                "{}: upper bound exceeds {MAX_MODULUS}",
                self.primes
            )));
        }
        let primes = self.primes.primes();
        if primes.is_empty() {
            return Err(SweepError::InvalidRange(format!("{}: no primes in range", self.primes)));
        }
        if self.jobs == 0 {
            return Err(SweepError::InvalidConfig("worker count must be at least 1".into()));
        }
        if self.identities.is_empty() {
            return Err(SweepError::InvalidConfig("no identities selected".into()));
        }
        if !(self.tolerance.abs_floor >= 0.0 && self.tolerance.rel >= 0.0) {
            return Err(SweepError::InvalidConfig("tolerance must be nonnegative".into()));
        }
        for &p in &primes {
            if self.n % p == 0 || self.k % p == 0 {
                return Err(SweepError::InvalidConfig(format!(
                    "n={} and k={} must be coprime to every prime in range (p={p})",
                    self.n, self.k
                )));
            }
        }
        Ok(primes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_parsing() {
        assert_eq!("5..97".parse::<PrimeRange>().unwrap(), PrimeRange::new(5, 97));
        assert_eq!("5..=7".parse::<PrimeRange>().unwrap(), PrimeRange::new(5, 7));
        assert_eq!("11".parse::<PrimeRange>().unwrap(), PrimeRange::new(11, 11));
        assert!("5-7".parse::<PrimeRange>().is_err());
        assert_eq!(PrimeRange::new(5, 13).primes(), vec![5, 7, 11, 13]);
    }

    #[test]
    fn identity_lists() {
        assert_eq!(parse_identities("all").unwrap().len(), 18);
        assert_eq!(parse_identities("TH2,th1").unwrap(), vec![IdentityId::Th1, IdentityId::Th2]);
        assert!(matches!(parse_identities("TH1,NOPE"), Err(SweepError::UnknownIdentity(_))));
    }

    #[test]
    fn validation() {
        let mut c = SweepConfig { primes: PrimeRange::new(4, 4), ..Default::default() };
        assert!(matches!(c.validate(), Err(SweepError::InvalidRange(_))));
        c.primes = PrimeRange::new(8, 10);
        assert!(matches!(c.validate(), Err(SweepError::InvalidRange(_))));
        c.primes = PrimeRange::new(5, 13);
        assert_eq!(c.validate().unwrap(), vec![5, 7, 11, 13]);
        c.n = 7;
        assert!(matches!(c.validate(), Err(SweepError::InvalidConfig(_))));
        c.n = 1;
        c.jobs = 0;
        assert!(c.validate().is_err());
    }
}
