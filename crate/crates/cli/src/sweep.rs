use std::time::Instant;

use charmean_core::identities::verify;
use charmean_core::{IdentityId, PrimeContext, VerificationRecord, Workspace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cache::{Cache, CacheKey};
use crate::config::SweepConfig;
use crate::error::SweepError;
use crate::report::{RunReport, Summary};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Number of extra `(n, k)` pairs per prime in vary-nk mode.
pub const VARY_NK_PAIRS: usize = 3;

/// The `(n, k)` pairs to run at prime `p`: the configured pair first, then
/// (in vary-nk mode) seeded random coprime pairs distinct from it.
pub fn nk_pairs(config: &SweepConfig, p: u32) -> Vec<(u32, u32)> {
    let base = (config.n % p, config.k % p);
    let mut pairs = vec![base];
    if config.vary_nk {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ ((p as u64) << 32));
        // p >= 5 leaves (p-1)^2 - 1 >= 15 candidates
        while pairs.len() < 1 + VARY_NK_PAIRS {
            let pair = (rng.gen_range(1..p), rng.gen_range(1..p));
            if !pairs.contains(&pair) {
                pairs.push(pair);
            }
        }
    }
    pairs
}

fn run_prime(
    config: &SweepConfig,
    cache: Option<&Cache>,
    p: u32,
) -> Result<Vec<VerificationRecord>, SweepError> {
    let ctx = PrimeContext::new(p as u64).map_err(|e| SweepError::InvalidRange(e.to_string()))?;
    let mut records = Vec::new();
    for (i, (n, k)) in nk_pairs(config, p).into_iter().enumerate() {
        let ws = Workspace::new(ctx.clone(), n, k)
            .map_err(|e| SweepError::InvalidConfig(e.to_string()))?
            .with_tolerance(config.tolerance)
            .with_max_cubic_prime(config.max_cubic_prime);
        let ids = config
            .identities
            .iter()
            .copied()
            .filter(|id| i == 0 || id.depends_on_nk());
        for id in ids {
            records.push(run_one(&ws, cache, id, config)?);
        }
    }
    Ok(records)
}

fn run_one(
    ws: &Workspace,
    cache: Option<&Cache>,
    id: IdentityId,
    config: &SweepConfig,
) -> Result<VerificationRecord, SweepError> {
    let Some(cache) = cache else {
        return Ok(verify(ws, id));
    };
    let key = CacheKey {
        version: TOOL_VERSION.to_string(),
        prime: ws.p(),
        identity: id,
        n: ws.n(),
        k: ws.k(),
        tolerance: config.tolerance,
        max_cubic_prime: config.max_cubic_prime,
    };
    let start = Instant::now();
    if let Some(mut record) = cache.lookup(&key) {
        record.cache_hit = true;
        record.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
        return Ok(record);
    }
    let record = verify(ws, id);
    cache.store(&key, &record)?;
    Ok(record)
}

/// Runs every selected identity at every prime in range on a pool of
/// `config.jobs` workers. Records come back ordered by prime, then identity,
/// then `(n, k)` pair.
pub fn run_sweep(config: &SweepConfig) -> Result<RunReport, SweepError> {
    let primes = config.validate()?;
    let cache = config.cache_dir.as_ref().map(Cache::open).transpose()?;
    let start = Instant::now();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| SweepError::InvalidConfig(e.to_string()))?;
    // Largest primes first so the long tasks start early; order restored below.
    let mut order: Vec<u32> = primes.clone();
    order.reverse();
    let mut per_prime: Vec<(u32, Vec<VerificationRecord>)> = pool.install(|| {
        order
            .par_iter()
            .map(|&p| run_prime(config, cache.as_ref(), p).map(|r| (p, r)))
            .collect::<Result<Vec<_>, _>>()
    })?;
    per_prime.sort_by_key(|(p, _)| *p);

    let mut records: Vec<VerificationRecord> = per_prime.into_iter().flat_map(|(_, r)| r).collect();
    // stable: keeps the configured pair ahead of the random ones
    records.sort_by_key(|r| (r.prime, r.identity));
    let summary = Summary::tally(&records, start.elapsed().as_secs_f64() * 1e3);
    Ok(RunReport {
        config: config.clone(),
        records,
        summary,
        tool_version: TOOL_VERSION.to_string(),
        timestamp: chrono::Utc::now().to_rfc3339(),
    })
}
