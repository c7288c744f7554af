//! Worker-count control.
//!
//! Estimators use rayon's ambient pool; results never depend on how many
//! threads that pool has.

use crate::error::{Error, Result};

/// Environment variable consulted for the default worker count.
pub const WORKERS_ENV: &str = "ROTASET_WORKERS";

/// Runs `f` inside a dedicated pool of `workers` threads.
pub fn with_workers<R, F>(workers: usize, f: F) -> Result<R>
where
    R: Send,
    F: FnOnce() -> R + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Runtime(e.to_string()))?;
    Ok(pool.install(f))
}

/// Collects per-index results, surfacing the lowest-index error.
pub(crate) fn first_error<T>(results: Vec<Result<T>>) -> Result<Vec<T>> {
    results.into_iter().collect()
}
