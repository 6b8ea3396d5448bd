use gorilla_core::runner::BatchRunner;
use rayon::prelude::*;

use crate::error::{CliError, Result};

/// Evaluates batches on a dedicated rayon pool.
///
/// Results are collected in input order, so output does not depend on the
/// number of threads.
pub struct Pool {
    pool: rayon::ThreadPool,
}

impl Pool {
    /// `jobs == 0` uses all available cores.
    pub fn new(jobs: usize) -> Result<Self> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| CliError::Usage(format!("cannot start {jobs} worker threads: {e}")))?;
        Ok(Pool { pool })
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl BatchRunner for Pool {
    fn map<T, R, F>(&self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        if self.threads() == 1 {
            return items.iter().map(f).collect();
        }
        self.pool.install(|| items.par_iter().map(f).collect())
    }
}
