//! Order-preserving map that runs on rayon when the `parallel` feature is on
//! and degrades to a plain iterator otherwise.

use thiserror::Error;

#[derive(Debug, Error)]
#[error("failed to build worker pool: {0}")]
pub struct PoolError(String);

/// Worker count. `Some(1)` always runs on the calling thread.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Jobs(pub Option<usize>);

impl Jobs {
    pub const SEQUENTIAL: Jobs = Jobs(Some(1));

    pub fn is_sequential(self) -> bool {
        !cfg!(feature = "parallel") || self.0 == Some(1)
    }
}

#[cfg(feature = "parallel")]
pub fn map_ordered<T, R, F>(jobs: Jobs, items: &[T], f: F) -> Result<Vec<R>, PoolError>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    match jobs.0 {
        Some(1) => Ok(items.iter().map(f).collect()),
        None => Ok(items.par_iter().map(f).collect()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build().map_err(|e| PoolError(e.to_string()))?;
            Ok(pool.install(|| items.par_iter().map(f).collect()))
        }
    }
}

#[cfg(not(feature = "parallel"))]
pub fn map_ordered<T, R, F>(_jobs: Jobs, items: &[T], f: F) -> Result<Vec<R>, PoolError>
where
    F: Fn(&T) -> R,
{
    Ok(items.iter().map(f).collect())
}
