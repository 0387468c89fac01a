//! Sequential or data-parallel evaluation of independent work items.
//!
//! With the `parallel` feature disabled, [`Execution::Parallel`] falls back
//! to the sequential path. Results always come back in input order.

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// `1` selects sequential mode; anything else runs in parallel.
    pub fn from_jobs(jobs: usize) -> Self {
        if jobs <= 1 { Self::Sequential } else { Self::Parallel }
    }
}

#[cfg(feature = "parallel")]
pub fn map_ordered<I, T, F>(items: Vec<I>, mode: Execution, f: F) -> Vec<T>
where
    I: Send,
    T: Send,
    F: Fn(I) -> T + Send + Sync,
{
    use rayon::prelude::*;
    match mode {
        Execution::Sequential => items.into_iter().map(f).collect(),
        Execution::Parallel => items.into_par_iter().map(f).collect(),
    }
}

#[cfg(not(feature = "parallel"))]
pub fn map_ordered<I, T, F>(items: Vec<I>, _mode: Execution, f: F) -> Vec<T>
where
    I: Send,
    T: Send,
    F: Fn(I) -> T + Send + Sync,
{
    items.into_iter().map(f).collect()
}

/// Runs `f` on a pool of `jobs` threads (or inline when sequential).
#[cfg(feature = "parallel")]
pub fn with_jobs<T: Send>(jobs: usize, f: impl FnOnce(Execution) -> T + Send) -> T {
    let mode = Execution::from_jobs(jobs);
    if mode == Execution::Sequential {
        return f(mode);
    }
    match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(|| f(mode)),
        Err(_) => f(mode),
    }
}

#[cfg(not(feature = "parallel"))]
pub fn with_jobs<T: Send>(jobs: usize, f: impl FnOnce(Execution) -> T + Send) -> T {
    f(Execution::from_jobs(jobs))
}
