//! Order-preserving parallel map with a sequential fallback.
//!
//! With the `parallel` feature (default) work is spread over a rayon pool;
//! without it, or with a single worker, the plain iterator path runs. Either
//! way results come back in index order, so reductions that depend on order
//! (tie-breaks, summaries) are unaffected by the worker count.

use std::num::NonZeroUsize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Workers {
    /// Rayon's global pool (all available cores).
    #[default]
    Available,
    Fixed(NonZeroUsize),
}

impl Workers {
    pub fn sequential() -> Self {
        Workers::Fixed(NonZeroUsize::MIN)
    }

    /// `0` means "all available".
    pub fn from_count(n: usize) -> Self {
        NonZeroUsize::new(n).map_or(Workers::Available, Workers::Fixed)
    }

    pub fn is_sequential(self) -> bool {
        !cfg!(feature = "parallel") || self == Workers::sequential()
    }
}

/// `(0..len).map(f).collect()`, possibly in parallel.
pub fn map_indexed<T, F>(len: usize, workers: Workers, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    if workers.is_sequential() || len < 2 {
        return (0..len).map(f).collect();
    }
    par_map(len, workers, f)
}

#[cfg(feature = "parallel")]
fn par_map<T, F>(len: usize, workers: Workers, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;

    match workers {
        Workers::Available => (0..len).into_par_iter().map(f).collect(),
        Workers::Fixed(n) => match rayon::ThreadPoolBuilder::new().num_threads(n.get()).build() {
            Ok(pool) => pool.install(|| (0..len).into_par_iter().map(f).collect()),
            Err(e) => {
                log::warn!("could not build a {n}-thread pool ({e}); running sequentially");
                (0..len).map(f).collect()
            }
        },
    }
}

#[cfg(not(feature = "parallel"))]
fn par_map<T, F>(len: usize, _workers: Workers, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..len).map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preserves_order_for_any_worker_count() {
        let expected: Vec<usize> = (0..1000).map(|i| i * i).collect();
        for w in [Workers::sequential(), Workers::from_count(3), Workers::Available] {
            assert_eq!(map_indexed(1000, w, |i| i * i), expected);
        }
    }

    #[test]
    fn zero_means_available() {
        assert_eq!(Workers::from_count(0), Workers::Available);
        assert!(Workers::from_count(1).is_sequential());
    }
}
