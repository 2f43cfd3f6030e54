//! Thin shims over the data-parallel scans used by the analysis layer.
//!
//! With the `parallel` feature (the default) these fan out over rayon;
//! without it they run on the current thread. Output order is the input
//! order either way, so reports are identical across both builds.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over the inclusive range `lo..=hi`.
#[cfg(feature = "parallel")]
pub(crate) fn map_range<T, F>(lo: u64, hi: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    if lo > hi {
        return Vec::new();
    }
    (lo..=hi).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_range<T, F>(lo: u64, hi: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    if lo > hi {
        return Vec::new();
    }
    (lo..=hi).map(f).collect()
}

/// Maps `f` over a slice of work items.
#[cfg(feature = "parallel")]
pub(crate) fn map_items<I, T, F>(items: &[I], f: F) -> Vec<T>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> T + Sync + Send,
{
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_items<I, T, F>(items: &[I], f: F) -> Vec<T>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> T + Sync + Send,
{
    items.iter().map(f).collect()
}
