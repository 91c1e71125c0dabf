//! Data-parallel helpers. With the `parallel` feature (default) work fans out
//! over rayon's global pool; without it the same calls run sequentially.

/// Maps `f` over `0..n` and folds the results with an associative `merge`.
///
/// Result order never depends on scheduling, so the output is identical with
/// or without the `parallel` feature as long as `merge` is associative.
pub fn map_reduce<T, F, M>(n: u64, identity: impl Fn() -> T + Sync + Send, f: F, merge: M) -> T
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
    M: Fn(T, T) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(f).reduce(identity, merge)
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).fold(identity(), merge)
    }
}

/// Order-preserving map over a slice.
pub fn map_collect<I, T, F>(items: &[I], f: F) -> Vec<T>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Whether this build fans out over threads.
pub const fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}
