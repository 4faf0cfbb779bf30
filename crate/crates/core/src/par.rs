//! Data-parallel helpers with a sequential fallback.
//!
//! All parallel loops in the crate go through [`map_indexed`], which returns
//! results in index order so that downstream reductions are deterministic
//! regardless of scheduling. Building with `--no-default-features` swaps in
//! the sequential implementation.

#[cfg(feature = "parallel")]
pub fn map_indexed<U, F>(n: usize, f: F) -> Vec<U>
where
    F: Fn(usize) -> U + Sync + Send,
    U: Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_indexed<U, F>(n: usize, f: F) -> Vec<U>
where
    F: Fn(usize) -> U + Sync + Send,
    U: Send,
{
    (0..n).map(f).collect()
}

/// Run `f` on a pool with `n` worker threads (parallel builds only; the
/// sequential build just calls `f`). Used by the benchmarks to compare
/// single-threaded and multi-threaded execution of the same code path.
#[cfg(feature = "parallel")]
pub fn with_threads<R: Send>(n: usize, f: impl FnOnce() -> R + Send) -> R {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .expect("thread pool");
    pool.install(f)
}

#[cfg(not(feature = "parallel"))]
pub fn with_threads<R: Send>(_n: usize, f: impl FnOnce() -> R + Send) -> R {
    f()
}

/// Cap global parallelism; honors the `POLARITON_THREADS` environment
/// variable. A no-op on sequential builds or if a global pool already exists.
pub fn init_thread_cap() {
    #[cfg(feature = "parallel")]
    {
        if let Ok(s) = std::env::var("POLARITON_THREADS") {
            if let Ok(n) = s.trim().parse::<usize>() {
                if n >= 1 {
                    let _ = rayon::ThreadPoolBuilder::new()
                        .num_threads(n)
                        .build_global();
                }
            }
        }
    }
}
