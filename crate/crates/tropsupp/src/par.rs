//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature the work is spread over rayon's pool unless
//! sequential mode was requested at runtime.

use std::sync::atomic::{AtomicBool, Ordering};

static SEQUENTIAL: AtomicBool = AtomicBool::new(false);

/// Forces the sequential path (used by benchmarks and `TROPSUPP_THREADS=1`).
pub fn set_sequential(on: bool) {
    SEQUENTIAL.store(on, Ordering::Relaxed);
}

pub fn is_sequential() -> bool {
    !cfg!(feature = "parallel") || SEQUENTIAL.load(Ordering::Relaxed)
}

/// Caps the worker count; `threads <= 1` selects the sequential path.
pub fn configure_threads(threads: usize) {
    if threads <= 1 {
        set_sequential(true);
        return;
    }
    #[cfg(feature = "parallel")]
    {
        // the global pool can only be built once; later calls keep the first setting
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
}

pub fn map<T, R, F>(xs: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if !is_sequential() {
        use rayon::prelude::*;
        return xs.par_iter().map(f).collect();
    }
    xs.iter().map(f).collect()
}

/// Like `map` but stops at the first error.
pub fn try_map<T, R, E, F>(xs: &[T], f: F) -> Result<Vec<R>, E>
where
    T: Sync,
    R: Send,
    E: Send,
    F: Fn(&T) -> Result<R, E> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if !is_sequential() {
        use rayon::prelude::*;
        return xs.par_iter().map(f).collect();
    }
    xs.iter().map(f).collect()
}
