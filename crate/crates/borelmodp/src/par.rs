//! Data-parallel helpers.  With the `parallel` feature these use rayon;
//! without it they fall back to plain iterators.  Results are always in
//! input order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    let out = items.par_iter().map(f).collect();
    #[cfg(not(feature = "parallel"))]
    let out = items.iter().map(f).collect();
    out
}

pub fn map_range<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    let out = (0..n).into_par_iter().map(f).collect();
    #[cfg(not(feature = "parallel"))]
    let out = (0..n).map(f).collect();
    out
}

pub fn all<T, F>(items: &[T], f: F) -> bool
where
    T: Sync,
    F: Fn(&T) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    let out = items.par_iter().all(f);
    #[cfg(not(feature = "parallel"))]
    let out = items.iter().all(f);
    out
}

pub fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}
