//! Order-preserving map helpers with a rayon-backed parallel path.
//!
//! The `parallel` feature (on by default) routes `map_collect` through rayon;
//! without it the same entry point runs sequentially. `map_collect_seq` is
//! always available so benchmarks can compare both paths in one build.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

pub fn map_collect_seq<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    F: Fn(T) -> U + Sync + Send,
    T: Send,
    U: Send,
{
    items.into_iter().map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn map_collect<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    F: Fn(T) -> U + Sync + Send,
    T: Send,
    U: Send,
{
    items.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_collect<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    F: Fn(T) -> U + Sync + Send,
    T: Send,
    U: Send,
{
    map_collect_seq(items, f)
}
