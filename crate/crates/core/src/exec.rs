//! Data-parallel execution helpers.
//!
//! Every hot loop in the crate (eigenvalue sweeps, random-input suites,
//! quadrature cells, search restarts) maps an index range through a pure
//! function and then reduces sequentially. `par_map` runs the map step on
//! the rayon pool when the `parallel` feature is enabled and falls back to
//! a plain iterator otherwise; the sequential reduction keeps results
//! bit-identical across thread counts. `seq_map` is always sequential so
//! benches can compare both paths.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map `f` over `0..len`, in parallel when the `parallel` feature is on.
/// Output order matches input order.
pub fn par_map<T, F>(len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..len).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..len).map(f).collect()
    }
}

/// Always-sequential counterpart of [`par_map`].
pub fn seq_map<T, F>(len: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..len).map(f).collect()
}
