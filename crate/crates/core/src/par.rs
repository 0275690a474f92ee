//! Row- and index-parallel helpers. With the `parallel` feature these fan
//! out over rayon's global pool; without it they run sequentially. Callers
//! only hand in closures that are pure over their inputs, so both builds
//! produce identical results.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Fills `out` row by row; `fill(y, row)` writes row `y`.
pub(crate) fn for_each_row<F>(out: &mut [u8], width: usize, fill: F)
where
    F: Fn(usize, &mut [u8]) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    out.par_chunks_mut(width)
        .enumerate()
        .for_each(|(y, row)| fill(y, row));
    #[cfg(not(feature = "parallel"))]
    out.chunks_mut(width)
        .enumerate()
        .for_each(|(y, row)| fill(y, row));
}

/// Same as [`for_each_row`] for any element type.
pub(crate) fn for_each_chunk<T, F>(out: &mut [T], chunk: usize, fill: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    out.par_chunks_mut(chunk)
        .enumerate()
        .for_each(|(i, c)| fill(i, c));
    #[cfg(not(feature = "parallel"))]
    out.chunks_mut(chunk)
        .enumerate()
        .for_each(|(i, c)| fill(i, c));
}

/// `(0..n).map(f).collect()`, order preserved.
pub(crate) fn map_range<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Whether this build was compiled with rayon support.
pub const fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}
