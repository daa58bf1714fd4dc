//! Data-parallel helpers with a sequential fallback.
//!
//! With the default `parallel` feature the hot loops fan out over rayon;
//! without it they run in place. Chunked reductions use a fixed chunk
//! grid so results are bit-identical in both modes.

/// Chunk length for deterministic chunked reductions.
pub const CHUNK: usize = 1 << 12;

#[cfg(feature = "parallel")]
pub fn for_each_chunk<F>(out: &mut [f64], f: F)
where
    F: Fn(usize, &mut [f64]) + Sync,
{
    use rayon::prelude::*;
    out.par_chunks_mut(CHUNK)
        .enumerate()
        .for_each(|(ci, chunk)| f(ci * CHUNK, chunk));
}

#[cfg(not(feature = "parallel"))]
pub fn for_each_chunk<F>(out: &mut [f64], f: F)
where
    F: Fn(usize, &mut [f64]) + Sync,
{
    for (ci, chunk) in out.chunks_mut(CHUNK).enumerate() {
        f(ci * CHUNK, chunk);
    }
}

/// Always-sequential variant, kept for benches comparing the two paths.
pub fn for_each_chunk_seq<F>(out: &mut [f64], f: F)
where
    F: Fn(usize, &mut [f64]) + Sync,
{
    for (ci, chunk) in out.chunks_mut(CHUNK).enumerate() {
        f(ci * CHUNK, chunk);
    }
}

/// Deterministic dot product: per-chunk partials summed in chunk order.
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let partials = dot_partials(a, b);
    partials.into_iter().sum()
}

#[cfg(feature = "parallel")]
fn dot_partials(a: &[f64], b: &[f64]) -> Vec<f64> {
    use rayon::prelude::*;
    a.par_chunks(CHUNK)
        .zip(b.par_chunks(CHUNK))
        .map(|(ca, cb)| ca.iter().zip(cb).map(|(x, y)| x * y).sum())
        .collect()
}

#[cfg(not(feature = "parallel"))]
fn dot_partials(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.chunks(CHUNK)
        .zip(b.chunks(CHUNK))
        .map(|(ca, cb)| ca.iter().zip(cb).map(|(x, y)| x * y).sum())
        .collect()
}

/// `y += alpha * x`, parallel over chunks.
pub fn axpy(y: &mut [f64], alpha: f64, x: &[f64]) {
    debug_assert_eq!(y.len(), x.len());
    for_each_chunk(y, |off, chunk| {
        for (i, v) in chunk.iter_mut().enumerate() {
            *v += alpha * x[off + i];
        }
    });
}

/// Map over independent work items (grid points, chain solves).
#[cfg(feature = "parallel")]
pub fn map_items<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    items.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_items<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    items.into_iter().map(f).collect()
}
