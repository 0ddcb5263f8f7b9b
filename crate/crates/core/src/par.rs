//! Chunked data-parallel helpers.
//!
//! Reductions always split the index range into the same fixed-size chunks
//! and combine the per-chunk partials left to right, so the `parallel`
//! feature changes wall time but never a single output bit.

use std::ops::Range;

pub(crate) const CHUNK: usize = 1 << 11;

fn chunks(len: usize) -> impl Iterator<Item = Range<usize>> + Clone {
    (0..len.div_ceil(CHUNK)).map(move |c| c * CHUNK..((c + 1) * CHUNK).min(len))
}

/// Sums `f` over fixed chunks of `0..len`.
pub(crate) fn chunked_sum<T, F>(len: usize, zero: T, f: F) -> T
where
    T: Copy + Send + std::ops::Add<Output = T>,
    F: Fn(Range<usize>) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        if len > CHUNK {
            let ranges: Vec<_> = chunks(len).collect();
            let partials: Vec<T> = ranges.into_par_iter().map(&f).collect();
            return partials.into_iter().fold(zero, |acc, x| acc + x);
        }
    }
    chunks(len).map(f).fold(zero, |acc, x| acc + x)
}

/// Calls `f(offset, chunk)` on disjoint fixed-size chunks of `out`.
pub(crate) fn for_each_chunk_mut<T, F>(out: &mut [T], f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        if out.len() > CHUNK {
            out.par_chunks_mut(CHUNK)
                .enumerate()
                .for_each(|(c, chunk)| f(c * CHUNK, chunk));
            return;
        }
    }
    for (c, chunk) in out.chunks_mut(CHUNK).enumerate() {
        f(c * CHUNK, chunk);
    }
}
