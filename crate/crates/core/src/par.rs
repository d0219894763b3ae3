//! Thin wrappers that run a per-chunk closure either sequentially or on the
//! rayon pool. With the `parallel` feature disabled only the sequential
//! path is compiled, so the crate builds without rayon.

pub(crate) fn for_each_chunk_mut<T, F>(parallel: bool, chunk: usize, data: &mut [T], f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync,
{
    #[cfg(feature = "parallel")]
    if parallel {
        use rayon::prelude::*;
        data.par_chunks_mut(chunk)
            .enumerate()
            .for_each(|(i, c)| f(i, c));
        return;
    }
    let _ = parallel;
    data.chunks_mut(chunk)
        .enumerate()
        .for_each(|(i, c)| f(i, c));
}

pub(crate) fn for_each_chunk_pair_mut<A, B, F>(
    parallel: bool,
    chunk_a: usize,
    a: &mut [A],
    chunk_b: usize,
    b: &mut [B],
    f: F,
) where
    A: Send,
    B: Send,
    F: Fn(usize, &mut [A], &mut [B]) + Sync,
{
    #[cfg(feature = "parallel")]
    if parallel {
        use rayon::prelude::*;
        a.par_chunks_mut(chunk_a)
            .zip(b.par_chunks_mut(chunk_b))
            .enumerate()
            .for_each(|(i, (ca, cb))| f(i, ca, cb));
        return;
    }
    let _ = parallel;
    a.chunks_mut(chunk_a)
        .zip(b.chunks_mut(chunk_b))
        .enumerate()
        .for_each(|(i, (ca, cb))| f(i, ca, cb));
}
