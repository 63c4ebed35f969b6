//! Deterministic intra-run parallelism.
//!
//! Work is split into disjoint chunks processed by scoped threads; no
//! cross-thread reductions ever happen, so results are bitwise independent
//! of the thread count.

/// Applies `f` to disjoint mutable chunks of `rows`, each chunk tagged with
/// the index of its first element. `threads <= 1` runs inline.
pub fn for_each_chunk<T: Send, F>(rows: &mut [T], chunk: usize, threads: usize, f: F)
where
    F: Fn(usize, &mut [T]) + Sync,
{
    assert!(chunk > 0);
    if threads <= 1 || rows.len() <= chunk {
        for (i, c) in rows.chunks_mut(chunk).enumerate() {
            f(i * chunk, c);
        }
        return;
    }
    let per = rows.len().div_ceil(chunk).div_ceil(threads) * chunk;
    std::thread::scope(|s| {
        for (b, block) in rows.chunks_mut(per).enumerate() {
            let f = &f;
            s.spawn(move || {
                for (i, c) in block.chunks_mut(chunk).enumerate() {
                    f(b * per + i * chunk, c);
                }
            });
        }
    });
}
