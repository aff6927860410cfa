//! Deterministic data-parallel helpers.
//!
//! Work is split into one contiguous index chunk per worker; partial results
//! are collected in chunk order and folded left-to-right, so the final value
//! is identical for every thread count (all reductions here are exact
//! integer sums, but we do not even rely on commutativity).

/// Map `f` over contiguous chunks of `0..n` and fold the partials in order.
pub fn map_reduce<R, F, G>(n: u64, threads: usize, f: F, fold: G, init: R) -> R
where
    R: Send,
    F: Fn(std::ops::Range<u64>) -> R + Sync,
    G: Fn(R, R) -> R,
{
    let threads = threads.max(1).min(n.max(1) as usize);
    if threads == 1 {
        return fold(init, f(0..n));
    }
    let chunk = n.div_ceil(threads as u64);
    let partials: Vec<R> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..threads as u64)
            .map(|i| {
                let lo = i * chunk;
                let hi = ((i + 1) * chunk).min(n);
                let f = &f;
                s.spawn(move || f(lo..hi.max(lo)))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    partials.into_iter().fold(init, fold)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sum_matches_serial_for_every_thread_count() {
        let f = |r: std::ops::Range<u64>| r.map(|i| i * i).sum::<u64>();
        let want = f(0..10_000);
        for t in [1, 2, 3, 7, 16, 100] {
            let got = map_reduce(10_000, t, f, |a, b| a + b, 0u64);
            assert_eq!(got, want);
        }
    }

    #[test]
    fn empty_range() {
        let got = map_reduce(0, 4, |r| r.count(), |a, b| a + b, 0usize);
        assert_eq!(got, 0);
    }
}
