//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (on by default) the maps below run on the
//! rayon global pool; without it they are plain iterator loops. Either way
//! the output order is the input order, and [`pairwise_sum`] reduces in a
//! fixed tree order, so floating-point results are bit-identical across
//! builds and thread counts.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Applies `f` to every element of `items`, preserving order.
pub fn map_slice<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Applies `f` to `0..n`, preserving order.
pub fn map_range<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
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

/// Sums `values` by recursive halving. The association order depends only
/// on `values.len()`.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const LEAF: usize = 8;
    if values.len() <= LEAF {
        return values.iter().fold(0.0, |acc, v| acc + v);
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Whether this build evaluates the maps above on a thread pool.
pub const fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}

/// A fixed-size worker pool. Without the `parallel` feature it runs
/// closures on the caller's thread.
pub struct Pool {
    #[cfg(feature = "parallel")]
    inner: rayon::ThreadPool,
}

impl Pool {
    pub fn new(threads: usize) -> Self {
        #[cfg(feature = "parallel")]
        {
            let inner = rayon::ThreadPoolBuilder::new()
                .num_threads(threads.max(1))
                .build()
                .expect("failed to build rayon pool");
            Pool { inner }
        }
        #[cfg(not(feature = "parallel"))]
        {
            let _ = threads;
            Pool {}
        }
    }

    /// Runs `f` with this pool serving the maps above.
    pub fn install<R: Send>(&self, f: impl FnOnce() -> R + Send) -> R {
        #[cfg(feature = "parallel")]
        {
            self.inner.install(f)
        }
        #[cfg(not(feature = "parallel"))]
        {
            f()
        }
    }

    pub fn threads(&self) -> usize {
        #[cfg(feature = "parallel")]
        {
            self.inner.current_num_threads()
        }
        #[cfg(not(feature = "parallel"))]
        {
            1
        }
    }
}

/// Runs `f` on a fresh pool of `threads` workers.
pub fn with_threads<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> R {
    Pool::new(threads).install(f)
}

/// Worker count of the default pool.
pub fn default_threads() -> usize {
    #[cfg(feature = "parallel")]
    {
        rayon::current_num_threads()
    }
    #[cfg(not(feature = "parallel"))]
    {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_sum_matches_exact_integers() {
        let v: Vec<f64> = (1..=1000).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&v), 500500.0);
        assert_eq!(pairwise_sum(&[]), 0.0);
    }

    #[test]
    fn maps_preserve_order() {
        let v: Vec<usize> = (0..100).collect();
        assert_eq!(map_slice(&v, |x| x * 2), map_range(100, |x| x * 2));
    }

    #[test]
    fn thread_count_does_not_change_sums() {
        let vals: Vec<f64> = (0..10_000).map(|i| (i as f64).sin() * 1e-3).collect();
        let one = with_threads(1, || pairwise_sum(&map_slice(&vals, |v| v * v)));
        let many = with_threads(4, || pairwise_sum(&map_slice(&vals, |v| v * v)));
        assert_eq!(one.to_bits(), many.to_bits());
    }
}
