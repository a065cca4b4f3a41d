//! Execution strategy for embarrassingly parallel sweeps.
//!
//! Grid searches, boundary scans and batch cross-checks all reduce to "map a
//! pure function over 0..n and keep the results in index order". With the
//! default `parallel` feature that map fans out over a rayon pool; without
//! it the same call is a plain sequential loop. Results are assembled by
//! index either way, so the output is bit-for-bit identical across modes and
//! thread counts.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Which implementation this build uses; surfaced in benchmark names and
/// diagnostic output.
pub const MODE: &str = if cfg!(feature = "parallel") {
    "parallel"
} else {
    "sequential"
};

/// Map `f` over `0..n`, returning results in index order.
#[cfg(feature = "parallel")]
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect()
}

/// Map `f` over `0..n`, returning results in index order.
#[cfg(not(feature = "parallel"))]
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn results_come_back_in_index_order() {
        let out = map_indexed(100, |i| i * i);
        assert_eq!(out.len(), 100);
        for (i, v) in out.iter().enumerate() {
            assert_eq!(*v, i * i);
        }
    }

    #[test]
    fn empty_range_is_fine() {
        let out: Vec<u8> = map_indexed(0, |_| 0);
        assert!(out.is_empty());
    }
}
