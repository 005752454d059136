//! Worker pool used for replicate-level parallelism.
//!
//! Results are always collected in replicate order and reduced sequentially,
//! so the worker count never changes any output.

use rayon::prelude::*;

#[derive(Debug, Default)]
pub struct Workers {
    pool: Option<rayon::ThreadPool>,
}

impl Workers {
    /// `None` or `Some(0)` uses rayon's global pool.
    pub fn new(threads: Option<usize>) -> Self {
        let pool = threads
            .filter(|&t| t > 0)
            .map(|t| rayon::ThreadPoolBuilder::new().num_threads(t).build().expect("thread pool construction"));
        Workers { pool }
    }

    pub fn threads(&self) -> usize {
        self.pool.as_ref().map_or_else(rayon::current_num_threads, |p| p.current_num_threads())
    }

    /// `f(0), ..., f(count - 1)` in index order.
    pub fn map<T, F>(&self, count: u64, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64) -> T + Sync + Send,
    {
        let run = || (0..count).into_par_iter().map(&f).collect::<Vec<T>>();
        match &self.pool {
            Some(pool) => pool.install(run),
            None => run(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        for t in [None, Some(1), Some(3)] {
            let w = Workers::new(t);
            assert_eq!(w.map(100, |i| i * i), (0..100).map(|i| i * i).collect::<Vec<_>>());
        }
    }
}
