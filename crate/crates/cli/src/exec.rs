use mirror_fidelity::oracle::IndexMap;
use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuilder};

/// Evaluates work items on a dedicated rayon pool. Results come back in
/// index order, so output does not depend on the worker count.
pub struct Parallel {
    pool: ThreadPool,
}

impl Parallel {
    /// `threads == 0` lets rayon pick.
    pub fn new(threads: usize) -> Self {
        let pool = ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("thread pool");
        Self { pool }
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl IndexMap for Parallel {
    fn map_indices<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        self.pool
            .install(|| (0..n).into_par_iter().map(f).collect())
    }
}
