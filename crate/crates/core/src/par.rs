//! Execution strategy for the data-parallel loops (per-gamma sweeps,
//! histogram accumulation, corpus runs).
//!
//! With the `parallel` feature (on by default) work is spread over the rayon
//! thread pool. Without it, or when `POLARITY_NO_PARALLEL=1` is set in the
//! environment, every loop runs sequentially. Results are identical either
//! way: all reductions are ordered or integer-additive.

/// Environment variable that forces sequential execution when set to `1`.
pub const NO_PARALLEL_ENV: &str = "POLARITY_NO_PARALLEL";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    Parallel,
}

impl Execution {
    /// Parallel when compiled with the `parallel` feature and not disabled
    /// through [`NO_PARALLEL_ENV`].
    pub fn auto() -> Self {
        if !cfg!(feature = "parallel") {
            return Execution::Sequential;
        }
        match std::env::var(NO_PARALLEL_ENV) {
            Ok(v) if v.trim() == "1" => Execution::Sequential,
            _ => Execution::Parallel,
        }
    }

    /// Order-preserving map over a slice.
    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                items.par_iter().map(f).collect()
            }
            _ => items.iter().map(f).collect(),
        }
    }

    /// Folds fixed-size chunks of `items` into accumulators and merges them.
    /// `merge` must be associative and commutative for the result to be
    /// independent of the execution mode.
    pub fn fold_chunks<T, A, I, F, M>(self, items: &[T], chunk: usize, init: I, fold: F, merge: M) -> A
    where
        T: Sync,
        A: Send,
        I: Fn() -> A + Sync + Send,
        F: Fn(&mut A, &[T]) + Sync + Send,
        M: Fn(A, A) -> A + Sync + Send,
    {
        let chunk = chunk.max(1);
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                items
                    .par_chunks(chunk)
                    .map(|c| {
                        let mut acc = init();
                        fold(&mut acc, c);
                        acc
                    })
                    .reduce(&init, &merge)
            }
            _ => items.chunks(chunk).fold(init(), |total, c| {
                let mut acc = init();
                fold(&mut acc, c);
                merge(total, acc)
            }),
        }
    }
}

impl Default for Execution {
    fn default() -> Self {
        Execution::auto()
    }
}
