//! Execution policy for the per-particle loops.
//!
//! Work is split into fixed-size chunks whose boundaries do not depend on the
//! thread count. Reductions sum each chunk sequentially and then fold the
//! chunk partials in index order, so sequential and parallel execution give
//! bit-identical results.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Particles per work item.
pub const CHUNK: usize = 8192;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Rayon data parallelism. Falls back to sequential when the crate is
    /// built without the `parallel` feature.
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

impl Execution {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }

    /// Map every chunk of `data` to a partial value and fold the partials in
    /// chunk order.
    pub(crate) fn reduce_chunks<T, R, M, F>(self, data: &[T], map: M, init: R, fold: F) -> R
    where
        T: Sync,
        R: Send,
        M: Fn(&[T]) -> R + Sync + Send,
        F: Fn(R, R) -> R,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            let partials: Vec<R> = data.par_chunks(CHUNK).map(map).collect();
            return partials.into_iter().fold(init, fold);
        }
        data.chunks(CHUNK).map(map).fold(init, fold)
    }

    /// Apply `f(global_index, item)` to every element.
    pub(crate) fn for_each_indexed<T, F>(self, data: &mut [T], f: F)
    where
        T: Send,
        F: Fn(usize, &mut T) + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            data.par_chunks_mut(CHUNK)
                .enumerate()
                .for_each(|(c, chunk)| {
                    let base = c * CHUNK;
                    chunk
                        .iter_mut()
                        .enumerate()
                        .for_each(|(i, v)| f(base + i, v));
                });
            return;
        }
        data.iter_mut().enumerate().for_each(|(i, v)| f(i, v));
    }

    /// Build a vector of `n` items from their indices.
    pub(crate) fn generate<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return (0..n).into_par_iter().with_min_len(CHUNK).map(f).collect();
        }
        (0..n).map(f).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reductions_agree_bitwise() {
        let data: Vec<f64> = (0..100_003)
            .map(|i| ((i as f64) * 0.37).sin() * 1e3)
            .collect();
        let sum = |exec: Execution| {
            exec.reduce_chunks(&data, |c| c.iter().sum::<f64>(), 0.0, |a, b| a + b)
        };
        assert_eq!(
            sum(Execution::Sequential).to_bits(),
            sum(Execution::Parallel).to_bits()
        );
    }

    #[test]
    fn indexed_map_sees_global_indices() {
        let mut data = vec![0usize; 3 * CHUNK + 5];
        Execution::Parallel.for_each_indexed(&mut data, |i, v| *v = i);
        assert!(data.iter().enumerate().all(|(i, &v)| i == v));
        let g = Execution::Parallel.generate(CHUNK + 7, |i| 2 * i);
        assert_eq!(g, Execution::Sequential.generate(CHUNK + 7, |i| 2 * i));
    }
}
