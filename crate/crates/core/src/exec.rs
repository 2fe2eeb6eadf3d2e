//! Sequential vs. data-parallel execution of independent per-item work.
//!
//! With the `parallel` feature (on by default) [`Strategy::Parallel`] maps
//! over rayon's thread pool. Without it, `Parallel` silently degrades to the
//! sequential path so callers never need their own `cfg` switches. Both
//! paths preserve input order, so results are identical either way.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    Sequential,
    Parallel,
}

impl Default for Strategy {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Strategy::Parallel
        } else {
            Strategy::Sequential
        }
    }
}

impl Strategy {
    /// Whether this strategy actually runs on multiple threads in this build.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Strategy::Parallel
    }

    /// Order-preserving map over a slice.
    pub fn map<T, U, F>(self, items: &[T], f: F) -> Vec<U>
    where
        T: Sync,
        U: Send,
        F: Fn(&T) -> U + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Strategy::Parallel {
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }

    /// Order-preserving fallible map; returns the first error in input order.
    pub fn try_map<T, U, E, F>(self, items: &[T], f: F) -> Result<Vec<U>, E>
    where
        T: Sync,
        U: Send,
        E: Send,
        F: Fn(&T) -> Result<U, E> + Sync + Send,
    {
        self.map(items, f).into_iter().collect()
    }

    /// Map over an index range and flatten, preserving order.
    pub fn flat_map_range<U, F>(self, range: std::ops::Range<usize>, f: F) -> Vec<U>
    where
        U: Send,
        F: Fn(usize) -> Vec<U> + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Strategy::Parallel {
            return range.into_par_iter().flat_map_iter(f).collect();
        }
        range.flat_map(f).collect()
    }
}
