//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (on by default) [`Exec::Parallel`] spreads work
//! over the rayon thread pool. Without it, or with [`Exec::Sequential`], the
//! same closures run in order on the calling thread. Results are returned in
//! input order either way, so output never depends on the mode.

/// Execution mode for batch work.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// Whether work actually runs on several threads in this build.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }

    /// `items.map(f)`, preserving order.
    pub fn map<T, R, F>(self, items: Vec<T>, f: F) -> Vec<R>
    where
        T: Send,
        R: Send,
        F: Fn(T) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Exec::Parallel {
            use rayon::prelude::*;
            return items.into_par_iter().map(f).collect();
        }
        items.into_iter().map(f).collect()
    }

    /// The first item (in input order) for which `f` returns `Some`.
    pub fn find_map_first<T, R, F>(self, items: Vec<T>, f: F) -> Option<R>
    where
        T: Send,
        R: Send,
        F: Fn(T) -> Option<R> + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Exec::Parallel {
            use rayon::prelude::*;
            return items.into_par_iter().find_map_first(f);
        }
        items.into_iter().find_map(f)
    }
}
