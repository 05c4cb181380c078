//! Data-parallel helpers. With the `parallel` feature the work runs on the
//! rayon pool; without it [`ExecutionMode::Parallel`] degrades to a plain
//! sequential loop, so callers never need their own `cfg` gates.

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExecutionMode {
    Sequential,
    #[default]
    Parallel,
}

impl ExecutionMode {
    /// True when this mode actually fans out work in the current build.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Self::Parallel
    }
}

/// Order-preserving map over a slice.
pub fn map_slice<T, R, F>(mode: ExecutionMode, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    let _ = mode;
    items.iter().map(f).collect()
}
