//! Index-ordered map/search over independent work items.
//!
//! With the `parallel` feature the work runs on the rayon pool; results are
//! always collected and reduced in index order, so the output does not depend
//! on the schedule.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

pub fn map_indexed<T, F>(count: usize, parallel: bool, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel {
        return (0..count).into_par_iter().map(f).collect();
    }
    let _ = parallel;
    (0..count).map(f).collect()
}

/// First `Some` in index order.
pub fn find_first<T, F>(count: usize, parallel: bool, f: F) -> Option<T>
where
    T: Send,
    F: Fn(usize) -> Option<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel {
        return (0..count).into_par_iter().find_map_first(f);
    }
    let _ = parallel;
    (0..count).find_map(f)
}

/// Whether every item satisfies `f`, checked in index order.
pub fn all_indexed<F>(count: usize, parallel: bool, f: F) -> bool
where
    F: Fn(usize) -> bool + Sync + Send,
{
    find_first(count, parallel, |i| if f(i) { None } else { Some(()) }).is_none()
}
