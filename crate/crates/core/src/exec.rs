//! Execution mode switch.
//!
//! Every bulk loop in the crate goes through the helpers here. With the
//! `parallel` feature they fan out over rayon unless the caller asked for
//! sequential execution on this thread; without it they are plain iterators.
//! Results are always returned in input order so output never depends on
//! scheduling.

use std::cell::Cell;

thread_local! {
    static FORCE_SEQUENTIAL: Cell<bool> = const { Cell::new(false) };
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Sequential,
    Parallel,
}

/// The mode bulk helpers will use when called from this thread.
pub fn mode() -> Mode {
    if cfg!(feature = "parallel") && !FORCE_SEQUENTIAL.with(|c| c.get()) {
        Mode::Parallel
    } else {
        Mode::Sequential
    }
}

/// Run `f` with every bulk helper forced onto the calling thread.
pub fn sequential<R>(f: impl FnOnce() -> R) -> R {
    let prev = FORCE_SEQUENTIAL.with(|c| c.replace(true));
    let out = f();
    FORCE_SEQUENTIAL.with(|c| c.set(prev));
    out
}

/// Run `f` in the given mode.
pub fn with_mode<R>(m: Mode, f: impl FnOnce() -> R) -> R {
    match m {
        Mode::Sequential => sequential(f),
        Mode::Parallel => f(),
    }
}

/// Run `f` inside a dedicated pool of `threads` workers (0 means the rayon
/// default). A no-op wrapper when built without `parallel`.
pub fn with_threads<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> R {
    #[cfg(feature = "parallel")]
    {
        if threads > 0 {
            if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
                return pool.install(f);
            }
        }
        f()
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        f()
    }
}

pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode() == Mode::Parallel {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    items.iter().map(f).collect()
}

pub fn flat_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Vec<R> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode() == Mode::Parallel {
        use rayon::prelude::*;
        return items.par_iter().flat_map_iter(f).collect();
    }
    items.iter().flat_map(f).collect()
}

pub fn all<T, F>(items: &[T], f: F) -> bool
where
    T: Sync,
    F: Fn(&T) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode() == Mode::Parallel {
        use rayon::prelude::*;
        return items.par_iter().all(f);
    }
    items.iter().all(f)
}

/// Fold each item into an accumulator and merge the per-worker accumulators.
/// `merge` must be associative and `init` its identity.
pub fn fold<T, A, I, F, M>(items: &[T], init: I, step: F, merge: M) -> A
where
    T: Sync,
    A: Send,
    I: Fn() -> A + Sync + Send,
    F: Fn(A, &T) -> A + Sync + Send,
    M: Fn(A, A) -> A + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode() == Mode::Parallel {
        use rayon::prelude::*;
        return items.par_iter().fold(&init, &step).reduce(&init, &merge);
    }
    let _ = &merge;
    items.iter().fold(init(), step)
}

/// Same as [`map`] over an index range.
pub fn map_range<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode() == Mode::Parallel {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    (0..n).map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        let xs: Vec<u64> = (0..1000).collect();
        let par = map(&xs, |x| x * x);
        let seq = sequential(|| map(&xs, |x| x * x));
        assert_eq!(par, seq);
        let s1 = fold(&xs, || 0u64, |a, x| a + x, |a, b| a + b);
        let s2 = sequential(|| fold(&xs, || 0u64, |a, x| a + x, |a, b| a + b));
        assert_eq!(s1, 499500);
        assert_eq!(s1, s2);
    }

    #[test]
    fn sequential_restores_mode() {
        let before = mode();
        sequential(|| assert_eq!(mode(), Mode::Sequential));
        assert_eq!(mode(), before);
    }
}
