//! Process wide resource caps. They are read on every enumeration so a front
//! end can lower them once at startup.

use std::cell::Cell;
use std::sync::atomic::{AtomicU32, AtomicUsize, Ordering};

use crate::error::{Error, Result};

pub const DEFAULT_MAX_TERMS: usize = 1_000_000;
pub const DEFAULT_MAX_RANK: u32 = 12;

static MAX_TERMS: AtomicUsize = AtomicUsize::new(DEFAULT_MAX_TERMS);
static MAX_RANK: AtomicU32 = AtomicU32::new(DEFAULT_MAX_RANK);

thread_local! {
    static LOCAL_MAX_TERMS: Cell<Option<usize>> = const { Cell::new(None) };
}

pub fn max_terms() -> usize {
    LOCAL_MAX_TERMS.with(|c| c.get()).unwrap_or_else(|| MAX_TERMS.load(Ordering::Relaxed))
}

/// Run `f` with a term cap that only applies to the calling thread.
pub fn with_max_terms<R>(cap: usize, f: impl FnOnce() -> R) -> R {
    let prev = LOCAL_MAX_TERMS.with(|c| c.replace(Some(cap)));
    let out = f();
    LOCAL_MAX_TERMS.with(|c| c.set(prev));
    out
}

pub fn set_max_terms(cap: usize) {
    MAX_TERMS.store(cap, Ordering::Relaxed);
}

pub fn max_rank() -> u32 {
    MAX_RANK.load(Ordering::Relaxed)
}

pub fn set_max_rank(cap: u32) {
    MAX_RANK.store(cap, Ordering::Relaxed);
}

pub(crate) fn check_rank(rank: u32) -> Result<()> {
    let cap = max_rank();
    if rank > cap {
        return Err(Error::RankCap { rank, cap });
    }
    Ok(())
}

pub(crate) fn check_terms(len: usize) -> Result<()> {
    let cap = max_terms();
    if len > cap {
        return Err(Error::CharacterTooLarge { cap });
    }
    Ok(())
}
