//! Batch evaluation strategy.
//!
//! Optimizers hand independent work items (episodes, trials, layouts) to a
//! [`BatchRunner`]. Results come back in input order, so the outcome does not
//! depend on how the items were scheduled.

use alloc::vec::Vec;

pub trait BatchRunner: Sync {
    fn map<T, R, F>(&self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send;
}

/// Evaluates items one after another on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl BatchRunner for Sequential {
    fn map<T, R, F>(&self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        items.iter().map(f).collect()
    }
}
