//! Deterministic parallel exploration of a fixed list of root branches.
//!
//! A sequential depth-first search with a node budget explores the root
//! branches in order, charging each one its node count until a solution is
//! found or the budget runs out. Here every branch runs independently with
//! the full budget and the outcomes are folded in branch order afterwards,
//! which reproduces the sequential answer exactly for any thread count.

use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;

use crate::error::{Error, Result};

pub(crate) struct BranchOutcome<T> {
    pub found: Option<T>,
    /// Nodes spent; greater than the budget when the branch was cut off.
    pub nodes: u64,
}

/// Handed to a running branch so it can stop once an earlier branch has a
/// solution.
pub(crate) struct Cancel<'a> {
    index: usize,
    best: &'a AtomicUsize,
}

impl Cancel<'_> {
    pub fn should_stop(&self) -> bool {
        self.best.load(Ordering::Relaxed) < self.index
    }
}

/// Number of worker threads: the explicit request, else `CHARQ_THREADS`, else rayon's default.
pub(crate) fn thread_count(requested: Option<usize>) -> usize {
    requested
        .or_else(|| std::env::var("CHARQ_THREADS").ok().and_then(|v| v.parse().ok()))
        .filter(|&t| t > 0)
        .unwrap_or_else(rayon::current_num_threads)
}

/// Runs `run(branch, budget, cancel)` over all branches and returns the first
/// solution in branch order together with the total node count, as a
/// sequential search would.
pub(crate) fn first_in_order<B, T, F>(branches: &[B], budget: u64, threads: usize, run: F) -> Result<(Option<T>, u64)>
where
    B: Sync,
    T: Send,
    F: Fn(&B, u64, &Cancel<'_>) -> BranchOutcome<T> + Sync,
{
    let best = AtomicUsize::new(usize::MAX);
    let work = |(index, branch): (usize, &B)| -> Option<BranchOutcome<T>> {
        let cancel = Cancel { index, best: &best };
        if cancel.should_stop() {
            return None;
        }
        let outcome = run(branch, budget, &cancel);
        if cancel.should_stop() {
            return None;
        }
        if outcome.found.is_some() {
            best.fetch_min(index, Ordering::Relaxed);
        }
        Some(outcome)
    };
    let outcomes: Vec<Option<BranchOutcome<T>>> = if threads <= 1 {
        branches.iter().enumerate().map(work).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::InvalidParams(format!("thread pool: {e}")))?;
        pool.install(|| branches.par_iter().enumerate().map(work).collect())
    };
    let mut used = 0u64;
    for outcome in outcomes {
        // Branches after the first solution may have been cancelled; they are
        // never reached here.
        let outcome = outcome.expect("cancelled branch before the first solution");
        used = used.saturating_add(outcome.nodes);
        if used > budget {
            return Err(Error::BudgetExhausted { nodes: budget });
        }
        if let Some(found) = outcome.found {
            return Ok((Some(found), used));
        }
    }
    Ok((None, used))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fake(branch: &(u64, bool), budget: u64, _: &Cancel<'_>) -> BranchOutcome<u64> {
        let (cost, ok) = *branch;
        if cost > budget {
            return BranchOutcome { found: None, nodes: budget + 1 };
        }
        BranchOutcome { found: ok.then_some(cost), nodes: cost }
    }

    #[test]
    fn folds_in_order() {
        let branches = [(5, false), (7, true), (1, true)];
        for threads in [1, 4] {
            assert_eq!(first_in_order(&branches, 100, threads, fake).unwrap(), (Some(7), 12));
            assert!(matches!(
                first_in_order(&branches, 11, threads, fake),
                Err(Error::BudgetExhausted { nodes: 11 })
            ));
            assert_eq!(first_in_order(&[(3, false), (4, false)], 7, threads, fake).unwrap(), (None, 7));
        }
    }
}
