//! Adaptive sorting: the three-stage singleton algorithm, the multi-output
//! pipeline and layered S/L disambiguation.

mod elimination;
mod layered;
mod multi;
mod singleton;
mod tournament;

pub use elimination::{
    eliminate_candidates, eliminate_in, partition_sl, CandidateState, EliminationCounts, Labeling,
    Partition,
};
pub use layered::{resolve_sl_layered, LayeredSegments, SegmentPair};
pub use multi::{multi_sort, multi_sort_with_stages, StageCounts};
pub use singleton::{singleton_sort, tournament_sort};
pub use tournament::{tree_depth, LevelGrid};

use alloc::vec::Vec;

use crate::error::ScaleError;
use crate::oracle::QuerySource;
use crate::scale::{ElementId, QueryOutcome, ScaleSpec};

/// Sorts with whichever online pipeline fits the scale.
pub fn online_sort<Q: QuerySource>(src: &mut Q) -> Result<crate::SortResult, ScaleError> {
    if src.spec().is_singleton() {
        singleton_sort(src)
    } else {
        multi_sort(src)
    }
}

/// `n + 2 d n'` with `n' = n - k + 1` and `d` the tournament depth, for a singleton scale.
pub fn online_singleton_bound(n: usize, spec: &ScaleSpec) -> usize {
    let (k, t) = (spec.k(), spec.t1());
    let n_prime = n.saturating_sub(k - 1).max(1);
    let branch = (k + 1 - t).max(t).max(2);
    n + 2 * tree_depth(n_prime, branch) * n_prime
}

/// Wraps a source and counts the queries passing through it.
pub(crate) struct Counting<'a, Q: ?Sized> {
    inner: &'a mut Q,
    pub count: usize,
}

impl<'a, Q: QuerySource + ?Sized> Counting<'a, Q> {
    pub fn new(inner: &'a mut Q) -> Self {
        Counting { inner, count: 0 }
    }
}

impl<Q: QuerySource + ?Sized> QuerySource for Counting<'_, Q> {
    fn spec(&self) -> &ScaleSpec {
        self.inner.spec()
    }

    fn n(&self) -> usize {
        self.inner.n()
    }

    fn query(&mut self, elements: &[ElementId]) -> Result<QueryOutcome, ScaleError> {
        self.count += 1;
        self.inner.query(elements)
    }
}

/// Presents a source under the mirrored scale. Outcome sets are unchanged.
pub(crate) struct Mirrored<'a, Q: ?Sized> {
    inner: &'a mut Q,
    spec: ScaleSpec,
}

impl<'a, Q: QuerySource + ?Sized> Mirrored<'a, Q> {
    pub fn new(inner: &'a mut Q) -> Self {
        let spec = inner.spec().mirrored();
        Mirrored { inner, spec }
    }
}

impl<Q: QuerySource + ?Sized> QuerySource for Mirrored<'_, Q> {
    fn spec(&self) -> &ScaleSpec {
        &self.spec
    }

    fn n(&self) -> usize {
        self.inner.n()
    }

    fn query(&mut self, elements: &[ElementId]) -> Result<QueryOutcome, ScaleError> {
        self.inner.query(elements)
    }
}

pub(crate) fn universe(n: usize) -> Vec<ElementId> {
    (0..n).map(ElementId).collect()
}

pub(crate) fn lowest(ids: &[ElementId], count: usize) -> Result<Vec<ElementId>, ScaleError> {
    let mut v = ids.to_vec();
    v.sort_unstable();
    if v.len() < count {
        return Err(ScaleError::NotEnoughDonors {
            have: v.len(),
            need: count,
        });
    }
    v.truncate(count);
    Ok(v)
}

pub(crate) fn without(ids: &[ElementId], drop: &[ElementId]) -> Vec<ElementId> {
    ids.iter().copied().filter(|e| !drop.contains(e)).collect()
}
