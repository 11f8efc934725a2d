//! Sorting results and the relation that says how much of an order is determinable.

use alloc::vec::Vec;

use crate::error::ScaleError;
use crate::scale::{ElementId, HiddenOrder, ScaleSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    Resolved,
    /// Only possible for symmetric scales: the order may be reversed, with S and L swapped.
    ReflectionAmbiguous,
}

/// Recovered order of the middle elements, plus the unorderable extremes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SortResult {
    /// Middle elements, smallest first.
    pub middle: Vec<ElementId>,
    /// The `t1 - 1` smallest elements, ascending by id.
    pub s_set: Vec<ElementId>,
    /// The `k - ts` largest elements, ascending by id.
    pub l_set: Vec<ElementId>,
    pub orientation: Orientation,
    pub queries_used: usize,
}

impl SortResult {
    pub fn new(
        middle: Vec<ElementId>,
        mut s_set: Vec<ElementId>,
        mut l_set: Vec<ElementId>,
        orientation: Orientation,
        queries_used: usize,
    ) -> Self {
        s_set.sort_unstable();
        l_set.sort_unstable();
        SortResult {
            middle,
            s_set,
            l_set,
            orientation,
            queries_used,
        }
    }

    /// The same result read in the reversed order.
    pub fn mirrored(mut self) -> Self {
        self.middle.reverse();
        core::mem::swap(&mut self.s_set, &mut self.l_set);
        self
    }

    /// Outcome this result predicts for a query over its own universe.
    ///
    /// S and L members never reach an output position, so their internal
    /// order does not matter.
    pub fn predict(&self, spec: &ScaleSpec, query: &[ElementId]) -> Option<Vec<ElementId>> {
        let mut keyed: Vec<(usize, ElementId)> = Vec::with_capacity(query.len());
        for &e in query {
            let key = if self.s_set.binary_search(&e).is_ok() {
                0
            } else if self.l_set.binary_search(&e).is_ok() {
                usize::MAX
            } else {
                1 + self.middle.iter().position(|&m| m == e)?
            };
            keyed.push((key, e));
        }
        keyed.sort_unstable();
        let mut out: Vec<ElementId> = spec
            .outputs()
            .iter()
            .map(|&t| keyed.get(t - 1).map(|p| p.1))
            .collect::<Option<_>>()?;
        out.sort_unstable();
        Some(out)
    }

    pub fn len(&self) -> usize {
        self.middle.len() + self.s_set.len() + self.l_set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn partitions(result: &SortResult, n: usize) -> bool {
    if result.len() != n {
        return false;
    }
    let mut seen = alloc::vec![false; n];
    for id in result
        .middle
        .iter()
        .chain(&result.s_set)
        .chain(&result.l_set)
    {
        if id.0 >= n || seen[id.0] {
            return false;
        }
        seen[id.0] = true;
    }
    true
}

fn matches_exactly(result: &SortResult, asc: &[ElementId], spec: &ScaleSpec) -> bool {
    let n = asc.len();
    let (s, l) = (spec.s_size(), spec.l_size());
    if s + l > n || result.s_set.len() != s || result.l_set.len() != l {
        return false;
    }
    let mut true_s = asc[..s].to_vec();
    let mut true_l = asc[n - l..].to_vec();
    true_s.sort_unstable();
    true_l.sort_unstable();
    true_s == result.s_set && true_l == result.l_set && result.middle == asc[s..n - l]
}

/// True iff `result` agrees with `truth` on everything a scale can determine.
pub fn equivalent_up_to_ambiguity(
    result: &SortResult,
    truth: &HiddenOrder,
    spec: &ScaleSpec,
) -> Result<bool, ScaleError> {
    if !partitions(result, truth.n()) {
        return Err(ScaleError::PartitionMismatch);
    }
    let asc = truth.ascending();
    if matches_exactly(result, &asc, spec) {
        return Ok(true);
    }
    if result.orientation == Orientation::ReflectionAmbiguous && spec.is_symmetric() {
        return Ok(matches_exactly(&result.clone().mirrored(), &asc, spec));
    }
    Ok(false)
}
