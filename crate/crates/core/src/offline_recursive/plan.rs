use alloc::vec::Vec;

use crate::combin::{choose, combinations};
use crate::error::ScaleError;
use crate::scale::{ElementId, Query, ScaleSpec};

/// The output position read on the side where it is at most `(k+1)/2`.
pub fn working_t(spec: &ScaleSpec) -> (usize, bool) {
    let (k, t) = (spec.k(), spec.t1());
    if t - 1 > k - t {
        (k + 1 - t, true)
    } else {
        (t, false)
    }
}

/// `C(k+t-2, k) + C(k+t-2, t-1) * C(n-t+1, k-t+1)`, with `t` folded to `min(t, k+1-t)`.
pub fn recursive_plan_size(n: usize, k: usize, t: usize) -> usize {
    let t = t.min(k + 1 - t);
    let m = k + t - 2;
    choose(m, k) + choose(m, t - 1) * choose(n - t + 1, k - t + 1)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecursivePlan {
    pub n: usize,
    pub spec: ScaleSpec,
    /// Position on the working side, see [`working_t`].
    pub t: usize,
    /// The lowest-labeled `k + t - 2` elements.
    pub superset: Vec<ElementId>,
    /// All k-subsets of the superset.
    pub closure: Vec<Query>,
    /// For each `(t-1)`-subset of the superset, every query containing it.
    pub fans: Vec<(Vec<ElementId>, Vec<Query>)>,
}

impl RecursivePlan {
    /// Closure first, then fans in order. Repeats are kept.
    pub fn queries(&self) -> impl Iterator<Item = &Query> {
        self.closure
            .iter()
            .chain(self.fans.iter().flat_map(|(_, f)| f.iter()))
    }

    pub fn len(&self) -> usize {
        self.closure.len() + self.fans.iter().map(|(_, f)| f.len()).sum::<usize>()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of distinct queries.
    pub fn distinct_len(&self) -> usize {
        let mut all: Vec<&Query> = self.queries().collect();
        all.sort_unstable();
        all.dedup();
        all.len()
    }
}

pub fn build_recursive_plan(n: usize, spec: &ScaleSpec) -> Result<RecursivePlan, ScaleError> {
    if !spec.is_singleton() {
        return Err(ScaleError::Unsupported(
            "deduction is defined for singleton scales only",
        ));
    }
    let k = spec.k();
    if n <= 2 * k {
        return Err(ScaleError::TooFewElements {
            n,
            needed: 2 * k + 1,
        });
    }
    let (t, _) = working_t(spec);
    let ids: Vec<ElementId> = (0..n).map(ElementId).collect();
    let superset = ids[..k + t - 2].to_vec();
    let closure = combinations(&superset, k)
        .map(|q| Query::new(q, k))
        .collect::<Result<Vec<_>, _>>()?;
    let mut fans = Vec::new();
    for fixed in combinations(&superset, t - 1) {
        let free: Vec<ElementId> = ids.iter().copied().filter(|e| !fixed.contains(e)).collect();
        let fan = combinations(&free, k - t + 1)
            .map(|mut f| {
                f.extend_from_slice(&fixed);
                Query::new(f, k)
            })
            .collect::<Result<Vec<_>, _>>()?;
        fans.push((fixed, fan));
    }
    Ok(RecursivePlan {
        n,
        spec: spec.clone(),
        t,
        superset,
        closure,
        fans,
    })
}
