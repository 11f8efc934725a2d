use alloc::vec::Vec;

use super::{partition_sl, universe, without, Counting, Labeling, LevelGrid};
use crate::error::ScaleError;
use crate::oracle::QuerySource;
use crate::result::{Orientation, SortResult};
use crate::scale::ElementId;

/// Orders `middle` given S and L, extracting minima through a `k'`-ary grid.
///
/// When `t - 1 > k - t` the scale is read mirrored: maxima are extracted with
/// L filling the low positions, and the sequence is reversed at the end.
pub fn tournament_sort<Q: QuerySource + ?Sized>(
    src: &mut Q,
    s_set: &[ElementId],
    l_set: &[ElementId],
    middle: &[ElementId],
) -> Result<SortResult, ScaleError> {
    let spec = src.spec().clone();
    if !spec.is_singleton() {
        return Err(ScaleError::Unsupported(
            "tournament_sort needs a singleton scale",
        ));
    }
    let (k, t) = (spec.k(), spec.t1());
    let mirrored = t - 1 > k - t;
    let tw = if mirrored { k + 1 - t } else { t };
    let (low, high) = if mirrored {
        (l_set, s_set)
    } else {
        (s_set, l_set)
    };
    if low.len() != tw - 1 {
        return Err(ScaleError::Inconsistent(
            "S does not fill the low positions",
        ));
    }
    let branch = k - tw + 1;
    let mut high = high.to_vec();
    high.sort_unstable();
    let mut order: Vec<ElementId> = middle.to_vec();
    order.sort_unstable();

    let mut c = Counting::new(src);
    let sorted = LevelGrid::new(&order, branch).sort_with(|block| {
        let pad = branch - block.len();
        if high.len() < pad {
            return Err(ScaleError::PaddingExhausted);
        }
        let mut q: Vec<ElementId> = low.to_vec();
        q.extend_from_slice(block);
        q.extend_from_slice(&high[..pad]);
        let out = c.query(&q)?;
        out.single()
            .filter(|m| block.contains(m))
            .ok_or(ScaleError::Inconsistent("outcome is not a block member"))
    })?;
    let mut sorted = sorted;
    if mirrored {
        sorted.reverse();
    }
    Ok(SortResult::new(
        sorted,
        s_set.to_vec(),
        l_set.to_vec(),
        Orientation::Resolved,
        c.count,
    ))
}

/// Elimination, S/L partition, then tournament extraction.
pub fn singleton_sort<Q: QuerySource + ?Sized>(src: &mut Q) -> Result<SortResult, ScaleError> {
    let spec = src.spec().clone();
    if !spec.is_singleton() {
        return Err(ScaleError::Unsupported(
            "singleton_sort needs a singleton scale",
        ));
    }
    let n = src.n();
    spec.check_universe(n)?;
    let all = universe(n);
    let mut c = Counting::new(src);
    let (state, _) = super::eliminate_in(&mut c, &all)?;
    let part = partition_sl(&mut c, &state)?;
    let (s_set, l_set) = part.assumed();
    let middle = without(&all, &state.candidates);
    let mut result = tournament_sort(&mut c, &s_set, &l_set, &middle)?;
    result.orientation = match part.labeling {
        Labeling::Unknown => Orientation::ReflectionAmbiguous,
        _ => Orientation::Resolved,
    };
    result.queries_used = c.count;
    Ok(result)
}
