use alloc::vec::Vec;

use super::{
    eliminate_in, lowest, partition_sl, universe, without, Counting, Labeling, LevelGrid, Mirrored,
};
use crate::error::ScaleError;
use crate::oracle::QuerySource;
use crate::result::{Orientation, SortResult};
use crate::scale::{ElementId, ScaleSpec};

/// Queries spent in each stage of [`multi_sort`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StageCounts {
    pub initial_elimination: usize,
    pub refinement: usize,
    pub partition: usize,
    /// Re-running elimination and partition to collect the first `ts - 1` elements.
    pub s_prime: usize,
    pub ordering: usize,
    pub remnant: usize,
    pub verification: usize,
}

pub fn multi_sort<Q: QuerySource + ?Sized>(src: &mut Q) -> Result<SortResult, ScaleError> {
    multi_sort_with_stages(src).map(|(r, _)| r)
}

fn low_block(spec: &ScaleSpec) -> bool {
    spec.t1() == 1 && spec.ts() == spec.s() && spec.ts() < spec.k()
}

/// Sorts with a multi-output scale, reporting per-stage query counts.
///
/// Scales with `t1 >= 2` and `ts < k` follow the S′ construction. Scales whose
/// outputs are `1..=s` (or mirror to that) first isolate the `s` smallest
/// elements, whose internal order no query can reveal, and keep them in label
/// order. Other shapes are rejected.
pub fn multi_sort_with_stages<Q: QuerySource + ?Sized>(
    src: &mut Q,
) -> Result<(SortResult, StageCounts), ScaleError> {
    let spec = src.spec().clone();
    if spec.is_singleton() {
        return Err(ScaleError::Unsupported(
            "multi_sort needs at least two outputs",
        ));
    }
    spec.check_universe(src.n())?;
    if spec.t1() >= 2 && spec.ts() < spec.k() {
        run_s_prime(src)
    } else if low_block(&spec) {
        run_low_block(src)
    } else if low_block(&spec.mirrored()) {
        let mut m = Mirrored::new(src);
        run_low_block(&mut m).map(|(r, st)| (r.mirrored(), st))
    } else {
        Err(ScaleError::Unsupported(
            "multi-output scale needs t1 >= 2 and ts < k, or consecutive outputs at one end",
        ))
    }
}

fn run_s_prime<Q: QuerySource + ?Sized>(
    src: &mut Q,
) -> Result<(SortResult, StageCounts), ScaleError> {
    let spec = src.spec().clone();
    let all = universe(src.n());
    let mut c = Counting::new(src);
    let mut st = StageCounts::default();
    let (state, ec) = eliminate_in(&mut c, &all)?;
    st.initial_elimination = ec.initial;
    st.refinement = ec.refinement;
    let before = c.count;
    let part = partition_sl(&mut c, &state)?;
    st.partition = c.count - before;

    let unknown = part.labeling == Labeling::Unknown;
    // An asymmetric scale with |S| = |L| gets a second try with the other labeling.
    let attempts = if unknown && !spec.is_symmetric() {
        2
    } else {
        1
    };
    let mut last_err = ScaleError::Ambiguous("no labeling of S and L fits");
    for attempt in 0..attempts {
        let (mut s_set, mut l_set) = part.assumed();
        if attempt == 1 {
            core::mem::swap(&mut s_set, &mut l_set);
        }
        let middle = match order_under(&mut c, &spec, &all, &s_set, &l_set, &mut st) {
            Ok(m) => m,
            Err(e) if attempt + 1 < attempts => {
                last_err = e;
                continue;
            }
            Err(e) => return Err(e),
        };
        let mut orientation = Orientation::Resolved;
        if unknown {
            if spec.is_symmetric() {
                orientation = Orientation::ReflectionAmbiguous;
            } else {
                let before = c.count;
                let agrees = verify(&mut c, &spec, &middle)?;
                st.verification += c.count - before;
                if !agrees {
                    last_err = ScaleError::Inconsistent("verification query disagrees");
                    continue;
                }
            }
        }
        let used = c.count;
        return Ok((SortResult::new(middle, s_set, l_set, orientation, used), st));
    }
    Err(last_err)
}

/// Builds S′, orders the rest through a `(k′, 1)` reduction, then sorts S′ ∖ S.
fn order_under<Q: QuerySource + ?Sized>(
    c: &mut Counting<'_, Q>,
    spec: &ScaleSpec,
    all: &[ElementId],
    s_set: &[ElementId],
    l_set: &[ElementId],
    st: &mut StageCounts,
) -> Result<Vec<ElementId>, ScaleError> {
    let (k, t1, ts) = (spec.k(), spec.t1(), spec.ts());
    let mut l0 = l_set.to_vec();
    l0.sort_unstable();

    let before = c.count;
    let mut s_prime: Vec<ElementId> = s_set.to_vec();
    let mut last: Vec<ElementId> = s_set.to_vec();
    while s_prime.len() < ts - 1 {
        let need = ts - 1 - s_prime.len();
        let keep = (t1 - 1).saturating_sub(need);
        let putback = lowest(&last, keep)?;
        let removed = without(&s_prime, &putback);
        let (state, _) = eliminate_in(c, &without(all, &removed))?;
        let p = partition_sl(c, &state)?;
        let (mut a, mut b) = (p.a, p.b);
        a.sort_unstable();
        b.sort_unstable();
        let fresh_s = if b == l0 {
            a
        } else if a == l0 {
            b
        } else {
            return Err(ScaleError::Inconsistent("L changed while peeling S"));
        };
        if fresh_s.len() != t1 - 1 || putback.iter().any(|e| !fresh_s.contains(e)) {
            return Err(ScaleError::Inconsistent("peeled set has the wrong shape"));
        }
        s_prime = removed;
        s_prime.extend(&fresh_s);
        last = fresh_s;
    }
    st.s_prime += c.count - before;

    let before = c.count;
    let rest = without(&without(all, &s_prime), &l0);
    let branch = k - ts + 1;
    let sorted_rest = LevelGrid::new(&rest, branch).sort_with(|block| {
        let pad = branch - block.len();
        if l0.len() < pad {
            return Err(ScaleError::PaddingExhausted);
        }
        let mut q = s_prime.clone();
        q.extend_from_slice(block);
        q.extend_from_slice(&l0[..pad]);
        let out = c.query(&q)?;
        single_of(out.returned(), block)
    })?;
    st.ordering += c.count - before;

    let before = c.count;
    let top = ts - t1;
    if sorted_rest.len() < top {
        return Err(ScaleError::PaddingExhausted);
    }
    let mut high = l0.clone();
    high.extend_from_slice(&sorted_rest[sorted_rest.len() - top..]);
    let mut s_low = s_set.to_vec();
    s_low.sort_unstable();
    let mut remnant = without(&s_prime, s_set);
    let mut descending = Vec::with_capacity(remnant.len());
    while !remnant.is_empty() {
        remnant.sort_unstable();
        let mut champ = remnant[0];
        for chunk in remnant[1..].chunks(t1 - 1) {
            let mut window = alloc::vec![champ];
            window.extend_from_slice(chunk);
            let mut q = window.clone();
            q.extend_from_slice(&s_low[..t1 - window.len()]);
            q.extend_from_slice(&high);
            let out = c.query(&q)?;
            champ = single_of(out.returned(), &window)?;
        }
        descending.push(champ);
        remnant.retain(|&e| e != champ);
    }
    st.remnant += c.count - before;

    descending.reverse();
    descending.extend(sorted_rest);
    Ok(descending)
}

fn single_of(returned: &[ElementId], within: &[ElementId]) -> Result<ElementId, ScaleError> {
    let mut hits = returned.iter().filter(|e| within.contains(e));
    match (hits.next(), hits.next()) {
        (Some(&m), None) => Ok(m),
        _ => Err(ScaleError::Inconsistent(
            "expected exactly one returned block member",
        )),
    }
}

/// Asks one query of middle elements and compares it with the predicted outcome.
fn verify<Q: QuerySource + ?Sized>(
    c: &mut Counting<'_, Q>,
    spec: &ScaleSpec,
    middle: &[ElementId],
) -> Result<bool, ScaleError> {
    let q = lowest(middle, spec.k())?;
    let mut by_rank = q.clone();
    by_rank.sort_by_key(|e| middle.iter().position(|m| m == e));
    let mut predicted: Vec<ElementId> = spec.outputs().iter().map(|&t| by_rank[t - 1]).collect();
    predicted.sort_unstable();
    let actual = c.query(&q)?;
    Ok(actual.returned() == predicted.as_slice())
}

/// Outputs `1..=s`: the `s` smallest are mutually indistinguishable.
fn run_low_block<Q: QuerySource + ?Sized>(
    src: &mut Q,
) -> Result<(SortResult, StageCounts), ScaleError> {
    let spec = src.spec().clone();
    let (k, s) = (spec.k(), spec.s());
    let all = universe(src.n());
    let mut c = Counting::new(src);
    let mut st = StageCounts::default();
    let (state, ec) = eliminate_in(&mut c, &all)?;
    st.initial_elimination = ec.initial;
    st.refinement = ec.refinement;
    let before = c.count;
    let part = partition_sl(&mut c, &state)?;
    st.partition = c.count - before;
    let (s_set, l_set) = part.assumed();
    let mut l0 = l_set.clone();
    l0.sort_unstable();

    // Knock out the maximum of s+1 at a time until the s smallest remain.
    let before = c.count;
    let mut pool = without(&all, &l0);
    let pads = &l0[..k - s - 1];
    while pool.len() > s {
        let window = pool[..s + 1].to_vec();
        let mut q = window.clone();
        q.extend_from_slice(pads);
        let out = c.query(&q)?;
        let dropped: Vec<ElementId> = window
            .iter()
            .copied()
            .filter(|e| !out.contains(*e))
            .collect();
        match dropped.as_slice() {
            [d] => pool.retain(|e| e != d),
            _ => return Err(ScaleError::Inconsistent("window maximum not isolated")),
        }
    }
    st.s_prime = c.count - before;

    let before = c.count;
    let fixed = lowest(&pool, s - 1)?;
    let rest = without(&without(&all, &fixed), &l0);
    let branch = k - s + 1;
    let sorted_rest = LevelGrid::new(&rest, branch).sort_with(|block| {
        let pad = branch - block.len();
        if l0.len() < pad {
            return Err(ScaleError::PaddingExhausted);
        }
        let mut q = fixed.clone();
        q.extend_from_slice(block);
        q.extend_from_slice(&l0[..pad]);
        let out = c.query(&q)?;
        single_of(out.returned(), block)
    })?;
    st.ordering = c.count - before;

    let mut middle = fixed;
    middle.extend(sorted_rest);
    let used = c.count;
    Ok((
        SortResult::new(middle, s_set, l_set, Orientation::Resolved, used),
        st,
    ))
}
