use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use super::{lowest, universe, without};
use crate::combin::combinations;
use crate::error::ScaleError;
use crate::oracle::QuerySource;
use crate::scale::{ElementId, QueryOutcome};

/// Elements still suspected to be in S or L, and those already seen in an outcome.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateState {
    /// Ascending by id.
    pub candidates: Vec<ElementId>,
    /// In order of elimination.
    pub eliminated: Vec<ElementId>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EliminationCounts {
    pub initial: usize,
    pub refinement: usize,
}

/// Eliminates over the whole universe `0..n`.
///
/// Only `n > k` is checked here; too small a universe for a multi-output
/// scale shows up as [`ScaleError::NotEnoughDonors`].
pub fn eliminate_candidates<Q: QuerySource + ?Sized>(
    src: &mut Q,
) -> Result<CandidateState, ScaleError> {
    let n = src.n();
    eliminate_in(src, &universe(n)).map(|(state, _)| state)
}

/// Shrinks `universe` down to its S and L parts.
pub fn eliminate_in<Q: QuerySource + ?Sized>(
    src: &mut Q,
    universe: &[ElementId],
) -> Result<(CandidateState, EliminationCounts), ScaleError> {
    let spec = src.spec().clone();
    if universe.len() <= spec.k() {
        return Err(ScaleError::TooFewElements {
            n: universe.len(),
            needed: spec.k() + 1,
        });
    }
    let (k, s) = (spec.k(), spec.s());
    let mut cand: BTreeSet<ElementId> = universe.iter().copied().collect();
    let mut eliminated: Vec<ElementId> = Vec::new();
    let mut counts = EliminationCounts::default();

    while cand.len() > k - s {
        let mut q: Vec<ElementId> = cand.iter().copied().take(k).collect();
        if q.len() < k {
            q.extend(lowest(&eliminated, k - q.len())?);
        }
        let out = src.query(&q)?;
        counts.initial += 1;
        let before = cand.len();
        for e in out.returned() {
            if cand.remove(e) {
                eliminated.push(*e);
            }
        }
        if cand.len() == before {
            return Err(ScaleError::Inconsistent("elimination made no progress"));
        }
    }

    let target = k - 1 - (spec.ts() - spec.t1());
    while cand.len() > target {
        let a = k - cand.len();
        let donors = lowest(&eliminated, 2 * a - 1)?;
        let fixed: Vec<ElementId> = cand.iter().copied().collect();
        let mut hit: BTreeSet<ElementId> = BTreeSet::new();
        for extra in combinations(&donors, a) {
            let mut q = fixed.clone();
            q.extend(extra);
            let out = src.query(&q)?;
            counts.refinement += 1;
            hit.extend(out.returned().iter().filter(|e| cand.contains(e)));
        }
        if hit.is_empty() {
            return Err(ScaleError::Inconsistent("candidate refinement stalled"));
        }
        for e in hit {
            cand.remove(&e);
            eliminated.push(e);
        }
    }

    Ok((
        CandidateState {
            candidates: cand.into_iter().collect(),
            eliminated,
        },
        counts,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Labeling {
    AIsS,
    BIsS,
    Unknown,
}

/// The candidates split by outcome shape. `a` holds the lowest-labeled candidate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    pub a: Vec<ElementId>,
    pub b: Vec<ElementId>,
    pub labeling: Labeling,
}

impl Partition {
    /// `(S, L)` under the labeling, taking `a` as S when it is unknown.
    pub fn assumed(&self) -> (Vec<ElementId>, Vec<ElementId>) {
        match self.labeling {
            Labeling::BIsS => (self.b.clone(), self.a.clone()),
            _ => (self.a.clone(), self.b.clone()),
        }
    }
}

/// Splits the candidates (exactly S and L) by querying each against fixed references.
pub fn partition_sl<Q: QuerySource + ?Sized>(
    src: &mut Q,
    state: &CandidateState,
) -> Result<Partition, ScaleError> {
    let spec = src.spec().clone();
    let k = spec.k();
    let cand = &state.candidates;
    let mut groups: Vec<(QueryOutcome, Vec<ElementId>)> = Vec::new();

    if state.eliminated.len() >= k - 1 {
        let refs = lowest(&state.eliminated, k - 1)?;
        for &c in cand {
            let mut q = refs.clone();
            q.push(c);
            let out = src.query(&q)?;
            push_group(&mut groups, out, c);
        }
    } else {
        // Few eliminated elements: drop one candidate at a time instead.
        let refs = lowest(&state.eliminated, k + 1 - cand.len())?;
        for &c in cand {
            let mut q = without(cand, &[c]);
            q.extend(&refs);
            let out = src.query(&q)?;
            push_group(&mut groups, out, c);
        }
    }
    if groups.len() > 2 {
        return Err(ScaleError::Inconsistent("more than two outcome shapes"));
    }
    let mut it = groups.into_iter().map(|(_, g)| g);
    let a = it.next().unwrap_or_default();
    let b = it.next().unwrap_or_default();
    let (s, l) = (spec.s_size(), spec.l_size());
    let labeling = if s == l {
        if a.len() != s || b.len() != l {
            return Err(ScaleError::Inconsistent("group sizes do not match S and L"));
        }
        if s == 0 {
            Labeling::AIsS
        } else {
            Labeling::Unknown
        }
    } else if a.len() == s && b.len() == l {
        Labeling::AIsS
    } else if b.len() == s && a.len() == l {
        Labeling::BIsS
    } else {
        return Err(ScaleError::Inconsistent("group sizes do not match S and L"));
    };
    Ok(Partition { a, b, labeling })
}

fn push_group(groups: &mut Vec<(QueryOutcome, Vec<ElementId>)>, out: QueryOutcome, c: ElementId) {
    match groups.iter_mut().find(|(o, _)| *o == out) {
        Some((_, g)) => g.push(c),
        None => groups.push((out, alloc::vec![c])),
    }
}
