use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use super::plan::RecursivePlan;
use crate::combin::combinations;
use crate::error::ScaleError;
use crate::oracle::Answers;
use crate::scale::ElementId;

/// Local order of the superset as far as its closure answers pin it down.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupersetOrder {
    /// The `t - 1` elements ever returned inside the superset, ascending on the working side.
    pub chain: Vec<ElementId>,
    /// Superset members above the whole chain in every local order that keeps this chain.
    pub certain_high: Vec<ElementId>,
    /// Superset members outside the chain.
    pub voters: Vec<ElementId>,
    /// Number of local orders (chain order plus low/high split) fitting the closure.
    pub solutions: usize,
}

/// Finds the chain by trying every local order of the superset against its closure.
pub fn order_superset(
    plan: &RecursivePlan,
    answers: &Answers,
) -> Result<SupersetOrder, ScaleError> {
    let t = plan.t;
    if t == 1 {
        return Ok(SupersetOrder {
            chain: Vec::new(),
            certain_high: Vec::new(),
            voters: plan.superset.clone(),
            solutions: 1,
        });
    }
    let mut outcomes = Vec::with_capacity(plan.closure.len());
    let mut returned: BTreeSet<ElementId> = BTreeSet::new();
    for q in &plan.closure {
        let x = answers
            .get(q)
            .ok_or(ScaleError::MissingResult)?
            .single()
            .ok_or(ScaleError::Inconsistent("not a singleton outcome"))?;
        returned.insert(x);
        outcomes.push((q, x));
    }
    if returned.len() != t - 1 {
        return Err(ScaleError::Inconsistent(
            "closure returns the wrong number of elements",
        ));
    }
    let middle: Vec<ElementId> = returned.into_iter().collect();
    let rest: Vec<ElementId> = plan
        .superset
        .iter()
        .copied()
        .filter(|e| !middle.contains(e))
        .collect();

    let mut fits: Vec<(Vec<ElementId>, Vec<ElementId>)> = Vec::new();
    for perm in permutations(&middle) {
        for low in combinations(&rest, t - 1) {
            let rank = |e: ElementId| -> usize {
                if low.contains(&e) {
                    0
                } else if let Some(i) = perm.iter().position(|&m| m == e) {
                    1 + i
                } else {
                    usize::MAX
                }
            };
            let consistent = outcomes.iter().all(|(q, x)| {
                let mut keyed: Vec<(usize, ElementId)> =
                    q.elements().iter().map(|&e| (rank(e), e)).collect();
                keyed.sort_unstable();
                keyed[t - 1].1 == *x
            });
            if consistent {
                fits.push((perm.clone(), low));
            }
        }
    }
    let (chain, _) = fits
        .first()
        .cloned()
        .ok_or(ScaleError::Inconsistent("no local order fits the closure"))?;
    let certain_high: Vec<ElementId> = rest
        .iter()
        .copied()
        .filter(|e| {
            fits.iter()
                .filter(|(p, _)| *p == chain)
                .all(|(_, low)| !low.contains(e))
        })
        .collect();
    Ok(SupersetOrder {
        chain,
        certain_high,
        voters: rest,
        solutions: fits.len(),
    })
}

fn permutations(items: &[ElementId]) -> Vec<Vec<ElementId>> {
    if items.len() <= 1 {
        return alloc::vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}
