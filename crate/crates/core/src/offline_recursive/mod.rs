//! Batch sorting by deduction, plus the batch lower bound.
//!
//! A fixed chain `x1 < ... < x_{t-1}` is fanned out: every query containing
//! the whole chain is asked. Any other query is then deduced by swapping the
//! first missing chain element in for each other member and reading the
//! multiplicities of the answers. With every query answerable, the online
//! algorithm is replayed without asking anything more.

mod deduce;
mod plan;
mod superset;

pub use deduce::{DeducingSource, KnowledgeBase, ProbeTally};
pub use plan::{build_recursive_plan, recursive_plan_size, working_t, RecursivePlan};
pub use superset::{order_superset, SupersetOrder};

use alloc::vec::Vec;

use crate::combin::{binomial, combinations};
use crate::error::ScaleError;
use crate::online::singleton_sort;
use crate::oracle::{Answers, Oracle, QuerySource};
use crate::result::SortResult;
use crate::scale::{ElementId, Query, ScaleSpec};

/// `ceil(C(n, k-t+1) / C(k, k-t+1))`, with `t` folded to `min(t, k+1-t)`.
///
/// Every query settles at most `C(k, k-t+1)` of the `(k-t+1)`-subsets, and a
/// batch that leaves one unsettled cannot tell its members apart.
pub fn offline_lower_bound(n: usize, k: usize, t: usize) -> Result<u128, ScaleError> {
    if !(1 <= t && t <= k && k <= n) {
        return Err(ScaleError::InvalidSpec("need 1 <= t <= k <= n"));
    }
    let t = t.min(k + 1 - t);
    let r = (k - t + 1) as u64;
    let num = binomial(n as u64, r).ok_or(ScaleError::Unsupported("binomial overflow"))?;
    let den = binomial(k as u64, r).ok_or(ScaleError::Unsupported("binomial overflow"))?;
    Ok(num.div_ceil(den))
}

/// From the `k+1` answers over a `(k+1)`-set, two elements in known order.
///
/// Only `z_t` and `z_{t+1}` come back, with multiplicities `k+1-t` and `t`.
pub fn find_ordered_pair(
    spec: &ScaleSpec,
    base: &[ElementId],
    answers: &Answers,
) -> Result<(ElementId, ElementId), ScaleError> {
    if !spec.is_singleton() {
        return Err(ScaleError::Unsupported("needs a singleton scale"));
    }
    let (k, t) = (spec.k(), spec.t1());
    if base.len() != k + 1 {
        return Err(ScaleError::WrongQuerySize {
            expected: k + 1,
            got: base.len(),
        });
    }
    if 2 * t == k + 1 {
        return Err(ScaleError::SymmetricSpec);
    }
    let mut tally: Vec<(ElementId, usize)> = Vec::new();
    for sub in combinations(base, k) {
        let q = Query::new(sub, k)?;
        let x = answers
            .get(&q)
            .ok_or(ScaleError::MissingResult)?
            .single()
            .ok_or(ScaleError::Inconsistent("not a singleton outcome"))?;
        match tally.iter_mut().find(|(e, _)| *e == x) {
            Some((_, c)) => *c += 1,
            None => tally.push((x, 1)),
        }
    }
    let [(a, ma), (b, mb)] = tally[..] else {
        return Err(ScaleError::Inconsistent(
            "expected exactly two distinct responses",
        ));
    };
    let smaller_mult = k + 1 - t;
    match (ma == smaller_mult && mb == t, mb == smaller_mult && ma == t) {
        (true, false) => Ok((a, b)),
        (false, true) => Ok((b, a)),
        _ => Err(ScaleError::Inconsistent(
            "multiplicities do not match (k+1-t, t)",
        )),
    }
}

/// Second phase: deduce from the answered plan and replay the online algorithm.
pub fn solve_recursive(plan: &RecursivePlan, answers: &Answers) -> Result<SortResult, ScaleError> {
    let sup = order_superset(plan, answers)?;
    let kb = KnowledgeBase::from_plan(plan, answers, &sup)?;
    let mut src = DeducingSource::new(plan.spec.clone(), plan.n, kb);
    let mut result = singleton_sort(&mut src)?;
    result.queries_used = plan.len();
    Ok(result)
}

/// Plans, asks the whole batch at once, and solves.
pub fn recursive_sort(oracle: &mut Oracle) -> Result<SortResult, ScaleError> {
    let plan = build_recursive_plan(oracle.n(), oracle.spec())?;
    let queries: Vec<Query> = plan.queries().cloned().collect();
    let start = oracle.query_count();
    oracle.evaluate_batch(&queries)?;
    let mut answers = Answers::new();
    for e in &oracle.transcript().entries()[start..] {
        answers
            .entry(e.query.clone())
            .or_insert_with(|| e.outcome.clone());
    }
    solve_recursive(&plan, &answers)
}
