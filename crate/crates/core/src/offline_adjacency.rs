//! Batch sorting by adjacency elimination.
//!
//! Every query of three reference fans is asked at once. Two elements are
//! ruled out as neighbours when swapping one for the other inside a query
//! moves an output away from the swapped-in element; true neighbours never
//! trigger this. What survives is the path of the middle elements.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::combin::{choose, combinations};
use crate::error::ScaleError;
use crate::oracle::{Answers, Oracle, Transcript};
use crate::result::{Orientation, SortResult};
use crate::scale::{ElementId, Query, ScaleSpec};

/// Size of each reference set.
///
/// `ts - 1`, or `k - t1` when that is smaller (the mirrored reading of the
/// same scale), capped so the free part of each query keeps at least
/// `max(s + 1, ts - t1)` elements. Below that cap the elimination leaves
/// spurious edges for multi-output scales.
pub fn reference_size(spec: &ScaleSpec) -> usize {
    let free_min = (spec.s() + 1).max(spec.ts() - spec.t1());
    (spec.ts() - 1)
        .min(spec.k() - spec.t1())
        .min(spec.k().saturating_sub(free_min))
}

/// Number of queries in the plan for `n` elements.
pub fn adjacency_plan_size(n: usize, spec: &ScaleSpec) -> usize {
    let rho = reference_size(spec);
    if rho == 0 {
        choose(n, spec.k())
    } else {
        3 * choose(n - rho, spec.k() - rho)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryPlan {
    pub n: usize,
    pub spec: ScaleSpec,
    pub rho: usize,
    /// One reference set per fan; a single empty set when `rho = 0`.
    pub reference_sets: Vec<Vec<ElementId>>,
    /// `fans[i]` holds every query containing `reference_sets[i]`.
    pub fans: Vec<Vec<Query>>,
}

impl QueryPlan {
    pub fn queries(&self) -> impl Iterator<Item = &Query> {
        self.fans.iter().flatten()
    }

    pub fn len(&self) -> usize {
        self.fans.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

pub fn build_adjacency_plan(n: usize, spec: &ScaleSpec) -> Result<QueryPlan, ScaleError> {
    build_adjacency_plan_with(n, spec, reference_size(spec))
}

/// Same construction with an explicit reference-set size.
pub fn build_adjacency_plan_with(
    n: usize,
    spec: &ScaleSpec,
    rho: usize,
) -> Result<QueryPlan, ScaleError> {
    let k = spec.k();
    if rho >= k {
        return Err(ScaleError::InvalidSpec(
            "reference set must be smaller than k",
        ));
    }
    let fans_wanted = if rho == 0 { 1 } else { 3 };
    let needed = fans_wanted * rho + (k - rho) + 1;
    if n < needed {
        return Err(ScaleError::TooFewElements { n, needed });
    }
    let ids: Vec<ElementId> = (0..n).map(ElementId).collect();
    let mut reference_sets = Vec::with_capacity(fans_wanted);
    let mut fans = Vec::with_capacity(fans_wanted);
    for i in 0..fans_wanted {
        let refs = ids[i * rho..(i + 1) * rho].to_vec();
        let free: Vec<ElementId> = ids.iter().copied().filter(|e| !refs.contains(e)).collect();
        let fan = combinations(&free, k - rho)
            .map(|mut f| {
                f.extend_from_slice(&refs);
                Query::new(f, k)
            })
            .collect::<Result<Vec<_>, _>>()?;
        reference_sets.push(refs);
        fans.push(fan);
    }
    Ok(QueryPlan {
        n,
        spec: spec.clone(),
        rho,
        reference_sets,
        fans,
    })
}

/// Candidate neighbours of each element of the support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjacencyMap {
    pub neighbors: BTreeMap<ElementId, BTreeSet<ElementId>>,
}

impl AdjacencyMap {
    pub fn support(&self) -> Vec<ElementId> {
        self.neighbors.keys().copied().collect()
    }

    pub fn has_edge(&self, a: ElementId, b: ElementId) -> bool {
        self.neighbors.get(&a).is_some_and(|s| s.contains(&b))
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.values().map(BTreeSet::len).sum::<usize>() / 2
    }

    fn remove_edge(&mut self, a: ElementId, b: ElementId) {
        if let Some(s) = self.neighbors.get_mut(&a) {
            s.remove(&b);
        }
        if let Some(s) = self.neighbors.get_mut(&b) {
            s.remove(&a);
        }
    }

    /// The path in walking order, starting from the endpoint with the lower id.
    pub fn path(&self) -> Result<Vec<ElementId>, ScaleError> {
        let support = self.support();
        if support.len() <= 1 {
            return Ok(support);
        }
        if self.neighbors.values().any(|s| s.is_empty() || s.len() > 2) {
            return Err(ScaleError::NotAPath);
        }
        let start = *self
            .neighbors
            .iter()
            .find(|(_, s)| s.len() == 1)
            .ok_or(ScaleError::NotAPath)?
            .0;
        let mut walk = alloc::vec![start];
        let mut prev: Option<ElementId> = None;
        let mut cur = start;
        while let Some(&next) = self.neighbors[&cur].iter().find(|&&x| Some(x) != prev) {
            if walk.contains(&next) {
                return Err(ScaleError::NotAPath);
            }
            walk.push(next);
            prev = Some(cur);
            cur = next;
        }
        if walk.len() != support.len() {
            return Err(ScaleError::NotAPath);
        }
        Ok(walk)
    }
}

/// Cap on Hamiltonian paths tried when elimination leaves extra edges.
pub const MAX_CANDIDATE_PATHS: usize = 4096;

impl AdjacencyMap {
    /// Every Hamiltonian path of the graph, each listed once, up to `limit`.
    pub fn hamiltonian_paths(&self, limit: usize) -> Result<Vec<Vec<ElementId>>, ScaleError> {
        let support = self.support();
        if support.len() <= 1 {
            return Ok(alloc::vec![support]);
        }
        let mut found = Vec::new();
        let mut walk = Vec::with_capacity(support.len());
        for &start in &support {
            walk.push(start);
            self.extend_paths(&mut walk, support.len(), limit, &mut found)?;
            walk.pop();
        }
        Ok(found)
    }

    fn extend_paths(
        &self,
        walk: &mut Vec<ElementId>,
        total: usize,
        limit: usize,
        found: &mut Vec<Vec<ElementId>>,
    ) -> Result<(), ScaleError> {
        if walk.len() == total {
            if walk[0] < walk[total - 1] {
                if found.len() == limit {
                    return Err(ScaleError::NotAPath);
                }
                found.push(walk.clone());
            }
            return Ok(());
        }
        let cur = walk[walk.len() - 1];
        for &next in &self.neighbors[&cur] {
            if !walk.contains(&next) {
                walk.push(next);
                self.extend_paths(walk, total, limit, found)?;
                walk.pop();
            }
        }
        Ok(())
    }
}

/// Runs the sibling-swap rule over every fan of the plan.
pub fn eliminate_nonadjacent(
    plan: &QueryPlan,
    results: &Answers,
) -> Result<AdjacencyMap, ScaleError> {
    let k = plan.spec.k();
    let mut support: BTreeSet<ElementId> = BTreeSet::new();
    for q in plan.queries() {
        let out = results.get(q).ok_or(ScaleError::MissingResult)?;
        support.extend(out.returned());
    }
    let mut adj = AdjacencyMap {
        neighbors: support
            .iter()
            .map(|&a| (a, support.iter().copied().filter(|&b| b != a).collect()))
            .collect(),
    };
    let all: Vec<ElementId> = (0..plan.n).map(ElementId).collect();
    for (refs, fan) in plan.reference_sets.iter().zip(&plan.fans) {
        for q in fan {
            let out = &results[q];
            for &u in out.returned() {
                if refs.contains(&u) {
                    continue;
                }
                for &v in &all {
                    if q.contains(v) || !support.contains(&v) || !adj.has_edge(u, v) {
                        continue;
                    }
                    let mut sib: Vec<ElementId> =
                        q.elements().iter().copied().filter(|&e| e != u).collect();
                    sib.push(v);
                    let sib = Query::new(sib, k)?;
                    let sib_out = results.get(&sib).ok_or(ScaleError::MissingResult)?;
                    if !sib_out.contains(v) {
                        adj.remove_edge(u, v);
                    }
                }
            }
        }
    }
    Ok(adj)
}

/// Walks the path, then picks orientation and the S/L split that fit every answer.
///
/// If elimination left extra edges, every Hamiltonian path of the graph is
/// tried instead, and only orders that reproduce every answer are kept.
pub fn rebuild_order(
    adj: &AdjacencyMap,
    transcript: &Transcript,
    spec: &ScaleSpec,
) -> Result<SortResult, ScaleError> {
    let paths = match adj.path() {
        Ok(p) => alloc::vec![p],
        Err(_) => adj.hamiltonian_paths(MAX_CANDIDATE_PATHS)?,
    };
    if paths.is_empty() {
        return Err(ScaleError::NotAPath);
    }
    let support = adj.support();
    let mut universe: BTreeSet<ElementId> = support.iter().copied().collect();
    for e in transcript.iter() {
        universe.extend(e.query.elements());
    }
    let outside: Vec<ElementId> = universe
        .iter()
        .copied()
        .filter(|e| !support.contains(e))
        .collect();
    if outside.len() != spec.s_size() + spec.l_size() {
        return Err(ScaleError::Inconsistent(
            "support size does not match the scale",
        ));
    }
    let mut fits: Vec<SortResult> = Vec::new();
    for path in &paths {
        let mut reversed = path.clone();
        reversed.reverse();
        for middle in [path, &reversed] {
            for s_set in combinations(&outside, spec.s_size()) {
                let l_set: Vec<ElementId> = outside
                    .iter()
                    .copied()
                    .filter(|e| !s_set.contains(e))
                    .collect();
                let cand = SortResult::new(middle.clone(), s_set, l_set, Orientation::Resolved, 0);
                let consistent = transcript.iter().all(|e| {
                    cand.predict(spec, e.query.elements()).as_deref() == Some(e.outcome.returned())
                });
                if consistent {
                    fits.push(cand);
                }
            }
        }
    }
    match fits.len() {
        0 => Err(ScaleError::Inconsistent("no orientation fits the answers")),
        1 => Ok(fits.remove(0)),
        2 if spec.is_symmetric() && fits[1] == fits[0].clone().mirrored() => {
            let mut r = fits.remove(0);
            r.orientation = Orientation::ReflectionAmbiguous;
            Ok(r)
        }
        _ => Err(ScaleError::Ambiguous("several orders fit the answers")),
    }
}

/// Second phase of the batch workflow: answers in, sorted result out.
pub fn solve_adjacency(
    plan: &QueryPlan,
    transcript: &Transcript,
) -> Result<SortResult, ScaleError> {
    let answers = transcript.answers();
    let adj = eliminate_nonadjacent(plan, &answers)?;
    let mut result = rebuild_order(&adj, transcript, &plan.spec)?;
    result.queries_used = plan.len();
    Ok(result)
}

/// Plans, asks the whole batch, and solves.
pub fn adjacency_sort(oracle: &mut Oracle) -> Result<SortResult, ScaleError> {
    use crate::oracle::QuerySource;
    let plan = build_adjacency_plan(oracle.n(), oracle.spec())?;
    let queries: Vec<Query> = plan.queries().cloned().collect();
    let start = oracle.query_count();
    oracle.evaluate_batch(&queries)?;
    let asked: Transcript = oracle.transcript().entries()[start..]
        .iter()
        .cloned()
        .collect();
    solve_adjacency(&plan, &asked)
}
