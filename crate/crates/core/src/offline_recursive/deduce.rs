use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::plan::{working_t, RecursivePlan};
use super::superset::SupersetOrder;
use crate::error::ScaleError;
use crate::oracle::{Answers, QuerySource};
use crate::scale::{ElementId, Query, QueryOutcome, ScaleSpec};

/// Responses to the probes of one query, where `missing` is swapped in for each non-prefix member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeTally {
    /// Chain index of the element swapped in (0-based).
    pub level: usize,
    pub missing: ElementId,
    /// `(removed member, response)` for every probe.
    pub probes: Vec<(ElementId, ElementId)>,
    /// Distinct responses with their multiplicities, in order of first appearance.
    pub responses: Vec<(ElementId, usize)>,
}

impl ProbeTally {
    fn removed_for(&self, response: ElementId) -> Vec<ElementId> {
        self.probes
            .iter()
            .filter(|(_, r)| *r == response)
            .map(|(a, _)| *a)
            .collect()
    }
}

/// Answered queries plus a chain, able to infer the outcome of any other query.
#[derive(Debug, Clone)]
pub struct KnowledgeBase {
    k: usize,
    t: usize,
    chain: Vec<ElementId>,
    known: Answers,
    deduced: BTreeMap<Query, QueryOutcome>,
    certain_high: Vec<ElementId>,
    voters: Vec<ElementId>,
}

impl KnowledgeBase {
    /// `chain` must be ascending on the working side (see [`working_t`]) and
    /// `known` must hold every query containing the whole chain.
    pub fn new(
        spec: &ScaleSpec,
        chain: Vec<ElementId>,
        known: Answers,
    ) -> Result<Self, ScaleError> {
        if !spec.is_singleton() {
            return Err(ScaleError::Unsupported(
                "deduction is defined for singleton scales only",
            ));
        }
        let (t, _) = working_t(spec);
        if chain.len() >= spec.k() {
            return Err(ScaleError::InvalidSpec("chain too long"));
        }
        Ok(KnowledgeBase {
            k: spec.k(),
            t,
            chain,
            known,
            deduced: BTreeMap::new(),
            certain_high: Vec::new(),
            voters: Vec::new(),
        })
    }

    pub fn from_plan(
        plan: &RecursivePlan,
        answers: &Answers,
        sup: &SupersetOrder,
    ) -> Result<Self, ScaleError> {
        let mut kb = KnowledgeBase::new(&plan.spec, sup.chain.clone(), answers.clone())?;
        kb.certain_high = sup.certain_high.clone();
        kb.voters = sup.voters.clone();
        Ok(kb)
    }

    /// Elements used to break ties between two responses.
    ///
    /// `certain_high` must lie above the whole chain. `voters` are polled by
    /// majority when no certain one applies.
    pub fn with_voters(mut self, certain_high: Vec<ElementId>, voters: Vec<ElementId>) -> Self {
        self.certain_high = certain_high;
        self.voters = voters;
        self
    }

    pub fn chain(&self) -> &[ElementId] {
        &self.chain
    }

    pub fn known(&self) -> &Answers {
        &self.known
    }

    pub fn deduced_len(&self) -> usize {
        self.deduced.len()
    }

    pub fn deduce(&mut self, q: &Query) -> Result<QueryOutcome, ScaleError> {
        if q.elements().len() != self.k {
            return Err(ScaleError::WrongQuerySize {
                expected: self.k,
                got: q.elements().len(),
            });
        }
        let x = self.resolve(q.elements())?;
        Ok(QueryOutcome::from_unsorted(alloc::vec![x]))
    }

    /// Resolves every probe of `q` at the first chain element it lacks.
    pub fn probe_responses(&mut self, q: &Query) -> Result<ProbeTally, ScaleError> {
        let level = self
            .chain
            .iter()
            .position(|x| !q.contains(*x))
            .ok_or(ScaleError::Inconsistent("query contains the whole chain"))?;
        self.tally(q.elements(), level)
    }

    fn tally(&mut self, q: &[ElementId], level: usize) -> Result<ProbeTally, ScaleError> {
        let missing = self.chain[level];
        let prefix = &self.chain[..level];
        let members: Vec<ElementId> = q.iter().copied().filter(|e| !prefix.contains(e)).collect();
        let mut probes = Vec::with_capacity(members.len());
        let mut responses: Vec<(ElementId, usize)> = Vec::new();
        for a in members {
            let probe: Vec<ElementId> = q
                .iter()
                .copied()
                .filter(|&e| e != a)
                .chain(core::iter::once(missing))
                .collect();
            let r = self.resolve(&probe)?;
            probes.push((a, r));
            match responses.iter_mut().find(|(e, _)| *e == r) {
                Some((_, c)) => *c += 1,
                None => responses.push((r, 1)),
            }
        }
        Ok(ProbeTally {
            level,
            missing,
            probes,
            responses,
        })
    }

    fn resolve(&mut self, elements: &[ElementId]) -> Result<ElementId, ScaleError> {
        let q = Query::new(elements.to_vec(), self.k)?;
        if let Some(o) = self.known.get(&q).or_else(|| self.deduced.get(&q)) {
            return o
                .single()
                .ok_or(ScaleError::Inconsistent("not a singleton outcome"));
        }
        let level = self
            .chain
            .iter()
            .position(|x| !q.contains(*x))
            .ok_or(ScaleError::MissingResult)?;
        let x = self.classify(q.elements(), level)?;
        self.deduced
            .insert(q, QueryOutcome::from_unsorted(alloc::vec![x]));
        Ok(x)
    }

    fn classify(&mut self, q: &[ElementId], level: usize) -> Result<ElementId, ScaleError> {
        let tally = self.tally(q, level)?;
        let [(r1, c1), (r2, c2)] = tally.responses[..] else {
            return Err(ScaleError::Inconsistent(
                "probes must give exactly two responses",
            ));
        };
        if r1 == tally.missing {
            return Ok(r2);
        }
        if r2 == tally.missing {
            return Ok(r1);
        }
        match (self.fits(c1, c2, level), self.fits(c2, c1, level)) {
            (true, false) => Ok(r1),
            (false, true) => Ok(r2),
            (false, false) => Err(ScaleError::Inconsistent("multiplicities fit no case")),
            (true, true) => self.lower_of(q, &tally, r1, r2),
        }
    }

    /// Whether a response with multiplicity `mine` against `other` can be the answer.
    fn fits(&self, mine: usize, other: usize, level: usize) -> bool {
        let (k, t, j) = (self.k, self.t, level + 1);
        // missing element below the answer
        if j <= t && mine + j == t && other == k - t + 1 {
            return true;
        }
        // missing element above it, with g prefix members among the lowest t
        (0..j).any(|g| mine + t + j == k + 1 + g && other + g == t)
    }

    /// Both responses fit, which only happens when the missing element lies
    /// above both, so the answer is the lower one.
    fn lower_of(
        &mut self,
        q: &[ElementId],
        tally: &ProbeTally,
        r1: ElementId,
        r2: ElementId,
    ) -> Result<ElementId, ScaleError> {
        let prefix = &self.chain[..tally.level];
        let (i1, i2) = (
            prefix.iter().position(|&e| e == r1),
            prefix.iter().position(|&e| e == r2),
        );
        if let (Some(i1), Some(i2)) = (i1, i2) {
            return Ok(if i1 < i2 { r1 } else { r2 });
        }
        let certain: Vec<ElementId> = self.chain[tally.level + 1..]
            .iter()
            .chain(self.certain_high.iter())
            .copied()
            .collect();
        for h in certain {
            if let Some(low) = self.vote(q, tally, r1, r2, h) {
                return Ok(low);
            }
        }
        let (mut v1, mut v2) = (0usize, 0usize);
        for h in self.voters.clone() {
            match self.vote(q, tally, r1, r2, h) {
                Some(x) if x == r1 => v1 += 1,
                Some(_) => v2 += 1,
                None => {}
            }
        }
        match v1.cmp(&v2) {
            core::cmp::Ordering::Greater => Ok(r1),
            core::cmp::Ordering::Less => Ok(r2),
            core::cmp::Ordering::Equal => Err(ScaleError::Ambiguous(
                "tied responses could not be separated",
            )),
        }
    }

    /// Which response `h` says is lower, assuming `h` lies above both.
    fn vote(
        &mut self,
        q: &[ElementId],
        tally: &ProbeTally,
        r1: ElementId,
        r2: ElementId,
        h: ElementId,
    ) -> Option<ElementId> {
        let p = tally.missing;
        if h == r1 || h == r2 || h == p || self.chain[..tally.level].contains(&h) {
            return None;
        }
        // G(r) holds members below r if r is the lower response, above the other one otherwise.
        let g = |r: ElementId| -> Vec<ElementId> {
            let other = if r == r1 { r2 } else { r1 };
            tally
                .removed_for(other)
                .into_iter()
                .filter(|&a| a != r)
                .collect()
        };
        let (g1, g2) = (g(r1), g(r2));
        if q.contains(&h) {
            return if g1.contains(&h) {
                Some(r2)
            } else if g2.contains(&h) {
                Some(r1)
            } else {
                None
            };
        }
        let prefix = &self.chain[..tally.level];
        let (x, y) = if prefix.contains(&r1) {
            (r2, r1)
        } else {
            (r1, r2)
        };
        let (gx, gy) = if x == r1 { (g1, g2) } else { (g2, g1) };
        let (a, via_x) = match (gx.first(), gy.first()) {
            (Some(&a), _) => (a, true),
            (None, Some(&a)) => (a, false),
            (None, None) => return None,
        };
        let probe: Vec<ElementId> = q
            .iter()
            .copied()
            .filter(|&e| e != x && e != a)
            .chain([p, h])
            .collect();
        let hit = self.resolve(&probe).ok()? == y;
        Some(match (via_x, hit) {
            (true, true) | (false, false) => y,
            (true, false) | (false, true) => x,
        })
    }
}

/// Answers queries by deduction only.
#[derive(Debug, Clone)]
pub struct DeducingSource {
    spec: ScaleSpec,
    n: usize,
    kb: KnowledgeBase,
}

impl DeducingSource {
    pub fn new(spec: ScaleSpec, n: usize, kb: KnowledgeBase) -> Self {
        DeducingSource { spec, n, kb }
    }

    pub fn knowledge(&self) -> &KnowledgeBase {
        &self.kb
    }
}

impl QuerySource for DeducingSource {
    fn spec(&self) -> &ScaleSpec {
        &self.spec
    }

    fn n(&self) -> usize {
        self.n
    }

    fn query(&mut self, elements: &[ElementId]) -> Result<QueryOutcome, ScaleError> {
        if let Some(&e) = elements.iter().find(|e| e.0 >= self.n) {
            return Err(ScaleError::UnknownId(e));
        }
        let q = Query::new(elements.to_vec(), self.spec.k())?;
        self.kb.deduce(&q)
    }
}
