//! The simulated instrument and its transcript.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::ScaleError;
use crate::scale::{ElementId, HiddenOrder, Query, QueryOutcome, ScaleSpec};

/// Anything that answers scale queries. Algorithms see answers only through this.
pub trait QuerySource {
    fn spec(&self) -> &ScaleSpec;

    /// Size of the element universe `0..n`.
    fn n(&self) -> usize;

    fn query(&mut self, elements: &[ElementId]) -> Result<QueryOutcome, ScaleError>;
}

/// Answers keyed by query, as collected from a batch.
pub type Answers = BTreeMap<Query, QueryOutcome>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranscriptEntry {
    pub query: Query,
    pub outcome: QueryOutcome,
}

/// Recorded `(query, outcome)` pairs in the order they were asked.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Transcript {
    entries: Vec<TranscriptEntry>,
}

impl Transcript {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, query: Query, outcome: QueryOutcome) {
        self.entries.push(TranscriptEntry { query, outcome });
    }

    pub fn entries(&self) -> &[TranscriptEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> core::slice::Iter<'_, TranscriptEntry> {
        self.entries.iter()
    }

    /// Answers keyed by query. Repeated queries keep their first answer.
    pub fn answers(&self) -> Answers {
        let mut map = Answers::new();
        for e in &self.entries {
            map.entry(e.query.clone())
                .or_insert_with(|| e.outcome.clone());
        }
        map
    }
}

impl FromIterator<TranscriptEntry> for Transcript {
    fn from_iter<I: IntoIterator<Item = TranscriptEntry>>(iter: I) -> Self {
        Transcript {
            entries: iter.into_iter().collect(),
        }
    }
}

/// Hidden order plus scale, with a query counter and an unconditional transcript.
#[derive(Debug, Clone)]
pub struct Oracle {
    order: HiddenOrder,
    spec: ScaleSpec,
    transcript: Transcript,
}

impl Oracle {
    pub fn new(spec: ScaleSpec, order: HiddenOrder) -> Self {
        Oracle {
            order,
            spec,
            transcript: Transcript::new(),
        }
    }

    pub fn order(&self) -> &HiddenOrder {
        &self.order
    }

    pub fn query_count(&self) -> usize {
        self.transcript.len()
    }

    pub fn transcript(&self) -> &Transcript {
        &self.transcript
    }

    pub fn into_transcript(self) -> Transcript {
        self.transcript
    }

    pub fn evaluate(&mut self, q: &Query) -> Result<QueryOutcome, ScaleError> {
        if q.elements().len() != self.spec.k() {
            return Err(ScaleError::WrongQuerySize {
                expected: self.spec.k(),
                got: q.elements().len(),
            });
        }
        if let Some(&bad) = q.elements().iter().find(|e| !self.order.contains(**e)) {
            return Err(ScaleError::UnknownId(bad));
        }
        let outcome = self.order.outcome(&self.spec, q.elements());
        self.transcript.push(q.clone(), outcome.clone());
        Ok(outcome)
    }

    /// Answers a whole batch; nothing is recorded if any query is invalid.
    pub fn evaluate_batch(&mut self, queries: &[Query]) -> Result<Vec<QueryOutcome>, ScaleError> {
        for q in queries {
            if q.elements().len() != self.spec.k() {
                return Err(ScaleError::WrongQuerySize {
                    expected: self.spec.k(),
                    got: q.elements().len(),
                });
            }
            if let Some(&bad) = q.elements().iter().find(|e| !self.order.contains(**e)) {
                return Err(ScaleError::UnknownId(bad));
            }
        }
        queries.iter().map(|q| self.evaluate(q)).collect()
    }
}

impl QuerySource for Oracle {
    fn spec(&self) -> &ScaleSpec {
        &self.spec
    }

    fn n(&self) -> usize {
        self.order.n()
    }

    fn query(&mut self, elements: &[ElementId]) -> Result<QueryOutcome, ScaleError> {
        let q = Query::new(elements.to_vec(), self.spec.k())?;
        self.evaluate(&q)
    }
}
