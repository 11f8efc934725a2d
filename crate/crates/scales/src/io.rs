//! JSON shapes for orders, plans, answered plans and results.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use scales_core::{
    ElementId, HiddenOrder, Orientation, Query, QueryOutcome, SortResult, Transcript,
    TranscriptEntry,
};

use crate::error::HarnessError;
use crate::harness::Algorithm;

/// One answered query, ids as plain integers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryDto {
    pub query: Vec<usize>,
    pub outcome: Vec<usize>,
}

/// The batch an offline algorithm wants answered.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanFile {
    pub algorithm: Algorithm,
    pub scale: String,
    pub n: usize,
    pub queries: Vec<Vec<usize>>,
}

/// A plan together with its answers, input to the second phase.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultsFile {
    pub algorithm: Algorithm,
    pub scale: String,
    pub n: usize,
    pub entries: Vec<EntryDto>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SortResultDto {
    pub middle: Vec<usize>,
    pub s_set: Vec<usize>,
    pub l_set: Vec<usize>,
    pub reflection_ambiguous: bool,
    pub queries_used: usize,
}

impl From<&SortResult> for SortResultDto {
    fn from(r: &SortResult) -> Self {
        SortResultDto {
            middle: raw(&r.middle),
            s_set: raw(&r.s_set),
            l_set: raw(&r.l_set),
            reflection_ambiguous: r.orientation == Orientation::ReflectionAmbiguous,
            queries_used: r.queries_used,
        }
    }
}

pub fn raw(ids: &[ElementId]) -> Vec<usize> {
    ids.iter().map(|e| e.0).collect()
}

pub fn ids(raw: &[usize]) -> Vec<ElementId> {
    raw.iter().map(|&i| ElementId(i)).collect()
}

impl From<&TranscriptEntry> for EntryDto {
    fn from(e: &TranscriptEntry) -> Self {
        EntryDto {
            query: raw(e.query.elements()),
            outcome: raw(e.outcome.returned()),
        }
    }
}

pub fn transcript_from(entries: &[EntryDto], k: usize) -> Result<Transcript, HarnessError> {
    entries
        .iter()
        .map(|e| {
            Ok(TranscriptEntry {
                query: Query::new(ids(&e.query), k)?,
                outcome: QueryOutcome::from_unsorted(ids(&e.outcome)),
            })
        })
        .collect()
}

/// Reads a JSON array of 1-based ranks, where entry `i` is the rank of element `i`.
pub fn load_order(path: &Path) -> Result<HiddenOrder, HarnessError> {
    let ranks: Vec<usize> = serde_json::from_str(&fs::read_to_string(path)?)?;
    Ok(HiddenOrder::from_ranks(ranks)?)
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, HarnessError> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), HarnessError> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}
