//! Sorting with k-ary rank scales.
//!
//! A `(k, t1, ..., ts)` scale takes `k` distinct elements and returns, as an
//! unordered set, the elements holding ranks `t1..ts` within the query. This
//! crate models such scales, simulates them with a hidden order, and
//! implements adaptive ([`online`]) and batch ([`offline_adjacency`],
//! [`offline_recursive`]) sorting strategies on top of them.
//!
//! The crate is `no_std` and only needs `alloc`.
#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]
extern crate alloc;

pub mod combin;
pub mod error;
pub mod offline_adjacency;
pub mod offline_recursive;
pub mod online;
pub mod oracle;
pub mod result;
pub mod scale;

pub use error::ScaleError;
pub use oracle::{Answers, Oracle, QuerySource, Transcript, TranscriptEntry};
pub use result::{equivalent_up_to_ambiguity, Orientation, SortResult};
pub use scale::{ElementId, HiddenOrder, Query, QueryOutcome, ScaleProperties, ScaleSpec};
