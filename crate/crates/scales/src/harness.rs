//! Experiments, bounds, the brute-force consistency oracle and benchmark sweeps.

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use scales_core::offline_adjacency::{adjacency_plan_size, adjacency_sort};
use scales_core::offline_recursive::{recursive_plan_size, recursive_sort};
use scales_core::online::{online_singleton_bound, online_sort};
use scales_core::{
    equivalent_up_to_ambiguity, HiddenOrder, Oracle, ScaleSpec, SortResult, Transcript,
};

use crate::error::HarnessError;
use crate::io::SortResultDto;
use crate::rng::seeded_order;

/// Largest `n` the brute-force oracle will enumerate.
pub const MAX_BRUTE_FORCE_N: usize = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Online,
    OfflineAdjacency,
    OfflineRecursive,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [
        Algorithm::Online,
        Algorithm::OfflineAdjacency,
        Algorithm::OfflineRecursive,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Online => "online",
            Algorithm::OfflineAdjacency => "offline_adjacency",
            Algorithm::OfflineRecursive => "offline_recursive",
        }
    }

    /// The query budget this algorithm is held to, if it has one.
    pub fn bound(self, spec: &ScaleSpec, n: usize) -> Option<u128> {
        match self {
            Algorithm::Online if spec.is_singleton() => {
                Some(online_singleton_bound(n, spec) as u128)
            }
            Algorithm::Online => None,
            Algorithm::OfflineAdjacency => Some(adjacency_plan_size(n, spec) as u128),
            Algorithm::OfflineRecursive => {
                Some(recursive_plan_size(n, spec.k(), spec.t1()) as u128)
            }
        }
    }

    pub fn run(self, oracle: &mut Oracle) -> Result<SortResult, HarnessError> {
        Ok(match self {
            Algorithm::Online => online_sort(oracle)?,
            Algorithm::OfflineAdjacency => adjacency_sort(oracle)?,
            Algorithm::OfflineRecursive => recursive_sort(oracle)?,
        })
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "online" => Ok(Algorithm::Online),
            "adjacency" | "offline_adjacency" => Ok(Algorithm::OfflineAdjacency),
            "recursive" | "offline_recursive" => Ok(Algorithm::OfflineRecursive),
            other => Err(HarnessError::BadInput(format!(
                "unknown algorithm {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone)]
pub enum OrderSource {
    Seed(u64),
    Explicit(HiddenOrder),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub spec: String,
    pub n: usize,
    pub seed: Option<u64>,
    pub algorithm: Algorithm,
    pub queries_used: usize,
    pub bound: Option<u128>,
    pub bound_satisfied: bool,
    pub correct: bool,
    /// Wall time, or 0 when timing is off.
    pub millis: u64,
    pub result: SortResultDto,
}

impl ExperimentReport {
    pub fn passed(&self) -> bool {
        self.correct && self.bound_satisfied
    }
}

/// Runs one algorithm on one hidden order and checks it.
pub fn run_experiment(
    spec: &ScaleSpec,
    n: usize,
    source: OrderSource,
    algorithm: Algorithm,
    timing: bool,
) -> Result<ExperimentReport, HarnessError> {
    let (order, seed) = match source {
        OrderSource::Seed(s) => (seeded_order(n, s), Some(s)),
        OrderSource::Explicit(o) if o.n() == n => (o, None),
        OrderSource::Explicit(o) => {
            return Err(HarnessError::BadInput(format!(
                "order has {} elements, expected {n}",
                o.n()
            )));
        }
    };
    let mut oracle = Oracle::new(spec.clone(), order.clone());
    let start = Instant::now();
    let result = algorithm.run(&mut oracle)?;
    let millis = if timing {
        start.elapsed().as_millis() as u64
    } else {
        0
    };
    let correct = equivalent_up_to_ambiguity(&result, &order, spec).unwrap_or(false);
    let bound = algorithm.bound(spec, n);
    Ok(ExperimentReport {
        spec: spec.to_string(),
        n,
        seed,
        algorithm,
        queries_used: result.queries_used,
        bound,
        bound_satisfied: bound.is_none_or(|b| result.queries_used as u128 <= b),
        correct,
        millis,
        result: SortResultDto::from(&result),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AmbiguityClass {
    /// Nothing fits the transcript.
    Empty,
    /// Exactly the orders agreeing outside S and L.
    SlFree,
    /// That set together with its reflection.
    SlFreeWithReflection,
    /// Anything else: the transcript leaves more open than S and L.
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConsistencyReport {
    pub n: usize,
    pub entries: usize,
    pub consistent_count: usize,
    pub class: AmbiguityClass,
}

/// Every order of `0..n` reproducing each transcript entry.
pub fn consistent_orders(
    transcript: &Transcript,
    n: usize,
    spec: &ScaleSpec,
) -> Result<Vec<HiddenOrder>, HarnessError> {
    if n > MAX_BRUTE_FORCE_N {
        return Err(HarnessError::TooLarge {
            n,
            max: MAX_BRUTE_FORCE_N,
        });
    }
    let mut out = Vec::new();
    for ranks in (1..=n).permutations(n) {
        let order = HiddenOrder::from_ranks(ranks)?;
        if transcript
            .iter()
            .all(|e| order.outcome(spec, e.query.elements()) == e.outcome)
        {
            out.push(order);
        }
    }
    Ok(out)
}

/// Brute-force count of the orders a transcript allows, and what shape that set has.
pub fn consistent_permutations(
    transcript: &Transcript,
    n: usize,
    spec: &ScaleSpec,
) -> Result<ConsistencyReport, HarnessError> {
    let orders = consistent_orders(transcript, n, spec)?;
    Ok(ConsistencyReport {
        n,
        entries: transcript.len(),
        consistent_count: orders.len(),
        class: classify(&orders, spec),
    })
}

/// Ranks with S collapsed to 0 and L to `n + 1`.
fn sl_key(order: &HiddenOrder, spec: &ScaleSpec) -> Vec<usize> {
    let n = order.n();
    let (s, l) = (spec.s_size(), spec.l_size());
    order
        .ranks()
        .iter()
        .map(|&r| {
            if r <= s {
                0
            } else if r > n - l {
                n + 1
            } else {
                r
            }
        })
        .collect()
}

fn factorial(x: usize) -> usize {
    (1..=x).product()
}

fn classify(orders: &[HiddenOrder], spec: &ScaleSpec) -> AmbiguityClass {
    let Some(first) = orders.first() else {
        return AmbiguityClass::Empty;
    };
    let n = first.n();
    if spec.s_size() + spec.l_size() > n {
        return AmbiguityClass::Other;
    }
    let free = factorial(spec.s_size()) * factorial(spec.l_size());
    let key = sl_key(first, spec);
    let mirror = sl_key(&first.reversed(), spec);
    let mut direct = 0;
    let mut reflected = 0;
    for o in orders {
        let k = sl_key(o, spec);
        if k == key {
            direct += 1;
        } else if k == mirror {
            reflected += 1;
        } else {
            return AmbiguityClass::Other;
        }
    }
    match (direct == free, reflected) {
        (true, 0) => AmbiguityClass::SlFree,
        (true, r) if r == free => AmbiguityClass::SlFreeWithReflection,
        _ => AmbiguityClass::Other,
    }
}

/// Runs every algorithm on every `(n, seed)` with seeds `0..trials`.
/// Rows come back sorted by spec, n, seed and algorithm.
pub fn bench_sweep(
    spec: &ScaleSpec,
    n_list: &[usize],
    trials: u64,
    algorithms: &[Algorithm],
    timing: bool,
) -> Result<Vec<ExperimentReport>, HarnessError> {
    let mut rows = Vec::new();
    for &n in n_list {
        for seed in 0..trials {
            for &a in algorithms {
                rows.push(run_experiment(spec, n, OrderSource::Seed(seed), a, timing)?);
            }
        }
    }
    rows.sort_by(|a, b| {
        (&a.spec, a.n, a.seed, a.algorithm).cmp(&(&b.spec, b.n, b.seed, b.algorithm))
    });
    Ok(rows)
}

pub const CSV_HEADER: [&str; 9] = [
    "spec",
    "n",
    "seed",
    "algorithm",
    "queries_used",
    "bound",
    "ratio",
    "correct",
    "millis",
];

/// Writes the sweep as CSV. An empty sweep still gets its header.
pub fn write_csv<W: Write>(rows: &[ExperimentReport], out: W) -> Result<(), HarnessError> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        let ratio = r
            .bound
            .map(|b| format!("{:.6}", r.queries_used as f64 / b as f64))
            .unwrap_or_default();
        w.write_record([
            r.spec.clone(),
            r.n.to_string(),
            r.seed.map(|s| s.to_string()).unwrap_or_default(),
            r.algorithm.to_string(),
            r.queries_used.to_string(),
            r.bound.map(|b| b.to_string()).unwrap_or_default(),
            ratio,
            r.correct.to_string(),
            r.millis.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct VerifySummary {
    pub max_n: usize,
    pub trials: usize,
    pub failures: Vec<String>,
}

/// The online singleton algorithm on every order of every `n <= max_n`, all `k` in `2..=5`, all `t`.
pub fn verify_exhaustive(max_n: usize) -> Result<VerifySummary, HarnessError> {
    if max_n > MAX_BRUTE_FORCE_N {
        return Err(HarnessError::TooLarge {
            n: max_n,
            max: MAX_BRUTE_FORCE_N,
        });
    }
    let mut summary = VerifySummary {
        max_n,
        ..Default::default()
    };
    for k in 2..=5usize {
        for t in 1..=k {
            let spec = ScaleSpec::singleton(k, t)?;
            for n in k + 1..=max_n {
                for ranks in (1..=n).permutations(n) {
                    let order = HiddenOrder::from_ranks(ranks)?;
                    let report = run_experiment(
                        &spec,
                        n,
                        OrderSource::Explicit(order.clone()),
                        Algorithm::Online,
                        false,
                    )?;
                    summary.trials += 1;
                    if !report.passed() {
                        summary
                            .failures
                            .push(format!("{spec} ranks {:?}", order.ranks()));
                    }
                }
            }
        }
    }
    Ok(summary)
}
