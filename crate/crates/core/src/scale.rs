//! The scale model: instruments, element labels, hidden orders and queries.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::ScaleError;

/// Opaque element label in `0..n`. Labels carry no order information.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElementId(pub usize);

impl ElementId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<usize> for ElementId {
    fn from(v: usize) -> Self {
        ElementId(v)
    }
}

/// A `(k, t1, ..., ts)` scale. Ranks are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ScaleSpec {
    k: usize,
    outputs: Vec<usize>,
}

/// Derived sizes of a scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScaleProperties {
    pub s_size: usize,
    pub l_size: usize,
    pub is_symmetric: bool,
    pub k_prime: usize,
}

impl ScaleSpec {
    pub fn new(k: usize, outputs: Vec<usize>) -> Result<Self, ScaleError> {
        if k < 2 {
            return Err(ScaleError::InvalidSpec("k must be at least 2"));
        }
        if outputs.is_empty() {
            return Err(ScaleError::InvalidSpec("at least one output position"));
        }
        if outputs.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ScaleError::InvalidSpec(
                "output positions must be strictly increasing",
            ));
        }
        if outputs[0] < 1 || outputs[outputs.len() - 1] > k {
            return Err(ScaleError::InvalidSpec(
                "output positions must lie in 1..=k",
            ));
        }
        Ok(ScaleSpec { k, outputs })
    }

    /// Singleton scale `(k, t)`.
    pub fn singleton(k: usize, t: usize) -> Result<Self, ScaleError> {
        Self::new(k, alloc::vec![t])
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn outputs(&self) -> &[usize] {
        &self.outputs
    }

    pub fn s(&self) -> usize {
        self.outputs.len()
    }

    pub fn t1(&self) -> usize {
        self.outputs[0]
    }

    pub fn ts(&self) -> usize {
        self.outputs[self.outputs.len() - 1]
    }

    pub fn is_singleton(&self) -> bool {
        self.outputs.len() == 1
    }

    /// Number of globally smallest elements that are never returned.
    pub fn s_size(&self) -> usize {
        self.t1() - 1
    }

    /// Number of globally largest elements that are never returned.
    pub fn l_size(&self) -> usize {
        self.k - self.ts()
    }

    pub fn is_symmetric(&self) -> bool {
        self.outputs
            .iter()
            .all(|&t| self.outputs.binary_search(&(self.k + 1 - t)).is_ok())
    }

    /// Reduced arity `k - (ts - 1)`.
    pub fn k_prime(&self) -> usize {
        self.k - (self.ts() - 1)
    }

    pub fn properties(&self) -> ScaleProperties {
        ScaleProperties {
            s_size: self.s_size(),
            l_size: self.l_size(),
            is_symmetric: self.is_symmetric(),
            k_prime: self.k_prime(),
        }
    }

    /// The same instrument read with the order reversed: position `i` becomes `k+1-i`.
    pub fn mirrored(&self) -> ScaleSpec {
        let mut outputs: Vec<usize> = self.outputs.iter().map(|&t| self.k + 1 - t).collect();
        outputs.reverse();
        ScaleSpec { k: self.k, outputs }
    }

    pub fn is_output_position(&self, pos: usize) -> bool {
        self.outputs.binary_search(&pos).is_ok()
    }

    /// Smallest index `p` such that exactly one of `p` and `k+1-p` is an output.
    pub fn asymmetry_index(&self) -> Option<usize> {
        (1..=self.k)
            .take_while(|&p| 2 * p < self.k + 1)
            .find(|&p| self.is_output_position(p) != self.is_output_position(self.k + 1 - p))
    }

    /// Smallest universe the online algorithms accept for this scale.
    pub fn min_universe(&self) -> usize {
        if self.is_singleton() {
            self.k + 1
        } else {
            2 * self.k + 1
        }
    }

    pub fn check_universe(&self, n: usize) -> Result<(), ScaleError> {
        let needed = self.min_universe();
        if n < needed {
            return Err(ScaleError::TooFewElements { n, needed });
        }
        Ok(())
    }
}

impl fmt::Display for ScaleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.k)?;
        for (i, t) in self.outputs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl FromStr for ScaleSpec {
    type Err = ScaleError;

    /// Parses `"k:t1,t2,..."`, e.g. `"7:2,6"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (k, rest) = s
            .trim()
            .split_once(':')
            .ok_or(ScaleError::InvalidSpec("expected k:t1,t2,..."))?;
        let k = k
            .trim()
            .parse::<usize>()
            .map_err(|_| ScaleError::InvalidSpec("k is not an integer"))?;
        let outputs = rest
            .split(',')
            .map(|t| t.trim().parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| ScaleError::InvalidSpec("output position is not an integer"))?;
        ScaleSpec::new(k, outputs)
    }
}

/// The true, hidden total order. `rank(id)` is in `1..=n`, 1 being the smallest.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HiddenOrder {
    rank: Vec<usize>,
}

impl HiddenOrder {
    pub fn from_ranks(rank: Vec<usize>) -> Result<Self, ScaleError> {
        let n = rank.len();
        let mut seen = alloc::vec![false; n + 1];
        for &r in &rank {
            if r == 0 || r > n || seen[r] {
                return Err(ScaleError::InvalidOrder);
            }
            seen[r] = true;
        }
        Ok(HiddenOrder { rank })
    }

    /// Order given as the ascending sequence of ids.
    pub fn from_ascending(ids: &[ElementId]) -> Result<Self, ScaleError> {
        let n = ids.len();
        let mut rank = alloc::vec![0usize; n];
        for (i, id) in ids.iter().enumerate() {
            if id.0 >= n || rank[id.0] != 0 {
                return Err(ScaleError::InvalidOrder);
            }
            rank[id.0] = i + 1;
        }
        Ok(HiddenOrder { rank })
    }

    /// Id `i` has rank `i + 1`.
    pub fn identity(n: usize) -> Self {
        HiddenOrder {
            rank: (1..=n).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.rank.len()
    }

    pub fn rank(&self, id: ElementId) -> usize {
        self.rank[id.0]
    }

    pub fn ranks(&self) -> &[usize] {
        &self.rank
    }

    pub fn contains(&self, id: ElementId) -> bool {
        id.0 < self.rank.len()
    }

    /// Ids from smallest to largest.
    pub fn ascending(&self) -> Vec<ElementId> {
        let mut ids = alloc::vec![ElementId(0); self.n()];
        for (i, &r) in self.rank.iter().enumerate() {
            ids[r - 1] = ElementId(i);
        }
        ids
    }

    pub fn reversed(&self) -> HiddenOrder {
        let n = self.n();
        HiddenOrder {
            rank: self.rank.iter().map(|&r| n + 1 - r).collect(),
        }
    }

    /// Outcome of `elements` under `spec`, without validation or accounting.
    pub fn outcome(&self, spec: &ScaleSpec, elements: &[ElementId]) -> QueryOutcome {
        let mut sorted: Vec<ElementId> = elements.to_vec();
        sorted.sort_by_key(|&e| self.rank(e));
        let returned = spec.outputs().iter().map(|&t| sorted[t - 1]).collect();
        QueryOutcome::from_unsorted(returned)
    }
}

/// A validated k-set of distinct ids, stored in ascending id order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Query {
    elements: Vec<ElementId>,
}

impl Query {
    pub fn new(mut elements: Vec<ElementId>, k: usize) -> Result<Self, ScaleError> {
        if elements.len() != k {
            return Err(ScaleError::WrongQuerySize {
                expected: k,
                got: elements.len(),
            });
        }
        elements.sort_unstable();
        if let Some(w) = elements.windows(2).find(|w| w[0] == w[1]) {
            return Err(ScaleError::DuplicateId(w[0]));
        }
        Ok(Query { elements })
    }

    pub fn elements(&self) -> &[ElementId] {
        &self.elements
    }

    pub fn contains(&self, id: ElementId) -> bool {
        self.elements.binary_search(&id).is_ok()
    }

    pub fn into_elements(self) -> Vec<ElementId> {
        self.elements
    }
}

/// The unordered set of returned elements, stored in ascending id order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QueryOutcome {
    returned: Vec<ElementId>,
}

impl QueryOutcome {
    pub fn from_unsorted(mut returned: Vec<ElementId>) -> Self {
        returned.sort_unstable();
        QueryOutcome { returned }
    }

    pub fn returned(&self) -> &[ElementId] {
        &self.returned
    }

    pub fn contains(&self, id: ElementId) -> bool {
        self.returned.binary_search(&id).is_ok()
    }

    /// The single returned element of a singleton scale.
    pub fn single(&self) -> Option<ElementId> {
        match self.returned.as_slice() {
            [x] => Some(*x),
            _ => None,
        }
    }
}
