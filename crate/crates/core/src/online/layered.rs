use alloc::vec::Vec;

use super::{eliminate_in, lowest, partition_sl, universe, without};
use crate::error::ScaleError;
use crate::oracle::QuerySource;
use crate::scale::{ElementId, ScaleSpec};

/// One peeled layer: the S and L segments of what was left, in unknown order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentPair {
    pub first: Vec<ElementId>,
    pub second: Vec<ElementId>,
    /// `Some(true)` when `first` is the low segment, `None` when not determined.
    pub s_is_first: Option<bool>,
}

impl SegmentPair {
    pub fn s_side(&self) -> Option<&[ElementId]> {
        self.s_is_first
            .map(|f| if f { &self.first[..] } else { &self.second[..] })
    }

    pub fn l_side(&self) -> Option<&[ElementId]> {
        self.s_is_first
            .map(|f| if f { &self.second[..] } else { &self.first[..] })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayeredSegments {
    pub pairs: Vec<SegmentPair>,
    /// Smallest index with exactly one of `p`, `k + 1 - p` an output position.
    pub p: usize,
}

/// Peels S/L layers and labels them, including the outermost layer.
///
/// Layers below `p` are probed two at a time (one element from each side), so
/// they fill positions `1..p` and `k+2-p..=k` whatever their labels are. The
/// probed element of a later layer then lands on `p` or `k+1-p`, and exactly
/// one of those is an output.
pub fn resolve_sl_layered<Q: QuerySource + ?Sized>(
    src: &mut Q,
    pairs_needed: usize,
) -> Result<LayeredSegments, ScaleError> {
    let spec = src.spec().clone();
    let k = spec.k();
    let p = spec.asymmetry_index().ok_or(ScaleError::SymmetricSpec)?;
    if spec.s_size() + spec.l_size() == 0 {
        return Err(ScaleError::Unsupported("scale has empty S and L"));
    }
    let layers = if p == 1 {
        pairs_needed.max(1)
    } else {
        pairs_needed.max(p + k - 2)
    };

    let mut remaining = universe(src.n());
    let mut pairs: Vec<SegmentPair> = Vec::with_capacity(layers);
    for _ in 0..layers {
        let (state, _) = eliminate_in(src, &remaining)?;
        let part = partition_sl(src, &state)?;
        remaining = without(&remaining, &state.candidates);
        pairs.push(SegmentPair {
            first: part.a,
            second: part.b,
            s_is_first: None,
        });
    }

    let mut base: Vec<ElementId> = Vec::new();
    for pair in &pairs[..p - 1] {
        base.extend(lowest(&pair.first, 1)?);
        base.extend(lowest(&pair.second, 1)?);
    }
    let fill = lowest(&remaining, k - base.len() - 1)?;
    for pair in &mut pairs[p - 1..layers] {
        let probe_el = match lowest(&pair.first, 1) {
            Ok(v) => v[0],
            // an empty first side means the other side is the whole layer
            Err(_) => {
                pair.s_is_first = Some(spec.s_size() == 0);
                continue;
            }
        };
        let mut q = base.clone();
        q.push(probe_el);
        q.extend_from_slice(&fill);
        let out = src.query(&q)?;
        pair.s_is_first = Some(out.contains(probe_el) == spec.is_output_position(p));
    }

    if p > 1 {
        let e = lowest(&pairs[0].first, 1)?[0];
        let mut picks: Vec<ElementId> = Vec::with_capacity(k - 1);
        for pair in &pairs[p - 1..p + k - 2] {
            let side = pair
                .s_side()
                .ok_or(ScaleError::Ambiguous("layer left unlabeled"))?;
            picks.extend(lowest(side, 1)?);
        }
        let mut q = picks.clone();
        q.push(e);
        let out = src.query(&q)?;
        let mut as_low = alloc::vec![e];
        as_low.extend_from_slice(&picks);
        let mut as_high = picks;
        as_high.push(e);
        let low_fits = predicted(&spec, &as_low) == out.returned();
        let high_fits = predicted(&spec, &as_high) == out.returned();
        pairs[0].s_is_first = match (low_fits, high_fits) {
            (true, false) => Some(true),
            (false, true) => Some(false),
            _ => {
                return Err(ScaleError::Inconsistent(
                    "outer layer probe fits both sides",
                ))
            }
        };
    }
    Ok(LayeredSegments { pairs, p })
}

fn predicted(spec: &ScaleSpec, ascending: &[ElementId]) -> Vec<ElementId> {
    let mut v: Vec<ElementId> = spec.outputs().iter().map(|&t| ascending[t - 1]).collect();
    v.sort_unstable();
    v
}
