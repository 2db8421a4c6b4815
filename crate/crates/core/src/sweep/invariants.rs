use std::collections::BTreeMap;

use crate::bound::{BoundKind, Metric};
use crate::scalar::Scalar;
use crate::sweep::fit::fit_exponent;
use crate::sweep::record::{direction_key, SweepRecord};

pub const ORDERING_SLACK: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct OrderingViolation<T> {
    pub delta: T,
    pub lower: (Metric, BoundKind, T),
    pub upper: (Metric, BoundKind, T),
}

type Slot<T> = BTreeMap<(u64, [u64; 4]), Vec<SweepRecord<T>>>;

fn by_point<T: Scalar>(records: &[SweepRecord<T>]) -> Slot<T> {
    let mut slots: Slot<T> = BTreeMap::new();
    for r in records.iter().filter(|r| r.is_ok()) {
        let key = (r.delta.to_f64_lossy().to_bits(), direction_key(&r.direction).map(f64::to_bits));
        slots.entry(key).or_default().push(r.clone());
    }
    slots
}

/// Checks `F_C ≤ F_S ≤ F_K` bound by bound at every `(δ, direction)`: each
/// lower bound of a metric must not exceed any upper bound of the same or
/// a larger metric, with a small absolute slack. Exact values count on both
/// sides.
pub fn check_ordering<T: Scalar>(records: &[SweepRecord<T>]) -> Vec<OrderingViolation<T>> {
    fn rank(m: Metric) -> u8 {
        match m {
            Metric::Caratheodory => 0,
            Metric::Sibony => 1,
            Metric::Kobayashi => 2,
        }
    }
    let slack = T::lit(ORDERING_SLACK);
    let mut violations = Vec::new();
    for slot in by_point(records).values() {
        for lo in slot.iter().filter(|r| r.is_lower()) {
            for hi in slot.iter().filter(|r| r.is_upper()) {
                if rank(lo.metric) <= rank(hi.metric) && lo.value > hi.value + slack {
                    violations.push(OrderingViolation {
                        delta: lo.delta,
                        lower: (lo.metric, lo.kind, lo.value),
                        upper: (hi.metric, hi.kind, hi.value),
                    });
                }
            }
        }
    }
    violations
}

/// Largest sampled δ* such that the Sibony lower bound exceeds the
/// Carathéodory value at every sampled δ ≤ δ* (same direction).
pub fn sibony_crossover<T: Scalar>(records: &[SweepRecord<T>]) -> Option<T> {
    let mut rows: Vec<(T, bool)> = Vec::new();
    for slot in by_point(records).values() {
        let c = slot.iter().find(|r| r.metric == Metric::Caratheodory && r.kind == BoundKind::Exact);
        let s = slot.iter().find(|r| r.metric == Metric::Sibony && r.kind == BoundKind::Lower);
        if let (Some(c), Some(s)) = (c, s) {
            rows.push((c.delta, s.value > c.value));
        }
    }
    rows.sort_by(|a, b| a.0.to_f64_lossy().total_cmp(&b.0.to_f64_lossy()));
    let mut star = None;
    for (delta, above) in rows {
        if !above {
            break;
        }
        star = Some(delta);
    }
    star
}

#[derive(Clone, Debug, PartialEq)]
pub struct Separation<T> {
    pub crossover: Option<T>,
    pub kobayashi_slope: Option<T>,
    pub sibony_slope: Option<T>,
    /// A crossover exists and the Kobayashi upper bound grows strictly
    /// faster than the Sibony upper bound.
    pub separated: bool,
}

/// The three growth regimes seen in one normal-direction sweep.
pub fn separation<T: Scalar>(records: &[SweepRecord<T>]) -> Separation<T> {
    let slope = |metric: Metric| {
        let group: Vec<_> =
            records.iter().filter(|r| r.is_ok() && r.metric == metric && r.kind == BoundKind::Upper).cloned().collect();
        fit_exponent(&group).ok().map(|f| f.slope)
    };
    let crossover = sibony_crossover(records);
    let (k, s) = (slope(Metric::Kobayashi), slope(Metric::Sibony));
    let separated = crossover.is_some() && matches!((k, s), (Some(k), Some(s)) if k < s);
    Separation { crossover, kobayashi_slope: k, sibony_slope: s, separated }
}
