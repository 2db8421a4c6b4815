use std::cmp::Ordering;

use crate::bound::{BoundKind, Metric, MetricBound};
use crate::geometry::TangentVector2;
use crate::scalar::Scalar;

/// One `(δ, metric, bound)` sample of a sweep. A failed computation keeps
/// its slot with `error` set and a NaN value.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRecord<T> {
    pub m: u32,
    pub delta: T,
    pub metric: Metric,
    pub kind: BoundKind,
    pub method: String,
    pub value: T,
    pub direction: TangentVector2<T>,
    pub error: Option<String>,
}

impl<T: Scalar> SweepRecord<T> {
    pub fn from_bound(m: u32, bound: MetricBound<T>) -> Self {
        Self {
            m,
            delta: bound.delta,
            metric: bound.metric,
            kind: bound.kind,
            method: bound.method,
            value: bound.value,
            direction: bound.direction,
            error: None,
        }
    }

    pub fn failed(
        m: u32,
        delta: T,
        metric: Metric,
        kind: BoundKind,
        method: &str,
        direction: TangentVector2<T>,
        error: impl ToString,
    ) -> Self {
        Self {
            m,
            delta,
            metric,
            kind,
            method: method.to_string(),
            value: T::nan(),
            direction,
            error: Some(error.to_string()),
        }
    }

    pub fn is_ok(&self) -> bool {
        self.error.is_none()
    }

    /// Whether the record bounds its metric from below (exact values do).
    pub fn is_lower(&self) -> bool {
        self.is_ok() && matches!(self.kind, BoundKind::Lower | BoundKind::Exact)
    }

    pub fn is_upper(&self) -> bool {
        self.is_ok() && matches!(self.kind, BoundKind::Upper | BoundKind::Exact)
    }
}

pub(crate) fn direction_key<T: Scalar>(xi: &TangentVector2<T>) -> [f64; 4] {
    [xi.xi_z.re, xi.xi_z.im, xi.xi_w.re, xi.xi_w.im].map(|t| t.to_f64_lossy())
}

pub(crate) fn cmp_direction<T: Scalar>(a: &TangentVector2<T>, b: &TangentVector2<T>) -> Ordering {
    let (ka, kb) = (direction_key(a), direction_key(b));
    ka.iter().zip(&kb).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(Ordering::Equal)
}

/// Output order: δ, metric, kind, then direction and method.
pub fn sort_records<T: Scalar>(records: &mut [SweepRecord<T>]) {
    records.sort_by(|a, b| {
        a.delta
            .to_f64_lossy()
            .total_cmp(&b.delta.to_f64_lossy())
            .then(a.metric.cmp(&b.metric))
            .then(a.kind.cmp(&b.kind))
            .then_with(|| cmp_direction(&a.direction, &b.direction))
            .then_with(|| a.method.cmp(&b.method))
    });
}
