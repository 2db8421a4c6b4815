use std::collections::BTreeMap;

use crate::bound::{method, BoundKind, Metric};
use crate::error::{MetricsError, Result};
use crate::geometry::TangentVector2;
use crate::scalar::Scalar;
use crate::sweep::record::{direction_key, SweepRecord};

/// Least-squares fit of `ln value = slope·ln δ + intercept`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExponentFit<T> {
    pub metric: Metric,
    pub kind: BoundKind,
    pub direction: TangentVector2<T>,
    pub slope: T,
    pub intercept: T,
    pub r_squared: T,
    pub theoretical_slope: T,
    pub tolerance: T,
    pub within_tolerance: bool,
    pub points: usize,
}

pub const MIN_FIT_POINTS: usize = 4;
pub const CLOSED_FORM_TOLERANCE: f64 = 0.01;
pub const DISC_SEARCH_TOLERANCE: f64 = 0.05;

/// Expected exponent of `value ~ δ^slope` for directions with a nonzero
/// normal component; tangential directions stay bounded.
pub fn theoretical_slope<T: Scalar>(metric: Metric, kind: BoundKind, m: u32, direction: &TangentVector2<T>) -> T {
    let m = T::from_u32(m).unwrap();
    if direction.xi_z.norm_sqr() == T::zero() {
        return T::zero();
    }
    match (metric, kind) {
        (Metric::Caratheodory, _) => T::zero(),
        (Metric::Sibony, _) => -(T::one() - T::one() / m),
        (Metric::Kobayashi, BoundKind::Lower) => -(T::one() - T::one() / m),
        (Metric::Kobayashi, _) => -(T::one() - T::one() / (m + m)),
    }
}

pub fn fit_tolerance<T: Scalar>(method_tag: &str) -> T {
    if method_tag == method::DISC_SEARCH {
        T::lit(DISC_SEARCH_TOLERANCE)
    } else {
        T::lit(CLOSED_FORM_TOLERANCE)
    }
}

/// Ordinary least squares on `(ln δ, ln value)` over records of a single
/// metric, kind and direction.
pub fn fit_exponent<T: Scalar>(records: &[SweepRecord<T>]) -> Result<ExponentFit<T>> {
    let first = records.first().ok_or_else(|| MetricsError::Fit("no records to fit".into()))?;
    if records.len() < MIN_FIT_POINTS {
        return Err(MetricsError::Fit(format!(
            "{} {} has {} points, at least {MIN_FIT_POINTS} are needed",
            first.metric,
            first.kind,
            records.len()
        )));
    }
    let key = direction_key(&first.direction);
    for r in records {
        if let Some(e) = &r.error {
            return Err(MetricsError::Fit(format!("record at delta = {} carries an error: {e}", r.delta)));
        }
        if r.metric != first.metric || r.kind != first.kind || r.m != first.m || direction_key(&r.direction) != key {
            return Err(MetricsError::Fit("records mix metrics, kinds, exponents or directions".into()));
        }
        if !(r.value > T::zero() && r.value.is_finite() && r.delta > T::zero()) {
            return Err(MetricsError::Fit(format!("non-positive value {} at delta = {}", r.value, r.delta)));
        }
    }
    let n = T::from_count(records.len());
    let xs: Vec<T> = records.iter().map(|r| r.delta.ln()).collect();
    let ys: Vec<T> = records.iter().map(|r| r.value.ln()).collect();
    let mean = |v: &[T]| v.iter().fold(T::zero(), |a, &b| a + b) / n;
    let (mx, my) = (mean(&xs), mean(&ys));
    let (mut sxx, mut sxy, mut syy) = (T::zero(), T::zero(), T::zero());
    for (&x, &y) in xs.iter().zip(&ys) {
        sxx = sxx + (x - mx) * (x - mx);
        sxy = sxy + (x - mx) * (y - my);
        syy = syy + (y - my) * (y - my);
    }
    if sxx == T::zero() {
        return Err(MetricsError::Fit("all records share one delta".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse = xs.iter().zip(&ys).fold(T::zero(), |acc, (&x, &y)| {
        let r = y - (slope * x + intercept);
        acc + r * r
    });
    // A constant series is fitted exactly by a flat line.
    let tiny = T::lit(1e-24) * n;
    let r_squared = if syy <= tiny { T::one() } else { (T::one() - sse / syy).max(T::zero()).min(T::one()) };
    let theoretical = theoretical_slope(first.metric, first.kind, first.m, &first.direction);
    let tolerance = fit_tolerance::<T>(&first.method);
    Ok(ExponentFit {
        metric: first.metric,
        kind: first.kind,
        direction: first.direction,
        slope,
        intercept,
        r_squared,
        theoretical_slope: theoretical,
        tolerance,
        within_tolerance: (slope - theoretical).abs() <= tolerance,
        points: records.len(),
    })
}

/// Fits every `(metric, kind, direction)` group of a sweep. Records with
/// errors are left out, groups with fewer than four remaining points are
/// skipped, and the Kobayashi lower bound (a maximum of two other rows)
/// is not fitted.
pub fn fit_all<T: Scalar>(records: &[SweepRecord<T>]) -> Vec<ExponentFit<T>> {
    let mut groups: BTreeMap<(Metric, BoundKind, [u64; 4]), Vec<SweepRecord<T>>> = BTreeMap::new();
    for r in records.iter().filter(|r| r.is_ok()) {
        if r.metric == Metric::Kobayashi && r.kind == BoundKind::Lower {
            continue;
        }
        let key = direction_key(&r.direction).map(f64::to_bits);
        groups.entry((r.metric, r.kind, key)).or_default().push(r.clone());
    }
    groups.values().filter_map(|g| fit_exponent(g).ok()).collect()
}
