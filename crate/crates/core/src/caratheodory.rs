//! Exact Carathéodory values. The holomorphic hull of the egg-ring is the
//! closed unit ball, so its Carathéodory metric is the ball's.

use crate::bound::{method, BoundKind, Metric, MetricBound};
use crate::error::{MetricsError, Result};
use crate::geometry::{line_misses_inner, pushforward_norm, BasePoint, EggRingDomain, LineSearchOptions, TangentVector2};
use crate::scalar::Scalar;

/// `F_C^Ω(P_δ, ξ)`, equal to the ball metric at `P_δ`.
pub fn caratheodory_ring<T: Scalar>(
    domain: &EggRingDomain<T>,
    base: &BasePoint<T>,
    xi: &TangentVector2<T>,
) -> Result<MetricBound<T>> {
    if !domain.contains(&base.point, T::zero()) {
        return Err(MetricsError::Domain(format!("base point p = {} is not in the domain", base.p)));
    }
    let value = pushforward_norm(base.p, xi)?;
    Ok(MetricBound::new(Metric::Caratheodory, BoundKind::Exact, value, method::HULL_MOBIUS, base.delta, *xi))
}

/// The common value of all three metrics when the complex line through
/// `P_δ` in direction `ξ` avoids the inner egg.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Lemma4Value<T> {
    pub value: T,
    pub delta: T,
    pub direction: TangentVector2<T>,
}

impl<T: Scalar> Lemma4Value<T> {
    pub fn bound(&self, metric: Metric) -> MetricBound<T> {
        MetricBound::new(metric, BoundKind::Exact, self.value, method::LEMMA4_LINE, self.delta, self.direction)
    }

    pub fn bounds(&self) -> [MetricBound<T>; 3] {
        Metric::ALL.map(|metric| self.bound(metric))
    }
}

/// Exact value of `F_K = F_S = F_C` when the line `P_δ + ζξ` misses the
/// inner egg; `NotApplicable` otherwise.
pub fn lemma4_value<T: Scalar>(
    domain: &EggRingDomain<T>,
    base: &BasePoint<T>,
    xi: &TangentVector2<T>,
    opts: &LineSearchOptions<T>,
) -> Result<Lemma4Value<T>> {
    if !line_misses_inner(domain, &base.point, xi, opts)? {
        return Err(MetricsError::NotApplicable(format!(
            "the line through p = {} in direction ({}, {}) meets the inner egg",
            base.p, xi.xi_z, xi.xi_w
        )));
    }
    Ok(Lemma4Value { value: pushforward_norm(base.p, xi)?, delta: base.delta, direction: *xi })
}
