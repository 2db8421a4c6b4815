//! Kobayashi metric bounds: lower bounds from the chain `F_C ≤ F_S ≤ F_K`
//! and upper bounds from explicit analytic discs.

mod disc;
mod search;

pub use disc::{disc_feasible, grid_feasibility, grid_is_feasible, CandidateDisc, FeasibilityReport, MIN_DISC_STEPS};
pub use search::{
    kobayashi_upper_disc, max_lambda, tangential_crosscheck, DiscSearchConfig, DiscSearchOutcome, MuMode,
    TangentialCrosscheck, MIN_SEARCH_BUDGET, TANGENTIAL_TOLERANCE,
};

use crate::bound::{method, BoundKind, Metric, MetricBound};
use crate::caratheodory::caratheodory_ring;
use crate::error::Result;
use crate::geometry::{BasePoint, EggRingDomain, TangentVector2};
use crate::scalar::Scalar;
use crate::sibony::sibony_lower;

/// `max(F_C, F_S lower)`, a lower bound on `F_K` since the Kobayashi metric
/// dominates both.
pub fn kobayashi_lower<T: Scalar>(
    domain: &EggRingDomain<T>,
    base: &BasePoint<T>,
    xi: &TangentVector2<T>,
) -> Result<MetricBound<T>> {
    let c = caratheodory_ring(domain, base, xi)?.value;
    let s = sibony_lower(domain, base, xi).value;
    Ok(MetricBound::new(Metric::Kobayashi, BoundKind::Lower, c.max(s), method::EQ6_CHAIN, base.delta, *xi))
}
