//! Two-sided bounds on the Sibony metric at `P_δ`.
//!
//! The lower bound is the Hessian of an explicit admissible witness. The
//! upper bound splits `ν = (1/2, v) + (1/2, −v)` with `|v|` large enough
//! that both complex lines miss the inner egg, where the metric equals the
//! ball metric, and then uses subadditivity.

mod localize;
mod witness;

pub use localize::{localize_admissible, minimal_shift, LocalizedCandidate};
pub use witness::{witness_f, SibonyWitness, WitnessBranch};

use crate::bound::{method, BoundKind, Metric, MetricBound};
use crate::error::{MetricsError, Result};
use crate::geometry::{BasePoint, EggRingDomain, TangentVector2};
use crate::hermitian::HermitianForm2;
use crate::scalar::Scalar;

/// `K_m = m^{−1/(m−1)} − m^{−m/(m−1)}`.
pub fn beta_constant<T: Scalar>(m: u32) -> T {
    let m = T::from_u32(m).unwrap();
    let k = m - T::one();
    m.powf(-T::one() / k) - m.powf(-m / k)
}

/// `β = (K_m/δ)^{(m−1)/m}`: every line `P_δ + ζ(1, v)` with `|v| ≥ β`
/// misses the inner egg. Sufficient, not sharp.
pub fn beta_threshold<T: Scalar>(delta: T, m: u32) -> T {
    let mf = T::from_u32(m).unwrap();
    (beta_constant::<T>(m) / delta).powf((mf - T::one()) / mf)
}

/// Lower bound from the witness: `(e^{−L′}(|ξ_z|² δ^{2/m−2}/4 + |ξ_w|²))^{1/2}`.
pub fn sibony_lower<T: Scalar>(domain: &EggRingDomain<T>, base: &BasePoint<T>, xi: &TangentVector2<T>) -> MetricBound<T> {
    // BasePoint and EggRingDomain already enforce the witness preconditions.
    let witness = SibonyWitness::new(base.delta, domain.m()).expect("valid base point and domain");
    let method = if xi.xi_w.norm_sqr() == T::zero() || xi.xi_z.norm_sqr() == T::zero() {
        method::PSH_WITNESS
    } else {
        method::PSH_WITNESS_NO_UPPER
    };
    MetricBound::new(Metric::Sibony, BoundKind::Lower, witness.lower_bound(xi), method, base.delta, *xi)
}

/// `(2/(1 − p²))·(1/4 + (1 − p²)|v|²)^{1/2}`: the split bound at a given `|v|`.
pub fn split_bound<T: Scalar>(p: T, v_abs: T) -> T {
    let s = T::one() - p * p;
    T::lit(2.0) / s * (T::lit(0.25) + s * v_abs * v_abs).sqrt()
}

/// Upper bound on `F_S(P_δ, (1, 0))`, the split bound at `|v| = β`.
pub fn sibony_upper<T: Scalar>(domain: &EggRingDomain<T>, base: &BasePoint<T>) -> MetricBound<T> {
    let beta = beta_threshold(base.delta, domain.m());
    MetricBound::new(
        Metric::Sibony,
        BoundKind::Upper,
        split_bound(base.p, beta),
        method::BETA_SPLIT,
        base.delta,
        TangentVector2::normal(),
    )
}

/// Checks `H(ξ₁ + ξ₂)^{1/2} ≤ H(ξ₁)^{1/2} + H(ξ₂)^{1/2}` for a positive
/// semidefinite form, with a `1e−12` slack relative to the right-hand side
/// (absolute below one).
pub fn subadditive_bound<T: Scalar>(
    h: &HermitianForm2<T>,
    xi1: &TangentVector2<T>,
    xi2: &TangentVector2<T>,
) -> Result<bool> {
    let tol = T::lit(1e-12);
    if !h.is_finite() || !h.is_psd(tol * h.magnitude().max(T::one())) {
        return Err(MetricsError::InvalidWitness(format!(
            "Hessian is not positive semidefinite (min eigenvalue {})",
            h.min_eigenvalue()
        )));
    }
    let norm = |xi: &TangentVector2<T>| h.quadratic(xi).max(T::zero()).sqrt();
    let lhs = norm(&(*xi1 + *xi2));
    let rhs = norm(xi1) + norm(xi2);
    Ok(lhs <= rhs + tol * rhs.max(T::one()))
}
