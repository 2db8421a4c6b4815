//! Functions proposed as members of the Sibony admissible class at a base
//! point: `0 ≤ U ≤ 1`, `U(P) = 0`, `log U` plurisubharmonic, `U` of class
//! C² near `P`. Nothing here assumes those properties; they are checked by
//! [`crate::psh::certify_admissible`].

use crate::geometry::ComplexPoint2;
use crate::hermitian::HermitianForm2;
use crate::scalar::Scalar;

/// A box around a point of interest where certification concentrates part
/// of its samples.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FocusRegion<T> {
    pub center: ComplexPoint2<T>,
    /// Half-width of the box in each real coordinate of `z`.
    pub half_width_z: T,
    /// Half-width of the box in each real coordinate of `w`.
    pub half_width_w: T,
}

pub trait AdmissibleCandidate<T: Scalar>: Sync {
    /// `U(q)`. Defined on the whole domain; callers check membership.
    fn value(&self, q: &ComplexPoint2<T>) -> T;

    /// The base point `P` with `U(P) = 0`.
    fn base(&self) -> ComplexPoint2<T>;

    fn tag(&self) -> &str;

    /// Estimated distance from `q` to the declared non-smooth set (the
    /// seams of `max` constructions). Infinite for smooth candidates.
    fn seam_distance(&self, _q: &ComplexPoint2<T>) -> T {
        T::infinity()
    }

    /// Length over which the candidate is smooth around `q`; finite
    /// difference steps are taken as a small fraction of it.
    fn local_scale(&self, _q: &ComplexPoint2<T>) -> T {
        T::one()
    }

    /// Closed-form complex Hessian at the base point, when known.
    fn base_hessian(&self) -> Option<HermitianForm2<T>> {
        None
    }

    fn focus(&self) -> Option<FocusRegion<T>> {
        None
    }

    /// Points lying on the declared seams, used for sub-mean-value probes.
    fn seam_probes(&self, _count: usize, _seed: u64) -> Vec<ComplexPoint2<T>> {
        Vec::new()
    }
}

impl<T: Scalar, C: AdmissibleCandidate<T> + ?Sized> AdmissibleCandidate<T> for &C {
    fn value(&self, q: &ComplexPoint2<T>) -> T {
        (**self).value(q)
    }
    fn base(&self) -> ComplexPoint2<T> {
        (**self).base()
    }
    fn tag(&self) -> &str {
        (**self).tag()
    }
    fn seam_distance(&self, q: &ComplexPoint2<T>) -> T {
        (**self).seam_distance(q)
    }
    fn local_scale(&self, q: &ComplexPoint2<T>) -> T {
        (**self).local_scale(q)
    }
    fn base_hessian(&self) -> Option<HermitianForm2<T>> {
        (**self).base_hessian()
    }
    fn focus(&self) -> Option<FocusRegion<T>> {
        (**self).focus()
    }
    fn seam_probes(&self, count: usize, seed: u64) -> Vec<ComplexPoint2<T>> {
        (**self).seam_probes(count, seed)
    }
}

/// A smooth candidate given by a closure.
pub struct FnCandidate<T, F> {
    f: F,
    base: ComplexPoint2<T>,
    tag: String,
    base_hessian: Option<HermitianForm2<T>>,
}

impl<T: Scalar, F: Fn(&ComplexPoint2<T>) -> T + Sync> FnCandidate<T, F> {
    pub fn new(f: F, base: ComplexPoint2<T>, tag: impl Into<String>) -> Self {
        Self { f, base, tag: tag.into(), base_hessian: None }
    }

    pub fn with_base_hessian(mut self, h: HermitianForm2<T>) -> Self {
        self.base_hessian = Some(h);
        self
    }
}

impl<T: Scalar, F: Fn(&ComplexPoint2<T>) -> T + Sync> AdmissibleCandidate<T> for FnCandidate<T, F> {
    fn value(&self, q: &ComplexPoint2<T>) -> T {
        (self.f)(q)
    }
    fn base(&self) -> ComplexPoint2<T> {
        self.base
    }
    fn tag(&self) -> &str {
        &self.tag
    }
    fn base_hessian(&self) -> Option<HermitianForm2<T>> {
        self.base_hessian
    }
}

/// `|s(q)| / |∇s(q)|`, the first-order distance to the zero set of `s`,
/// with the real gradient taken by central differences.
pub fn linearized_zero_distance<T: Scalar>(s: impl Fn(&ComplexPoint2<T>) -> T, q: &ComplexPoint2<T>, step: T) -> T {
    let center = s(q);
    let x = q.to_real4();
    let mut grad_sq = T::zero();
    for k in 0..4 {
        let mut plus = x;
        let mut minus = x;
        plus[k] = plus[k] + step;
        minus[k] = minus[k] - step;
        let d = (s(&ComplexPoint2::from_real4(plus)) - s(&ComplexPoint2::from_real4(minus))) / (step + step);
        grad_sq = grad_sq + d * d;
    }
    if grad_sq > T::zero() {
        center.abs() / grad_sq.sqrt()
    } else if center == T::zero() {
        T::zero()
    } else {
        T::infinity()
    }
}
