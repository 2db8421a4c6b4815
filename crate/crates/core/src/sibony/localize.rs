//! Globalizing an admissible function known only on a neighbourhood of the
//! base point.
//!
//! Given `u` admissible at `q` on `U ∩ Ω` with `B(q, r) ⊂ U`, the function
//! `e^{−L}·max(u + ε|x − q|², 2|x − q|⁴/r⁴)` inside the ball and
//! `e^{−L}·2|x − q|⁴/r⁴` outside is admissible on all of `Ω`. Near `q` it is
//! `e^{−L}(u + ε|x − q|²)`, so its Hessian there is at least `e^{−L}` times
//! that of `u`.

use num_complex::Complex;

use crate::candidate::{linearized_zero_distance, AdmissibleCandidate, FocusRegion};
use crate::error::{MetricsError, Result};
use crate::geometry::{ComplexPoint2, EggRingDomain, TangentVector2};
use crate::hermitian::HermitianForm2;
use crate::lowdisc::Halton;
use crate::scalar::Scalar;

/// Smallest shift `L` keeping the far branch `2|x − q|⁴/r⁴` and the near
/// branch (at most `3/2`) below `e^L` on the unit ball.
pub fn minimal_shift<T: Scalar>(q: &ComplexPoint2<T>, r: T) -> T {
    let reach = T::one() + q.norm();
    let far = T::lit(2.0) * (reach / r).powi(4);
    far.max(T::lit(1.5)).ln()
}

#[derive(Clone, Debug)]
pub struct LocalizedCandidate<T, C> {
    inner: C,
    q: ComplexPoint2<T>,
    r: T,
    eps: T,
    shift: T,
    tag: String,
}

/// Builds the globalized candidate.
///
/// `eps_loc·diam(Ω)² ≤ 1/2` and `l_loc ≥ minimal_shift(q, r)` are required.
/// The `max` must be taken by the far branch on the sphere `|x − q| = r`;
/// this is verified on sampled sphere points.
pub fn localize_admissible<T: Scalar, C: AdmissibleCandidate<T>>(
    inner: C,
    domain: &EggRingDomain<T>,
    q: ComplexPoint2<T>,
    r: T,
    eps_loc: T,
    l_loc: T,
) -> Result<LocalizedCandidate<T, C>> {
    if !(r > T::zero() && r.is_finite()) {
        return Err(MetricsError::Construction(format!("radius r = {r} must be positive")));
    }
    // The unit ball has diameter 2.
    if !(eps_loc > T::zero() && eps_loc * T::lit(4.0) <= T::lit(0.5)) {
        return Err(MetricsError::Construction(format!("eps_loc = {eps_loc} must lie in (0, 1/8]")));
    }
    if !domain.contains(&q, T::zero()) {
        return Err(MetricsError::Construction("centre q is not in the domain".into()));
    }
    let needed = minimal_shift(&q, r);
    if !(l_loc >= needed) {
        return Err(MetricsError::Construction(format!(
            "shift L = {l_loc} is below {needed}; the candidate would exceed one"
        )));
    }
    let tag = format!("localized({})", inner.tag());
    let candidate = LocalizedCandidate { inner, q, r, eps: eps_loc, shift: l_loc, tag };
    candidate.check_patch_seam(domain)?;
    Ok(candidate)
}

impl<T: Scalar, C: AdmissibleCandidate<T>> LocalizedCandidate<T, C> {
    pub fn inner(&self) -> &C {
        &self.inner
    }
    pub fn radius(&self) -> T {
        self.r
    }
    pub fn eps(&self) -> T {
        self.eps
    }
    pub fn shift(&self) -> T {
        self.shift
    }

    fn dist_sqr(&self, x: &ComplexPoint2<T>) -> T {
        (x.z - self.q.z).norm_sqr() + (x.w - self.q.w).norm_sqr()
    }

    fn far(&self, d2: T) -> T {
        T::lit(2.0) * d2 * d2 / self.r.powi(4)
    }

    fn near(&self, x: &ComplexPoint2<T>, d2: T) -> T {
        self.inner.value(x) + self.eps * d2
    }

    /// Whether `u + ε|x − q|²` defines the candidate at `x`.
    pub fn near_active(&self, x: &ComplexPoint2<T>) -> bool {
        let d2 = self.dist_sqr(x);
        d2 < self.r * self.r && self.near(x, d2) >= self.far(d2)
    }

    fn seam_function(&self, x: &ComplexPoint2<T>) -> T {
        let d2 = self.dist_sqr(x);
        self.near(x, d2) - self.far(d2)
    }

    fn sphere_points(&self, count: usize, seed: u64) -> impl Iterator<Item = TangentVector2<T>> {
        let two_pi = T::lit(std::f64::consts::TAU);
        Halton::<3>::new(seed).take(count).map(move |u| {
            let a = T::lit(u[0]).sqrt();
            let b = (T::one() - a * a).max(T::zero()).sqrt();
            TangentVector2::new(Complex::from_polar(a, two_pi * T::lit(u[1])), Complex::from_polar(b, two_pi * T::lit(u[2])))
        })
    }

    fn check_patch_seam(&self, domain: &EggRingDomain<T>) -> Result<()> {
        let radius = self.r * (T::one() - T::lit(1e-9));
        let tol = T::lit(1e-12);
        for eta in self.sphere_points(512, 0x5eed) {
            let x = self.q.offset(&(eta * radius));
            if !domain.contains(&x, T::zero()) {
                continue;
            }
            let d2 = self.dist_sqr(&x);
            let (near, far) = (self.near(&x, d2), self.far(d2));
            if near > far * (T::one() + tol) {
                return Err(MetricsError::Construction(format!(
                    "near branch {near} exceeds far branch {far} at the patch radius"
                )));
            }
        }
        Ok(())
    }

    /// `e^{−L}(H_u(ξ) + ε|ξ|²)` at `q`, from the inner candidate's closed form.
    pub fn hessian_at_center(&self) -> Option<HermitianForm2<T>> {
        if self.inner.base() != self.q {
            return None;
        }
        let h = self.inner.base_hessian()?;
        Some((h + HermitianForm2::identity() * self.eps) * (-self.shift).exp())
    }
}

impl<T: Scalar, C: AdmissibleCandidate<T>> AdmissibleCandidate<T> for LocalizedCandidate<T, C> {
    fn value(&self, x: &ComplexPoint2<T>) -> T {
        let d2 = self.dist_sqr(x);
        let far = self.far(d2);
        let inside = if d2 < self.r * self.r { self.near(x, d2).max(far) } else { far };
        (-self.shift).exp() * inside
    }

    fn base(&self) -> ComplexPoint2<T> {
        self.q
    }

    fn tag(&self) -> &str {
        &self.tag
    }

    fn seam_distance(&self, x: &ComplexPoint2<T>) -> T {
        let d2 = self.dist_sqr(x);
        let to_sphere = (d2.sqrt() - self.r).abs();
        if d2 >= self.r * self.r {
            return to_sphere;
        }
        let step = self.r * T::lit(1e-6);
        let to_seam = linearized_zero_distance(|y| self.seam_function(y), x, step);
        to_sphere.min(to_seam).min(self.inner.seam_distance(x))
    }

    fn local_scale(&self, x: &ComplexPoint2<T>) -> T {
        if self.near_active(x) {
            self.inner.local_scale(x).min(self.r)
        } else {
            self.r
        }
    }

    fn base_hessian(&self) -> Option<HermitianForm2<T>> {
        self.hessian_at_center()
    }

    fn focus(&self) -> Option<FocusRegion<T>> {
        self.inner.focus()
    }

    fn seam_probes(&self, count: usize, seed: u64) -> Vec<ComplexPoint2<T>> {
        let mut out: Vec<_> = self
            .inner
            .seam_probes(count / 2, seed)
            .into_iter()
            .filter(|x| self.near_active(x))
            .collect();
        for eta in self.sphere_points(count * 4, seed ^ 0x9e37) {
            if out.len() >= count {
                break;
            }
            let along = |t: T| self.seam_function(&self.q.offset(&(eta * t)));
            let (mut lo, mut hi) = (self.r * T::lit(1e-6), self.r * (T::one() - T::lit(1e-9)));
            if !(along(lo) > T::zero() && along(hi) < T::zero()) {
                continue;
            }
            for _ in 0..200 {
                let mid = (lo + hi) / T::lit(2.0);
                if along(mid) > T::zero() {
                    lo = mid;
                } else {
                    hi = mid;
                }
                if hi - lo <= T::epsilon() * hi {
                    break;
                }
            }
            // Domain membership is checked by the certifier.
            out.push(self.q.offset(&(eta * ((lo + hi) / T::lit(2.0)))));
        }
        out
    }
}
