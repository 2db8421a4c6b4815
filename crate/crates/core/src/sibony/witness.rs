//! The plurisubharmonic witness giving the lower bound on the Sibony metric
//! at `P_δ`.
//!
//! Near the `w = 0` slice the witness is `e^{−L′}(f(z) + |w|²)` with
//! `f(z) = δ^{2/m} |(z − p)/(z − p + 2δ)|²`, whose `z`-Hessian at `p` is of
//! order `δ^{2/m − 2}`. Away from the slice it is patched to
//! `e^{−L′}·L|w|^{2+ε}`, which keeps it below one on the whole domain. The
//! function is stored as `U = e^u` so that its zero at `P_δ` stays finite.

use num_complex::Complex;

use crate::candidate::{AdmissibleCandidate, FocusRegion};
use crate::error::{MetricsError, Result};
use crate::geometry::{ComplexPoint2, EggRingDomain, TangentVector2};
use crate::hermitian::HermitianForm2;
use crate::lowdisc::Halton;
use crate::scalar::Scalar;

/// `δ^{2/m} |(z − p)/(z − p + 2δ)|²` with `p = 1/2 + δ`.
pub fn witness_f<T: Scalar>(z: Complex<T>, delta: T, m: u32) -> Result<T> {
    let p = T::lit(0.5) + delta;
    let denom = z - (T::lit(0.5) - delta);
    // Within rounding of the pole the ratio is meaningless.
    if denom.norm() <= T::lit(4.0) * T::epsilon() * z.norm().max(T::one()) {
        return Err(MetricsError::Pole(format!("z = {z} is the pole p − 2δ of the witness factor")));
    }
    let ratio = (z - p).norm_sqr() / denom.norm_sqr();
    Ok(delta.powf(T::lit(2.0) / T::from_u32(m).unwrap()) * ratio)
}

/// Which expression defines the witness at a point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessBranch {
    /// `|w|` below the patch radius and `f(z) + |w|²` dominates.
    Local,
    /// `|w|` below the patch radius and `L|w|^{2+ε}` dominates.
    Patch,
    /// `|w|` at or beyond the patch radius.
    Outer,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SibonyWitness<T> {
    delta: T,
    m: u32,
    c: T,
    l: T,
    l_prime: T,
    epsilon: T,
    p: T,
}

impl<T: Scalar> SibonyWitness<T> {
    /// Witness with `c = 1/3`, `L = 200`, `L′ = ln 200` and `ε` half of its
    /// admissible bound.
    pub fn new(delta: T, m: u32) -> Result<Self> {
        let eps = Self::epsilon_bound(delta, m)? * T::lit(0.5);
        Self::with_constants(delta, m, T::one() / T::lit(3.0), T::lit(200.0), T::lit(200.0).ln(), eps)
    }

    pub fn with_constants(delta: T, m: u32, c: T, l: T, l_prime: T, epsilon: T) -> Result<Self> {
        let bound = Self::epsilon_bound(delta, m)?;
        if !(c > T::zero() && c <= T::one() / T::lit(3.0)) {
            return Err(MetricsError::InvalidWitness(format!("c = {c} must lie in (0, 1/3]")));
        }
        if !(l > T::zero() && l * (-l_prime).exp() <= T::one() + T::lit(1e-12)) {
            return Err(MetricsError::InvalidWitness(format!(
                "L = {l} and L' = {l_prime} must satisfy 0 < L·e^(-L') ≤ 1"
            )));
        }
        if !(epsilon > T::zero() && epsilon < bound) {
            return Err(MetricsError::InvalidWitness(format!("epsilon = {epsilon} must lie in (0, {bound})")));
        }
        Ok(Self { delta, m, c, l, l_prime, epsilon, p: T::lit(0.5) + delta })
    }

    /// `m·ln(0.96)/ln δ`, the supremum of admissible `ε`.
    pub fn epsilon_bound(delta: T, m: u32) -> Result<T> {
        if m < 2 {
            return Err(MetricsError::InvalidWitness(format!("m = {m} must be at least 2")));
        }
        if !(delta > T::zero() && delta < T::lit(0.25)) {
            return Err(MetricsError::InvalidWitness(format!("delta = {delta} must lie in (0, 1/4)")));
        }
        Ok(T::from_u32(m).unwrap() * T::lit(0.96).ln() / delta.ln())
    }

    pub fn delta(&self) -> T {
        self.delta
    }
    pub fn m(&self) -> u32 {
        self.m
    }
    pub fn c(&self) -> T {
        self.c
    }
    pub fn l(&self) -> T {
        self.l
    }
    pub fn l_prime(&self) -> T {
        self.l_prime
    }
    pub fn epsilon(&self) -> T {
        self.epsilon
    }
    pub fn p(&self) -> T {
        self.p
    }

    fn m_f(&self) -> T {
        T::from_u32(self.m).unwrap()
    }

    /// `e^{−L′}`.
    pub fn scale(&self) -> T {
        (-self.l_prime).exp()
    }

    /// `c^{2/m} δ^{1/m}`: below it the `max` construction is used.
    pub fn patch_radius(&self) -> T {
        let two = T::lit(2.0);
        self.c.powf(two / self.m_f()) * self.delta.powf(T::one() / self.m_f())
    }

    /// `(1/L)^{1/ε}`: below it `f + |w|²` dominates on the slice `z = p`.
    /// Underflows to zero for small `ε`.
    pub fn smooth_radius(&self) -> T {
        (T::one() / self.l).powf(T::one() / self.epsilon)
    }

    /// The pole `p − 2δ` of the Möbius factor of `f`.
    pub fn pole(&self) -> T {
        self.p - self.delta - self.delta
    }

    pub fn f(&self, z: Complex<T>) -> Result<T> {
        witness_f(z, self.delta, self.m)
    }

    fn f_unchecked(&self, z: Complex<T>) -> T {
        self.f(z).unwrap_or(T::infinity())
    }

    /// `∂²f/∂z∂z̄ = δ^{2/m} |g′(z)|²` with `g′ = 2δ/(z − p + 2δ)²`.
    pub fn f_levi(&self, z: Complex<T>) -> T {
        let denom = z - self.p + self.delta + self.delta;
        let g_prime = Complex::from(self.delta + self.delta) / (denom * denom);
        self.delta.powf(T::lit(2.0) / self.m_f()) * g_prime.norm_sqr()
    }

    fn patch_term(&self, w_abs: T) -> T {
        self.l * w_abs.powf(T::lit(2.0) + self.epsilon)
    }

    pub fn branch(&self, q: &ComplexPoint2<T>) -> WitnessBranch {
        let w_abs = q.w.norm();
        if w_abs >= self.patch_radius() {
            return WitnessBranch::Outer;
        }
        if self.f_unchecked(q.z) + q.w.norm_sqr() >= self.patch_term(w_abs) {
            WitnessBranch::Local
        } else {
            WitnessBranch::Patch
        }
    }

    /// `e^u(q)` without the membership check.
    pub fn value_unchecked(&self, q: &ComplexPoint2<T>) -> T {
        let w_abs = q.w.norm();
        let patch = self.patch_term(w_abs);
        let inner = if w_abs < self.patch_radius() { patch.max(self.f_unchecked(q.z) + q.w.norm_sqr()) } else { patch };
        self.scale() * inner
    }

    /// `e^u(q)` for `q` in the domain.
    pub fn witness_u(&self, domain: &EggRingDomain<T>, q: &ComplexPoint2<T>) -> Result<T> {
        if !domain.contains(q, T::zero()) {
            return Err(MetricsError::Domain(format!("({}, {}) is not in the domain", q.z, q.w)));
        }
        Ok(self.value_unchecked(q))
    }

    /// Seam of the `max`: `f(z) + |w|² − L|w|^{2+ε}`.
    pub fn seam_function(&self, q: &ComplexPoint2<T>) -> T {
        self.f_unchecked(q.z) + q.w.norm_sqr() - self.patch_term(q.w.norm())
    }

    /// Complex Hessian of `e^u` at `P_δ`:
    /// `diag(e^{−L′} δ^{2/m}/(4δ²), e^{−L′})`.
    pub fn hessian_at_base(&self) -> HermitianForm2<T> {
        let s = self.scale();
        let zz = self.delta.powf(T::lit(2.0) / self.m_f()) / (T::lit(4.0) * self.delta * self.delta);
        HermitianForm2::diagonal(s * zz, s)
    }

    /// `(∂∂̄ e^u(P_δ)(ξ, ξ̄))^{1/2}`.
    pub fn lower_bound(&self, xi: &TangentVector2<T>) -> T {
        self.hessian_at_base().quadratic(xi).max(T::zero()).sqrt()
    }

    /// Solves `f(z) + t² = L t^{2+ε}` for `t ∈ (0, patch radius)`.
    fn seam_modulus(&self, z: Complex<T>) -> Option<T> {
        let f = self.f(z).ok()?;
        if f <= T::zero() {
            return None;
        }
        let g = |t: T| f + t * t - self.patch_term(t);
        let (mut lo, mut hi) = (T::zero(), self.patch_radius());
        if g(hi) >= T::zero() {
            return None;
        }
        for _ in 0..200 {
            let mid = (lo + hi) / T::lit(2.0);
            if g(mid) > T::zero() {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= T::epsilon() * hi {
                break;
            }
        }
        Some((lo + hi) / T::lit(2.0))
    }
}

impl<T: Scalar> AdmissibleCandidate<T> for SibonyWitness<T> {
    fn value(&self, q: &ComplexPoint2<T>) -> T {
        self.value_unchecked(q)
    }

    fn base(&self) -> ComplexPoint2<T> {
        ComplexPoint2::real(self.p, T::zero())
    }

    fn tag(&self) -> &str {
        "sibony-witness"
    }

    fn seam_distance(&self, q: &ComplexPoint2<T>) -> T {
        let r0 = self.patch_radius();
        let w_abs = q.w.norm();
        let to_patch_sphere = (w_abs - r0).abs();
        if w_abs >= r0 {
            return to_patch_sphere;
        }
        // Real gradient of the seam function from its Wirtinger derivatives:
        // |∇s|² = 4(|∂_z s|² + |∂_w s|²).
        let denom = q.z - self.p + self.delta + self.delta;
        let g = (q.z - self.p) / denom;
        let g_prime = Complex::from(self.delta + self.delta) / (denom * denom);
        let dz = g_prime * g.conj() * self.delta.powf(T::lit(2.0) / self.m_f());
        let two_eps = T::lit(2.0) + self.epsilon;
        let dw_scale = T::one() - self.l * two_eps / T::lit(2.0) * w_abs.powf(self.epsilon);
        let dw_abs = w_abs * dw_scale.abs();
        let grad = T::lit(2.0) * (dz.norm_sqr() + dw_abs * dw_abs).sqrt();
        let s = self.seam_function(q).abs();
        let to_seam = if grad > T::zero() { s / grad } else { T::infinity() };
        to_seam.min(to_patch_sphere)
    }

    fn local_scale(&self, q: &ComplexPoint2<T>) -> T {
        match self.branch(q) {
            WitnessBranch::Local => (q.z - self.pole()).norm(),
            WitnessBranch::Patch | WitnessBranch::Outer => q.w.norm(),
        }
    }

    fn base_hessian(&self) -> Option<HermitianForm2<T>> {
        Some(self.hessian_at_base())
    }

    fn focus(&self) -> Option<FocusRegion<T>> {
        Some(FocusRegion {
            center: self.base(),
            half_width_z: T::lit(8.0) * self.delta,
            half_width_w: T::lit(2.0) * self.patch_radius(),
        })
    }

    fn seam_probes(&self, count: usize, seed: u64) -> Vec<ComplexPoint2<T>> {
        let domain = match EggRingDomain::new(self.m) {
            Ok(d) => d,
            Err(_) => return Vec::new(),
        };
        let two_pi = T::lit(std::f64::consts::TAU);
        let mut out = Vec::with_capacity(count);
        for u in Halton::<3>::new(seed).take(count.saturating_mul(20)) {
            if out.len() >= count {
                break;
            }
            let rho = self.delta * T::lit(0.05 + 6.0 * u[0]);
            let z = Complex::from_polar(rho, two_pi * T::lit(u[1])) + self.p;
            if let Some(t) = self.seam_modulus(z) {
                let q = ComplexPoint2::new(z, Complex::from_polar(t, two_pi * T::lit(u[2])));
                if domain.contains(&q, T::zero()) {
                    out.push(q);
                }
            }
        }
        out
    }
}
