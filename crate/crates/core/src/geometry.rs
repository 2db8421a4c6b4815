//! Points and directions in complex 2-space, the egg-ring model domain and
//! the exact ball metric obtained from the Möbius automorphism.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;

use crate::error::{MetricsError, Result};
use crate::scalar::Scalar;

/// A point `(z, w)` of complex 2-space.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ComplexPoint2<T> {
    pub z: Complex<T>,
    pub w: Complex<T>,
}

impl<T: Scalar> ComplexPoint2<T> {
    pub fn new(z: Complex<T>, w: Complex<T>) -> Self {
        Self { z, w }
    }

    /// Point with real coordinates `(z, w)`.
    pub fn real(z: T, w: T) -> Self {
        Self::new(Complex::new(z, T::zero()), Complex::new(w, T::zero()))
    }

    pub fn from_parts(z_re: T, z_im: T, w_re: T, w_im: T) -> Self {
        Self::new(Complex::new(z_re, z_im), Complex::new(w_re, w_im))
    }

    pub fn is_finite(&self) -> bool {
        self.z.re.is_finite() && self.z.im.is_finite() && self.w.re.is_finite() && self.w.im.is_finite()
    }

    /// Squared Euclidean norm `|z|² + |w|²`.
    pub fn norm_sqr(&self) -> T {
        self.z.norm_sqr() + self.w.norm_sqr()
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    /// The point `self + ζ·xi` on the complex line through `self` with direction `xi`.
    pub fn along(&self, xi: &TangentVector2<T>, zeta: Complex<T>) -> Self {
        Self::new(self.z + xi.xi_z * zeta, self.w + xi.xi_w * zeta)
    }

    pub fn offset(&self, v: &TangentVector2<T>) -> Self {
        Self::new(self.z + v.xi_z, self.w + v.xi_w)
    }

    pub fn distance(&self, other: &Self) -> T {
        ((self.z - other.z).norm_sqr() + (self.w - other.w).norm_sqr()).sqrt()
    }

    /// Real coordinates `[Re z, Im z, Re w, Im w]`.
    pub fn to_real4(&self) -> [T; 4] {
        [self.z.re, self.z.im, self.w.re, self.w.im]
    }

    pub fn from_real4(x: [T; 4]) -> Self {
        Self::from_parts(x[0], x[1], x[2], x[3])
    }
}

/// A tangent vector `(ξ_z, ξ_w)`. The zero vector is allowed.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct TangentVector2<T> {
    pub xi_z: Complex<T>,
    pub xi_w: Complex<T>,
}

impl<T: Scalar> TangentVector2<T> {
    pub fn new(xi_z: Complex<T>, xi_w: Complex<T>) -> Self {
        Self { xi_z, xi_w }
    }

    pub fn real(a: T, b: T) -> Self {
        Self::new(Complex::new(a, T::zero()), Complex::new(b, T::zero()))
    }

    pub fn from_parts(z_re: T, z_im: T, w_re: T, w_im: T) -> Self {
        Self::new(Complex::new(z_re, z_im), Complex::new(w_re, w_im))
    }

    /// The normal direction `ν = (1, 0)`.
    pub fn normal() -> Self {
        Self::real(T::one(), T::zero())
    }

    /// The tangential direction `(0, 1)`.
    pub fn tangential() -> Self {
        Self::real(T::zero(), T::one())
    }

    pub fn is_zero(&self) -> bool {
        self.xi_z == Complex::new(T::zero(), T::zero()) && self.xi_w == Complex::new(T::zero(), T::zero())
    }

    pub fn is_finite(&self) -> bool {
        self.xi_z.re.is_finite() && self.xi_z.im.is_finite() && self.xi_w.re.is_finite() && self.xi_w.im.is_finite()
    }

    pub fn norm_sqr(&self) -> T {
        self.xi_z.norm_sqr() + self.xi_w.norm_sqr()
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    /// Complex scalar multiple `t·ξ`.
    pub fn scale(&self, t: Complex<T>) -> Self {
        Self::new(self.xi_z * t, self.xi_w * t)
    }

    /// `(ξ_z, 0)`: the component along the normal `(1, 0)`.
    pub fn normal_part(&self) -> Self {
        Self::new(self.xi_z, Complex::new(T::zero(), T::zero()))
    }

    /// `(0, ξ_w)`: the component along the complex tangent `(0, 1)`.
    pub fn tangential_part(&self) -> Self {
        Self::new(Complex::new(T::zero(), T::zero()), self.xi_w)
    }
}

impl<T: Scalar> Add for TangentVector2<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.xi_z + rhs.xi_z, self.xi_w + rhs.xi_w)
    }
}

impl<T: Scalar> Sub for TangentVector2<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.xi_z - rhs.xi_z, self.xi_w - rhs.xi_w)
    }
}

impl<T: Scalar> Neg for TangentVector2<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.xi_z, -self.xi_w)
    }
}

impl<T: Scalar> Mul<T> for TangentVector2<T> {
    type Output = Self;
    fn mul(self, t: T) -> Self {
        Self::new(self.xi_z * t, self.xi_w * t)
    }
}

/// Which hypersurface bounds the domain from outside.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
#[non_exhaustive]
pub enum OuterBoundary {
    /// The unit sphere `|z|² + |w|² = 1`.
    #[default]
    UnitBall,
}

/// The egg-ring `Ω = B \ {|z|² + |w|^m ≤ 1/4}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EggRingDomain<T> {
    m: u32,
    inner_level: T,
    outer: OuterBoundary,
}

impl<T: Scalar> EggRingDomain<T> {
    /// Builds the domain with inner exponent `m`.
    ///
    /// Fails unless `m ≥ 2` and the inner egg lies strictly inside the unit
    /// ball. The latter holds up to `m = 26`.
    pub fn new(m: u32) -> Result<Self> {
        if m < 2 {
            return Err(MetricsError::Domain(format!("inner exponent m = {m} must be at least 2")));
        }
        let domain = Self { m, inner_level: T::lit(0.25), outer: OuterBoundary::UnitBall };
        let reach = domain.inner_egg_reach();
        if reach >= T::one() {
            return Err(MetricsError::Domain(format!(
                "inner egg for m = {m} reaches |q|² = {reach} outside the unit ball"
            )));
        }
        Ok(domain)
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn inner_level(&self) -> T {
        self.inner_level
    }

    pub fn outer(&self) -> OuterBoundary {
        self.outer
    }

    /// `max |q|²` over the inner egg.
    ///
    /// With `s = |w|²` the egg boundary has `|q|² = 1/4 + s − s^{m/2}` for
    /// `s ∈ [0, 4^{-2/m}]`; the maximum is at the interior critical point or
    /// the endpoint.
    pub fn inner_egg_reach(&self) -> T {
        let m = T::from_u32(self.m).unwrap();
        let two = T::lit(2.0);
        let quarter = self.inner_level;
        let profile = |s: T| quarter + s - s.powf(m / two);
        let s_max = quarter.powf(two / m);
        let mut best = profile(s_max).max(profile(T::zero()));
        if self.m > 2 {
            let s_crit = (two / m).powf(two / (m - two));
            if s_crit < s_max {
                best = best.max(profile(s_crit));
            }
        }
        best
    }

    /// `|z|² + |w|^m`.
    pub fn egg_level(&self, q: &ComplexPoint2<T>) -> T {
        q.z.norm_sqr() + q.w.norm().powi(self.m as i32)
    }

    /// `|z|² + |w|²`.
    pub fn ball_level(&self, q: &ComplexPoint2<T>) -> T {
        match self.outer {
            OuterBoundary::UnitBall => q.norm_sqr(),
        }
    }

    /// Membership with a margin on both defining functions: the egg level
    /// must exceed `1/4 + margin` and the ball level stay below `1 − margin`.
    /// A negative margin is treated as zero.
    pub fn contains(&self, q: &ComplexPoint2<T>, margin: T) -> bool {
        let margin = margin.max(T::zero());
        q.is_finite()
            && self.egg_level(q) > self.inner_level + margin
            && self.ball_level(q) < T::one() - margin
    }

    /// Smaller of the two slacks `egg_level − 1/4` and `1 − ball_level`;
    /// positive exactly on `Ω`.
    pub fn slack(&self, q: &ComplexPoint2<T>) -> T {
        (self.egg_level(q) - self.inner_level).min(T::one() - self.ball_level(q))
    }
}

/// The point `P_δ = (1/2 + δ, 0)` at distance `δ` from the inner boundary.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BasePoint<T> {
    pub delta: T,
    pub p: T,
    pub point: ComplexPoint2<T>,
}

impl<T: Scalar> BasePoint<T> {
    pub fn new(delta: T) -> Result<Self> {
        if !(delta > T::zero() && delta < T::lit(0.25)) {
            return Err(MetricsError::Domain(format!("delta = {delta} must lie in (0, 1/4)")));
        }
        let p = T::lit(0.5) + delta;
        Ok(Self { delta, p, point: ComplexPoint2::real(p, T::zero()) })
    }
}

/// The ball automorphism moving `(p, 0)` to the origin:
/// `Φ(z, w) = ((z − p)/(1 − p z), √(1 − p²)·w/(1 − p z))`.
pub fn mobius<T: Scalar>(p: T, q: &ComplexPoint2<T>) -> ComplexPoint2<T> {
    let one = Complex::new(T::one(), T::zero());
    let denom = one - q.z * p;
    let s = (T::one() - p * p).sqrt();
    ComplexPoint2::new((q.z - p) / denom, q.w * s / denom)
}

/// Length of `Φ_*(p, 0)ξ`, the Carathéodory (and Kobayashi) metric of the
/// unit ball at `(p, 0)`.
pub fn pushforward_norm<T: Scalar>(p: T, xi: &TangentVector2<T>) -> Result<T> {
    if !(p > T::zero() && p < T::one()) {
        return Err(MetricsError::Domain(format!("p = {p} must lie in (0, 1)")));
    }
    let s = T::one() - p * p;
    Ok((xi.xi_z.norm_sqr() / (s * s) + xi.xi_w.norm_sqr() / s).sqrt())
}

/// Tuning of the two-parameter minimization along a complex line.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LineSearchOptions<T> {
    /// Points per axis of the coarse grid.
    pub grid: usize,
    /// Refinement rounds, each shrinking the spacing fourfold.
    pub rounds: usize,
    /// Absolute decision margin on the egg level.
    pub margin: T,
}

impl<T: Scalar> Default for LineSearchOptions<T> {
    fn default() -> Self {
        Self { grid: 256, rounds: 5, margin: T::lit(1e-9) }
    }
}

/// Smallest egg level found along a complex line and where it occurs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LineMinimum<T> {
    pub level: T,
    pub zeta: Complex<T>,
}

/// Minimizes `egg_level(P + ζ·ξ)` over `|Re ζ|, |Im ζ| ≤ 2/|ξ|`.
///
/// Beyond that box the line is outside the unit ball and therefore outside
/// the inner egg.
pub fn line_minimum<T: Scalar>(
    domain: &EggRingDomain<T>,
    point: &ComplexPoint2<T>,
    xi: &TangentVector2<T>,
    opts: &LineSearchOptions<T>,
) -> Result<LineMinimum<T>> {
    if xi.is_zero() {
        return Err(MetricsError::DegenerateDirection);
    }
    if opts.grid < 3 {
        return Err(MetricsError::Config("line search grid needs at least 3 points per axis".into()));
    }
    let level = |zeta: Complex<T>| domain.egg_level(&point.along(xi, zeta));
    let n = opts.grid;
    let reach = T::lit(2.0) / xi.norm();
    let spacing = reach * T::lit(2.0) / T::from_count(n - 1);
    let coord = |i: usize| -reach + spacing * T::from_count(i);

    let mut values = vec![T::zero(); n * n];
    for i in 0..n {
        for j in 0..n {
            values[i * n + j] = level(Complex::new(coord(i), coord(j)));
        }
    }

    // Seeds: grid points that are minimal within their 3×3 neighbourhood.
    let mut seeds: Vec<(T, usize, usize)> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let v = values[i * n + j];
            let mut is_min = true;
            'nb: for di in -1i64..=1 {
                for dj in -1i64..=1 {
                    let (a, b) = (i as i64 + di, j as i64 + dj);
                    if (di, dj) == (0, 0) || a < 0 || b < 0 || a >= n as i64 || b >= n as i64 {
                        continue;
                    }
                    if values[a as usize * n + b as usize] < v {
                        is_min = false;
                        break 'nb;
                    }
                }
            }
            if is_min {
                seeds.push((v, i, j));
            }
        }
    }
    seeds.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
    seeds.truncate(4);

    let mut best = LineMinimum { level: T::infinity(), zeta: Complex::new(T::zero(), T::zero()) };
    for &(v, i, j) in &seeds {
        let mut center = Complex::new(coord(i), coord(j));
        let mut center_value = v;
        let mut step = spacing;
        for _ in 0..opts.rounds {
            // 17 × 17 points spanning ±2 old cells: new spacing is a quarter.
            let fine = step / T::lit(4.0);
            let mut round_best = (center_value, center);
            for a in -8i32..=8 {
                for b in -8i32..=8 {
                    let zeta = center
                        + Complex::new(fine * T::from_i32(a).unwrap(), fine * T::from_i32(b).unwrap());
                    let value = level(zeta);
                    if value < round_best.0 {
                        round_best = (value, zeta);
                    }
                }
            }
            center_value = round_best.0;
            center = round_best.1;
            step = fine;
        }
        if center_value < best.level {
            best = LineMinimum { level: center_value, zeta: center };
        }
    }
    Ok(best)
}

/// Decides whether the complex line `P + ζ·ξ` stays off the closed inner egg:
/// the minimized egg level must exceed `1/4` by the decision margin.
pub fn line_misses_inner<T: Scalar>(
    domain: &EggRingDomain<T>,
    point: &ComplexPoint2<T>,
    xi: &TangentVector2<T>,
    opts: &LineSearchOptions<T>,
) -> Result<bool> {
    let min = line_minimum(domain, point, xi, opts)?;
    Ok(min.level > domain.inner_level() + opts.margin)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn dom(m: u32) -> EggRingDomain<f64> {
        EggRingDomain::new(m).unwrap()
    }

    #[test]
    fn egg_level_examples() {
        assert_eq!(dom(2).egg_level(&ComplexPoint2::real(0.5, 0.0)), 0.25);
        assert_relative_eq!(dom(2).egg_level(&ComplexPoint2::real(0.51, 0.0)), 0.2601, max_relative = 1e-15);
        assert_relative_eq!(dom(4).egg_level(&ComplexPoint2::real(0.0, 0.5)), 0.0625, max_relative = 1e-15);
    }

    #[test]
    fn contains_examples() {
        let d = dom(2);
        assert!(d.contains(&ComplexPoint2::real(0.6, 0.0), 0.0));
        assert!(!d.contains(&ComplexPoint2::real(0.5, 0.0), 0.0));
        assert!(!d.contains(&ComplexPoint2::real(0.9, 0.5), 0.0));
        assert!(!d.contains(&ComplexPoint2::real(f64::NAN, 0.0), 0.0));
    }

    #[test]
    fn rejects_bad_exponents() {
        assert!(EggRingDomain::<f64>::new(1).is_err());
        assert!(EggRingDomain::<f64>::new(26).is_ok());
        assert!(EggRingDomain::<f64>::new(27).is_err());
        assert!(EggRingDomain::<f64>::new(40).is_err());
        assert!((dom(2).inner_egg_reach() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn base_point_range() {
        let b = BasePoint::new(0.1).unwrap();
        assert_relative_eq!(b.p, 0.6);
        assert!(BasePoint::new(0.0f64).is_err());
        assert!(BasePoint::new(0.25f64).is_err());
        assert!(BasePoint::new(f64::NAN).is_err());
    }

    #[test]
    fn pushforward_examples() {
        assert_relative_eq!(pushforward_norm(0.6, &TangentVector2::normal()).unwrap(), 1.5625, max_relative = 1e-15);
        assert_relative_eq!(pushforward_norm(0.6, &TangentVector2::tangential()).unwrap(), 1.25, max_relative = 1e-15);
        assert_eq!(pushforward_norm(0.5 + 1e-9, &TangentVector2::default()).unwrap(), 0.0);
        assert!(pushforward_norm(1.0, &TangentVector2::<f64>::normal()).is_err());
        assert!(pushforward_norm(0.0, &TangentVector2::<f64>::normal()).is_err());
    }

    /// Finite-difference Jacobian of the explicit automorphism, the
    /// independent route to the pushforward norm.
    #[test]
    fn pushforward_matches_mobius_derivative() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let p: f64 = rng.gen_range(0.05..0.95);
            let xi = TangentVector2::from_parts(
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
            );
            let base = ComplexPoint2::real(p, 0.0);
            let h = 1e-6;
            let fwd = mobius(p, &base.along(&xi, Complex::new(h, 0.0)));
            let bwd = mobius(p, &base.along(&xi, Complex::new(-h, 0.0)));
            let dz = (fwd.z - bwd.z) / (2.0 * h);
            let dw = (fwd.w - bwd.w) / (2.0 * h);
            let fd = (dz.norm_sqr() + dw.norm_sqr()).sqrt();
            assert_relative_eq!(fd, pushforward_norm(p, &xi).unwrap(), max_relative = 1e-7);
        }
    }

    /// With the `1 − p z` denominator in both components the map preserves
    /// the unit ball.
    #[test]
    fn mobius_preserves_ball() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let p = 0.6;
        assert!(mobius(p, &ComplexPoint2::real(p, 0.0)).norm() < 1e-15);
        for _ in 0..2000 {
            let q = ComplexPoint2::from_parts(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            );
            let inside = q.norm_sqr() < 1.0;
            assert_eq!(mobius(p, &q).norm_sqr() < 1.0, inside);
        }
    }

    #[test]
    fn line_examples() {
        let d = dom(2);
        let opts = LineSearchOptions::default();
        assert!(line_misses_inner(&d, &ComplexPoint2::real(0.6, 0.0), &TangentVector2::tangential(), &opts).unwrap());
        assert!(!line_misses_inner(&d, &ComplexPoint2::real(0.51, 0.0), &TangentVector2::normal(), &opts).unwrap());
        assert!(line_misses_inner(&d, &ComplexPoint2::real(0.51, 0.0), &TangentVector2::real(1.0, 10.0), &opts).unwrap());
        assert_eq!(
            line_misses_inner(&d, &ComplexPoint2::real(0.6, 0.0), &TangentVector2::default(), &opts),
            Err(MetricsError::DegenerateDirection)
        );
    }

    /// Brute-force oracle: the quadratic `|0.51 + ζ|² + |10 ζ|²` has its
    /// minimum `0.2601·100/101` at `ζ = −0.51/101`.
    #[test]
    fn line_minimum_matches_closed_form() {
        let d = dom(2);
        let min = line_minimum(
            &d,
            &ComplexPoint2::real(0.51, 0.0),
            &TangentVector2::real(1.0, 10.0),
            &LineSearchOptions::default(),
        )
        .unwrap();
        assert!((min.level - 0.2601 * 100.0 / 101.0).abs() < 1e-9);
        assert!((min.zeta.re + 0.51 / 101.0).abs() < 1e-4);
    }
}
