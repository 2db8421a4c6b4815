use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{MetricsError, Result};
use crate::geometry::{BasePoint, ComplexPoint2, EggRingDomain};
use crate::scalar::Scalar;

pub const MIN_DISC_STEPS: usize = 64;

/// The analytic disc `φ(ζ) = (p + λζ + a₂ζ², μζ²)`, centred at `P_δ` with
/// `φ′(0) = (λ, 0)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CandidateDisc<T> {
    pub lambda: T,
    pub a2: Complex<T>,
    pub mu: T,
    pub base: BasePoint<T>,
}

impl<T: Scalar> CandidateDisc<T> {
    pub fn new(base: BasePoint<T>, lambda: T, mu: T) -> Self {
        Self { lambda, a2: Complex::new(T::zero(), T::zero()), mu, base }
    }

    pub fn with_a2(mut self, a2: Complex<T>) -> Self {
        self.a2 = a2;
        self
    }

    pub fn eval(&self, zeta: Complex<T>) -> ComplexPoint2<T> {
        let z = zeta * self.lambda + zeta * zeta * self.a2 + self.base.p;
        ComplexPoint2::new(z, zeta * zeta * self.mu)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FeasibilityReport<T> {
    pub feasible: bool,
    /// Smallest value of `min(egg_level − 1/4, 1 − ball_level)` over the grid.
    pub worst_margin: T,
    pub worst_zeta: Complex<T>,
    pub samples_checked: usize,
}

fn check_steps(radial: usize, angular: usize) -> Result<()> {
    if radial < MIN_DISC_STEPS || angular < MIN_DISC_STEPS {
        return Err(MetricsError::Config(format!(
            "disc sampling needs at least {MIN_DISC_STEPS} radial and angular steps, got {radial} x {angular}"
        )));
    }
    Ok(())
}

/// Unit roots `e^{2πij/angular}`. The grid points are `(i/radial)` times
/// these for `i = 1..=radial`, plus the centre; sampling the closed disc
/// keeps a feasible disc away from the boundary up to its rim.
fn unit_roots<T: Scalar>(angular: usize) -> Vec<Complex<T>> {
    (0..angular)
        .map(|j| Complex::from_polar(T::one(), T::TAU() * T::from_count(j) / T::from_count(angular)))
        .collect()
}

fn radius<T: Scalar>(i: usize, radial: usize) -> T {
    T::from_count(i) / T::from_count(radial)
}

/// Samples the slack of an arbitrary disc `φ` over the polar grid.
pub fn grid_feasibility<T: Scalar>(
    phi: impl Fn(Complex<T>) -> ComplexPoint2<T> + Sync,
    domain: &EggRingDomain<T>,
    radial_steps: usize,
    angular_steps: usize,
    margin: T,
) -> Result<FeasibilityReport<T>> {
    check_steps(radial_steps, angular_steps)?;
    let centre = Complex::new(T::zero(), T::zero());
    let first = (domain.slack(&phi(centre)), centre);
    // Rows reduce independently; the fold keeps the first minimum in grid
    // order so the report does not depend on scheduling.
    let roots = unit_roots::<T>(angular_steps);
    let rows: Vec<(T, Complex<T>)> = (1..=radial_steps)
        .into_par_iter()
        .map(|i| {
            let r = radius::<T>(i, radial_steps);
            let mut worst = (T::infinity(), centre);
            for root in &roots {
                let zeta = root * r;
                let s = domain.slack(&phi(zeta));
                if !(s >= worst.0) {
                    worst = (s, zeta);
                }
            }
            worst
        })
        .collect();
    let worst = rows.into_iter().fold(first, |a, b| if !(b.0 >= a.0) { b } else { a });
    let margin = margin.max(T::zero());
    Ok(FeasibilityReport {
        feasible: worst.0 > margin,
        worst_margin: worst.0,
        worst_zeta: worst.1,
        samples_checked: radial_steps * angular_steps + 1,
    })
}

/// Whether every grid point of the disc lies in `Ω` with the given margin.
pub fn disc_feasible<T: Scalar>(
    disc: &CandidateDisc<T>,
    domain: &EggRingDomain<T>,
    radial_steps: usize,
    angular_steps: usize,
    margin: T,
) -> Result<FeasibilityReport<T>> {
    grid_feasibility(|zeta| disc.eval(zeta), domain, radial_steps, angular_steps, margin)
}

/// Yes/no version of [`grid_feasibility`] that stops at the first violation.
pub fn grid_is_feasible<T: Scalar>(
    phi: impl Fn(Complex<T>) -> ComplexPoint2<T> + Sync,
    domain: &EggRingDomain<T>,
    radial_steps: usize,
    angular_steps: usize,
    margin: T,
) -> Result<bool> {
    check_steps(radial_steps, angular_steps)?;
    let margin = margin.max(T::zero());
    let centre = Complex::new(T::zero(), T::zero());
    if !domain.contains(&phi(centre), margin) {
        return Ok(false);
    }
    // Outer rows are the most likely to fail, so they are visited first.
    let roots = unit_roots::<T>(angular_steps);
    Ok((0..radial_steps).into_par_iter().map(|k| radial_steps - k).all(|i| {
        let r = radius::<T>(i, radial_steps);
        roots.iter().all(|root| domain.contains(&phi(root * r), margin))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn setup(delta: f64) -> (EggRingDomain<f64>, BasePoint<f64>) {
        (EggRingDomain::new(2).unwrap(), BasePoint::new(delta).unwrap())
    }

    #[test]
    fn linear_disc_examples() {
        let (d, b) = setup(0.01);
        let half = disc_feasible(&CandidateDisc::new(b, 0.005, 0.0), &d, 256, 256, 1e-9).unwrap();
        assert!(half.feasible);
        assert_relative_eq!(half.worst_margin, 0.505f64.powi(2) - 0.25, max_relative = 1e-12);
        assert_relative_eq!(half.worst_zeta.re, -1.0, epsilon = 1e-12);

        let double = disc_feasible(&CandidateDisc::new(b, 0.02, 0.0), &d, 256, 256, 1e-9).unwrap();
        assert!(!double.feasible);
        assert!(double.worst_margin < 0.0);
        assert!((double.worst_zeta - Complex::new(-1.0, 0.0)).norm() < 1e-9);
        assert_eq!(double.samples_checked, 256 * 256 + 1);

        let constant = disc_feasible(&CandidateDisc::new(b, 0.0, 0.0), &d, 64, 64, 1e-9).unwrap();
        assert!(constant.feasible);
    }

    #[test]
    fn quick_check_agrees_with_report() {
        let (d, b) = setup(0.01);
        for (lambda, mu) in [(0.005, 0.0), (0.02, 0.0), (0.03, 0.5), (0.05, 0.85), (0.01, 0.9)] {
            let disc = CandidateDisc::new(b, lambda, mu);
            let full = disc_feasible(&disc, &d, 128, 128, 1e-9).unwrap();
            let quick = grid_is_feasible(|z| disc.eval(z), &d, 128, 128, 1e-9).unwrap();
            assert_eq!(full.feasible, quick, "lambda {lambda} mu {mu}");
        }
    }

    #[test]
    fn larger_margin_is_stricter() {
        let (d, b) = setup(0.01);
        let disc = CandidateDisc::new(b, 0.0099, 0.0);
        let loose = disc_feasible(&disc, &d, 128, 128, 0.0).unwrap();
        let tight = disc_feasible(&disc, &d, 128, 128, 1e-3).unwrap();
        assert!(loose.feasible);
        assert!(!tight.feasible);
        assert_eq!(loose.worst_margin, tight.worst_margin);
    }

    #[test]
    fn rejects_coarse_grids() {
        let (d, b) = setup(0.01);
        assert!(disc_feasible(&CandidateDisc::new(b, 0.001, 0.0), &d, 32, 256, 0.0).is_err());
    }

    #[test]
    fn second_order_term_moves_the_image() {
        let (_, b) = setup(0.01);
        let disc = CandidateDisc::new(b, 0.1, 0.2).with_a2(Complex::new(0.0, 0.05));
        let q = disc.eval(Complex::new(0.0, 1.0));
        assert_relative_eq!(q.z.re, 0.51, epsilon = 1e-15);
        assert_relative_eq!(q.z.im, 0.05, epsilon = 1e-15);
        assert_relative_eq!(q.w.re, -0.2, epsilon = 1e-15);
    }
}
