use num_complex::Complex;

use crate::error::{MetricsError, Result};
use crate::geometry::{ComplexPoint2, EggRingDomain, TangentVector2};
use crate::lowdisc::Halton;
use crate::scalar::Scalar;

/// Slack on `log U` for the sub-mean-value comparison.
pub const SUBMEAN_SLACK: f64 = 1e-9;

/// Unit directions: the two coordinate axes, then Halton points on `S³`.
pub fn probe_directions<T: Scalar>(count: usize) -> Vec<TangentVector2<T>> {
    let two_pi = T::lit(std::f64::consts::TAU);
    let mut out = vec![TangentVector2::normal(), TangentVector2::tangential()];
    out.extend(Halton::<3>::new(0xd1ec).take(count.saturating_sub(2)).map(|u| {
        let a = T::lit(u[0]).sqrt();
        let b = (T::one() - a * a).max(T::zero()).sqrt();
        TangentVector2::new(Complex::from_polar(a, two_pi * T::lit(u[1])), Complex::from_polar(b, two_pi * T::lit(u[2])))
    }));
    out.truncate(count);
    out
}

/// Sub-mean-value test of `log U` on complex lines through `q`:
/// `log U(q) ≤ mean_θ log U(q + r e^{iθ} η) + 1e−9` for each sampled unit
/// direction `η`. Passes vacuously when `U(q) = 0`.
///
/// With a domain, every sampled disc must stay inside it.
pub fn submean_test<T: Scalar>(
    u: &impl Fn(&ComplexPoint2<T>) -> T,
    q: &ComplexPoint2<T>,
    radius: T,
    n_lines: usize,
    n_angles: usize,
    domain: Option<&EggRingDomain<T>>,
) -> Result<bool> {
    if !(radius > T::zero()) || n_lines == 0 || n_angles < 3 {
        return Err(MetricsError::Config("sub-mean test needs a positive radius, a line and three angles".into()));
    }
    let center = u(q);
    if center <= T::zero() {
        return Ok(true);
    }
    let log_center = center.ln();
    let two_pi = T::lit(std::f64::consts::TAU);
    for eta in probe_directions::<T>(n_lines) {
        if let Some(d) = domain {
            for frac in [0.25, 0.5, 0.75, 1.0] {
                for k in 0..n_angles {
                    let theta = two_pi * T::from_count(k) / T::from_count(n_angles);
                    let x = q.along(&eta, Complex::from_polar(radius * T::lit(frac), theta));
                    if !d.contains(&x, T::zero()) {
                        return Err(MetricsError::Sampling(format!(
                            "disc of radius {radius} around ({}, {}) leaves the domain",
                            q.z, q.w
                        )));
                    }
                }
            }
        }
        let mut sum = T::zero();
        for k in 0..n_angles {
            let theta = two_pi * T::from_count(k) / T::from_count(n_angles);
            sum = sum + u(&q.along(&eta, Complex::from_polar(radius, theta))).ln();
        }
        let mean = sum / T::from_count(n_angles);
        if !(log_center <= mean + T::lit(SUBMEAN_SLACK)) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sibony::SibonyWitness;

    #[test]
    fn exponential_of_harmonic_passes() {
        let u = |q: &ComplexPoint2<f64>| q.z.re.exp();
        assert!(submean_test(&u, &ComplexPoint2::real(0.1, 0.2), 0.05, 6, 64, None).unwrap());
    }

    #[test]
    fn log_superharmonic_fails() {
        let u = |q: &ComplexPoint2<f64>| 1.0 - q.z.norm_sqr();
        assert!(!submean_test(&u, &ComplexPoint2::default(), 0.1, 1, 64, None).unwrap());
    }

    #[test]
    fn zero_center_is_vacuous() {
        let u = |q: &ComplexPoint2<f64>| q.z.norm_sqr();
        assert!(submean_test(&u, &ComplexPoint2::default(), 0.1, 4, 32, None).unwrap());
    }

    #[test]
    fn witness_seam_points_pass() {
        let w = SibonyWitness::new(0.01, 2).unwrap();
        let d = EggRingDomain::new(2).unwrap();
        let u = |x: &ComplexPoint2<f64>| w.value_unchecked(x);
        use crate::candidate::AdmissibleCandidate;
        let probes = w.seam_probes(20, 1);
        assert!(!probes.is_empty());
        for q in probes {
            let r = (0.01f64 / 100.0).min(0.5 * q.w.norm());
            assert!(submean_test(&u, &q, r, 8, 64, Some(&d)).unwrap());
        }
    }

    #[test]
    fn disc_leaving_domain_is_an_error() {
        let d = EggRingDomain::new(2).unwrap();
        let u = |q: &ComplexPoint2<f64>| q.z.norm_sqr();
        assert!(submean_test(&u, &ComplexPoint2::real(0.51, 0.0), 0.05, 2, 16, Some(&d)).is_err());
    }
}
