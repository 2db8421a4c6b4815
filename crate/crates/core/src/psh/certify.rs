use std::fmt;

use rayon::prelude::*;

use crate::candidate::AdmissibleCandidate;
use crate::error::{MetricsError, Result};
use crate::geometry::{ComplexPoint2, EggRingDomain};
use crate::lowdisc::Halton;
use crate::psh::hessian::fd_complex_hessian;
use crate::psh::submean::submean_test;
use crate::scalar::Scalar;

pub const MIN_CERTIFY_SAMPLES: usize = 10_000;

#[derive(Clone, Debug, PartialEq)]
pub struct CertifyConfig<T> {
    pub samples: usize,
    pub seed: u64,
    /// Accepted negative eigenvalue of the finite-difference Hessian.
    pub eigen_tolerance: T,
    /// Upper limit on the finite-difference step.
    pub max_step: T,
    /// Step as a fraction of the candidate's local scale.
    pub relative_step: T,
    /// Points within `seam_factor·h` of a seam get the sub-mean test instead
    /// of the Hessian.
    pub seam_factor: T,
    /// Share of samples drawn from the candidate's focus region.
    pub focus_fraction: f64,
    pub submean_lines: usize,
    pub submean_angles: usize,
    /// Every `submean_stride`-th smooth sample is also given the sub-mean test.
    pub submean_stride: usize,
    pub seam_probes: usize,
    /// Minimum acceptance rate of the rejection sampler.
    pub min_acceptance: f64,
    pub base_tolerance: T,
}

impl<T: Scalar> Default for CertifyConfig<T> {
    fn default() -> Self {
        Self {
            samples: MIN_CERTIFY_SAMPLES,
            seed: 0,
            eigen_tolerance: T::lit(1e-6),
            max_step: T::lit(1e-4),
            relative_step: T::lit(1e-3),
            seam_factor: T::lit(10.0),
            focus_fraction: 0.5,
            submean_lines: 6,
            submean_angles: 64,
            submean_stride: 10,
            seam_probes: 256,
            min_acceptance: 0.01,
            base_tolerance: T::lit(1e-12),
        }
    }
}

impl<T: Scalar> CertifyConfig<T> {
    pub fn with_samples(samples: usize, seed: u64) -> Self {
        Self { samples, seed, ..Self::default() }
    }
}

/// Outcome of the numerical admissibility check.
#[derive(Clone, Debug, PartialEq)]
pub struct PshCertificate<T> {
    pub tag: String,
    pub min_eigenvalue_seen: T,
    pub worst_point: ComplexPoint2<T>,
    pub points_checked: usize,
    pub hessians_checked: usize,
    pub seam_points_skipped: usize,
    pub boundary_points_skipped: usize,
    pub submean_checked: usize,
    pub submean_failures: usize,
    pub range_ok: bool,
    pub min_value: T,
    pub max_value: T,
    pub base_value_ok: bool,
    pub base_value: T,
    pub tolerance: T,
    pub acceptance_rate: f64,
}

impl<T: Scalar> PshCertificate<T> {
    pub fn hessian_ok(&self) -> bool {
        self.min_eigenvalue_seen >= -self.tolerance
    }

    pub fn submean_ok(&self) -> bool {
        self.submean_failures == 0
    }

    pub fn passes(&self) -> bool {
        self.hessian_ok() && self.range_ok && self.base_value_ok && self.submean_ok()
    }
}

impl<T: Scalar> fmt::Display for PshCertificate<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passes() { "PASS" } else { "FAIL" };
        writeln!(f, "candidate             {}", self.tag)?;
        writeln!(f, "verdict               {verdict}")?;
        writeln!(f, "points checked        {}", self.points_checked)?;
        writeln!(f, "acceptance rate       {:.4}", self.acceptance_rate)?;
        writeln!(f, "range [0, 1]          {} (min {:e}, max {:e})", ok(self.range_ok), self.min_value, self.max_value)?;
        writeln!(f, "base value            {} ({:e})", ok(self.base_value_ok), self.base_value)?;
        writeln!(
            f,
            "hessian min eigenvalue {} ({:e} >= -{:e}, {} hessians)",
            ok(self.hessian_ok()),
            self.min_eigenvalue_seen,
            self.tolerance,
            self.hessians_checked
        )?;
        writeln!(
            f,
            "worst point           ({}, {})",
            fmt_complex(self.worst_point.z),
            fmt_complex(self.worst_point.w)
        )?;
        writeln!(f, "seam points skipped   {}", self.seam_points_skipped)?;
        writeln!(f, "boundary skipped      {}", self.boundary_points_skipped)?;
        write!(
            f,
            "sub-mean tests        {} ({} run, {} failed)",
            ok(self.submean_ok()),
            self.submean_checked,
            self.submean_failures
        )
    }
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "VIOLATED"
    }
}

fn fmt_complex<T: Scalar>(c: num_complex::Complex<T>) -> String {
    format!("{}{:+}i", c.re, c.im)
}

#[derive(Clone, Copy, Debug, Default)]
struct Outcome<T> {
    value: T,
    eigen: Option<T>,
    seam_skipped: bool,
    boundary_skipped: bool,
    submean: Option<bool>,
}

/// Rejection-samples `count` points of the domain from quasi-random points,
/// part of them from the candidate's focus box.
fn sample_domain<T: Scalar, C: AdmissibleCandidate<T>>(
    candidate: &C,
    domain: &EggRingDomain<T>,
    config: &CertifyConfig<T>,
) -> Result<(Vec<ComplexPoint2<T>>, f64)> {
    let count = config.samples;
    let focus = candidate.focus();
    let focus_target = match focus {
        Some(_) => ((count as f64) * config.focus_fraction.clamp(0.0, 1.0)).round() as usize,
        None => 0,
    };
    let max_attempts = ((count as f64) / config.min_acceptance).ceil() as usize + 1;
    let mut points = Vec::with_capacity(count);
    let mut attempts = 0usize;

    if let Some(region) = focus {
        let mut stream = Halton::<4>::new(config.seed ^ 0xf0c5);
        let mut taken = 0;
        while taken < focus_target && attempts < max_attempts {
            attempts += 1;
            let u = stream.next_point();
            let c = region.center;
            let x = [
                c.z.re + region.half_width_z * T::lit(2.0 * u[0] - 1.0),
                c.z.im + region.half_width_z * T::lit(2.0 * u[1] - 1.0),
                c.w.re + region.half_width_w * T::lit(2.0 * u[2] - 1.0),
                c.w.im + region.half_width_w * T::lit(2.0 * u[3] - 1.0),
            ];
            let q = ComplexPoint2::from_real4(x);
            if domain.contains(&q, T::zero()) {
                points.push(q);
                taken += 1;
            }
        }
    }
    let mut stream = Halton::<4>::new(config.seed);
    while points.len() < count && attempts < max_attempts {
        attempts += 1;
        let u = stream.next_point();
        let q = ComplexPoint2::from_real4(u.map(|t| T::lit(2.0 * t - 1.0)));
        if domain.contains(&q, T::zero()) {
            points.push(q);
        }
    }
    let rate = points.len() as f64 / attempts.max(1) as f64;
    if points.len() < count || rate < config.min_acceptance {
        return Err(MetricsError::DomainSampling { rate, min: config.min_acceptance });
    }
    Ok((points, rate))
}

fn submean_with_shrink<T: Scalar>(
    u: &impl Fn(&ComplexPoint2<T>) -> T,
    q: &ComplexPoint2<T>,
    radius: T,
    domain: &EggRingDomain<T>,
    config: &CertifyConfig<T>,
) -> Option<bool> {
    let mut r = radius;
    for _ in 0..8 {
        match submean_test(u, q, r, config.submean_lines, config.submean_angles, Some(domain)) {
            Ok(pass) => return Some(pass),
            Err(_) => r = r / T::lit(2.0),
        }
    }
    None
}

fn check_point<T: Scalar, C: AdmissibleCandidate<T>>(
    candidate: &C,
    domain: &EggRingDomain<T>,
    config: &CertifyConfig<T>,
    q: &ComplexPoint2<T>,
    extra_submean: bool,
) -> Outcome<T> {
    let u = |x: &ComplexPoint2<T>| candidate.value(x);
    let mut out = Outcome { value: u(q), ..Outcome::default() };
    let h = config.max_step.min(config.relative_step * candidate.local_scale(q));
    if !(h > T::zero() && h.is_finite()) {
        out.boundary_skipped = true;
        return out;
    }
    let band = config.seam_factor * h;
    if candidate.seam_distance(q) < band {
        out.seam_skipped = true;
        out.submean = submean_with_shrink(&u, q, band + band, domain, config);
        if out.submean.is_none() {
            out.boundary_skipped = true;
        }
        return out;
    }
    let mut step = h;
    for _ in 0..3 {
        match fd_complex_hessian(&u, q, step, Some(domain)) {
            Ok(hess) => {
                out.eigen = Some(hess.min_eigenvalue());
                break;
            }
            Err(_) => step = step / T::lit(4.0),
        }
    }
    if out.eigen.is_none() {
        out.boundary_skipped = true;
    }
    if extra_submean {
        out.submean = submean_with_shrink(&u, q, band, domain, config);
    }
    out
}

/// Numerically certifies that `candidate` is admissible at its base point:
/// values in `[0, 1]` on quasi-random points of the domain, a zero at the
/// base point, a positive semidefinite finite-difference complex Hessian
/// away from declared seams, and the sub-mean-value property of `log U` at
/// seam points. Deterministic for a fixed seed.
pub fn certify_admissible<T: Scalar, C: AdmissibleCandidate<T>>(
    candidate: &C,
    domain: &EggRingDomain<T>,
    config: &CertifyConfig<T>,
) -> Result<PshCertificate<T>> {
    if config.samples < MIN_CERTIFY_SAMPLES {
        return Err(MetricsError::Config(format!(
            "certification needs at least {MIN_CERTIFY_SAMPLES} samples, got {}",
            config.samples
        )));
    }
    let (points, acceptance_rate) = sample_domain(candidate, domain, config)?;
    let stride = config.submean_stride.max(1);

    let outcomes: Vec<Outcome<T>> = points
        .par_iter()
        .enumerate()
        .map(|(i, q)| check_point(candidate, domain, config, q, i % stride == 0))
        .collect();

    let probes: Vec<ComplexPoint2<T>> = candidate
        .seam_probes(config.seam_probes, config.seed)
        .into_iter()
        .filter(|q| domain.contains(q, T::zero()))
        .collect();
    let probe_results: Vec<Option<bool>> = probes
        .par_iter()
        .map(|q| {
            let u = |x: &ComplexPoint2<T>| candidate.value(x);
            let h = config.max_step.min(config.relative_step * candidate.local_scale(q));
            let radius = T::lit(2.0) * config.seam_factor * h;
            if !(radius > T::zero()) {
                return None;
            }
            submean_with_shrink(&u, q, radius, domain, config)
        })
        .collect();

    let base_value = candidate.value(&candidate.base());
    let mut cert = PshCertificate {
        tag: candidate.tag().to_string(),
        min_eigenvalue_seen: T::infinity(),
        worst_point: candidate.base(),
        points_checked: points.len(),
        hessians_checked: 0,
        seam_points_skipped: 0,
        boundary_points_skipped: 0,
        submean_checked: 0,
        submean_failures: 0,
        range_ok: true,
        min_value: T::infinity(),
        max_value: T::neg_infinity(),
        base_value_ok: base_value.abs() <= config.base_tolerance,
        base_value,
        tolerance: config.eigen_tolerance,
        acceptance_rate,
    };
    let upper = T::one() + T::lit(1e-12);
    for (q, o) in points.iter().zip(&outcomes) {
        if !(o.value.is_finite() && o.value >= T::zero() && o.value <= upper) {
            cert.range_ok = false;
        }
        cert.min_value = cert.min_value.min(o.value);
        cert.max_value = cert.max_value.max(o.value);
        if let Some(e) = o.eigen {
            cert.hessians_checked += 1;
            if e < cert.min_eigenvalue_seen {
                cert.min_eigenvalue_seen = e;
                cert.worst_point = *q;
            }
        }
        cert.seam_points_skipped += o.seam_skipped as usize;
        cert.boundary_points_skipped += o.boundary_skipped as usize;
        if let Some(pass) = o.submean {
            cert.submean_checked += 1;
            cert.submean_failures += (!pass) as usize;
        }
    }
    for pass in probe_results.into_iter().flatten() {
        cert.submean_checked += 1;
        cert.submean_failures += (!pass) as usize;
    }
    if cert.hessians_checked == 0 {
        cert.min_eigenvalue_seen = T::zero();
    }
    Ok(cert)
}
