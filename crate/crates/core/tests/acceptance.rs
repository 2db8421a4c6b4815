//! End-to-end acceptance checks. Each test prints one `criterion N: PASS`
//! or `criterion N: FAIL` line (visible with `--nocapture`) and fails on FAIL.

use std::sync::OnceLock;

use invariant_metrics::bound::{method, BoundKind, Metric};
use invariant_metrics::caratheodory::{caratheodory_ring, lemma4_value};
use invariant_metrics::candidate::AdmissibleCandidate;
use invariant_metrics::geometry::{
    line_misses_inner, pushforward_norm, BasePoint, ComplexPoint2, EggRingDomain, LineSearchOptions, TangentVector2,
};
use invariant_metrics::kobayashi::{max_lambda, tangential_crosscheck, DiscSearchConfig, TANGENTIAL_TOLERANCE};
use invariant_metrics::hermitian::HermitianForm2;
use invariant_metrics::lowdisc::Halton;
use invariant_metrics::psh::{certify_admissible, CertifyConfig};
use invariant_metrics::sibony::{
    beta_threshold, localize_admissible, minimal_shift, sibony_lower, subadditive_bound, witness_f, SibonyWitness,
    WitnessBranch,
};
use invariant_metrics::sweep::{
    check_ordering, fit_exponent, log_grid, run_sweep, separation, sibony_crossover, SweepConfig, SweepRecord,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn report(n: u32, check: Check) {
    match check {
        Ok(detail) => println!("criterion {n}: PASS ({detail})"),
        Err(why) => {
            println!("criterion {n}: FAIL ({why})");
            panic!("criterion {n} failed: {why}");
        }
    }
}

fn ensure(ok: bool, why: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(why())
    }
}

fn group(records: &[SweepRecord<f64>], metric: Metric, kind: BoundKind) -> Vec<SweepRecord<f64>> {
    records.iter().filter(|r| r.is_ok() && r.metric == metric && r.kind == kind).cloned().collect()
}

fn slope(records: &[SweepRecord<f64>], metric: Metric, kind: BoundKind) -> Result<f64, String> {
    fit_exponent(&group(records, metric, kind)).map(|f| f.slope).map_err(|e| e.to_string())
}

/// Full normal-direction sweeps over `[1e-5, 1e-2]`, four points per
/// decade, shared by the disc-search and ordering criteria.
fn full_sweep(m: u32) -> &'static [SweepRecord<f64>] {
    static M2: OnceLock<Vec<SweepRecord<f64>>> = OnceLock::new();
    static M3: OnceLock<Vec<SweepRecord<f64>>> = OnceLock::new();
    let cell = match m {
        2 => &M2,
        3 => &M3,
        _ => unreachable!(),
    };
    cell.get_or_init(|| {
        let cfg = SweepConfig { m, delta_min: 1e-5, delta_max: 1e-2, steps: 13, ..SweepConfig::default() };
        run_sweep(&cfg).expect("sweep runs")
    })
}

#[test]
fn criterion_1_caratheodory_is_exact_and_flat() {
    let check = || -> Check {
        let mut worst = 0.0f64;
        for m in [2u32, 3, 4, 8] {
            let d = EggRingDomain::new(m).unwrap();
            for delta in log_grid(1e-6, 0.2, 40) {
                let b = BasePoint::new(delta).unwrap();
                let p: f64 = 0.5 + delta;
                for (a, c) in [(1.0f64, 0.0f64), (0.6, -0.8), (0.0, 2.0)] {
                    let xi = TangentVector2::real(a, c);
                    let got = caratheodory_ring(&d, &b, &xi).unwrap();
                    let oracle =
                        (a * a / ((1.0 - p * p) * (1.0 - p * p)) + c * c / (1.0 - p * p)).sqrt();
                    worst = worst.max((got.value - oracle).abs() / oracle);
                    ensure(got.kind == BoundKind::Exact, || "not tagged exact".into())?;
                }
            }
        }
        ensure(worst <= 1e-12, || format!("relative error {worst:e}"))?;
        let cfg = SweepConfig {
            delta_min: 1e-5,
            delta_max: 1e-2,
            steps: 32,
            metrics: vec![Metric::Caratheodory],
            ..SweepConfig::default()
        };
        let s = slope(&run_sweep(&cfg).unwrap(), Metric::Caratheodory, BoundKind::Exact)?;
        ensure(s.abs() < 0.01, || format!("slope {s}"))?;
        Ok(format!("max relative error {worst:.1e}, slope {s:.2e}"))
    };
    report(1, check());
}

#[test]
fn criterion_2_sibony_lower_exponent() {
    let check = || -> Check {
        let d = EggRingDomain::new(2).unwrap();
        let at: f64 = sibony_lower(&d, &BasePoint::new(0.01).unwrap(), &TangentVector2::normal()).value;
        ensure((at - 0.353_553_4f64).abs() < 1e-7, || format!("value at 0.01 is {at}"))?;
        let mut slopes = Vec::new();
        for m in [2u32, 3, 4] {
            let cfg = SweepConfig {
                m,
                delta_min: 1e-5,
                delta_max: 1e-2,
                steps: 32,
                metrics: vec![Metric::Sibony],
                ..SweepConfig::default()
            };
            let s = slope(&run_sweep(&cfg).unwrap(), Metric::Sibony, BoundKind::Lower)?;
            let want = -(1.0 - 1.0 / m as f64);
            ensure((s - want).abs() < 1e-9, || format!("m {m}: slope {s}, expected {want}"))?;
            slopes.push(format!("m={m}: {s:.6}"));
        }
        Ok(slopes.join(", "))
    };
    report(2, check());
}

#[test]
fn criterion_3_witness_is_certified() {
    let check = || -> Check {
        let mut worst_eig = f64::INFINITY;
        for m in [2u32, 3, 4] {
            let d = EggRingDomain::new(m).unwrap();
            for delta in [1e-2f64, 1e-3, 1e-4] {
                let w = SibonyWitness::new(delta, m).unwrap();
                let cert = certify_admissible(&w, &d, &CertifyConfig::with_samples(10_000, 1)).map_err(|e| e.to_string())?;
                ensure(cert.passes(), || format!("m {m} delta {delta}:\n{cert}"))?;
                worst_eig = worst_eig.min(cert.min_eigenvalue_seen);

                // f stays below 5 δ^{2/m} next to the inner circle.
                let scale = delta.powf(2.0 / m as f64);
                let inner = (0.25 - delta / 9.0).sqrt();
                let mut h = Halton::<2>::new(2);
                for _ in 0..10_000 {
                    let u = h.next_point();
                    let z = Complex64::from_polar(inner + (1.0 - inner) * u[0] * u[0], std::f64::consts::TAU * u[1]);
                    let f = witness_f(z, delta, m).map_err(|e| e.to_string())?;
                    ensure(f <= 5.0 * scale, || format!("f({z}) = {f} above 5 delta^(2/m)"))?;
                }

                // The modulus branch is active on the patch ring.
                let (lo, hi) = ((delta / 16.0).powf(1.0 / m as f64), (delta / 9.0).powf(1.0 / m as f64));
                for k in 0..200 {
                    let t = k as f64 / 200.0;
                    let q = ComplexPoint2::new(
                        Complex64::from_polar(0.75, t * 6.0),
                        Complex64::from_polar(lo + (hi - lo) * t, t * 17.0),
                    );
                    ensure(w.branch(&q) == WitnessBranch::Patch, || format!("branch at {q:?}"))?;
                }
            }
        }
        Ok(format!("9 certificates, smallest Hessian eigenvalue seen {worst_eig:.3e}"))
    };
    report(3, check());
}

#[test]
fn criterion_4_sibony_upper_bound() {
    let check = || -> Check {
        let beta = beta_threshold(0.01f64, 2);
        ensure((beta - 5.0).abs() <= 5e-12, || format!("beta {beta}"))?;
        let opts = LineSearchOptions::default();
        // Bisection on |v| for the smallest slope whose line misses the egg.
        let (d2, b2) = (EggRingDomain::new(2).unwrap(), BasePoint::new(0.01).unwrap());
        let misses = |v: f64| line_misses_inner(&d2, &b2.point, &TangentVector2::real(1.0, v), &opts).unwrap();
        let (mut lo, mut hi) = (0.0, 2.0 * beta);
        ensure(misses(hi), || "no miss at 2 beta".into())?;
        for _ in 0..50 {
            let mid = 0.5 * (lo + hi);
            if misses(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        ensure(beta >= hi * (1.0 - 1e-9), || format!("beta {beta} below geometric threshold {hi}"))?;
        for m in [2u32, 3, 4] {
            let d = EggRingDomain::new(m).unwrap();
            for delta in [1e-2f64, 1e-3, 1e-4] {
                let b = BasePoint::new(delta).unwrap();
                let beta = beta_threshold(delta, m);
                for v in [beta, 1.5 * beta] {
                    let xi = TangentVector2::real(1.0, v);
                    let misses = line_misses_inner(&d, &b.point, &xi, &opts).map_err(|e| e.to_string())?;
                    ensure(misses, || format!("m {m} delta {delta}: line with |v| = {v} meets the egg"))?;
                }
            }
        }
        let mut summary = Vec::new();
        for m in [2u32, 3, 4] {
            let cfg = SweepConfig {
                m,
                delta_min: 1e-5,
                delta_max: 1e-2,
                steps: 32,
                metrics: vec![Metric::Sibony],
                ..SweepConfig::default()
            };
            let records = run_sweep(&cfg).unwrap();
            let s = slope(&records, Metric::Sibony, BoundKind::Upper)?;
            let want = -(1.0 - 1.0 / m as f64);
            ensure((s - want).abs() <= 0.02, || format!("m {m}: upper slope {s}, expected {want}"))?;
            let lower = group(&records, Metric::Sibony, BoundKind::Lower);
            let upper = group(&records, Metric::Sibony, BoundKind::Upper);
            for (l, u) in lower.iter().zip(&upper) {
                ensure(l.delta == u.delta, || "misaligned records".into())?;
                let ratio = u.value / l.value;
                ensure((1.0..100.0).contains(&ratio), || format!("m {m} delta {}: ratio {ratio}", l.delta))?;
            }
            summary.push(format!("m={m}: {s:.4}"));
        }
        Ok(format!("geometric threshold {hi:.4} <= beta 5, upper slopes {}", summary.join(", ")))
    };
    report(4, check());
}

#[test]
fn criterion_5_kobayashi_disc_exponent() {
    let check = || -> Check {
        let mut summary = Vec::new();
        for (m, lo, hi) in [(2u32, -0.80, -0.70), (3, -0.89, -0.78)] {
            let records = full_sweep(m);
            let upper = group(records, Metric::Kobayashi, BoundKind::Upper);
            ensure(upper.iter().all(|r| r.method == method::DISC_SEARCH), || "unexpected method".into())?;
            ensure(upper.len() == 13, || format!("m {m}: {} disc bounds", upper.len()))?;
            let s = slope(records, Metric::Kobayashi, BoundKind::Upper)?;
            ensure((lo..=hi).contains(&s), || format!("m {m}: slope {s} outside [{lo}, {hi}]"))?;
            summary.push(format!("m={m}: {s:.4}"));
        }
        let d = EggRingDomain::new(2).unwrap();
        for delta in [1e-2f64, 1e-3, 1e-4] {
            let b = BasePoint::new(delta).unwrap();
            let l = max_lambda(&d, &b, 0.0, &DiscSearchConfig::default()).map_err(|e| e.to_string())?;
            ensure(l <= delta && l >= 0.999 * delta, || format!("delta {delta}: linear lambda {l}"))?;
        }
        Ok(format!("slopes {}", summary.join(", ")))
    };
    report(5, check());
}

#[test]
fn criterion_6_ordering_and_separation() {
    let check = || -> Check {
        for m in [2u32, 3] {
            let v = check_ordering(full_sweep(m));
            ensure(v.is_empty(), || format!("m {m}: {} ordering violations, first {:?}", v.len(), v.first()))?;
        }
        let records = full_sweep(2);
        // S lower crosses C exactly at δ = 1/(800/(1 − p²)) on the analytic curve, near 7.0e-4.
        let star = sibony_crossover(records).ok_or("no crossover")?;
        let next = star * 10f64.powf(0.25);
        ensure(star < 7.1e-4 && next > 6.9e-4, || format!("crossover {star}"))?;
        let sep = separation(records);
        ensure(sep.separated, || format!("{sep:?}"))?;
        Ok(format!(
            "crossover at sampled delta {star:.3e}, K slope {:.3}, S slope {:.3}",
            sep.kobayashi_slope.unwrap(),
            sep.sibony_slope.unwrap()
        ))
    };
    report(6, check());
}

#[test]
fn criterion_7_subadditivity() {
    let check = || -> Check {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let mut c = || Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let mut cases = 0;
        for _ in 0..1000 {
            // A·A* for a random 2×2 complex A is positive semidefinite.
            let (a, b, e, f) = (c(), c(), c(), c());
            let h = HermitianForm2::new(a.norm_sqr() + b.norm_sqr(), e.norm_sqr() + f.norm_sqr(), a * e.conj() + b * f.conj());
            let x = TangentVector2::new(c(), c());
            let y = TangentVector2::new(c(), c());
            ensure(subadditive_bound(&h, &x, &y).map_err(|e| e.to_string())?, || format!("{h:?} {x:?} {y:?}"))?;
            cases += 1;
        }
        for m in [2u32, 3, 4] {
            for delta in [1e-2f64, 1e-3, 1e-4] {
                let h = SibonyWitness::new(delta, m).unwrap().hessian_at_base();
                let beta = beta_threshold(delta, m);
                let (a, b) = (TangentVector2::real(0.5, beta), TangentVector2::real(0.5, -beta));
                ensure(subadditive_bound(&h, &a, &b).map_err(|e| e.to_string())?, || "split fails".into())?;
                for _ in 0..112 {
                    let x = TangentVector2::new(c(), c());
                    let y = TangentVector2::new(c(), c());
                    ensure(subadditive_bound(&h, &x, &y).map_err(|e| e.to_string())?, || format!("{x:?} {y:?}"))?;
                    cases += 1;
                }
            }
        }
        Ok(format!("{cases} random cases plus the beta split"))
    };
    report(7, check());
}

#[test]
fn criterion_8_localization() {
    let check = || -> Check {
        let d = EggRingDomain::new(2).unwrap();
        let mut detail = Vec::new();
        for delta in [1e-2f64, 1e-3] {
            let w = SibonyWitness::new(delta, 2).unwrap();
            let q = w.base();
            let shift = minimal_shift(&q, 0.1);
            let loc = localize_admissible(&w, &d, q, 0.1, 1e-4, shift).map_err(|e| e.to_string())?;
            let cert = certify_admissible(&loc, &d, &CertifyConfig::with_samples(10_000, 5)).map_err(|e| e.to_string())?;
            ensure(cert.passes(), || format!("delta {delta}:\n{cert}"))?;
            let h = loc.hessian_at_center().ok_or("no centre Hessian")?;
            let orig = w.hessian_at_base();
            for xi in [TangentVector2::normal(), TangentVector2::tangential(), TangentVector2::real(0.3, -0.7)] {
                let (got, floor) = (h.quadratic(&xi), (-shift).exp() * orig.quadratic(&xi));
                ensure(got >= floor * (1.0 - 1e-6), || format!("{got} below {floor}"))?;
            }
            detail.push(format!("delta {delta:e}: shift {shift:.3}"));
        }
        Ok(detail.join(", "))
    };
    report(8, check());
}

#[test]
fn criterion_9_tangential_and_line_miss() {
    let check = || -> Check {
        let d = EggRingDomain::new(2).unwrap();
        let mut detail = Vec::new();
        for delta in [0.1f64, 0.01] {
            let b = BasePoint::new(delta).unwrap();
            let x = tangential_crosscheck(&d, &b, &DiscSearchConfig::default()).map_err(|e| e.to_string())?;
            ensure(x.within_tolerance && x.relative_deviation <= TANGENTIAL_TOLERANCE, || format!("{x:?}"))?;
            let l = lemma4_value(&d, &b, &TangentVector2::tangential(), &LineSearchOptions::default())
                .map_err(|e| e.to_string())?;
            let exact = pushforward_norm(b.p, &TangentVector2::tangential()).unwrap();
            ensure(l.value == exact, || format!("line-miss value {} vs {exact}", l.value))?;
            detail.push(format!("delta {delta}: deviation {:.2e}", x.relative_deviation));
        }
        Ok(detail.join(", "))
    };
    report(9, check());
}
