use rayon::prelude::*;

use crate::bound::{method, BoundKind, Metric, MetricBound};
use crate::caratheodory::{caratheodory_ring, lemma4_value, Lemma4Value};
use crate::error::{MetricsError, Result};
use crate::geometry::{BasePoint, EggRingDomain, TangentVector2};
use crate::kobayashi::{kobayashi_lower, kobayashi_upper_disc, DiscSearchOutcome};
use crate::scalar::Scalar;
use crate::sibony::{sibony_lower, sibony_upper};
use crate::sweep::config::SweepConfig;
use crate::sweep::record::{sort_records, SweepRecord};

/// Whether `ξ = (a, 0)`, the family for which the closed-form Sibony upper
/// bound and the disc search apply (after scaling by `|a|`).
fn is_normal<T: Scalar>(xi: &TangentVector2<T>) -> bool {
    xi.xi_w.norm_sqr() == T::zero() && xi.xi_z.norm_sqr() > T::zero()
}

fn scaled<T: Scalar>(bound: MetricBound<T>, xi: &TangentVector2<T>) -> MetricBound<T> {
    let factor = xi.xi_z.norm();
    MetricBound { value: bound.value * factor, direction: *xi, ..bound }
}

struct PointContext<'a, T> {
    cfg: &'a SweepConfig<T>,
    domain: &'a EggRingDomain<T>,
    delta: T,
    disc: Option<Result<DiscSearchOutcome<T>>>,
}

impl<T: Scalar> PointContext<'_, T> {
    fn fail(&self, metric: Metric, kind: BoundKind, tag: &str, xi: &TangentVector2<T>, e: impl ToString) -> SweepRecord<T> {
        SweepRecord::failed(self.cfg.m, self.delta, metric, kind, tag, *xi, e)
    }

    fn ok(&self, bound: MetricBound<T>) -> SweepRecord<T> {
        SweepRecord::from_bound(self.cfg.m, bound)
    }

    fn disc(&mut self, base: &BasePoint<T>) -> &Result<DiscSearchOutcome<T>> {
        let (domain, cfg) = (self.domain, self.cfg);
        self.disc.get_or_insert_with(|| kobayashi_upper_disc(domain, base, &cfg.disc))
    }

    fn direction(&mut self, base: &BasePoint<T>, xi: &TangentVector2<T>, out: &mut Vec<SweepRecord<T>>) {
        let (cfg, domain) = (self.cfg, self.domain);
        let lemma4: Option<Lemma4Value<T>> = match lemma4_value(domain, base, xi, &cfg.line) {
            Ok(v) => Some(v),
            Err(MetricsError::NotApplicable(_)) => None,
            Err(e) => {
                for metric in Metric::ALL.into_iter().filter(|m| cfg.wants(*m)) {
                    out.push(self.fail(metric, BoundKind::Exact, method::LEMMA4_LINE, xi, &e));
                }
                return;
            }
        };

        if cfg.wants(Metric::Caratheodory) {
            out.push(match caratheodory_ring(domain, base, xi) {
                Ok(b) => self.ok(b),
                Err(e) => self.fail(Metric::Caratheodory, BoundKind::Exact, method::HULL_MOBIUS, xi, e),
            });
        }

        if cfg.wants(Metric::Sibony) {
            match &lemma4 {
                Some(v) => out.push(self.ok(v.bound(Metric::Sibony))),
                None => {
                    out.push(self.ok(sibony_lower(domain, base, xi)));
                    if is_normal(xi) {
                        out.push(self.ok(scaled(sibony_upper(domain, base), xi)));
                    }
                }
            }
        }

        if cfg.wants(Metric::Kobayashi) {
            match &lemma4 {
                Some(v) => out.push(self.ok(v.bound(Metric::Kobayashi))),
                None => {
                    out.push(match kobayashi_lower(domain, base, xi) {
                        Ok(b) => self.ok(b),
                        Err(e) => self.fail(Metric::Kobayashi, BoundKind::Lower, method::EQ6_CHAIN, xi, e),
                    });
                    if is_normal(xi) {
                        let record = match self.disc(base) {
                            Ok(o) => Ok(scaled(o.bound.clone(), xi)),
                            Err(e) => Err(e.clone()),
                        };
                        out.push(match record {
                            Ok(b) => self.ok(b),
                            Err(e) => self.fail(Metric::Kobayashi, BoundKind::Upper, method::DISC_SEARCH, xi, e),
                        });
                    }
                }
            }
        }
    }
}

fn records_at<T: Scalar>(cfg: &SweepConfig<T>, domain: &EggRingDomain<T>, delta: T) -> Vec<SweepRecord<T>> {
    let mut out = Vec::new();
    let mut ctx = PointContext { cfg, domain, delta, disc: None };
    let base = match BasePoint::new(delta) {
        Ok(b) => b,
        Err(e) => {
            for xi in &cfg.directions {
                for metric in Metric::ALL.into_iter().filter(|m| cfg.wants(*m)) {
                    out.push(ctx.fail(metric, BoundKind::Exact, "base-point", xi, &e));
                }
            }
            return out;
        }
    };
    for xi in &cfg.directions {
        ctx.direction(&base, xi, &mut out);
    }
    out
}

/// Evaluates every requested bound at every δ of the sweep grid.
///
/// δ values run in parallel; the output is sorted by δ, metric, kind,
/// direction and method, so it does not depend on scheduling. Failures of
/// individual bounds are recorded in their rows and do not abort the sweep.
pub fn run_sweep<T: Scalar>(cfg: &SweepConfig<T>) -> Result<Vec<SweepRecord<T>>> {
    cfg.validate()?;
    let domain = EggRingDomain::new(cfg.m)?;
    let mut records: Vec<SweepRecord<T>> =
        cfg.delta_grid().into_par_iter().flat_map_iter(|delta| records_at(cfg, &domain, delta)).collect();
    sort_records(&mut records);
    Ok(records)
}

/// All bounds at a single δ, in output order.
pub fn bounds_at_point<T: Scalar>(cfg: &SweepConfig<T>, delta: T) -> Result<Vec<SweepRecord<T>>> {
    let domain = EggRingDomain::new(cfg.m)?;
    BasePoint::new(delta)?;
    let mut records = records_at(cfg, &domain, delta);
    sort_records(&mut records);
    Ok(records)
}
