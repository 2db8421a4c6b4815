use crate::bound::Metric;
use crate::error::{MetricsError, Result};
use crate::geometry::{EggRingDomain, LineSearchOptions, TangentVector2};
use crate::kobayashi::{DiscSearchConfig, MIN_SEARCH_BUDGET};
use crate::scalar::Scalar;

pub const DEFAULT_STEPS_PER_DECADE: usize = 16;
pub const MIN_SWEEP_STEPS: usize = 4;

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig<T> {
    pub m: u32,
    pub delta_min: T,
    pub delta_max: T,
    /// Number of log-spaced δ values, endpoints included.
    pub steps: usize,
    pub metrics: Vec<Metric>,
    pub directions: Vec<TangentVector2<T>>,
    pub disc: DiscSearchConfig<T>,
    pub line: LineSearchOptions<T>,
    pub seed: u64,
}

impl<T: Scalar> Default for SweepConfig<T> {
    fn default() -> Self {
        let (delta_min, delta_max) = (T::lit(1e-4), T::lit(1e-2));
        Self {
            m: 2,
            delta_min,
            delta_max,
            steps: steps_for_range(delta_min, delta_max, DEFAULT_STEPS_PER_DECADE),
            metrics: Metric::ALL.to_vec(),
            directions: vec![TangentVector2::normal()],
            disc: DiscSearchConfig::default(),
            line: LineSearchOptions::default(),
            seed: 0,
        }
    }
}

/// Point count giving `per_decade` points per factor of ten, endpoints
/// included, and never fewer than the sweep minimum.
pub fn steps_for_range<T: Scalar>(delta_min: T, delta_max: T, per_decade: usize) -> usize {
    let decades = (delta_max / delta_min).log10().to_f64_lossy();
    let steps = (decades * per_decade as f64).round() as usize + 1;
    steps.max(MIN_SWEEP_STEPS)
}

impl<T: Scalar> SweepConfig<T> {
    pub fn validate(&self) -> Result<()> {
        EggRingDomain::<T>::new(self.m)?;
        let lo = T::lit(1e-6);
        let hi = T::lit(0.2);
        if !(self.delta_min >= lo && self.delta_min < self.delta_max && self.delta_max <= hi) {
            return Err(MetricsError::Config(format!(
                "need 1e-6 <= delta_min < delta_max <= 0.2, got [{}, {}]",
                self.delta_min, self.delta_max
            )));
        }
        if self.steps < MIN_SWEEP_STEPS {
            return Err(MetricsError::Config(format!("steps must be at least {MIN_SWEEP_STEPS}, got {}", self.steps)));
        }
        if self.metrics.is_empty() {
            return Err(MetricsError::Config("no metrics requested".into()));
        }
        if self.directions.is_empty() {
            return Err(MetricsError::Config("no directions requested".into()));
        }
        for xi in &self.directions {
            if !xi.is_finite() {
                return Err(MetricsError::Config("direction components must be finite".into()));
            }
            if xi.is_zero() {
                return Err(MetricsError::Config("the zero direction carries no information".into()));
            }
        }
        if self.disc.budget < MIN_SEARCH_BUDGET {
            return Err(MetricsError::Config(format!(
                "disc search budget {} is below the minimum of {MIN_SEARCH_BUDGET}",
                self.disc.budget
            )));
        }
        Ok(())
    }

    pub fn wants(&self, metric: Metric) -> bool {
        self.metrics.contains(&metric)
    }

    /// The log-spaced δ values from `delta_min` to `delta_max` inclusive.
    pub fn delta_grid(&self) -> Vec<T> {
        log_grid(self.delta_min, self.delta_max, self.steps)
    }
}

pub fn log_grid<T: Scalar>(lo: T, hi: T, steps: usize) -> Vec<T> {
    if steps < 2 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    let last = T::from_count(steps - 1);
    (0..steps)
        .map(|k| match k {
            0 => lo,
            k if k == steps - 1 => hi,
            k => (a + (b - a) * T::from_count(k) / last).exp(),
        })
        .collect()
}
