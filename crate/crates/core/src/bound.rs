//! A single metric estimate at `P_δ` in a fixed direction.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::geometry::TangentVector2;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Caratheodory,
    Kobayashi,
    Sibony,
}

impl Metric {
    pub const ALL: [Metric; 3] = [Metric::Caratheodory, Metric::Kobayashi, Metric::Sibony];

    pub fn name(&self) -> &'static str {
        match self {
            Metric::Caratheodory => "caratheodory",
            Metric::Kobayashi => "kobayashi",
            Metric::Sibony => "sibony",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "caratheodory" | "carathéodory" | "c" => Some(Metric::Caratheodory),
            "kobayashi" | "k" => Some(Metric::Kobayashi),
            "sibony" | "s" => Some(Metric::Sibony),
            _ => None,
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Exact,
    Lower,
    Upper,
}

impl BoundKind {
    pub fn name(&self) -> &'static str {
        match self {
            BoundKind::Exact => "exact",
            BoundKind::Lower => "lower",
            BoundKind::Upper => "upper",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "exact" => Some(BoundKind::Exact),
            "lower" => Some(BoundKind::Lower),
            "upper" => Some(BoundKind::Upper),
            _ => None,
        }
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Method tags attached to bounds.
pub mod method {
    pub const HULL_MOBIUS: &str = "hull-mobius";
    pub const LEMMA4_LINE: &str = "lemma4-line";
    pub const PSH_WITNESS: &str = "psh-witness";
    /// Lower bound in a direction for which no matching upper bound exists.
    pub const PSH_WITNESS_NO_UPPER: &str = "psh-witness-no-upper";
    pub const BETA_SPLIT: &str = "beta-split";
    pub const EQ6_CHAIN: &str = "eq6-chain";
    pub const DISC_SEARCH: &str = "disc-search";
    pub const LOCALIZED_WITNESS: &str = "localized-witness";
}

/// One estimate of a metric: value, whether it is a lower bound, an upper
/// bound or exact, and how it was obtained.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricBound<T> {
    pub metric: Metric,
    pub kind: BoundKind,
    pub value: T,
    pub method: String,
    pub delta: T,
    pub direction: TangentVector2<T>,
}

impl<T: Scalar> MetricBound<T> {
    pub fn new(
        metric: Metric,
        kind: BoundKind,
        value: T,
        method: impl Into<String>,
        delta: T,
        direction: TangentVector2<T>,
    ) -> Self {
        debug_assert!(value >= T::zero() && value.is_finite(), "metric value {value} must be finite and non-negative");
        Self { metric, kind, value, method: method.into(), delta, direction }
    }
}
