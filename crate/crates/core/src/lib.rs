//! Bounds on the Kobayashi, Carathéodory and Sibony metrics of the egg-ring
//! domain `Ω = B \ {|z|² + |w|^m ≤ 1/4}` near the inner boundary point
//! `P_δ = (1/2 + δ, 0)`.
//!
//! Everything numerical is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix `f64`, which the tolerances are tuned for.

// `!(x > y)` is used deliberately so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bound;
pub mod candidate;
pub mod caratheodory;
pub mod error;
pub mod geometry;
pub mod hermitian;
pub mod kobayashi;
pub mod lowdisc;
pub mod psh;
pub mod scalar;
pub mod sibony;
pub mod sweep;

pub use bound::{method, BoundKind, Metric, MetricBound};
pub use candidate::{AdmissibleCandidate, FnCandidate, FocusRegion};
pub use caratheodory::{caratheodory_ring, lemma4_value, Lemma4Value};
pub use error::{MetricsError, Result};
pub use geometry::{
    line_minimum, line_misses_inner, mobius, pushforward_norm, BasePoint, ComplexPoint2, EggRingDomain,
    LineSearchOptions, TangentVector2,
};
pub use hermitian::HermitianForm2;
pub use kobayashi::{kobayashi_lower, kobayashi_upper_disc, tangential_crosscheck, CandidateDisc, DiscSearchConfig};
pub use psh::{certify_admissible, CertifyConfig, PshCertificate};
pub use scalar::Scalar;
pub use sibony::{beta_threshold, localize_admissible, sibony_lower, sibony_upper, SibonyWitness};
pub use sweep::{fit_all, fit_exponent, run_sweep, ExponentFit, SweepConfig, SweepRecord};

pub type Complex64 = num_complex::Complex<f64>;
pub type Point = ComplexPoint2<f64>;
pub type Tangent = TangentVector2<f64>;
pub type Domain = EggRingDomain<f64>;
pub type Base = BasePoint<f64>;
pub type Bound = MetricBound<f64>;
pub type Hessian = HermitianForm2<f64>;
pub type Witness = SibonyWitness<f64>;
pub type Disc = CandidateDisc<f64>;
pub type DiscConfig = DiscSearchConfig<f64>;
pub type Certificate = PshCertificate<f64>;
pub type CertifyOptions = CertifyConfig<f64>;
pub type Sweep = SweepConfig<f64>;
pub type Record = SweepRecord<f64>;
pub type Fit = ExponentFit<f64>;
