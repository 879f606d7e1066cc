//! Exact fixed-point verification on finite digital metric spaces.
//!
//! A digital image is a finite subset of `Z^n` with a `c_u` adjacency. On top
//! of it sit metrics ([`metric`]), self-maps ([`mapkit`]), contractive
//! conditions ([`contracts`]), theorem verifiers ([`fixpoint`]) and bounded
//! exhaustive search ([`search`]).
//!
//! Everything distance-valued is generic over [`Scalar`]. [`Surd`] is exact
//! for the l_1, l_2 and shortest-path metrics; `f64` and `f32` cover general
//! l_p with a fixed tolerance.
//!
//! ```
//! use std::sync::Arc;
//! use digitop::{DigitalImage, DigitalMetricSpace, MetricSpec, SelfMap};
//!
//! let img = Arc::new(DigitalImage::interval(0, 2).unwrap());
//! let space = DigitalMetricSpace::new(Arc::clone(&img), MetricSpec::l1()).unwrap();
//! let halve = SelfMap::from_indices(Arc::clone(&img), vec![0, 0, 1]).unwrap();
//! let report = digitop::fixpoint::banach_verify::<digitop::Surd>(&space, &halve).unwrap();
//! // d(f1, f2) = d(1, 2): not a contraction.
//! assert!(!report.hypothesis.holds);
//! ```

pub mod contracts;
pub mod error;
pub mod fixpoint;
pub mod mapkit;
pub mod metric;
pub mod scalar;
pub mod search;
pub mod space;
pub mod surd;

pub use contracts::{ConditionKind, ConditionReport, ConstantRatio, MinimalConstant, Witness};
pub use error::{Error, Result};
pub use fixpoint::{TheoremReport, TheoremVerdict};
pub use mapkit::{OrbitClass, OrbitReport, SelfMap};
pub use metric::{DigitalMetricSpace, MetricSpec};
pub use scalar::{Rational, Scalar};
pub use search::{AssertionId, SearchOutcome, SuiteReport};
pub use space::{Adjacency, DigitalImage, Point};
pub use surd::Surd;

/// Condition report with exact distances.
pub type ExactReport = ConditionReport<Surd>;
/// Condition report with `f64` distances.
pub type FloatReport = ConditionReport<f64>;
/// Theorem report with exact distances.
pub type ExactTheoremReport = TheoremReport<Surd>;
/// Theorem report with `f64` distances.
pub type FloatTheoremReport = TheoremReport<f64>;
