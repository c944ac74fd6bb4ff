//! Exact densities of (k,l)-sum-free sets in finite abelian groups.
//!
//! A set `A` is (k,l)-sum-free when the k-fold and l-fold Minkowski sums
//! `kA` and `lA` are disjoint. This crate computes the maximum density such
//! a set can have, two independent ways — closed-form divisor formulas and
//! certified exhaustive search — plus the shifted variant `A *_C B = C+A+B`
//! that models open sum-free subsets of the circle on a cyclic grid.
//! Every value is an exact rational; nothing is floating point.
//!
//! Modules:
//! - [`group`], [`subset`]: finite abelian groups, dense subsets, sumsets,
//!   stabilizers, canonical projections.
//! - [`formula`]: closed-form maxima and the interval-derived witness.
//! - [`search`]: pruned exhaustive maximization with deterministic
//!   parallelism.
//! - [`survey`]: formula-vs-search sweeps, shifted surveys, report formats,
//!   and the resumable cache.

mod bits;

pub mod error;
pub mod formula;
pub mod group;
pub mod rational;
pub mod search;
pub mod subset;
pub mod survey;

pub use error::{Error, Result};
pub use formula::{
    interval_witness, lambda_connected, lambda_cyclic, lambda_product, lambda_sumfree_abelian,
    FormulaResult, FormulaTerm,
};
pub use group::{divisors, FiniteAbelianGroup, ProjectionSpec};
pub use rational::Rational;
pub use search::{
    dilation_symmetries, is_shifted_sum_free, max_shifted_sum_free, max_sum_free,
    shifted_iterated_sumset, SearchConfig, SearchOutcome, DEFAULT_MAX_GROUP_ORDER,
};
pub use subset::{pullback, GroupSubset, DEFAULT_SUMSET_ORDER_CAP};
pub use survey::{
    check_sumfree_bounds, shifted_argmin, survey_shifted, verify_range, SurveyRecord, CSV_HEADER,
};
