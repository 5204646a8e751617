//! Exact constructions around the ternary Cantor set.
//!
//! Every point is an exact rational and every digit expansion is an exact
//! periodic word, so the classical statements about the Cantor set, the
//! Cantor-Lebesgue function and Lebesgue's space-filling curves can be checked
//! with zero tolerance at any finite depth.
//!
//! - [`expansion`]: rationals and their base-2 / base-3 digit expansions.
//! - [`cantor_set`]: iterates `C_n`, membership, removed intervals, SVC(m).
//! - [`cantor_function`]: the devil's staircase and its polygonal approximants.
//! - [`space_filling`]: Lebesgue's maps onto the unit square and cube.
//! - [`hausdorff`]: nested covers of box unions and the induced map from `C`.
//! - [`verify`]: property suites driven by the CLI.

pub mod cantor_function;
pub mod cantor_set;
pub mod error;
pub mod expansion;
pub mod hausdorff;
pub mod space_filling;
pub mod verify;

pub use cantor_function::{
    approximation_gap, difference_quotient, f_extended, f_on_cantor, limit_gap, polygonal, singularity_report,
    CantorFunctionValue, PolygonalApproximant,
};
pub use cantor_set::{
    cantor_digits, cantor_iterate, dimension_estimate, measure_diagnostics, membership, perfectness_witness,
    removed_intervals, svc_iterate, Interval, IntervalSet, Membership, RemovedInterval,
};
pub use error::{Error, Result};
pub use expansion::{
    dual_representations, expand, expand_with, format_rational, parse_rational, ratio, Base, Convention,
    DigitExpansion, Rational, Representations,
};
pub use hausdorff::{
    build_cover, hausdorff_map, modulus_check, trace, BoxD, CompactBoxSet, MapTrace, ModulusReport, NestedCover,
};
pub use space_filling::{f2, f2_extended, f3, f3_extended, preimage2, preimage3, sample_curve, Point};
pub use verify::{run_all, run_suite, SuiteReport, VerifyConfig};
