//! Computable growth scales for entire functions and their compositions.
//!
//! The crate turns iterated-log growth comparison into something a program
//! can do: overflow-proof tower arithmetic ([`tower`]), a family of entire
//! functions and growth profiles with exactly evaluable maximum modulus
//! ([`funfam`]), an independent truncated-power-series check with rigorous
//! enclosures ([`oracle`]), grid-based estimators for (p,q)-orders, index
//! pairs, relative orders, and inverse maximum modulus ([`growth`]), and a
//! verification harness that tests composition growth laws on generated
//! instances ([`verify`]). The `pqgrowth` binary exposes all of it with
//! deterministic CSV/JSON output.

pub mod error;
pub mod funfam;
pub mod growth;
pub mod oracle;
pub mod parse;
pub mod report;
pub mod tower;
pub mod verify;

pub use error::{Error, Result};
pub use funfam::{BlockSchedule, EntireExpr, GrowthObject, GrowthProfile, MaxModulus};
pub use growth::{
    comparison_metric, detect_index_pair, inverse_max_modulus, pq_order, relative_pq_order,
    EstimatorParams, GridSpec, GrowthClass, GrowthEstimate, IndexPairReport,
};
pub use oracle::{
    check_sandwich, MaxModInterval, OracleParams, SandwichRecord, SeriesOracle, Verdict,
};
pub use report::{fmt_float, Cell, Report};
pub use tower::TowerReal;
pub use verify::{
    check_ratio_theorem, check_theorem1, check_theorem2, composite_bound_curves, run_suite,
    BoundCurve, BoundSample, CaseTag, CompositionCase, IneqRow, Outcome, SuiteParams,
    SuiteSummary, VerificationReport,
};
