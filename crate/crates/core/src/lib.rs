//! Exact Euler calculus on simplicial constructible functions.
//!
//! The crate computes Euler characteristic transforms (hyperplane probes)
//! and quadric Euler characteristic transforms (quadric probes) of
//! integer-weighted simplicial functions over rational coordinates, and
//! provides the Radon-transform machinery used to invert them.
//!
//! All arithmetic is exact. Floating point appears only in the numeric
//! sphere-mesh oracle's display output and in optional plot data.

pub mod complex;
pub mod ect;
pub mod format;
pub mod function;
pub mod generate;
pub mod linalg;
pub mod lp;
pub mod mesh;
pub mod poly;
pub mod qect;
pub mod radon;
pub mod rational;
pub mod step;

pub use complex::{validate_complex, ComplexError, GeometricComplex, ValidationReport};
pub use ect::{
    classify_pair, corollary_check, dual_transform_1d, ect_curve, ect_sweep, reconstruct_1d,
    schapira_identity_check_1d, DirectionProbe, EctError, EctTable,
};
pub use function::{
    closure_expand, restrict_to_line, ConstructibleFunction, FunctionError, Line2D,
};
pub use qect::{
    compose_fixed_a, compose_v0, opnorm_compare, qect_curve_1d_support, qect_eval_exact,
    qect_eval_pl, quadric_value, fixed_a_bound_check, OpNormOrder, QectError, QuadricProbe,
    SymMatrix,
};
pub use radon::{
    compose_partition, fiber_char_analytic, FiberCharReport, KernelKind, PartitionSpec, RadonError,
};
pub use rational::{Point, Rational};
pub use step::{euler_integral_1d, StepFunction, Upper};
