//! One-way communication toolkit: finite distributions with KL
//! divergence and mutual information, answer families standing in for
//! quantum protocols, the refinement and sampling conversion to
//! classical protocols, single-input transformations of two-sided
//! problems, and a brute-force distributional cost oracle for tiny
//! instances.

mod convert;
mod cost;
pub mod gen;
mod info;
mod problems;
mod refine;

pub use convert::{convert_to_classical, ConversionReport, DEFAULT_SAMPLE_CAP};
pub use cost::{one_way_cost_single, one_way_cost_two_sided, CostReport, COST_INPUT_CAP};
pub use info::{kl_divergence, mutual_information, AnswerFamily, Distribution};
pub use problems::{
    concept_to_comm, decode_tuple, func_eval_problem, single_input_transform, SingleInputProblem,
    TransformedProblem, TwoSidedProblem, DEFAULT_TUPLE_CAP,
};
pub use refine::{refine_audit, refine_family, RefineAudit, RefinedFamily};

/// Numeric tolerance shared by the communication-side checks.
pub const COMM_TOL: f64 = 1e-9;
