//! Exact-arithmetic toolkit for the Hopf algebra of rooted forests, the
//! rooted tree maps they induce on the word algebra Q<x,y>, and the
//! linear relations between multiple zeta values that fall out of them.
//!
//! The symbolic layer (forests, coproduct/antipode/Dynkin, tree maps,
//! derivations, truncated u-series) is exact over Q. The numeric layer
//! evaluates zeta values with rigorous error bounds so that kernel
//! statements can be instantiated numerically. The relations layer turns
//! tree-map and derivation images into weight-graded rational vectors and
//! answers rank and span questions by fraction-free elimination.

pub mod error;
pub mod forest;
pub mod hopf;
pub mod linalg;
pub mod mzv;
pub mod rational;
pub mod relations;
pub mod series;
pub mod tree_map;
pub mod word;

pub use error::{Error, Result};
pub use forest::{
    b_plus, enumerate_forests, enumerate_trees, parse_forest, remove_root, Forest, ForestSum,
    TensorSum, Tree,
};
pub use hopf::{antipode, coproduct, counit, dynkin, grading, ladder};
pub use hopf::{
    antipode_axiom_lhs, coproduct_forest, coproduct_left_iterated, coproduct_right_iterated,
};
pub use mzv::{kernel_check, li_half, z_eval, zeta_num, EvalResult, KernelReport, PrecisionConfig};
pub use rational::Rat;
pub use relations::{
    derivation_relation_from, generate, relation_from, span_inclusion, Provenance, RelationRow,
    RelationSet, RowSource, RunConfig, SpanCheck,
};
pub use series::{delta_u, exp_derivation_series, lambda_series, EndoSeries, HSeries, PolySeries};
pub use tree_map::{apply, apply_forest, apply_letter, partial_as_forest_sum, partial_n};
pub use word::{
    admissible_words, admissible_zindices, all_words, z_decode, z_encode, Letter, Word, WordSum,
    ZIndex,
};
