//! Exact combinatorics of shuffle products on words and rooted forests, with
//! the reductions that express tree, conical and Mordell–Tornheim zeta values
//! as rational combinations of multiple zeta values, plus exact partial sums
//! and a floating-point evaluator.
//!
//! Everything algebraic is exact: linear combinations carry arbitrary-precision
//! rational coefficients by default ([`Q`]), and every operation is generic
//! over the scalar through the [`Scalar`] trait (so `f64`/`f32` coefficients
//! work where a lossy scalar is acceptable).

pub mod cones;
pub mod enumerate;
pub mod error;
pub mod forest;
pub mod lincomb;
pub mod numeric;
pub mod oracle;
pub mod scalar;
pub mod sums;
pub mod upsilon;
pub mod word;

pub use cones::{czv_reduce, czv_reduce_shuffle_words, is_poset_compatible, is_tree_like, mt_reduce, phi, poset_of_cone, psi, second_representing_matrix, Cone, MtReduction, MzvExpr};
pub use error::{Error, Result};
pub use forest::{
    b_plus, branched_binarize, branched_debinarize, concat_forests, flatten, forest_shuffle,
    is_convergent_forest, ladder_of_word, leaf, map_decorations, operated_fold, try_operated_fold,
    word_of_ladder, Forest, Tree,
};
pub use lincomb::{bilinear, LinComb};
pub use numeric::{default_horizon, default_mt_horizon, eval_binary, eval_expr, eval_mt_direct, eval_mzv, eval_tzv_direct, NumericResult};
pub use oracle::{check_flattening, check_roundtrip, check_sums, check_yew, Mismatch, OracleOutcome};
pub use scalar::{parse_rational, Q, Scalar};
pub use sums::{forest_sum, tzv_sum, word_sum, Horizon};
pub use upsilon::{fl_yew, yew, yew_via_definition, yew_words, Upsilon};
pub use word::{
    binarize, concat, cons, debinarize, is_convergent_word, lambda_shuffle, shuffle, Alphabet, Bin,
    Letter, Word,
};
