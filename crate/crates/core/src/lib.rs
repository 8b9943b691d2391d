//! Rule-based modal substitution calculus over finite Kripke models: syntax
//! and evaluation, three game-theoretic semantics, label-and-claim formulas
//! with their evaluation game, a formula-size game with a brute-force
//! separation oracle, compilation to and from tape-bounded Turing machines,
//! and the classical reductions between QBF, circuits, words and programs.

pub mod bisim;
pub mod error;
pub mod eval;
pub mod fixtures;
pub mod forest;
pub mod fsg;
pub mod games;
pub mod mcl;
pub mod model;
pub mod nnf;
pub mod reductions;
pub mod syntax;
pub mod testgen;
pub mod textio;
pub mod tm;
pub mod tmbridge;

pub use bisim::{check_bisimilar, BisimKind, Rounds};
pub use eval::{eval_schema, initial_config, k_accepts, run, run_trace, step, Verdict};
pub use forest::{forest_size, syntax_forest, SyntaxForest};
pub use model::{
    extended_word_model, path_model, ClockedModel, GlobalConfiguration, KripkeModel, PointedModel,
};
pub use nnf::to_strong_nnf;
pub use syntax::{program_size, Fragment, Program, Rule, Schema, Semantics};
pub use tm::{run_tm, BoundedTm, TmOutcome};
