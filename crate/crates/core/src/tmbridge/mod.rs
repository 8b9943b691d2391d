//! Both compilation directions between bounded machines and programs over
//! extended word models, plus the meta-reduction for unbounded machines.

mod flatten;
mod to_msc;
mod to_tm;

pub use flatten::{flatten, is_flat};
pub use to_msc::{compile_tm_to_msc, input_reduce, input_reduce_s, meta_reduce};
pub use to_tm::compile_program_to_tm;
