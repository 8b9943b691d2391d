//! The formula-size game: clocked-model class algebra, position and move
//! mechanics with resource accounting, position embeddings, bisimulation
//! advice for Delilah, a brute-force separation oracle, and the uniform
//! (program-directed) strategy for Samson.

mod advice;
mod embed;
mod oracle;
mod position;
mod uniform;

pub use advice::{delilah_bisim_advice, BisimAdvice};
pub use embed::check_position_embedding;
pub use oracle::{separation_oracle, OracleBounds};
pub use position::{
    fsg_apply, fsg_start, losing_reason, FsgMove, FsgPosition, FsgStep, MFn, SigSymbol, StartNode,
};
pub use uniform::{fully_clocked, random_play_terminates, uniform_strategy_defeats_delilah};

use std::collections::BTreeSet;

use crate::model::ClockedModel;

/// A finite set of clocked models.
pub type ClockedClass = BTreeSet<ClockedModel>;

/// Clocks tick down; models at zero drop out.
pub fn iter_class(c: &ClockedClass) -> ClockedClass {
    c.iter()
        .filter(|m| m.clock >= 1)
        .map(|m| ClockedModel::new(m.pointed.clone(), m.clock - 1))
        .collect()
}

/// Only the models whose clock already reached zero.
pub fn init_class(c: &ClockedClass) -> ClockedClass {
    c.iter().filter(|m| m.clock == 0).cloned().collect()
}

/// Every way of moving a point to one of its successors.
pub fn box_class(c: &ClockedClass) -> ClockedClass {
    let mut out = ClockedClass::new();
    for m in c {
        for u in m.pointed.model.successors(m.pointed.point) {
            let mut pm = m.pointed.clone();
            pm.point = u;
            out.insert(ClockedModel::new(pm, m.clock));
        }
    }
    out
}

/// Every way of re-pointing a model at any node.
pub fn gbox_class(c: &ClockedClass) -> ClockedClass {
    let mut out = ClockedClass::new();
    for m in c {
        for u in 0..m.pointed.model.node_count {
            let mut pm = m.pointed.clone();
            pm.point = u;
            out.insert(ClockedModel::new(pm, m.clock));
        }
    }
    out
}

/// The successor (or global) variants of one clocked model.
pub fn variants_of(m: &ClockedModel, global: bool) -> ClockedClass {
    let single: ClockedClass = [m.clone()].into();
    if global {
        gbox_class(&single)
    } else {
        box_class(&single)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{bare_path, ClockedModel};

    #[test]
    fn class_operators() {
        let m = bare_path(2);
        let c: ClockedClass = [
            ClockedModel::new(m.clone(), 0),
            ClockedModel::new(m.clone(), 2),
        ]
        .into();
        assert_eq!(iter_class(&c), [ClockedModel::new(m.clone(), 1)].into());
        assert_eq!(init_class(&c), [ClockedModel::new(m.clone(), 0)].into());

        let b = box_class(&c);
        // One successor: the point moves from 0 to 1, clocks kept.
        assert_eq!(b.len(), 2);
        assert!(b.iter().all(|x| x.pointed.point == 1));

        let g = gbox_class(&[ClockedModel::new(m.clone(), 1)].into());
        assert_eq!(g.len(), 2);
    }

    #[test]
    fn iter_of_zero_clock_is_empty() {
        let m = bare_path(1);
        let c: ClockedClass = [ClockedModel::new(m, 0)].into();
        assert!(iter_class(&c).is_empty());
    }
}
