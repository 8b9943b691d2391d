//! Delilah's bisimulation advice: an equal-clock pair of globally counting
//! n-bisimilar models on the two sides of an active node, bisimilar deeply
//! enough relative to the position's resources, lets her survive every
//! Samson move by mirroring it through the bisimulation.

use super::position::MFn;
use super::{variants_of, ClockedClass, FsgPosition};
use crate::bisim::{check_bisimilar, BisimKind, Rounds};
use crate::forest::forest_size;
use crate::model::ClockedModel;

#[derive(Debug, Clone)]
pub struct BisimAdvice {
    pub node: usize,
    pub left: ClockedModel,
    pub right: ClockedModel,
    /// K from the advice condition: resources − 1 + number of modal labels.
    pub k_factor: u64,
    /// The certified bisimilarity horizon (K times the pair's clock).
    pub bisim_rounds: u64,
}

/// Search the active nodes for an advised pair: equal clocks `ℓ` and global
/// counting `K·ℓ`-bisimilarity, `K = res − 1 + M` with `M` the number of
/// diamonds and boxes in the forest.
pub fn delilah_bisim_advice(pos: &FsgPosition) -> Option<BisimAdvice> {
    let res = forest_size(&pos.forest);
    let modal_count = pos
        .forest
        .label
        .iter()
        .flatten()
        .filter(|l| l.is_operator())
        .count() as u64;
    let k_factor = res.saturating_sub(1) + modal_count;
    for &v in &pos.active {
        for a in &pos.left[v] {
            for b in &pos.right[v] {
                if a.clock != b.clock {
                    continue;
                }
                let n = k_factor * u64::from(a.clock);
                let rounds = Rounds::Bounded(n.min(u32::MAX as u64) as u32);
                if check_bisimilar(&a.pointed, &b.pointed, BisimKind::GlobalCounting, rounds) {
                    return Some(BisimAdvice {
                        node: v,
                        left: a.clone(),
                        right: b.clone(),
                        k_factor,
                        bisim_rounds: n,
                    });
                }
            }
        }
    }
    None
}

impl BisimAdvice {
    /// Whether Delilah challenges a variable move: only when the pair's
    /// clock has run out (the challenge stores the zero-clock pair at the
    /// base node).
    pub fn challenge_decision(&self) -> bool {
        self.left.clock == 0
    }

    /// Delilah's half of a modal move: a partial function defined exactly on
    /// the advised model of the opposite side, mirroring Samson's image
    /// through the bisimulation, plus her subset choice (everything Samson
    /// offered). Returns `None` when no mirror exists, which the advice
    /// precondition rules out.
    pub fn modal_reply(
        &self,
        samson_fn: &MFn,
        dia: bool,
        global: bool,
    ) -> Option<(MFn, ClockedClass)> {
        let (samson_model, delilah_model) = if dia {
            (&self.left, &self.right)
        } else {
            (&self.right, &self.left)
        };
        let image = samson_fn.get(samson_model)?;
        let horizon = self.bisim_rounds.saturating_sub(1);
        let pool: Vec<ClockedModel> = variants_of(delilah_model, global).into_iter().collect();
        let matched = match_variants(
            &image.iter().cloned().collect::<Vec<_>>(),
            &pool,
            horizon,
        )?;
        let mut f = MFn::new();
        f.insert(delilah_model.clone(), matched.into_iter().collect());
        let subset: ClockedClass = samson_fn.values().flat_map(|s| s.iter().cloned()).collect();
        Some((f, subset))
    }
}

/// Injective matching of each source variant to a globally counting
/// `horizon`-bisimilar target variant.
fn match_variants(
    src: &[ClockedModel],
    pool: &[ClockedModel],
    horizon: u64,
) -> Option<Vec<ClockedModel>> {
    fn assign(
        src: &[ClockedModel],
        pool: &[ClockedModel],
        horizon: u64,
        used: &mut Vec<bool>,
        out: &mut Vec<ClockedModel>,
    ) -> bool {
        if out.len() == src.len() {
            return true;
        }
        let i = out.len();
        for (j, cand) in pool.iter().enumerate() {
            if used[j] {
                continue;
            }
            let rounds = Rounds::Bounded(horizon.min(u32::MAX as u64) as u32);
            if check_bisimilar(
                &src[i].pointed,
                &cand.pointed,
                BisimKind::GlobalCounting,
                rounds,
            ) {
                used[j] = true;
                out.push(cand.clone());
                if assign(src, pool, horizon, used, out) {
                    return true;
                }
                out.pop();
                used[j] = false;
            }
        }
        false
    }
    let mut out = Vec::new();
    let mut used = vec![false; pool.len()];
    assign(src, pool, horizon, &mut used, &mut out).then_some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::RuleKind;
    use crate::fsg::{fsg_start, StartNode};
    use crate::model::{bare_path, ClockedModel};

    #[test]
    fn identical_models_any_clock_fire() {
        let m = bare_path(2);
        let a: ClockedClass = [ClockedModel::new(m.clone(), 3)].into();
        let b: ClockedClass = [ClockedModel::new(m.clone(), 0)].into();
        let mut pos = fsg_start(
            20,
            &a,
            &b,
            &[
                StartNode {
                    predicate: "X".into(),
                    kind: RuleKind::Base,
                    left: ClockedClass::new(),
                },
                StartNode {
                    predicate: "X".into(),
                    kind: RuleKind::Iter,
                    left: a.clone(),
                },
            ],
        )
        .unwrap();
        // Align the clocks on the right side of the iter node: an identical
        // model is bisimilar at every horizon.
        pos.right[1] = [ClockedModel::new(m, 3)].into();
        let adv = delilah_bisim_advice(&pos).expect("identity bisimulation");
        assert_eq!(adv.node, 1);
        assert_eq!(adv.left.clock, 3);
        assert!(!adv.challenge_decision());
    }

    #[test]
    fn zero_clock_pairs_need_no_depth() {
        // Paths of different length are only 0-bisimilar for the global
        // counting kind, which suffices at clock zero.
        let a: ClockedClass = [ClockedModel::new(bare_path(3), 0)].into();
        let b: ClockedClass = [ClockedModel::new(bare_path(5), 0)].into();
        let pos = fsg_start(
            20,
            &a,
            &b,
            &[
                StartNode {
                    predicate: "X".into(),
                    kind: RuleKind::Base,
                    left: a.clone(),
                },
                StartNode {
                    predicate: "X".into(),
                    kind: RuleKind::Iter,
                    left: ClockedClass::new(),
                },
            ],
        )
        .unwrap();
        let adv = delilah_bisim_advice(&pos).expect("clock-zero pair with equal valuations");
        assert_eq!(adv.left.clock, 0);
        assert!(adv.challenge_decision());
    }

    #[test]
    fn no_equal_clock_pair_no_advice() {
        let a: ClockedClass = [ClockedModel::new(bare_path(1), 2)].into();
        let b: ClockedClass = [ClockedModel::new(bare_path(1), 1)].into();
        let pos = fsg_start(
            20,
            &a,
            &b,
            &[
                StartNode {
                    predicate: "X".into(),
                    kind: RuleKind::Base,
                    left: ClockedClass::new(),
                },
                StartNode {
                    predicate: "X".into(),
                    kind: RuleKind::Iter,
                    left: a.clone(),
                },
            ],
        )
        .unwrap();
        assert!(delilah_bisim_advice(&pos).is_none());
    }
}
