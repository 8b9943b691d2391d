//! Position embeddings: injective maps from a position's partial forest into
//! a program's syntax forest preserving roots, tree edges, back edges, the
//! rule tags and the labels.

use crate::forest::{syntax_forest, SyntaxForest};
use crate::syntax::Program;

use super::FsgPosition;

/// Does some embedding of the position's forest into the program's forest
/// exist? Backtracking over candidate images; positions are desk-sized.
pub fn check_position_embedding(pos: &FsgPosition, program: &Program) -> bool {
    let target = syntax_forest(program);
    embed_forest(&pos.forest, &target)
}

pub(crate) fn embed_forest(small: &SyntaxForest, big: &SyntaxForest) -> bool {
    let n = small.len();
    if n == 0 {
        return true;
    }
    // Candidate targets per node: rule tag equal, label equal when present,
    // roots onto roots.
    let mut candidates: Vec<Vec<usize>> = Vec::with_capacity(n);
    for v in 0..n {
        let mut cs = Vec::new();
        for u in 0..big.len() {
            if small.rho[v] != big.rho[u] {
                continue;
            }
            if small.is_root(v) && !big.is_root(u) {
                continue;
            }
            if let Some(lbl) = &small.label[v] {
                if big.label[u].as_ref() != Some(lbl) {
                    continue;
                }
            }
            cs.push(u);
        }
        if cs.is_empty() {
            return false;
        }
        candidates.push(cs);
    }

    fn consistent(
        small: &SyntaxForest,
        big: &SyntaxForest,
        map: &[Option<usize>],
        v: usize,
        u: usize,
    ) -> bool {
        for (w, &img) in map.iter().enumerate() {
            let Some(iw) = img else { continue };
            if iw == u {
                return false; // injectivity
            }
            // Tree edges both ways.
            let e_small = small.children[v].contains(&w) || small.children[w].contains(&v);
            let e_big = big.children[u].contains(&iw) || big.children[iw].contains(&u);
            let dir_small = small.children[v].contains(&w);
            let dir_big = big.children[u].contains(&iw);
            if e_small != e_big || dir_small != dir_big {
                return false;
            }
            // Back edges both ways and both directions.
            let b_small_vw = small.back.contains(&(v, w));
            let b_big = big.back.contains(&(u, iw));
            if b_small_vw != b_big {
                return false;
            }
            let b_small_wv = small.back.contains(&(w, v));
            let b_big_wv = big.back.contains(&(iw, u));
            if b_small_wv != b_big_wv {
                return false;
            }
        }
        true
    }

    fn assign(
        small: &SyntaxForest,
        big: &SyntaxForest,
        candidates: &[Vec<usize>],
        map: &mut Vec<Option<usize>>,
        v: usize,
    ) -> bool {
        if v == small.len() {
            return true;
        }
        for &u in &candidates[v] {
            if consistent(small, big, map, v, u) {
                map[v] = Some(u);
                if assign(small, big, candidates, map, v + 1) {
                    return true;
                }
                map[v] = None;
            }
        }
        false
    }

    let mut map = vec![None; n];
    assign(small, big, &candidates, &mut map, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::counting_example;
    use crate::forest::{NodeLabel, RuleKind, SyntaxForest};
    use crate::fsg::{ClockedClass, FsgPosition};

    fn empty_position(forest: SyntaxForest) -> FsgPosition {
        let nodes = forest.len();
        FsgPosition {
            budget: 100,
            forest,
            active: vec![],
            left: vec![ClockedClass::new(); nodes],
            right: vec![ClockedClass::new(); nodes],
        }
    }

    #[test]
    fn empty_forest_embeds_with_matching_roots() {
        let mut f = SyntaxForest::new();
        f.add_root(("X".into(), RuleKind::Base));
        f.add_root(("X".into(), RuleKind::Iter));
        let pos = empty_position(f);
        assert!(check_position_embedding(&pos, &counting_example()));
    }

    #[test]
    fn wrong_connective_does_not_embed() {
        // The counting example has ∧ at the iter root of X; an ∨ there has
        // no image.
        let mut f = SyntaxForest::new();
        let r = f.add_root(("X".into(), RuleKind::Iter));
        f.label[r] = Some(NodeLabel::Or);
        let pos = empty_position(f);
        assert!(!check_position_embedding(&pos, &counting_example()));
    }

    #[test]
    fn partial_subtree_embeds() {
        let mut f = SyntaxForest::new();
        let r = f.add_root(("X".into(), RuleKind::Iter));
        f.label[r] = Some(NodeLabel::And);
        let c = f.add_child(r, ("X".into(), RuleKind::Iter));
        f.label[c] = Some(NodeLabel::Var("Y".into()));
        let pos = empty_position(f);
        assert!(check_position_embedding(&pos, &counting_example()));
    }

    #[test]
    fn unknown_predicate_tag_does_not_embed() {
        let mut f = SyntaxForest::new();
        f.add_root(("Z".into(), RuleKind::Base));
        let pos = empty_position(f);
        assert!(!check_position_embedding(&pos, &counting_example()));
    }
}
