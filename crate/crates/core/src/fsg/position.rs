//! Positions and moves of the size game, with exact transition semantics,
//! move validation, resource re-checks, and the replay semantics that union
//! stored classes at reused nodes.

use std::collections::BTreeMap;

use super::{init_class, iter_class, variants_of, ClockedClass};
use crate::error::GameError;
use crate::forest::{forest_size, NodeLabel, RuleKind, SyntaxForest};
use crate::model::ClockedModel;

/// An m-successor (or m-global) function, possibly partial: each listed
/// model maps to exactly `m` of its point variants.
pub type MFn = BTreeMap<ClockedModel, ClockedClass>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SigSymbol {
    Prop(String),
    Top,
    Bottom,
}

#[derive(Debug, Clone)]
pub enum FsgMove {
    Neg,
    /// Samson splits the left class.
    Or { left1: ClockedClass, left2: ClockedClass },
    /// Samson splits the right class.
    And { right1: ClockedClass, right2: ClockedClass },
    /// Modal moves carry every embedded choice of both players: Samson's
    /// total function on his side, Delilah's partial function on the other,
    /// Delilah's subset of Samson's successors, Samson's non-empty picks
    /// from Delilah's images.
    Dia(ModalMove),
    Box_(ModalMove),
    GDia(ModalMove),
    GBox(ModalMove),
    Sig(SigSymbol),
    Var { name: String, challenged: bool },
}

#[derive(Debug, Clone)]
pub struct ModalMove {
    pub m: u32,
    pub samson_fn: MFn,
    pub delilah_fn: MFn,
    pub delilah_subset: ClockedClass,
    pub samson_picks: BTreeMap<ClockedModel, ClockedClass>,
}

/// A game position: partial forest, active nodes, and the two class maps.
#[derive(Debug, Clone)]
pub struct FsgPosition {
    pub budget: u64,
    pub forest: SyntaxForest,
    pub active: Vec<usize>,
    pub left: Vec<ClockedClass>,
    pub right: Vec<ClockedClass>,
}

impl FsgPosition {
    pub fn resources(&self) -> u64 {
        forest_size(&self.forest)
    }

    fn push_node(&mut self) {
        self.left.push(ClockedClass::new());
        self.right.push(ClockedClass::new());
    }
}

#[derive(Debug)]
pub enum FsgStep {
    Position(FsgPosition),
    SamsonWins(&'static str),
    DelilahWins(&'static str),
}

/// The standing loss conditions: budget overrun, or a positive clock stored
/// at a base-tagged node on Samson's side.
pub fn losing_reason(pos: &FsgPosition) -> Option<&'static str> {
    if pos.resources() > pos.budget {
        return Some("resource-budget");
    }
    for v in 0..pos.forest.len() {
        if pos.forest.rho[v].1 == RuleKind::Base
            && pos.left[v].iter().any(|m| m.clock > 0)
        {
            return Some("positive-clock-at-base");
        }
    }
    None
}

/// Description of one starting node: predicate, rule tag, and Samson's
/// assignment of left models to it.
#[derive(Debug, Clone)]
pub struct StartNode {
    pub predicate: String,
    pub kind: RuleKind,
    pub left: ClockedClass,
}

/// Build the initial position: Samson supplies paired base/iter nodes per
/// predicate covering the clocked left class; Delilah's chosen right class
/// lands in full at base-tagged nodes and initialized at iter-tagged ones.
pub fn fsg_start(
    budget: u64,
    a_clocked: &ClockedClass,
    b_clocked: &ClockedClass,
    nodes: &[StartNode],
) -> Result<FsgPosition, GameError> {
    let illegal = |reason: String| GameError::IllegalMove {
        rule: "start-protocol",
        reason,
    };
    // Pairing: every predicate named must carry both tags exactly once.
    let mut tags: BTreeMap<&str, (bool, bool)> = BTreeMap::new();
    for n in nodes {
        let e = tags.entry(&n.predicate).or_insert((false, false));
        let slot = if n.kind == RuleKind::Base {
            &mut e.0
        } else {
            &mut e.1
        };
        if *slot {
            return Err(illegal(format!(
                "duplicate {:?} node for predicate {}",
                n.kind, n.predicate
            )));
        }
        *slot = true;
    }
    for (pred, (base, iter)) in &tags {
        if !base || !iter {
            return Err(illegal(format!(
                "predicate {pred} needs both a base and an iter node"
            )));
        }
    }
    // Coverage of the clocked left class.
    let mut covered = ClockedClass::new();
    for n in nodes {
        for m in &n.left {
            if !a_clocked.contains(m) {
                return Err(illegal("left assignment outside the clocked class".into()));
            }
            covered.insert(m.clone());
        }
    }
    if &covered != a_clocked {
        return Err(illegal("left assignment must cover the clocked class".into()));
    }

    let mut pos = FsgPosition {
        budget,
        forest: SyntaxForest::new(),
        active: Vec::new(),
        left: Vec::new(),
        right: Vec::new(),
    };
    for n in nodes {
        let id = pos.forest.add_root((n.predicate.clone(), n.kind));
        pos.push_node();
        pos.left[id] = n.left.clone();
        pos.right[id] = if n.kind == RuleKind::Base {
            b_clocked.clone()
        } else {
            init_class(b_clocked)
        };
        pos.active.push(id);
    }
    Ok(pos)
}

/// Apply one move at the node Delilah chose. Standing losses are checked on
/// entry and again after the move.
pub fn fsg_apply(pos: &FsgPosition, node: usize, mv: &FsgMove) -> Result<FsgStep, GameError> {
    let illegal = |rule: &'static str, reason: String| GameError::IllegalMove { rule, reason };
    if let Some(r) = losing_reason(pos) {
        return Ok(FsgStep::DelilahWins(r));
    }
    if !pos.active.contains(&node) {
        return Err(illegal("node-choice", format!("node {node} is not active")));
    }
    let label = pos.forest.label[node].clone();
    let l = pos.left[node].clone();
    let r = pos.right[node].clone();

    let mut next = pos.clone();
    next.active.retain(|&v| v != node);
    next.left[node] = ClockedClass::new();
    next.right[node] = ClockedClass::new();

    match mv {
        FsgMove::Neg => {
            let child = match &label {
                None => {
                    next.forest.label[node] = Some(NodeLabel::Not);
                    let c = next.forest.add_child(node, pos.forest.rho[node].clone());
                    next.push_node();
                    c
                }
                Some(NodeLabel::Not) => pos.forest.children[node][0],
                Some(other) => {
                    return Err(illegal(
                        "labeled-move",
                        format!("node is labeled {other:?}, not a negation"),
                    ))
                }
            };
            // Swap the sides, merging whatever already waits at the child.
            next.left[child].extend(r);
            next.right[child].extend(l);
            next.active.push(child);
        }
        FsgMove::Or { left1, left2 } | FsgMove::And { right1: left1, right2: left2 } => {
            let is_or = matches!(mv, FsgMove::Or { .. });
            let (split_whole, copy_whole) = if is_or { (&l, &r) } else { (&r, &l) };
            let mut union = left1.clone();
            union.extend(left2.iter().cloned());
            if &union != split_whole || !left1.is_subset(split_whole) || !left2.is_subset(split_whole)
            {
                return Err(illegal(
                    if is_or { "or-split" } else { "and-split" },
                    "the two parts must union to the split side".into(),
                ));
            }
            let want = if is_or { NodeLabel::Or } else { NodeLabel::And };
            let (c1, c2) = match &label {
                None => {
                    next.forest.label[node] = Some(want);
                    let c1 = next.forest.add_child(node, pos.forest.rho[node].clone());
                    next.push_node();
                    let c2 = next.forest.add_child(node, pos.forest.rho[node].clone());
                    next.push_node();
                    (c1, c2)
                }
                Some(lbl) if *lbl == want => {
                    (pos.forest.children[node][0], pos.forest.children[node][1])
                }
                Some(other) => {
                    return Err(illegal(
                        "labeled-move",
                        format!("node is labeled {other:?}"),
                    ))
                }
            };
            let (s1, s2, keep) = (left1, left2, copy_whole);
            if is_or {
                next.left[c1].extend(s1.iter().cloned());
                next.left[c2].extend(s2.iter().cloned());
                next.right[c1].extend(keep.iter().cloned());
                next.right[c2].extend(keep.iter().cloned());
            } else {
                next.right[c1].extend(s1.iter().cloned());
                next.right[c2].extend(s2.iter().cloned());
                next.left[c1].extend(keep.iter().cloned());
                next.left[c2].extend(keep.iter().cloned());
            }
            next.active.push(c1);
            next.active.push(c2);
        }
        FsgMove::Dia(mm) | FsgMove::Box_(mm) | FsgMove::GDia(mm) | FsgMove::GBox(mm) => {
            let global = matches!(mv, FsgMove::GDia(_) | FsgMove::GBox(_));
            let dia = matches!(mv, FsgMove::Dia(_) | FsgMove::GDia(_));
            let want = match (dia, global) {
                (true, false) => NodeLabel::Dia(mm.m),
                (false, false) => NodeLabel::Box_(mm.m),
                (true, true) => NodeLabel::GDia(mm.m),
                (false, true) => NodeLabel::GBox(mm.m),
            };
            let rule = match (dia, global) {
                (true, false) => "diamond-move",
                (false, false) => "box-move",
                (true, true) => "global-diamond-move",
                (false, true) => "global-box-move",
            };
            // Samson's function lives on the left for diamonds; the sides
            // switch for boxes.
            let (samson_side, delilah_side) = if dia { (&l, &r) } else { (&r, &l) };

            // Samson may be unable to supply m distinct variants.
            if samson_side
                .iter()
                .any(|m0| variants_of(m0, global).len() < mm.m as usize)
            {
                return Ok(FsgStep::DelilahWins("samson-cannot-choose"));
            }
            validate_mfn(&mm.samson_fn, samson_side, mm.m, global, true, rule)?;
            validate_mfn(&mm.delilah_fn, delilah_side, mm.m, global, false, rule)?;

            // Delilah restricts Samson's successor pool to a finite subset.
            let samson_pool: ClockedClass = mm
                .samson_fn
                .values()
                .flat_map(|s| s.iter().cloned())
                .collect();
            if !mm.delilah_subset.is_subset(&samson_pool) {
                return Err(illegal(
                    rule,
                    "the chosen subset must come from the supplied successors".into(),
                ));
            }
            // Samson answers every challenged model with a non-empty pick.
            let mut answered = ClockedClass::new();
            for (m0, image) in &mm.delilah_fn {
                let pick = mm.samson_picks.get(m0).ok_or_else(|| {
                    illegal(rule, "every challenged model needs a pick".into())
                })?;
                if pick.is_empty() || !pick.is_subset(image) {
                    return Err(illegal(
                        rule,
                        "picks must be non-empty subsets of the challenge images".into(),
                    ));
                }
                answered.extend(pick.iter().cloned());
            }
            if mm
                .samson_picks
                .keys()
                .any(|k| !mm.delilah_fn.contains_key(k))
            {
                return Err(illegal(rule, "pick for an unchallenged model".into()));
            }

            let child = match &label {
                None => {
                    next.forest.label[node] = Some(want);
                    let c = next.forest.add_child(node, pos.forest.rho[node].clone());
                    next.push_node();
                    c
                }
                Some(lbl) if *lbl == want => pos.forest.children[node][0],
                Some(other) => {
                    return Err(illegal(
                        "labeled-move",
                        format!("node is labeled {other:?}"),
                    ))
                }
            };
            let (new_samson_side, new_delilah_side) = (&mm.delilah_subset, &answered);
            if dia {
                next.left[child].extend(new_samson_side.iter().cloned());
                next.right[child].extend(new_delilah_side.iter().cloned());
            } else {
                next.right[child].extend(new_samson_side.iter().cloned());
                next.left[child].extend(new_delilah_side.iter().cloned());
            }
            next.active.push(child);
        }
        FsgMove::Sig(sym) => {
            let want = match sym {
                SigSymbol::Prop(p) => NodeLabel::Prop(p.clone()),
                SigSymbol::Top => NodeLabel::Top,
                SigSymbol::Bottom => NodeLabel::Bottom,
            };
            match &label {
                None => next.forest.label[node] = Some(want),
                Some(lbl) if *lbl == want => {}
                Some(other) => {
                    return Err(illegal(
                        "labeled-move",
                        format!("node is labeled {other:?}"),
                    ))
                }
            }
            let holds = |m: &ClockedModel| -> bool {
                match sym {
                    SigSymbol::Prop(p) => m.pointed.model.holds(m.pointed.point, p),
                    SigSymbol::Top => true,
                    SigSymbol::Bottom => false,
                }
            };
            let separates = l.iter().all(&holds) && !r.iter().any(&holds);
            if !separates {
                return Ok(FsgStep::DelilahWins("sig-separation"));
            }
            // The node closes; its classes stay put for possible replays.
            next.left[node] = l;
            next.right[node] = r;
        }
        FsgMove::Var { name, challenged } => {
            if pos.forest.rho[node].1 == RuleKind::Base {
                return Ok(FsgStep::DelilahWins("variable-at-base-rule"));
            }
            match &label {
                None => next.forest.label[node] = Some(NodeLabel::Var(name.clone())),
                Some(NodeLabel::Var(existing)) if existing == name => {}
                Some(other) => {
                    return Err(illegal(
                        "labeled-move",
                        format!("node is labeled {other:?}"),
                    ))
                }
            }
            let kind = if *challenged {
                RuleKind::Base
            } else {
                RuleKind::Iter
            };
            // Reuse the predicate's existing rule root when one exists.
            let existing_root = (0..pos.forest.len()).find(|&u| {
                pos.forest.is_root(u)
                    && pos.forest.rho[u] == (name.clone(), kind)
                    && pos.forest.back.iter().any(|&(_, t)| t == u)
            });
            if !*challenged {
                let unchallenged_win = iter_class(&l).is_empty() && iter_class(&r).is_empty();
                let target = match existing_root {
                    Some(u) => u,
                    None => {
                        let u = next.forest.add_root((name.clone(), RuleKind::Iter));
                        next.push_node();
                        u
                    }
                };
                next.forest.back.insert((node, target));
                next.left[target].extend(iter_class(&l));
                next.right[target].extend(iter_class(&r));
                next.left[node] = init_class(&l);
                next.right[node] = init_class(&r);
                if unchallenged_win {
                    // Nothing left to iterate: the node closes in Samson's
                    // favour without activating the rule root.
                } else {
                    next.active.push(target);
                }
            } else {
                let target = match existing_root {
                    Some(u) => u,
                    None => {
                        let u = next.forest.add_root((name.clone(), RuleKind::Base));
                        next.push_node();
                        u
                    }
                };
                next.forest.back.insert((node, target));
                next.left[target].extend(init_class(&l));
                next.right[target].extend(init_class(&r));
                next.active.push(target);
            }
        }
    }

    if let Some(rn) = losing_reason(&next) {
        return Ok(FsgStep::DelilahWins(rn));
    }
    if next.active.is_empty() {
        return Ok(FsgStep::SamsonWins("all-nodes-closed"));
    }
    Ok(FsgStep::Position(next))
}

fn validate_mfn(
    f: &MFn,
    side: &ClockedClass,
    m: u32,
    global: bool,
    total: bool,
    rule: &'static str,
) -> Result<(), GameError> {
    let illegal = |reason: String| GameError::IllegalMove { rule, reason };
    if total {
        for m0 in side {
            if !f.contains_key(m0) {
                return Err(illegal("the function must cover the whole side".into()));
            }
        }
    }
    for (m0, image) in f {
        if !side.contains(m0) {
            return Err(illegal("function key outside its side".into()));
        }
        if image.len() != m as usize {
            return Err(illegal(format!("images must have exactly {m} variants")));
        }
        let pool = variants_of(m0, global);
        if !image.is_subset(&pool) {
            return Err(illegal("image contains a non-variant".into()));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{bare_path, ClockedModel, PointedModel};

    fn clocked(pm: PointedModel, c: u32) -> ClockedModel {
        ClockedModel::new(pm, c)
    }

    fn two_root_start(left: ClockedClass, right: ClockedClass, budget: u64) -> FsgPosition {
        fsg_start(
            budget,
            &left,
            &right,
            &[
                StartNode {
                    predicate: "X".into(),
                    kind: RuleKind::Base,
                    left: left.clone(),
                },
                StartNode {
                    predicate: "X".into(),
                    kind: RuleKind::Iter,
                    left: ClockedClass::new(),
                },
            ],
        )
        .unwrap()
    }

    #[test]
    fn start_induces_right_classes() {
        let a: ClockedClass = [clocked(bare_path(1), 0)].into();
        let b: ClockedClass = [clocked(bare_path(2), 0), clocked(bare_path(2), 2)].into();
        let pos = two_root_start(a, b.clone(), 10);
        assert_eq!(pos.active.len(), 2);
        assert_eq!(pos.right[0], b);
        assert_eq!(pos.right[1], init_class(&b));
        assert_eq!(pos.resources(), 2);
    }

    #[test]
    fn sig_move_wins_when_symbol_separates() {
        let p_model = crate::model::path_model(1, ["p".to_string()].into(), |_| {
            ["p".to_string()].into()
        });
        let a: ClockedClass = [clocked(p_model, 0)].into();
        let b: ClockedClass = [clocked(bare_path(1), 0)].into();
        let pos = two_root_start(a, b, 10);
        // Close the base node with p, then the iter node with F.
        let step = fsg_apply(&pos, 0, &FsgMove::Sig(SigSymbol::Prop("p".into()))).unwrap();
        let pos = match step {
            FsgStep::Position(p) => p,
            other => panic!("expected a position, got {other:?}"),
        };
        // iter node: left is empty (all clocks zero on the left), right is
        // init(B); F separates ∅ from anything.
        match fsg_apply(&pos, 1, &FsgMove::Sig(SigSymbol::Bottom)).unwrap() {
            FsgStep::SamsonWins(_) => {}
            other => panic!("expected a Samson win, got {other:?}"),
        }
    }

    #[test]
    fn sig_move_loses_when_it_does_not_separate() {
        let a: ClockedClass = [clocked(bare_path(1), 0)].into();
        let b: ClockedClass = [clocked(bare_path(1), 0)].into();
        let pos = two_root_start(a, b, 10);
        match fsg_apply(&pos, 0, &FsgMove::Sig(SigSymbol::Top)).unwrap() {
            FsgStep::DelilahWins("sig-separation") => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unchallenged_var_with_all_zero_clocks_closes() {
        let a: ClockedClass = [clocked(bare_path(1), 0)].into();
        let b: ClockedClass = [clocked(bare_path(1), 0)].into();
        let mut pos = two_root_start(a.clone(), b, 10);
        // Work at the iter node so the variable move is allowed.
        pos.left[1] = a;
        match fsg_apply(&pos, 1, &FsgMove::Var { name: "X".into(), challenged: false }).unwrap() {
            FsgStep::Position(p) => {
                // The base root is still open; the var node closed.
                assert_eq!(p.active, vec![0]);
                assert!(matches!(p.forest.label[1], Some(NodeLabel::Var(_))));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn var_at_base_node_loses() {
        let a: ClockedClass = [clocked(bare_path(1), 0)].into();
        let b: ClockedClass = [clocked(bare_path(1), 0)].into();
        let pos = two_root_start(a, b, 10);
        match fsg_apply(&pos, 0, &FsgMove::Var { name: "X".into(), challenged: false }).unwrap() {
            FsgStep::DelilahWins("variable-at-base-rule") => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn diamond_without_successors_loses() {
        let a: ClockedClass = [clocked(bare_path(1), 1)].into();
        let b: ClockedClass = [clocked(bare_path(1), 0)].into();
        let mut pos = two_root_start(a.clone(), b, 10);
        pos.left[1] = a;
        let mm = ModalMove {
            m: 2,
            samson_fn: MFn::new(),
            delilah_fn: MFn::new(),
            delilah_subset: ClockedClass::new(),
            samson_picks: BTreeMap::new(),
        };
        match fsg_apply(&pos, 1, &FsgMove::Dia(mm)).unwrap() {
            FsgStep::DelilahWins("samson-cannot-choose") => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn budget_overrun_loses() {
        let p_model = crate::model::path_model(1, ["p".to_string()].into(), |_| {
            ["p".to_string()].into()
        });
        let a: ClockedClass = [clocked(p_model, 0)].into();
        let b: ClockedClass = [clocked(bare_path(1), 0)].into();
        let pos = two_root_start(a, b, 2);
        // The symbol separates, but the label pushes 2 roots + 1 over the
        // budget of 2.
        match fsg_apply(&pos, 0, &FsgMove::Sig(SigSymbol::Prop("p".into()))).unwrap() {
            FsgStep::DelilahWins(r) => assert_eq!(r, "resource-budget"),
            other => panic!("{other:?}"),
        }
    }
}
