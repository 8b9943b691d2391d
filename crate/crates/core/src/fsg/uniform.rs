//! The program-directed (uniform) Samson strategy and two replay harnesses:
//! an exhaustive driver over all Delilah choices, and a random legal-play
//! driver used to observe that every play terminates.

use std::collections::{BTreeMap, HashMap};

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use super::position::{FsgMove, FsgPosition, FsgStep, MFn, ModalMove, SigSymbol, StartNode};
use super::{fsg_apply, fsg_start, losing_reason, variants_of, ClockedClass};
use crate::eval::{run, Evaluator, Verdict};
use crate::forest::{syntax_forest, NodeLabel, RuleKind, SyntaxForest};
use crate::model::{ClockedModel, GlobalConfiguration, PointedModel};
use crate::syntax::Program;

/// Every clock up to the configuration-count bound for each model: the
/// right-side class that makes non-uniform wins transfer to programs.
pub fn fully_clocked(models: &[PointedModel], k: u64) -> ClockedClass {
    let mut out = ClockedClass::new();
    for m in models {
        let exponent = (m.model.node_count as u64 * k).min(16);
        let bound = 1u64 << exponent;
        for clock in 0..=bound {
            out.insert(ClockedModel::new(m.clone(), clock.min(u32::MAX as u64) as u32));
        }
    }
    out
}

/// Truth of the subformula rooted at a program-forest node, iterated to the
/// given round, on a pointed model. Configurations are cached per model.
struct SubformulaOracle<'a> {
    program: &'a Program,
    forest: &'a SyntaxForest,
    configs: HashMap<PointedModel, Vec<GlobalConfiguration>>,
}

impl<'a> SubformulaOracle<'a> {
    fn new(program: &'a Program, forest: &'a SyntaxForest) -> SubformulaOracle<'a> {
        SubformulaOracle {
            program,
            forest,
            configs: HashMap::new(),
        }
    }

    fn config_at(&mut self, pm: &PointedModel, round: u32) -> GlobalConfiguration {
        let entry = self.configs.entry(pm.clone()).or_insert_with(Vec::new);
        if entry.is_empty() {
            let ev = Evaluator::new(self.program, &pm.model);
            entry.push(ev.initial().to_row_config());
        }
        while entry.len() <= round as usize {
            let prev = entry.last().unwrap();
            entry.push(crate::eval::step(self.program, &pm.model, prev));
        }
        entry[round as usize].clone()
    }

    fn holds(&mut self, prog_node: usize, m: &ClockedModel) -> bool {
        let schema = self
            .forest
            .schema_at(prog_node)
            .expect("program forests are fully labeled");
        let g = self.config_at(&m.pointed, m.clock);
        let vars: Vec<String> = self.program.rules.iter().map(|r| r.head.clone()).collect();
        crate::eval::eval_schema(&m.pointed.model, &g, &vars, m.pointed.point, &schema)
    }
}

/// Samson's move at an active node whose image in the program forest is
/// `g_node`, along with the mapping updates for the nodes the move creates.
fn samson_move(
    pos: &FsgPosition,
    node: usize,
    g_node: usize,
    forest: &SyntaxForest,
    oracle: &mut SubformulaOracle,
    program: &Program,
    challenged: bool,
) -> FsgMove {
    let l = &pos.left[node];
    let r = &pos.right[node];
    match forest.label[g_node].as_ref().expect("program labels are total") {
        NodeLabel::Top => FsgMove::Sig(SigSymbol::Top),
        NodeLabel::Bottom => FsgMove::Sig(SigSymbol::Bottom),
        NodeLabel::Prop(p) => FsgMove::Sig(SigSymbol::Prop(p.clone())),
        NodeLabel::Var(x) => FsgMove::Var {
            name: x.clone(),
            challenged,
        },
        NodeLabel::Not => FsgMove::Neg,
        NodeLabel::Or => {
            let kids = &forest.children[g_node];
            let left1: ClockedClass = l
                .iter()
                .filter(|m| oracle.holds(kids[0], m))
                .cloned()
                .collect();
            let left2: ClockedClass = l
                .iter()
                .filter(|m| oracle.holds(kids[1], m))
                .cloned()
                .collect();
            FsgMove::Or { left1, left2 }
        }
        NodeLabel::And => {
            let kids = &forest.children[g_node];
            let right1: ClockedClass = r
                .iter()
                .filter(|m| !oracle.holds(kids[0], m))
                .cloned()
                .collect();
            let right2: ClockedClass = r
                .iter()
                .filter(|m| !oracle.holds(kids[1], m))
                .cloned()
                .collect();
            FsgMove::And { right1, right2 }
        }
        NodeLabel::Dia(m) | NodeLabel::Box_(m) | NodeLabel::GDia(m) | NodeLabel::GBox(m) => {
            let label = forest.label[g_node].clone().unwrap();
            let dia = matches!(label, NodeLabel::Dia(_) | NodeLabel::GDia(_));
            let global = matches!(label, NodeLabel::GDia(_) | NodeLabel::GBox(_));
            let child = forest.children[g_node][0];
            let side = if dia { l } else { r };
            // For diamonds Samson exhibits satisfying successors of the left
            // models; for boxes, falsifying successors of the right models.
            let want = dia;
            let mut samson_fn = MFn::new();
            for x in side {
                let picks: ClockedClass = variants_of(x, global)
                    .into_iter()
                    .filter(|v| oracle.holds(child, v) == want)
                    .take(*m as usize)
                    .collect();
                samson_fn.insert(x.clone(), picks);
            }
            let mm = ModalMove {
                m: *m,
                samson_fn,
                delilah_fn: MFn::new(),
                delilah_subset: ClockedClass::new(),
                samson_picks: BTreeMap::new(),
            };
            let _ = program;
            match label {
                NodeLabel::Dia(_) => FsgMove::Dia(mm),
                NodeLabel::Box_(_) => FsgMove::Box_(mm),
                NodeLabel::GDia(_) => FsgMove::GDia(mm),
                _ => FsgMove::GBox(mm),
            }
        }
    }
}

/// Complete a modal move with Delilah's function and subset, and Samson's
/// answering picks (the variants that keep the invariant: falsifying for
/// diamonds, satisfying for boxes).
fn complete_modal(
    mut mv: FsgMove,
    delilah_fn: MFn,
    delilah_subset: ClockedClass,
    child: usize,
    oracle: &mut SubformulaOracle,
) -> FsgMove {
    let (mm, dia) = match &mut mv {
        FsgMove::Dia(mm) => (mm, true),
        FsgMove::Box_(mm) => (mm, false),
        FsgMove::GDia(mm) => (mm, true),
        FsgMove::GBox(mm) => (mm, false),
        _ => unreachable!(),
    };
    mm.delilah_subset = delilah_subset;
    let mut picks = BTreeMap::new();
    for (x, image) in &delilah_fn {
        // Against diamonds Samson points at a falsifying element of the
        // image; against boxes at a satisfying one. At least one exists
        // whenever the invariant holds; otherwise fall back to the whole
        // image and let the referee judge.
        let want = !dia;
        let good: ClockedClass = image
            .iter()
            .filter(|v| oracle.holds(child, v) == want)
            .cloned()
            .collect();
        picks.insert(
            x.clone(),
            if good.is_empty() { image.clone() } else { good },
        );
    }
    mm.delilah_fn = delilah_fn;
    mm.samson_picks = picks;
    mv
}

/// All partial m-functions Delilah can submit over a side (every domain
/// subset, every m-subset image per chosen model).
fn delilah_functions(side: &ClockedClass, m: u32, global: bool) -> Vec<MFn> {
    let models: Vec<ClockedModel> = side.iter().cloned().collect();
    let mut out: Vec<MFn> = vec![MFn::new()];
    for x in models {
        let pool: Vec<ClockedModel> = variants_of(&x, global).into_iter().collect();
        let images = m_subsets(&pool, m as usize);
        let mut next = Vec::new();
        for f in &out {
            // Leave x unchallenged.
            next.push(f.clone());
            for img in &images {
                let mut f2 = f.clone();
                f2.insert(x.clone(), img.iter().cloned().collect());
                next.push(f2);
            }
        }
        out = next;
    }
    out
}

fn m_subsets(pool: &[ClockedModel], m: usize) -> Vec<Vec<ClockedModel>> {
    fn rec(
        pool: &[ClockedModel],
        m: usize,
        start: usize,
        cur: &mut Vec<ClockedModel>,
        out: &mut Vec<Vec<ClockedModel>>,
    ) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for i in start..pool.len() {
            cur.push(pool[i].clone());
            rec(pool, m, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(pool, m, 0, &mut Vec::new(), &mut out);
    out
}

fn subsets(class: &ClockedClass) -> Vec<ClockedClass> {
    let items: Vec<ClockedModel> = class.iter().cloned().collect();
    let mut out = Vec::new();
    for mask in 0u32..(1 << items.len().min(16)) {
        out.push(
            items
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, x)| x.clone())
                .collect(),
        );
    }
    out
}

/// Play the uniform strategy for `program` against every Delilah choice.
/// Returns an error description if any play fails to end in a Samson win.
pub fn uniform_strategy_defeats_delilah(
    program: &Program,
    left: &[PointedModel],
    right_clocked: &ClockedClass,
    budget: u64,
) -> Result<(), String> {
    let forest = syntax_forest(program);
    let accepting: Vec<usize> = program
        .rules
        .iter()
        .enumerate()
        .filter(|(_, r)| program.accepting.contains(&r.head))
        .map(|(i, _)| i)
        .collect();
    if accepting.is_empty() {
        return Err("the program has no accepting predicates".into());
    }

    // Clock each left model by its minimal accepting round: round-0 models
    // sit at the base node, later ones at the iter node one tick early.
    let mut start_nodes: Vec<StartNode> = Vec::new();
    let mut node_map: BTreeMap<usize, usize> = BTreeMap::new(); // start index -> forest root
    let rule_roots: Vec<(usize, usize)> = {
        // Roots appear in declaration order: base then iter per rule.
        let mut roots = forest.roots.iter().copied();
        program
            .rules
            .iter()
            .map(|_| {
                let b = roots.next().unwrap();
                let i = roots.next().unwrap();
                (b, i)
            })
            .collect()
    };
    for &rule in &accepting {
        let head = &program.rules[rule].head;
        for kind in [RuleKind::Base, RuleKind::Iter] {
            node_map.insert(
                start_nodes.len(),
                if kind == RuleKind::Base {
                    rule_roots[rule].0
                } else {
                    rule_roots[rule].1
                },
            );
            start_nodes.push(StartNode {
                predicate: head.clone(),
                kind,
                left: ClockedClass::new(),
            });
        }
    }
    let mut a_clocked = ClockedClass::new();
    for pm in left {
        let verdict = run(program, pm, None).map_err(|e| e.to_string())?;
        let Verdict::AcceptedAt(n) = verdict else {
            return Err(format!("a left model is not accepted ({verdict})"));
        };
        // The predicate that fired at round n.
        let ev = Evaluator::new(program, &pm.model);
        let mut cfg = ev.initial();
        for _ in 0..n {
            cfg = ev.step(&cfg);
        }
        let rule = *accepting
            .iter()
            .find(|&&i| cfg.get(pm.point, i))
            .expect("some accepting predicate fired");
        let slot_in_accepting = accepting.iter().position(|&i| i == rule).unwrap();
        let (clock, slot) = if n == 0 {
            (0u32, 2 * slot_in_accepting)
        } else {
            ((n - 1).min(u32::MAX as u64) as u32, 2 * slot_in_accepting + 1)
        };
        let cm = ClockedModel::new(pm.clone(), clock);
        a_clocked.insert(cm.clone());
        start_nodes[slot].left.insert(cm);
    }

    let pos = fsg_start(budget, &a_clocked, right_clocked, &start_nodes)
        .map_err(|e| e.to_string())?;
    // fsg_start creates roots in slot order, so slot i is forest node i.
    let map: BTreeMap<usize, usize> = node_map;

    let mut oracle = SubformulaOracle::new(program, &forest);
    explore(program, &forest, &pos, &map, &mut oracle, 0)
}

fn explore(
    program: &Program,
    forest: &SyntaxForest,
    pos: &FsgPosition,
    map: &BTreeMap<usize, usize>,
    oracle: &mut SubformulaOracle,
    depth: usize,
) -> Result<(), String> {
    if depth > 4000 {
        return Err("play exceeded the step ceiling".into());
    }
    if let Some(r) = losing_reason(pos) {
        return Err(format!("Samson lost: {r}"));
    }
    // Delilah picks any active node.
    for &node in &pos.active {
        let g_node = map[&node];
        let label = forest.label[g_node].clone().expect("total labels");
        match label {
            NodeLabel::Var(_) => {
                for challenged in [false, true] {
                    let mv = samson_move(pos, node, g_node, forest, oracle, program, challenged);
                    let step = fsg_apply(pos, node, &mv).map_err(|e| e.to_string())?;
                    check_step(
                        program, forest, pos, map, oracle, depth, node, g_node, step, challenged,
                    )?;
                }
            }
            NodeLabel::Dia(m) | NodeLabel::Box_(m) | NodeLabel::GDia(m) | NodeLabel::GBox(m) => {
                let dia = matches!(label, NodeLabel::Dia(_) | NodeLabel::GDia(_));
                let global = matches!(label, NodeLabel::GDia(_) | NodeLabel::GBox(_));
                let child = forest.children[g_node][0];
                let base = samson_move(pos, node, g_node, forest, oracle, program, false);
                let samson_pool: ClockedClass = match &base {
                    FsgMove::Dia(mm) | FsgMove::Box_(mm) | FsgMove::GDia(mm)
                    | FsgMove::GBox(mm) => {
                        mm.samson_fn.values().flat_map(|s| s.iter().cloned()).collect()
                    }
                    _ => unreachable!(),
                };
                let delilah_side = if dia { &pos.right[node] } else { &pos.left[node] };
                for dfn in delilah_functions(delilah_side, m, global) {
                    for subset in subsets(&samson_pool) {
                        let mv = complete_modal(base.clone(), dfn.clone(), subset, child, oracle);
                        let step = fsg_apply(pos, node, &mv).map_err(|e| e.to_string())?;
                        check_step(
                            program, forest, pos, map, oracle, depth, node, g_node, step, false,
                        )?;
                    }
                }
            }
            _ => {
                let mv = samson_move(pos, node, g_node, forest, oracle, program, false);
                let step = fsg_apply(pos, node, &mv).map_err(|e| e.to_string())?;
                check_step(
                    program, forest, pos, map, oracle, depth, node, g_node, step, false,
                )?;
            }
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn check_step(
    program: &Program,
    forest: &SyntaxForest,
    pos: &FsgPosition,
    map: &BTreeMap<usize, usize>,
    oracle: &mut SubformulaOracle,
    depth: usize,
    node: usize,
    g_node: usize,
    step: FsgStep,
    challenged: bool,
) -> Result<(), String> {
    match step {
        FsgStep::SamsonWins(_) => Ok(()),
        FsgStep::DelilahWins(r) => Err(format!("Delilah won: {r}")),
        FsgStep::Position(next) => {
            // Extend the embedding over whatever the move created.
            let mut map2 = map.clone();
            match forest.label[g_node].as_ref().unwrap() {
                NodeLabel::Not
                | NodeLabel::Dia(_)
                | NodeLabel::Box_(_)
                | NodeLabel::GDia(_)
                | NodeLabel::GBox(_) => {
                    let pos_child = next.forest.children[node][0];
                    map2.insert(pos_child, forest.children[g_node][0]);
                }
                NodeLabel::Or | NodeLabel::And => {
                    let kids = &next.forest.children[node];
                    map2.insert(kids[0], forest.children[g_node][0]);
                    map2.insert(kids[1], forest.children[g_node][1]);
                }
                NodeLabel::Var(x) => {
                    // The move targets the rule root of the named predicate.
                    let rule = program.rule_index(x).unwrap();
                    let kind = if challenged {
                        RuleKind::Base
                    } else {
                        RuleKind::Iter
                    };
                    let prog_root = forest
                        .roots
                        .iter()
                        .copied()
                        .find(|&r| forest.rho[r] == (x.clone(), kind))
                        .unwrap();
                    let pos_root = (0..next.forest.len())
                        .find(|&u| {
                            next.forest.is_root(u)
                                && next.forest.rho[u] == (x.clone(), kind)
                                && next.forest.back.contains(&(node, u))
                        })
                        .expect("the variable move adds or reuses a rule root");
                    map2.insert(pos_root, prog_root);
                    let _ = rule;
                }
                _ => {}
            }
            explore(program, forest, &next, &map2, oracle, depth + 1)
        }
    }
}

/// One random legal play; returns the number of moves when the play
/// terminates within the ceiling.
pub fn random_play_terminates(
    program_props: &[String],
    left: &ClockedClass,
    right: &ClockedClass,
    budget: u64,
    seed: u64,
    ceiling: usize,
) -> Option<usize> {
    let mut rng = StdRng::seed_from_u64(seed);
    let start = fsg_start(
        budget,
        left,
        right,
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
    .ok()?;
    let mut pos = start;
    for steps in 0..ceiling {
        if losing_reason(&pos).is_some() {
            return Some(steps);
        }
        let node = *pos.active.choose(&mut rng)?;
        let mv = random_move(&pos, node, program_props, &mut rng);
        match fsg_apply(&pos, node, &mv) {
            Ok(FsgStep::Position(p)) => pos = p,
            Ok(_) => return Some(steps + 1),
            // An illegal random move is retried as a different move next
            // iteration; treat as a consumed step to stay finite.
            Err(_) => continue,
        }
    }
    None
}

fn random_move(
    pos: &FsgPosition,
    node: usize,
    props: &[String],
    rng: &mut StdRng,
) -> FsgMove {
    let l = &pos.left[node];
    let r = &pos.right[node];
    let label = pos.forest.label[node].clone();
    let kind = match &label {
        Some(NodeLabel::Not) => 1,
        Some(NodeLabel::Or) => 2,
        Some(NodeLabel::And) => 3,
        Some(NodeLabel::Dia(_)) => 4,
        Some(NodeLabel::Box_(_)) => 5,
        Some(NodeLabel::GDia(_)) => 6,
        Some(NodeLabel::GBox(_)) => 7,
        Some(NodeLabel::Var(_)) => 8,
        Some(_) => 0,
        None => rng.gen_range(0..9),
    };
    let split = |class: &ClockedClass, rng: &mut StdRng| -> (ClockedClass, ClockedClass) {
        let mut a = ClockedClass::new();
        let mut b = ClockedClass::new();
        for m in class {
            match rng.gen_range(0..3) {
                0 => {
                    a.insert(m.clone());
                }
                1 => {
                    b.insert(m.clone());
                }
                _ => {
                    a.insert(m.clone());
                    b.insert(m.clone());
                }
            }
        }
        (a, b)
    };
    let modal = |side: &ClockedClass, other: &ClockedClass, global: bool, rng: &mut StdRng| {
        let m = 1u32;
        let mut samson_fn = MFn::new();
        for x in side {
            let pool: Vec<ClockedModel> = variants_of(x, global).into_iter().collect();
            if let Some(v) = pool.first() {
                samson_fn.insert(x.clone(), [v.clone()].into());
            }
        }
        let mut delilah_fn = MFn::new();
        for x in other {
            if rng.gen_bool(0.5) {
                let pool: Vec<ClockedModel> = variants_of(x, global).into_iter().collect();
                if let Some(v) = pool.first() {
                    delilah_fn.insert(x.clone(), [v.clone()].into());
                }
            }
        }
        let pool: ClockedClass = samson_fn.values().flat_map(|s| s.iter().cloned()).collect();
        let subset: ClockedClass = pool
            .into_iter()
            .filter(|_| rng.gen_bool(0.7))
            .collect();
        let picks: BTreeMap<ClockedModel, ClockedClass> = delilah_fn
            .iter()
            .map(|(k, img)| (k.clone(), img.clone()))
            .collect();
        ModalMove {
            m,
            samson_fn,
            delilah_fn,
            delilah_subset: subset,
            samson_picks: picks,
        }
    };
    match kind {
        0 => {
            let mut syms: Vec<SigSymbol> = props.iter().map(|p| SigSymbol::Prop(p.clone())).collect();
            syms.push(SigSymbol::Top);
            syms.push(SigSymbol::Bottom);
            if let Some(NodeLabel::Prop(p)) = &label {
                return FsgMove::Sig(SigSymbol::Prop(p.clone()));
            }
            if matches!(label, Some(NodeLabel::Top)) {
                return FsgMove::Sig(SigSymbol::Top);
            }
            if matches!(label, Some(NodeLabel::Bottom)) {
                return FsgMove::Sig(SigSymbol::Bottom);
            }
            FsgMove::Sig(syms.choose(rng).unwrap().clone())
        }
        1 => FsgMove::Neg,
        2 => {
            let (mut a, b) = split(l, rng);
            // Splits must union to the side.
            for m in l {
                if !a.contains(m) && !b.contains(m) {
                    a.insert(m.clone());
                }
            }
            FsgMove::Or { left1: a, left2: b }
        }
        3 => {
            let (mut a, b) = split(r, rng);
            for m in r {
                if !a.contains(m) && !b.contains(m) {
                    a.insert(m.clone());
                }
            }
            FsgMove::And { right1: a, right2: b }
        }
        4 => FsgMove::Dia(modal(l, r, false, rng)),
        5 => FsgMove::Box_(modal(r, l, false, rng)),
        6 => FsgMove::GDia(modal(l, r, true, rng)),
        7 => FsgMove::GBox(modal(r, l, true, rng)),
        _ => {
            let name = if matches!(&label, Some(NodeLabel::Var(_))) {
                match &label {
                    Some(NodeLabel::Var(x)) => x.clone(),
                    _ => unreachable!(),
                }
            } else if rng.gen_bool(0.7) {
                "X".to_string()
            } else {
                "Y".to_string()
            };
            FsgMove::Var {
                name,
                challenged: rng.gen_bool(0.3),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{bare_path, path_model};

    fn p_node() -> PointedModel {
        path_model(1, ["p".to_string()].into(), |_| ["p".to_string()].into())
    }

    #[test]
    fn uniform_strategy_wins_for_the_oracle_program() {
        let program = crate::fixtures::prop_probe("p");
        let left = vec![p_node()];
        let right = fully_clocked(&[bare_path(1)], 3);
        uniform_strategy_defeats_delilah(&program, &left, &right, 3).unwrap();
    }

    #[test]
    fn random_plays_terminate() {
        let left: ClockedClass = [ClockedModel::new(p_node(), 2)].into();
        let right: ClockedClass = [
            ClockedModel::new(bare_path(1), 0),
            ClockedModel::new(bare_path(1), 2),
        ]
        .into();
        for seed in 0..50 {
            let steps = random_play_terminates(&["p".to_string()], &left, &right, 6, seed, 5_000);
            assert!(steps.is_some(), "seed {seed} did not terminate");
        }
    }
}
