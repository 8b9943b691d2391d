//! Modal computation logic: label and claim formulas, reference-formula
//! resolution, the unbounded evaluation game, and the translation from
//! asynchronous programs.

use std::collections::{BTreeSet, HashMap};

use crate::games::arena::{attractor, strategy_choice, Arena, PosKind};
use crate::games::{GameOutcome, Player, Winner};
use crate::model::PointedModel;
use crate::syntax::{Program, Schema};

/// Formulas with labels `Lψ` and claims `C_L`; no schema variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MclFormula {
    Bottom,
    Top,
    Prop(String),
    Claim(String),
    Not(Box<MclFormula>),
    Or(Box<MclFormula>, Box<MclFormula>),
    And(Box<MclFormula>, Box<MclFormula>),
    Dia(u32, Box<MclFormula>),
    Box_(u32, Box<MclFormula>),
    GDia(u32, Box<MclFormula>),
    GBox(u32, Box<MclFormula>),
    Label(String, Box<MclFormula>),
}

impl MclFormula {
    pub fn or(a: MclFormula, b: MclFormula) -> MclFormula {
        MclFormula::Or(Box::new(a), Box::new(b))
    }
    pub fn and(a: MclFormula, b: MclFormula) -> MclFormula {
        MclFormula::And(Box::new(a), Box::new(b))
    }
    pub fn label(name: &str, body: MclFormula) -> MclFormula {
        MclFormula::Label(name.to_string(), Box::new(body))
    }

    pub fn children(&self) -> Vec<&MclFormula> {
        match self {
            MclFormula::Bottom | MclFormula::Top | MclFormula::Prop(_) | MclFormula::Claim(_) => {
                vec![]
            }
            MclFormula::Not(c)
            | MclFormula::Dia(_, c)
            | MclFormula::Box_(_, c)
            | MclFormula::GDia(_, c)
            | MclFormula::GBox(_, c)
            | MclFormula::Label(_, c) => vec![c],
            MclFormula::Or(a, b) | MclFormula::And(a, b) => vec![a, b],
        }
    }
}

/// Occurrences: nodes of the syntax tree in preorder, with parents.
pub struct MclOccs {
    pub formulas: Vec<MclFormula>,
    pub parent: Vec<Option<usize>>,
    pub children: Vec<Vec<usize>>,
}

impl MclOccs {
    pub fn new(phi: &MclFormula) -> MclOccs {
        let mut t = MclOccs {
            formulas: Vec::new(),
            parent: Vec::new(),
            children: Vec::new(),
        };
        t.add(phi, None);
        t
    }

    fn add(&mut self, f: &MclFormula, parent: Option<usize>) -> usize {
        let id = self.formulas.len();
        self.formulas.push(f.clone());
        self.parent.push(parent);
        self.children.push(Vec::new());
        if let Some(p) = parent {
            self.children[p].push(id);
        }
        for c in f.children() {
            self.add(c, Some(id));
        }
        id
    }

    /// Claim occurrences: `(occurrence, label name)`.
    pub fn claims(&self) -> Vec<(usize, String)> {
        self.formulas
            .iter()
            .enumerate()
            .filter_map(|(i, f)| match f {
                MclFormula::Claim(name) => Some((i, name.clone())),
                _ => None,
            })
            .collect()
    }

    /// The nearest ancestor labeled with the claim's name, if any.
    pub fn reference_of(&self, claim_occ: usize) -> Option<usize> {
        let MclFormula::Claim(name) = &self.formulas[claim_occ] else {
            return None;
        };
        let mut cur = self.parent[claim_occ];
        while let Some(v) = cur {
            if let MclFormula::Label(l, _) = &self.formulas[v] {
                if l == name {
                    return Some(v);
                }
            }
            cur = self.parent[v];
        }
        None
    }
}

/// The reference formula of a claim occurrence: the unique label ancestor of
/// matching name with no same-named label strictly between.
pub fn reference_formula(phi: &MclFormula, claim_occ: usize) -> Option<usize> {
    MclOccs::new(phi).reference_of(claim_occ)
}

/// Every claim occurrence has a reference formula.
pub fn total_reference(phi: &MclFormula) -> bool {
    let occs = MclOccs::new(phi);
    occs.claims().iter().all(|(i, _)| occs.reference_of(*i).is_some())
}

// ---------------------------------------------------------------------------
// The unbounded evaluation game.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MclPosition {
    pub verifier: Player,
    pub node: usize,
    pub occurrence: usize,
}

pub struct MclArena<'a> {
    pm: &'a PointedModel,
    occs: MclOccs,
    /// Claim occurrence -> reference occurrence, when it exists.
    refs: HashMap<usize, usize>,
}

impl<'a> MclArena<'a> {
    pub fn new(pm: &'a PointedModel, phi: &MclFormula) -> MclArena<'a> {
        let occs = MclOccs::new(phi);
        let refs = occs
            .claims()
            .into_iter()
            .filter_map(|(i, _)| occs.reference_of(i).map(|r| (i, r)))
            .collect();
        MclArena { pm, occs, refs }
    }
}

impl<'a> Arena for MclArena<'a> {
    type Pos = MclPosition;

    fn kind(&self, pos: &MclPosition) -> PosKind {
        let v = pos.verifier;
        match &self.occs.formulas[pos.occurrence] {
            MclFormula::Top => PosKind::Terminal(Some(v)),
            MclFormula::Bottom => PosKind::Terminal(Some(v.other())),
            MclFormula::Prop(p) => PosKind::Terminal(Some(if self.pm.model.holds(pos.node, p) {
                v
            } else {
                v.other()
            })),
            MclFormula::Claim(_) => {
                if self.refs.contains_key(&pos.occurrence) {
                    PosKind::Auto
                } else {
                    // The game stops and neither player wins.
                    PosKind::Terminal(None)
                }
            }
            MclFormula::Label(_, _) | MclFormula::Not(_) => PosKind::Auto,
            MclFormula::Or(_, _) => PosKind::Choice(v),
            MclFormula::And(_, _) => PosKind::Choice(v.other()),
            MclFormula::Dia(k, _) | MclFormula::GDia(k, _) => {
                PosKind::Count { chooser: v, k: *k }
            }
            MclFormula::Box_(k, _) | MclFormula::GBox(k, _) => PosKind::Count {
                chooser: v.other(),
                k: *k,
            },
        }
    }

    fn successors(&self, pos: &MclPosition) -> Vec<MclPosition> {
        let same = |occurrence: usize| MclPosition {
            occurrence,
            ..*pos
        };
        let kids = &self.occs.children[pos.occurrence];
        match &self.occs.formulas[pos.occurrence] {
            MclFormula::Top | MclFormula::Bottom | MclFormula::Prop(_) => vec![],
            MclFormula::Claim(_) => self
                .refs
                .get(&pos.occurrence)
                .map(|&r| vec![same(r)])
                .unwrap_or_default(),
            MclFormula::Label(_, _) => vec![same(kids[0])],
            MclFormula::Not(_) => vec![MclPosition {
                verifier: pos.verifier.other(),
                node: pos.node,
                occurrence: kids[0],
            }],
            MclFormula::Or(_, _) | MclFormula::And(_, _) => {
                vec![same(kids[0]), same(kids[1])]
            }
            MclFormula::Dia(_, _) | MclFormula::Box_(_, _) => self
                .pm
                .model
                .successors(pos.node)
                .into_iter()
                .map(|u| MclPosition {
                    verifier: pos.verifier,
                    node: u,
                    occurrence: kids[0],
                })
                .collect(),
            MclFormula::GDia(_, _) | MclFormula::GBox(_, _) => (0..self.pm.model.node_count)
                .map(|u| MclPosition {
                    verifier: pos.verifier,
                    node: u,
                    occurrence: kids[0],
                })
                .collect(),
        }
    }

    fn positions(&self) -> Vec<MclPosition> {
        let mut out = Vec::new();
        for verifier in [Player::Eloise, Player::Abelard] {
            for node in 0..self.pm.model.node_count {
                for occurrence in 0..self.occs.formulas.len() {
                    out.push(MclPosition {
                        verifier,
                        node,
                        occurrence,
                    });
                }
            }
        }
        out
    }
}

/// Solve the unbounded evaluation game from `(Eloise, point, φ)`. The value
/// can be a draw when only infinite plays exist.
pub fn solve_mcl_game(pm: &PointedModel, phi: &MclFormula) -> GameOutcome {
    let arena = MclArena::new(pm, phi);
    let eloise = attractor(&arena, Player::Eloise);
    let abelard = attractor(&arena, Player::Abelard);
    let initial = MclPosition {
        verifier: Player::Eloise,
        node: pm.point,
        occurrence: 0,
    };
    if eloise.contains(&initial) {
        let mut witness = Vec::new();
        let mut pos = initial;
        loop {
            witness.push(format!("({}, node {})", pos.verifier, pos.node));
            match arena.kind(&pos) {
                PosKind::Terminal(_) => break,
                PosKind::Auto => pos = arena.successors(&pos)[0],
                _ => match strategy_choice(&arena, &eloise, &pos) {
                    Some(next) => pos = next,
                    None => break,
                },
            }
        }
        GameOutcome {
            winner: Winner::Eloise,
            witness,
        }
    } else if abelard.contains(&initial) {
        GameOutcome {
            winner: Winner::Abelard,
            witness: Vec::new(),
        }
    } else {
        GameOutcome {
            winner: Winner::NoWinner,
            witness: Vec::new(),
        }
    }
}

// ---------------------------------------------------------------------------
// Program-to-formula translations.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
enum WorkNode {
    Done(MclFormula),
    Not(usize),
    Or(usize, usize),
    And(usize, usize),
    Dia(u32, usize),
    Box_(u32, usize),
    GDia(u32, usize),
    GBox(u32, usize),
    Label(String, usize),
    /// A label symbol standing as an atom, waiting to be expanded.
    Atom { rule: usize, name: String },
}

struct Builder<'a> {
    p: &'a Program,
    nodes: Vec<WorkNode>,
    parent: Vec<Option<usize>>,
    used_names: BTreeSet<String>,
    /// Rule index and subscript string behind every generated label name.
    label_info: HashMap<String, (usize, String)>,
}

impl<'a> Builder<'a> {
    fn new(p: &'a Program) -> Builder<'a> {
        Builder {
            p,
            nodes: Vec::new(),
            parent: Vec::new(),
            used_names: BTreeSet::new(),
            label_info: HashMap::new(),
        }
    }

    fn push(&mut self, n: WorkNode, parent: Option<usize>) -> usize {
        self.nodes.push(n);
        self.parent.push(parent);
        self.nodes.len() - 1
    }

    fn fresh_name(&mut self, rule: usize, subscript: &str) -> String {
        let base = format!("{}_{}", self.p.rules[rule].head, subscript);
        let mut name = base.clone();
        let mut n = 1;
        while !self.used_names.insert(name.clone()) {
            n += 1;
            name = format!("{base}_{n}");
        }
        self.label_info
            .insert(name.clone(), (rule, subscript.to_string()));
        name
    }

    /// A label symbol (expanded or pending) for the predicate exists
    /// anywhere in the tree.
    fn label_exists(&self, rule: usize) -> bool {
        self.nodes.iter().any(|n| match n {
            WorkNode::Atom { rule: r, .. } => *r == rule,
            WorkNode::Label(name, _) => self.label_rule(name) == Some(rule),
            _ => false,
        })
    }

    fn label_rule(&self, name: &str) -> Option<usize> {
        self.label_info.get(name).map(|(r, _)| *r)
    }

    fn nearest_label_ancestor(&self, mut at: Option<usize>, rule: usize) -> Option<String> {
        while let Some(v) = at {
            if let WorkNode::Label(name, _) = &self.nodes[v] {
                if self.label_rule(name) == Some(rule) {
                    return Some(name.clone());
                }
            }
            at = self.parent[v];
        }
        None
    }

    /// Convert a variable-free schema (a base rule body) verbatim.
    fn base_to_mcl(&mut self, s: &Schema, parent: Option<usize>) -> usize {
        let node = match s {
            Schema::Bottom => WorkNode::Done(MclFormula::Bottom),
            Schema::Top => WorkNode::Done(MclFormula::Top),
            Schema::Prop(p) => WorkNode::Done(MclFormula::Prop(p.clone())),
            Schema::Var(_) => unreachable!("base bodies are variable-free"),
            _ => {
                let id = self.push(WorkNode::Done(MclFormula::Bottom), parent); // placeholder
                let filled = match s {
                    Schema::Not(c) => WorkNode::Not(self.base_to_mcl(c, Some(id))),
                    Schema::Or(a, b) => {
                        WorkNode::Or(self.base_to_mcl(a, Some(id)), self.base_to_mcl(b, Some(id)))
                    }
                    Schema::And(a, b) => {
                        WorkNode::And(self.base_to_mcl(a, Some(id)), self.base_to_mcl(b, Some(id)))
                    }
                    Schema::Dia(k, c) => WorkNode::Dia(*k, self.base_to_mcl(c, Some(id))),
                    Schema::Box_(k, c) => WorkNode::Box_(*k, self.base_to_mcl(c, Some(id))),
                    Schema::GDia(k, c) => WorkNode::GDia(*k, self.base_to_mcl(c, Some(id))),
                    Schema::GBox(k, c) => WorkNode::GBox(*k, self.base_to_mcl(c, Some(id))),
                    _ => unreachable!(),
                };
                self.nodes[id] = filled;
                return id;
            }
        };
        self.push(node, parent)
    }

    /// Convert an induction body, replacing each predicate occurrence per
    /// the three-way case split of the proper translation: claim the nearest
    /// label on the path when one exists; otherwise a fresh pending label,
    /// subscripted by the expansion path when the predicate is already
    /// labeled elsewhere and by the empty string when it is not labeled
    /// anywhere yet.
    fn induction_to_mcl(
        &mut self,
        s: &Schema,
        parent: Option<usize>,
        expanding_subscript: &str,
        expanding_rule: usize,
        site: usize,
    ) -> usize {
        match s {
            Schema::Var(y) => {
                let rule = self.p.rule_index(y).expect("validated program");
                if let Some(target) = self.nearest_label_ancestor(Some(site), rule) {
                    self.push(WorkNode::Done(MclFormula::Claim(target)), parent)
                } else {
                    let subscript = if self.label_exists(rule) {
                        format!(
                            "{}{}",
                            expanding_subscript, self.p.rules[expanding_rule].head
                        )
                    } else {
                        String::new()
                    };
                    let name = self.fresh_name(rule, &subscript);
                    self.push(WorkNode::Atom { rule, name }, parent)
                }
            }
            Schema::Bottom => self.push(WorkNode::Done(MclFormula::Bottom), parent),
            Schema::Top => self.push(WorkNode::Done(MclFormula::Top), parent),
            Schema::Prop(p) => self.push(WorkNode::Done(MclFormula::Prop(p.clone())), parent),
            _ => {
                let id = self.push(WorkNode::Done(MclFormula::Bottom), parent);
                let filled = match s {
                    Schema::Not(c) => {
                        WorkNode::Not(self.induction_to_mcl(c, Some(id), expanding_subscript, expanding_rule, site))
                    }
                    Schema::Or(a, b) => WorkNode::Or(
                        self.induction_to_mcl(a, Some(id), expanding_subscript, expanding_rule, site),
                        self.induction_to_mcl(b, Some(id), expanding_subscript, expanding_rule, site),
                    ),
                    Schema::And(a, b) => WorkNode::And(
                        self.induction_to_mcl(a, Some(id), expanding_subscript, expanding_rule, site),
                        self.induction_to_mcl(b, Some(id), expanding_subscript, expanding_rule, site),
                    ),
                    Schema::Dia(k, c) => WorkNode::Dia(
                        *k,
                        self.induction_to_mcl(c, Some(id), expanding_subscript, expanding_rule, site),
                    ),
                    Schema::Box_(k, c) => WorkNode::Box_(
                        *k,
                        self.induction_to_mcl(c, Some(id), expanding_subscript, expanding_rule, site),
                    ),
                    Schema::GDia(k, c) => WorkNode::GDia(
                        *k,
                        self.induction_to_mcl(c, Some(id), expanding_subscript, expanding_rule, site),
                    ),
                    Schema::GBox(k, c) => WorkNode::GBox(
                        *k,
                        self.induction_to_mcl(c, Some(id), expanding_subscript, expanding_rule, site),
                    ),
                    _ => unreachable!(),
                };
                self.nodes[id] = filled;
                id
            }
        }
    }

    fn first_atom(&self) -> Option<usize> {
        self.nodes
            .iter()
            .position(|n| matches!(n, WorkNode::Atom { .. }))
    }

    fn to_formula(&self, id: usize) -> MclFormula {
        match &self.nodes[id] {
            WorkNode::Done(f) => f.clone(),
            WorkNode::Not(c) => MclFormula::Not(Box::new(self.to_formula(*c))),
            WorkNode::Or(a, b) => MclFormula::or(self.to_formula(*a), self.to_formula(*b)),
            WorkNode::And(a, b) => MclFormula::and(self.to_formula(*a), self.to_formula(*b)),
            WorkNode::Dia(k, c) => MclFormula::Dia(*k, Box::new(self.to_formula(*c))),
            WorkNode::Box_(k, c) => MclFormula::Box_(*k, Box::new(self.to_formula(*c))),
            WorkNode::GDia(k, c) => MclFormula::GDia(*k, Box::new(self.to_formula(*c))),
            WorkNode::GBox(k, c) => MclFormula::GBox(*k, Box::new(self.to_formula(*c))),
            WorkNode::Label(name, c) => {
                MclFormula::Label(name.clone(), Box::new(self.to_formula(*c)))
            }
            WorkNode::Atom { .. } => unreachable!("atoms are expanded before conversion"),
        }
    }
}

/// Translate a program under its asynchronous reading to an equivalent
/// formula in which every claim has a reference. Without accepting
/// predicates the result is ⊥.
pub fn translate_async_program(p: &Program) -> MclFormula {
    let accepting: Vec<usize> = p
        .rules
        .iter()
        .enumerate()
        .filter(|(_, r)| p.accepting.contains(&r.head))
        .map(|(i, _)| i)
        .collect();
    if accepting.is_empty() {
        return MclFormula::Bottom;
    }
    let mut b = Builder::new(p);

    // The starting disjunction of pending labels X_ε over accepting X.
    let mut atom_ids = Vec::new();
    for &rule in &accepting {
        let name = b.fresh_name(rule, "");
        atom_ids.push(b.push(WorkNode::Atom { rule, name }, None));
    }
    let root = build_disjunction(&mut b, &atom_ids);

    // Repeatedly expand the oldest pending label.
    while let Some(id) = b.first_atom() {
        let WorkNode::Atom { rule, name } = b.nodes[id].clone() else {
            unreachable!()
        };
        // X_s becomes the label X_s over (base body ∨ translated induction
        // body); the label node itself is an ancestor of the new material,
        // so self-references become claims of X_s.
        let label_id = id;
        b.nodes[label_id] = WorkNode::Label(name.clone(), usize::MAX);
        let or_id = b.push(WorkNode::Or(usize::MAX, usize::MAX), Some(label_id));
        let base_id = b.base_to_mcl(&p.rules[rule].base.clone(), Some(or_id));
        let ind_body = p.rules[rule].induction.clone();
        let subscript = b.label_info[&name].1.clone();
        let ind_id = b.induction_to_mcl(&ind_body, Some(or_id), &subscript, rule, or_id);
        b.nodes[or_id] = WorkNode::Or(base_id, ind_id);
        b.nodes[label_id] = WorkNode::Label(name, or_id);
    }
    b.to_formula(root)
}

/// The first, broken translation: label symbols are plain predicate names
/// and a repeated label becomes a claim whether or not the original label is
/// an ancestor. Kept as a regression subject: it produces dangling claims on
/// re-entrant programs.
pub fn naive_translate(p: &Program) -> MclFormula {
    let accepting: Vec<usize> = p
        .rules
        .iter()
        .enumerate()
        .filter(|(_, r)| p.accepting.contains(&r.head))
        .map(|(i, _)| i)
        .collect();
    if accepting.is_empty() {
        return MclFormula::Bottom;
    }
    let mut b = Builder::new(p);
    let mut atom_ids = Vec::new();
    for &rule in &accepting {
        let name = p.rules[rule].head.clone();
        atom_ids.push(b.push(WorkNode::Atom { rule, name }, None));
    }
    let root = build_disjunction(&mut b, &atom_ids);

    while let Some(id) = b.first_atom() {
        let WorkNode::Atom { rule, name } = b.nodes[id].clone() else {
            unreachable!()
        };
        // A second appearance of the label symbol becomes the claim, with no
        // regard to where the label sits.
        let already = b.nodes.iter().enumerate().any(|(j, n)| {
            j != id && matches!(n, WorkNode::Label(l, _) if *l == name)
        });
        if already {
            b.nodes[id] = WorkNode::Done(MclFormula::Claim(name));
            continue;
        }
        b.nodes[id] = WorkNode::Label(name.clone(), usize::MAX);
        let or_id = b.push(WorkNode::Or(usize::MAX, usize::MAX), Some(id));
        let base_id = b.base_to_mcl(&p.rules[rule].base.clone(), Some(or_id));
        let ind_id = naive_induction(&mut b, &p.rules[rule].induction.clone(), Some(or_id));
        b.nodes[or_id] = WorkNode::Or(base_id, ind_id);
        b.nodes[id] = WorkNode::Label(name, or_id);
    }
    b.to_formula(root)
}

fn naive_induction(b: &mut Builder, s: &Schema, parent: Option<usize>) -> usize {
    match s {
        Schema::Var(y) => {
            let rule = b.p.rule_index(y).expect("validated program");
            let name = b.p.rules[rule].head.clone();
            b.push(WorkNode::Atom { rule, name }, parent)
        }
        Schema::Bottom => b.push(WorkNode::Done(MclFormula::Bottom), parent),
        Schema::Top => b.push(WorkNode::Done(MclFormula::Top), parent),
        Schema::Prop(p) => b.push(WorkNode::Done(MclFormula::Prop(p.clone())), parent),
        _ => {
            let id = b.push(WorkNode::Done(MclFormula::Bottom), parent);
            let filled = match s {
                Schema::Not(c) => WorkNode::Not(naive_induction(b, c, Some(id))),
                Schema::Or(x, y) => {
                    WorkNode::Or(naive_induction(b, x, Some(id)), naive_induction(b, y, Some(id)))
                }
                Schema::And(x, y) => {
                    WorkNode::And(naive_induction(b, x, Some(id)), naive_induction(b, y, Some(id)))
                }
                Schema::Dia(k, c) => WorkNode::Dia(*k, naive_induction(b, c, Some(id))),
                Schema::Box_(k, c) => WorkNode::Box_(*k, naive_induction(b, c, Some(id))),
                Schema::GDia(k, c) => WorkNode::GDia(*k, naive_induction(b, c, Some(id))),
                Schema::GBox(k, c) => WorkNode::GBox(*k, naive_induction(b, c, Some(id))),
                _ => unreachable!(),
            };
            b.nodes[id] = filled;
            id
        }
    }
}

fn build_disjunction(b: &mut Builder, ids: &[usize]) -> usize {
    let mut root = *ids.last().expect("nonempty accepting set");
    for &id in ids.iter().rev().skip(1) {
        let or = b.push(WorkNode::Or(id, root), None);
        b.parent[id] = Some(or);
        b.parent[root] = Some(or);
        root = or;
    }
    root
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::label_translation_example;
    use crate::model::bare_path;
    use crate::syntax::{Rule, Semantics};
    use std::collections::BTreeSet;

    #[test]
    fn reference_is_the_nearest_matching_ancestor() {
        // L:a(p | @a): the claim refers to the whole labeled formula.
        let phi = MclFormula::label(
            "a",
            MclFormula::or(MclFormula::Prop("p".into()), MclFormula::Claim("a".into())),
        );
        let occs = MclOccs::new(&phi);
        let claims = occs.claims();
        assert_eq!(claims.len(), 1);
        assert_eq!(occs.reference_of(claims[0].0), Some(0));

        // Nested same-named labels: the inner one wins.
        let phi = MclFormula::label("a", MclFormula::label("a", MclFormula::Claim("a".into())));
        let occs = MclOccs::new(&phi);
        let claims = occs.claims();
        assert_eq!(occs.reference_of(claims[0].0), Some(1));
    }

    #[test]
    fn pure_claim_loop_is_a_draw() {
        let phi = MclFormula::label("a", MclFormula::Claim("a".into()));
        let pm = bare_path(1);
        assert_eq!(solve_mcl_game(&pm, &phi).winner, Winner::NoWinner);
        assert_eq!(
            solve_mcl_game(&pm, &MclFormula::Top).winner,
            Winner::Eloise
        );
    }

    #[test]
    fn self_loop_program_translation() {
        // X(0):-p, X:-X, accepting {X}  =>  L:X_(p | @X_).
        let p = Program::new(
            vec![Rule {
                head: "X".into(),
                base: Schema::prop("p"),
                induction: Schema::var("X"),
            }],
            ["X".to_string()].into(),
            BTreeSet::new(),
            Semantics::Asynchronous,
        )
        .unwrap();
        let phi = translate_async_program(&p);
        assert_eq!(
            phi,
            MclFormula::label(
                "X_",
                MclFormula::or(MclFormula::Prop("p".into()), MclFormula::Claim("X_".into()))
            )
        );
        assert!(total_reference(&phi));
    }

    #[test]
    fn empty_accepting_set_is_bottom() {
        let mut p = label_translation_example();
        p.accepting.clear();
        assert_eq!(translate_async_program(&p), MclFormula::Bottom);
        assert_eq!(naive_translate(&p), MclFormula::Bottom);
    }

    #[test]
    fn reentrant_example_total_vs_naive_dangling() {
        let p = label_translation_example();
        let proper = translate_async_program(&p);
        assert!(total_reference(&proper), "proper translation dangles: {proper:?}");
        let naive = naive_translate(&p);
        assert!(!total_reference(&naive), "naive translation should dangle");
    }

    #[test]
    fn reentrant_example_structure() {
        // X_ε(px ∨ (Y_ε(py ∨ ◇C_{X_ε}) ∧ Z_ε(pz ∨ C_{X_ε} ∨ Y_Z(py ∨ ◇C_{X_ε})))).
        let p = label_translation_example();
        let phi = translate_async_program(&p);
        let expected = MclFormula::label(
            "X_",
            MclFormula::or(
                MclFormula::Prop("px".into()),
                MclFormula::and(
                    MclFormula::label(
                        "Y_",
                        MclFormula::or(
                            MclFormula::Prop("py".into()),
                            MclFormula::Dia(1, Box::new(MclFormula::Claim("X_".into()))),
                        ),
                    ),
                    MclFormula::label(
                        "Z_",
                        MclFormula::or(
                            MclFormula::Prop("pz".into()),
                            MclFormula::or(
                                MclFormula::Claim("X_".into()),
                                MclFormula::label(
                                    "Y_Z",
                                    MclFormula::or(
                                        MclFormula::Prop("py".into()),
                                        MclFormula::Dia(
                                            1,
                                            Box::new(MclFormula::Claim("X_".into())),
                                        ),
                                    ),
                                ),
                            ),
                        ),
                    ),
                ),
            ),
        );
        assert_eq!(phi, expected);
    }
}
