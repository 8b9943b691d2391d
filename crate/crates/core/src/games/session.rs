//! Move-validating sessions for interactive play of the three games. The
//! session holds the current position, announces whose choice is pending
//! with a legal-move menu, and rejects illegal moves naming the violated
//! rule. Choices with no player input (negation swaps, clocked variables)
//! advance automatically.

use super::formula::solve_formula_game;
use super::occs::{OccOp, OccTable};
use super::{Player, Winner};
use crate::error::GameError;
use crate::model::{GlobalConfiguration, PointedModel};
use crate::syntax::Program;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GameKind {
    Standard,
    Global,
    Async,
}

/// A move submitted to [`Session::apply`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SessionMove {
    /// Standard game: initial body (rule index, base?) and clock.
    PickInitialStd { rule: usize, base: bool, clock: u64 },
    /// Async game: initial body of an accepting predicate.
    PickInitialAsync { rule: usize, base: bool },
    /// Disjunction/conjunction: left (true) or right branch.
    PickBranch(bool),
    /// Modal move, chooser's half: k distinct nodes.
    PickSet(Vec<usize>),
    /// Modal move, opponent's half: one node from the chosen set.
    PickNode(usize),
    /// Async variable: base (true) or induction body.
    VarChoice(bool),
    /// Global game: declare the current tuple final or provide the next one
    /// (one predicate-name list per node).
    DeclareFinal,
    ProvideTuple(Vec<Vec<String>>),
    /// Global game: challenge the pending tuple, or let it pass.
    Challenge(bool),
    /// Global game: the challenged node and predicate.
    PickChallenge { node: usize, rule: usize },
}

#[derive(Debug, Clone)]
pub enum SessionState {
    /// Eloise picks an initial position.
    AwaitInitial,
    /// A local-game position awaiting the pending player's choice.
    AtPosition {
        verifier: Player,
        node: usize,
        occurrence: usize,
        clock: Option<u64>,
        /// Set already chosen in a two-ply modal move.
        chosen_set: Option<Vec<usize>>,
    },
    /// Global game: Eloise declares/provides at the current tuple.
    GlobalDeclare,
    /// Global game: Abelard decides whether to challenge the provided tuple.
    GlobalChallengeDecision,
    /// Global game: Abelard names the node and predicate to check.
    GlobalPick { final_position: bool },
    Terminal { winner: Winner, rule: &'static str },
}

pub struct Session {
    pub kind: GameKind,
    program: Program,
    pm: PointedModel,
    occs: OccTable,
    pub state: SessionState,
    /// Global game: the position tuple (f) and the provided next tuple (g).
    current_tuple: Option<GlobalConfiguration>,
    pending_tuple: Option<GlobalConfiguration>,
    log: Vec<String>,
}

impl Session {
    pub fn new(kind: GameKind, program: Program, pm: PointedModel) -> Session {
        let occs = OccTable::new(&program);
        let state = match kind {
            GameKind::Global => SessionState::AwaitInitial,
            _ => SessionState::AwaitInitial,
        };
        Session {
            kind,
            program,
            pm,
            occs,
            state,
            current_tuple: None,
            pending_tuple: None,
            log: Vec::new(),
        }
    }

    pub fn log(&self) -> &[String] {
        &self.log
    }

    pub fn is_terminal(&self) -> bool {
        matches!(self.state, SessionState::Terminal { .. })
    }

    /// The player whose choice is pending, if any.
    pub fn to_move(&self) -> Option<Player> {
        match &self.state {
            SessionState::AwaitInitial | SessionState::GlobalDeclare => Some(Player::Eloise),
            SessionState::GlobalChallengeDecision | SessionState::GlobalPick { .. } => {
                Some(Player::Abelard)
            }
            SessionState::Terminal { .. } => None,
            SessionState::AtPosition {
                verifier,
                occurrence,
                chosen_set,
                ..
            } => {
                let v = *verifier;
                match &self.occs.ops[*occurrence] {
                    OccOp::Or(_, _) => Some(v),
                    OccOp::And(_, _) => Some(v.other()),
                    OccOp::Var(_) => Some(v),
                    OccOp::Dia(_, _) | OccOp::GDia(_, _) => {
                        Some(if chosen_set.is_none() { v } else { v.other() })
                    }
                    OccOp::Box_(_, _) | OccOp::GBox(_, _) => {
                        Some(if chosen_set.is_none() { v.other() } else { v })
                    }
                    _ => None,
                }
            }
        }
    }

    /// Human-readable position and menu of legal moves.
    pub fn describe(&self) -> String {
        match &self.state {
            SessionState::AwaitInitial => match self.kind {
                GameKind::Global => {
                    "Eloise: provide an initial tuple containing an accepting predicate at the point \
                     (move: tuple ROWS)"
                        .to_string()
                }
                GameKind::Standard => {
                    let menu = self.initial_menu();
                    format!("Eloise: pick an initial body and clock. Options: {menu}")
                }
                GameKind::Async => {
                    let menu = self.initial_menu();
                    format!("Eloise: pick an initial body. Options: {menu}")
                }
            },
            SessionState::AtPosition {
                verifier,
                node,
                occurrence,
                clock,
                chosen_set,
            } => {
                let clock_s = clock.map(|c| format!(", clock {c}")).unwrap_or_default();
                let head = format!(
                    "position ({verifier}, node {node}, {}{clock_s})",
                    self.occs.text[*occurrence]
                );
                let menu = match (&self.occs.ops[*occurrence], chosen_set) {
                    (OccOp::Or(_, _), _) => format!("{} picks a disjunct: left|right", verifier),
                    (OccOp::And(_, _), _) => {
                        format!("{} picks a conjunct: left|right", verifier.other())
                    }
                    (OccOp::Var(_), _) => format!("{verifier} picks: base|induction"),
                    (OccOp::Dia(k, _), None) | (OccOp::GDia(k, _), None) => {
                        format!("{verifier} submits {k} distinct nodes: set n1 n2 …")
                    }
                    (OccOp::Box_(k, _), None) | (OccOp::GBox(k, _), None) => {
                        format!("{} submits {k} distinct nodes: set n1 n2 …", verifier.other())
                    }
                    (_, Some(set)) => format!("opponent picks one node of {set:?}: node n"),
                    _ => String::new(),
                };
                format!("{head}\n{menu}")
            }
            SessionState::GlobalDeclare => {
                "Eloise: `final` to declare this tuple final, or provide the previous-round tuple"
                    .to_string()
            }
            SessionState::GlobalChallengeDecision => {
                "Abelard: challenge the provided tuple? yes|no".to_string()
            }
            SessionState::GlobalPick { .. } => {
                "Abelard: pick a node and a predicate to check: check NODE PRED".to_string()
            }
            SessionState::Terminal { winner, rule } => {
                format!("terminal: {winner} wins ({rule})")
            }
        }
    }

    fn initial_menu(&self) -> String {
        let mut parts = Vec::new();
        for (i, r) in self.program.rules.iter().enumerate() {
            if self.program.accepting.contains(&r.head) {
                parts.push(format!("[rule {i} = {} base|induction]", r.head));
            }
        }
        if parts.is_empty() {
            "(none: Eloise automatically loses)".to_string()
        } else {
            parts.join(" ")
        }
    }

    fn illegal(rule: &'static str, reason: impl Into<String>) -> GameError {
        GameError::IllegalMove {
            rule,
            reason: reason.into(),
        }
    }

    /// Validate and apply one move, then advance through any automatic
    /// continuations.
    pub fn apply(&mut self, mv: SessionMove) -> Result<(), GameError> {
        if self.is_terminal() {
            return Err(GameError::Terminal);
        }
        match (&self.state.clone(), mv) {
            (SessionState::AwaitInitial, mv) => self.apply_initial(mv)?,
            (
                SessionState::AtPosition {
                    verifier,
                    node,
                    occurrence,
                    clock,
                    chosen_set,
                },
                mv,
            ) => self.apply_position(*verifier, *node, *occurrence, *clock, chosen_set, mv)?,
            (SessionState::GlobalDeclare, mv) => self.apply_global_declare(mv)?,
            (SessionState::GlobalChallengeDecision, mv) => self.apply_global_challenge(mv)?,
            (SessionState::GlobalPick { final_position }, mv) => {
                self.apply_global_pick(*final_position, mv)?
            }
            (SessionState::Terminal { .. }, _) => return Err(GameError::Terminal),
        }
        self.settle();
        Ok(())
    }

    fn apply_initial(&mut self, mv: SessionMove) -> Result<(), GameError> {
        match (self.kind, mv) {
            (GameKind::Standard, SessionMove::PickInitialStd { rule, base, clock }) => {
                self.check_initial_rule(rule)?;
                let occurrence = if base {
                    self.occs.base_root[rule]
                } else {
                    self.occs.ind_root[rule]
                };
                self.log.push(format!(
                    "Eloise starts at rule {rule} ({}) with clock {clock}",
                    if base { "base" } else { "induction" }
                ));
                self.state = SessionState::AtPosition {
                    verifier: Player::Eloise,
                    node: self.pm.point,
                    occurrence,
                    clock: Some(clock),
                    chosen_set: None,
                };
                Ok(())
            }
            (GameKind::Async, SessionMove::PickInitialAsync { rule, base }) => {
                self.check_initial_rule(rule)?;
                let occurrence = if base {
                    self.occs.base_root[rule]
                } else {
                    self.occs.ind_root[rule]
                };
                self.log.push(format!("Eloise starts at rule {rule}"));
                self.state = SessionState::AtPosition {
                    verifier: Player::Eloise,
                    node: self.pm.point,
                    occurrence,
                    clock: None,
                    chosen_set: None,
                };
                Ok(())
            }
            (GameKind::Global, SessionMove::ProvideTuple(rows)) => {
                let f = self.tuple_from_rows(&rows)?;
                let accepting_at_point = self
                    .program
                    .rules
                    .iter()
                    .enumerate()
                    .any(|(i, r)| self.program.accepting.contains(&r.head) && f.get(self.pm.point, i));
                if !accepting_at_point {
                    return Err(Self::illegal(
                        "initial-choice",
                        "the initial tuple must contain an accepting predicate at the point",
                    ));
                }
                self.log.push("Eloise provides the initial tuple".into());
                self.current_tuple = Some(f);
                self.state = SessionState::GlobalDeclare;
                Ok(())
            }
            _ => Err(Self::illegal("initial-choice", "not a legal initial move")),
        }
    }

    fn check_initial_rule(&self, rule: usize) -> Result<(), GameError> {
        let ok = self
            .program
            .rules
            .get(rule)
            .is_some_and(|r| self.program.accepting.contains(&r.head));
        if ok {
            Ok(())
        } else {
            Err(Self::illegal(
                "initial-choice",
                "initial bodies come from accepting predicates",
            ))
        }
    }

    fn apply_position(
        &mut self,
        verifier: Player,
        node: usize,
        occurrence: usize,
        clock: Option<u64>,
        chosen_set: &Option<Vec<usize>>,
        mv: SessionMove,
    ) -> Result<(), GameError> {
        let set_pos = |s: &mut Self, occurrence: usize, node: usize| {
            s.state = SessionState::AtPosition {
                verifier,
                node,
                occurrence,
                clock,
                chosen_set: None,
            };
        };
        match (&self.occs.ops[occurrence].clone(), chosen_set, mv) {
            (OccOp::Or(a, b), _, SessionMove::PickBranch(left))
            | (OccOp::And(a, b), _, SessionMove::PickBranch(left)) => {
                let target = if left { *a } else { *b };
                self.log.push(format!(
                    "branch: {}",
                    if left { "left" } else { "right" }
                ));
                set_pos(self, target, node);
                Ok(())
            }
            (OccOp::Or(_, _), _, _) => Err(Self::illegal(
                "disjunction-choice",
                "expected `left` or `right`",
            )),
            (OccOp::And(_, _), _, _) => Err(Self::illegal(
                "conjunction-choice",
                "expected `left` or `right`",
            )),
            (OccOp::Var(rule), _, mv) => {
                // Only the async game asks a player here; clocked variables
                // advance automatically in settle().
                if self.kind != GameKind::Async {
                    return Err(Self::illegal(
                        "variable-clock",
                        "clocked variables advance automatically",
                    ));
                }
                match mv {
                    SessionMove::VarChoice(base) => {
                        let target = if base {
                            self.occs.base_root[*rule]
                        } else {
                            self.occs.ind_root[*rule]
                        };
                        self.log.push(format!(
                            "variable: {}",
                            if base { "base body" } else { "induction body" }
                        ));
                        set_pos(self, target, node);
                        Ok(())
                    }
                    _ => Err(Self::illegal(
                        "variable-choice",
                        "expected `base` or `induction`",
                    )),
                }
            }
            (op, None, SessionMove::PickSet(set)) => {
                let (k, _c, local, rule_name) = modal_parts(op).ok_or_else(|| {
                    Self::illegal("modal-witness", "no set is expected at this position")
                })?;
                let pool: Vec<usize> = if local {
                    self.pm.model.successors(node)
                } else {
                    (0..self.pm.model.node_count).collect()
                };
                let mut sorted = set.clone();
                sorted.sort_unstable();
                sorted.dedup();
                if sorted.len() != set.len() || set.len() != k as usize {
                    return Err(Self::illegal(
                        rule_name,
                        format!("need exactly {k} distinct nodes"),
                    ));
                }
                if let Some(bad) = set.iter().find(|u| !pool.contains(u)) {
                    return Err(Self::illegal(
                        rule_name,
                        format!(
                            "node {bad} is not {}",
                            if local {
                                "an out-neighbour of the current node"
                            } else {
                                "a node of the model"
                            }
                        ),
                    ));
                }
                self.log.push(format!("set chosen: {set:?}"));
                self.state = SessionState::AtPosition {
                    verifier,
                    node,
                    occurrence,
                    clock,
                    chosen_set: Some(set),
                };
                Ok(())
            }
            (op, Some(set), SessionMove::PickNode(u)) => {
                let (_k, c, _local, rule_name) = modal_parts(op).ok_or_else(|| {
                    Self::illegal("modal-witness", "no pick is expected at this position")
                })?;
                if !set.contains(&u) {
                    return Err(Self::illegal(
                        rule_name,
                        format!("node {u} is not in the chosen set"),
                    ));
                }
                self.log.push(format!("node picked: {u}"));
                set_pos(self, c, u);
                Ok(())
            }
            (op, None, _) if modal_parts(op).is_some() => {
                let (_, _, _, rule_name) = modal_parts(op).unwrap();
                Err(Self::illegal(rule_name, "expected a set of nodes"))
            }
            (op, Some(_), _) if modal_parts(op).is_some() => {
                let (_, _, _, rule_name) = modal_parts(op).unwrap();
                Err(Self::illegal(rule_name, "expected a node from the chosen set"))
            }
            _ => Err(Self::illegal("atom-terminal", "the position is terminal")),
        }
    }

    fn apply_global_declare(&mut self, mv: SessionMove) -> Result<(), GameError> {
        match mv {
            SessionMove::DeclareFinal => {
                self.log.push("Eloise declares the final position".into());
                self.pending_tuple = None;
                self.state = SessionState::GlobalPick {
                    final_position: true,
                };
                Ok(())
            }
            SessionMove::ProvideTuple(rows) => {
                let g = self.tuple_from_rows(&rows)?;
                self.log.push("Eloise provides the previous tuple".into());
                self.pending_tuple = Some(g);
                self.state = SessionState::GlobalChallengeDecision;
                Ok(())
            }
            _ => Err(Self::illegal(
                "global-declare",
                "expected `final` or a tuple",
            )),
        }
    }

    fn apply_global_challenge(&mut self, mv: SessionMove) -> Result<(), GameError> {
        match mv {
            SessionMove::Challenge(true) => {
                self.log.push("Abelard challenges".into());
                self.state = SessionState::GlobalPick {
                    final_position: false,
                };
                Ok(())
            }
            SessionMove::Challenge(false) => {
                self.log.push("Abelard passes".into());
                self.current_tuple = self.pending_tuple.take();
                self.state = SessionState::GlobalDeclare;
                Ok(())
            }
            _ => Err(Self::illegal("global-challenge", "expected yes or no")),
        }
    }

    fn apply_global_pick(&mut self, final_position: bool, mv: SessionMove) -> Result<(), GameError> {
        let SessionMove::PickChallenge { node, rule } = mv else {
            return Err(Self::illegal(
                "global-pick",
                "expected a node and a predicate",
            ));
        };
        if node >= self.pm.model.node_count || rule >= self.program.rules.len() {
            return Err(Self::illegal("global-pick", "node or predicate out of range"));
        }
        let vars: Vec<String> = self.program.rules.iter().map(|r| r.head.clone()).collect();
        let f = self.current_tuple.as_ref().expect("tuple present in play");
        let (body, game_tuple) = if final_position {
            // Final declarations are checked against base rules over the
            // bare model.
            (
                &self.program.rules[rule].base,
                GlobalConfiguration::empty(self.pm.model.node_count, vars.len()),
            )
        } else {
            (
                &self.program.rules[rule].induction,
                self.pending_tuple.clone().expect("challenge follows a tuple"),
            )
        };
        let game = solve_formula_game(&self.pm.model, &game_tuple, &vars, node, body);
        let claim = f.get(node, rule);
        let eloise_wins = claim == (game.winner == Winner::Eloise);
        self.log.push(format!(
            "challenge at node {node}, predicate {}: membership {claim}, formula game won by {}",
            self.program.rules[rule].head, game.winner
        ));
        self.state = SessionState::Terminal {
            winner: if eloise_wins {
                Winner::Eloise
            } else {
                Winner::Abelard
            },
            rule: if final_position {
                "final-declaration-check"
            } else {
                "challenge-check"
            },
        };
        Ok(())
    }

    fn tuple_from_rows(&self, rows: &[Vec<String>]) -> Result<GlobalConfiguration, GameError> {
        if rows.len() != self.pm.model.node_count {
            return Err(Self::illegal(
                "global-declare",
                format!("a tuple needs one row per node ({})", self.pm.model.node_count),
            ));
        }
        let mut g = GlobalConfiguration::empty(self.pm.model.node_count, self.program.rules.len());
        for (node, row) in rows.iter().enumerate() {
            for name in row {
                let idx = self.program.rule_index(name).ok_or_else(|| {
                    Self::illegal("global-declare", format!("unknown predicate {name}"))
                })?;
                g.set(node, idx, true);
            }
        }
        Ok(g)
    }

    /// Advance through automatic continuations and settle terminal checks.
    fn settle(&mut self) {
        loop {
            let SessionState::AtPosition {
                verifier,
                node,
                occurrence,
                clock,
                chosen_set,
            } = &self.state
            else {
                return;
            };
            let (verifier, node, occurrence, clock) = (*verifier, *node, *occurrence, *clock);
            if chosen_set.is_some() {
                return;
            }
            match &self.occs.ops[occurrence] {
                OccOp::Top => {
                    self.finish(verifier, "constant-terminal");
                    return;
                }
                OccOp::Bottom => {
                    self.finish(verifier.other(), "constant-terminal");
                    return;
                }
                OccOp::Prop(name) => {
                    let holds = self.pm.model.holds(node, name);
                    self.log.push(format!("atom {name} at node {node}: {holds}"));
                    self.finish(
                        if holds { verifier } else { verifier.other() },
                        "atom-terminal",
                    );
                    return;
                }
                OccOp::Not(c) => {
                    self.log.push("negation: verifier swaps".into());
                    self.state = SessionState::AtPosition {
                        verifier: verifier.other(),
                        node,
                        occurrence: *c,
                        clock,
                        chosen_set: None,
                    };
                }
                OccOp::Var(rule) => {
                    if self.kind == GameKind::Async {
                        return; // awaiting the verifier's choice
                    }
                    let clk = clock.expect("standard positions are clocked");
                    let (target, next_clock) = if clk > 0 {
                        (self.occs.ind_root[*rule], clk - 1)
                    } else {
                        (self.occs.base_root[*rule], 0)
                    };
                    self.log.push(format!(
                        "variable {}: clock {clk} -> {next_clock}",
                        self.program.rules[*rule].head
                    ));
                    self.state = SessionState::AtPosition {
                        verifier,
                        node,
                        occurrence: target,
                        clock: Some(next_clock),
                        chosen_set: None,
                    };
                }
                op => {
                    // Modal positions: if the chooser cannot supply the set,
                    // the opposite side wins immediately.
                    if let Some((k, _c, local, rule_name)) = modal_parts(op) {
                        let pool = if local {
                            self.pm.model.successors(node).len()
                        } else {
                            self.pm.model.node_count
                        };
                        if (pool as u64) < u64::from(k) {
                            let chooser = modal_chooser(op, verifier);
                            self.log.push(format!(
                                "{chooser} cannot choose {k} distinct nodes"
                            ));
                            self.finish(chooser.other(), rule_name);
                        }
                        return;
                    }
                    return;
                }
            }
        }
    }

    fn finish(&mut self, winner: Player, rule: &'static str) {
        let w = match winner {
            Player::Eloise => Winner::Eloise,
            Player::Abelard => Winner::Abelard,
        };
        self.state = SessionState::Terminal { winner: w, rule };
    }
}

/// (threshold, child occurrence, local?, rule identifier) of a modal op.
fn modal_parts(op: &OccOp) -> Option<(u32, usize, bool, &'static str)> {
    match op {
        OccOp::Dia(k, c) => Some((*k, *c, true, "diamond-witness")),
        OccOp::Box_(k, c) => Some((*k, *c, true, "box-witness")),
        OccOp::GDia(k, c) => Some((*k, *c, false, "global-diamond-witness")),
        OccOp::GBox(k, c) => Some((*k, *c, false, "global-box-witness")),
        _ => None,
    }
}

/// Who submits the set at a modal position.
fn modal_chooser(op: &OccOp, verifier: Player) -> Player {
    match op {
        OccOp::Dia(_, _) | OccOp::GDia(_, _) => verifier,
        _ => verifier.other(),
    }
}

/// Validate one move against a session; the engine behind interactive play.
pub fn referee_apply(session: &mut Session, mv: SessionMove) -> Result<(), GameError> {
    session.apply(mv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{centre_point_program, counting_example};
    use crate::model::bare_path;

    #[test]
    fn diamond_without_enough_neighbours_ends_the_game() {
        // At ◇≥2 with one successor the verifier cannot choose, falsifier wins.
        let p = counting_example();
        let pm = bare_path(2);
        let mut s = Session::new(GameKind::Standard, p, pm);
        s.apply(SessionMove::PickInitialStd {
            rule: 0,
            base: false,
            clock: 1,
        })
        .unwrap();
        // induction body Y & <2> X: falsifier (Abelard) picks the conjunct.
        s.apply(SessionMove::PickBranch(false)).unwrap();
        match s.state {
            SessionState::Terminal { winner, rule } => {
                assert_eq!(winner, Winner::Abelard);
                assert_eq!(rule, "diamond-witness");
            }
            ref st => panic!("expected terminal, got {st:?}"),
        }
    }

    #[test]
    fn variable_at_clock_zero_enters_base_body() {
        let p = centre_point_program();
        let pm = bare_path(2);
        let mut s = Session::new(GameKind::Standard, p, pm);
        s.apply(SessionMove::PickInitialStd {
            rule: 0,
            base: false,
            clock: 0,
        })
        .unwrap();
        // ◇X ∧ □X; falsifier picks left = ◇X; verifier submits {1}; falsifier
        // picks 1; the variable at clock 0 continues into the base body □F.
        s.apply(SessionMove::PickBranch(true)).unwrap();
        s.apply(SessionMove::PickSet(vec![1])).unwrap();
        s.apply(SessionMove::PickNode(1)).unwrap();
        // Node 1 is a dead end: □F holds, and the box move terminates with
        // the chooser (falsifier) unable to choose.
        match s.state {
            SessionState::Terminal { winner, .. } => assert_eq!(winner, Winner::Eloise),
            ref st => panic!("expected terminal, got {st:?}"),
        }
        assert!(s.log().iter().any(|l| l.contains("clock 0 -> 0")));
    }

    #[test]
    fn non_neighbour_in_diamond_set_is_illegal() {
        let p = centre_point_program();
        let pm = bare_path(3);
        let mut s = Session::new(GameKind::Standard, p, pm);
        s.apply(SessionMove::PickInitialStd {
            rule: 0,
            base: false,
            clock: 2,
        })
        .unwrap();
        s.apply(SessionMove::PickBranch(true)).unwrap();
        let err = s.apply(SessionMove::PickSet(vec![2])).unwrap_err();
        match err {
            GameError::IllegalMove { rule, .. } => assert_eq!(rule, "diamond-witness"),
            e => panic!("expected illegal move, got {e}"),
        }
    }

    #[test]
    fn global_session_play() {
        let p = centre_point_program();
        let pm = bare_path(2);
        // g_1 = {X@0}, g_0 = {X@1}.
        let mut s = Session::new(GameKind::Global, p, pm);
        s.apply(SessionMove::ProvideTuple(vec![vec!["X".into()], vec![]]))
            .unwrap();
        s.apply(SessionMove::ProvideTuple(vec![vec![], vec!["X".into()]]))
            .unwrap();
        s.apply(SessionMove::Challenge(true)).unwrap();
        s.apply(SessionMove::PickChallenge { node: 0, rule: 0 }).unwrap();
        match s.state {
            SessionState::Terminal { winner, .. } => assert_eq!(winner, Winner::Eloise),
            ref st => panic!("expected terminal, got {st:?}"),
        }
    }
}
