//! The clocked semantic game. The unbounded solver rides on evaluation (the
//! game and the run semantics agree); the bounded solver is an independent
//! backward induction used to cross-check it.

use std::collections::HashMap;

use super::occs::{OccOp, OccTable};
use super::{GameOutcome, Player, Winner};
use crate::error::GameError;
use crate::eval::{run, Verdict};
use crate::model::PointedModel;
use crate::syntax::Program;

/// Position of the clocked game.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StdPosition {
    pub verifier: Player,
    pub node: usize,
    pub occurrence: usize,
    pub clock: u64,
}

/// Solve via the run semantics: Eloise wins iff some round accepts (the
/// rejecting set plays no role here). On a win, the witness records the
/// minimal accepting round as the initial clock and a principal play from
/// the backward induction.
pub fn solve_standard_game(p: &Program, pm: &PointedModel) -> Result<GameOutcome, GameError> {
    let verdict = run(p, pm, None).map_err(|e| match e {
        crate::error::EvalError::RoundCapExceeded(n) => GameError::RoundCapExceeded(n),
        crate::error::EvalError::NotSynchronous => GameError::WrongSemantics("synchronous"),
    })?;
    match verdict {
        Verdict::AcceptedAt(n) => {
            let solver = BoundedSolver::new(p, pm, n.saturating_sub(1));
            let mut witness = vec![format!("initial clock {n}")];
            // The accepting round picks the initial body: the base rule at
            // round zero, the induction rule with clock n-1 otherwise.
            let accepting_idx = p
                .rules
                .iter()
                .enumerate()
                .filter(|(_, r)| p.accepting.contains(&r.head))
                .map(|(i, _)| i);
            let mut start = None;
            for i in accepting_idx {
                let pos = if n == 0 {
                    StdPosition {
                        verifier: Player::Eloise,
                        node: pm.point,
                        occurrence: solver.occs.base_root[i],
                        clock: 0,
                    }
                } else {
                    StdPosition {
                        verifier: Player::Eloise,
                        node: pm.point,
                        occurrence: solver.occs.ind_root[i],
                        clock: n - 1,
                    }
                };
                if solver.wins(pos) {
                    start = Some(pos);
                    break;
                }
            }
            let start = start.expect("run accepted, so some initial position wins");
            solver.principal_play(start, &mut witness);
            Ok(GameOutcome {
                winner: Winner::Eloise,
                witness,
            })
        }
        _ => Ok(GameOutcome {
            winner: Winner::Abelard,
            witness: Vec::new(),
        }),
    }
}

/// Backward induction over the finite arena with clocks at most `bound`.
/// Makes no use of the run semantics. Eloise wins iff some initial position
/// (base body at clock 0, or induction body at any clock up to the bound)
/// wins for her.
pub fn solve_standard_game_bounded(
    p: &Program,
    pm: &PointedModel,
    bound: u64,
) -> GameOutcome {
    let solver = BoundedSolver::new(p, pm, bound);
    if p.accepting.is_empty() {
        // No initial position to choose: Eloise automatically loses.
        return GameOutcome {
            winner: Winner::Abelard,
            witness: Vec::new(),
        };
    }
    for (i, r) in p.rules.iter().enumerate() {
        if !p.accepting.contains(&r.head) {
            continue;
        }
        let mut starts = vec![StdPosition {
            verifier: Player::Eloise,
            node: pm.point,
            occurrence: solver.occs.base_root[i],
            clock: 0,
        }];
        for clock in 0..=bound {
            starts.push(StdPosition {
                verifier: Player::Eloise,
                node: pm.point,
                occurrence: solver.occs.ind_root[i],
                clock,
            });
        }
        for pos in starts {
            if solver.wins(pos) {
                let mut witness = vec![format!("initial clock {}", pos.clock)];
                solver.principal_play(pos, &mut witness);
                return GameOutcome {
                    winner: Winner::Eloise,
                    witness,
                };
            }
        }
    }
    GameOutcome {
        winner: Winner::Abelard,
        witness: Vec::new(),
    }
}

struct BoundedSolver<'a> {
    p: &'a Program,
    pm: &'a PointedModel,
    occs: OccTable,
    memo: std::cell::RefCell<HashMap<StdPosition, bool>>,
}

impl<'a> BoundedSolver<'a> {
    fn new(p: &'a Program, pm: &'a PointedModel, _bound: u64) -> BoundedSolver<'a> {
        BoundedSolver {
            p,
            pm,
            occs: OccTable::new(p),
            memo: std::cell::RefCell::new(HashMap::new()),
        }
    }

    /// Eloise wins from `pos`.
    fn wins(&self, pos: StdPosition) -> bool {
        if let Some(&w) = self.memo.borrow().get(&pos) {
            return w;
        }
        let result = self.compute(pos);
        self.memo.borrow_mut().insert(pos, result);
        result
    }

    fn compute(&self, pos: StdPosition) -> bool {
        let StdPosition {
            verifier,
            node,
            occurrence,
            clock,
        } = pos;
        let next = |occurrence: usize, node: usize| StdPosition {
            verifier,
            node,
            occurrence,
            clock,
        };
        match &self.occs.ops[occurrence] {
            OccOp::Top => verifier == Player::Eloise,
            OccOp::Bottom => verifier == Player::Abelard,
            OccOp::Prop(name) => {
                (self.pm.model.holds(node, name)) == (verifier == Player::Eloise)
            }
            OccOp::Var(rule) => {
                // Clock positive: induction body one tick earlier; at zero
                // the base body without decrement.
                if clock > 0 {
                    self.wins(StdPosition {
                        verifier,
                        node,
                        occurrence: self.occs.ind_root[*rule],
                        clock: clock - 1,
                    })
                } else {
                    self.wins(next(self.occs.base_root[*rule], node))
                }
            }
            OccOp::Not(c) => self.wins(StdPosition {
                verifier: verifier.other(),
                node,
                occurrence: *c,
                clock,
            }),
            OccOp::Or(a, b) => {
                let (wa, wb) = (self.wins(next(*a, node)), self.wins(next(*b, node)));
                if verifier == Player::Eloise {
                    wa || wb
                } else {
                    wa && wb
                }
            }
            OccOp::And(a, b) => {
                let (wa, wb) = (self.wins(next(*a, node)), self.wins(next(*b, node)));
                if verifier == Player::Abelard {
                    wa || wb
                } else {
                    wa && wb
                }
            }
            OccOp::Dia(k, c) => self.count_move(verifier, *k, *c, pos, true, true),
            OccOp::Box_(k, c) => self.count_move(verifier, *k, *c, pos, false, true),
            OccOp::GDia(k, c) => self.count_move(verifier, *k, *c, pos, true, false),
            OccOp::GBox(k, c) => self.count_move(verifier, *k, *c, pos, false, false),
        }
    }

    /// "Chooser submits k distinct nodes, the other side picks one." For
    /// diamonds the chooser is the verifier, for boxes the falsifier.
    fn count_move(
        &self,
        verifier: Player,
        k: u32,
        child: usize,
        pos: StdPosition,
        dia: bool,
        local: bool,
    ) -> bool {
        let pool: Vec<usize> = if local {
            self.pm.model.successors(pos.node)
        } else {
            (0..self.pm.model.node_count).collect()
        };
        let chooser = if dia { verifier } else { verifier.other() };
        let wins: Vec<bool> = pool
            .iter()
            .map(|&u| {
                self.wins(StdPosition {
                    verifier,
                    node: u,
                    occurrence: child,
                    clock: pos.clock,
                })
            })
            .collect();
        if chooser == Player::Eloise {
            wins.iter().filter(|&&w| w).count() as u64 >= u64::from(k)
        } else {
            (wins.iter().filter(|&&w| !w).count() as u64) < u64::from(k)
        }
    }

    /// Walk one winning play, Eloise optimal and the opponent first-legal.
    fn principal_play(&self, mut pos: StdPosition, out: &mut Vec<String>) {
        loop {
            debug_assert!(self.wins(pos));
            out.push(format!(
                "({}, node {}, {}, clock {})",
                pos.verifier, pos.node, self.occs.text[pos.occurrence], pos.clock
            ));
            let step = |occurrence: usize, node: usize| StdPosition {
                occurrence,
                node,
                ..pos
            };
            match &self.occs.ops[pos.occurrence] {
                OccOp::Top | OccOp::Bottom | OccOp::Prop(_) => return,
                OccOp::Var(rule) => {
                    pos = if pos.clock > 0 {
                        StdPosition {
                            occurrence: self.occs.ind_root[*rule],
                            clock: pos.clock - 1,
                            ..pos
                        }
                    } else {
                        step(self.occs.base_root[*rule], pos.node)
                    };
                }
                OccOp::Not(c) => {
                    pos = StdPosition {
                        verifier: pos.verifier.other(),
                        occurrence: *c,
                        ..pos
                    };
                }
                OccOp::Or(a, b) | OccOp::And(a, b) => {
                    let pa = step(*a, pos.node);
                    pos = if self.wins(pa) { pa } else { step(*b, pos.node) };
                }
                OccOp::Dia(_, c) | OccOp::Box_(_, c) | OccOp::GDia(_, c) | OccOp::GBox(_, c) => {
                    let local = matches!(
                        self.occs.ops[pos.occurrence],
                        OccOp::Dia(_, _) | OccOp::Box_(_, _)
                    );
                    let pool: Vec<usize> = if local {
                        self.pm.model.successors(pos.node)
                    } else {
                        (0..self.pm.model.node_count).collect()
                    };
                    match pool.into_iter().find(|&u| self.wins(step(*c, u))) {
                        Some(u) => pos = step(*c, u),
                        None => {
                            out.push("opponent cannot supply the required set".into());
                            return;
                        }
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::centre_point_program;
    use crate::model::bare_path;

    #[test]
    fn centre_point_game_matches_run() {
        let p = centre_point_program();
        let pm = bare_path(3);
        let out = solve_standard_game(&p, &pm).unwrap();
        assert_eq!(out.winner, Winner::Eloise);
        assert_eq!(out.witness.first().unwrap(), "initial clock 2");
    }

    #[test]
    fn empty_accepting_set_loses_automatically() {
        let mut p = centre_point_program();
        p.accepting.clear();
        let pm = bare_path(3);
        assert_eq!(solve_standard_game(&p, &pm).unwrap().winner, Winner::Abelard);
        assert_eq!(
            solve_standard_game_bounded(&p, &pm, 5).winner,
            Winner::Abelard
        );
    }

    #[test]
    fn bounded_agrees_at_zero_with_base_bodies() {
        // With bound 0 the game reduces to formula games on base bodies
        // (plus single-step induction bodies).
        let p = centre_point_program();
        let one = bare_path(1);
        let out = solve_standard_game_bounded(&p, &one, 0);
        // The single node is a dead end, so the base body wins at round 0.
        assert_eq!(out.winner, Winner::Eloise);
    }

    #[test]
    fn bounded_agrees_with_unbounded_on_paths() {
        let p = centre_point_program();
        for len in 1..=5 {
            let pm = bare_path(len);
            let unbounded = solve_standard_game(&p, &pm).unwrap();
            let bounded = solve_standard_game_bounded(&p, &pm, 12);
            assert_eq!(unbounded.winner, bounded.winner, "path length {len}");
        }
    }

    #[test]
    fn raising_the_bound_never_flips_to_abelard() {
        let p = centre_point_program();
        let pm = bare_path(4);
        let mut won = false;
        for bound in 0..10 {
            let now = solve_standard_game_bounded(&p, &pm, bound).winner == Winner::Eloise;
            assert!(now || !won, "win lost when bound grew to {bound}");
            won = now;
        }
    }
}
