//! The asynchronous game: clockless positions, the verifier picks base or
//! induction body at each variable, infinite plays have no winner. Solved by
//! alternating reachability on the finite position arena.

use super::arena::{attractor, strategy_choice, Arena, Attractor, PosKind};
use super::occs::{OccOp, OccTable};
use super::{GameOutcome, Player, Winner};
use crate::error::GameError;
use crate::model::PointedModel;
use crate::syntax::Program;

/// Position of the asynchronous game.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AsyncPosition {
    pub verifier: Player,
    pub node: usize,
    pub occurrence: usize,
}

pub struct AsyncArena<'a> {
    p: &'a Program,
    pm: &'a PointedModel,
    pub occs: OccTable,
}

impl<'a> AsyncArena<'a> {
    pub fn new(p: &'a Program, pm: &'a PointedModel) -> AsyncArena<'a> {
        AsyncArena {
            p,
            pm,
            occs: OccTable::new(p),
        }
    }

    /// Initial positions: Eloise at the point, at the base or induction body
    /// of each accepting predicate.
    pub fn initial_positions(&self) -> Vec<AsyncPosition> {
        let mut out = Vec::new();
        for (i, r) in self.p.rules.iter().enumerate() {
            if self.p.accepting.contains(&r.head) {
                for occ in [self.occs.base_root[i], self.occs.ind_root[i]] {
                    out.push(AsyncPosition {
                        verifier: Player::Eloise,
                        node: self.pm.point,
                        occurrence: occ,
                    });
                }
            }
        }
        out
    }
}

impl<'a> Arena for AsyncArena<'a> {
    type Pos = AsyncPosition;

    fn kind(&self, pos: &AsyncPosition) -> PosKind {
        let v = pos.verifier;
        match &self.occs.ops[pos.occurrence] {
            OccOp::Top => PosKind::Terminal(Some(v)),
            OccOp::Bottom => PosKind::Terminal(Some(v.other())),
            OccOp::Prop(name) => {
                let w = if self.pm.model.holds(pos.node, name) {
                    v
                } else {
                    v.other()
                };
                PosKind::Terminal(Some(w))
            }
            // The verifier chooses base or induction body.
            OccOp::Var(_) => PosKind::Choice(v),
            OccOp::Not(_) => PosKind::Auto,
            OccOp::Or(_, _) => PosKind::Choice(v),
            OccOp::And(_, _) => PosKind::Choice(v.other()),
            OccOp::Dia(k, _) => PosKind::Count { chooser: v, k: *k },
            OccOp::Box_(k, _) => PosKind::Count {
                chooser: v.other(),
                k: *k,
            },
            OccOp::GDia(k, _) => PosKind::Count { chooser: v, k: *k },
            OccOp::GBox(k, _) => PosKind::Count {
                chooser: v.other(),
                k: *k,
            },
        }
    }

    fn successors(&self, pos: &AsyncPosition) -> Vec<AsyncPosition> {
        let same = |occurrence: usize| AsyncPosition {
            occurrence,
            ..*pos
        };
        match &self.occs.ops[pos.occurrence] {
            OccOp::Top | OccOp::Bottom | OccOp::Prop(_) => vec![],
            OccOp::Var(rule) => vec![
                same(self.occs.base_root[*rule]),
                same(self.occs.ind_root[*rule]),
            ],
            OccOp::Not(c) => vec![AsyncPosition {
                verifier: pos.verifier.other(),
                node: pos.node,
                occurrence: *c,
            }],
            OccOp::Or(a, b) | OccOp::And(a, b) => vec![same(*a), same(*b)],
            OccOp::Dia(_, c) | OccOp::Box_(_, c) => self
                .pm
                .model
                .successors(pos.node)
                .into_iter()
                .map(|u| AsyncPosition {
                    verifier: pos.verifier,
                    node: u,
                    occurrence: *c,
                })
                .collect(),
            OccOp::GDia(_, c) | OccOp::GBox(_, c) => (0..self.pm.model.node_count)
                .map(|u| AsyncPosition {
                    verifier: pos.verifier,
                    node: u,
                    occurrence: *c,
                })
                .collect(),
        }
    }

    fn positions(&self) -> Vec<AsyncPosition> {
        let mut out = Vec::new();
        for verifier in [Player::Eloise, Player::Abelard] {
            for node in 0..self.pm.model.node_count {
                for occurrence in 0..self.occs.len() {
                    out.push(AsyncPosition {
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

/// Both attractors plus the occurrence table, for strategy replay.
pub struct AsyncSolution<'a> {
    pub arena: AsyncArena<'a>,
    pub eloise: Attractor<AsyncPosition>,
    pub abelard: Attractor<AsyncPosition>,
}

impl<'a> AsyncSolution<'a> {
    /// Value of a single position.
    pub fn value(&self, pos: &AsyncPosition) -> Winner {
        if self.eloise.contains(pos) {
            Winner::Eloise
        } else if self.abelard.contains(pos) {
            Winner::Abelard
        } else {
            Winner::NoWinner
        }
    }

    pub fn eloise_choice(&self, pos: &AsyncPosition) -> Option<AsyncPosition> {
        strategy_choice(&self.arena, &self.eloise, pos)
    }
}

pub fn solve_async_arena<'a>(p: &'a Program, pm: &'a PointedModel) -> AsyncSolution<'a> {
    let arena = AsyncArena::new(p, pm);
    let eloise = attractor(&arena, Player::Eloise);
    let abelard = attractor(&arena, Player::Abelard);
    AsyncSolution {
        arena,
        eloise,
        abelard,
    }
}

/// Eloise wins iff some initial position is in her attractor; otherwise she
/// has no winning initial choice and Abelard wins the game. The witness is a
/// principal play along decreasing attractor ranks.
pub fn solve_async_game(p: &Program, pm: &PointedModel) -> Result<GameOutcome, GameError> {
    if !p.is_async() {
        return Err(GameError::WrongSemantics("asynchronous"));
    }
    Ok(solve_async_game_any(p, pm))
}

/// As [`solve_async_game`] without the semantics-tag check (used by the
/// translations, which read any program asynchronously).
pub fn solve_async_game_any(p: &Program, pm: &PointedModel) -> GameOutcome {
    let sol = solve_async_arena(p, pm);
    let start = sol
        .arena
        .initial_positions()
        .into_iter()
        .filter(|pos| sol.eloise.contains(pos))
        .min_by_key(|pos| sol.eloise.rank[pos]);
    match start {
        Some(mut pos) => {
            let mut witness = Vec::new();
            loop {
                witness.push(format!(
                    "({}, node {}, {})",
                    pos.verifier, pos.node, sol.arena.occs.text[pos.occurrence]
                ));
                match sol.arena.kind(&pos) {
                    PosKind::Terminal(_) => break,
                    PosKind::Auto => pos = sol.arena.successors(&pos)[0],
                    _ => match sol.eloise_choice(&pos) {
                        Some(next) => pos = next,
                        None => break,
                    },
                }
            }
            GameOutcome {
                winner: Winner::Eloise,
                witness,
            }
        }
        None => GameOutcome {
            winner: Winner::Abelard,
            witness: Vec::new(),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{bare_path, KripkeModel, PointedModel};
    use crate::syntax::{Rule, Schema, Semantics};
    use std::collections::BTreeSet;

    fn async_program(base: Schema, induction: Schema) -> Program {
        Program::new(
            vec![Rule {
                head: "X".into(),
                base,
                induction,
            }],
            ["X".to_string()].into(),
            BTreeSet::new(),
            Semantics::Asynchronous,
        )
        .unwrap()
    }

    #[test]
    fn base_escape_wins() {
        // X(0):-p, X:-◇X on a p-node with no successors: Eloise picks the
        // base body.
        let p = async_program(Schema::prop("p"), Schema::dia(1, Schema::var("X")));
        let m = KripkeModel::sc_model(["p".to_string()].into(), ["p".to_string()].into());
        let pm = PointedModel::new(m, 0).unwrap();
        assert_eq!(solve_async_game(&p, &pm).unwrap().winner, Winner::Eloise);
    }

    #[test]
    fn pure_loop_has_no_winning_choice() {
        // X(0):-⊥, X:-X: the induction loop never ends and the base body
        // loses, so Abelard wins the game overall while the loop position
        // itself has no winner.
        let p = async_program(Schema::Bottom, Schema::var("X"));
        let pm = bare_path(1);
        let out = solve_async_game(&p, &pm).unwrap();
        assert_eq!(out.winner, Winner::Abelard);

        let sol = solve_async_arena(&p, &pm);
        let loop_pos = AsyncPosition {
            verifier: Player::Eloise,
            node: 0,
            occurrence: sol.arena.occs.ind_root[0],
        };
        assert_eq!(sol.value(&loop_pos), Winner::NoWinner);
    }

    #[test]
    fn sync_program_is_rejected() {
        let mut p = async_program(Schema::Top, Schema::var("X"));
        p.semantics = Semantics::Synchronous;
        assert!(solve_async_game(&p, &bare_path(1)).is_err());
    }
}
