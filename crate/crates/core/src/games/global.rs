//! The global game: positions are whole labeled tuples, Eloise walks
//! backward from an accepting configuration to the initial one, and Abelard
//! may challenge any step, which resolves through a formula game.

use super::formula::solve_formula_game;
use super::{GameOutcome, Winner};
use crate::error::GameError;
use crate::eval::{run_trace, Verdict};
use crate::model::{GlobalConfiguration, PointedModel};
use crate::syntax::Program;

/// Eloise's winning strategy: the configuration trace `g_0..g_k`. She plays
/// it backward (`g_k` first, declaring `g_0` final) and answers challenges
/// with formula games.
#[derive(Debug, Clone)]
pub struct GlobalStrategy {
    pub rounds: Vec<GlobalConfiguration>,
}

/// What a challenge resolves to: the membership claim, the formula game
/// outcome, and whether the required biconditional held (it always does for
/// traces produced by an accepting run).
#[derive(Debug, Clone)]
pub struct ChallengeAnswer {
    pub claim_holds: bool,
    pub game: GameOutcome,
    pub eloise_wins: bool,
}

impl GlobalStrategy {
    /// Number of backward moves Eloise makes (k).
    pub fn steps(&self) -> usize {
        self.rounds.len() - 1
    }

    /// Positions in play order: `g_k`, …, `g_0`.
    pub fn backward(&self) -> impl Iterator<Item = &GlobalConfiguration> {
        self.rounds.iter().rev()
    }

    /// Abelard challenges the step where Eloise produced `g_i` from the
    /// position `f = g_{i+1}`, naming a node and a rule: Eloise wins iff
    /// membership of the head in `f` matches the induction-body formula game
    /// over `M` labeled with `g_i`.
    pub fn answer_induction_challenge(
        &self,
        p: &Program,
        pm: &PointedModel,
        i: usize,
        node: usize,
        rule: usize,
    ) -> ChallengeAnswer {
        let f = &self.rounds[i + 1];
        let g = &self.rounds[i];
        let vars: Vec<String> = p.rules.iter().map(|r| r.head.clone()).collect();
        let game = solve_formula_game(&pm.model, g, &vars, node, &p.rules[rule].induction);
        let claim_holds = f.get(node, rule);
        ChallengeAnswer {
            claim_holds,
            eloise_wins: claim_holds == (game.winner == Winner::Eloise),
            game,
        }
    }

    /// Abelard challenges the final declaration on `g_0` with a base rule.
    pub fn answer_final_challenge(
        &self,
        p: &Program,
        pm: &PointedModel,
        node: usize,
        rule: usize,
    ) -> ChallengeAnswer {
        let g0 = &self.rounds[0];
        let empty = GlobalConfiguration::empty(pm.model.node_count, p.rules.len());
        let vars: Vec<String> = p.rules.iter().map(|r| r.head.clone()).collect();
        let game = solve_formula_game(&pm.model, &empty, &vars, node, &p.rules[rule].base);
        let claim_holds = g0.get(node, rule);
        ChallengeAnswer {
            claim_holds,
            eloise_wins: claim_holds == (game.winner == Winner::Eloise),
            game,
        }
    }
}

/// Eloise has a winning strategy iff the run accepts; the strategy is the
/// backward configuration trace to the smallest accepting round.
pub fn global_game_eloise_strategy(
    p: &Program,
    pm: &PointedModel,
) -> Result<Option<GlobalStrategy>, GameError> {
    let (verdict, trace) = run_trace(p, pm, None).map_err(|e| match e {
        crate::error::EvalError::RoundCapExceeded(n) => GameError::RoundCapExceeded(n),
        crate::error::EvalError::NotSynchronous => GameError::WrongSemantics("synchronous"),
    })?;
    match verdict {
        Verdict::AcceptedAt(k) => {
            let rounds = trace.into_iter().take(k as usize + 1).collect();
            Ok(Some(GlobalStrategy { rounds }))
        }
        _ => Ok(None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::centre_point_program;
    use crate::model::bare_path;

    #[test]
    fn trace_shape_on_path() {
        let p = centre_point_program();
        let pm = bare_path(3);
        let s = global_game_eloise_strategy(&p, &pm).unwrap().unwrap();
        assert_eq!(s.rounds.len(), 3);
        // g_0 marks exactly the dead end.
        let g0 = &s.rounds[0];
        assert_eq!((0..3).map(|v| g0.get(v, 0)).collect::<Vec<_>>(), [false, false, true]);
        // The initial position (played first) accepts at the point.
        assert!(s.rounds.last().unwrap().get(pm.point, 0));
    }

    #[test]
    fn no_strategy_when_not_accepted() {
        let p = centre_point_program();
        let m = crate::model::KripkeModel::new(
            1,
            [(0usize, 0usize)],
            vec![Default::default()],
            Default::default(),
        )
        .unwrap();
        let pm = crate::model::PointedModel::new(m, 0).unwrap();
        assert!(global_game_eloise_strategy(&p, &pm).unwrap().is_none());
    }

    #[test]
    fn all_challenges_answered_winningly() {
        let p = centre_point_program();
        let pm = bare_path(3);
        let s = global_game_eloise_strategy(&p, &pm).unwrap().unwrap();
        for i in 0..s.steps() {
            for node in 0..3 {
                for rule in 0..p.rules.len() {
                    let ans = s.answer_induction_challenge(&p, &pm, i, node, rule);
                    assert!(ans.eloise_wins, "challenge at step {i}, node {node}");
                }
            }
        }
        for node in 0..3 {
            for rule in 0..p.rules.len() {
                assert!(s.answer_final_challenge(&p, &pm, node, rule).eloise_wins);
            }
        }
    }
}
