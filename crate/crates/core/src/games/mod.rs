//! Semantic games: the standard clocked game, the global configuration game,
//! the asynchronous game, and an interactive move-validating session.

pub mod arena;
mod asynch;
mod formula;
mod global;
pub(crate) mod occs;
mod session;
mod standard;

pub use asynch::{
    solve_async_arena, solve_async_game, solve_async_game_any, AsyncArena, AsyncPosition,
    AsyncSolution,
};
pub use formula::solve_formula_game;
pub use global::{global_game_eloise_strategy, ChallengeAnswer, GlobalStrategy};
pub use session::{referee_apply, GameKind, Session, SessionMove, SessionState};
pub use standard::{solve_standard_game, solve_standard_game_bounded, StdPosition};

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Player {
    Eloise,
    Abelard,
}

impl Player {
    pub fn other(self) -> Player {
        match self {
            Player::Eloise => Player::Abelard,
            Player::Abelard => Player::Eloise,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Player::Eloise => f.write_str("Eloise"),
            Player::Abelard => f.write_str("Abelard"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Winner {
    Eloise,
    Abelard,
    /// Only infinite plays exist from the position (asynchronous and
    /// formula-file games only).
    NoWinner,
}

impl fmt::Display for Winner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Winner::Eloise => f.write_str("Eloise"),
            Winner::Abelard => f.write_str("Abelard"),
            Winner::NoWinner => f.write_str("no winner"),
        }
    }
}

/// Result of solving a game: the winner and, when Eloise wins, a move trace
/// witnessing one winning play.
#[derive(Debug, Clone)]
pub struct GameOutcome {
    pub winner: Winner,
    pub witness: Vec<String>,
}

impl GameOutcome {
    pub fn eloise_wins(&self) -> bool {
        self.winner == Winner::Eloise
    }
}
