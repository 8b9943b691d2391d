//! Alternating reachability on finite arenas, with counting positions so
//! that "choose k distinct, opponent picks one" moves need no set-valued
//! positions: the chooser wins through such a node iff at least k successors
//! are winning, the picker iff fewer than k successors are non-winning.

use std::collections::HashMap;
use std::hash::Hash;

use super::Player;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PosKind {
    /// Play ends; `None` means the play just stops with no winner.
    Terminal(Option<Player>),
    /// Exactly one successor, no choice.
    Auto,
    /// The given player picks a successor.
    Choice(Player),
    /// The chooser submits k distinct successors, the opponent picks one.
    Count { chooser: Player, k: u32 },
}

pub trait Arena {
    type Pos: Eq + Hash + Clone;
    fn kind(&self, pos: &Self::Pos) -> PosKind;
    fn successors(&self, pos: &Self::Pos) -> Vec<Self::Pos>;
    fn positions(&self) -> Vec<Self::Pos>;
}

/// Attractor of `player`: positions from which they force a win in finitely
/// many moves. Ranks record the iteration a position entered at; along a
/// play following the induced strategy the rank strictly decreases.
pub struct Attractor<P: Eq + Hash + Clone> {
    pub rank: HashMap<P, u32>,
}

impl<P: Eq + Hash + Clone> Attractor<P> {
    pub fn contains(&self, pos: &P) -> bool {
        self.rank.contains_key(pos)
    }
}

pub fn attractor<A: Arena>(arena: &A, player: Player) -> Attractor<A::Pos> {
    let positions = arena.positions();
    let mut rank: HashMap<A::Pos, u32> = HashMap::new();
    let mut round: u32 = 0;
    loop {
        round += 1;
        let mut grew = false;
        for pos in &positions {
            if rank.contains_key(pos) {
                continue;
            }
            let wins = match arena.kind(pos) {
                PosKind::Terminal(w) => w == Some(player),
                PosKind::Auto => arena
                    .successors(pos)
                    .first()
                    .is_some_and(|s| rank.contains_key(s)),
                PosKind::Choice(q) => {
                    // A player with no legal choice loses.
                    let succs = arena.successors(pos);
                    if q == player {
                        succs.iter().any(|s| rank.contains_key(s))
                    } else {
                        succs.iter().all(|s| rank.contains_key(s))
                    }
                }
                PosKind::Count { chooser, k } => {
                    let succs = arena.successors(pos);
                    if chooser == player {
                        let wins = succs.iter().filter(|s| rank.contains_key(s)).count();
                        wins as u64 >= u64::from(k)
                    } else {
                        let losses = succs.iter().filter(|s| !rank.contains_key(s)).count();
                        (losses as u64) < u64::from(k)
                    }
                }
            };
            if wins {
                rank.insert(pos.clone(), round);
                grew = true;
            }
        }
        if !grew {
            return Attractor { rank };
        }
    }
}

/// The winner-forcing successor for `player` at a position of their
/// attractor: any successor of strictly smaller rank.
pub fn strategy_choice<A: Arena>(
    arena: &A,
    attr: &Attractor<A::Pos>,
    pos: &A::Pos,
) -> Option<A::Pos> {
    let my_rank = *attr.rank.get(pos)?;
    arena
        .successors(pos)
        .into_iter()
        .filter(|s| attr.rank.get(s).is_some_and(|&r| r < my_rank))
        .min_by_key(|s| attr.rank[s])
}
