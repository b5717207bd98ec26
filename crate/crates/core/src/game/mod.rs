//! The string-painting game.
//!
//! Alice paints strings green, Bob paints strings red, and they alternate
//! with Alice moving first. Alice may paint at most `w` distinct strings of
//! each length; Bob is unconstrained. Alice wins outright once some length
//! carries `w` strings painted by both players. Her other win condition
//! (an infinite lex-first green path with infinitely many non-red nodes) is
//! infinitary, so only a finite-horizon diagnostic is reported for it.

mod alice;
mod bob;

use std::collections::{BTreeMap, HashSet};

use serde::Serialize;
use thiserror::Error;

use crate::bits::BitString;

pub use alice::{audit_level_paints, audit_run_disjointness, AliceStrategy, Origin, OriginKind};
pub use bob::{
    parse_script, BlindBob, BobStrategy, Copycat, LexFirstHunter, Mirror, OnesBob, PassBob,
    RandomBob, ScriptParseError, ScriptedBob, ZerosBob,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Player {
    #[serde(rename = "A")]
    Alice,
    #[serde(rename = "B")]
    Bob,
}

impl Player {
    pub fn other(self) -> Self {
        match self {
            Player::Alice => Player::Bob,
            Player::Bob => Player::Alice,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Move {
    Paint(BitString),
    Pass,
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "error", rename_all = "snake_case")]
pub enum GameError {
    #[error("ply {ply}: {got:?} moved on {expected:?}'s turn")]
    WrongTurn {
        ply: usize,
        expected: Player,
        got: Player,
    },
    #[error("ply {ply}: quota exceeded, Alice painted a string number {count} of length {len} with w = {w}")]
    QuotaExceeded {
        ply: usize,
        len: usize,
        count: usize,
        w: usize,
    },
}

/// One line of the game trace.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MoveRecord {
    pub ply: usize,
    pub player: Player,
    #[serde(rename = "move")]
    pub kind: &'static str,
    pub string: Option<BitString>,
    pub len: Option<usize>,
    /// Number of green strings of this length after the move.
    pub quota_n: Option<usize>,
    /// The coincidence win length after the move, if Alice has won that way.
    pub coincidence: Option<usize>,
    /// This move made its string both green and red.
    #[serde(skip)]
    pub fresh_coincidence: bool,
}

#[derive(Debug, Clone)]
pub struct GameState {
    w: usize,
    turn: Player,
    green: HashSet<BitString>,
    red: HashSet<BitString>,
    lexfirst_green: BTreeMap<usize, BitString>,
    alice_quota: BTreeMap<usize, usize>,
    coincidences: BTreeMap<usize, usize>,
    log: Vec<MoveRecord>,
}

impl GameState {
    pub fn new(w: usize) -> Self {
        Self {
            w,
            turn: Player::Alice,
            green: HashSet::new(),
            red: HashSet::new(),
            lexfirst_green: BTreeMap::new(),
            alice_quota: BTreeMap::new(),
            coincidences: BTreeMap::new(),
            log: Vec::new(),
        }
    }

    pub fn w(&self) -> usize {
        self.w
    }

    pub fn turn(&self) -> Player {
        self.turn
    }

    pub fn is_green(&self, x: &BitString) -> bool {
        self.green.contains(x)
    }

    pub fn is_red(&self, x: &BitString) -> bool {
        self.red.contains(x)
    }

    pub fn green_count(&self) -> usize {
        self.green.len()
    }

    pub fn quota(&self, len: usize) -> usize {
        self.alice_quota.get(&len).copied().unwrap_or(0)
    }

    pub fn alice_quota(&self) -> &BTreeMap<usize, usize> {
        &self.alice_quota
    }

    /// Number of red-green strings of each length.
    pub fn coincidences(&self) -> &BTreeMap<usize, usize> {
        &self.coincidences
    }

    /// The lexicographically first green string of length `len`.
    pub fn lexfirst_green(&self, len: usize) -> Option<&BitString> {
        self.lexfirst_green.get(&len)
    }

    pub fn max_green_len(&self) -> Option<usize> {
        self.lexfirst_green.keys().next_back().copied()
    }

    pub fn log(&self) -> &[MoveRecord] {
        &self.log
    }

    pub fn apply_move(&mut self, player: Player, mv: Move) -> Result<&MoveRecord, GameError> {
        let ply = self.log.len() + 1;
        if player != self.turn {
            return Err(GameError::WrongTurn {
                ply,
                expected: self.turn,
                got: player,
            });
        }
        let mut fresh = false;
        let string = match mv {
            Move::Pass => None,
            Move::Paint(x) => {
                match player {
                    Player::Alice if !self.green.contains(&x) => {
                        let count = self.quota(x.len()) + 1;
                        if count > self.w {
                            return Err(GameError::QuotaExceeded {
                                ply,
                                len: x.len(),
                                count,
                                w: self.w,
                            });
                        }
                        self.alice_quota.insert(x.len(), count);
                        let first = self
                            .lexfirst_green
                            .entry(x.len())
                            .or_insert_with(|| x.clone());
                        if x.bits() < first.bits() {
                            *first = x.clone();
                        }
                        fresh = self.red.contains(&x);
                        self.green.insert(x.clone());
                    }
                    Player::Bob if !self.red.contains(&x) => {
                        fresh = self.green.contains(&x);
                        self.red.insert(x.clone());
                    }
                    _ => {}
                }
                if fresh {
                    *self.coincidences.entry(x.len()).or_insert(0) += 1;
                }
                Some(x)
            }
        };
        let len = string.as_ref().map(BitString::len);
        self.log.push(MoveRecord {
            ply,
            player,
            kind: if string.is_some() { "paint" } else { "pass" },
            quota_n: len.map(|n| self.quota(n)),
            len,
            string,
            coincidence: self.win_by_coincidence(),
            fresh_coincidence: fresh,
        });
        self.turn = player.other();
        Ok(self.log.last().expect("just pushed"))
    }

    /// Smallest length carrying at least `w` red-green strings.
    pub fn win_by_coincidence(&self) -> Option<usize> {
        self.coincidences
            .iter()
            .find(|(_, &c)| c >= self.w)
            .map(|(&n, _)| n)
    }

    /// Follows the lex-first green string of each length `0..=depth` for as
    /// long as they form a child chain from the root.
    pub fn lexfirst_green_diagnostic(&self, depth: usize) -> Diagnostic {
        let mut chain: Vec<BitString> = Vec::new();
        for n in 0..=depth {
            match self.lexfirst_green.get(&n) {
                Some(x) if chain.last().is_none_or(|p| x.parent().as_ref() == Some(p)) => {
                    chain.push(x.clone())
                }
                _ => break,
            }
        }
        let non_red_count = chain.iter().filter(|x| !self.red.contains(*x)).count();
        Diagnostic {
            depth,
            consistent_to: chain.len().checked_sub(1),
            non_red_count,
            tip: chain.last().cloned(),
            chain,
        }
    }
}

/// Finite-horizon view of the second win condition.
///
/// The chain is determined by its tip, so only the tip is serialized.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub depth: usize,
    /// Length of the longest lex-first green child chain from the root;
    /// `None` if the root is not green.
    pub consistent_to: Option<usize>,
    pub non_red_count: usize,
    pub tip: Option<BitString>,
    #[serde(skip)]
    pub chain: Vec<BitString>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FirstCoincidence {
    pub ply: usize,
    pub len: usize,
}

#[derive(Debug, Clone)]
pub struct GameTrace {
    pub bob: String,
    pub horizon: usize,
    pub state: GameState,
    /// Where each of Alice's moves came from, in move order.
    pub origins: Vec<Origin>,
    pub first_coincidence: Option<FirstCoincidence>,
    pub violation: Option<GameError>,
    pub diagnostic: Diagnostic,
}

impl GameTrace {
    pub fn records(&self) -> &[MoveRecord] {
        self.state.log()
    }

    /// Alice's painted strings in move order.
    pub fn alice_paints(&self) -> Vec<&BitString> {
        self.records()
            .iter()
            .filter(|r| r.player == Player::Alice)
            .filter_map(|r| r.string.as_ref())
            .collect()
    }

    pub fn summary(&self) -> Summary<'_> {
        Summary {
            w: self.state.w(),
            bob: &self.bob,
            horizon: self.horizon,
            plies: self.records().len(),
            first_coincidence: self.first_coincidence,
            violation: self.violation.as_ref(),
            diagnostic: &self.diagnostic,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Summary<'a> {
    pub w: usize,
    pub bob: &'a str,
    pub horizon: usize,
    pub plies: usize,
    pub first_coincidence: Option<FirstCoincidence>,
    pub violation: Option<&'a GameError>,
    pub diagnostic: &'a Diagnostic,
}

/// Plays `horizon` plies, Alice first. Stops early on a rule violation, which
/// is then recorded in the trace.
pub fn play(alice: &mut AliceStrategy, bob: &mut dyn BobStrategy, horizon: usize) -> GameTrace {
    let mut state = GameState::new(alice.w());
    let mut first_coincidence = None;
    let mut violation = None;
    for _ in 0..horizon {
        let player = state.turn();
        let mv = match player {
            Player::Alice => alice.next_move(&state),
            Player::Bob => bob.next_move(&state),
        };
        match state.apply_move(player, mv) {
            Ok(rec) => {
                if first_coincidence.is_none() {
                    first_coincidence = rec
                        .coincidence
                        .map(|len| FirstCoincidence { ply: rec.ply, len });
                }
            }
            Err(e) => {
                violation = Some(e);
                break;
            }
        }
    }
    let depth = state.max_green_len().unwrap_or(0);
    GameTrace {
        bob: bob.name(),
        horizon,
        diagnostic: state.lexfirst_green_diagnostic(depth),
        origins: alice.origins().to_vec(),
        state,
        first_coincidence,
        violation,
    }
}
