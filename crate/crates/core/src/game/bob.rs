//! Opponents for Alice.

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::{GameState, Move, Player};
use crate::bits::{BitString, ParseBitsError};
use crate::machine::Dovetailer;

pub trait BobStrategy {
    /// Short identifier used in traces, e.g. `blind:3`.
    fn name(&self) -> String;
    fn next_move(&mut self, state: &GameState) -> Move;
}

#[derive(Debug, Clone, Default)]
pub struct PassBob;

impl BobStrategy for PassBob {
    fn name(&self) -> String {
        "pass".into()
    }

    fn next_move(&mut self, _: &GameState) -> Move {
        Move::Pass
    }
}

/// Paints the earliest green string that is not red yet.
#[derive(Debug, Clone, Default)]
pub struct Copycat {
    cursor: usize,
}

impl BobStrategy for Copycat {
    fn name(&self) -> String {
        "copycat".into()
    }

    fn next_move(&mut self, state: &GameState) -> Move {
        let log = state.log();
        while let Some(rec) = log.get(self.cursor) {
            self.cursor += 1;
            if rec.player != Player::Alice {
                continue;
            }
            if let Some(x) = &rec.string {
                if !state.is_red(x) {
                    return Move::Paint(x.clone());
                }
            }
        }
        Move::Pass
    }
}

/// Paints `x` of length `n` once some program shorter than `f` prints `x`
/// on input `n`. One dovetailing round per turn; discoveries are queued and
/// painted one per turn.
#[derive(Debug, Clone)]
pub struct BlindBob {
    f: usize,
    dovetailer: Dovetailer,
    queue: VecDeque<BitString>,
}

impl BlindBob {
    pub fn new(f: usize) -> Self {
        Self {
            f,
            dovetailer: Dovetailer::shorter_than(f, None, None),
            queue: VecDeque::new(),
        }
    }

    pub fn f(&self) -> usize {
        self.f
    }
}

impl BobStrategy for BlindBob {
    fn name(&self) -> String {
        format!("blind:{}", self.f)
    }

    fn next_move(&mut self, _: &GameState) -> Move {
        if self.dovetailer.program_count() > 0 {
            self.queue
                .extend(self.dovetailer.step().into_iter().map(|d| d.string));
        }
        self.queue.pop_front().map_or(Move::Pass, Move::Paint)
    }
}

/// Paints whatever Alice just painted.
#[derive(Debug, Clone, Default)]
pub struct Mirror;

impl BobStrategy for Mirror {
    fn name(&self) -> String {
        "mirror".into()
    }

    fn next_move(&mut self, state: &GameState) -> Move {
        match state.log().last() {
            Some(rec) if rec.player == Player::Alice => {
                rec.string.clone().map_or(Move::Pass, Move::Paint)
            }
            _ => Move::Pass,
        }
    }
}

/// Paints `Λ, 0, 00, ...`, one per turn.
#[derive(Debug, Clone, Default)]
pub struct ZerosBob {
    turn: usize,
}

impl BobStrategy for ZerosBob {
    fn name(&self) -> String {
        "zeros".into()
    }

    fn next_move(&mut self, _: &GameState) -> Move {
        self.turn += 1;
        Move::Paint(BitString::zeros(self.turn - 1))
    }
}

/// Paints `Λ, 1, 11, ...`, one per turn.
#[derive(Debug, Clone, Default)]
pub struct OnesBob {
    turn: usize,
}

impl BobStrategy for OnesBob {
    fn name(&self) -> String {
        "ones".into()
    }

    fn next_move(&mut self, _: &GameState) -> Move {
        self.turn += 1;
        Move::Paint(BitString::ones(self.turn - 1))
    }
}

/// Attacks the lex-first green chain: paints the lex-first green string of
/// the length Alice just painted at, unless it is red already.
#[derive(Debug, Clone, Default)]
pub struct LexFirstHunter;

impl BobStrategy for LexFirstHunter {
    fn name(&self) -> String {
        "hunter".into()
    }

    fn next_move(&mut self, state: &GameState) -> Move {
        let Some(n) = state.log().last().and_then(|r| r.len) else {
            return Move::Pass;
        };
        match state.lexfirst_green(n) {
            Some(x) if !state.is_red(x) => Move::Paint(x.clone()),
            _ => Move::Pass,
        }
    }
}

/// Seeded noise: passes, repaints a random earlier green string, or paints a
/// random string of a length Alice has used.
#[derive(Debug, Clone)]
pub struct RandomBob {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RandomBob {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl BobStrategy for RandomBob {
    fn name(&self) -> String {
        format!("random:{}", self.seed)
    }

    fn next_move(&mut self, state: &GameState) -> Move {
        let log = state.log();
        let alice: Vec<&BitString> = log
            .iter()
            .filter(|r| r.player == Player::Alice)
            .filter_map(|r| r.string.as_ref())
            .collect();
        if alice.is_empty() {
            return Move::Pass;
        }
        let pick = alice[self.rng.gen_range(0..alice.len())];
        match self.rng.gen_range(0..3) {
            0 => Move::Pass,
            1 => Move::Paint(pick.clone()),
            _ => {
                let bits = (0..pick.len()).map(|_| self.rng.gen_bool(0.5)).collect();
                Move::Paint(BitString::from_bits(bits))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScriptParseError {
    #[error("line {line}: {source}")]
    Bits {
        line: usize,
        #[source]
        source: ParseBitsError,
    },
}

/// Parses a move script: one move per line, `pass`, `e` for the empty
/// string, or a bit string. Blank lines and `#` comments are skipped.
pub fn parse_script(text: &str) -> Result<Vec<Move>, ScriptParseError> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .map(|(line, l)| match l {
            "pass" => Ok(Move::Pass),
            "e" => Ok(Move::Paint(BitString::empty())),
            _ => l
                .parse()
                .map(Move::Paint)
                .map_err(|source| ScriptParseError::Bits { line, source }),
        })
        .collect()
}

/// Replays a fixed list of moves, then passes.
#[derive(Debug, Clone)]
pub struct ScriptedBob {
    label: String,
    moves: VecDeque<Move>,
}

impl ScriptedBob {
    pub fn new(label: impl Into<String>, moves: Vec<Move>) -> Self {
        Self {
            label: label.into(),
            moves: moves.into(),
        }
    }
}

impl BobStrategy for ScriptedBob {
    fn name(&self) -> String {
        self.label.clone()
    }

    fn next_move(&mut self, _: &GameState) -> Move {
        self.moves.pop_front().unwrap_or(Move::Pass)
    }
}
