//! Alice's recursive strategy.
//!
//! The 1-strategy paints `0^i` on its `i`th move. The `w`-strategy (w > 1)
//! paints its root, then runs the `(w-1)`-strategy in the subtree below
//! `root·1`. A run is stopped as soon as `w-1` strings of one length inside
//! its subtree are red-green. The level then paints its zero chain
//! `root·0^(z+1) .. root·0^m`, where `m` exceeds every local length it has
//! painted so far, and starts the next run below `root·0^m·1`.
//!
//! Every level works in global coordinates; the subtree root plays the role
//! of the prefix added to the inner strategy's moves. Bob's moves only
//! matter to a run through the red-green strings they create inside its
//! subtree, so they are routed there as they happen.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use super::{GameState, Move};
use crate::bits::BitString;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OriginKind {
    /// A level painting its own root.
    Root,
    /// A level painting `root·0^i` between runs.
    ZeroChain,
    /// The 1-strategy painting `root·0^i`.
    Base,
}

/// Which level produced a move: `runs[d]` is the index of the run at
/// recursion depth `d` the move was made in.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Origin {
    pub runs: Vec<usize>,
    pub kind: OriginKind,
}

#[derive(Debug, Clone)]
enum Level {
    Base { root: BitString, painted: usize },
    Step(Box<StepLevel>),
}

#[derive(Debug, Clone)]
struct StepLevel {
    w: usize,
    root: BitString,
    /// Largest `i` with `root·0^i` painted by this level.
    zeros: usize,
    /// Largest local length painted inside this level, runs included.
    max_local: usize,
    runs_started: usize,
    phase: Phase,
}

#[derive(Debug, Clone)]
enum Phase {
    Root,
    Running(Run),
    Zeros { target: usize },
}

#[derive(Debug, Clone)]
struct Run {
    index: usize,
    root: BitString,
    /// Red-green strings in the run's subtree, by local length.
    counts: HashMap<usize, usize>,
    inner: Level,
}

impl Level {
    fn new(w: usize, root: BitString) -> Self {
        if w == 1 {
            Level::Base { root, painted: 0 }
        } else {
            Level::Step(Box::new(StepLevel {
                w,
                root,
                zeros: 0,
                max_local: 0,
                runs_started: 0,
                phase: Phase::Root,
            }))
        }
    }

    fn next(&mut self, path: &mut Vec<usize>) -> (BitString, OriginKind) {
        match self {
            Level::Base { root, painted } => {
                let x = root.concat(&BitString::zeros(*painted));
                *painted += 1;
                (x, OriginKind::Base)
            }
            Level::Step(level) => level.next(path),
        }
    }

    fn on_coincidence(&mut self, x: &BitString) {
        if let Level::Step(level) = self {
            level.on_coincidence(x);
        }
    }
}

impl StepLevel {
    fn start_run(&mut self, root: BitString) -> Phase {
        let index = self.runs_started;
        self.runs_started += 1;
        Phase::Running(Run {
            index,
            inner: Level::new(self.w - 1, root.clone()),
            root,
            counts: HashMap::new(),
        })
    }

    fn next(&mut self, path: &mut Vec<usize>) -> (BitString, OriginKind) {
        let (x, kind) = match &mut self.phase {
            Phase::Root => {
                self.phase = self.start_run(self.root.child(true));
                (self.root.clone(), OriginKind::Root)
            }
            Phase::Running(run) => {
                path.push(run.index);
                run.inner.next(path)
            }
            Phase::Zeros { target } => {
                let target = *target;
                self.zeros += 1;
                let x = self.root.concat(&BitString::zeros(self.zeros));
                if self.zeros == target {
                    self.phase = self.start_run(x.child(true));
                }
                (x, OriginKind::ZeroChain)
            }
        };
        self.max_local = self.max_local.max(x.len() - self.root.len());
        (x, kind)
    }

    fn on_coincidence(&mut self, x: &BitString) {
        let Phase::Running(run) = &mut self.phase else {
            return;
        };
        if !run.root.is_prefix_of(x) {
            return;
        }
        let count = run.counts.entry(x.len() - run.root.len()).or_insert(0);
        *count += 1;
        if *count >= self.w - 1 {
            self.phase = Phase::Zeros {
                target: self.max_local + 1,
            };
        } else {
            run.inner.on_coincidence(x);
        }
    }
}

#[derive(Debug, Clone)]
pub struct AliceStrategy {
    w: usize,
    top: Level,
    /// Next game-log entry not yet inspected for red-green events.
    cursor: usize,
    origins: Vec<Origin>,
}

impl AliceStrategy {
    /// Panics if `w == 0`.
    pub fn new(w: usize) -> Self {
        assert!(w >= 1, "the game needs w >= 1");
        Self {
            w,
            top: Level::new(w, BitString::empty()),
            cursor: 0,
            origins: Vec::new(),
        }
    }

    pub fn w(&self) -> usize {
        self.w
    }

    pub fn origins(&self) -> &[Origin] {
        &self.origins
    }

    /// Reads the moves made since the last call, then picks a move.
    pub fn next_move(&mut self, state: &GameState) -> Move {
        for rec in &state.log()[self.cursor..] {
            if rec.fresh_coincidence {
                let x = rec.string.as_ref().expect("coincidences come from paints");
                self.top.on_coincidence(x);
            }
        }
        self.cursor = state.log().len();

        let mut runs = Vec::new();
        let (x, kind) = self.top.next(&mut runs);
        self.origins.push(Origin { runs, kind });
        Move::Paint(x)
    }
}

/// Checks that distinct runs started by the same level painted disjoint
/// ranges of lengths. `paints[i]` must be the string of `origins[i]`.
pub fn audit_run_disjointness(paints: &[&BitString], origins: &[Origin]) -> Result<(), String> {
    // (parent level, run index) -> (min len, max len)
    let mut ranges: BTreeMap<(&[usize], usize), (usize, usize)> = BTreeMap::new();
    for (x, o) in paints.iter().zip(origins) {
        for d in 0..o.runs.len() {
            let r = ranges
                .entry((&o.runs[..d], o.runs[d]))
                .or_insert((x.len(), x.len()));
            r.0 = r.0.min(x.len());
            r.1 = r.1.max(x.len());
        }
    }
    let mut by_parent: BTreeMap<&[usize], Vec<(usize, usize, usize)>> = BTreeMap::new();
    for ((parent, run), (lo, hi)) in ranges {
        by_parent.entry(parent).or_default().push((lo, hi, run));
    }
    for (parent, mut rs) in by_parent {
        rs.sort_unstable();
        for pair in rs.windows(2) {
            let (_, hi, a) = pair[0];
            let (lo, _, b) = pair[1];
            if lo <= hi {
                return Err(format!(
                    "runs {a} and {b} under level {parent:?} share length {lo}"
                ));
            }
        }
    }
    Ok(())
}

/// Checks that each level instance paints at most one string of each length
/// outside its runs.
pub fn audit_level_paints(paints: &[&BitString], origins: &[Origin]) -> Result<(), String> {
    let mut seen: HashMap<(&[usize], usize), &BitString> = HashMap::new();
    for (x, o) in paints.iter().zip(origins) {
        if let Some(prev) = seen.insert((o.runs.as_slice(), x.len()), x) {
            return Err(format!(
                "level {:?} painted both {prev:?} and {x:?} outside its runs",
                o.runs
            ));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bs;
    use crate::game::{GameState, Player};

    /// Plays Alice against a fixed list of Bob replies, passing afterwards.
    fn alice_moves(w: usize, bob: &[&str], alice_turns: usize) -> Vec<BitString> {
        let mut alice = AliceStrategy::new(w);
        let mut g = GameState::new(w);
        let mut out = Vec::new();
        for t in 0..alice_turns {
            let Move::Paint(x) = alice.next_move(&g) else {
                panic!("Alice always paints")
            };
            out.push(x.clone());
            g.apply_move(Player::Alice, Move::Paint(x)).unwrap();
            let reply = bob.get(t).map_or(Move::Pass, |s| Move::Paint(bs(s)));
            g.apply_move(Player::Bob, reply).unwrap();
        }
        out
    }

    fn strs(xs: &[&str]) -> Vec<BitString> {
        xs.iter().map(|x| bs(x)).collect()
    }

    #[test]
    fn one_strategy_paints_zeros() {
        assert_eq!(alice_moves(1, &[], 4), strs(&["", "0", "00", "000"]));
    }

    #[test]
    fn two_strategy_against_passive_bob() {
        assert_eq!(alice_moves(2, &[], 4), strs(&["", "1", "10", "100"]));
    }

    #[test]
    fn two_strategy_restarts_after_inner_win() {
        // Bob copies each move; the inner run at root 1 is stopped after "1"
        // turns red, then Alice paints 0, 00 and restarts below 001.
        let got = alice_moves(2, &["", "1", "0", "00", "001"], 8);
        assert_eq!(
            got,
            strs(&["", "1", "0", "00", "001", "000", "0000", "00001"])
        );
    }

    #[test]
    fn three_strategy_needs_two_coincidences() {
        // Bob reds 11 before Alice paints it. That stops the 1-strategy
        // below 11, but subtree 1 holds only one red-green string, so the
        // 2-strategy at 1 keeps running and moves on to its zero chain.
        let got = alice_moves(3, &["", "11"], 5);
        assert_eq!(got, strs(&["", "1", "11", "10", "100"]));
    }

    #[test]
    fn origins_are_recorded() {
        let mut alice = AliceStrategy::new(3);
        let mut g = GameState::new(3);
        for _ in 0..3 {
            let mv = alice.next_move(&g);
            g.apply_move(Player::Alice, mv).unwrap();
            g.apply_move(Player::Bob, Move::Pass).unwrap();
        }
        let kinds: Vec<_> = alice
            .origins()
            .iter()
            .map(|o| (o.runs.clone(), o.kind))
            .collect();
        assert_eq!(
            kinds,
            vec![
                (vec![], OriginKind::Root),
                (vec![0], OriginKind::Root),
                (vec![0, 0], OriginKind::Base),
            ]
        );
    }
}
