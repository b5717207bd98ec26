//! Trimming leaves from an enumerated set of bounded width.
//!
//! A set `R` is *acceptable at time `j`* if it is leafless (truncated at the
//! working depth) and `width(R ∪ S_j) <= w`, where `S_j` is what the
//! enumeration of `S` has produced after `j` steps. The trimmed set `T` is
//! built by walking all strings of length `<= depth` in shortlex order and
//! keeping `x` whenever, for every `j <= horizon`, some set acceptable at time
//! `j` contains the strings kept so far together with `x`.
//!
//! Snapshots only grow, so acceptability at a later time implies it at every
//! earlier time; the per-`j` loop still runs over every distinct snapshot and
//! reports the earliest one that fails.
//!
//! Two independent routes compute the order-largest acceptable set:
//! [`greedy_largest`] (shortlex greedy on top of the [`acceptability_witness`]
//! decision procedure) and [`largest_acceptable_at`] (exhaustive search over
//! characteristic vectors in decreasing set order).

use std::collections::{HashMap, HashSet};

use serde::Serialize;
use thiserror::Error;

use crate::bits::BitString;
use crate::machine::Dovetailer;
use crate::tree::StringSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TrimError {
    #[error("width bound w must be at least 1")]
    ZeroWidth,
    #[error("depth must be at least 1")]
    ZeroDepth,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TrimConfig {
    pub w: usize,
    pub depth: usize,
    pub horizon: usize,
}

impl TrimConfig {
    pub fn new(w: usize, depth: usize, horizon: usize) -> Result<Self, TrimError> {
        if w == 0 {
            return Err(TrimError::ZeroWidth);
        }
        if depth == 0 {
            return Err(TrimError::ZeroDepth);
        }
        Ok(Self { w, depth, horizon })
    }
}

/// Strings of one length, kept sorted.
type Level = Vec<BitString>;

fn split_levels(set: &StringSet, upto: usize) -> Vec<Level> {
    let mut levels = vec![Vec::new(); upto + 1];
    for x in set {
        if x.len() <= upto {
            levels[x.len()].push(x.clone());
        }
    }
    for l in &mut levels {
        l.sort();
    }
    levels
}

struct WitnessSearch<'a> {
    required: &'a [Level],
    ambient: Vec<HashSet<BitString>>,
    w: usize,
    top: usize,
    dead: HashSet<(usize, Level)>,
}

impl WitnessSearch<'_> {
    fn occupied(&self, level: usize, members: &Level) -> usize {
        let amb = &self.ambient[level];
        amb.len() + members.iter().filter(|x| !amb.contains(*x)).count()
    }

    /// Finds levels `level..=top` of a leafless extension whose level `level`
    /// is exactly `members`. Extra members never help, so each member gets
    /// exactly one child and nothing else is added beyond the required strings.
    fn search(&mut self, level: usize, members: Level) -> Option<Vec<Level>> {
        if self.occupied(level, &members) > self.w {
            return None;
        }
        if level == self.top {
            return Some(vec![members]);
        }
        let key = (level, members);
        if self.dead.contains(&key) {
            return None;
        }
        let members = key.1;

        let next_req = &self.required[level + 1];
        let next_amb = &self.ambient[level + 1];
        // Children that are already required or already counted cost nothing.
        let options: Vec<[BitString; 2]> = members
            .iter()
            .map(|x| {
                let (c0, c1) = (x.child(false), x.child(true));
                let score = |c: &BitString| {
                    if next_req.binary_search(c).is_ok() {
                        0
                    } else if next_amb.contains(c) {
                        1
                    } else {
                        2
                    }
                };
                if score(&c1) < score(&c0) {
                    [c1, c0]
                } else {
                    [c0, c1]
                }
            })
            .collect();

        let mut tried = HashSet::new();
        let combos = 1u64 << options.len();
        for mask in 0..combos {
            let mut next: Level = next_req.clone();
            for (i, pair) in options.iter().enumerate() {
                next.push(pair[((mask >> i) & 1) as usize].clone());
            }
            next.sort();
            next.dedup();
            if !tried.insert(next.clone()) {
                continue;
            }
            if let Some(mut rest) = self.search(level + 1, next) {
                rest.insert(0, members);
                return Some(rest);
            }
        }
        self.dead.insert((level, members));
        None
    }
}

/// A leafless set `R ⊇ e` (truncated at `depth`) with `width(R ∪ s_j) <= w`,
/// if one exists.
///
/// Below the longest string of `e ∪ s_j` only single zero-chains are needed,
/// so the search runs over levels `0..=n` and then appends zeros down to
/// `depth`.
pub fn acceptability_witness(
    e: &StringSet,
    s_j: &StringSet,
    w: usize,
    depth: usize,
) -> Option<StringSet> {
    let n = e
        .max_len()
        .into_iter()
        .chain(s_j.max_len())
        .max()
        .unwrap_or(0);
    debug_assert!(n <= depth, "inputs must fit in the truncation");
    let required = split_levels(e, n);
    let ambient = split_levels(s_j, n)
        .into_iter()
        .map(|l| l.into_iter().collect::<HashSet<_>>())
        .collect();
    let mut search = WitnessSearch {
        required: &required,
        ambient,
        w,
        top: n,
        dead: HashSet::new(),
    };
    let levels = search.search(0, required[0].clone())?;

    let mut out = StringSet::new();
    for level in &levels {
        out.extend(level.iter().cloned());
    }
    for x in &levels[n] {
        let mut tail = x.clone();
        while tail.len() < depth {
            tail.push(false);
            out.insert(tail.clone());
        }
    }
    Some(out)
}

pub fn acceptable_at(e: &StringSet, s_j: &StringSet, w: usize, depth: usize) -> bool {
    acceptability_witness(e, s_j, w, depth).is_some()
}

/// Shortlex greedy: keep each string of length `<= depth` whenever the kept
/// strings plus it still extend to a set acceptable against `s_j`.
pub fn greedy_largest(s_j: &StringSet, w: usize, depth: usize) -> StringSet {
    let mut kept = StringSet::new();
    let mut load = LevelLoad::new(s_j, depth);
    for x in BitString::all_up_to(depth) {
        if load.saturated(s_j, &x, w) {
            continue;
        }
        let mut candidate = kept.clone();
        candidate.insert(x.clone());
        if acceptable_at(&candidate, s_j, w, depth) {
            load.add(s_j, &x);
            kept = candidate;
        }
    }
    kept
}

/// Per-level count of strings in `kept ∪ s_j`.
struct LevelLoad {
    counts: Vec<usize>,
}

impl LevelLoad {
    fn new(s_j: &StringSet, depth: usize) -> Self {
        let counts = (0..=depth).map(|n| s_j.count_at(n)).collect();
        Self { counts }
    }

    fn add(&mut self, s_j: &StringSet, x: &BitString) {
        if !s_j.contains(x) {
            self.counts[x.len()] += 1;
        }
    }

    /// `x` is new to both sets and its level already holds `w` strings.
    fn saturated(&self, s_j: &StringSet, x: &BitString, w: usize) -> bool {
        !s_j.contains(x) && self.counts[x.len()] >= w
    }
}

/// The largest set acceptable against `s_j` in the order where `X < Y` if the
/// shortlex-first string of the symmetric difference lies in `Y`.
///
/// Exhaustive: walks characteristic vectors over all strings of length
/// `<= depth` in decreasing order and returns the first that is leafless with
/// admissible width. Only local constraints prune the walk (per-level width and
/// a member whose two children are both excluded). Exponential; meant as an
/// oracle for small depths. `None` when no acceptable set exists, which
/// happens exactly when `s_j` itself is too wide.
pub fn largest_acceptable_at(s_j: &StringSet, w: usize, depth: usize) -> Option<StringSet> {
    let universe: Vec<BitString> = BitString::all_up_to(depth).collect();
    let mut base = vec![0usize; depth + 1];
    for x in s_j {
        if x.len() <= depth {
            base[x.len()] += 1;
        }
    }
    if base.iter().any(|&c| c > w) {
        return None;
    }
    let mut oracle = ExhaustiveOracle {
        universe: &universe,
        s_j,
        w,
        depth,
        chosen: vec![false; universe.len()],
        position: universe
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, x)| (x, i))
            .collect(),
        load: base,
    };
    if oracle.descend(0) {
        Some(
            universe
                .iter()
                .zip(&oracle.chosen)
                .filter(|(_, &c)| c)
                .map(|(x, _)| x.clone())
                .collect(),
        )
    } else {
        None
    }
}

struct ExhaustiveOracle<'a> {
    universe: &'a [BitString],
    s_j: &'a StringSet,
    w: usize,
    depth: usize,
    chosen: Vec<bool>,
    position: HashMap<BitString, usize>,
    load: Vec<usize>,
}

impl ExhaustiveOracle<'_> {
    fn descend(&mut self, i: usize) -> bool {
        if i == self.universe.len() {
            return true;
        }
        let x = &self.universe[i];
        let n = x.len();
        // Siblings are adjacent in shortlex order; x1 is the last chance to
        // give a kept parent a child.
        let forced = match x.parent() {
            Some(p) if x.bit(n - 1) => self.chosen[self.position[&p]] && !self.chosen[i - 1],
            _ => false,
        };
        let counted = self.s_j.contains(x);
        if counted || self.load[n] < self.w {
            self.chosen[i] = true;
            if !counted {
                self.load[n] += 1;
            }
            if self.descend(i + 1) {
                return true;
            }
            self.chosen[i] = false;
            if !counted {
                self.load[n] -= 1;
            }
        }
        if forced {
            return false;
        }
        // A kept string at the bottom level needs no child; above it, leaving
        // x out is fine as long as the forced rule above holds.
        debug_assert!(n <= self.depth);
        self.descend(i + 1)
    }
}

/// A source of strings delivered in steps; snapshot `S_j` is everything
/// delivered in the first `j` steps.
pub trait Enumeration {
    fn step(&mut self) -> Vec<BitString>;
}

/// One string per step, in the given order.
#[derive(Debug, Clone)]
pub struct ListEnumeration {
    items: Vec<BitString>,
    pos: usize,
}

impl ListEnumeration {
    pub fn new(items: Vec<BitString>) -> Self {
        Self { items, pos: 0 }
    }
}

impl Enumeration for ListEnumeration {
    fn step(&mut self) -> Vec<BitString> {
        match self.items.get(self.pos) {
            Some(x) => {
                self.pos += 1;
                vec![x.clone()]
            }
            None => Vec::new(),
        }
    }
}

/// One dovetailing round per step.
impl Enumeration for Dovetailer {
    fn step(&mut self) -> Vec<BitString> {
        Dovetailer::step(self)
            .into_iter()
            .map(|d| d.string)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    /// Acceptable at every step; `witness` is an acceptable superset at the horizon.
    Included { witness: StringSet },
    /// Not acceptable at step `step` (the earliest such step).
    Rejected { step: usize },
    /// The string's level already holds `w` strings of `T ∪ S_horizon`.
    Saturated,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrimDecision {
    pub string: BitString,
    pub len: usize,
    #[serde(flatten)]
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Serialize)]
pub struct TrimReport {
    pub config: TrimConfig,
    /// `S_horizon`, restricted to length `<= depth`.
    pub snapshot: StringSet,
    pub result: StringSet,
    /// Every decision except saturated rejections, in shortlex order.
    pub decisions: Vec<TrimDecision>,
    pub saturated: usize,
}

impl TrimReport {
    pub fn is_leafless(&self) -> bool {
        self.result.is_leafless(self.config.depth)
    }

    pub fn width_ok(&self) -> bool {
        self.result
            .union(&self.snapshot)
            .width_of(self.config.depth)
            <= self.config.w
    }

    /// Every depth-spanning path of the snapshot lies inside the result.
    pub fn keeps_snapshot_paths(&self) -> bool {
        self.snapshot
            .maximal_paths(self.config.depth)
            .iter()
            .all(|p| p.vertices.iter().all(|v| self.result.contains(v)))
    }
}

/// Collects snapshots `S_1..S_horizon` and keeps the distinct ones, each
/// tagged with the first step at which it was current.
fn collect_snapshots<E: Enumeration>(source: &mut E, cfg: &TrimConfig) -> Vec<(usize, StringSet)> {
    let mut snaps: Vec<(usize, StringSet)> = Vec::new();
    let mut current = StringSet::new();
    if cfg.horizon == 0 {
        return vec![(0, current)];
    }
    for j in 1..=cfg.horizon {
        let mut changed = snaps.is_empty();
        for x in source.step() {
            if x.len() <= cfg.depth && current.insert(x) {
                changed = true;
            }
        }
        if changed {
            snaps.push((j, current.clone()));
        }
    }
    snaps
}

pub fn trim<E: Enumeration>(source: &mut E, cfg: &TrimConfig) -> TrimReport {
    let snaps = collect_snapshots(source, cfg);
    let horizon_set = snaps.last().expect("at least one snapshot").1.clone();
    let mut result = StringSet::new();
    let mut decisions = Vec::new();
    let mut saturated = 0;
    let mut load = LevelLoad::new(&horizon_set, cfg.depth);

    for x in BitString::all_up_to(cfg.depth) {
        if load.saturated(&horizon_set, &x, cfg.w) {
            saturated += 1;
            continue;
        }
        let mut candidate = result.clone();
        candidate.insert(x.clone());
        let failed = snaps
            .iter()
            .find(|(_, s)| !acceptable_at(&candidate, s, cfg.w, cfg.depth))
            .map(|(j, _)| *j);
        let verdict = match failed {
            Some(step) => Verdict::Rejected { step },
            None => {
                let witness = acceptability_witness(&candidate, &horizon_set, cfg.w, cfg.depth)
                    .expect("checked above");
                load.add(&horizon_set, &x);
                result = candidate;
                Verdict::Included { witness }
            }
        };
        decisions.push(TrimDecision {
            len: x.len(),
            string: x,
            verdict,
        });
    }

    TrimReport {
        config: *cfg,
        snapshot: horizon_set,
        result,
        decisions,
        saturated,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bs;
    use crate::machine::enumerate_s;

    fn set(xs: &[&str]) -> StringSet {
        xs.iter().map(|x| bs(x)).collect()
    }

    #[test]
    fn empty_requirement_is_acceptable() {
        assert!(acceptable_at(&StringSet::new(), &StringSet::new(), 1, 3));
        assert!(acceptable_at(&StringSet::new(), &set(&["0", "11"]), 1, 3));
        // the ambient set alone can already break the width bound
        assert!(!acceptable_at(&StringSet::new(), &set(&["0", "1"]), 1, 3));
    }

    #[test]
    fn acceptable_at_examples() {
        assert!(!acceptable_at(&set(&["0", "1"]), &StringSet::new(), 1, 3));
        let witness = acceptability_witness(&set(&["0"]), &set(&["1", "11"]), 2, 3).unwrap();
        assert!(witness.contains(&bs("0")));
        assert!(witness.is_leafless(3));
        assert!(witness.union(&set(&["1", "11"])).width_of(3) <= 2);
        assert_eq!(witness.max_len(), Some(3));
    }

    #[test]
    fn largest_examples() {
        let cases: [(&[&str], usize, usize, &[&str]); 3] = [
            (&[], 1, 3, &["", "0", "00", "000"]),
            (&[], 2, 2, &["", "0", "1", "00", "10"]),
            (&["1"], 1, 2, &["", "1", "10"]),
        ];
        for (s, w, depth, expected) in cases {
            let s = set(s);
            let expected = set(expected);
            assert_eq!(greedy_largest(&s, w, depth), expected, "greedy {s:?} w={w}");
            assert_eq!(
                largest_acceptable_at(&s, w, depth),
                Some(expected),
                "oracle"
            );
        }
    }

    #[test]
    fn trim_on_machine_set() {
        let s = enumerate_s(2, 10_000, 3);
        let mut source = ListEnumeration::new(s.members().to_vec());
        let cfg = TrimConfig::new(2, 3, s.len()).unwrap();
        let report = trim(&mut source, &cfg);
        assert_eq!(
            report.result,
            set(&["", "0", "1", "00", "11", "000", "111"])
        );
        assert!(report.is_leafless() && report.width_ok() && report.keeps_snapshot_paths());
    }

    #[test]
    fn trim_from_dovetailer_matches_list() {
        let cfg = TrimConfig::new(2, 3, 10_000).unwrap();
        let mut d = Dovetailer::up_to_length(2, Some(3), None);
        let report = trim(&mut d, &cfg);
        assert_eq!(
            report.result,
            set(&["", "0", "1", "00", "11", "000", "111"])
        );
    }

    #[test]
    fn dead_end_is_trimmed() {
        // "1" never gets a child: level 2 is full with 00 and 01
        let s = set(&["", "0", "1", "00", "01", "000", "010"]);
        let mut source = ListEnumeration::new(s.members().to_vec());
        let report = trim(&mut source, &TrimConfig::new(2, 3, 7).unwrap());
        assert_eq!(report.result, set(&["", "0", "00", "01", "000", "010"]));
        assert!(!report.result.contains(&bs("1")));
    }

    #[test]
    fn narrow_dead_end_is_extended_not_trimmed() {
        // With w = 1 the only way through level 2 is 01, so 01 stays and gets
        // a zero child.
        let s = set(&["", "0", "01"]);
        let mut source = ListEnumeration::new(s.members().to_vec());
        let report = trim(&mut source, &TrimConfig::new(1, 3, 3).unwrap());
        assert_eq!(report.result, set(&["", "0", "01", "010"]));
    }

    #[test]
    fn rejection_reports_earliest_step() {
        // Λ survives S_1 = {00} through 0, 00; once "1" arrives at step 2 no
        // width-1 chain from the root fits.
        let mut source = ListEnumeration::new(vec![bs("00"), bs("1"), bs("11")]);
        let report = trim(&mut source, &TrimConfig::new(1, 2, 3).unwrap());
        let root = report
            .decisions
            .iter()
            .find(|d| d.string.is_empty())
            .unwrap();
        assert_eq!(root.verdict, Verdict::Rejected { step: 2 });
    }

    #[test]
    fn config_validation() {
        assert_eq!(TrimConfig::new(0, 3, 1), Err(TrimError::ZeroWidth));
        assert_eq!(TrimConfig::new(1, 0, 1), Err(TrimError::ZeroDepth));
    }
}
