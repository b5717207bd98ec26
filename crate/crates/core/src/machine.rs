//! TRM-1, the fixed reference machine behind every `p(n)` in this crate.
//!
//! A program is a bit string `mode · payload` with a two-bit mode:
//!
//! | mode | output on input `n`                                   | steps                      |
//! |------|-------------------------------------------------------|----------------------------|
//! | `00` | payload repeated cyclically, cut to length `n` (`Λ` → `0^n`) | `n`                 |
//! | `01` | first `n` bits of `payload · 0^∞`                     | `n`                        |
//! | `10` | `payload`, whatever `n` is                            | `len(payload) + 1`         |
//! | `11` | `1^n`                                                 | `(val(payload)+1)(n+1)·16` |
//!
//! `val` reads the payload as a binary numeral with `val(Λ) = 0`. Programs
//! shorter than two bits never produce output.
//!
//! Every mode's step count is nondecreasing in `n`. [`Dovetailer`] relies on
//! this to keep one cursor per program instead of rescanning all inputs every
//! round.

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::bits::BitString;
use crate::tree::StringSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Mode {
    /// `00`
    Cyclic,
    /// `01`
    Padded,
    /// `10`
    Constant,
    /// `11`
    Slow,
}

impl Mode {
    pub const ALL: [Mode; 4] = [Mode::Cyclic, Mode::Padded, Mode::Constant, Mode::Slow];

    fn from_bits(hi: bool, lo: bool) -> Self {
        match (hi, lo) {
            (false, false) => Mode::Cyclic,
            (false, true) => Mode::Padded,
            (true, false) => Mode::Constant,
            (true, true) => Mode::Slow,
        }
    }

    pub fn tag(self) -> BitString {
        let (hi, lo) = match self {
            Mode::Cyclic => (false, false),
            Mode::Padded => (false, true),
            Mode::Constant => (true, false),
            Mode::Slow => (true, true),
        };
        BitString::from_bits(vec![hi, lo])
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("program {raw:?} is shorter than the two-bit mode tag")]
pub struct InvalidProgram {
    pub raw: BitString,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Program {
    mode: Mode,
    payload: BitString,
}

impl Program {
    pub fn new(mode: Mode, payload: BitString) -> Self {
        Self { mode, payload }
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn payload(&self) -> &BitString {
        &self.payload
    }

    pub fn raw(&self) -> BitString {
        self.mode.tag().concat(&self.payload)
    }

    /// Length of the raw program, `2 + len(payload)`.
    pub fn len(&self) -> usize {
        2 + self.payload.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Steps needed to run on input `n`. Saturates at `u64::MAX`.
    pub fn cost(&self, n: usize) -> u64 {
        let n = n as u64;
        match self.mode {
            Mode::Cyclic | Mode::Padded => n,
            Mode::Constant => self.payload.len() as u64 + 1,
            Mode::Slow => {
                let val = payload_value(&self.payload);
                val.and_then(|v| v.checked_add(1))
                    .and_then(|v| v.checked_mul(n.saturating_add(1)))
                    .and_then(|v| v.checked_mul(16))
                    .unwrap_or(u64::MAX)
            }
        }
    }

    /// The output on input `n`, ignoring step limits.
    pub fn output(&self, n: usize) -> BitString {
        match self.mode {
            Mode::Cyclic => {
                if self.payload.is_empty() {
                    BitString::zeros(n)
                } else {
                    let p = self.payload.bits();
                    BitString::from_bits((0..n).map(|i| p[i % p.len()]).collect())
                }
            }
            Mode::Padded => {
                let p = self.payload.bits();
                BitString::from_bits((0..n).map(|i| p.get(i).copied().unwrap_or(false)).collect())
            }
            Mode::Constant => self.payload.clone(),
            Mode::Slow => BitString::ones(n),
        }
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.raw())
    }
}

/// `None` when the numeral does not fit in 64 bits.
fn payload_value(payload: &BitString) -> Option<u64> {
    payload.bits().iter().try_fold(0u64, |acc, &b| {
        acc.checked_mul(2).and_then(|v| v.checked_add(b as u64))
    })
}

pub fn parse_program(raw: &BitString) -> Result<Program, InvalidProgram> {
    if raw.len() < 2 {
        return Err(InvalidProgram { raw: raw.clone() });
    }
    let mode = Mode::from_bits(raw.bit(0), raw.bit(1));
    let payload = BitString::from_bits(raw.bits()[2..].to_vec());
    Ok(Program { mode, payload })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RunOutcome {
    Output { output: BitString, steps: u64 },
    OutOfBudget,
    InvalidProgram,
}

impl RunOutcome {
    pub fn output(&self) -> Option<&BitString> {
        match self {
            RunOutcome::Output { output, .. } => Some(output),
            _ => None,
        }
    }
}

pub fn run_program(p: &Program, n: usize, budget: u64) -> RunOutcome {
    let steps = p.cost(n);
    if steps > budget {
        return RunOutcome::OutOfBudget;
    }
    RunOutcome::Output {
        output: p.output(n),
        steps,
    }
}

/// Runs a raw bit string; programs shorter than two bits are reported invalid.
pub fn run_raw(raw: &BitString, n: usize, budget: u64) -> RunOutcome {
    match parse_program(raw) {
        Ok(p) => run_program(&p, n, budget),
        Err(_) => RunOutcome::InvalidProgram,
    }
}

/// All programs with raw length in `min_len..=max_len`, shortlex order.
pub fn programs_between(min_len: usize, max_len: usize) -> Vec<Program> {
    (min_len.max(2)..=max_len)
        .flat_map(BitString::all_of_length)
        .map(|raw| parse_program(&raw).expect("length >= 2"))
        .collect()
}

/// A string found by the dovetailer, with the run that produced it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Discovery {
    pub string: BitString,
    pub program: BitString,
    pub round: u64,
}

/// Dovetailed search for strings `x` with some program `p` (from a fixed
/// program list) such that `p(len(x)) = x`.
///
/// Round `r` runs every program on every input `n <= r` with step budget `r`
/// (capped by the optional global budget). Members first found in a round are
/// reported in shortlex order.
#[derive(Debug, Clone)]
pub struct Dovetailer {
    programs: Vec<Program>,
    next_input: Vec<usize>,
    max_input: Option<usize>,
    budget_cap: Option<u64>,
    round: u64,
    seen: HashSet<BitString>,
}

impl Dovetailer {
    pub fn new(programs: Vec<Program>, max_input: Option<usize>, budget_cap: Option<u64>) -> Self {
        let next_input = vec![0; programs.len()];
        Self {
            programs,
            next_input,
            max_input,
            budget_cap,
            round: 0,
            seen: HashSet::new(),
        }
    }

    /// Programs of length at most `k`; enumerates `{x : C(x | len x) <= k}`.
    pub fn up_to_length(k: usize, max_input: Option<usize>, budget_cap: Option<u64>) -> Self {
        Self::new(programs_between(2, k), max_input, budget_cap)
    }

    /// Programs strictly shorter than `bound`.
    pub fn shorter_than(bound: usize, max_input: Option<usize>, budget_cap: Option<u64>) -> Self {
        if bound <= 2 {
            return Self::new(Vec::new(), max_input, budget_cap);
        }
        Self::new(programs_between(2, bound - 1), max_input, budget_cap)
    }

    pub fn round(&self) -> u64 {
        self.round
    }

    pub fn program_count(&self) -> usize {
        self.programs.len()
    }

    fn budget_at(&self, round: u64) -> u64 {
        self.budget_cap.map_or(round, |cap| round.min(cap))
    }

    fn input_limit(&self, round: u64) -> usize {
        let r = usize::try_from(round).unwrap_or(usize::MAX);
        self.max_input.map_or(r, |m| r.min(m))
    }

    /// Runs the next round and returns what it found.
    pub fn step(&mut self) -> Vec<Discovery> {
        self.round += 1;
        let round = self.round;
        let budget = self.budget_at(round);
        let limit = self.input_limit(round);
        let mut found = Vec::new();
        for (p, next) in self.programs.iter().zip(self.next_input.iter_mut()) {
            while *next <= limit && p.cost(*next) <= budget {
                let n = *next;
                *next += 1;
                let out = p.output(n);
                if out.len() == n && !self.seen.contains(&out) {
                    self.seen.insert(out.clone());
                    found.push(Discovery {
                        string: out,
                        program: p.raw(),
                        round,
                    });
                }
            }
        }
        found.sort_by(|a, b| a.string.cmp(&b.string));
        found
    }

    /// The first round after the current one in which some program halts on
    /// a new input, or `None` if nothing is left within the caps.
    pub fn next_event_round(&self) -> Option<u64> {
        let mut best: Option<u64> = None;
        for (p, &n) in self.programs.iter().zip(&self.next_input) {
            if self.max_input.is_some_and(|m| n > m) {
                continue;
            }
            let cost = p.cost(n);
            if self.budget_cap.is_some_and(|cap| cost > cap) {
                continue;
            }
            let at = (n as u64).max(cost).max(self.round + 1);
            best = Some(best.map_or(at, |b| b.min(at)));
        }
        best
    }

    /// Skips idle rounds so that the next [`step`](Self::step) is `round`.
    /// Only sound when no program halts on a new input before `round`.
    fn skip_to(&mut self, round: u64) {
        debug_assert!(round > self.round);
        self.round = round - 1;
    }

    /// Runs rounds until nothing else can be found within the caps.
    pub fn run_to_completion(&mut self) -> Vec<Discovery> {
        assert!(
            self.max_input.is_some() || self.budget_cap.is_some() || self.programs.is_empty(),
            "unbounded dovetailing never completes"
        );
        let mut all = Vec::new();
        while let Some(r) = self.next_event_round() {
            self.skip_to(r);
            all.extend(self.step());
        }
        all
    }
}

/// Every `x` with `len(x) <= max_len` that some program of length `<= k`
/// prints on input `len(x)` within `budget` steps, in dovetailing order.
pub fn enumerate_s(k: usize, budget: u64, max_len: usize) -> StringSet {
    Dovetailer::up_to_length(k, Some(max_len), Some(budget))
        .run_to_completion()
        .into_iter()
        .map(|d| d.string)
        .collect()
}

/// A shortest program witnessing an upper bound on `C(x | n)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub program: BitString,
    pub length: usize,
}

/// Length of the shortest payload each mode needs to print `x` on input `n`
/// within `budget` steps, or `None` if the mode cannot do it at all.
fn shortest_payload(mode: Mode, x: &BitString, n: usize, budget: u64) -> Option<usize> {
    let fits_n = x.len() == n && (n as u64) <= budget;
    match mode {
        Mode::Cyclic if fits_n => Some(if x.is_all_zeros() {
            0
        } else {
            smallest_period(x)
        }),
        Mode::Padded if fits_n => Some(x.bits().iter().rposition(|&b| b).map_or(0, |i| i + 1)),
        Mode::Constant if (x.len() as u64) < budget => Some(x.len()),
        Mode::Slow if x.len() == n && x.is_all_ones() => {
            let p = Program::new(Mode::Slow, BitString::empty());
            (p.cost(n) <= budget).then_some(0)
        }
        _ => None,
    }
}

/// Smallest `p >= 1` with `x[i] = x[i - p]` for all `i >= p` (KMP border).
fn smallest_period(x: &BitString) -> usize {
    let b = x.bits();
    let n = b.len();
    if n == 0 {
        return 0;
    }
    let mut fail = vec![0usize; n + 1];
    let mut k = 0;
    for i in 1..n {
        while k > 0 && b[i] != b[k] {
            k = fail[k];
        }
        if b[i] == b[k] {
            k += 1;
        }
        fail[i + 1] = k;
    }
    n - fail[n]
}

/// Shortest program of length at most `k_max` that prints `x` on input `n`
/// within `budget` steps. Among equally short programs the shortlex-first is
/// returned.
///
/// Computed in closed form from the four modes: the minimum length is the
/// minimum over modes of the shortest workable payload, and at that length
/// each mode admits exactly one payload, so the shortlex-first program is the
/// one with the smallest mode tag.
pub fn min_program_length(x: &BitString, n: usize, k_max: usize, budget: u64) -> Option<Witness> {
    let best = Mode::ALL
        .iter()
        .filter_map(|&m| shortest_payload(m, x, n, budget).map(|q| (q, m)))
        .min()?;
    let (q, mode) = best;
    if q + 2 > k_max {
        return None;
    }
    let payload = match mode {
        Mode::Cyclic | Mode::Padded => x.prefix(q),
        Mode::Constant => x.clone(),
        Mode::Slow => BitString::zeros(q),
    };
    let program = Program::new(mode, payload);
    debug_assert_eq!(run_program(&program, n, budget).output(), Some(x));
    Some(Witness {
        length: program.len(),
        program: program.raw(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bs;

    fn run(raw: &str, n: usize, budget: u64) -> RunOutcome {
        run_raw(&bs(raw), n, budget)
    }

    #[test]
    fn parse_examples() {
        let p = parse_program(&bs("00101")).unwrap();
        assert_eq!(p.mode(), Mode::Cyclic);
        assert_eq!(p.payload(), &bs("101"));
        assert_eq!(p.raw(), bs("00101"));

        assert!(parse_program(&bs("1")).is_err());
        assert!(parse_program(&bs("")).is_err());

        let p = parse_program(&bs("10")).unwrap();
        assert_eq!(p.mode(), Mode::Constant);
        assert!(p.payload().is_empty());
    }

    #[test]
    fn run_examples() {
        assert_eq!(run("0010", 5, 100).output(), Some(&bs("10101")));
        assert_eq!(run("01101", 5, 100).output(), Some(&bs("10100")));
        assert_eq!(run("111", 3, 50), RunOutcome::OutOfBudget);
        assert_eq!(
            run("111", 3, 128),
            RunOutcome::Output {
                output: bs("111"),
                steps: 128
            }
        );
        assert_eq!(run("1", 3, 100), RunOutcome::InvalidProgram);
    }

    #[test]
    fn mode_details() {
        // empty cyclic payload prints zeros
        assert_eq!(run("00", 4, 10).output(), Some(&bs("0000")));
        // constant mode ignores n and costs len + 1
        assert_eq!(
            run("10011", 9, 4),
            RunOutcome::Output {
                output: bs("011"),
                steps: 4
            }
        );
        assert_eq!(run("10011", 9, 3), RunOutcome::OutOfBudget);
        // val(Λ) = 0
        assert_eq!(parse_program(&bs("11")).unwrap().cost(0), 16);
        // a payload too large for u64 saturates rather than wrapping
        let big = Program::new(Mode::Slow, BitString::ones(80));
        assert_eq!(big.cost(3), u64::MAX);
    }

    #[test]
    fn budget_bounds_steps() {
        for raw in BitString::all_up_to(6) {
            for n in 0..8 {
                if let RunOutcome::Output { steps, .. } = run_raw(&raw, n, 200) {
                    assert!(steps <= 200);
                }
            }
        }
    }

    #[test]
    fn enumerate_examples() {
        assert!(enumerate_s(1, 10_000, 5).is_empty());
        let s = enumerate_s(2, 10_000, 3);
        let expected: StringSet = ["", "0", "00", "000", "1", "11", "111"]
            .iter()
            .map(|x| bs(x))
            .collect();
        assert_eq!(s, expected);
    }

    #[test]
    fn dovetail_order_is_by_round_then_shortlex() {
        let mut d = Dovetailer::up_to_length(2, Some(3), None);
        let r1 = d.step();
        // round 1: n in {0, 1} with budget 1; 1^n needs 16 steps
        let strings: Vec<_> = r1.iter().map(|x| x.string.clone()).collect();
        assert_eq!(strings, vec![bs(""), bs("0")]);
        let r2 = d.step();
        assert_eq!(
            r2.iter().map(|x| x.string.clone()).collect::<Vec<_>>(),
            vec![bs("00")]
        );
        // 1 = 11(1) costs 32 steps, so it shows up in round 32
        let mut round_of_one = None;
        for _ in 0..40 {
            for x in d.step() {
                if x.string == bs("1") {
                    round_of_one = Some(x.round);
                }
            }
        }
        assert_eq!(round_of_one, Some(32));
    }

    #[test]
    fn skipping_matches_round_by_round() {
        let fast = Dovetailer::up_to_length(5, Some(6), Some(500)).run_to_completion();
        let mut slow = Dovetailer::up_to_length(5, Some(6), Some(500));
        let mut all = Vec::new();
        for _ in 0..600 {
            all.extend(slow.step());
        }
        assert_eq!(fast, all);
    }

    #[test]
    fn min_program_examples() {
        assert_eq!(
            min_program_length(&bs("000"), 3, 8, 1000).unwrap().program,
            bs("00")
        );
        assert_eq!(
            min_program_length(&bs("1"), 7, 8, 1000).unwrap().program,
            bs("101")
        );
        assert_eq!(
            min_program_length(&bs("01"), 3, 4, 1000).unwrap().program,
            bs("1001")
        );
        assert_eq!(min_program_length(&bs("01"), 3, 3, 1000), None);
    }

    #[test]
    fn smallest_period_cases() {
        assert_eq!(smallest_period(&bs("0101")), 2);
        assert_eq!(smallest_period(&bs("0100")), 3);
        assert_eq!(smallest_period(&bs("1")), 1);
        assert_eq!(smallest_period(&bs("110110")), 3);
    }
}
