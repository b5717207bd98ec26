//! The machine against a from-scratch interpreter and brute-force searches.

use aitgl_core::machine::{enumerate_s, min_program_length, run_raw, Dovetailer};
use aitgl_core::{BitString, StringSet};
use proptest::prelude::*;

/// Independent reading of the four modes: the output, or `None` when
/// the program is invalid or needs more than `budget` steps.
fn interpret(raw: &[bool], n: usize, budget: u64) -> Option<Vec<bool>> {
    if raw.len() < 2 {
        return None;
    }
    let payload = &raw[2..];
    let (out, steps): (Vec<bool>, u128) = match (raw[0], raw[1]) {
        (false, false) => {
            let out = if payload.is_empty() {
                vec![false; n]
            } else {
                payload.iter().copied().cycle().take(n).collect()
            };
            (out, n as u128)
        }
        (false, true) => {
            let padded = payload.iter().copied().chain(std::iter::repeat(false));
            (padded.take(n).collect(), n as u128)
        }
        (true, false) => (payload.to_vec(), payload.len() as u128 + 1),
        (true, true) => {
            let val = payload.iter().fold(0u128, |v, &b| v * 2 + u128::from(b));
            (vec![true; n], (val + 1) * (n as u128 + 1) * 16)
        }
    };
    (steps <= u128::from(budget)).then_some(out)
}

fn all_programs(max_len: usize) -> Vec<BitString> {
    BitString::all_up_to(max_len)
        .filter(|p| p.len() >= 2)
        .collect()
}

fn brute_min(x: &BitString, n: usize, k_max: usize, budget: u64) -> Option<(usize, BitString)> {
    all_programs(k_max)
        .into_iter()
        .find(|p| interpret(p.bits(), n, budget).as_deref() == Some(x.bits()))
        .map(|p| (p.len(), p))
}

fn brute_s(k: usize, budget: u64, max_len: usize) -> StringSet {
    let programs = all_programs(k);
    BitString::all_up_to(max_len)
        .filter(|x| {
            programs
                .iter()
                .any(|p| interpret(p.bits(), x.len(), budget).as_deref() == Some(x.bits()))
        })
        .collect()
}

#[test]
fn run_matches_interpreter_exhaustively() {
    for p in all_programs(7) {
        for n in 0..10 {
            for budget in [0, 1, 3, 8, 40, 200, 5_000] {
                let ours = run_raw(&p, n, budget);
                let theirs = interpret(p.bits(), n, budget);
                assert_eq!(
                    ours.output().map(|o| o.bits().to_vec()),
                    theirs,
                    "{p} n={n} b={budget}"
                );
            }
        }
    }
    assert!(run_raw(&"1".parse().unwrap(), 3, 100).output().is_none());
}

#[test]
fn min_program_length_matches_brute_force() {
    for x in BitString::all_up_to(6) {
        for n in 0..9 {
            for budget in [0, 2, 5, 16, 100, 10_000] {
                for k_max in [2, 3, 5, 9] {
                    let ours = min_program_length(&x, n, k_max, budget);
                    let theirs = brute_min(&x, n, k_max, budget);
                    assert_eq!(
                        ours.map(|w| (w.length, w.program)),
                        theirs,
                        "x={x:?} n={n} budget={budget} k_max={k_max}"
                    );
                }
            }
        }
    }
}

#[test]
fn documented_min_length_examples() {
    let b = 10_000;
    assert_eq!(
        min_program_length(&"000".parse().unwrap(), 3, 4, b)
            .unwrap()
            .length,
        2
    );
    let w = min_program_length(&"1".parse().unwrap(), 7, 4, b).unwrap();
    assert_eq!((w.length, w.program.to_string()), (3, "101".into()));
    let w = min_program_length(&"01".parse().unwrap(), 3, 4, b).unwrap();
    assert_eq!((w.length, w.program.to_string()), (4, "1001".into()));
    assert!(min_program_length(&"01".parse().unwrap(), 3, 3, b).is_none());
}

#[test]
fn enumerate_matches_brute_force() {
    for k in 0..=5 {
        for budget in [0, 5, 17, 64, 300, 10_000] {
            for max_len in [0, 3, 6] {
                assert_eq!(
                    enumerate_s(k, budget, max_len),
                    brute_s(k, budget, max_len),
                    "k={k} budget={budget} max_len={max_len}"
                );
            }
        }
    }
    assert!(enumerate_s(1, 10_000, 5).is_empty());
}

#[test]
fn dovetailing_finds_everything_eventually() {
    // Without a budget cap, round r uses budget r; after enough rounds the
    // dovetailer has found every string any length-<=3 program prints.
    let mut d = Dovetailer::up_to_length(3, Some(6), None);
    let found: StringSet = d
        .run_to_completion()
        .into_iter()
        .map(|x| x.string)
        .collect();
    assert_eq!(found, brute_s(3, u64::MAX, 6));
}

fn arb_bits(max: usize) -> impl Strategy<Value = BitString> {
    prop::collection::vec(any::<bool>(), 0..=max).prop_map(BitString::from_bits)
}

proptest! {
    #[test]
    fn budget_monotonicity(k in 2usize..=5, b1 in 0u64..400, extra in 0u64..400, max_len in 0usize..=7) {
        let small = enumerate_s(k, b1, max_len);
        let large = enumerate_s(k, b1 + extra, max_len);
        prop_assert!(small.is_subset(&large));
    }

    #[test]
    fn min_length_is_monotone(x in arb_bits(8), n in 0usize..12, b in 0u64..300, k in 2usize..8) {
        let base = min_program_length(&x, n, k, b).map(|w| w.length);
        let more_budget = min_program_length(&x, n, k, b * 2 + 1).map(|w| w.length);
        let more_k = min_program_length(&x, n, k + 2, b).map(|w| w.length);
        if let Some(v) = base {
            prop_assert!(more_budget.is_some_and(|u| u <= v));
            prop_assert!(more_k.is_some_and(|u| u <= v));
        }
    }

    #[test]
    fn none_means_absent_from_s(x in arb_bits(6), k in 2usize..=5, b in 0u64..200) {
        if min_program_length(&x, x.len(), k, b).is_none() {
            prop_assert!(!enumerate_s(k, b, 6).contains(&x));
        }
    }

    #[test]
    fn witness_reruns(x in arb_bits(10), n in 0usize..14, b in 0u64..2_000) {
        if let Some(w) = min_program_length(&x, n, 20, b) {
            let out = run_raw(&w.program, n, b);
            prop_assert_eq!(out.output(), Some(&x));
        }
    }
}
