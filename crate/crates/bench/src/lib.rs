//! Fixed workloads shared by the criterion benches.

use aitgl_core::game::{play, AliceStrategy, BlindBob};
use aitgl_core::tokens::replay;
use aitgl_core::trimmer::{trim, ListEnumeration, TrimConfig};
use aitgl_core::{enumerate_s, BitString, StringSet};

/// Snapshot of the machine's output set used by the trim workload.
pub fn machine_snapshot(k: usize, max_len: usize) -> StringSet {
    enumerate_s(k, 100_000, max_len)
}

pub fn enumerate(k: usize, max_len: usize) -> usize {
    enumerate_s(k, 100_000, max_len).len()
}

pub fn trim_snapshot(s: &StringSet, w: usize, depth: usize) -> usize {
    let cfg = TrimConfig::new(w, depth, s.len()).expect("valid config");
    trim(&mut ListEnumeration::new(s.members().to_vec()), &cfg)
        .result
        .len()
}

/// A comb of `w` disjoint paths to `depth`, in shortlex order.
pub fn comb(w: usize, depth: usize) -> Vec<BitString> {
    let mut set = StringSet::new();
    for i in 0..w {
        let stem = BitString::ones(i).concat(&BitString::zeros(1));
        for n in stem.len()..=depth {
            set.insert(stem.concat(&BitString::zeros(n - stem.len())));
        }
    }
    set.sorted()
}

pub fn replay_tokens(order: &[BitString], w: usize) -> usize {
    let (board, _) = replay(w, order.iter().cloned()).expect("within capacity");
    board.tokens_used()
}

pub fn play_blind(w: usize, f: usize, horizon: usize) -> usize {
    play(&mut AliceStrategy::new(w), &mut BlindBob::new(f), horizon)
        .records()
        .len()
}
