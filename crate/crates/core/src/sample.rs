//! Instance generators for experiments and property checks.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bits::BitString;
use crate::tree::StringSet;

fn random_word<R: Rng>(rng: &mut R, len: usize) -> BitString {
    BitString::from_bits((0..len).map(|_| rng.gen_bool(0.5)).collect())
}

/// Deterministic shuffle driven by a ChaCha8 stream seeded with `seed`.
pub fn seeded_shuffle<T>(items: &mut [T], seed: u64) {
    items.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
}

/// A random set of width `<= w` over lengths `0..=depth`, in random arrival
/// order. About half the members extend a member one level up, so the set
/// tends to contain long paths as well as scattered strings.
pub fn random_snapshot<R: Rng>(rng: &mut R, w: usize, depth: usize) -> StringSet {
    let mut members: Vec<BitString> = Vec::new();
    let mut prev: Vec<BitString> = Vec::new();
    for n in 0..=depth {
        let target = rng.gen_range(0..=w.min(1usize.checked_shl(n as u32).unwrap_or(usize::MAX)));
        let mut level: HashSet<BitString> = HashSet::new();
        let mut attempts = 0;
        while level.len() < target && attempts < 64 {
            attempts += 1;
            let x = match prev.choose(rng) {
                Some(p) if rng.gen_bool(0.5) => p.child(rng.gen_bool(0.5)),
                _ => random_word(rng, n),
            };
            level.insert(x);
        }
        let mut level: Vec<_> = level.into_iter().collect();
        level.sort();
        members.extend(level.iter().cloned());
        prev = level;
    }
    members.shuffle(rng);
    members.into_iter().collect()
}

/// A random truncated-leafless set of width `<= w` to `depth`: a few random
/// paths started at random levels and extended bit by bit.
pub fn random_leafless<R: Rng>(rng: &mut R, w: usize, depth: usize) -> StringSet {
    let paths = rng.gen_range(1..=w);
    let mut set = StringSet::new();
    for _ in 0..paths {
        let start = rng.gen_range(0..=depth);
        let mut x = random_word(rng, start);
        let mut fits = true;
        let mut path = Vec::new();
        loop {
            if !set.contains(&x) && set.count_at(x.len()) + 1 > w {
                fits = false;
                break;
            }
            path.push(x.clone());
            if x.len() == depth {
                break;
            }
            x = x.child(rng.gen_bool(0.5));
        }
        if fits {
            set.extend(path);
        }
    }
    set
}

/// A snapshot made of a leafless backbone of width `< w` plus branches that
/// stop before `depth` (dead ends). Returns the set and the dead-end tips.
pub fn snapshot_with_dead_ends<R: Rng>(
    rng: &mut R,
    w: usize,
    depth: usize,
) -> (StringSet, Vec<BitString>) {
    assert!(w >= 2 && depth >= 2);
    let mut set = random_leafless(rng, w - 1, depth);
    if set.is_empty() {
        set.extend((0..=depth).map(BitString::zeros));
    }
    let mut tips = Vec::new();
    let branches = rng.gen_range(1..=3);
    let members = set.sorted();
    for _ in 0..branches {
        let from = members.choose(rng).expect("non-empty backbone");
        if from.len() + 1 >= depth {
            continue;
        }
        let stop = rng.gen_range(from.len() + 1..depth);
        let mut x = from.clone();
        let mut branch = Vec::new();
        while x.len() < stop {
            x = x.child(rng.gen_bool(0.5));
            if !set.contains(&x) {
                branch.push(x.clone());
            }
        }
        let fits = branch.iter().all(|b| set.count_at(b.len()) < w);
        if fits && !branch.is_empty() && !set.has_child(&x) {
            tips.push(x);
            set.extend(branch);
        }
    }
    let mut members = set.members().to_vec();
    members.shuffle(rng);
    (members.into_iter().collect(), tips)
}

/// Every truncated-leafless set of width `<= w` over lengths `0..=depth`,
/// including the empty set and sets whose paths start below the root.
pub fn all_leafless(w: usize, depth: usize) -> Vec<StringSet> {
    let mut out = Vec::new();
    let mut levels: Vec<Vec<BitString>> = Vec::new();
    extend_levels(w, depth, &mut levels, &mut out);
    out
}

fn extend_levels(
    w: usize,
    depth: usize,
    levels: &mut Vec<Vec<BitString>>,
    out: &mut Vec<StringSet>,
) {
    let n = levels.len();
    if n == depth + 1 {
        out.push(levels.iter().flatten().cloned().collect());
        return;
    }
    let parents: Vec<BitString> = levels.last().cloned().unwrap_or_default();
    let mut forced: Vec<BitString> = Vec::new();
    child_choices(w, &parents, 0, &mut forced, &mut |required| {
        let taken: HashSet<&BitString> = required.iter().collect();
        let fresh: Vec<BitString> = BitString::all_of_length(n)
            .filter(|x| !taken.contains(x))
            .filter(|x| x.parent().is_none_or(|p| !parents.contains(&p)))
            .collect();
        let room = w - required.len();
        let mut extra = Vec::new();
        subsets_up_to(&fresh, room, 0, &mut extra, &mut |extra| {
            let mut level = required.to_vec();
            level.extend(extra.iter().cloned());
            levels.push(level);
            extend_levels(w, depth, levels, out);
            levels.pop();
        });
    });
}

/// For each parent picks child 0, child 1, or both, keeping at most `w`.
fn child_choices(
    w: usize,
    parents: &[BitString],
    i: usize,
    acc: &mut Vec<BitString>,
    emit: &mut dyn FnMut(&[BitString]),
) {
    if i == parents.len() {
        emit(acc);
        return;
    }
    let p = &parents[i];
    let options: [&[bool]; 3] = [&[false], &[true], &[false, true]];
    for bits in options {
        if acc.len() + bits.len() > w {
            continue;
        }
        for &b in bits {
            acc.push(p.child(b));
        }
        child_choices(w, parents, i + 1, acc, emit);
        acc.truncate(acc.len() - bits.len());
    }
}

fn subsets_up_to(
    pool: &[BitString],
    room: usize,
    start: usize,
    acc: &mut Vec<BitString>,
    emit: &mut dyn FnMut(&[BitString]),
) {
    emit(acc);
    if acc.len() == room {
        return;
    }
    for i in start..pool.len() {
        acc.push(pool[i].clone());
        subsets_up_to(pool, room, i + 1, acc, emit);
        acc.pop();
    }
}

/// Canonical member of the orbit of `set` under the automorphisms of the
/// binary tree (swapping the two subtrees of any vertex). Two sets are in the
/// same orbit exactly when their canonical forms are equal.
pub fn canonical_under_swaps(set: &StringSet, depth: usize) -> StringSet {
    let mut out = StringSet::new();
    canonical_subtree(
        set,
        &BitString::empty(),
        &BitString::empty(),
        depth,
        &mut out,
    );
    out
}

/// Shape code of the subtree at `v`: membership bit, then the two child
/// codes in sorted order.
fn shape(set: &StringSet, v: &BitString, depth: usize) -> Vec<u8> {
    let mut code = vec![u8::from(set.contains(v))];
    if v.len() < depth {
        let mut a = shape(set, &v.child(false), depth);
        let mut b = shape(set, &v.child(true), depth);
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        code.push(2);
        code.extend(a);
        code.push(3);
        code.extend(b);
    }
    code
}

fn canonical_subtree(
    set: &StringSet,
    v: &BitString,
    image: &BitString,
    depth: usize,
    out: &mut StringSet,
) {
    if set.contains(v) {
        out.insert(image.clone());
    }
    if v.len() == depth {
        return;
    }
    let (c0, c1) = (v.child(false), v.child(true));
    let (first, second) = if shape(set, &c0, depth) <= shape(set, &c1, depth) {
        (c0, c1)
    } else {
        (c1, c0)
    };
    canonical_subtree(set, &first, &image.child(false), depth, out);
    canonical_subtree(set, &second, &image.child(true), depth, out);
}

/// One representative per automorphism orbit of [`all_leafless`].
pub fn leafless_orbit_representatives(w: usize, depth: usize) -> Vec<StringSet> {
    let mut seen: HashSet<Vec<BitString>> = HashSet::new();
    let mut reps = Vec::new();
    for s in all_leafless(w, depth) {
        let c = canonical_under_swaps(&s, depth);
        if seen.insert(c.sorted()) {
            reps.push(c);
        }
    }
    reps
}
