//! Sets of words viewed as vertex sets of the rooted binary tree.
//!
//! Leaflessness is only ever checked on a truncation: a member whose length
//! equals the cutoff depth needs no child. The trimmer and the token tests
//! use the same rule.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bits::BitString;

/// A finite set of words that remembers arrival order and per-length counts.
///
/// Equality compares membership only; arrival order is not part of identity.
#[derive(Clone, Default)]
pub struct StringSet {
    members: Vec<BitString>,
    index: HashSet<BitString>,
    per_length: BTreeMap<usize, usize>,
}

impl StringSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts `x`; returns `false` if it was already present.
    pub fn insert(&mut self, x: BitString) -> bool {
        if self.index.contains(&x) {
            return false;
        }
        *self.per_length.entry(x.len()).or_insert(0) += 1;
        self.index.insert(x.clone());
        self.members.push(x);
        true
    }

    pub fn contains(&self, x: &BitString) -> bool {
        self.index.contains(x)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Members in arrival order.
    pub fn iter(&self) -> std::slice::Iter<'_, BitString> {
        self.members.iter()
    }

    pub fn members(&self) -> &[BitString] {
        &self.members
    }

    /// Members in shortlex order.
    pub fn sorted(&self) -> Vec<BitString> {
        let mut v = self.members.clone();
        v.sort();
        v
    }

    pub fn count_at(&self, n: usize) -> usize {
        self.per_length.get(&n).copied().unwrap_or(0)
    }

    pub fn per_length(&self) -> &BTreeMap<usize, usize> {
        &self.per_length
    }

    pub fn max_len(&self) -> Option<usize> {
        self.per_length.keys().next_back().copied()
    }

    /// Members of length `n`, in lexicographic order.
    pub fn at_length(&self, n: usize) -> Vec<BitString> {
        let mut v: Vec<_> = self
            .members
            .iter()
            .filter(|x| x.len() == n)
            .cloned()
            .collect();
        v.sort();
        v
    }

    /// Keeps only members of length at most `max_len`, preserving order.
    pub fn truncated(&self, max_len: usize) -> StringSet {
        self.members
            .iter()
            .filter(|x| x.len() <= max_len)
            .cloned()
            .collect()
    }

    pub fn union(&self, other: &StringSet) -> StringSet {
        let mut out = self.clone();
        out.extend(other.iter().cloned());
        out
    }

    pub fn is_subset(&self, other: &StringSet) -> bool {
        self.members.iter().all(|x| other.contains(x))
    }

    pub fn has_child(&self, x: &BitString) -> bool {
        self.contains(&x.child(false)) || self.contains(&x.child(true))
    }

    /// Largest per-length count over lengths `0..=max_len`.
    pub fn width_of(&self, max_len: usize) -> usize {
        self.per_length
            .range(..=max_len)
            .map(|(_, &c)| c)
            .max()
            .unwrap_or(0)
    }

    /// Largest per-length count over all lengths.
    pub fn width(&self) -> usize {
        self.per_length.values().copied().max().unwrap_or(0)
    }

    /// Every member shorter than `depth` has a child in the set.
    pub fn is_leafless(&self, depth: usize) -> bool {
        self.members
            .iter()
            .filter(|x| x.len() < depth)
            .all(|x| self.has_child(x))
    }

    /// Members shorter than `depth` that have no child in the set.
    pub fn leaves(&self, depth: usize) -> Vec<BitString> {
        let mut v: Vec<_> = self
            .members
            .iter()
            .filter(|x| x.len() < depth && !self.has_child(x))
            .cloned()
            .collect();
        v.sort();
        v
    }

    /// All child-chains inside the set that end at length `depth` and start at
    /// a member whose parent is not a member. Output is sorted.
    pub fn maximal_paths(&self, depth: usize) -> Vec<Path> {
        let mut starts: Vec<_> = self
            .members
            .iter()
            .filter(|x| x.len() <= depth)
            .filter(|x| x.parent().is_none_or(|p| !self.contains(&p)))
            .cloned()
            .collect();
        starts.sort();

        let mut out = Vec::new();
        let mut stack = Vec::new();
        for start in starts {
            stack.push(start);
            self.extend_paths(depth, &mut stack, &mut out);
            stack.pop();
        }
        out.sort();
        out
    }

    fn extend_paths(&self, depth: usize, stack: &mut Vec<BitString>, out: &mut Vec<Path>) {
        let last = stack.last().expect("non-empty path").clone();
        if last.len() == depth {
            out.push(Path {
                vertices: stack.clone(),
            });
            return;
        }
        for bit in [false, true] {
            let c = last.child(bit);
            if self.contains(&c) {
                stack.push(c);
                self.extend_paths(depth, stack, out);
                stack.pop();
            }
        }
    }
}

impl PartialEq for StringSet {
    fn eq(&self, other: &Self) -> bool {
        self.len() == other.len() && self.is_subset(other)
    }
}

impl Eq for StringSet {}

impl std::fmt::Debug for StringSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.sorted()).finish()
    }
}

impl FromIterator<BitString> for StringSet {
    fn from_iter<I: IntoIterator<Item = BitString>>(iter: I) -> Self {
        let mut s = StringSet::new();
        s.extend(iter);
        s
    }
}

impl Extend<BitString> for StringSet {
    fn extend<I: IntoIterator<Item = BitString>>(&mut self, iter: I) {
        for x in iter {
            self.insert(x);
        }
    }
}

impl<'a> IntoIterator for &'a StringSet {
    type Item = &'a BitString;
    type IntoIter = std::slice::Iter<'a, BitString>;

    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}

#[derive(Serialize, Deserialize)]
struct Entry {
    s: BitString,
    len: usize,
}

/// Serialized as a JSON array of `{"s": "...", "len": n}` in arrival order.
impl Serialize for StringSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.members.iter().map(|x| Entry {
            s: x.clone(),
            len: x.len(),
        }))
    }
}

impl<'de> Deserialize<'de> for StringSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let entries = Vec::<Entry>::deserialize(deserializer)?;
        let mut set = StringSet::new();
        for e in entries {
            if e.s.len() != e.len {
                return Err(serde::de::Error::custom(format!(
                    "string {:?} has length {} but len field says {}",
                    e.s,
                    e.s.len(),
                    e.len
                )));
            }
            if !set.insert(e.s.clone()) {
                return Err(serde::de::Error::custom(format!(
                    "duplicate member {:?}",
                    e.s
                )));
            }
        }
        Ok(set)
    }
}

/// A chain `x_0, x_1, ...` where each vertex is a child of the previous one.
/// The first vertex need not be the root.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Path {
    pub vertices: Vec<BitString>,
}

impl Path {
    pub fn first(&self) -> &BitString {
        &self.vertices[0]
    }

    pub fn last(&self) -> &BitString {
        self.vertices.last().expect("paths are non-empty")
    }

    pub fn is_child_chain(&self) -> bool {
        self.vertices
            .windows(2)
            .all(|w| w[1].parent().as_ref() == Some(&w[0]))
    }
}

impl Ord for Path {
    fn cmp(&self, other: &Self) -> Ordering {
        self.vertices.cmp(&other.vertices)
    }
}

impl PartialOrd for Path {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub fn shortlex_compare(a: &BitString, b: &BitString) -> Ordering {
    a.cmp(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bs;

    fn set(xs: &[&str]) -> StringSet {
        xs.iter().map(|x| bs(x)).collect()
    }

    #[test]
    fn shortlex_compare_examples() {
        assert_eq!(shortlex_compare(&bs(""), &bs("0")), Ordering::Less);
        assert_eq!(shortlex_compare(&bs("01"), &bs("10")), Ordering::Less);
        assert_eq!(shortlex_compare(&bs("1"), &bs("00")), Ordering::Less);
    }

    #[test]
    fn width_examples() {
        assert_eq!(StringSet::new().width_of(10), 0);
        assert_eq!(set(&["0", "1", "00"]).width_of(5), 2);
        assert_eq!(set(&["0", "1", "00"]).width_of(0), 0);
    }

    #[test]
    fn duplicates_are_ignored() {
        let mut s = set(&["0"]);
        assert!(!s.insert(bs("0")));
        assert_eq!(s.len(), 1);
        assert_eq!(s.count_at(1), 1);
    }

    #[test]
    fn leafless_examples() {
        assert!(set(&["0", "00", "000"]).is_leafless(3));
        assert!(!set(&["0", "1", "00"]).is_leafless(2));
        assert!(set(&["", "0", "1", "00", "10"]).is_leafless(2));
        assert_eq!(set(&["0", "1", "00"]).leaves(2), vec![bs("1")]);
    }

    #[test]
    fn maximal_path_examples() {
        let p = set(&["", "0", "00"]).maximal_paths(2);
        assert_eq!(p.len(), 1);
        assert_eq!(p[0].vertices, vec![bs(""), bs("0"), bs("00")]);

        let p = set(&["", "0", "1", "00", "11"]).maximal_paths(2);
        assert_eq!(p.len(), 2);
        assert_eq!(p[0].vertices, vec![bs(""), bs("0"), bs("00")]);
        assert_eq!(p[1].vertices, vec![bs(""), bs("1"), bs("11")]);

        assert!(StringSet::new().maximal_paths(3).is_empty());
    }

    #[test]
    fn paths_may_start_below_root() {
        let p = set(&["1", "10", "0", "110"]).maximal_paths(2);
        assert_eq!(p.len(), 1);
        assert_eq!(p[0].vertices, vec![bs("1"), bs("10")]);
    }

    #[test]
    fn json_round_trip_keeps_arrival_order() {
        let s = set(&["10", "", "0"]);
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(
            json,
            r#"[{"s":"10","len":2},{"s":"","len":0},{"s":"0","len":1}]"#
        );
        let back: StringSet = serde_json::from_str(&json).unwrap();
        assert_eq!(back.members(), s.members());
        assert!(serde_json::from_str::<StringSet>(r#"[{"s":"10","len":3}]"#).is_err());
    }
}
