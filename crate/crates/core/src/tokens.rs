//! Online numbering of the paths of a leafless set.
//!
//! Strings of a leafless set `T` of width at most `w` arrive one at a time in
//! any order. The board keeps tokens on *distinguished* vertices so that
//!
//! 1. distinguished vertices are pairwise inconsistent,
//! 2. every observed string is a prefix of a distinguished vertex,
//! 3. a token only ever moves to an extension of its current vertex.
//!
//! Pairwise inconsistent vertices of such a `T` each have their own extension
//! at every deep enough level, so at most `w` tokens are ever placed. Token
//! `i` then names the path it travels along: [`TokenBoard::decode_path`]
//! waits until token `i` sits on a string of length at least `n` and returns
//! its first `n` bits.

use std::collections::{BTreeMap, HashSet};

use serde::Serialize;
use thiserror::Error;

use crate::bits::BitString;

pub type TokenId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TokenError {
    #[error("{0:?} was already observed")]
    Duplicate(BitString),
    #[error("placing a token on {at:?} needs token {token} but capacity is {capacity}; the input is not leafless of width <= {capacity}")]
    CapacityExceeded {
        at: BitString,
        token: TokenId,
        capacity: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum Event {
    NoOp,
    Moved {
        token: TokenId,
        from: BitString,
        to: BitString,
    },
    Placed {
        token: TokenId,
        at: BitString,
    },
}

/// Outcome of [`TokenBoard::decode_path`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decoded {
    Ready(BitString),
    Pending,
}

#[derive(Debug, Clone)]
pub struct TokenBoard {
    capacity: usize,
    /// Current vertex of each token; token `i` is at index `i - 1`.
    positions: Vec<BitString>,
    history: Vec<Vec<BitString>>,
    observed: HashSet<BitString>,
}

impl TokenBoard {
    pub fn new(capacity: usize) -> Self {
        Self {
            capacity,
            positions: Vec::new(),
            history: Vec::new(),
            observed: HashSet::new(),
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn tokens_used(&self) -> usize {
        self.positions.len()
    }

    /// The id the next placed token will get.
    pub fn next_token(&self) -> TokenId {
        self.positions.len() + 1
    }

    pub fn position(&self, token: TokenId) -> Option<&BitString> {
        token.checked_sub(1).and_then(|i| self.positions.get(i))
    }

    pub fn history(&self, token: TokenId) -> Option<&[BitString]> {
        token
            .checked_sub(1)
            .and_then(|i| self.history.get(i))
            .map(Vec::as_slice)
    }

    /// Distinguished vertex → token id.
    pub fn distinguished(&self) -> BTreeMap<BitString, TokenId> {
        self.positions
            .iter()
            .enumerate()
            .map(|(i, x)| (x.clone(), i + 1))
            .collect()
    }

    pub fn observed(&self) -> &HashSet<BitString> {
        &self.observed
    }

    pub fn observe(&mut self, x: BitString) -> Result<Event, TokenError> {
        if self.observed.contains(&x) {
            return Err(TokenError::Duplicate(x));
        }
        if self.positions.iter().any(|d| x.is_prefix_of(d)) {
            self.observed.insert(x);
            return Ok(Event::NoOp);
        }

        let mut below = self
            .positions
            .iter()
            .enumerate()
            .filter(|(_, d)| d.is_prefix_of(&x));
        let event = match (below.next(), below.next()) {
            (Some(_), Some(_)) => {
                panic!("token board corrupted: two distinguished prefixes of {x:?}")
            }
            (Some((i, from)), None) => {
                let from = from.clone();
                self.positions[i] = x.clone();
                self.history[i].push(x.clone());
                Event::Moved {
                    token: i + 1,
                    from,
                    to: x.clone(),
                }
            }
            (None, _) => {
                let token = self.next_token();
                if token > self.capacity {
                    return Err(TokenError::CapacityExceeded {
                        at: x,
                        token,
                        capacity: self.capacity,
                    });
                }
                self.positions.push(x.clone());
                self.history.push(vec![x.clone()]);
                Event::Placed {
                    token,
                    at: x.clone(),
                }
            }
        };
        self.observed.insert(x);
        Ok(event)
    }

    /// First `n` bits of token `token`'s vertex once it is at least that long.
    pub fn decode_path(&self, token: TokenId, n: usize) -> Decoded {
        match self.position(token) {
            Some(x) if x.len() >= n => Decoded::Ready(x.prefix(n)),
            _ => Decoded::Pending,
        }
    }

    /// Checks properties 1 and 2 against the current board, and property 3
    /// against every token's recorded history.
    pub fn check_invariants(&self) -> Result<(), String> {
        for (i, a) in self.positions.iter().enumerate() {
            for b in &self.positions[i + 1..] {
                if a.is_consistent_with(b) {
                    return Err(format!("distinguished {a:?} and {b:?} are consistent"));
                }
            }
        }
        for x in &self.observed {
            if !self.positions.iter().any(|d| x.is_prefix_of(d)) {
                return Err(format!(
                    "observed {x:?} is not below any distinguished vertex"
                ));
            }
        }
        for (i, h) in self.history.iter().enumerate() {
            if h.windows(2)
                .any(|w| !(w[0].is_prefix_of(&w[1]) && w[0].len() < w[1].len()))
            {
                return Err(format!("token {} moved to a non-extension: {h:?}", i + 1));
            }
        }
        if self.positions.len() > self.capacity {
            return Err(format!(
                "{} tokens used with capacity {}",
                self.positions.len(),
                self.capacity
            ));
        }
        Ok(())
    }
}

/// One line of the JSON event log.
#[derive(Debug, Clone, Serialize)]
pub struct EventRecord {
    pub step: usize,
    pub observed: BitString,
    pub event: &'static str,
    pub token: Option<TokenId>,
    pub from: Option<BitString>,
    pub to: Option<BitString>,
}

impl EventRecord {
    pub fn new(step: usize, observed: BitString, event: &Event) -> Self {
        let (kind, token, from, to) = match event {
            Event::NoOp => ("no_op", None, None, None),
            Event::Moved { token, from, to } => {
                ("moved", Some(*token), Some(from.clone()), Some(to.clone()))
            }
            Event::Placed { token, at } => ("placed", Some(*token), None, Some(at.clone())),
        };
        Self {
            step,
            observed,
            event: kind,
            token,
            from,
            to,
        }
    }
}

/// Feeds `order` to a fresh board and returns the board and the event log.
pub fn replay<I>(capacity: usize, order: I) -> Result<(TokenBoard, Vec<EventRecord>), TokenError>
where
    I: IntoIterator<Item = BitString>,
{
    let mut board = TokenBoard::new(capacity);
    let mut log = Vec::new();
    for (step, x) in order.into_iter().enumerate() {
        let event = board.observe(x.clone())?;
        log.push(EventRecord::new(step + 1, x, &event));
    }
    Ok((board, log))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bs;

    fn events(order: &[&str], capacity: usize) -> Vec<Event> {
        let mut board = TokenBoard::new(capacity);
        order
            .iter()
            .map(|x| {
                let e = board.observe(bs(x)).unwrap();
                board.check_invariants().unwrap();
                e
            })
            .collect()
    }

    fn placed(token: TokenId, at: &str) -> Event {
        Event::Placed { token, at: bs(at) }
    }

    fn moved(token: TokenId, from: &str, to: &str) -> Event {
        Event::Moved {
            token,
            from: bs(from),
            to: bs(to),
        }
    }

    #[test]
    fn single_chain() {
        assert_eq!(
            events(&["0", "00", "000"], 1),
            vec![placed(1, "0"), moved(1, "0", "00"), moved(1, "00", "000")]
        );
    }

    #[test]
    fn prefix_after_extension_is_noop() {
        assert_eq!(
            events(&["00", "0", "000"], 1),
            vec![placed(1, "00"), Event::NoOp, moved(1, "00", "000")]
        );
    }

    #[test]
    fn incomparable_strings_get_new_tokens() {
        assert_eq!(events(&["0", "1"], 2), vec![placed(1, "0"), placed(2, "1")]);
    }

    #[test]
    fn decode_examples() {
        let mut board = TokenBoard::new(1);
        for x in ["0", "00", "000"] {
            board.observe(bs(x)).unwrap();
        }
        assert_eq!(board.decode_path(1, 2), Decoded::Ready(bs("00")));
        assert_eq!(board.decode_path(1, 5), Decoded::Pending);
        assert_eq!(board.decode_path(2, 1), Decoded::Pending);
        assert_eq!(board.decode_path(0, 1), Decoded::Pending);
    }

    #[test]
    fn decode_after_shortlex_enumeration() {
        let order = ["", "0", "1", "00", "11", "000", "111"];
        let (board, _) = replay(2, order.iter().map(|x| bs(x))).unwrap();
        assert_eq!(board.decode_path(1, 3), Decoded::Ready(bs("000")));
        assert_eq!(board.decode_path(2, 3), Decoded::Ready(bs("111")));
    }

    #[test]
    fn duplicate_is_rejected() {
        let mut board = TokenBoard::new(2);
        board.observe(bs("01")).unwrap();
        assert_eq!(
            board.observe(bs("01")),
            Err(TokenError::Duplicate(bs("01")))
        );
    }

    #[test]
    fn capacity_overflow_is_reported() {
        let mut board = TokenBoard::new(1);
        board.observe(bs("0")).unwrap();
        let err = board.observe(bs("1")).unwrap_err();
        assert!(matches!(
            err,
            TokenError::CapacityExceeded {
                token: 2,
                capacity: 1,
                ..
            }
        ));
        assert_eq!(board.tokens_used(), 1);
    }

    #[test]
    fn event_record_shape() {
        let rec = EventRecord::new(3, bs("00"), &moved(1, "0", "00"));
        let json = serde_json::to_string(&rec).unwrap();
        assert_eq!(
            json,
            r#"{"step":3,"observed":"00","event":"moved","token":1,"from":"0","to":"00"}"#
        );
    }
}
