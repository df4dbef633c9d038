//! A's strategy for the no-pass palindrome games: alphabet `{0..n}`,
//! forbidden patterns all palindromes of length `2n+1` plus every `iii`.
//!
//! Play `(0,0)` first. When the opponent plays `(k, a)` with `k > 0`: mirror
//! to `(-k, a)` if `k-1` is already coloured, otherwise pair up at
//! `(k+1, a)` and complete `aaa` next turn at `k-1` or `k+2` (one of them is
//! still free, the opponent had a single move in between). The `k < 0` case
//! mirrors. Cooperative play fills a palindrome around the origin instead,
//! which is final too. Unreachable situations leave the strategy undefined;
//! the runner reports them as faults.

use crate::game::{Move, Position};
use crate::grid::{Cell, Color, Pattern};
use crate::sft::{Alphabet, Sft};
use crate::strategies::Strategy;

/// The palindrome game's rulebook: palindromes of length `2n+1` over
/// `{0..n}` plus the triples `iii`.
pub fn palindrome_sft(n: usize) -> Sft {
    let alphabet = Alphabet::numeric(n + 1);
    let len = 2 * n + 1;
    let mut words: std::collections::BTreeSet<Vec<Color>> = std::collections::BTreeSet::new();
    // choose the first n+1 letters, mirror the rest
    for c in 0..=n as u16 {
        words.insert(vec![Color(c); 3]);
    }
    let mut half = vec![0u16; n + 1];
    loop {
        let mut w: Vec<Color> = half.iter().map(|&c| Color(c)).collect();
        for i in (0..n).rev() {
            w.push(Color(half[i]));
        }
        debug_assert_eq!(w.len(), len);
        words.insert(w);
        let mut axis = n + 1;
        loop {
            if axis == 0 {
                let all: Vec<Vec<Color>> = words.into_iter().collect();
                return Sft::from_words(alphabet, &all).unwrap();
            }
            axis -= 1;
            if half[axis] < n as u16 {
                half[axis] += 1;
                break;
            }
            half[axis] = 0;
        }
    }
}

#[derive(Clone, Default)]
pub struct PalindromeStrategy {
    last_seen: Pattern,
    /// Completion cells and colour of a pending pair, in preference order.
    pending: Option<(i32, i32, Color)>,
}

impl PalindromeStrategy {
    pub fn new() -> Self {
        PalindromeStrategy::default()
    }

    fn commit(&mut self, pattern: &Pattern, mv: Move) -> Option<Move> {
        self.last_seen = pattern.clone();
        if let Move::Place { cell, color } = &mv {
            self.last_seen.insert(cell.clone(), *color);
        }
        Some(mv)
    }
}

impl Strategy for PalindromeStrategy {
    fn name(&self) -> String {
        "palindrome".into()
    }

    fn choose(&mut self, pos: &Position) -> Option<Move> {
        let p = &pos.pattern;
        if p.is_empty() {
            return self.commit(p, Move::place(Cell::x(0), Color(0)));
        }
        if let Some((first, second, color)) = self.pending.take() {
            for cell in [first, second] {
                if !p.contains(&Cell::x(cell)) {
                    return self.commit(p, Move::place(Cell::x(cell), color));
                }
            }
            return None; // both completions blocked: unreachable under one reply
        }
        let news: Vec<(Cell, Color)> = p
            .iter()
            .filter(|(c, _)| !self.last_seen.contains(c))
            .map(|(c, col)| (c.clone(), col))
            .collect();
        let [(cell, color)] = news.as_slice() else {
            return None; // not reachable under our own play
        };
        let k = cell.x0();
        let mirror = Cell::x(-k);
        if k > 0 {
            if p.contains(&Cell::x(k - 1)) {
                if p.contains(&mirror) {
                    return None;
                }
                return self.commit(p, Move::place(mirror, *color));
            }
            if p.contains(&Cell::x(k + 1)) {
                return None;
            }
            self.pending = Some((k - 1, k + 2, *color));
            return self.commit(p, Move::place(Cell::x(k + 1), *color));
        }
        if k < 0 {
            if p.contains(&Cell::x(k + 1)) {
                if p.contains(&mirror) {
                    return None;
                }
                return self.commit(p, Move::place(mirror, *color));
            }
            if p.contains(&Cell::x(k - 1)) {
                return None;
            }
            self.pending = Some((k + 1, k - 2, *color));
            return self.commit(p, Move::place(Cell::x(k - 1), *color));
        }
        None // the origin is ours; the opponent cannot have played it
    }

    fn clone_box(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }
}
