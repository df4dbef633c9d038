//! B's four-rule strategy for the 9-window marking game over `{b, a}`
//! (colour ids 0 and 1). B only ever plays `b`, with rule priority:
//!
//! 1. next to an `a`;
//! 2. to the left of a `baba`;
//! 3. to the right of a `b(ba)^n b` for `n` in {3, 4};
//! 4. otherwise pass.
//!
//! Within a rule, the lowest cell is taken first. Under turn orders with
//! A-frequency at most one third and no `ABA` factor, the strategy keeps
//! every `a` inside `bab` and every `aba` inside `bbaba` or `b(ba)^n bb`
//! before each A move, which in particular keeps every 9-window below five
//! a's.

use crate::game::{Move, Position};
use crate::grid::{Cell, Color, Pattern};
use crate::strategies::Strategy;

const B: Color = Color(0);
const A: Color = Color(1);

#[derive(Clone, Default)]
pub struct FourRuleStrategy;

impl FourRuleStrategy {
    pub fn new() -> Self {
        FourRuleStrategy
    }

    fn rule_next_to_a(p: &Pattern) -> Option<i32> {
        p.iter()
            .filter(|(_, c)| *c == A)
            .flat_map(|(cell, _)| [cell.x0() - 1, cell.x0() + 1])
            .filter(|&x| !p.contains(&Cell::x(x)))
            .min()
    }

    fn rule_left_of_baba(p: &Pattern) -> Option<i32> {
        p.occurrences_1d(&[B, A, B, A])
            .into_iter()
            .map(|j| j - 1)
            .filter(|&x| !p.contains(&Cell::x(x)))
            .min()
    }

    fn rule_right_of_bbab(p: &Pattern) -> Option<i32> {
        let mut best: Option<i32> = None;
        for n in [3usize, 4] {
            let mut w = vec![B];
            for _ in 0..n {
                w.push(B);
                w.push(A);
            }
            w.push(B);
            for j in p.occurrences_1d(&w) {
                let x = j + w.len() as i32;
                if !p.contains(&Cell::x(x)) {
                    best = Some(best.map_or(x, |b: i32| b.min(x)));
                }
            }
        }
        best
    }
}

impl Strategy for FourRuleStrategy {
    fn name(&self) -> String {
        "four-rule".into()
    }

    fn choose(&mut self, pos: &Position) -> Option<Move> {
        let p = &pos.pattern;
        let target = Self::rule_next_to_a(p)
            .or_else(|| Self::rule_left_of_baba(p))
            .or_else(|| Self::rule_right_of_bbab(p));
        Some(match target {
            Some(x) => Move::place(Cell::x(x), B),
            None => Move::Pass,
        })
    }

    fn clone_box(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }
}
