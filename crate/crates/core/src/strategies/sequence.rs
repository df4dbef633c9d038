//! B's invariant keeper for the game over `{0..4}` forbidding the single
//! word `1234`, under the escalating turn order `A(AB)^1 A(AB)^2 ...`.
//!
//! The invariant: among the length-4 windows still completable to `1234`, at
//! most `n-1` carry one tile and none carries two at the end of the n-th
//! block. The paper states the invariant, not a closed-form move rule, so
//! this strategy searches: kill any window holding two matching tiles first
//! (the first move in cell/colour order that brings every completable
//! window back to at most one tile), otherwise smother the lowest window
//! holding one tile with a `0`, otherwise pass. Colour `0` matches no
//! position of `1234`, so it always kills the windows through the cell it
//! occupies.

use crate::game::{Move, Position};
use crate::grid::{Cell, Color, Pattern};
use crate::strategies::Strategy;

#[derive(Clone, Default)]
pub struct InvariantKeeper1234;

/// Number of cells of the window at `start` coloured with exactly the digit
/// `1234` expects there; `None` when the window is no longer completable.
fn window_tiles(p: &Pattern, start: i32) -> Option<usize> {
    let mut tiles = 0;
    for offset in 0..4 {
        match p.get(&Cell::x(start + offset)) {
            None => {}
            Some(c) if c.0 == offset as u16 + 1 => tiles += 1,
            Some(_) => return None,
        }
    }
    Some(tiles)
}

/// All completable windows holding at least one tile, with their tile
/// counts, sorted by start cell.
pub fn loaded_windows(p: &Pattern) -> Vec<(i32, usize)> {
    if p.is_empty() {
        return Vec::new();
    }
    let (lo, hi) = p.extent_1d();
    (lo - 3..=hi)
        .filter_map(|s| window_tiles(p, s).map(|t| (s, t)))
        .filter(|(_, t)| *t > 0)
        .collect()
}

impl InvariantKeeper1234 {
    pub fn new() -> Self {
        InvariantKeeper1234
    }
}

impl Strategy for InvariantKeeper1234 {
    fn name(&self) -> String {
        "invariant-1234".into()
    }

    fn choose(&mut self, pos: &Position) -> Option<Move> {
        let p = &pos.pattern;
        let loaded = loaded_windows(p);
        let worst = loaded.iter().map(|(_, t)| *t).max().unwrap_or(0);
        if worst >= 2 {
            // search B's moves for one bringing every window back to <= 1
            let (lo, hi) = p.extent_1d();
            for x in lo - 3..=hi + 3 {
                let cell = Cell::x(x);
                if p.contains(&cell) {
                    continue;
                }
                for color in 0..5u16 {
                    let next = p.with_tile(cell.clone(), Color(color)).unwrap();
                    let still_bad = loaded_windows(&next).iter().any(|(_, t)| *t >= 2);
                    if !still_bad {
                        return Some(Move::place(cell, Color(color)));
                    }
                }
            }
            return None; // no single move restores the invariant
        }
        if let Some((start, _)) = loaded.first() {
            // smother the lowest loaded window with a 0
            for offset in 0..4 {
                let cell = Cell::x(start + offset);
                if !p.contains(&cell) {
                    return Some(Move::place(cell, Color(0)));
                }
            }
        }
        Some(Move::Pass)
    }

    fn clone_box(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }
}
