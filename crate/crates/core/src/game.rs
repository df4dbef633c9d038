//! Game dynamics: moves, positions, the pass rule and move application.
//!
//! A position is a pattern together with a cursor into the turn-order word
//! and a playable-region descriptor. The grid is infinite; finiteness is
//! imposed per algorithm through an explicit candidate cell set handed to
//! [`legal_moves`], with each solver responsible for the soundness of its own
//! candidate set.

use crate::grid::{Cell, Color, Pattern};
use crate::words::TurnCursor;
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

/// Pass-allowed is the standard game; the no-pass variant forces a placement
/// every turn.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Variant {
    PassAllowed,
    NoPass,
}

impl Variant {
    pub fn pass_allowed(self) -> bool {
        matches!(self, Variant::PassAllowed)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variant::PassAllowed => write!(f, "pass"),
            Variant::NoPass => write!(f, "no-pass"),
        }
    }
}

/// Playable region: the whole grid, or the centred box `[-n, n]^d`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Region {
    All,
    Box { radius: u32 },
}

impl Region {
    pub fn contains(&self, cell: &Cell) -> bool {
        match self {
            Region::All => true,
            Region::Box { radius } => cell
                .coords()
                .iter()
                .all(|c| c.unsigned_abs() <= *radius),
        }
    }

    /// All cells of a box region in lexicographic order. Panics on `All`.
    pub fn cells(&self, dim: usize) -> Vec<Cell> {
        let Region::Box { radius } = self else {
            panic!("infinite region has no cell enumeration")
        };
        let r = *radius as i32;
        let mut out = Vec::new();
        let mut coords = vec![-r; dim];
        loop {
            out.push(Cell::new(&coords));
            let mut axis = dim;
            loop {
                if axis == 0 {
                    return out;
                }
                axis -= 1;
                if coords[axis] < r {
                    coords[axis] += 1;
                    for c in coords.iter_mut().skip(axis + 1) {
                        *c = -r;
                    }
                    break;
                }
            }
        }
    }
}

/// A move: pass, or colour one uncoloured cell.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Move {
    Pass,
    Place { cell: Cell, color: Color },
}

impl Move {
    pub fn place(cell: Cell, color: Color) -> Self {
        Move::Place { cell, color }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::Pass => write!(f, "pass"),
            Move::Place { cell, color } => write!(f, "{cell}={}", color.0),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MoveError {
    #[error("cell {0} is already coloured")]
    Occupied(Cell),
    #[error("cell {0} lies outside the playable region")]
    OutOfRegion(Cell),
    #[error("passing is not allowed in this variant")]
    PassForbidden,
}

/// Pattern, whose turn it is, and where play is allowed.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Position {
    pub pattern: Pattern,
    pub turn: TurnCursor,
    pub region: Region,
}

impl Position {
    pub fn initial(turn: TurnCursor, region: Region) -> Self {
        Position {
            pattern: Pattern::empty(),
            turn,
            region,
        }
    }
}

/// Applies a move: the pattern picks up the placed tile (or stays unchanged
/// on a pass) and the turn cursor advances by one letter.
pub fn apply_move(pos: &Position, mv: &Move, variant: Variant) -> Result<Position, MoveError> {
    let pattern = match mv {
        Move::Pass => {
            if !variant.pass_allowed() {
                return Err(MoveError::PassForbidden);
            }
            pos.pattern.clone()
        }
        Move::Place { cell, color } => {
            if !pos.region.contains(cell) {
                return Err(MoveError::OutOfRegion(cell.clone()));
            }
            pos.pattern
                .with_tile(cell.clone(), *color)
                .ok_or_else(|| MoveError::Occupied(cell.clone()))?
        }
    };
    Ok(Position {
        pattern,
        turn: pos.turn.advanced(),
        region: pos.region,
    })
}

/// All legal moves restricted to a finite candidate cell set, in canonical
/// order: pass first when the variant allows it, then placements by cell
/// (lexicographic) and colour id.
pub fn legal_moves(
    pos: &Position,
    candidates: &BTreeSet<Cell>,
    variant: Variant,
    alphabet_len: usize,
) -> Vec<Move> {
    let mut moves = Vec::new();
    if variant.pass_allowed() {
        moves.push(Move::Pass);
    }
    for cell in candidates {
        if !pos.region.contains(cell) || pos.pattern.contains(cell) {
            continue;
        }
        for color in 0..alphabet_len as u16 {
            moves.push(Move::place(cell.clone(), Color(color)));
        }
    }
    moves
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{Player, TurnWord};

    fn start() -> Position {
        Position::initial(TurnCursor::start(TurnWord::alternating()), Region::All)
    }

    #[test]
    fn placing_extends_and_advances() {
        let pos = start();
        let next = apply_move(
            &pos,
            &Move::place(Cell::x(0), Color(0)),
            Variant::PassAllowed,
        )
        .unwrap();
        assert_eq!(next.pattern.get(&Cell::x(0)), Some(Color(0)));
        assert_eq!(next.turn.player(), Player::B);
    }

    #[test]
    fn pass_keeps_the_pattern() {
        let pos = apply_move(
            &start(),
            &Move::place(Cell::x(0), Color(0)),
            Variant::PassAllowed,
        )
        .unwrap();
        let next = apply_move(&pos, &Move::Pass, Variant::PassAllowed).unwrap();
        assert_eq!(next.pattern, pos.pattern);
        assert_eq!(next.turn.player(), Player::A);
    }

    #[test]
    fn illegal_moves_are_rejected() {
        let pos = apply_move(
            &start(),
            &Move::place(Cell::x(0), Color(0)),
            Variant::PassAllowed,
        )
        .unwrap();
        assert_eq!(
            apply_move(
                &pos,
                &Move::place(Cell::x(0), Color(1)),
                Variant::PassAllowed
            ),
            Err(MoveError::Occupied(Cell::x(0)))
        );
        assert_eq!(
            apply_move(&pos, &Move::Pass, Variant::NoPass),
            Err(MoveError::PassForbidden)
        );
        let boxed = Position {
            region: Region::Box { radius: 1 },
            ..pos
        };
        assert_eq!(
            apply_move(
                &boxed,
                &Move::place(Cell::x(2), Color(0)),
                Variant::PassAllowed
            ),
            Err(MoveError::OutOfRegion(Cell::x(2)))
        );
    }

    #[test]
    fn legal_move_enumeration_order() {
        let candidates: BTreeSet<Cell> = [Cell::x(0), Cell::x(1)].into();
        let moves = legal_moves(&start(), &candidates, Variant::PassAllowed, 2);
        assert_eq!(
            moves,
            vec![
                Move::Pass,
                Move::place(Cell::x(0), Color(0)),
                Move::place(Cell::x(0), Color(1)),
                Move::place(Cell::x(1), Color(0)),
                Move::place(Cell::x(1), Color(1)),
            ]
        );

        let one_taken = apply_move(
            &start(),
            &Move::place(Cell::x(0), Color(0)),
            Variant::PassAllowed,
        )
        .unwrap();
        let moves = legal_moves(&one_taken, &candidates, Variant::NoPass, 2);
        assert_eq!(
            moves,
            vec![
                Move::place(Cell::x(1), Color(0)),
                Move::place(Cell::x(1), Color(1)),
            ]
        );

        let stuck = legal_moves(&start(), &BTreeSet::new(), Variant::NoPass, 2);
        assert!(stuck.is_empty());
    }

    #[test]
    fn box_region_cells_are_lexicographic() {
        let cells = Region::Box { radius: 1 }.cells(2);
        assert_eq!(cells.len(), 9);
        assert_eq!(cells[0], Cell::xy(-1, -1));
        assert_eq!(cells[8], Cell::xy(1, 1));
        let mut sorted = cells.clone();
        sorted.sort();
        assert_eq!(cells, sorted);
    }

    #[test]
    fn support_grows_by_exactly_one_on_place() {
        let mut pos = start();
        for i in 0..5 {
            let before = pos.pattern.len();
            let mv = if i % 2 == 0 {
                Move::place(Cell::x(i), Color(0))
            } else {
                Move::Pass
            };
            pos = apply_move(&pos, &mv, Variant::PassAllowed).unwrap();
            let expected = if i % 2 == 0 { before + 1 } else { before };
            assert_eq!(pos.pattern.len(), expected);
        }
    }
}
