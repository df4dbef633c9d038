//! The bounded-horizon multi-board game and its trace transformation.
//!
//! "Does A win within T moves on the infinite grid" is decided through a
//! surrogate game played on a growing list of anchored boards. At the state
//! reached after `t` plies, a placement must land within L1 distance
//! `2^(T-t)` of the chosen board's support; any move farther than that from
//! everything opens a fresh board instead. Far-apart play decomposes into
//! independent boards, and since forbidden patterns are connected, one occurs
//! in the flat game iff it occurs on some board.
//!
//! Board lists are canonicalised (each board translated so its
//! lexicographically smallest cell is the origin, then sorted) before
//! memoization: positions differing only by board order or translation are
//! game-equivalent. Every ply, pass included, counts against the horizon.

use crate::game::{Move, Variant};
use crate::grid::{Cell, Color, Pattern};
use crate::sft::Rulebook;
use crate::words::TurnWord;
use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BoundedError {
    #[error("forbidden patterns must be connected for the bounded-horizon solver")]
    DisconnectedForbidden,
    #[error("horizon {0} is too large for exact multi-board search")]
    HorizonTooLarge(u32),
    #[error("illegal input trace at ply {ply}: {msg}")]
    IllegalTrace { ply: usize, msg: String },
    #[error("ply {ply}: move is within reach of {count} boards; the separation invariant is broken")]
    AmbiguousBoard { ply: usize, count: usize },
    #[error("A does not win within the horizon; no strategy to reconstruct")]
    NotWinning,
}

/// Effort counters for the memoized search.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OmegaStats {
    pub nodes: u64,
    pub memo_hits: u64,
}

/// A move of the multi-board game.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum OmegaMove {
    Pass,
    Place {
        board: usize,
        cell: Cell,
        color: Color,
    },
    Open {
        color: Color,
    },
}

/// A multi-board state: the boards, the number of plies already played and
/// the horizon. The turn cursor is implicit: ply `t` is letter `start + t` of
/// the turn word.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultiBoardPosition {
    pub boards: Vec<Pattern>,
    pub plies: u32,
    pub horizon: u32,
}

impl MultiBoardPosition {
    pub fn initial(horizon: u32) -> Self {
        MultiBoardPosition {
            boards: Vec::new(),
            plies: 0,
            horizon,
        }
    }

    /// Placement radius for the next move.
    pub fn radius(&self) -> u64 {
        1u64 << self.horizon.saturating_sub(self.plies).min(63)
    }
}

const MAX_HORIZON: u32 = 30;

/// Legal moves at the current state, in canonical order: pass (when the
/// variant allows), placements by board index, cell and colour, then board
/// openings by colour. Empty once the horizon is reached.
pub fn omega_legal_moves(
    pos: &MultiBoardPosition,
    alphabet_len: usize,
    variant: Variant,
) -> Vec<OmegaMove> {
    if pos.plies >= pos.horizon {
        return Vec::new();
    }
    let mut moves = Vec::new();
    if variant.pass_allowed() {
        moves.push(OmegaMove::Pass);
    }
    let radius = pos.radius();
    for (board, pattern) in pos.boards.iter().enumerate() {
        for cell in cells_near_support(pattern, radius) {
            for color in 0..alphabet_len as u16 {
                moves.push(OmegaMove::Place {
                    board,
                    cell: cell.clone(),
                    color: Color(color),
                });
            }
        }
    }
    for color in 0..alphabet_len as u16 {
        moves.push(OmegaMove::Open {
            color: Color(color),
        });
    }
    moves
}

/// Uncoloured cells within L1 distance `radius` of the support, sorted.
fn cells_near_support(pattern: &Pattern, radius: u64) -> Vec<Cell> {
    let mut out = BTreeSet::new();
    let r = radius.min(i32::MAX as u64) as i32;
    for cell in pattern.support() {
        collect_ball(cell, r, &mut out);
    }
    out.into_iter()
        .filter(|c| !pattern.contains(c))
        .collect()
}

fn collect_ball(center: &Cell, radius: i32, out: &mut BTreeSet<Cell>) {
    let dim = center.dim();
    let mut coords = vec![0i32; dim];
    fn rec(center: &[i32], axis: usize, left: i32, coords: &mut Vec<i32>, out: &mut BTreeSet<Cell>) {
        if axis == center.len() - 1 {
            for d in -left..=left {
                coords[axis] = center[axis] + d;
                out.insert(Cell::new(coords));
            }
            return;
        }
        for d in -left..=left {
            coords[axis] = center[axis] + d;
            rec(center, axis + 1, left - d.abs(), coords, out);
        }
    }
    rec(center.coords(), 0, radius, &mut coords, out);
}

struct Ctx<'a> {
    rules: &'a dyn Rulebook,
    word: &'a TurnWord,
    start: u64,
    horizon: u32,
    variant: Variant,
    memo: HashMap<(Vec<Pattern>, u32), bool>,
    stats: OmegaStats,
    budget: Option<u64>,
}

struct BudgetBlown;

fn canonical_boards(boards: &[Pattern]) -> Vec<Pattern> {
    let mut canon: Vec<Pattern> = boards.iter().map(Pattern::normalised).collect();
    canon.sort();
    canon
}

impl Ctx<'_> {
    fn charge(&mut self) -> Result<(), BudgetBlown> {
        self.stats.nodes += 1;
        if let Some(b) = &mut self.budget {
            if *b == 0 {
                return Err(BudgetBlown);
            }
            *b -= 1;
        }
        Ok(())
    }

    fn apply(
        &self,
        boards: &[Pattern],
        mv: &OmegaMove,
    ) -> (Vec<Pattern>, bool) {
        match mv {
            OmegaMove::Pass => (boards.to_vec(), false),
            OmegaMove::Place { board, cell, color } => {
                let mut next = boards.to_vec();
                next[*board] = next[*board]
                    .with_tile(cell.clone(), *color)
                    .expect("movegen only offers uncoloured cells");
                let hit = self.rules.final_after(&next[*board], cell);
                (next, hit)
            }
            OmegaMove::Open { color } => {
                let board =
                    Pattern::from_tiles([(Cell::origin(self.rules.dimension()), *color)]);
                let hit = self.rules.is_final(&board);
                let mut next = boards.to_vec();
                next.push(board);
                (next, hit)
            }
        }
    }

    /// Does A force a final board within the remaining plies?
    /// `reached_final` reports whether the last move completed a forbidden
    /// pattern, so finality is checked incrementally.
    fn eval(
        &mut self,
        boards: &[Pattern],
        plies: u32,
        reached_final: bool,
    ) -> Result<bool, BudgetBlown> {
        if reached_final {
            return Ok(true);
        }
        if plies >= self.horizon {
            return Ok(false);
        }
        self.charge()?;
        let key = (canonical_boards(boards), plies);
        if let Some(&hit) = self.memo.get(&key) {
            self.stats.memo_hits += 1;
            return Ok(hit);
        }
        let maximiser = self.word.letter(self.start + plies as u64) == crate::words::Player::A;
        let pos = MultiBoardPosition {
            boards: boards.to_vec(),
            plies,
            horizon: self.horizon,
        };
        let mut moves = omega_legal_moves(&pos, self.rules.alphabet().len(), self.variant);
        // Exploration order tuned per player: A usually wins by extending a
        // board, B usually survives by passing or opening far away. Results
        // are order-independent.
        if maximiser {
            moves.sort_by_key(|m| match m {
                OmegaMove::Place { .. } => 0,
                OmegaMove::Open { .. } => 1,
                OmegaMove::Pass => 2,
            });
        } else {
            moves.sort_by_key(|m| match m {
                OmegaMove::Pass => 0,
                OmegaMove::Open { .. } => 1,
                OmegaMove::Place { .. } => 2,
            });
        }
        let mut result = !maximiser;
        for mv in &moves {
            let (next, f) = self.apply(boards, mv);
            let r = self.eval(&next, plies + 1, f)?;
            if r == maximiser {
                result = maximiser;
                break;
            }
        }
        self.memo.insert(key, result);
        Ok(result)
    }

    /// First A-winning move in canonical order at an A-to-move state.
    fn winning_move(
        &mut self,
        boards: &[Pattern],
        plies: u32,
    ) -> Result<Option<OmegaMove>, BudgetBlown> {
        let pos = MultiBoardPosition {
            boards: boards.to_vec(),
            plies,
            horizon: self.horizon,
        };
        for mv in omega_legal_moves(&pos, self.rules.alphabet().len(), self.variant) {
            let (next, f) = self.apply(boards, &mv);
            if self.eval(&next, plies + 1, f)? {
                return Ok(Some(mv));
            }
        }
        Ok(None)
    }
}

/// Result of a bounded solve. `a_wins == None` means the node budget ran out.
#[derive(Clone, Debug)]
pub struct OmegaReport {
    pub a_wins: Option<bool>,
    pub stats: OmegaStats,
    /// A deterministic winning line with the boards at its final position,
    /// present when A wins.
    pub principal: Option<(Vec<OmegaMove>, Vec<Pattern>)>,
}

fn check_preconditions(rules: &dyn Rulebook, horizon: u32) -> Result<(), BoundedError> {
    if !rules.forbidden_all_connected() {
        return Err(BoundedError::DisconnectedForbidden);
    }
    if horizon > MAX_HORIZON {
        return Err(BoundedError::HorizonTooLarge(horizon));
    }
    Ok(())
}

/// Decides whether A wins the bounded multi-board game over `horizon` plies,
/// which is equivalent to winning the flat game in `horizon` moves or less.
/// Stated for alternation; arbitrary turn words are threaded through as an
/// extension.
pub fn solve_omega(
    rules: &dyn Rulebook,
    word: &TurnWord,
    variant: Variant,
    horizon: u32,
) -> Result<bool, BoundedError> {
    let report = solve_omega_with(rules, word, variant, horizon, 0, None)?;
    Ok(report.a_wins.expect("no budget, no exhaustion"))
}

pub fn solve_omega_with(
    rules: &dyn Rulebook,
    word: &TurnWord,
    variant: Variant,
    horizon: u32,
    start_index: u64,
    budget: Option<u64>,
) -> Result<OmegaReport, BoundedError> {
    check_preconditions(rules, horizon)?;
    let mut ctx = Ctx {
        rules,
        word,
        start: start_index,
        horizon,
        variant,
        memo: HashMap::new(),
        stats: OmegaStats::default(),
        budget,
    };
    let a_wins = ctx.eval(&[], 0, false).ok();
    let principal = if a_wins == Some(true) {
        principal_line(&mut ctx).ok()
    } else {
        None
    };
    Ok(OmegaReport {
        a_wins,
        stats: ctx.stats,
        principal,
    })
}

/// Walks one deterministic line to a final position: A plays the first
/// winning move in canonical order, B the first legal move.
fn principal_line(ctx: &mut Ctx<'_>) -> Result<(Vec<OmegaMove>, Vec<Pattern>), BudgetBlown> {
    let mut boards: Vec<Pattern> = Vec::new();
    let mut line = Vec::new();
    let mut plies = 0u32;
    loop {
        let maximiser =
            ctx.word.letter(ctx.start + plies as u64) == crate::words::Player::A;
        let mv = if maximiser {
            match ctx.winning_move(&boards, plies)? {
                Some(mv) => mv,
                None => return Ok((line, boards)), // should not happen in a won game
            }
        } else {
            let pos = MultiBoardPosition {
                boards: boards.clone(),
                plies,
                horizon: ctx.horizon,
            };
            match omega_legal_moves(&pos, ctx.rules.alphabet().len(), ctx.variant)
                .into_iter()
                .next()
            {
                Some(mv) => mv,
                None => return Ok((line, boards)),
            }
        };
        let (next, f) = ctx.apply(&boards, &mv);
        line.push(mv);
        boards = next;
        plies += 1;
        if f || plies >= ctx.horizon {
            return Ok((line, boards));
        }
    }
}

/// One turn of an anchored trace: the move in board coordinates and the
/// boards after it.
#[derive(Clone, Debug)]
pub struct AnchoredTurn {
    pub mv: OmegaMove,
    pub boards: Vec<Pattern>,
}

/// Image of a flat game under the trace transformation: per-turn board
/// snapshots plus the anchor assigned to each board when it was opened.
#[derive(Clone, Debug)]
pub struct AnchoredTrace {
    pub horizon: u32,
    pub anchors: Vec<Cell>,
    pub turns: Vec<AnchoredTurn>,
}

/// Maps a flat move sequence (played from the empty pattern) to the
/// multi-board game: passes stay passes, far placements open boards anchored
/// at the played cell, near placements land on the unique board in reach.
pub fn theta(moves: &[Move], horizon: u32) -> Result<AnchoredTrace, BoundedError> {
    if moves.len() as u32 > horizon {
        return Err(BoundedError::IllegalTrace {
            ply: moves.len(),
            msg: format!("trace longer than horizon {horizon}"),
        });
    }
    let mut flat = Pattern::empty();
    let mut boards: Vec<Pattern> = Vec::new();
    let mut anchors: Vec<Cell> = Vec::new();
    let mut turns = Vec::new();
    for (ply, mv) in moves.iter().enumerate() {
        let omega = match mv {
            Move::Pass => OmegaMove::Pass,
            Move::Place { cell, color } => {
                if flat.contains(cell) {
                    return Err(BoundedError::IllegalTrace {
                        ply,
                        msg: format!("cell {cell} already coloured"),
                    });
                }
                let radius = 1u64 << (horizon - ply as u32);
                let near: Vec<usize> = boards
                    .iter()
                    .enumerate()
                    .filter(|(k, b)| {
                        b.l1_to_support(&cell.minus(&anchors[*k]))
                            .is_some_and(|d| d <= radius)
                    })
                    .map(|(k, _)| k)
                    .collect();
                match near.len() {
                    0 => {
                        anchors.push(cell.clone());
                        boards.push(Pattern::from_tiles([(
                            Cell::origin(cell.dim()),
                            *color,
                        )]));
                        OmegaMove::Open { color: *color }
                    }
                    1 => {
                        let k = near[0];
                        let local = cell.minus(&anchors[k]);
                        boards[k] = boards[k]
                            .with_tile(local.clone(), *color)
                            .expect("flat legality implies board legality");
                        OmegaMove::Place {
                            board: k,
                            cell: local,
                            color: *color,
                        }
                    }
                    n => return Err(BoundedError::AmbiguousBoard { ply, count: n }),
                }
            }
        };
        if let Move::Place { cell, color } = mv {
            flat.insert(cell.clone(), *color);
        }
        turns.push(AnchoredTurn {
            mv: omega,
            boards: boards.clone(),
        });
    }
    Ok(AnchoredTrace {
        horizon,
        anchors,
        turns,
    })
}

/// Which invariant of the trace transformation failed, and when.
#[derive(Debug, PartialEq, Eq)]
pub struct InvariantViolation {
    pub invariant: u8,
    pub turn: usize,
}

impl AnchoredTrace {
    /// Checks, at every turn: (1) the flat support is the union of the
    /// anchored board supports, (2) colours agree, (3) distinct anchored
    /// boards are strictly more than `2^(horizon - t)` apart.
    pub fn check_invariants(&self, moves: &[Move]) -> Result<(), InvariantViolation> {
        let mut flat = Pattern::empty();
        for (t, (mv, turn)) in moves.iter().zip(&self.turns).enumerate() {
            if let Move::Place { cell, color } = mv {
                flat.insert(cell.clone(), *color);
            }
            let mut anchored = Pattern::empty();
            for (k, board) in turn.boards.iter().enumerate() {
                for (cell, color) in board.iter() {
                    let global = cell.translated(&self.anchors[k]);
                    match anchored.with_tile(global.clone(), color) {
                        Some(next) => anchored = next,
                        None => return Err(InvariantViolation { invariant: 1, turn: t }),
                    }
                }
            }
            if anchored.support().ne(flat.support()) {
                return Err(InvariantViolation { invariant: 1, turn: t });
            }
            if anchored != flat {
                return Err(InvariantViolation { invariant: 2, turn: t });
            }
            let sep_bound = 1u64 << (self.horizon - (t as u32 + 1));
            for k in 0..turn.boards.len() {
                for k2 in k + 1..turn.boards.len() {
                    let sep = board_separation(
                        &turn.boards[k],
                        &self.anchors[k],
                        &turn.boards[k2],
                        &self.anchors[k2],
                    );
                    if sep <= sep_bound {
                        return Err(InvariantViolation { invariant: 3, turn: t });
                    }
                }
            }
        }
        Ok(())
    }
}

fn board_separation(a: &Pattern, za: &Cell, b: &Pattern, zb: &Cell) -> u64 {
    let mut best = u64::MAX;
    for ca in a.support() {
        let ga = ca.translated(za);
        for cb in b.support() {
            best = best.min(ga.l1(&cb.translated(zb)));
        }
    }
    best
}

/// Replays a winning multi-board strategy on the flat grid. Opponent moves
/// are folded in through the same near/far rule as [`theta`]; when the
/// underlying strategy opens a board, a fresh anchor is chosen on the first
/// coordinate axis, spaced `2^(horizon+2)` per opened board beyond every
/// existing tile.
pub struct OmegaPilot {
    rules: Arc<dyn Rulebook>,
    word: TurnWord,
    variant: Variant,
    horizon: u32,
    start: u64,
    memo: HashMap<(Vec<Pattern>, u32), bool>,
    stats: OmegaStats,
    boards: Vec<Pattern>,
    anchors: Vec<Cell>,
    plies: u32,
    max_norm: u64,
}

impl Clone for OmegaPilot {
    fn clone(&self) -> Self {
        OmegaPilot {
            rules: Arc::clone(&self.rules),
            word: self.word.clone(),
            variant: self.variant,
            horizon: self.horizon,
            start: self.start,
            memo: self.memo.clone(),
            stats: self.stats,
            boards: self.boards.clone(),
            anchors: self.anchors.clone(),
            plies: self.plies,
            max_norm: self.max_norm,
        }
    }
}

impl OmegaPilot {
    /// Solves the bounded game first; errs when A does not win within the
    /// horizon.
    pub fn new(
        rules: Arc<dyn Rulebook>,
        word: TurnWord,
        variant: Variant,
        horizon: u32,
    ) -> Result<Self, BoundedError> {
        check_preconditions(&*rules, horizon)?;
        let mut pilot = OmegaPilot {
            rules,
            word,
            variant,
            horizon,
            start: 0,
            memo: HashMap::new(),
            stats: OmegaStats::default(),
            boards: Vec::new(),
            anchors: Vec::new(),
            plies: 0,
            max_norm: 0,
        };
        if !pilot.eval_current() {
            return Err(BoundedError::NotWinning);
        }
        Ok(pilot)
    }

    fn with_ctx<R>(&mut self, f: impl FnOnce(&mut Ctx<'_>) -> R) -> R {
        let mut memo = std::mem::take(&mut self.memo);
        let mut stats = self.stats;
        let r = {
            let mut ctx = Ctx {
                rules: &*self.rules,
                word: &self.word,
                start: self.start,
                horizon: self.horizon,
                variant: self.variant,
                memo: std::mem::take(&mut memo),
                stats,
                budget: None,
            };
            let r = f(&mut ctx);
            memo = std::mem::take(&mut ctx.memo);
            stats = ctx.stats;
            r
        };
        self.memo = memo;
        self.stats = stats;
        r
    }

    fn eval_current(&mut self) -> bool {
        let boards = self.boards.clone();
        let plies = self.plies;
        self.with_ctx(|ctx| ctx.eval(&boards, plies, false).unwrap_or(false))
    }

    /// Folds one opponent tile into the board state.
    pub fn absorb(&mut self, cell: &Cell, color: Color) {
        if self.plies >= self.horizon {
            self.plies += 1;
            return;
        }
        let radius = 1u64 << (self.horizon - self.plies);
        let near: Vec<usize> = self
            .boards
            .iter()
            .enumerate()
            .filter(|(k, b)| {
                b.l1_to_support(&cell.minus(&self.anchors[*k]))
                    .is_some_and(|d| d <= radius)
            })
            .map(|(k, _)| k)
            .collect();
        match near.first() {
            Some(&k) => {
                let local = cell.minus(&self.anchors[k]);
                if let Some(next) = self.boards[k].with_tile(local, color) {
                    self.boards[k] = next;
                }
            }
            None => {
                self.anchors.push(cell.clone());
                self.boards
                    .push(Pattern::from_tiles([(Cell::origin(cell.dim()), color)]));
            }
        }
        self.max_norm = self.max_norm.max(cell.l1_norm());
        self.plies += 1;
    }

    /// Observes that the opponent passed.
    pub fn absorb_pass(&mut self) {
        self.plies += 1;
    }

    /// Chooses the flat move realising the winning multi-board move.
    pub fn next_move(&mut self) -> Option<Move> {
        if self.plies >= self.horizon {
            return Some(Move::Pass);
        }
        let boards = self.boards.clone();
        let plies = self.plies;
        let omega = self.with_ctx(|ctx| ctx.winning_move(&boards, plies).unwrap_or(None))?;
        let flat = match &omega {
            OmegaMove::Pass => Move::Pass,
            OmegaMove::Place { board, cell, color } => Move::Place {
                cell: cell.translated(&self.anchors[*board]),
                color: *color,
            },
            OmegaMove::Open { color } => {
                let spacing = 1u64 << (self.horizon + 2);
                let x = self.max_norm + spacing * (self.anchors.len() as u64 + 1);
                let mut coords = vec![0i32; self.rules.dimension()];
                coords[0] = x as i32;
                Move::Place {
                    cell: Cell::new(&coords),
                    color: *color,
                }
            }
        };
        // Advance own state through the same absorption rule.
        match &flat {
            Move::Pass => self.absorb_pass(),
            Move::Place { cell, color } => self.absorb(cell, *color),
        }
        Some(flat)
    }

    pub fn anchors(&self) -> &[Cell] {
        &self.anchors
    }

    pub fn plies(&self) -> u64 {
        self.plies as u64
    }

    pub fn stats(&self) -> OmegaStats {
        self.stats
    }
}


#[cfg(test)]
mod trace_error_tests {
    use super::*;
    use crate::game::Move;
    use crate::grid::{Cell, Color};

    #[test]
    fn traces_longer_than_the_horizon_are_rejected() {
        let moves = vec![Move::Pass, Move::Pass, Move::Pass];
        assert!(matches!(
            theta(&moves, 2),
            Err(BoundedError::IllegalTrace { ply: 3, .. })
        ));
    }

    #[test]
    fn recolouring_a_cell_is_an_illegal_trace() {
        let moves = vec![
            Move::place(Cell::x(0), Color(0)),
            Move::place(Cell::x(0), Color(1)),
        ];
        assert!(matches!(
            theta(&moves, 3),
            Err(BoundedError::IllegalTrace { ply: 1, .. })
        ));
    }

    #[test]
    fn no_pass_move_lists_exclude_passing() {
        let pos = MultiBoardPosition::initial(2);
        let moves = omega_legal_moves(&pos, 2, Variant::NoPass);
        assert_eq!(
            moves,
            vec![
                OmegaMove::Open { color: Color(0) },
                OmegaMove::Open { color: Color(1) },
            ]
        );
    }
}
