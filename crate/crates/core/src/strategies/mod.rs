//! Executable strategies, the game runner and invariant monitors.
//!
//! A strategy is a deterministic decision procedure from positions to moves
//! with private memory; `choose` returning `None` means the strategy is
//! undefined at that position, which the runner records as a fault of the
//! owning player. Strategies are not shareable mid-game, but clone cheaply so
//! verification trees can branch.

mod arrow;
mod isolation;
mod marking;
mod palindrome;
mod sequence;

pub use arrow::{BlackStrategy, ParityStrategy};
pub use isolation::IsolationStrategy;
pub use marking::FourRuleStrategy;
pub use palindrome::{palindrome_sft, PalindromeStrategy};
pub use sequence::InvariantKeeper1234;

use crate::game::{apply_move, legal_moves, Move, Position, Region, Variant};
use crate::grid::{Cell, Color, Pattern};
use crate::sft::Rulebook;
use crate::solver::bounded::{BoundedError, OmegaPilot};
use crate::solver::finite::StrategyTable;
use crate::words::{Player, TurnCursor, TurnWord};
use std::collections::BTreeSet;
use std::sync::Arc;

pub trait Strategy: Send + Sync {
    fn name(&self) -> String;

    /// The move to play in `pos`; `None` when the strategy is undefined
    /// there.
    fn choose(&mut self, pos: &Position) -> Option<Move>;

    fn clone_box(&self) -> Box<dyn Strategy>;
}

impl Clone for Box<dyn Strategy> {
    fn clone(&self) -> Self {
        self.clone_box()
    }
}

/// Always passes.
#[derive(Clone, Default)]
pub struct PassStrategy;

impl Strategy for PassStrategy {
    fn name(&self) -> String {
        "pass".into()
    }

    fn choose(&mut self, _pos: &Position) -> Option<Move> {
        Some(Move::Pass)
    }

    fn clone_box(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }
}

/// Plays a fixed move list, then passes.
#[derive(Clone)]
pub struct ScriptStrategy {
    moves: Vec<Move>,
    next: usize,
}

impl ScriptStrategy {
    pub fn new(moves: Vec<Move>) -> Self {
        ScriptStrategy { moves, next: 0 }
    }
}

impl Strategy for ScriptStrategy {
    fn name(&self) -> String {
        "script".into()
    }

    fn choose(&mut self, _pos: &Position) -> Option<Move> {
        let mv = self.moves.get(self.next).cloned().unwrap_or(Move::Pass);
        self.next += 1;
        Some(mv)
    }

    fn clone_box(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }
}

/// Plays from a solved strategy table; off-table positions fall back to a
/// pass (or the first free region cell in the no-pass variant).
pub struct TableStrategy {
    table: Arc<StrategyTable>,
    variant: Variant,
    region_cells: Vec<Cell>,
}

impl Clone for TableStrategy {
    fn clone(&self) -> Self {
        TableStrategy {
            table: Arc::clone(&self.table),
            variant: self.variant,
            region_cells: self.region_cells.clone(),
        }
    }
}

impl TableStrategy {
    pub fn new(table: Arc<StrategyTable>, variant: Variant, region_cells: Vec<Cell>) -> Self {
        TableStrategy {
            table,
            variant,
            region_cells,
        }
    }
}

impl Strategy for TableStrategy {
    fn name(&self) -> String {
        format!("table:{}", self.table.player)
    }

    fn choose(&mut self, pos: &Position) -> Option<Move> {
        let residue = pos.turn.residue()?;
        if let Some(mv) = self.table.lookup(&pos.pattern, residue) {
            return Some(mv.clone());
        }
        if self.variant.pass_allowed() {
            return Some(Move::Pass);
        }
        self.region_cells
            .iter()
            .find(|c| !pos.pattern.contains(c))
            .map(|c| Move::place(c.clone(), Color(0)))
    }

    fn clone_box(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }
}

/// Replays a winning bounded-horizon strategy on the flat grid.
pub struct OmegaStrategy {
    pilot: OmegaPilot,
    last_seen: Pattern,
}

impl OmegaStrategy {
    pub fn new(
        rules: Arc<dyn Rulebook>,
        word: TurnWord,
        variant: Variant,
        horizon: u32,
    ) -> Result<Self, BoundedError> {
        Ok(OmegaStrategy {
            pilot: OmegaPilot::new(rules, word, variant, horizon)?,
            last_seen: Pattern::empty(),
        })
    }

    pub fn anchors(&self) -> &[Cell] {
        self.pilot.anchors()
    }
}

impl Clone for OmegaStrategy {
    fn clone(&self) -> Self {
        OmegaStrategy {
            pilot: self.pilot.clone(),
            last_seen: self.last_seen.clone(),
        }
    }
}

impl Strategy for OmegaStrategy {
    fn name(&self) -> String {
        "bounded-horizon".into()
    }

    fn choose(&mut self, pos: &Position) -> Option<Move> {
        // Fold in everything the opponent did since our last move: new tiles
        // in board order, then passes to make the ply counts agree.
        let news: Vec<(Cell, Color)> = pos
            .pattern
            .iter()
            .filter(|(c, _)| !self.last_seen.contains(c))
            .map(|(c, col)| (c.clone(), col))
            .collect();
        for (cell, color) in &news {
            self.pilot.absorb(cell, *color);
        }
        while self.pilot.plies() < pos.turn.index() {
            self.pilot.absorb_pass();
        }
        let mv = self.pilot.next_move()?;
        self.last_seen = pos.pattern.clone();
        if let Move::Place { cell, color } = &mv {
            self.last_seen.insert(cell.clone(), *color);
        }
        Some(mv)
    }

    fn clone_box(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }
}

/// Named invariant over `(pattern, player to move)`, evaluated between plies.
/// Predicates encode their own scheduling: a "before A moves" invariant
/// simply returns true whenever B is to move.
type MonitorFn = dyn Fn(&Pattern, Player) -> bool + Send + Sync;

pub struct InvariantMonitor {
    id: String,
    pred: Arc<MonitorFn>,
}

impl Clone for InvariantMonitor {
    fn clone(&self) -> Self {
        InvariantMonitor {
            id: self.id.clone(),
            pred: Arc::clone(&self.pred),
        }
    }
}

impl InvariantMonitor {
    pub fn new(
        id: impl Into<String>,
        pred: impl Fn(&Pattern, Player) -> bool + Send + Sync + 'static,
    ) -> Self {
        InvariantMonitor {
            id: id.into(),
            pred: Arc::new(pred),
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn holds(&self, pattern: &Pattern, to_move: Player) -> bool {
        (self.pred)(pattern, to_move)
    }
}

/// How a run ended.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Outcome {
    /// A final position appeared after this many plies.
    FinalAt(usize),
    SurvivedHorizon,
    /// The region filled up without a final position; B wins.
    Stuck(usize),
    /// A strategy produced an illegal move or was undefined.
    Fault { player: Player, ply: usize },
}

#[derive(Clone, Debug)]
pub struct GameTrace {
    /// Pattern after each ply; index 0 is the empty starting pattern.
    pub patterns: Vec<Pattern>,
    pub moves: Vec<Move>,
    pub outcome: Outcome,
    /// `(ply, monitor id)` for every monitor violation observed.
    pub violations: Vec<(usize, String)>,
}

impl GameTrace {
    pub fn final_pattern(&self) -> &Pattern {
        self.patterns.last().unwrap()
    }

    pub fn plies(&self) -> usize {
        self.moves.len()
    }
}

#[derive(Clone)]
pub struct RunSetup<'a> {
    pub rules: &'a dyn Rulebook,
    pub word: &'a TurnWord,
    pub variant: Variant,
    pub region: Region,
    pub start_index: u64,
    pub max_plies: usize,
}

/// Plays two strategies against each other. Monitors are evaluated before
/// every ply (and do not stop the game); illegal or undefined moves end the
/// run as a fault of the player who produced them.
pub fn run_game(
    setup: &RunSetup<'_>,
    a: &mut dyn Strategy,
    b: &mut dyn Strategy,
    monitors: &[InvariantMonitor],
) -> GameTrace {
    let mut pos = Position::initial(
        TurnCursor::new(Arc::new(setup.word.clone()), setup.start_index),
        setup.region,
    );
    let mut trace = GameTrace {
        patterns: vec![pos.pattern.clone()],
        moves: Vec::new(),
        outcome: Outcome::SurvivedHorizon,
        violations: Vec::new(),
    };
    let alphabet_len = setup.rules.alphabet().len();
    for ply in 0..setup.max_plies {
        let player = pos.turn.player();
        for m in monitors {
            if !m.holds(&pos.pattern, player) {
                trace.violations.push((ply, m.id().to_string()));
            }
        }
        if let Region::Box { .. } = setup.region {
            let full = pos.pattern.len() == setup.region.cells(setup.rules.dimension()).len();
            if full && !setup.variant.pass_allowed() {
                trace.outcome = Outcome::Stuck(ply);
                return trace;
            }
        }
        let fault = Outcome::Fault { player, ply };
        let chosen = match player {
            Player::A => a.choose(&pos),
            Player::B => b.choose(&pos),
        };
        let Some(mv) = chosen else {
            trace.outcome = fault;
            return trace;
        };
        if let Move::Place { color, .. } = &mv {
            if color.index() >= alphabet_len {
                trace.outcome = fault;
                return trace;
            }
        }
        match apply_move(&pos, &mv, setup.variant) {
            Ok(next) => pos = next,
            Err(_) => {
                trace.outcome = fault;
                return trace;
            }
        }
        let hit = match &mv {
            Move::Place { cell, .. } => setup.rules.final_after(&pos.pattern, cell),
            Move::Pass => false,
        };
        trace.moves.push(mv);
        trace.patterns.push(pos.pattern.clone());
        if hit {
            trace.outcome = Outcome::FinalAt(ply + 1);
            return trace;
        }
    }
    trace
}

/// Legal moves of `pos` over the cells within L1 distance `locality` of the
/// support plus one canonical fresh cell per colour, in canonical order.
/// This is the locality abstraction the verifier and reference searches use.
pub fn local_moves(
    pos: &Position,
    rules: &dyn Rulebook,
    variant: Variant,
    locality: u64,
) -> Vec<Move> {
    let mut candidates: BTreeSet<Cell> = BTreeSet::new();
    for cell in pos.pattern.support() {
        collect_l1_ball(cell, locality as i32, &mut candidates);
    }
    candidates.insert(fresh_cell(
        &pos.pattern,
        rules.dimension(),
        locality + rules.forbidden_diameter() + 2,
    ));
    legal_moves(pos, &candidates, variant, rules.alphabet().len())
}

/// Deterministic cell far enough from every tile to be strategically
/// interchangeable with any other remote cell.
pub fn fresh_cell(pattern: &Pattern, dim: usize, clearance: u64) -> Cell {
    let mut coords = vec![0i32; dim];
    if !pattern.is_empty() {
        coords[0] = (pattern.max_l1_norm() + clearance) as i32;
    }
    Cell::new(&coords)
}

fn collect_l1_ball(center: &Cell, radius: i32, out: &mut BTreeSet<Cell>) {
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
    let mut coords = vec![0i32; center.dim()];
    rec(center.coords(), 0, radius, &mut coords, out);
}

/// Ready-made monitors for the invariants the scripted strategies maintain.
pub mod monitors {
    use super::*;
    use crate::reductions::{interpret_arrow, ArrowCoding};

    /// Before each A move, every maximal uncoloured run between tiles has
    /// even length (runs beyond the extremes are infinite and exempt).
    pub fn parity() -> InvariantMonitor {
        InvariantMonitor::new("parity", |p: &Pattern, to_move| {
            if to_move != Player::A || p.is_empty() {
                return true;
            }
            let xs: Vec<i32> = p.support().map(Cell::x0).collect();
            xs.windows(2).all(|w| (w[1] - w[0] - 1) % 2 == 0)
        })
    }

    /// Before each A move, no uncoloured cell has an interpretation.
    pub fn no_interpretation(coding: ArrowCoding) -> InvariantMonitor {
        InvariantMonitor::new("no-interpretation", move |p: &Pattern, to_move| {
            if to_move != Player::A {
                return true;
            }
            interpret_arrow(p, &coding)
                .iter()
                .all(|(cell, set)| p.contains(cell) || set.is_empty())
        })
    }

    /// Before each A move, every coloured cell `i` admits the witness colour
    /// `x_i` among its interpretations.
    pub fn witness_interpretation(coding: ArrowCoding, witness: Vec<Color>) -> InvariantMonitor {
        InvariantMonitor::new("witness-interpretation", move |p: &Pattern, to_move| {
            if to_move != Player::A {
                return true;
            }
            let interp = interpret_arrow(p, &coding);
            p.support().all(|cell| {
                let want = witness[cell.x0().rem_euclid(witness.len() as i32) as usize];
                interp.at(cell).contains(&want)
            })
        })
    }

    /// Marking game: before each A move, every `a` sits inside `bab`.
    pub fn every_a_in_bab() -> InvariantMonitor {
        InvariantMonitor::new("a-in-bab", |p: &Pattern, to_move| {
            if to_move != Player::A {
                return true;
            }
            let a = Color(1);
            let b = Color(0);
            p.iter().all(|(cell, col)| {
                col != a
                    || (p.get(&Cell::x(cell.x0() - 1)) == Some(b)
                        && p.get(&Cell::x(cell.x0() + 1)) == Some(b))
            })
        })
    }

    /// Marking game: before each A move, every `aba` occurrence lies inside
    /// `bbaba` or `b(ba)^n bb` for `n` in {3, 4}.
    pub fn every_aba_covered() -> InvariantMonitor {
        InvariantMonitor::new("aba-covered", |p: &Pattern, to_move| {
            if to_move != Player::A {
                return true;
            }
            let a = Color(1);
            let b = Color(0);
            let aba = [a, b, a];
            let covers: Vec<(Vec<Color>, usize)> = {
                let mut cs = vec![(vec![b, b, a, b, a], 2)];
                for n in [3usize, 4] {
                    let mut w = vec![b];
                    for _ in 0..n {
                        w.push(b);
                        w.push(a);
                    }
                    w.push(b);
                    w.push(b);
                    cs.push((w, 0));
                }
                cs
            };
            p.occurrences_1d(&aba).into_iter().all(|j| {
                covers.iter().any(|(cover, _)| {
                    // some occurrence of the cover contains cells j..j+2
                    p.occurrences_1d(cover).into_iter().any(|s| {
                        s <= j && j + 3 <= s + cover.len() as i32
                    })
                })
            })
        })
    }

    /// The given word never occurs, checked at every ply.
    pub fn no_factor(id: impl Into<String>, word: Vec<Color>) -> InvariantMonitor {
        InvariantMonitor::new(id, move |p: &Pattern, _| p.occurrences_1d(&word).is_empty())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sft::{Alphabet, Sft};

    fn single_tile() -> Sft {
        Sft::from_words(Alphabet::new(["x"]).unwrap(), &[vec![Color(0)]]).unwrap()
    }

    #[test]
    fn two_passers_survive_the_horizon() {
        let sft = single_tile();
        let setup = RunSetup {
            rules: &sft,
            word: &TurnWord::alternating(),
            variant: Variant::PassAllowed,
            region: Region::All,
            start_index: 0,
            max_plies: 20,
        };
        let trace = run_game(
            &setup,
            &mut PassStrategy,
            &mut PassStrategy,
            &[],
        );
        assert_eq!(trace.outcome, Outcome::SurvivedHorizon);
        assert!(trace.final_pattern().is_empty());
    }

    #[test]
    fn scripted_aggressor_ends_at_ply_one() {
        let sft = single_tile();
        let setup = RunSetup {
            rules: &sft,
            word: &TurnWord::alternating(),
            variant: Variant::PassAllowed,
            region: Region::All,
            start_index: 0,
            max_plies: 20,
        };
        let mut a = ScriptStrategy::new(vec![Move::place(Cell::x(0), Color(0))]);
        let trace = run_game(&setup, &mut a, &mut PassStrategy, &[]);
        assert_eq!(trace.outcome, Outcome::FinalAt(1));
    }

    #[test]
    fn illegal_moves_fault_the_mover() {
        let sft = single_tile();
        let setup = RunSetup {
            rules: &sft,
            word: &TurnWord::alternating(),
            variant: Variant::NoPass,
            region: Region::All,
            start_index: 0,
            max_plies: 20,
        };
        // A passes in the no-pass variant.
        let trace = run_game(&setup, &mut PassStrategy, &mut PassStrategy, &[]);
        assert_eq!(
            trace.outcome,
            Outcome::Fault {
                player: Player::A,
                ply: 0
            }
        );
    }

    #[test]
    fn fresh_cells_clear_the_support() {
        let p = Pattern::word_1d(-3, &[Color(0), Color(0)]);
        let f = fresh_cell(&p, 1, 10);
        assert!(p.l1_to_support(&f).unwrap() >= 10);
    }

    #[test]
    fn local_move_enumeration_is_canonical_and_deduplicated() {
        let sft = single_tile();
        let mut pos = Position::initial(
            TurnCursor::start(TurnWord::alternating()),
            Region::All,
        );
        pos.pattern.insert(Cell::x(0), Color(0));
        let moves = local_moves(&pos, &sft, Variant::PassAllowed, 2);
        assert_eq!(moves[0], Move::Pass);
        let cells: Vec<i32> = moves
            .iter()
            .filter_map(|m| match m {
                Move::Place { cell, .. } => Some(cell.x0()),
                Move::Pass => None,
            })
            .collect();
        let mut expected: Vec<i32> = (-2..=2).filter(|&x| x != 0).collect();
        expected.push(4); // fresh cell at norm 0 + locality 2 + diameter 0 + 2
        assert_eq!(cells, expected);
    }
}
