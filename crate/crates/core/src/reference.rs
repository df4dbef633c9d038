//! Independent reference implementations used as oracles by the test and
//! acceptance suites. They share no search machinery with the solvers they
//! check: plain full-width recursion, no memoization in the region oracle,
//! repetition detected on the current path only.

use crate::game::{apply_move, legal_moves, Position, Region, Variant};
use crate::grid::Pattern;
use crate::sft::Rulebook;
use crate::solver::finite::SolvedRegion;
use crate::strategies::{local_moves, run_game, Outcome, RunSetup, TableStrategy};
use crate::words::{Player, TurnCursor, TurnWord};
use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::Arc;

/// Naive minimax value of the box-region game: `Some(v)` when A forces a
/// final position in `v` plies, `None` when B wins. Pass cycles are cut by
/// an explicit repetition check on the current path, which loses nothing
/// because placements only grow the pattern.
pub fn naive_region_value(
    rules: &dyn Rulebook,
    word: &TurnWord,
    radius: u32,
    variant: Variant,
    start_index: u64,
) -> Option<u64> {
    let region = Region::Box { radius };
    let cells: BTreeSet<_> = region.cells(rules.dimension()).into_iter().collect();
    let pos = Position::initial(
        TurnCursor::new(Arc::new(word.clone()), start_index),
        region,
    );
    let mut on_path = HashSet::new();
    naive_value(rules, variant, &cells, &pos, &mut on_path)
}

fn naive_value(
    rules: &dyn Rulebook,
    variant: Variant,
    cells: &BTreeSet<crate::grid::Cell>,
    pos: &Position,
    on_path: &mut HashSet<(Pattern, u64)>,
) -> Option<u64> {
    if rules.is_final(&pos.pattern) {
        return Some(0);
    }
    let key = (
        pos.pattern.clone(),
        pos.turn.residue().expect("finite-state word"),
    );
    if !on_path.insert(key.clone()) {
        return None; // repetition: B can loop forever
    }
    let moves = legal_moves(pos, cells, variant, rules.alphabet().len());
    let result = if moves.is_empty() {
        None // the region filled without a final position
    } else {
        let to_move = pos.turn.player();
        let mut best: Option<u64> = None;
        let mut all = true;
        let mut worst = 0u64;
        for mv in &moves {
            let next = apply_move(pos, mv, variant).expect("enumerated moves are legal");
            match naive_value(rules, variant, cells, &next, on_path) {
                Some(v) => {
                    best = Some(best.map_or(v, |b| b.min(v)));
                    worst = worst.max(v);
                }
                None => all = false,
            }
        }
        match to_move {
            Player::A => best.map(|v| v + 1),
            Player::B => {
                if all {
                    Some(worst + 1)
                } else {
                    None
                }
            }
        }
    };
    on_path.remove(&key);
    result
}

/// Direct bounded search of the flat game: does A force a final position
/// within `horizon` plies, when both players play within L1 distance
/// `2^horizon` of existing tiles plus one canonical fresh cell per colour?
/// Memoized on (pattern, plies); the state space is flat patterns, shared
/// with nothing in the multi-board solver.
pub fn direct_bounded_wins(
    rules: &dyn Rulebook,
    word: &TurnWord,
    variant: Variant,
    horizon: u32,
) -> bool {
    let locality = 1u64 << horizon;
    let mut memo = HashMap::new();
    direct_bounded(
        rules,
        variant,
        horizon,
        locality,
        &Position::initial(TurnCursor::start(word.clone()), Region::All),
        &mut memo,
    )
}

fn direct_bounded(
    rules: &dyn Rulebook,
    variant: Variant,
    horizon: u32,
    locality: u64,
    pos: &Position,
    memo: &mut HashMap<(Pattern, u64), bool>,
) -> bool {
    if rules.is_final(&pos.pattern) {
        return true;
    }
    if pos.turn.index() >= horizon as u64 {
        return false;
    }
    let key = (pos.pattern.clone(), pos.turn.index());
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let maximiser = pos.turn.player() == Player::A;
    let mut result = !maximiser;
    for mv in local_moves(pos, rules, variant, locality) {
        let next = apply_move(pos, &mv, variant).expect("local moves are legal");
        let r = direct_bounded(rules, variant, horizon, locality, &next, memo);
        if r == maximiser {
            result = maximiser;
            break;
        }
    }
    memo.insert(key, result);
    result
}

/// Plays the two extracted strategy tables against each other and reports
/// who the run favours: A when a final position appears, B when the horizon
/// or a stuck region is survived.
pub fn table_self_play(rules: &dyn Rulebook, solved: &SolvedRegion, max_plies: usize) -> Player {
    let a_table = Arc::new(solved.extract_strategy(Player::A));
    let b_table = Arc::new(solved.extract_strategy(Player::B));
    let cells = solved.region_cells().to_vec();
    let mut a = TableStrategy::new(a_table, solved.variant(), cells.clone());
    let mut b = TableStrategy::new(b_table, solved.variant(), cells.clone());
    let setup = RunSetup {
        rules,
        word: solved.word(),
        variant: solved.variant(),
        region: Region::Box {
            radius: region_radius_of(&cells),
        },
        start_index: 0,
        max_plies,
    };
    let trace = run_game(&setup, &mut a, &mut b, &[]);
    match trace.outcome {
        Outcome::FinalAt(_) => Player::A,
        Outcome::SurvivedHorizon | Outcome::Stuck(_) => Player::B,
        Outcome::Fault { player, .. } => player.other(),
    }
}

fn region_radius_of(cells: &[crate::grid::Cell]) -> u32 {
    cells
        .iter()
        .flat_map(|c| c.coords().iter().map(|v| v.unsigned_abs()))
        .max()
        .unwrap_or(0)
}
