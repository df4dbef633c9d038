//! The two scripted strategies of the arrow construction.
//!
//! A's side (for an empty base SFT): keep playing black tiles at the first
//! free cell right of the origin; every uncoloured cell then has no
//! interpretation, and once enough consecutive cells are coloured, some
//! derived window has only inadmissible interpretations. Should the opponent
//! fail to interpret the latest black tile, switch to a punish line that
//! surrounds a dead cell and fills a window around it.
//!
//! B's side (for a nonempty base with a periodic witness configuration):
//! answer each placement on the odd side of the split it created, with the
//! arrow tile that interprets the placement as the witness colour. The
//! parity of uncoloured runs is restored every turn and every tile keeps an
//! interpretation compatible with the witness, so no forbidden derived
//! window ever appears.

use crate::game::{Move, Position};
use crate::grid::{Cell, Color, Pattern};
use crate::reductions::{interpret_arrow, ArrowCoding, ArrowColor, ArrowGame, Dir, ReductionError};
use crate::sft::Rulebook;
use crate::strategies::Strategy;

/// A's black-tile strategy on a derived arrow game.
#[derive(Clone)]
pub struct BlackStrategy {
    coding: ArrowCoding,
    window_len: i32,
}

impl BlackStrategy {
    pub fn new(game: &ArrowGame) -> Self {
        BlackStrategy {
            coding: *game.coding(),
            window_len: game.window_len() as i32,
        }
    }

    fn black(&self) -> Color {
        self.coding.black()
    }
}

impl Strategy for BlackStrategy {
    fn name(&self) -> String {
        "arrow-black".into()
    }

    fn choose(&mut self, pos: &Position) -> Option<Move> {
        let p = &pos.pattern;
        let black = self.black();
        if p.is_empty() {
            return Some(Move::place(Cell::x(0), black));
        }
        let interp = interpret_arrow(p, &self.coding);
        let (lo, hi) = p.extent_1d();

        // Dead cell: both neighbours coloured, no interpretation. Surround
        // it while it is uncoloured, then fill the window around it.
        for x in lo..=hi {
            let c = Cell::x(x);
            let surrounded = p.contains(&Cell::x(x - 1)) && p.contains(&Cell::x(x + 1));
            if !surrounded || !interp.at(&c).is_empty() {
                continue;
            }
            if !p.contains(&c) {
                return Some(Move::place(c, black));
            }
            if p.get(&c) == Some(black) {
                let half = (self.window_len - 1) / 2;
                for w in x - half..=x + half {
                    if !p.contains(&Cell::x(w)) {
                        return Some(Move::place(Cell::x(w), black));
                    }
                }
                // window already full: the position is final
            }
        }

        // Punish: a black tile of ours was left uninterpreted; extend the
        // dead block towards its free side.
        for x in lo..=hi {
            let c = Cell::x(x);
            if p.get(&c) != Some(black) || !interp.at(&c).is_empty() {
                continue;
            }
            if !p.contains(&Cell::x(x + 1)) {
                return Some(Move::place(Cell::x(x + 1), black));
            }
            if !p.contains(&Cell::x(x - 1)) {
                return Some(Move::place(Cell::x(x - 1), black));
            }
        }

        // Default: first free cell right of the origin.
        let mut x = 0;
        while p.contains(&Cell::x(x)) {
            x += 1;
        }
        Some(Move::place(Cell::x(x), black))
    }

    fn clone_box(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }
}

/// B's parity strategy on a derived arrow game, built from a periodic
/// witness configuration of the base SFT.
#[derive(Clone)]
pub struct ParityStrategy {
    coding: ArrowCoding,
    witness: Vec<Color>,
    last_seen: Pattern,
}

impl ParityStrategy {
    /// The witness period is checked for admissibility over three periods.
    pub fn new(game: &ArrowGame, witness: Vec<Color>) -> Result<Self, ReductionError> {
        if witness.is_empty() {
            return Err(ReductionError::BadWitness);
        }
        let mut repeated = Vec::new();
        for _ in 0..3 {
            repeated.extend_from_slice(&witness);
        }
        if game.base().is_final(&Pattern::word_1d(0, &repeated)) {
            return Err(ReductionError::BadWitness);
        }
        Ok(ParityStrategy {
            coding: *game.coding(),
            witness,
            last_seen: Pattern::empty(),
        })
    }

    fn witness_at(&self, x: i32) -> Color {
        self.witness[x.rem_euclid(self.witness.len() as i32) as usize]
    }

    /// Length of the uncoloured run starting next to `x` in direction `dir`;
    /// `None` when it runs past every tile (infinite).
    fn run(&self, p: &Pattern, x: i32, dir: i32) -> Option<u64> {
        let (lo, hi) = p.extent_1d();
        let mut len = 0u64;
        let mut cur = x + dir;
        loop {
            if cur < lo || cur > hi {
                return None;
            }
            if p.contains(&Cell::x(cur)) {
                return Some(len);
            }
            len += 1;
            cur += dir;
        }
    }
}

impl Strategy for ParityStrategy {
    fn name(&self) -> String {
        "arrow-parity".into()
    }

    fn choose(&mut self, pos: &Position) -> Option<Move> {
        let p = &pos.pattern;
        let news: Vec<Cell> = p
            .support()
            .filter(|c| !self.last_seen.contains(c))
            .cloned()
            .collect();
        let mv = match news.first() {
            None => Move::Pass,
            Some(cell) => {
                let x = cell.x0();
                let right = self.run(p, x, 1);
                let left = self.run(p, x, -1);
                let respond_right = match (left, right) {
                    (_, Some(r)) if r % 2 == 1 => true,
                    (Some(l), _) if l % 2 == 1 => false,
                    (_, None) => true,
                    (None, _) => false,
                    _ => return Some(Move::Pass), // even/even split: nothing to restore
                };
                if respond_right {
                    let tile = ArrowColor::Tile {
                        own: self.witness_at(x + 1),
                        sent: self.witness_at(x),
                        dir: Dir::Left,
                    };
                    Move::place(Cell::x(x + 1), self.coding.encode(tile))
                } else {
                    let tile = ArrowColor::Tile {
                        own: self.witness_at(x - 1),
                        sent: self.witness_at(x),
                        dir: Dir::Right,
                    };
                    Move::place(Cell::x(x - 1), self.coding.encode(tile))
                }
            }
        };
        self.last_seen = p.clone();
        if let Move::Place { cell, color } = &mv {
            self.last_seen.insert(cell.clone(), *color);
        }
        Some(mv)
    }

    fn clone_box(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{Region, Variant};
    use crate::reductions::domino_1d_empty;
    use crate::sft::{Alphabet, Sft};
    use crate::strategies::{monitors, run_game, Outcome, RunSetup, ScriptStrategy};
    use crate::words::TurnWord;

    fn base_11() -> Sft {
        Sft::from_words(Alphabet::numeric(2), &[vec![Color(1), Color(1)]]).unwrap()
    }

    fn base_all_pairs() -> Sft {
        let words = vec![
            vec![Color(0), Color(0)],
            vec![Color(0), Color(1)],
            vec![Color(1), Color(0)],
            vec![Color(1), Color(1)],
        ];
        Sft::from_words(Alphabet::numeric(2), &words).unwrap()
    }

    #[test]
    fn black_opens_at_the_origin_and_punishes_passes() {
        let game = ArrowGame::new(&base_11()).unwrap();
        let mut a = BlackStrategy::new(&game);
        let setup = RunSetup {
            rules: &game,
            word: &TurnWord::alternating(),
            variant: Variant::PassAllowed,
            region: Region::All,
            start_index: 0,
            max_plies: 4,
        };
        let mut b = crate::strategies::PassStrategy;
        let trace = run_game(&setup, &mut a, &mut b, &[]);
        assert_eq!(trace.moves[0], Move::place(Cell::x(0), Color(0)));
        // B passed, so A extends the uninterpreted black tile rightwards.
        assert_eq!(trace.moves[2], Move::place(Cell::x(1), Color(0)));
    }

    #[test]
    fn black_beats_a_passing_opponent_on_an_empty_base() {
        let base = base_all_pairs();
        assert!(domino_1d_empty(&base).unwrap());
        let game = ArrowGame::new(&base).unwrap();
        let mut a = BlackStrategy::new(&game);
        let mut b = crate::strategies::PassStrategy;
        let setup = RunSetup {
            rules: &game,
            word: &TurnWord::alternating(),
            variant: Variant::PassAllowed,
            region: Region::All,
            start_index: 0,
            max_plies: 40,
        };
        let trace = run_game(&setup, &mut a, &mut b, &[]);
        assert!(matches!(trace.outcome, Outcome::FinalAt(_)));
    }

    #[test]
    fn black_builds_an_all_black_block_against_cooperators() {
        // Scripted B interprets each black tile properly; after enough
        // A-moves the rightmost block is all black and final, because the
        // base is empty so every interpretation is inadmissible.
        let base = base_all_pairs();
        let game = ArrowGame::new(&base).unwrap();
        let coding = *game.coding();
        let tile = |own: u16, sent: u16, dir| {
            coding.encode(ArrowColor::Tile {
                own: Color(own),
                sent: Color(sent),
                dir,
            })
        };
        // B interprets A's first tile from the left, then each later tile
        // from the right.
        let mut script: Vec<Move> = vec![Move::place(Cell::x(-1), tile(0, 0, Dir::Right))];
        script.extend((1..8).map(|i| Move::place(Cell::x(2 * i), tile(0, 0, Dir::Left))));
        let mut a = BlackStrategy::new(&game);
        let mut b = ScriptStrategy::new(script);
        let setup = RunSetup {
            rules: &game,
            word: &TurnWord::alternating(),
            variant: Variant::PassAllowed,
            region: Region::All,
            start_index: 0,
            max_plies: 30,
        };
        let trace = run_game(&setup, &mut a, &mut b, &[]);
        assert!(matches!(trace.outcome, Outcome::FinalAt(_)));
    }

    #[test]
    fn parity_answers_with_the_witness_tile() {
        let game = ArrowGame::new(&base_11()).unwrap();
        let witness = vec![Color(0), Color(1)]; // (01)^w, admissible for {11}
        let mut b = ParityStrategy::new(&game, witness).unwrap();
        let mut pos = Position::initial(
            crate::words::TurnCursor::start(TurnWord::alternating()),
            Region::All,
        );
        pos.pattern.insert(Cell::x(0), game.coding().black());
        let mv = b.choose(&pos).unwrap();
        let expected = game.coding().encode(ArrowColor::Tile {
            own: Color(1),  // witness at cell 1
            sent: Color(0), // witness at cell 0
            dir: Dir::Left,
        });
        assert_eq!(mv, Move::place(Cell::x(1), expected));
    }

    #[test]
    fn inadmissible_witnesses_are_rejected() {
        let game = ArrowGame::new(&base_11()).unwrap();
        assert!(matches!(
            ParityStrategy::new(&game, vec![Color(1)]),
            Err(ReductionError::BadWitness)
        ));
    }

    #[test]
    fn parity_survives_the_black_strategy_on_a_nonempty_base() {
        let base = base_11();
        assert!(!domino_1d_empty(&base).unwrap());
        let game = ArrowGame::new(&base).unwrap();
        let mut a = BlackStrategy::new(&game);
        let mut b = ParityStrategy::new(&game, vec![Color(0), Color(1)]).unwrap();
        let coding = *game.coding();
        let setup = RunSetup {
            rules: &game,
            word: &TurnWord::alternating(),
            variant: Variant::PassAllowed,
            region: Region::All,
            start_index: 0,
            max_plies: 50,
        };
        let ms = [
            monitors::parity(),
            monitors::no_interpretation(coding),
            monitors::witness_interpretation(coding, vec![Color(0), Color(1)]),
        ];
        let trace = run_game(&setup, &mut a, &mut b, &ms);
        assert_eq!(trace.outcome, Outcome::SurvivedHorizon);
        assert!(trace.violations.is_empty(), "{:?}", trace.violations);
    }
}

#[cfg(test)]
mod mid_frequency_tests {
    use super::*;
    use crate::game::{Region, Variant};
    use crate::strategies::{monitors, run_game, Outcome, RunSetup};
    use crate::words::TurnWord;
    use crate::grid::Color;
    use crate::sft::{Alphabet, Sft};

    /// Under a mid-frequency word the defender answers on the turns right
    /// after the attacker's and passes on its extra turns; the witness
    /// interpretations survive.
    #[test]
    fn parity_defends_under_a_mid_frequency_turn_order() {
        let base =
            Sft::from_words(Alphabet::numeric(2), &[vec![Color(1), Color(1)]]).unwrap();
        let game = ArrowGame::new(&base).unwrap();
        let word: TurnWord = "(ABBAB)*".parse().unwrap();
        let coding = *game.coding();
        let mut a = BlackStrategy::new(&game);
        let mut b = ParityStrategy::new(&game, vec![Color(0), Color(1)]).unwrap();
        let setup = RunSetup {
            rules: &game,
            word: &word,
            variant: Variant::PassAllowed,
            region: Region::All,
            start_index: 0,
            max_plies: 40,
        };
        let ms = [monitors::witness_interpretation(coding, vec![Color(0), Color(1)])];
        let trace = run_game(&setup, &mut a, &mut b, &ms);
        assert_eq!(trace.outcome, Outcome::SurvivedHorizon);
        assert!(trace.violations.is_empty(), "{:?}", trace.violations);
    }
}
