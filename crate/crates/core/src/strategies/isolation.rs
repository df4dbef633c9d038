//! A's isolation strategy for turn orders whose A-frequency exceeds one
//! half: the word gives A double moves with bounded gaps, and the strategy
//! builds isolated copies of a target word level by level, spending
//! `count * (2k+1)` plies per level to extend enough surviving copies by one
//! letter. The total ply budget is exactly `v(|w|, c, k)`.

use crate::game::{Move, Position};
use crate::grid::{Cell, Color, Pattern};
use crate::strategies::Strategy;
use crate::words::{Player, TurnWord, WordError};

#[derive(Clone, Debug)]
struct Phase {
    /// Prefix length the phase completes occurrences to.
    level: usize,
    /// Plies the phase lasts.
    duration: u64,
    /// Copies the phase starts from (virtual fresh spots at level 1).
    candidates_in: u64,
    /// Isolation distance survivors of this phase must keep.
    isolation: u64,
}

/// Builds `c` isolated occurrences of `word` within `v(|word|, c, k)` plies,
/// then passes forever. When `word` is itself forbidden, building one copy
/// ends the game.
#[derive(Clone)]
pub struct IsolationStrategy {
    word: Vec<Color>,
    phases: Vec<Phase>,
    spacing: u64,
    phase_idx: usize,
    phase_start: u64,
    /// Anchors whose occurrence is intact at the current level.
    candidates: Vec<i32>,
    /// Anchors extended during the current phase.
    completed: Vec<i32>,
    started: bool,
}

impl IsolationStrategy {
    /// `turns` must contain the double letter `AA` with occurrence gap bound
    /// at most `k` (so A is guaranteed `k+1` moves in every `2k+1` plies).
    pub fn new(
        word: Vec<Color>,
        c: u64,
        delta: u64,
        k: u64,
        turns: &TurnWord,
    ) -> Result<Self, WordError> {
        if k == 0 {
            return Err(WordError::ZeroGap);
        }
        let scan = turns.default_scan_depth().max(64);
        let observed = turns.gap_bound(&[Player::A, Player::A], scan)?;
        if observed > k {
            return Err(WordError::Inconsistent {
                freq: turns.frequency(),
                depth: scan,
                msg: format!("AA occurrence gap {observed} exceeds the promised bound {k}"),
            });
        }
        let n = word.len();
        // Isolation tightens going down: level n keeps delta, each level
        // below keeps 2*delta + 3 of the level above.
        let mut isolations = vec![delta; n + 1];
        for level in (1..n).rev() {
            isolations[level] = 2 * isolations[level + 1] + 3;
        }
        let mut phases = Vec::new();
        for (level, &isolation) in isolations.iter().enumerate().skip(1) {
            let count = c
                .checked_mul((k + 1).checked_pow((n - level) as u32).ok_or(WordError::Overflow)?)
                .ok_or(WordError::Overflow)?;
            phases.push(Phase {
                level,
                duration: count.checked_mul(2 * k + 1).ok_or(WordError::Overflow)?,
                candidates_in: count * (k + 1),
                isolation,
            });
        }
        // One opponent tile must never sit within the level-1 isolation
        // distance of two occurrences at once, so fresh spots go further
        // than two spoil radii plus the occurrence length apart.
        let widest = isolations.get(1).copied().unwrap_or(delta);
        let spacing = 2 * widest + 2 * n as u64 + 3;
        Ok(IsolationStrategy {
            word,
            phases,
            spacing,
            phase_idx: 0,
            phase_start: 0,
            candidates: Vec::new(),
            completed: Vec::new(),
            started: false,
        })
    }

    /// Total ply budget, `v(|word|, c, k)`.
    pub fn budget(&self) -> u64 {
        self.phases.iter().map(|p| p.duration).sum()
    }

    fn occurrence_intact(&self, p: &Pattern, anchor: i32, len: usize) -> bool {
        (0..len).all(|i| p.get(&Cell::x(anchor + i as i32)) == Some(self.word[i]))
    }

    /// No foreign tile within the isolation distance of the occurrence.
    fn isolated(&self, p: &Pattern, anchor: i32, len: usize, delta: u64) -> bool {
        p.iter().all(|(cell, _)| {
            let x = cell.x0();
            if (anchor..anchor + len as i32).contains(&x) {
                return true;
            }
            let dist = if x < anchor {
                (anchor - x) as u64
            } else {
                (x - (anchor + len as i32 - 1)) as u64
            };
            dist > delta
        })
    }

    fn close_phase(&mut self, p: &Pattern) {
        let phase = self.phases[self.phase_idx].clone();
        let survivors: Vec<i32> = self
            .completed
            .iter()
            .copied()
            .filter(|&a| {
                self.occurrence_intact(p, a, phase.level)
                    && self.isolated(p, a, phase.level, phase.isolation)
            })
            .collect();
        self.candidates = survivors;
        self.completed = Vec::new();
        self.phase_start += phase.duration;
        self.phase_idx += 1;
    }

    fn fresh_spot(&self, p: &Pattern) -> i32 {
        if p.is_empty() {
            return 0;
        }
        let (_, hi) = p.extent_1d();
        hi + self.spacing as i32
    }
}

impl Strategy for IsolationStrategy {
    fn name(&self) -> String {
        "isolation".into()
    }

    fn choose(&mut self, pos: &Position) -> Option<Move> {
        let ply = pos.turn.index();
        if !self.started {
            self.started = true;
            self.phase_start = ply;
        }
        let p = &pos.pattern;
        while self.phase_idx < self.phases.len()
            && ply >= self.phase_start + self.phases[self.phase_idx].duration
        {
            self.close_phase(p);
        }
        if self.phase_idx >= self.phases.len() {
            return Some(Move::Pass);
        }
        let phase = self.phases[self.phase_idx].clone();
        if phase.level == 1 {
            // Plant the first letter on fresh, isolated spots.
            if (self.completed.len() as u64) < phase.candidates_in {
                let spot = self.fresh_spot(p);
                self.completed.push(spot);
                return Some(Move::place(Cell::x(spot), self.word[0]));
            }
            return Some(Move::Pass);
        }
        // Extend the first intact candidate whose next cell is free.
        let idx = self.candidates.iter().position(|&a| {
            self.occurrence_intact(p, a, phase.level - 1)
                && !p.contains(&Cell::x(a + phase.level as i32 - 1))
        });
        match idx {
            Some(i) => {
                let anchor = self.candidates.remove(i);
                self.completed.push(anchor);
                Some(Move::place(
                    Cell::x(anchor + phase.level as i32 - 1),
                    self.word[phase.level - 1],
                ))
            }
            None => Some(Move::Pass),
        }
    }

    fn clone_box(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{Region, Variant};
    use crate::words;
    use crate::sft::{Alphabet, Sft};
    use crate::strategies::{run_game, Outcome, PassStrategy, RunSetup, ScriptStrategy};

    fn aa_sft() -> Sft {
        Sft::from_words(Alphabet::new(["a", "b"]).unwrap(), &[vec![Color(0), Color(0)]])
            .unwrap()
    }

    #[test]
    fn empty_target_is_an_immediate_success() {
        let word: TurnWord = "(AAB)*".parse().unwrap();
        let s = IsolationStrategy::new(vec![], 1, 1, 1, &word).unwrap();
        assert_eq!(s.budget(), 0);
        assert_eq!(words::v(0, 1, 1).unwrap(), 0);
    }

    #[test]
    fn rejects_words_without_close_double_moves() {
        let word: TurnWord = "(AB)*".parse().unwrap();
        assert!(IsolationStrategy::new(vec![Color(0)], 1, 1, 1, &word).is_err());
        // gap 2 in (ABAAB)* exceeds a promised bound of 1
        let wide: TurnWord = "(ABAAB)*".parse().unwrap();
        assert!(IsolationStrategy::new(vec![Color(0)], 1, 1, 1, &wide).is_err());
        assert!(IsolationStrategy::new(vec![Color(0)], 1, 1, 2, &wide).is_ok());
    }

    #[test]
    fn budget_matches_the_closed_form() {
        let word: TurnWord = "(AAB)*".parse().unwrap();
        for (n, c, k) in [(1u32, 1u64, 1u64), (2, 1, 1), (2, 3, 1), (3, 2, 1)] {
            let target = vec![Color(0); n as usize];
            let s = IsolationStrategy::new(target, c, 1, k, &word).unwrap();
            assert_eq!(s.budget(), words::v(n, c, k).unwrap());
        }
    }

    #[test]
    fn wins_the_adjacent_pair_game_within_budget_against_a_passer() {
        let sft = aa_sft();
        let word: TurnWord = "(AAB)*".parse().unwrap();
        let mut a = IsolationStrategy::new(vec![Color(0); 2], 1, 1, 1, &word).unwrap();
        let budget = a.budget();
        assert_eq!(budget, 9);
        let setup = RunSetup {
            rules: &sft,
            word: &word,
            variant: Variant::PassAllowed,
            region: Region::All,
            start_index: 0,
            max_plies: budget as usize,
        };
        let trace = run_game(&setup, &mut a, &mut PassStrategy, &[]);
        assert!(matches!(trace.outcome, Outcome::FinalAt(t) if t as u64 <= budget));
    }

    #[test]
    fn wins_within_budget_against_a_blocking_script() {
        let sft = aa_sft();
        let word: TurnWord = "(AAB)*".parse().unwrap();
        let mut a = IsolationStrategy::new(vec![Color(0); 2], 1, 1, 1, &word).unwrap();
        let budget = a.budget();
        // B stalks the first two planted spots and blocks their extensions.
        let mut b = ScriptStrategy::new(vec![
            Move::place(Cell::x(1), Color(1)),
            Move::place(Cell::x(1 + a.spacing as i32), Color(1)),
        ]);
        let setup = RunSetup {
            rules: &sft,
            word: &word,
            variant: Variant::PassAllowed,
            region: Region::All,
            start_index: 0,
            max_plies: budget as usize,
        };
        let trace = run_game(&setup, &mut a, &mut b, &[]);
        assert!(
            matches!(trace.outcome, Outcome::FinalAt(t) if t as u64 <= budget),
            "{:?}",
            trace.outcome
        );
    }

    #[test]
    fn planted_tiles_are_isolated() {
        let sft = aa_sft();
        let word: TurnWord = "(AAB)*".parse().unwrap();
        let mut a = IsolationStrategy::new(vec![Color(0)], 1, 3, 1, &word).unwrap();
        let setup = RunSetup {
            rules: &sft,
            word: &word,
            variant: Variant::PassAllowed,
            region: Region::All,
            start_index: 0,
            max_plies: a.budget() as usize,
        };
        let trace = run_game(&setup, &mut a, &mut PassStrategy, &[]);
        // The single-letter game has no forbidden pattern hit; after the
        // budget the planted tiles are pairwise far apart.
        let final_pattern = trace.final_pattern();
        let xs: Vec<i32> = final_pattern.support().map(Cell::x0).collect();
        assert!(xs.len() >= 2);
        for w in xs.windows(2) {
            assert!(w[1] - w[0] > 3);
        }
    }
}

#[cfg(test)]
mod block_word_tests {
    use super::*;
    use crate::game::{Region, Variant};
    use crate::sft::{Alphabet, Sft};
    use crate::strategies::{run_game, Outcome, PassStrategy, RunSetup, ScriptStrategy};
    use crate::words::{a_ab_block, v};

    /// Repeating the block A(AB)^n gives AA gaps of 2n+1, so the isolation
    /// strategy with k = n wins any nonempty game within v(|w|, 1, n) plies.
    #[test]
    fn wins_under_repeated_a_ab_blocks() {
        let n = 2usize;
        let block = a_ab_block(n);
        let word = TurnWord::periodic(block).unwrap();
        let sft = Sft::from_words(
            Alphabet::new(["a", "b"]).unwrap(),
            &[vec![Color(0), Color(0)]],
        )
        .unwrap();
        let budget = v(2, 1, n as u64).unwrap();
        assert_eq!(budget, 20);
        for blocker in [true, false] {
            let mut a =
                IsolationStrategy::new(vec![Color(0); 2], 1, 1, n as u64, &word).unwrap();
            assert_eq!(a.budget(), budget);
            let spacing = a.spacing as i32;
            let mut b: Box<dyn crate::strategies::Strategy> = if blocker {
                Box::new(ScriptStrategy::new(vec![
                    Move::place(Cell::x(1), Color(1)),
                    Move::place(Cell::x(spacing + 1), Color(1)),
                    Move::place(Cell::x(2 * spacing + 1), Color(1)),
                ]))
            } else {
                Box::new(PassStrategy)
            };
            let setup = RunSetup {
                rules: &sft,
                word: &word,
                variant: Variant::PassAllowed,
                region: Region::All,
                start_index: 0,
                max_plies: budget as usize,
            };
            let trace = run_game(&setup, &mut a, &mut *b, &[]);
            assert!(
                matches!(trace.outcome, Outcome::FinalAt(t) if t as u64 <= budget),
                "blocker={blocker}: {:?}",
                trace.outcome
            );
        }
    }
}
