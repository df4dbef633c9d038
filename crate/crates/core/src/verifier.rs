//! Exhaustive adversary enumeration with locality bounds, and the
//! dovetailing prover combining window and horizon certificates.
//!
//! The adversary may place on any cell within L1 distance `L` of an existing
//! tile, plus one canonical fresh cell per colour: far-apart play decomposes
//! into independent boards, so a single representative far cell stands in
//! for all remote moves. The default `L` is twice the largest forbidden
//! diameter plus four; a forbidden pattern cannot straddle a wider gap.
//! Reports carry the locality and depth they were obtained under, so every
//! verdict is reproducible.

use crate::game::{apply_move, Move, Position, Region, Variant};
use crate::sft::Rulebook;
use crate::solver::bounded::{solve_omega_with, BoundedError};
use crate::solver::finite::{semidecide_a_wins, solve_region, RegionSpec, SolveError};
use crate::strategies::{local_moves, InvariantMonitor, Strategy};
use crate::words::{Player, TurnCursor, TurnWord};
use rayon::prelude::*;
use std::sync::Arc;

/// What `exhaust` establishes over the full adversary tree.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Objective {
    /// The fixed strategy's player forces a final position within the depth
    /// on every branch.
    StrategyWins,
    /// No final position occurs through the depth on any branch.
    NoForbidden,
    /// Only the attached monitors are checked.
    MonitorsHold,
}

#[derive(Clone)]
pub struct VerifySpec {
    /// Which player the fixed strategy controls; the other is enumerated.
    pub strategy_player: Player,
    pub word: TurnWord,
    pub variant: Variant,
    /// Plies explored per branch.
    pub depth: u32,
    /// Adversary locality; `None` takes the default from the rulebook.
    pub locality: Option<u64>,
    pub objective: Objective,
    pub monitors: Vec<InvariantMonitor>,
    pub node_budget: u64,
}

impl VerifySpec {
    pub fn new(strategy_player: Player, word: TurnWord, depth: u32) -> Self {
        VerifySpec {
            strategy_player,
            word,
            variant: Variant::PassAllowed,
            depth,
            locality: None,
            objective: Objective::StrategyWins,
            monitors: Vec::new(),
            node_budget: 200_000_000,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Verdict {
    Verified,
    /// Moves from the initial position to the violation.
    Counterexample(Vec<Move>),
    /// The node budget ran out first.
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub verdict: Verdict,
    pub nodes: u64,
    pub locality: u64,
    pub depth: u32,
}

pub fn default_locality(rules: &dyn Rulebook) -> u64 {
    2 * rules.forbidden_diameter() + 4
}

fn adversary_moves(
    pos: &Position,
    rules: &dyn Rulebook,
    variant: Variant,
    locality: u64,
) -> Vec<Move> {
    let mut moves = local_moves(pos, rules, variant, locality);
    moves.sort_by_key(|m| matches!(m, Move::Pass));
    moves
}

enum Explored {
    Ok,
    Cex(Vec<Move>),
    Budget,
}

struct Walker<'a> {
    rules: &'a dyn Rulebook,
    spec: &'a VerifySpec,
    locality: u64,
    nodes: u64,
    budget: u64,
}

impl Walker<'_> {
    fn run(&mut self, pos: &Position, strat: &mut Box<dyn Strategy>, path: &mut Vec<Move>) -> Explored {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Explored::Budget;
        }
        let to_move = pos.turn.player();
        for m in &self.spec.monitors {
            if !m.holds(&pos.pattern, to_move) {
                return Explored::Cex(path.clone());
            }
        }
        let ply = pos.turn.index();
        if ply >= self.spec.depth as u64 {
            return match self.spec.objective {
                Objective::StrategyWins => Explored::Cex(path.clone()),
                Objective::NoForbidden | Objective::MonitorsHold => Explored::Ok,
            };
        }
        if to_move == self.spec.strategy_player {
            let Some(mv) = strat.choose(pos) else {
                return Explored::Cex(path.clone());
            };
            let Ok(next) = apply_move(pos, &mv, self.spec.variant) else {
                return Explored::Cex(path.clone());
            };
            let hit = match &mv {
                Move::Place { cell, .. } => self.rules.final_after(&next.pattern, cell),
                Move::Pass => false,
            };
            path.push(mv);
            let r = if hit {
                match self.spec.objective {
                    Objective::NoForbidden => Explored::Cex(path.clone()),
                    Objective::StrategyWins | Objective::MonitorsHold => Explored::Ok,
                }
            } else {
                self.run(&next, strat, path)
            };
            path.pop();
            return r;
        }
        // adversary: every local move; passes sort last so the reported
        // counterexample is the lexicographically smallest violation
        for mv in adversary_moves(pos, self.rules, self.spec.variant, self.locality) {
            let next = apply_move(pos, &mv, self.spec.variant).expect("local moves are legal");
            let hit = match &mv {
                Move::Place { cell, .. } => self.rules.final_after(&next.pattern, cell),
                Move::Pass => false,
            };
            path.push(mv);
            let r = if hit {
                match self.spec.objective {
                    Objective::NoForbidden => Explored::Cex(path.clone()),
                    Objective::StrategyWins | Objective::MonitorsHold => Explored::Ok,
                }
            } else {
                let mut branch = strat.clone();
                self.run(&next, &mut branch, path)
            };
            match r {
                Explored::Ok => {
                    path.pop();
                }
                other => {
                    path.pop();
                    return other;
                }
            }
        }
        Explored::Ok
    }
}

/// Explores the full adversary tree against the fixed strategy. The first
/// level of adversary branching runs in parallel with an equal budget share
/// per branch; reports merge deterministically (the counterexample of the
/// lowest-ordered branch wins).
pub fn exhaust(rules: &dyn Rulebook, strategy: &dyn Strategy, spec: &VerifySpec) -> VerifyReport {
    let locality = spec.locality.unwrap_or_else(|| default_locality(rules));
    let pos = Position::initial(
        TurnCursor::new(Arc::new(spec.word.clone()), 0),
        Region::All,
    );
    let mut strat = strategy.clone_box();
    let mut prefix: Vec<Move> = Vec::new();
    let mut cur = pos;

    // Walk the forced prelude up to the first adversary decision.
    loop {
        let ply = cur.turn.index();
        if ply >= spec.depth as u64 || cur.turn.player() != spec.strategy_player {
            break;
        }
        for m in &spec.monitors {
            if !m.holds(&cur.pattern, spec.strategy_player) {
                return VerifyReport {
                    verdict: Verdict::Counterexample(prefix),
                    nodes: 1,
                    locality,
                    depth: spec.depth,
                };
            }
        }
        let mv = match strat.choose(&cur) {
            Some(mv) => mv,
            None => {
                return VerifyReport {
                    verdict: Verdict::Counterexample(prefix),
                    nodes: 1,
                    locality,
                    depth: spec.depth,
                }
            }
        };
        let next = match apply_move(&cur, &mv, spec.variant) {
            Ok(n) => n,
            Err(_) => {
                return VerifyReport {
                    verdict: Verdict::Counterexample(prefix),
                    nodes: 1,
                    locality,
                    depth: spec.depth,
                }
            }
        };
        let hit = match &mv {
            Move::Place { cell, .. } => rules.final_after(&next.pattern, cell),
            Move::Pass => false,
        };
        prefix.push(mv);
        cur = next;
        if hit {
            let verdict = match spec.objective {
                Objective::NoForbidden => Verdict::Counterexample(prefix),
                _ => Verdict::Verified,
            };
            return VerifyReport {
                verdict,
                nodes: 1,
                locality,
                depth: spec.depth,
            };
        }
    }

    if cur.turn.index() < spec.depth as u64 {
        for m in &spec.monitors {
            if !m.holds(&cur.pattern, cur.turn.player()) {
                return VerifyReport {
                    verdict: Verdict::Counterexample(prefix),
                    nodes: 1,
                    locality,
                    depth: spec.depth,
                };
            }
        }
    }

    // Root adversary branching in parallel.
    let root_moves: Vec<Move> = if cur.turn.index() >= spec.depth as u64 {
        Vec::new()
    } else {
        adversary_moves(&cur, rules, spec.variant, locality)
    };
    if root_moves.is_empty() {
        // depth exhausted before any adversary move
        let verdict = match spec.objective {
            Objective::StrategyWins => Verdict::Counterexample(prefix),
            _ => Verdict::Verified,
        };
        return VerifyReport {
            verdict,
            nodes: 1,
            locality,
            depth: spec.depth,
        };
    }
    let per_branch = (spec.node_budget / root_moves.len() as u64).max(1);
    let outcomes: Vec<(Explored, u64)> = root_moves
        .par_iter()
        .map(|mv| {
            let next = apply_move(&cur, mv, spec.variant).expect("local moves are legal");
            let hit = match mv {
                Move::Place { cell, .. } => rules.final_after(&next.pattern, cell),
                Move::Pass => false,
            };
            let mut path = prefix.clone();
            path.push(mv.clone());
            if hit {
                let r = match spec.objective {
                    Objective::NoForbidden => Explored::Cex(path),
                    _ => Explored::Ok,
                };
                return (r, 1);
            }
            let mut walker = Walker {
                rules,
                spec,
                locality,
                nodes: 0,
                budget: per_branch,
            };
            let mut branch = strat.clone();
            let r = walker.run(&next, &mut branch, &mut path);
            (r, walker.nodes)
        })
        .collect();

    let nodes: u64 = outcomes.iter().map(|(_, n)| n).sum();
    let mut verdict = Verdict::Verified;
    for (outcome, _) in outcomes {
        match outcome {
            Explored::Ok => {}
            Explored::Cex(path) => {
                verdict = Verdict::Counterexample(path);
                break;
            }
            Explored::Budget => {
                verdict = Verdict::Inconclusive;
                break;
            }
        }
    }
    VerifyReport {
        verdict,
        nodes,
        locality,
        depth: spec.depth,
    }
}

/// A proof that A wins on the whole grid: a window radius on which A wins
/// (sound for the pass-allowed variant), or a horizon within which A forces
/// a final position.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Certificate {
    Window { radius: u32 },
    Horizon { plies: u32 },
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ProveReport {
    pub certificate: Option<Certificate>,
    pub nodes_used: u64,
    /// Largest parameters attempted (exclusive of budget-truncated runs).
    pub window_reached: u32,
    pub horizon_reached: u32,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ProveModes {
    pub window: bool,
    pub horizon: bool,
}

impl Default for ProveModes {
    fn default() -> Self {
        ProveModes {
            window: true,
            horizon: true,
        }
    }
}

/// Dovetails the window semi-decision and the bounded-horizon decision,
/// returning the first certificate found. Window certificates are only
/// sound when B may pass, so that mode is skipped in the no-pass variant.
/// Budget exhaustion is inconclusive: absence of a certificate proves
/// nothing.
pub fn prove_a_wins(
    rules: &dyn Rulebook,
    word: &TurnWord,
    variant: Variant,
    modes: ProveModes,
    budget: u64,
) -> Result<ProveReport, BoundedError> {
    let window_mode = modes.window && variant.pass_allowed();
    let horizon_mode = modes.horizon && rules.forbidden_all_connected();
    let mut remaining = budget;
    let mut report = ProveReport {
        certificate: None,
        nodes_used: 0,
        window_reached: 0,
        horizon_reached: 0,
    };
    let mut window_dead = !window_mode;
    let mut horizon_dead = !horizon_mode;
    let cap = 64u32;
    for k in 0..=cap {
        if window_dead && horizon_dead {
            break;
        }
        if !window_dead {
            match solve_region(rules, word, RegionSpec::new(k, variant).with_budget(remaining)) {
                Ok(solved) => {
                    let used = solved.result().stats.nodes;
                    report.nodes_used += used;
                    remaining = remaining.saturating_sub(used);
                    report.window_reached = k;
                    if solved.result().winner == Player::A {
                        report.certificate = Some(Certificate::Window { radius: k });
                        return Ok(report);
                    }
                }
                Err(SolveError::BudgetExceeded { nodes, .. }) => {
                    report.nodes_used += nodes;
                    remaining = remaining.saturating_sub(nodes);
                    window_dead = true;
                }
                Err(SolveError::WordNotFiniteState) => {
                    window_dead = true;
                }
            }
        }
        if !horizon_dead {
            let run = solve_omega_with(rules, word, variant, k, 0, Some(remaining))?;
            report.nodes_used += run.stats.nodes;
            remaining = remaining.saturating_sub(run.stats.nodes);
            match run.a_wins {
                Some(true) => {
                    report.horizon_reached = k;
                    report.certificate = Some(Certificate::Horizon { plies: k });
                    return Ok(report);
                }
                Some(false) => {
                    report.horizon_reached = k;
                }
                None => {
                    horizon_dead = true;
                }
            }
        }
        if remaining == 0 {
            break;
        }
    }
    Ok(report)
}

/// Convenience shortcut for `semidecide` in record emitters.
pub fn window_witness(
    rules: &dyn Rulebook,
    word: &TurnWord,
    variant: Variant,
    n_max: u32,
    budget: Option<u64>,
) -> Result<Option<u32>, SolveError> {
    semidecide_a_wins(rules, word, variant, n_max, budget)
}
