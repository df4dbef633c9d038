//! A solver workbench for two-player tiling games on the grid `Z^d`.
//!
//! Player A picks cells and colours trying to make some forbidden pattern of
//! a subshift of finite type appear; player B tries to prevent it forever.
//! The crate provides exact solvers for finite windows and bounded horizons,
//! turn-order word analysis, the classical SFT-to-SFT reduction
//! constructions, executable versions of the strategies behind them, and an
//! exhaustive verification engine for strategy claims.
//!
//! ```
//! use dgame_core::sft::{Alphabet, Sft};
//! use dgame_core::solver::finite::{solve_region, RegionSpec};
//! use dgame_core::{Color, Player, TurnWord, Variant};
//!
//! // no three equal colours in a row, B moves first, passing allowed
//! let sft = Sft::from_words(
//!     Alphabet::numeric(2),
//!     &[vec![Color(0); 3], vec![Color(1); 3]],
//! )
//! .unwrap();
//! let word: TurnWord = "B|(AB)*".parse().unwrap();
//! let solved = solve_region(&sft, &word, RegionSpec::new(2, Variant::PassAllowed)).unwrap();
//! assert_eq!(solved.result().winner, Player::B);
//!
//! // without passes, A forces a loss on the infinite grid within 4 plies
//! assert!(dgame_core::solve_omega(&sft, &word, Variant::NoPass, 4).unwrap());
//! ```

pub mod game;
pub mod grid;
pub mod record;
pub mod reductions;
pub mod reference;
pub mod sft;
pub mod solver;
pub mod strategies;
pub mod verifier;
pub mod words;

pub use game::{apply_move, legal_moves, Move, MoveError, Position, Region, Variant};
pub use grid::{Cell, Color, Pattern};
pub use sft::{Alphabet, Rulebook, Sft, SftDoc, SftError};
pub use solver::bounded::{
    omega_legal_moves, solve_omega, solve_omega_with, theta, AnchoredTrace, BoundedError,
    MultiBoardPosition, OmegaMove, OmegaReport,
};
pub use solver::finite::{
    semidecide_a_wins, solve_region, RegionSpec, SearchStats, SolveError, SolveResult,
    SolvedRegion, StrategyTable,
};
pub use verifier::{
    default_locality, exhaust, prove_a_wins, Certificate, Objective, ProveModes, ProveReport,
    Verdict, VerifyReport, VerifySpec,
};
pub use words::{BalancedCase, CaseTag, Player, TurnCursor, TurnWord, WordError};
