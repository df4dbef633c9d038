//! Terminal play: board rendering and the interactive session loop.

use crate::games::GameHandle;
use crate::registry::strategy_by_name;
use anyhow::{anyhow, bail, Result};
use dgame_core::game::{apply_move, Move, Position, Region, Variant};
use dgame_core::grid::{Cell, Pattern};
use dgame_core::sft::Alphabet;
use dgame_core::solver::finite::{solve_region, RegionSpec};
use dgame_core::strategies::{Outcome, Strategy, TableStrategy};
use dgame_core::words::{Player, TurnCursor, TurnWord};
use std::io::{BufRead, Write};
use std::sync::Arc;

const GLYPHS: &[u8] = b"0123456789abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ";

/// One display glyph per colour: the name itself when all names are single
/// characters, an indexed fallback otherwise.
pub fn glyphs(alphabet: &Alphabet) -> Vec<char> {
    let single = alphabet.names().iter().all(|n| n.chars().count() == 1);
    alphabet
        .colors()
        .map(|c| {
            if single {
                alphabet.name(c).chars().next().unwrap()
            } else {
                GLYPHS[c.index() % GLYPHS.len()] as char
            }
        })
        .collect()
}

/// Compact single-line rendering used in result records: the bounding box
/// plus its contents, `.` for uncoloured cells, rows joined by `/` in 2D.
pub fn render_pattern(p: &Pattern, alphabet: &Alphabet) -> String {
    if p.is_empty() {
        return "(empty)".to_string();
    }
    let gl = glyphs(alphabet);
    let dim = p.dim().unwrap();
    if dim == 1 {
        let (lo, hi) = p.extent_1d();
        let row: String = (lo..=hi)
            .map(|x| p.get(&Cell::x(x)).map_or('.', |c| gl[c.index()]))
            .collect();
        format!("[{lo}..{hi}] {row}")
    } else {
        let xs: Vec<i32> = p.support().map(|c| c.coords()[0]).collect();
        let ys: Vec<i32> = p.support().map(|c| c.coords()[1]).collect();
        let (x0, x1) = (*xs.iter().min().unwrap(), *xs.iter().max().unwrap());
        let (y0, y1) = (*ys.iter().min().unwrap(), *ys.iter().max().unwrap());
        let mut rows = Vec::new();
        for y in (y0..=y1).rev() {
            let row: String = (x0..=x1)
                .map(|x| p.get(&Cell::xy(x, y)).map_or('.', |c| gl[c.index()]))
                .collect();
            rows.push(row);
        }
        format!("[{x0}..{x1}]x[{y0}..{y1}] {}", rows.join("/"))
    }
}

/// Multi-line board view: bounding box of the placed tiles plus margin 2.
fn render_board(p: &Pattern, alphabet: &Alphabet, dim: usize) -> String {
    let gl = glyphs(alphabet);
    if dim == 1 {
        let (lo, hi) = if p.is_empty() { (0, 0) } else { p.extent_1d() };
        let (lo, hi) = (lo - 2, hi + 2);
        let cells: String = (lo..=hi)
            .map(|x| p.get(&Cell::x(x)).map_or('.', |c| gl[c.index()]))
            .collect();
        format!("{lo:>5} {cells} {hi}\n")
    } else {
        let coords: Vec<&Cell> = p.support().collect();
        let (x0, x1, y0, y1) = if coords.is_empty() {
            (0, 0, 0, 0)
        } else {
            (
                coords.iter().map(|c| c.coords()[0]).min().unwrap(),
                coords.iter().map(|c| c.coords()[0]).max().unwrap(),
                coords.iter().map(|c| c.coords()[1]).min().unwrap(),
                coords.iter().map(|c| c.coords()[1]).max().unwrap(),
            )
        };
        let mut text = String::new();
        for y in (y0 - 2..=y1 + 2).rev() {
            text.push_str(&format!("{y:>5} "));
            for x in x0 - 2..=x1 + 2 {
                text.push(p.get(&Cell::xy(x, y)).map_or('.', |c| gl[c.index()]));
            }
            text.push('\n');
        }
        text
    }
}

fn parse_human_move(line: &str, alphabet: &Alphabet, dim: usize) -> Result<Move> {
    let tokens: Vec<&str> = line.split_whitespace().collect();
    if tokens.as_slice() == ["pass"] {
        return Ok(Move::Pass);
    }
    if tokens.len() != dim + 1 {
        bail!("expected {} coordinates and a colour, or \"pass\"", dim);
    }
    let coords: Vec<i32> = tokens[..dim]
        .iter()
        .map(|t| t.parse::<i32>().map_err(|_| anyhow!("bad coordinate {t:?}")))
        .collect::<Result<_>>()?;
    let color = alphabet
        .id(tokens[dim])
        .ok_or_else(|| anyhow!("unknown colour {:?}", tokens[dim]))?;
    Ok(Move::place(Cell::new(&coords), color))
}

/// Interactive game of the human against an engine strategy (or a solved
/// table when `engine` is "table"). Illegal input re-prompts without
/// changing the state. Returns how the game ended.
#[allow(clippy::too_many_arguments)]
pub fn play_session<R: BufRead, W: Write>(
    handle: &GameHandle,
    engine: &str,
    human: Player,
    word: &TurnWord,
    variant: Variant,
    radius: Option<u32>,
    max_plies: usize,
    mut input: R,
    mut out: W,
) -> Result<Outcome> {
    let rules = handle.rules();
    let region = match radius {
        Some(r) => Region::Box { radius: r },
        None => Region::All,
    };
    let mut engine_strategy: Box<dyn Strategy> = if engine == "table" {
        let r = radius.ok_or_else(|| anyhow!("a table engine needs --radius"))?;
        let solved = solve_region(rules, word, RegionSpec::new(r, variant))
            .map_err(|e| anyhow!("solving the window: {e}"))?;
        let table = Arc::new(solved.extract_strategy(human.other()));
        writeln!(
            out,
            "solved window {r}: winner {}, table of {} positions",
            solved.result().winner,
            table.len()
        )?;
        Box::new(TableStrategy::new(table, variant, solved.region_cells().to_vec()))
    } else {
        strategy_by_name(engine, handle, word, variant)?
    };

    let alphabet = rules.alphabet();
    writeln!(out, "colours: {}", alphabet.names().join(" "))?;
    let mut pos = Position::initial(TurnCursor::new(Arc::new(word.clone()), 0), region);
    let mut line = String::new();
    for ply in 0..max_plies {
        write!(out, "{}", render_board(&pos.pattern, alphabet, rules.dimension()))?;
        let player = pos.turn.player();
        let mv = if player == human {
            loop {
                write!(out, "ply {ply}, {player} to move (x{} colour | pass | quit): ",
                    if rules.dimension() == 2 { " y" } else { "" })?;
                out.flush()?;
                line.clear();
                if input.read_line(&mut line)? == 0 || line.trim() == "quit" {
                    writeln!(out, "game abandoned")?;
                    return Ok(Outcome::SurvivedHorizon);
                }
                match parse_human_move(line.trim(), alphabet, rules.dimension()) {
                    Ok(mv) => match apply_move(&pos, &mv, variant) {
                        Ok(_) => break mv,
                        Err(e) => writeln!(out, "illegal move: {e}")?,
                    },
                    Err(e) => writeln!(out, "{e}")?,
                }
            }
        } else {
            let Some(mv) = engine_strategy.choose(&pos) else {
                writeln!(out, "the engine is undefined here and forfeits")?;
                return Ok(Outcome::Fault { player, ply });
            };
            writeln!(out, "ply {ply}: {player} plays {mv}")?;
            mv
        };
        pos = apply_move(&pos, &mv, variant).map_err(|e| anyhow!("engine fault: {e}"))?;
        let hit = match &mv {
            Move::Place { cell, .. } => rules.final_after(&pos.pattern, cell),
            Move::Pass => false,
        };
        if hit {
            write!(out, "{}", render_board(&pos.pattern, alphabet, rules.dimension()))?;
            writeln!(out, "final position: A wins at ply {}", ply + 1)?;
            if let GameHandle::Plain(sft) = handle {
                if let Ok(Some((index, at))) = sft.find_forbidden(&pos.pattern) {
                    writeln!(out, "witness: forbidden pattern {index} at {at}")?;
                }
            }
            return Ok(Outcome::FinalAt(ply + 1));
        }
    }
    writeln!(out, "horizon reached: B survives")?;
    Ok(Outcome::SurvivedHorizon)
}
