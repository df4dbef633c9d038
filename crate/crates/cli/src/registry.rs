//! Strategy and monitor lookup by name. Parameterised names use colons:
//! `parity:0,1` (witness colours), `isolation:a,a:1:1:1` (word, copies,
//! isolation, gap bound), `omega:4` (bounded-horizon replay).

use crate::games::GameHandle;
use anyhow::{anyhow, bail, Result};
use dgame_core::grid::Color;
use dgame_core::sft::Rulebook;
use dgame_core::strategies::{
    monitors, BlackStrategy, FourRuleStrategy, InvariantKeeper1234, InvariantMonitor,
    IsolationStrategy, OmegaStrategy, PalindromeStrategy, ParityStrategy, PassStrategy, Strategy,
};
use dgame_core::words::TurnWord;
use dgame_core::Variant;

fn parse_colors(handle: &GameHandle, txt: &str) -> Result<Vec<Color>> {
    txt.split(',')
        .filter(|s| !s.is_empty())
        .map(|name| {
            handle
                .rules()
                .alphabet()
                .id(name.trim())
                .ok_or_else(|| anyhow!("unknown colour {name:?}"))
        })
        .collect()
}

pub fn strategy_by_name(
    name: &str,
    handle: &GameHandle,
    word: &TurnWord,
    variant: Variant,
) -> Result<Box<dyn Strategy>> {
    let (head, rest) = match name.split_once(':') {
        Some((h, r)) => (h, r),
        None => (name, ""),
    };
    Ok(match head {
        "pass" => Box::new(PassStrategy),
        "four-rule" => Box::new(FourRuleStrategy::new()),
        "palindrome" => Box::new(PalindromeStrategy::new()),
        "1234" => Box::new(InvariantKeeper1234::new()),
        "black" => {
            let game = handle
                .arrow()
                .ok_or_else(|| anyhow!("\"black\" plays derived arrow games only"))?;
            Box::new(BlackStrategy::new(game))
        }
        "parity" => {
            let game = handle
                .arrow()
                .ok_or_else(|| anyhow!("\"parity\" plays derived arrow games only"))?;
            let witness = rest
                .split(',')
                .filter(|s| !s.is_empty())
                .map(|name| {
                    game.base()
                        .alphabet()
                        .id(name.trim())
                        .ok_or_else(|| anyhow!("unknown base colour {name:?}"))
                })
                .collect::<Result<Vec<Color>>>()?;
            Box::new(ParityStrategy::new(game, witness).map_err(|e| anyhow!("{e}"))?)
        }
        "isolation" => {
            let parts: Vec<&str> = rest.split(':').collect();
            let [word_txt, c, delta, k] = parts.as_slice() else {
                bail!("isolation takes word:copies:isolation:gap, e.g. isolation:a,a:1:1:1");
            };
            let target = parse_colors(handle, word_txt)?;
            Box::new(
                IsolationStrategy::new(target, c.parse()?, delta.parse()?, k.parse()?, word)
                    .map_err(|e| anyhow!("{e}"))?,
            )
        }
        "omega" => {
            let horizon: u32 = rest.parse().map_err(|_| anyhow!("omega takes a horizon"))?;
            Box::new(
                OmegaStrategy::new(handle.rules_arc(), word.clone(), variant, horizon)
                    .map_err(|e| anyhow!("{e}"))?,
            )
        }
        other => bail!("unknown strategy {other:?}"),
    })
}

pub fn monitor_by_name(name: &str, handle: &GameHandle) -> Result<InvariantMonitor> {
    let (head, rest) = match name.split_once(':') {
        Some((h, r)) => (h, r),
        None => (name, ""),
    };
    Ok(match head {
        "parity" => monitors::parity(),
        "a-in-bab" => monitors::every_a_in_bab(),
        "aba-covered" => monitors::every_aba_covered(),
        "no-interpretation" => {
            let game = handle
                .arrow()
                .ok_or_else(|| anyhow!("\"no-interpretation\" needs an arrow game"))?;
            monitors::no_interpretation(*game.coding())
        }
        "witness" => {
            let game = handle
                .arrow()
                .ok_or_else(|| anyhow!("\"witness\" needs an arrow game"))?;
            let witness = rest
                .split(',')
                .filter(|s| !s.is_empty())
                .map(|name| {
                    game.base()
                        .alphabet()
                        .id(name.trim())
                        .ok_or_else(|| anyhow!("unknown base colour {name:?}"))
                })
                .collect::<Result<Vec<Color>>>()?;
            monitors::witness_interpretation(*game.coding(), witness)
        }
        "no-factor" => {
            let word = parse_colors(handle, rest)?;
            monitors::no_factor(format!("no-factor:{rest}"), word)
        }
        other => bail!("unknown monitor {other:?}"),
    })
}
