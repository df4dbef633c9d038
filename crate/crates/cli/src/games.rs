//! Loading game files: plain SFTs, or derived games described by a
//! predicate field.

use anyhow::{anyhow, Context, Result};
use dgame_core::reductions::ArrowGame;
use dgame_core::sft::{Rulebook, Sft, SftDoc};
use std::path::Path;
use std::sync::Arc;

pub enum GameHandle {
    Plain(Arc<Sft>),
    Arrow(Arc<ArrowGame>),
}

impl GameHandle {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))?;
        let doc: SftDoc = serde_json::from_str(&text)
            .with_context(|| format!("parsing {}", path.display()))?;
        GameHandle::from_doc(&doc).with_context(|| path.display().to_string())
    }

    pub fn from_doc(doc: &SftDoc) -> Result<Self> {
        match &doc.predicate {
            None => Ok(GameHandle::Plain(Arc::new(
                Sft::from_doc(doc).map_err(|e| anyhow!("{e}"))?,
            ))),
            Some(p) if p.name == "arrow" => Ok(GameHandle::Arrow(Arc::new(
                ArrowGame::from_doc(doc).map_err(|e| anyhow!("{e}"))?,
            ))),
            Some(p) => Err(anyhow!("unknown predicate {:?}", p.name)),
        }
    }

    pub fn rules(&self) -> &dyn Rulebook {
        match self {
            GameHandle::Plain(sft) => &**sft,
            GameHandle::Arrow(game) => &**game,
        }
    }

    pub fn rules_arc(&self) -> Arc<dyn Rulebook> {
        match self {
            GameHandle::Plain(sft) => Arc::clone(sft) as Arc<dyn Rulebook>,
            GameHandle::Arrow(game) => Arc::clone(game) as Arc<dyn Rulebook>,
        }
    }

    pub fn arrow(&self) -> Option<&ArrowGame> {
        match self {
            GameHandle::Arrow(game) => Some(game),
            GameHandle::Plain(_) => None,
        }
    }
}
