//! Subshifts of finite type: an alphabet plus a finite set of forbidden
//! patterns, and the [`Rulebook`] trait every game hands to the solvers.
//!
//! Forbidden patterns are normalised on construction so that the
//! lexicographically smallest support cell sits at the origin; matching then
//! scans all anchor translations that touch the board support. The canonical
//! form doubles as a memoization key.
//!
//! Derived games whose forbidden set is a predicate over fixed-length windows
//! (see `reductions`) implement [`Rulebook`] directly instead of materialising
//! the set.

use crate::grid::{Cell, Color, Pattern};
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SftError {
    #[error("alphabet must not be empty")]
    EmptyAlphabet,
    #[error("duplicate colour name {0:?}")]
    DuplicateColor(String),
    #[error("forbidden pattern {0} is empty")]
    EmptyForbidden(usize),
    #[error("forbidden pattern {index} uses colour {color} outside the alphabet")]
    ColorOutOfRange { index: usize, color: u16 },
    #[error("forbidden pattern {index} has dimension {got}, game has dimension {want}")]
    DimensionMismatch { index: usize, got: usize, want: usize },
    #[error("pattern uses colour {0} outside the alphabet")]
    PatternColorOutOfRange(u16),
    #[error("unknown colour name {0:?}")]
    UnknownColor(String),
    #[error("malformed file: {0}")]
    Format(String),
}

/// Ordered list of colour names; `Color(i)` indexes into it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Alphabet {
    names: Vec<String>,
}

impl Alphabet {
    pub fn new<S: Into<String>, I: IntoIterator<Item = S>>(names: I) -> Result<Self, SftError> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(SftError::EmptyAlphabet);
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(SftError::DuplicateColor(n.clone()));
            }
        }
        Ok(Alphabet { names })
    }

    /// Alphabet `{"0", "1", ..}` of the given size.
    pub fn numeric(size: usize) -> Self {
        Alphabet::new((0..size).map(|i| i.to_string())).expect("size >= 1")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, c: Color) -> &str {
        &self.names[c.index()]
    }

    pub fn id(&self, name: &str) -> Option<Color> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| Color(i as u16))
    }

    pub fn colors(&self) -> impl Iterator<Item = Color> {
        (0..self.names.len() as u16).map(Color)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn contains(&self, c: Color) -> bool {
        c.index() < self.names.len()
    }
}

/// What the solvers need to know about a game: where it is played, with which
/// colours, and when a position is final.
pub trait Rulebook: Sync + Send {
    fn dimension(&self) -> usize;
    fn alphabet(&self) -> &Alphabet;

    /// Does a forbidden pattern occur anywhere in `p`?
    fn is_final(&self, p: &Pattern) -> bool;

    /// Finality check after a single placement at `last`. Only occurrences
    /// touching `last` need scanning; the default falls back to a full scan.
    fn final_after(&self, p: &Pattern, last: &Cell) -> bool {
        let _ = last;
        self.is_final(p)
    }

    /// Largest L1 diameter over the forbidden patterns; locality heuristics
    /// key off this.
    fn forbidden_diameter(&self) -> u64;

    /// True when every forbidden pattern is connected under L1 adjacency.
    /// The bounded-horizon solver requires this.
    fn forbidden_all_connected(&self) -> bool;
}

/// An SFT given by an explicit finite list of forbidden patterns.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Sft {
    dimension: usize,
    alphabet: Alphabet,
    forbidden: Vec<Pattern>,
}

impl Sft {
    pub fn new(
        dimension: usize,
        alphabet: Alphabet,
        forbidden: Vec<Pattern>,
    ) -> Result<Self, SftError> {
        assert!(dimension >= 1);
        let mut normalised = Vec::with_capacity(forbidden.len());
        for (index, f) in forbidden.into_iter().enumerate() {
            if f.is_empty() {
                return Err(SftError::EmptyForbidden(index));
            }
            if f.dim() != Some(dimension) {
                return Err(SftError::DimensionMismatch {
                    index,
                    got: f.dim().unwrap_or(0),
                    want: dimension,
                });
            }
            if let Some((_, c)) = f.iter().find(|(_, c)| !alphabet.contains(*c)) {
                return Err(SftError::ColorOutOfRange { index, color: c.0 });
            }
            normalised.push(f.normalised());
        }
        Ok(Sft {
            dimension,
            alphabet,
            forbidden: normalised,
        })
    }

    /// 1D SFT whose forbidden patterns are contiguous words.
    pub fn from_words(alphabet: Alphabet, words: &[Vec<Color>]) -> Result<Self, SftError> {
        let forbidden = words.iter().map(|w| Pattern::word_1d(0, w)).collect();
        Sft::new(1, alphabet, forbidden)
    }

    pub fn forbidden(&self) -> &[Pattern] {
        &self.forbidden
    }

    /// First occurrence of a forbidden pattern in `p`, as
    /// `(forbidden index, translation)`. Scan order is forbidden index
    /// ascending, then translation ascending lexicographically, so the
    /// witness is deterministic.
    pub fn find_forbidden(&self, p: &Pattern) -> Result<Option<(usize, Cell)>, SftError> {
        if let Some((_, c)) = p.iter().find(|(_, c)| !self.alphabet.contains(*c)) {
            return Err(SftError::PatternColorOutOfRange(c.0));
        }
        Ok(self.find_forbidden_unchecked(p))
    }

    fn find_forbidden_unchecked(&self, p: &Pattern) -> Option<(usize, Cell)> {
        for (index, f) in self.forbidden.iter().enumerate() {
            let mut anchors = std::collections::BTreeSet::new();
            for s in p.support() {
                for c in f.support() {
                    anchors.insert(s.minus(c));
                }
            }
            for at in anchors {
                if p.matches_at(f, &at) {
                    return Some((index, at));
                }
            }
        }
        None
    }
}

impl Rulebook for Sft {
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn is_final(&self, p: &Pattern) -> bool {
        self.find_forbidden_unchecked(p).is_some()
    }

    fn final_after(&self, p: &Pattern, last: &Cell) -> bool {
        // Only translations that place some cell of the forbidden pattern on
        // `last` can have been completed by that move.
        for f in &self.forbidden {
            let mut anchors = std::collections::BTreeSet::new();
            for c in f.support() {
                anchors.insert(last.minus(c));
            }
            for at in anchors {
                if p.matches_at(f, &at) {
                    return true;
                }
            }
        }
        false
    }

    fn forbidden_diameter(&self) -> u64 {
        self.forbidden
            .iter()
            .map(|f| {
                f.support()
                    .flat_map(|a| f.support().map(move |b| a.l1(b)))
                    .max()
                    .unwrap_or(0)
            })
            .max()
            .unwrap_or(0)
    }

    fn forbidden_all_connected(&self) -> bool {
        self.forbidden.iter().all(Pattern::is_connected)
    }
}

impl fmt::Display for Sft {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "sft(d={}, |A|={}, |F|={})",
            self.dimension,
            self.alphabet.len(),
            self.forbidden.len()
        )
    }
}

// ---------------------------------------------------------------------------
// File format
// ---------------------------------------------------------------------------

/// On-disk form of one tile of a forbidden pattern.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct TileDoc {
    pub offset: Vec<i32>,
    pub color: String,
}

/// On-disk form of an SFT. `predicate` is present only for derived games
/// whose forbidden set is a window predicate (emitted by `reduce`).
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct SftDoc {
    pub dimension: usize,
    pub alphabet: Vec<String>,
    pub forbidden: Vec<Vec<TileDoc>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub predicate: Option<PredicateDoc>,
}

/// Parameters of a window-predicate construction.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct PredicateDoc {
    pub name: String,
    pub window: usize,
    pub base: Box<SftDoc>,
}

impl Sft {
    pub fn to_doc(&self) -> SftDoc {
        SftDoc {
            dimension: self.dimension,
            alphabet: self.alphabet.names.clone(),
            forbidden: self
                .forbidden
                .iter()
                .map(|p| {
                    p.iter()
                        .map(|(cell, color)| TileDoc {
                            offset: cell.coords().to_vec(),
                            color: self.alphabet.name(color).to_string(),
                        })
                        .collect()
                })
                .collect(),
            predicate: None,
        }
    }

    pub fn from_doc(doc: &SftDoc) -> Result<Self, SftError> {
        if doc.dimension == 0 {
            return Err(SftError::Format("dimension must be >= 1".into()));
        }
        let alphabet = Alphabet::new(doc.alphabet.clone())?;
        let mut forbidden = Vec::with_capacity(doc.forbidden.len());
        for tiles in &doc.forbidden {
            let mut p = Pattern::empty();
            for t in tiles {
                if t.offset.len() != doc.dimension {
                    return Err(SftError::Format(format!(
                        "offset {:?} does not match dimension {}",
                        t.offset, doc.dimension
                    )));
                }
                let color = alphabet
                    .id(&t.color)
                    .ok_or_else(|| SftError::UnknownColor(t.color.clone()))?;
                if p.contains(&Cell::new(&t.offset)) {
                    return Err(SftError::Format(format!(
                        "offset {:?} listed twice in one pattern",
                        t.offset
                    )));
                }
                p.insert(Cell::new(&t.offset), color);
            }
            forbidden.push(p);
        }
        Sft::new(doc.dimension, alphabet, forbidden)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("serialisable")
    }

    pub fn from_json(text: &str) -> Result<Self, SftError> {
        let doc: SftDoc =
            serde_json::from_str(text).map_err(|e| SftError::Format(e.to_string()))?;
        Sft::from_doc(&doc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn binary_words_sft(words: &[&[u16]]) -> Sft {
        let ws: Vec<Vec<Color>> = words
            .iter()
            .map(|w| w.iter().map(|&c| Color(c)).collect())
            .collect();
        Sft::from_words(Alphabet::numeric(2), &ws).unwrap()
    }

    #[test]
    fn literal_occurrence_witness() {
        let sft = binary_words_sft(&[&[0, 0, 0], &[1, 1, 1]]);
        let p = Pattern::word_1d(0, &[Color(0), Color(0), Color(0)]);
        assert_eq!(sft.find_forbidden(&p).unwrap(), Some((0, Cell::x(0))));
    }

    #[test]
    fn no_occurrence() {
        let sft = binary_words_sft(&[&[1, 1]]);
        let p = Pattern::word_1d(0, &[Color(0), Color(1), Color(0), Color(1)]);
        assert_eq!(sft.find_forbidden(&p).unwrap(), None);
    }

    #[test]
    fn empty_pattern_never_final() {
        let sft = binary_words_sft(&[&[0], &[1]]);
        assert_eq!(sft.find_forbidden(&Pattern::empty()).unwrap(), None);
        assert!(!sft.is_final(&Pattern::empty()));
    }

    #[test]
    fn color_outside_alphabet_is_an_error() {
        let sft = binary_words_sft(&[&[0, 0]]);
        let p = Pattern::word_1d(0, &[Color(7)]);
        assert!(matches!(
            sft.find_forbidden(&p),
            Err(SftError::PatternColorOutOfRange(7))
        ));
    }

    #[test]
    fn forbidden_patterns_are_normalised() {
        let shifted = Pattern::word_1d(41, &[Color(0), Color(1)]);
        let sft = Sft::new(1, Alphabet::numeric(2), vec![shifted]).unwrap();
        assert_eq!(sft.forbidden()[0].min_cell(), Some(&Cell::x(0)));
        let p = Pattern::word_1d(-3, &[Color(0), Color(1)]);
        assert_eq!(sft.find_forbidden(&p).unwrap(), Some((0, Cell::x(-3))));
    }

    #[test]
    fn diameter_and_connectivity() {
        let sft = binary_words_sft(&[&[0, 0, 0]]);
        assert_eq!(sft.forbidden_diameter(), 2);
        assert!(sft.forbidden_all_connected());
        let gap = Sft::new(
            1,
            Alphabet::numeric(2),
            vec![Pattern::from_tiles([
                (Cell::x(0), Color(0)),
                (Cell::x(2), Color(0)),
            ])],
        )
        .unwrap();
        assert!(!gap.forbidden_all_connected());
    }

    #[test]
    fn json_round_trip() {
        let sft = binary_words_sft(&[&[0, 0, 0], &[1, 1, 1]]);
        let text = sft.to_json();
        let back = Sft::from_json(&text).unwrap();
        assert_eq!(sft, back);
    }

    /// Reference matcher: double loop over forbidden patterns and every
    /// translation that intersects the support.
    fn naive_find(sft: &Sft, p: &Pattern) -> Option<(usize, Cell)> {
        for (i, f) in sft.forbidden().iter().enumerate() {
            let mut anchors = std::collections::BTreeSet::new();
            for s in p.support() {
                for c in f.support() {
                    anchors.insert(s.minus(c));
                }
            }
            for at in anchors {
                if f.iter().all(|(c, col)| p.get(&c.translated(&at)) == Some(col)) {
                    return Some((i, at));
                }
            }
        }
        None
    }

    proptest! {
        #[test]
        fn matcher_agrees_with_naive_double_loop(
            tiles in proptest::collection::btree_map(-6i32..6, 0u16..2, 0..12),
            fwords in proptest::collection::vec(
                proptest::collection::vec(0u16..2, 1..3), 1..4),
        ) {
            let p = Pattern::from_tiles(
                tiles.into_iter().map(|(x, c)| (Cell::x(x), Color(c))));
            let ws: Vec<Vec<Color>> =
                fwords.iter().map(|w| w.iter().map(|&c| Color(c)).collect()).collect();
            let sft = Sft::from_words(Alphabet::numeric(2), &ws).unwrap();
            prop_assert_eq!(sft.find_forbidden(&p).unwrap(), naive_find(&sft, &p));
        }

        #[test]
        fn finality_is_monotone_under_extension(
            tiles in proptest::collection::btree_map(-6i32..6, 0u16..2, 0..10),
            extra_x in 6i32..9,
            extra_c in 0u16..2,
        ) {
            let p = Pattern::from_tiles(
                tiles.into_iter().map(|(x, c)| (Cell::x(x), Color(c))));
            let sft = binary_words_sft(&[&[0, 0], &[1, 1, 1]]);
            if sft.is_final(&p) {
                let bigger = p.with_tile(Cell::x(extra_x), Color(extra_c)).unwrap();
                prop_assert!(sft.is_final(&bigger));
            }
        }
    }
}
