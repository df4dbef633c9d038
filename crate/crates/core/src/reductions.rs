//! Interpretation machinery and SFT-to-SFT constructions.
//!
//! The arrow construction turns a 1D base SFT into a derived game over
//! `(A^2 x {left,right}) + {black}` whose forbidden set is a predicate on
//! fixed-length windows: a window is forbidden when every full interpretation
//! of its inner part contains a base forbidden pattern (vacuously so when
//! some inner cell has no interpretation at all). The derived forbidden set
//! is never materialised; solvers only ever need membership tests.
//!
//! Also here: the voting and majority interpretations over tuple alphabets,
//! the two marking games over `{a, b}`, and an exact emptiness check for 1D
//! SFTs through the de Bruijn graph of admissible blocks.

use crate::grid::{Cell, Color, Pattern};
use crate::sft::{Alphabet, Rulebook, Sft, SftError};
use std::collections::{BTreeMap, BTreeSet, HashSet};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReductionError {
    #[error("the arrow construction applies to 1D base games (got dimension {0}); apply it line-wise for higher dimensions")]
    NotOneDimensional(usize),
    #[error("vote tuple has width {got}, expected {want}")]
    TupleWidth { got: usize, want: usize },
    #[error("witness configuration is not admissible for the base game")]
    BadWitness,
    #[error(transparent)]
    Sft(#[from] SftError),
}

/// Direction a derived tile sends its second colour.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Dir {
    Left,
    Right,
}

/// A colour of the derived arrow alphabet: black, or a pair of base colours
/// plus a direction. `own` is the colour the tile claims for its own cell,
/// `sent` the colour it offers to the neighbour in direction `dir`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ArrowColor {
    Black,
    Tile { own: Color, sent: Color, dir: Dir },
}

/// Encoding of arrow colours as colour ids: id 0 is black, then all
/// `(own, sent, dir)` triples. Size `2 |A|^2 + 1`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ArrowCoding {
    base_len: usize,
}

impl ArrowCoding {
    pub fn new(base_len: usize) -> Self {
        ArrowCoding { base_len }
    }

    pub fn black(&self) -> Color {
        Color(0)
    }

    pub fn derived_len(&self) -> usize {
        2 * self.base_len * self.base_len + 1
    }

    pub fn encode(&self, c: ArrowColor) -> Color {
        match c {
            ArrowColor::Black => Color(0),
            ArrowColor::Tile { own, sent, dir } => {
                let d = match dir {
                    Dir::Left => 0,
                    Dir::Right => 1,
                };
                Color(
                    (1 + d * self.base_len * self.base_len
                        + own.index() * self.base_len
                        + sent.index()) as u16,
                )
            }
        }
    }

    pub fn decode(&self, c: Color) -> ArrowColor {
        if c.index() == 0 {
            return ArrowColor::Black;
        }
        let i = c.index() - 1;
        let sq = self.base_len * self.base_len;
        let dir = if i / sq == 0 { Dir::Left } else { Dir::Right };
        let rest = i % sq;
        ArrowColor::Tile {
            own: Color((rest / self.base_len) as u16),
            sent: Color((rest % self.base_len) as u16),
            dir,
        }
    }

    fn names(&self, base: &Alphabet) -> Vec<String> {
        let mut names = vec!["#".to_string()];
        for dir in [Dir::Left, Dir::Right] {
            for own in base.colors() {
                for sent in base.colors() {
                    let arrow = if dir == Dir::Left { "<" } else { ">" };
                    names.push(format!("({},{},{arrow})", base.name(own), base.name(sent)));
                }
            }
        }
        names
    }
}

/// Per-cell sets of candidate base colours induced by a derived pattern.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Interpretation {
    cells: BTreeMap<Cell, BTreeSet<Color>>,
}

impl Interpretation {
    pub fn at(&self, cell: &Cell) -> BTreeSet<Color> {
        self.cells.get(cell).cloned().unwrap_or_default()
    }

    pub fn insert(&mut self, cell: Cell, color: Color) {
        self.cells.entry(cell).or_default().insert(color);
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Cell, &BTreeSet<Color>)> {
        self.cells.iter()
    }
}

/// Interpretation of a 1D pattern over the arrow alphabet: a non-black tile
/// offers its `own` colour to its cell, and its `sent` colour to the
/// neighbour its arrow points at.
pub fn interpret_arrow(pattern: &Pattern, coding: &ArrowCoding) -> Interpretation {
    let mut out = Interpretation::default();
    for (cell, color) in pattern.iter() {
        if let ArrowColor::Tile { own, sent, dir } = coding.decode(color) {
            out.insert(cell.clone(), own);
            let target = match dir {
                Dir::Left => Cell::x(cell.x0() - 1),
                Dir::Right => Cell::x(cell.x0() + 1),
            };
            out.insert(target, sent);
        }
    }
    out
}

/// The derived arrow game over a 1D base SFT. The base forbidden patterns
/// are padded to full windows `[-n, n]`; a derived window of length `2n+3`
/// is forbidden when every full interpretation of its inner `2n+1` cells is
/// a padded forbidden window, which holds vacuously when some inner cell has
/// an empty interpretation set.
pub struct ArrowGame {
    base: Sft,
    coding: ArrowCoding,
    alphabet: Alphabet,
    pad_radius: i32,
    padded: HashSet<Vec<Color>>,
}

impl ArrowGame {
    pub fn new(base: &Sft) -> Result<Self, ReductionError> {
        if base.dimension() != 1 {
            return Err(ReductionError::NotOneDimensional(base.dimension()));
        }
        let coding = ArrowCoding::new(base.alphabet().len());
        let alphabet = Alphabet::new(coding.names(base.alphabet()))?;
        let pad_radius = base
            .forbidden()
            .iter()
            .map(|f| {
                let (lo, hi) = f.extent_1d();
                let span = (hi - lo + 1) as u32;
                span.div_ceil(2)
            })
            .max()
            .unwrap_or(1)
            .max(1) as i32;
        let padded = pad_forbidden(base, pad_radius);
        Ok(ArrowGame {
            base: base.clone(),
            coding,
            alphabet,
            pad_radius,
            padded,
        })
    }

    pub fn base(&self) -> &Sft {
        &self.base
    }

    pub fn coding(&self) -> &ArrowCoding {
        &self.coding
    }

    /// Length of the derived forbidden windows, `2n + 3`.
    pub fn window_len(&self) -> usize {
        (2 * self.pad_radius + 3) as usize
    }

    pub fn pad_radius(&self) -> i32 {
        self.pad_radius
    }

    /// Membership test for the derived forbidden set on a fully coloured
    /// window of length [`Self::window_len`].
    pub fn window_forbidden(&self, window: &[Color]) -> bool {
        assert_eq!(window.len(), self.window_len());
        // Candidate sets for the inner cells, read off the window alone.
        let inner = self.window_len() - 2;
        let mut candidates: Vec<Vec<Color>> = vec![Vec::new(); inner];
        let pattern = Pattern::word_1d(0, window);
        let interp = interpret_arrow(&pattern, &self.coding);
        for (i, cand) in candidates.iter_mut().enumerate() {
            cand.extend(interp.at(&Cell::x(i as i32 + 1)));
        }
        // Every full interpretation must be a padded forbidden window;
        // an empty candidate set makes that vacuously true.
        let mut choice = vec![0usize; inner];
        loop {
            let word: Option<Vec<Color>> = candidates
                .iter()
                .zip(&choice)
                .map(|(c, &i)| c.get(i).copied())
                .collect();
            match word {
                None => return true, // some cell has no interpretation
                Some(w) => {
                    if !self.padded.contains(&w) {
                        return false;
                    }
                }
            }
            let mut axis = inner;
            loop {
                if axis == 0 {
                    return true;
                }
                axis -= 1;
                choice[axis] += 1;
                if choice[axis] < candidates[axis].len() {
                    break;
                }
                choice[axis] = 0;
            }
        }
    }

    /// Descriptor of the derived game in the SFT file format: the derived
    /// alphabet table plus the predicate parameters.
    pub fn to_doc(&self) -> crate::sft::SftDoc {
        crate::sft::SftDoc {
            dimension: 1,
            alphabet: self.alphabet.names().to_vec(),
            forbidden: Vec::new(),
            predicate: Some(crate::sft::PredicateDoc {
                name: "arrow".to_string(),
                window: self.window_len(),
                base: Box::new(self.base.to_doc()),
            }),
        }
    }

    pub fn from_doc(doc: &crate::sft::SftDoc) -> Result<Self, ReductionError> {
        let pred = doc
            .predicate
            .as_ref()
            .ok_or_else(|| ReductionError::Sft(SftError::Format("missing predicate".into())))?;
        if pred.name != "arrow" {
            return Err(ReductionError::Sft(SftError::Format(format!(
                "unknown predicate {:?}",
                pred.name
            ))));
        }
        let base = Sft::from_doc(&pred.base)?;
        let game = ArrowGame::new(&base)?;
        if game.window_len() != pred.window {
            return Err(ReductionError::Sft(SftError::Format(format!(
                "window {} does not match the construction (expected {})",
                pred.window,
                game.window_len()
            ))));
        }
        Ok(game)
    }
}

/// All full windows `[-n, n]` of the base alphabet containing a base
/// forbidden pattern, as words indexed from the window start.
fn pad_forbidden(base: &Sft, pad_radius: i32) -> HashSet<Vec<Color>> {
    let window = (2 * pad_radius + 1) as usize;
    let k = base.alphabet().len() as u16;
    let mut out = HashSet::new();
    let mut word = vec![Color(0); window];
    loop {
        let p = Pattern::word_1d(0, &word);
        if base.is_final(&p) {
            out.insert(word.clone());
        }
        let mut axis = window;
        loop {
            if axis == 0 {
                return out;
            }
            axis -= 1;
            if word[axis].0 + 1 < k {
                word[axis] = Color(word[axis].0 + 1);
                break;
            }
            word[axis] = Color(0);
        }
    }
}

impl Rulebook for ArrowGame {
    fn dimension(&self) -> usize {
        1
    }

    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn is_final(&self, p: &Pattern) -> bool {
        if p.is_empty() {
            return false;
        }
        let len = self.window_len();
        let (lo, hi) = p.extent_1d();
        for start in lo..=hi - len as i32 + 1 {
            if let Some(w) = p.window_word(start, len) {
                if self.window_forbidden(&w) {
                    return true;
                }
            }
        }
        false
    }

    fn final_after(&self, p: &Pattern, last: &Cell) -> bool {
        let len = self.window_len() as i32;
        for start in last.x0() - len + 1..=last.x0() {
            if let Some(w) = p.window_word(start, len as usize) {
                if self.window_forbidden(&w) {
                    return true;
                }
            }
        }
        false
    }

    fn forbidden_diameter(&self) -> u64 {
        self.window_len() as u64 - 1
    }

    fn forbidden_all_connected(&self) -> bool {
        true // forbidden windows are contiguous intervals
    }
}

/// A tile of a tuple alphabet `A^w + {black}` used by the voting
/// interpretations.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum VoteTile {
    Black,
    Word(Vec<Color>),
}

/// Vote aggregation: all colours reaching the threshold, or the single
/// majority colour with ties broken towards the lowest colour id.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum VoteMode {
    Set { threshold: usize },
    Majority,
}

/// Voting interpretation over a 1D pattern of tuple tiles: the tile at cell
/// `i + k` contributes component `k` of its tuple (components indexed
/// `-r ..= r` from the tuple centre) to the multiset of votes for cell `i`;
/// black tiles do not vote. A cell whose every neighbour in reach is black
/// (or absent) gets no interpretation.
pub fn interpret_vote(
    pattern: &BTreeMap<Cell, VoteTile>,
    radius: usize,
    mode: VoteMode,
) -> Result<Interpretation, ReductionError> {
    let width = 2 * radius + 1;
    for tile in pattern.values() {
        if let VoteTile::Word(w) = tile {
            if w.len() != width {
                return Err(ReductionError::TupleWidth {
                    got: w.len(),
                    want: width,
                });
            }
        }
    }
    let mut votes: BTreeMap<Cell, BTreeMap<Color, usize>> = BTreeMap::new();
    for (cell, tile) in pattern {
        let VoteTile::Word(w) = tile else { continue };
        for (idx, &color) in w.iter().enumerate() {
            // the tile at i+k votes for cell i with component k, so the
            // component at tuple offset k lands on the cell k to the left
            let k = idx as i32 - radius as i32;
            let target = Cell::x(cell.x0() - k);
            *votes.entry(target).or_default().entry(color).or_default() += 1;
        }
    }
    let mut out = Interpretation::default();
    for (cell, counts) in votes {
        match mode {
            VoteMode::Set { threshold } => {
                for (color, n) in counts {
                    if n >= threshold {
                        out.insert(cell.clone(), color);
                    }
                }
            }
            VoteMode::Majority => {
                // max count, ties towards the lowest colour id (BTreeMap
                // iterates ids ascending, strict > keeps the first maximum)
                let mut best: Option<(Color, usize)> = None;
                for (color, n) in counts {
                    if best.is_none_or(|(_, m)| n > m) {
                        best = Some((color, n));
                    }
                }
                if let Some((color, _)) = best {
                    out.insert(cell.clone(), color);
                }
            }
        }
    }
    Ok(out)
}

/// The two abstract marking games over `{a, b}`: windows of length 9 with at
/// least 5 a's, and windows of length 15 with at least 8 a's.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MarkingGame {
    F2,
    F3,
}

impl MarkingGame {
    pub fn window(self) -> usize {
        match self {
            MarkingGame::F2 => 9,
            MarkingGame::F3 => 15,
        }
    }

    pub fn threshold(self) -> usize {
        match self {
            MarkingGame::F2 => 5,
            MarkingGame::F3 => 8,
        }
    }

    /// Materialised SFT with every forbidden window listed.
    pub fn sft(self) -> Sft {
        let w = self.window();
        let theta = self.threshold();
        let mut words = Vec::new();
        for mask in 0u32..1 << w {
            if (mask.count_ones() as usize) >= theta {
                words.push(
                    (0..w)
                        .map(|i| Color((mask >> i & 1) as u16))
                        .collect::<Vec<_>>(),
                );
            }
        }
        // colour 1 is "a": count_ones counts a's
        Sft::from_words(Alphabet::new(["b", "a"]).unwrap(), &words).unwrap()
    }

    /// Window-counting rulebook equivalent to [`Self::sft`] but without
    /// materialising the forbidden set.
    pub fn rule(self) -> MarkingRule {
        MarkingRule {
            game: self,
            alphabet: Alphabet::new(["b", "a"]).unwrap(),
        }
    }
}

/// Counting form of a marking game: a position is final when some fully
/// coloured window of the game's length carries at least the threshold of
/// a-tiles (colour id 1).
pub struct MarkingRule {
    game: MarkingGame,
    alphabet: Alphabet,
}

impl MarkingRule {
    fn window_hot(&self, w: &[Color]) -> bool {
        w.iter().filter(|c| c.0 == 1).count() >= self.game.threshold()
    }
}

impl Rulebook for MarkingRule {
    fn dimension(&self) -> usize {
        1
    }

    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn is_final(&self, p: &Pattern) -> bool {
        if p.is_empty() {
            return false;
        }
        let len = self.game.window();
        let (lo, hi) = p.extent_1d();
        (lo..=hi - len as i32 + 1)
            .any(|s| p.window_word(s, len).is_some_and(|w| self.window_hot(&w)))
    }

    fn final_after(&self, p: &Pattern, last: &Cell) -> bool {
        let len = self.game.window() as i32;
        (last.x0() - len + 1..=last.x0())
            .any(|s| p.window_word(s, len as usize).is_some_and(|w| self.window_hot(&w)))
    }

    fn forbidden_diameter(&self) -> u64 {
        self.game.window() as u64 - 1
    }

    fn forbidden_all_connected(&self) -> bool {
        true
    }
}

/// Exact emptiness of a 1D SFT: build the de Bruijn graph on admissible
/// `(m-1)`-blocks (`m` the largest forbidden span) and look for a cycle. A
/// bi-infinite admissible configuration exists iff some cycle survives
/// iterated removal of sources and sinks.
pub fn domino_1d_empty(sft: &Sft) -> Result<bool, ReductionError> {
    if sft.dimension() != 1 {
        return Err(ReductionError::NotOneDimensional(sft.dimension()));
    }
    if sft.alphabet().is_empty() {
        return Ok(true);
    }
    let m = sft
        .forbidden()
        .iter()
        .map(|f| {
            let (lo, hi) = f.extent_1d();
            (hi - lo + 1) as usize
        })
        .max()
        .unwrap_or(1);
    let k = m - 1;

    // admissible k-blocks
    let blocks: Vec<Vec<Color>> = enumerate_words(sft.alphabet().len(), k)
        .into_iter()
        .filter(|w| !sft.is_final(&Pattern::word_1d(0, w)))
        .collect();
    if k == 0 {
        // edges are single letters; a cycle exists iff some letter is
        // admissible
        return Ok(!sft
            .alphabet()
            .colors()
            .any(|c| !sft.is_final(&Pattern::word_1d(0, &[c]))));
    }
    let index: BTreeMap<&Vec<Color>, usize> = blocks.iter().zip(0..).collect();
    let mut succs: Vec<Vec<usize>> = vec![Vec::new(); blocks.len()];
    for (i, b) in blocks.iter().enumerate() {
        for c in sft.alphabet().colors() {
            let mut ext = b.clone();
            ext.push(c);
            if sft.is_final(&Pattern::word_1d(0, &ext)) {
                continue;
            }
            let next: Vec<Color> = ext[1..].to_vec();
            if let Some(&j) = index.get(&next) {
                succs[i].push(j);
            }
        }
    }
    // iteratively strip nodes with no successors; a nonempty remainder
    // contains a cycle
    let mut alive = vec![true; blocks.len()];
    loop {
        let mut changed = false;
        for i in 0..blocks.len() {
            if alive[i] && !succs[i].iter().any(|&j| alive[j]) {
                alive[i] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    Ok(!alive.iter().any(|&a| a))
}

/// Smallest `m` such that every word of length `m` contains a forbidden
/// pattern; `None` when the SFT is nonempty (arbitrarily long admissible
/// words exist). Searched up to `cap`.
pub fn shortest_unavoidable_length(sft: &Sft, cap: usize) -> Option<usize> {
    for m in 1..=cap {
        let all_hit = enumerate_words(sft.alphabet().len(), m)
            .into_iter()
            .all(|w| sft.is_final(&Pattern::word_1d(0, &w)));
        if all_hit {
            return Some(m);
        }
    }
    None
}

fn enumerate_words(alphabet_len: usize, len: usize) -> Vec<Vec<Color>> {
    let mut out = Vec::new();
    let mut word = vec![Color(0); len];
    loop {
        out.push(word.clone());
        let mut axis = len;
        loop {
            if axis == 0 {
                return out;
            }
            axis -= 1;
            if word[axis].index() + 1 < alphabet_len {
                word[axis] = Color(word[axis].0 + 1);
                break;
            }
            word[axis] = Color(0);
        }
    }
}
