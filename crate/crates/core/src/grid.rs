//! Cells, colours and finite partial colourings of the grid `Z^d`.
//!
//! A [`Pattern`] is a sparse map from cells to colours. Supports are tiny and
//! scattered over the whole grid, so patterns are stored as sorted maps and
//! compared structurally. All values here are immutable once built and cheap
//! to clone.

use smallvec::SmallVec;
use std::collections::BTreeMap;
use std::fmt;

/// A grid cell: an integer vector of length `d >= 1`.
///
/// Ordering is lexicographic on the coordinates, which is the scan order used
/// everywhere a deterministic "first" cell is needed.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell(SmallVec<[i32; 2]>);

impl Cell {
    pub fn new(coords: &[i32]) -> Self {
        assert!(!coords.is_empty(), "cells live in dimension >= 1");
        Cell(SmallVec::from_slice(coords))
    }

    /// One-dimensional cell.
    pub fn x(v: i32) -> Self {
        Cell(SmallVec::from_slice(&[v]))
    }

    /// Two-dimensional cell.
    pub fn xy(x: i32, y: i32) -> Self {
        Cell(SmallVec::from_slice(&[x, y]))
    }

    /// Origin of `Z^d`.
    pub fn origin(dim: usize) -> Self {
        Cell(SmallVec::from_elem(0, dim))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i32] {
        &self.0
    }

    /// First coordinate; handy in the pervasive 1D case.
    pub fn x0(&self) -> i32 {
        self.0[0]
    }

    pub fn translated(&self, by: &Cell) -> Cell {
        debug_assert_eq!(self.dim(), by.dim());
        Cell(self.0.iter().zip(by.0.iter()).map(|(a, b)| a + b).collect())
    }

    pub fn minus(&self, other: &Cell) -> Cell {
        debug_assert_eq!(self.dim(), other.dim());
        Cell(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    /// L1 (taxicab) distance.
    pub fn l1(&self, other: &Cell) -> u64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (*a as i64 - *b as i64).unsigned_abs())
            .sum()
    }

    pub fn l1_norm(&self) -> u64 {
        self.0.iter().map(|a| (*a as i64).unsigned_abs()).sum()
    }

    /// The `2d` neighbours at L1 distance 1.
    pub fn neighbours(&self) -> Vec<Cell> {
        let mut out = Vec::with_capacity(2 * self.dim());
        for axis in 0..self.dim() {
            for delta in [-1i32, 1] {
                let mut c = self.0.clone();
                c[axis] += delta;
                out.push(Cell(c));
            }
        }
        out
    }
}

impl fmt::Debug for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Index into an alphabet's name table.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Color(pub u16);

impl Color {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Debug for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}", self.0)
    }
}

/// A finite partial colouring of `Z^d` cells.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Pattern {
    cells: BTreeMap<Cell, Color>,
}

impl Pattern {
    pub fn empty() -> Self {
        Pattern::default()
    }

    /// Builds a pattern from `(cell, color)` pairs. Panics on duplicate cells;
    /// construction sites always control their inputs.
    pub fn from_tiles<I: IntoIterator<Item = (Cell, Color)>>(tiles: I) -> Self {
        let mut p = Pattern::empty();
        for (cell, color) in tiles {
            let dup = p.cells.insert(cell, color);
            assert!(dup.is_none(), "duplicate cell in pattern");
        }
        p
    }

    /// 1D convenience: the word `colors` laid out left to right from `start`.
    pub fn word_1d(start: i32, colors: &[Color]) -> Self {
        Pattern::from_tiles(
            colors
                .iter()
                .enumerate()
                .map(|(i, &c)| (Cell::x(start + i as i32), c)),
        )
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn get(&self, cell: &Cell) -> Option<Color> {
        self.cells.get(cell).copied()
    }

    pub fn contains(&self, cell: &Cell) -> bool {
        self.cells.contains_key(cell)
    }

    /// Returns the extended pattern; `None` if the cell is already coloured.
    pub fn with_tile(&self, cell: Cell, color: Color) -> Option<Pattern> {
        if self.contains(&cell) {
            return None;
        }
        let mut next = self.clone();
        next.cells.insert(cell, color);
        Some(next)
    }

    /// In-place insert for construction loops. Panics if occupied.
    pub fn insert(&mut self, cell: Cell, color: Color) {
        let dup = self.cells.insert(cell, color);
        assert!(dup.is_none(), "cell already coloured");
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Cell, Color)> {
        self.cells.iter().map(|(c, col)| (c, *col))
    }

    pub fn support(&self) -> impl Iterator<Item = &Cell> {
        self.cells.keys()
    }

    /// Lexicographically smallest support cell.
    pub fn min_cell(&self) -> Option<&Cell> {
        self.cells.keys().next()
    }

    pub fn dim(&self) -> Option<usize> {
        self.cells.keys().next().map(|c| c.dim())
    }

    pub fn translated(&self, by: &Cell) -> Pattern {
        Pattern {
            cells: self
                .cells
                .iter()
                .map(|(c, col)| (c.translated(by), *col))
                .collect(),
        }
    }

    /// Translate so the lexicographically smallest support cell is the origin.
    pub fn normalised(&self) -> Pattern {
        match self.min_cell() {
            None => Pattern::empty(),
            Some(min) => {
                let shift = Cell::origin(min.dim()).minus(min);
                self.translated(&shift)
            }
        }
    }

    /// L1 distance from `cell` to the support; `None` on the empty pattern.
    pub fn l1_to_support(&self, cell: &Cell) -> Option<u64> {
        self.cells.keys().map(|c| c.l1(cell)).min()
    }

    /// Largest L1 norm over the support (0 for the empty pattern).
    pub fn max_l1_norm(&self) -> u64 {
        self.cells.keys().map(Cell::l1_norm).max().unwrap_or(0)
    }

    /// Does `sub` occur in `self` at translation `at`?
    pub fn matches_at(&self, sub: &Pattern, at: &Cell) -> bool {
        sub.iter()
            .all(|(c, col)| self.get(&c.translated(at)) == Some(col))
    }

    /// True when the support is connected under L1 adjacency.
    /// The empty pattern and singletons count as connected.
    pub fn is_connected(&self) -> bool {
        if self.len() <= 1 {
            return true;
        }
        let start = self.min_cell().unwrap().clone();
        let mut seen = std::collections::BTreeSet::new();
        let mut stack = vec![start.clone()];
        seen.insert(start);
        while let Some(c) = stack.pop() {
            for n in c.neighbours() {
                if self.contains(&n) && seen.insert(n.clone()) {
                    stack.push(n);
                }
            }
        }
        seen.len() == self.len()
    }

    /// 1D: the colours of the fully coloured window `[start, start+len)`,
    /// or `None` when any cell is uncoloured.
    pub fn window_word(&self, start: i32, len: usize) -> Option<Vec<Color>> {
        let mut out = Vec::with_capacity(len);
        for i in 0..len as i32 {
            out.push(self.get(&Cell::x(start + i))?);
        }
        Some(out)
    }

    /// 1D: start positions where `word` occurs fully coloured.
    pub fn occurrences_1d(&self, word: &[Color]) -> Vec<i32> {
        if word.is_empty() || self.is_empty() {
            return Vec::new();
        }
        let (lo, hi) = self.extent_1d();
        let mut out = Vec::new();
        for start in lo - word.len() as i32 + 1..=hi {
            if self
                .window_word(start, word.len())
                .is_some_and(|w| w == word)
            {
                out.push(start);
            }
        }
        out
    }

    /// 1D: smallest and largest coloured coordinate. Panics on empty.
    pub fn extent_1d(&self) -> (i32, i32) {
        let lo = self.cells.keys().next().unwrap().x0();
        let hi = self.cells.keys().next_back().unwrap().x0();
        (lo, hi)
    }
}

impl fmt::Debug for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (c, col)) in self.cells.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c:?}={col:?}")?;
        }
        write!(f, "}}")
    }
}
